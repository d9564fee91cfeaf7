from src.nevpick.interpolant import (
    Interpolant,
    PointwiseEqualizer,
    complete_interpolant,
    interpolant,
    pointwise_completion,
)
from src.nevpick.partial_fraction import PartialFraction
from src.nevpick.pick import CoefficientMatrix, PickProblem, build_pick, choose_tau, coefficient_matrix, pick_problem

__all__ = [
    "CoefficientMatrix",
    "Interpolant",
    "PartialFraction",
    "PickProblem",
    "PointwiseEqualizer",
    "build_pick",
    "choose_tau",
    "coefficient_matrix",
    "complete_interpolant",
    "interpolant",
    "pick_problem",
    "pointwise_completion",
]
