from src.core.grid import node_grid_21
from src.sdp.matrix import MatrixNodeOptimum, per_frequency_optimum_matrix
from src.sdp.relaxation import GridSolution, NodeOptimum, grid_solve, kkt_multiplier, per_frequency_optimum

__all__ = [
    "GridSolution",
    "MatrixNodeOptimum",
    "NodeOptimum",
    "grid_solve",
    "kkt_multiplier",
    "node_grid_21",
    "per_frequency_optimum",
    "per_frequency_optimum_matrix",
]
