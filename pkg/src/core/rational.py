"""
Rational-function and transfer-matrix algebra over complex coefficients.

Every frequency-domain object in the toolkit (channel blocks, spectral factors,
equalizer blocks, all-pass factors) is a ``RationalFunction`` or a small
``TransferMatrix`` of them. Objects are immutable; arithmetic returns new
objects in normalized form (monic denominator, common roots cancelled).

Coefficients are stored in ascending degree, matching
``numpy.polynomial.polynomial``.
"""

import logging
from dataclasses import dataclass, field
from numbers import Number
from typing import Iterable, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize_scalar

from src.core.config import get_tolerances
from src.core.errors import DegreeLimitExceeded, PoleHit, SingularMatrix, UnstableInput
from src.core.grid import FrequencyGrid, hinf_grid

logger = logging.getLogger(__name__)

MAX_DEGREE = 16

# fixed off-axis sample points used for pointwise identity checks
_PROBE_POINTS = np.array([0.31 + 0.7j, -0.45 + 1.9j, 1.3 - 2.2j, 0.05 - 0.4j, 2.7 + 5.1j])


def _as_coefficients(values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=complex))
    if arr.ndim != 1:
        raise ValueError("Polynomial coefficients must form a 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Polynomial coefficients must be finite")
    return arr


def _trim(arr: np.ndarray, rtol: float) -> np.ndarray:
    scale = np.max(np.abs(arr))
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(arr) > rtol * scale)[0]
    return arr[: keep[-1] + 1]


@dataclass(frozen=True)
class Polynomial:
    """
    Polynomial with complex coefficients in ascending degree.

    Attributes:
        coeffs: c_0, c_1, ..., c_n with c_n != 0 unless the polynomial is zero

    Example:
        >>> p = Polynomial((2.0, 1.0))   # s + 2
        >>> p(1j)
        (2+1j)
    """

    coeffs: tuple[complex, ...] = (0j,)

    def __post_init__(self) -> None:
        arr = _trim(_as_coefficients(self.coeffs), get_tolerances().trim_rtol)
        if arr.size - 1 > MAX_DEGREE:
            raise DegreeLimitExceeded(
                f"Polynomial degree {arr.size - 1} exceeds the cap of {MAX_DEGREE}",
                degree=arr.size - 1,
            )
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in arr))

    @classmethod
    def constant(cls, value: complex) -> "Polynomial":
        return cls((complex(value),))

    @classmethod
    def linear(cls, shift: complex, slope: complex = 1.0) -> "Polynomial":
        """slope * s + shift"""
        return cls((complex(shift), complex(slope)))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "Polynomial":
        roots = np.asarray(list(roots), dtype=complex)
        if roots.size == 0:
            return cls.constant(lead)
        return cls(tuple(npoly.polyfromroots(roots) * lead))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return self.coeffs[-1]

    def __call__(self, s):
        return npoly.polyval(np.asarray(s, dtype=complex), self.array)

    def roots(self) -> np.ndarray:
        """Roots via companion-matrix eigenvalues."""
        if self.degree < 1:
            return np.empty(0, dtype=complex)
        return np.asarray(npoly.polyroots(self.array), dtype=complex)

    def __add__(self, other) -> "Polynomial":
        other = _as_polynomial(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(tuple(npoly.polyadd(self.array, other.array)))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-self.array))

    def __sub__(self, other) -> "Polynomial":
        other = _as_polynomial(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(tuple(npoly.polysub(self.array, other.array)))

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        other = _as_polynomial(other)
        if other is NotImplemented:
            return NotImplemented
        return Polynomial(tuple(npoly.polymul(self.array, other.array)))

    __rmul__ = __mul__

    def para_conjugate(self) -> "Polynomial":
        """p^H(s) = conj(p(-conj(s)))"""
        signs = (-1.0) ** np.arange(len(self.coeffs))
        return Polynomial(tuple(np.conj(self.array) * signs))

    def shift(self, tau: complex) -> "Polynomial":
        """p(s + tau) by Horner composition."""
        result = np.zeros(1, dtype=complex)
        for c in self.array[::-1]:
            result = npoly.polyadd(npoly.polymul(result, [tau, 1.0]), [c])
        return Polynomial(tuple(result))

    def on_axis(self) -> np.ndarray:
        """Coefficients in omega of p(i*omega)."""
        return self.array * (1j ** np.arange(len(self.coeffs)))


def _as_polynomial(value) -> "Polynomial":
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, Number):
        return Polynomial.constant(complex(value))
    return NotImplemented


def _cancel_common_roots(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if num.is_zero:
        return Polynomial.constant(0.0), Polynomial.constant(1.0)
    if num.degree >= 1 and den.degree >= 1:
        tol = get_tolerances().cancel_tol
        zeros = list(num.roots())
        kept_poles = []
        cancelled = 0
        for pole in den.roots():
            if zeros:
                distance = np.abs(np.asarray(zeros) - pole)
                j = int(np.argmin(distance))
                if distance[j] <= tol:
                    zeros.pop(j)
                    cancelled += 1
                    continue
            kept_poles.append(pole)
        if cancelled:
            logger.debug("Cancelled %d common root(s)", cancelled)
            gain = num.lead / den.lead
            return Polynomial.from_roots(zeros, gain), Polynomial.from_roots(kept_poles)
    lead = den.lead
    return num * (1.0 / lead), den * (1.0 / lead)


@dataclass(frozen=True)
class RationalFunction:
    """
    Scalar rational function num(s)/den(s) in normalized form.

    The denominator is monic and numerator/denominator roots closer than the
    configured cancellation tolerance are removed.

    Example:
        >>> f = RationalFunction.first_order(1.0, -5 + 10j, 5 + 10j)
        >>> f(0.0)
        (0.6+0.8j)
    """

    num: Polynomial
    den: Polynomial = field(default_factory=lambda: Polynomial.constant(1.0))

    def __post_init__(self) -> None:
        num = self.num if isinstance(self.num, Polynomial) else Polynomial(tuple(np.atleast_1d(self.num)))
        den = self.den if isinstance(self.den, Polynomial) else Polynomial(tuple(np.atleast_1d(self.den)))
        if den.is_zero:
            raise SingularMatrix("Denominator is identically zero")
        num, den = _cancel_common_roots(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    # --- constructors ---

    @classmethod
    def constant(cls, value: complex) -> "RationalFunction":
        return cls(Polynomial.constant(value))

    @classmethod
    def first_order(cls, gain: complex, zero_shift: complex, pole_shift: complex) -> "RationalFunction":
        """gain * (s + zero_shift) / (s + pole_shift)"""
        return cls(Polynomial.linear(zero_shift) * gain, Polynomial.linear(pole_shift))

    @classmethod
    def from_zpk(cls, zeros: Iterable[complex], poles: Iterable[complex], gain: complex) -> "RationalFunction":
        return cls(Polynomial.from_roots(zeros, gain), Polynomial.from_roots(poles))

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(Polynomial((0.0, 1.0)))

    # --- structure ---

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    @property
    def constant_value(self) -> complex:
        if not self.is_constant:
            raise ValueError("Rational function is not constant")
        return self.num.coeffs[0] / self.den.coeffs[0]

    def is_proper(self) -> bool:
        return self.num.degree <= self.den.degree

    def value_at_infinity(self) -> complex:
        if not self.is_proper():
            raise ValueError("Improper rational function is unbounded at infinity")
        if self.num.degree < self.den.degree:
            return 0j
        return self.num.lead / self.den.lead

    def poles(self) -> np.ndarray:
        return self.den.roots()

    def zeros(self) -> np.ndarray:
        return self.num.roots()

    def is_stable(self) -> bool:
        """All poles strictly in the open left half-plane."""
        poles = self.poles()
        return bool(np.all(poles.real < 0.0)) if poles.size else True

    def analytic_margin(self) -> float:
        """Largest tau with f analytic on Re s > -tau (+inf without poles)."""
        poles = self.poles()
        if poles.size == 0:
            return float("inf")
        return float(-np.max(poles.real))

    # --- evaluation ---

    def __call__(self, s):
        points = np.asarray(s, dtype=complex)
        den = self.den(points)
        if np.any(np.abs(den) < get_tolerances().pole_tol):
            raise PoleHit("Evaluation point coincides with a pole", s=complex(np.ravel(points)[np.argmin(np.abs(den))]))
        value = self.num(points) / den
        return complex(value) if np.ndim(value) == 0 else value

    eval = __call__

    def freqresp(self, omegas) -> np.ndarray:
        """Values f(i*omega) for an array of real frequencies."""
        return np.atleast_1d(self(1j * np.asarray(omegas, dtype=float)))

    # --- algebra ---

    def __add__(self, other) -> "RationalFunction":
        other = as_rational(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        other = as_rational(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        other = as_rational(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero:
            raise SingularMatrix("Cannot invert an identically zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other) -> "RationalFunction":
        other = as_rational(other, strict=False)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "RationalFunction":
        return as_rational(other) * self.inverse()

    def para_conjugate(self) -> "RationalFunction":
        """f^H(s) = conj(f(-conj(s))); equals conj(f(i*omega)) on the axis."""
        return RationalFunction(self.num.para_conjugate(), self.den.para_conjugate())

    def shift(self, tau: complex) -> "RationalFunction":
        """The function s -> f(s + tau)."""
        return RationalFunction(self.num.shift(tau), self.den.shift(tau))

    def is_para_hermitian(self, rtol: float = 1e-9) -> bool:
        mirror = self.para_conjugate()
        try:
            a = self(_PROBE_POINTS)
            b = mirror(_PROBE_POINTS)
        except PoleHit:
            return False
        return bool(np.all(np.abs(a - b) <= rtol * (1.0 + np.abs(a))))

    def coefficient_pairs(self) -> tuple[list[complex], list[complex]]:
        return list(self.num.coeffs), list(self.den.coeffs)


Scalar = Union[RationalFunction, complex, float, int]


def as_rational(value, strict: bool = True) -> RationalFunction:
    """
    Coerce numbers to constant rational functions.

    Args:
        value: RationalFunction or number
        strict: Raise TypeError for unsupported values instead of returning
            NotImplemented (operator overloads pass False)
    """
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Number):
        return RationalFunction.constant(complex(value))
    if strict:
        raise TypeError(f"Cannot interpret {type(value).__name__} as a rational function")
    return NotImplemented


@dataclass(frozen=True)
class TransferMatrix:
    """
    Small matrix of rational functions stored row-major.

    Example:
        >>> swap = TransferMatrix.from_rows([[0, 1], [1, 0]])
        >>> (swap @ swap)(1j)
        array([[1.+0.j, 0.+0.j],
               [0.+0.j, 1.+0.j]])
    """

    rows: int
    cols: int
    entries: tuple[RationalFunction, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("TransferMatrix dimensions must be positive")
        entries = tuple(as_rational(e) for e in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(
                f"Expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]]) -> "TransferMatrix":
        n_cols = len(rows[0])
        if any(len(r) != n_cols for r in rows):
            raise ValueError("All rows must have the same length")
        return cls(len(rows), n_cols, tuple(e for r in rows for e in r))

    @classmethod
    def identity(cls, n: int) -> "TransferMatrix":
        return cls.from_rows([[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)])

    def __getitem__(self, index: tuple[int, int]) -> RationalFunction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[RationalFunction]:
        return [self[i, j] for j in range(self.cols)]

    def __call__(self, s) -> np.ndarray:
        return np.array([[complex(self[i, j](s)) for j in range(self.cols)] for i in range(self.rows)])

    def freqresp(self, omegas) -> np.ndarray:
        """Array of shape (len(omegas), rows, cols)."""
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        out = np.empty((omegas.size, self.rows, self.cols), dtype=complex)
        for i in range(self.rows):
            for j in range(self.cols):
                out[:, i, j] = self[i, j].freqresp(omegas)
        return out

    def _check_same_shape(self, other: "TransferMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("TransferMatrix shapes do not match")

    def __add__(self, other: "TransferMatrix") -> "TransferMatrix":
        self._check_same_shape(other)
        return TransferMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "TransferMatrix") -> "TransferMatrix":
        self._check_same_shape(other)
        return TransferMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "TransferMatrix":
        return TransferMatrix(self.rows, self.cols, tuple(-e for e in self.entries))

    def scale(self, factor: Scalar) -> "TransferMatrix":
        return TransferMatrix(self.rows, self.cols, tuple(e * factor for e in self.entries))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if self.cols != other.rows:
            raise ValueError("Inner dimensions do not match")
        entries = []
        for i in range(self.rows):
            for j in range(other.cols):
                total = RationalFunction.constant(0.0)
                for k in range(self.cols):
                    total = total + self[i, k] * other[k, j]
                entries.append(total)
        return TransferMatrix(self.rows, other.cols, tuple(entries))

    def para_conjugate(self) -> "TransferMatrix":
        return TransferMatrix(
            self.cols,
            self.rows,
            tuple(self[i, j].para_conjugate() for j in range(self.cols) for i in range(self.rows)),
        )

    def det(self) -> RationalFunction:
        if self.rows != self.cols or self.rows > 2:
            raise ValueError("Determinant is implemented for 1x1 and 2x2 matrices")
        if self.rows == 1:
            return self[0, 0]
        return self[0, 0] * self[1, 1] - self[0, 1] * self[1, 0]

    def inverse(self) -> "TransferMatrix":
        det = self.det()
        if det.is_zero:
            raise SingularMatrix("Determinant is identically zero")
        inv_det = det.inverse()
        if self.rows == 1:
            return TransferMatrix(1, 1, (inv_det,))
        return TransferMatrix.from_rows(
            [
                [self[1, 1] * inv_det, -self[0, 1] * inv_det],
                [-self[1, 0] * inv_det, self[0, 0] * inv_det],
            ]
        )

    def poles(self) -> np.ndarray:
        parts = [e.poles() for e in self.entries]
        return np.concatenate(parts) if parts else np.empty(0, dtype=complex)

    def is_stable(self) -> bool:
        return all(e.is_stable() for e in self.entries)

    def value_at_infinity(self) -> np.ndarray:
        return np.array([[self[i, j].value_at_infinity() for j in range(self.cols)] for i in range(self.rows)])


def _gain(f: Union[RationalFunction, TransferMatrix], omegas: np.ndarray) -> np.ndarray:
    if isinstance(f, TransferMatrix):
        return np.linalg.svd(f.freqresp(omegas), compute_uv=False)[:, 0]
    return np.abs(f.freqresp(omegas))


def _gain_at_infinity(f: Union[RationalFunction, TransferMatrix]) -> float:
    try:
        if isinstance(f, TransferMatrix):
            return float(np.linalg.svd(f.value_at_infinity(), compute_uv=False)[0])
        return float(abs(f.value_at_infinity()))
    except ValueError:
        return float("inf")


def hinf_norm(f: Union[RationalFunction, TransferMatrix], grid: FrequencyGrid | None = None) -> float:
    """
    Estimate the H-infinity norm of a stable function.

    The largest singular value is sampled on a dense logarithmic grid, the
    best sample is refined by bounded scalar maximization between its grid
    neighbours, and the limit at infinity is included. The result is a lower
    bound on the true supremum up to grid resolution.

    Args:
        f: Stable rational function or transfer matrix
        grid: Frequency grid; defaults to the configured dense grid

    Returns:
        float: Estimated sup over omega of sigma_max(f(i*omega))

    Raises:
        UnstableInput: If f has a pole in the closed right half-plane
    """
    if not f.is_stable():
        raise UnstableInput("H-infinity norm requested of an unstable function")
    omegas = (grid or hinf_grid()).omegas
    values = _gain(f, omegas)
    index = int(np.argmax(values))
    best = float(values[index])
    if omegas.size > 1:
        lo = omegas[max(index - 1, 0)]
        hi = omegas[min(index + 1, omegas.size - 1)]
        result = minimize_scalar(
            lambda w: -float(_gain(f, np.array([w]))[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10 * max(1.0, abs(hi))},
        )
        best = max(best, -float(result.fun))
    return max(best, _gain_at_infinity(f))
