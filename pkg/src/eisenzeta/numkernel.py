"""Branch-exact complex conventions shared by every module.

Everything here is binary64.  Powers of multivalued quantities are always
taken through an explicit logarithm so the branch is never left to chance:
``q**x`` means ``e(x*z)``, cover points carry an unbounded argument, and the
two boundary branches of the lattice sums are selected by ``BranchSelector``.
"""

from __future__ import annotations

import cmath
import enum
import math
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi
# tolerances below this are not meaningful in double precision
MIN_TOL = 2.0 ** -50


class EisenzetaError(Exception):
    """Base class for every error raised by the package."""


class DomainError(EisenzetaError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class RegimeError(DomainError):
    """Input is valid mathematically but outside the regime an evaluator supports."""


class UnsupportedShapeError(EisenzetaError):
    """Parameter shape not covered by the evaluator (never a silent wrong number)."""


class ResonanceError(DomainError):
    """A geometric denominator is numerically zero."""


class BudgetError(EisenzetaError):
    """Tolerance not reached within the term budget; carries the best value."""

    def __init__(self, message: str, best: complex | None = None, error: float | None = None):
        super().__init__(message)
        self.best = best
        self.error = error


class BranchSelector(enum.Enum):
    PLUS = "plus"    # arguments in (-pi, pi]
    MINUS = "minus"  # arguments in [-pi, pi)

    @property
    def sign(self) -> int:
        return 1 if self is BranchSelector.PLUS else -1


PLUS = BranchSelector.PLUS
MINUS = BranchSelector.MINUS


@dataclass(frozen=True)
class Truncation:
    """Per-evaluation budget."""

    max_terms: int = 400_000
    tol: float = 1e-15
    contour_half_length: float = 40.0

    def __post_init__(self):
        if self.max_terms < 8:
            raise DomainError("max_terms must be >= 8")
        if not (self.tol >= MIN_TOL):
            raise DomainError(f"tol must be >= 2**-50, got {self.tol!r}")
        if not (self.contour_half_length > 0):
            raise DomainError("contour_half_length must be positive")


DEFAULT_TRUNCATION = Truncation()


@dataclass
class EvalResult:
    """A value with its a-posteriori truncation error estimate."""

    value: complex
    error: float = 0.0
    terms: int = 0
    notes: list[str] = field(default_factory=list)

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class CoverPoint:
    """A point of the universal cover of the punctured plane.

    ``argument`` is unbounded, so ``CoverPoint(1, 0)`` and
    ``CoverPoint(1, 2*pi)`` are different points with the same projection.
    """

    modulus: float
    argument: float
    # exact turn count argument/(2*pi) when known; 2*pi*k/(2*pi) != k in floats
    turns: float | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not (self.modulus > 0) or not math.isfinite(self.modulus):
            raise DomainError(f"cover point modulus must be positive, got {self.modulus!r}")
        if not math.isfinite(self.argument):
            raise DomainError("cover point argument must be finite")

    @classmethod
    def e_tilde(cls, kappa: float) -> CoverPoint:
        """The lift with ``log = 2*pi*i*kappa``."""
        kappa = float(kappa)
        return cls(1.0, TWO_PI * kappa, kappa)

    @classmethod
    def from_complex(cls, y: complex) -> CoverPoint:
        """Principal lift of a nonzero complex number."""
        y = complex(y)
        if y == 0:
            raise DomainError("zero has no lift to the cover")
        return cls(abs(y), cmath.phase(y))

    def log(self) -> complex:
        return complex(math.log(self.modulus), self.argument)

    def projection(self) -> complex:
        return cmath.exp(self.log())

    def inverse(self) -> CoverPoint:
        """The point 1~/Y: reciprocal modulus, negated argument."""
        turns = None if self.turns is None else -self.turns
        return CoverPoint(1.0 / self.modulus, -self.argument, turns)

    def is_one(self) -> bool:
        """True iff the projection is exactly 1 (modulus 1, argument in 2*pi*Z)."""
        if self.modulus != 1.0:
            return False
        turns = self.argument / TWO_PI if self.turns is None else self.turns
        return turns == math.floor(turns)


ONE_TILDE = CoverPoint(1.0, 0.0)


def e_of(s):
    """``exp(2*pi*i*s)``; works elementwise on arrays."""
    if isinstance(s, np.ndarray):
        return np.exp(2j * np.pi * s)
    return cmath.exp(2j * math.pi * s)


def frac_parts(x: float) -> tuple[float, float, bool]:
    """Return ``(<x>, <x>', x in Z)`` with ``<x>' = 1 - <-x>``."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("frac_parts needs a finite argument")
    fl = math.floor(x)
    frac = x - fl
    is_int = frac == 0.0
    if frac >= 1.0:  # x - floor(x) rounds up to 1 for tiny negative x
        frac = math.nextafter(1.0, 0.0)
    return frac, (1.0 if is_int else frac), is_int


def frac(x: float) -> float:
    return frac_parts(x)[0]


def frac_prime(x: float) -> float:
    return frac_parts(x)[1]


def is_integer(x: float) -> bool:
    x = float(x)
    return math.isfinite(x) and x == math.floor(x)


def delta(x: float) -> int:
    """Indicator of integrality (exact floating test)."""
    return 1 if is_integer(x) else 0


def kronecker(a: int, b: int) -> int:
    return 1 if a == b else 0


def sgn(x: float) -> int:
    # sgn(0) = 0 by convention
    return (x > 0) - (x < 0)


def cover_pow(y: CoverPoint, x: complex) -> complex:
    """``Y~**X = exp(X*(log|Y| + i*arg Y))``."""
    return cmath.exp(complex(x) * y.log())


def _branch_arg(base: complex, b: BranchSelector) -> float:
    if base.imag == 0.0 and base.real < 0.0:
        return math.pi if b is PLUS else -math.pi
    return cmath.phase(base)


def branch_log(base: complex, b: BranchSelector = PLUS) -> complex:
    base = complex(base)
    if base == 0:
        raise DomainError("logarithm of zero")
    return complex(math.log(abs(base)), _branch_arg(base, b))


def branch_pow(base: complex, s: complex, b: BranchSelector = PLUS) -> complex:
    """``base**s`` with arg in (-pi, pi] (plus) or [-pi, pi) (minus)."""
    return cmath.exp(complex(s) * branch_log(base, b))


def branch_log_array(base: np.ndarray, b: BranchSelector = PLUS) -> np.ndarray:
    base = np.asarray(base, dtype=complex)
    if np.any(base == 0):
        raise DomainError("logarithm of zero")
    arg = np.angle(base)
    neg_axis = (base.imag == 0.0) & (base.real < 0.0)
    arg = np.where(neg_axis, math.pi * b.sign, arg)
    return np.log(np.abs(base)) + 1j * arg


def tau_to_z(tau: complex) -> complex:
    tau = complex(tau)
    if not tau.real > 0:
        raise DomainError(f"tau must lie in the right half-plane, got {tau!r}")
    return 1j * tau


def z_to_tau(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"z must lie in the upper half-plane, got {z!r}")
    return -1j * z


def tau_z_convert(value: complex, direction: str) -> complex:
    if direction == "tau_to_z":
        return tau_to_z(value)
    if direction == "z_to_tau":
        return z_to_tau(value)
    raise DomainError(f"unknown direction {direction!r}")


def q_power(x, z: complex):
    """``q**x`` at ``q = e(z)``, defined as ``e(x*z)``."""
    return e_of(x * z)


def q_of(z: complex) -> complex:
    return e_of(z)


def qhat_of(z: complex) -> complex:
    return e_of(-1.0 / complex(z))


def eps_of(t: complex) -> int:
    """Sector sign of a complex number: sign(arg t), zero on the positive axis."""
    return sgn(cmath.phase(complex(t)))


def csum(values: Iterable[complex] | np.ndarray) -> complex:
    """Correctly rounded sum of complex values (separate ``fsum`` on each part)."""
    arr = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


class ComplexAccumulator:
    """Running compensated sum for series accumulated chunk by chunk."""

    __slots__ = ("_re", "_im")

    def __init__(self):
        self._re: list[float] = []
        self._im: list[float] = []

    def add(self, values) -> None:
        arr = np.asarray(values, dtype=complex).ravel()
        self._re.append(math.fsum(arr.real))
        self._im.append(math.fsum(arr.imag))
        if len(self._re) > 64:
            self._re = [math.fsum(self._re)]
            self._im = [math.fsum(self._im)]

    @property
    def value(self) -> complex:
        return complex(math.fsum(self._re), math.fsum(self._im))
