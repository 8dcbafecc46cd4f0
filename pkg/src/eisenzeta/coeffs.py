"""Twisted Bernoulli coefficients by formal power-series division.

``C_k(X, Y)`` are defined by

    Z * Y**X * exp(X*Z) / (Y1 * exp(Z) - 1) = sum_k C_k(X, Y) Z**k / k!

with ``Y`` a cover point and ``Y1`` its projection.  ``A_k(Y) = C_k(0, Y)``
and ``B_k(X) = C_k(X, 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .numkernel import ONE_TILDE, CoverPoint, DomainError, cover_pow

MAX_ORDER = 64
# projections closer than this to 1 (but not equal) make D_0 tiny
NEAR_RESONANCE = 1e-13
# closer than this, 1/(Y - 1) overflows in the recursion
UNDERFLOW_GAP = 1e-150


@dataclass(frozen=True)
class CoeffTable:
    """``C_0 .. C_K`` for fixed ``(X, Y)``."""

    entries: tuple[complex, ...]
    X: complex
    Y: CoverPoint
    K: int
    ill_conditioned: bool = False
    notes: tuple[str, ...] = field(default=())

    def __getitem__(self, k: int) -> complex:
        return self.entries[k]

    def __len__(self) -> int:
        return len(self.entries)


def _check_order(K: int) -> int:
    K = int(K)
    if K < 0:
        raise DomainError("coefficient order must be non-negative")
    if K > MAX_ORDER:
        raise DomainError(f"coefficient order above {MAX_ORDER} exceeds double precision budget")
    return K


def _taylor(X: complex, Y: CoverPoint, K: int) -> tuple[list[complex], bool]:
    """Taylor coefficients ``c_k = C_k / k!``."""
    amp = cover_pow(Y, X)
    if Y.is_one():
        # e^Z - 1 = Z * sum Z^k/(k+1)!, cancel the Z against the numerator
        num = [amp * X**k / math.factorial(k) for k in range(K + 1)]
        den = [1.0 / math.factorial(k + 1) for k in range(K + 1)]
        c: list[complex] = []
        for k in range(K + 1):
            acc = num[k] - sum(den[j] * c[k - j] for j in range(1, k + 1))
            c.append(acc)
        return c, False
    y1 = Y.projection()
    d0 = y1 - 1.0
    ill = abs(d0) < NEAR_RESONANCE
    if abs(d0) < UNDERFLOW_GAP:
        # projection (nearly) rounds to 1 although the cover point is not a lift of 1
        raise DomainError("projection of Y is numerically 1 but Y is not exactly 1")
    num = [0j] + [amp * X ** (k - 1) / math.factorial(k - 1) for k in range(1, K + 1)]
    c = []
    for k in range(K + 1):
        acc = num[k] - sum(y1 / math.factorial(j) * c[k - j] for j in range(1, k + 1))
        c.append(acc / d0)
    return c, ill


def coeff_C(K: int, X: complex, Y: CoverPoint) -> CoeffTable:
    """Table of ``C_0 .. C_K`` at ``(X, Y)``."""
    K = _check_order(K)
    X = complex(X)
    c, ill = _taylor(X, Y, K)
    entries = tuple(complex(ck * math.factorial(k)) for k, ck in enumerate(c))
    notes = ("projection of Y within 1e-13 of 1; coefficients ill-conditioned",) if ill else ()
    return CoeffTable(entries, X, Y, K, ill, notes)


def coeff_A(K: int, Y: complex) -> tuple[complex, ...]:
    """``A_0 .. A_K`` for ``Z/(Y e^Z - 1)``; ``Y = 1`` gives Bernoulli numbers."""
    Y = complex(Y)
    if Y == 1:
        lift = ONE_TILDE
    else:
        lift = CoverPoint.from_complex(Y)
    return coeff_C(K, 0.0, lift).entries


@lru_cache(maxsize=None)
def bernoulli_fractions(K: int) -> tuple[Fraction, ...]:
    """Exact ``B_0 .. B_K`` (convention ``B_1 = -1/2``)."""
    K = _check_order(K)
    B = [Fraction(1)]
    for k in range(1, K + 1):
        B.append(-sum(math.comb(k + 1, j) * B[j] for j in range(k)) / (k + 1))
    return tuple(B)


def bernoulli_numbers(K: int) -> tuple[float, ...]:
    return tuple(float(b) for b in bernoulli_fractions(K))


def bernoulli_poly(k: int, X: complex) -> complex:
    """``B_k(X) = sum_j binom(k, j) B_j X**(k-j)``."""
    B = bernoulli_fractions(k)
    X = complex(X)
    return sum(math.comb(k, j) * float(B[j]) * X ** (k - j) for j in range(k + 1))


def bernoulli(K: int):
    """Numbers ``B_0 .. B_K`` and an evaluator for the polynomials."""
    return bernoulli_numbers(K), bernoulli_poly
