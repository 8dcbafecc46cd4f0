"""Twisted Lambert-type double series.

    S_r(g, d; k, l; q) = sum_{x = g+i > 0, y = d+j > 0} e(x k + y l) y**(-r) q**(x y)

Summing the geometric series in ``x`` leaves the single sum

    e(c k) sum_{y = b + n} e(y l) q**(c y) / (y**r (1 - e(k) q**y)),

``c = <g>'``, ``b = <d>'``.  All powers ``q**x`` mean ``e(x z)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numkernel import (
    DEFAULT_TRUNCATION,
    TWO_PI,
    BudgetError,
    ComplexAccumulator,
    DomainError,
    EvalResult,
    ResonanceError,
    Truncation,
    e_of,
    frac_prime,
)

RESONANCE_GUARD = 1e-14
_CHUNK = 64


@dataclass(frozen=True)
class SArgs:
    r: complex
    gamma: float
    delta: float
    kappa: float
    lam: float
    z: complex
    dual: bool = False

    def __post_init__(self):
        if not complex(self.z).imag > 0:
            raise DomainError("z must lie in the upper half-plane")

    @property
    def nome_z(self) -> complex:
        """The ``z`` whose ``e(z)`` is the nome actually used."""
        z = complex(self.z)
        return -1.0 / z if self.dual else z


_SPLIT = 2.0 ** 26


def _turns(b: float, n: np.ndarray, w: float) -> np.ndarray:
    """Fractional part of ``(b + n) * w`` for integral ``n``, without the
    rounding of the full product: ``n * w_hi`` is exact for ``n < 2**26``."""
    w_hi = round(w * _SPLIT) / _SPLIT
    head = n * w_hi
    head -= np.round(head)
    t = head + (n * (w - w_hi) + b * w)
    return t - np.round(t)


def _rows(a: SArgs, start: int, stop: int):
    """Single-sum terms for ``y = b + n``, ``start <= n < stop``."""
    r = complex(a.r)
    z = a.nome_z
    c = frac_prime(a.gamma)
    b = frac_prime(a.delta)
    n = np.arange(start, stop, dtype=float)
    y = b + n
    logy = np.log(y)
    qy = np.exp(-TWO_PI * y * z.imag + 1j * TWO_PI * _turns(b, n, z.real))
    den = 1.0 - e_of(a.kappa) * qy
    if np.any(np.abs(den) < RESONANCE_GUARD):
        raise ResonanceError("geometric denominator 1 - e(kappa) q**y vanishes numerically")
    turns = _turns(b, n, a.lam) + _turns(b, n, c * z.real)
    mod = -TWO_PI * c * y * z.imag - r.real * logy
    return np.exp(mod + 1j * (TWO_PI * turns - r.imag * logy)) / den


def s_tail_bound(a: SArgs, L: int) -> float:
    """Upper bound for the modulus of the terms ``n >= L`` of the single sum."""
    z = a.nome_z
    sigma = complex(a.r).real
    c = frac_prime(a.gamma)
    b = frac_prime(a.delta)
    yL = b + L
    absq = math.exp(-TWO_PI * z.imag)
    log_rho = -TWO_PI * c * z.imag
    # ratio of consecutive y**(-sigma) factors is at most ((yL+1)/yL)**max(-sigma, 0)
    log_theta = max(-sigma, 0.0) * math.log1p(1.0 / yL) + log_rho
    if log_theta >= 0:
        return math.inf
    qy = absq ** yL
    if qy >= 1:
        return math.inf
    log_first = -sigma * math.log(yL) + yL * log_rho - math.log1p(-qy)
    if log_first < -745:
        return 0.0
    return math.exp(log_first) / -math.expm1(log_theta)


def s_eval(a: SArgs, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """Single-sum evaluation with a proven truncation bound.

    The reported error adds a rounding floor proportional to the sum of the
    term moduli, which dominates when large terms cancel.
    """
    c = frac_prime(a.gamma)
    acc = ComplexAccumulator()
    mass = 0.0
    n = 0
    while True:
        if n >= t.max_terms:
            bound = s_tail_bound(a, n)
            raise BudgetError("q-series budget exhausted", e_of(c * a.kappa) * acc.value, bound)
        stop = min(n + _CHUNK, t.max_terms)
        rows = _rows(a, n, stop)
        acc.add(rows)
        mass += float(np.abs(rows).sum())
        n = stop
        bound = s_tail_bound(a, n)
        if bound <= t.tol * abs(acc.value) or bound == 0.0:
            break
    return EvalResult(e_of(c * a.kappa) * acc.value, bound + 4e-16 * mass, n, ["single-sum"])


def s_value(r, gamma, delta, kappa, lam, z, dual=False, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    return s_eval(SArgs(complex(r), gamma, delta, kappa, lam, complex(z), dual), t).value


def s_eval_double(a: SArgs, t: Truncation = DEFAULT_TRUNCATION, cutoff: float = 80.0) -> EvalResult:
    """Brute double sum over both indices, each row cut where ``|q|**(x y)`` < ``exp(-cutoff)``."""
    r = complex(a.r)
    z = a.nome_z
    c = frac_prime(a.gamma)
    b = frac_prime(a.delta)
    s_im = TWO_PI * z.imag
    acc = ComplexAccumulator()
    n = 0
    terms = 0
    while True:
        y = b + n
        if c * y * s_im > cutoff and n > 0:
            break
        kmax = int(math.ceil(cutoff / (y * s_im) - c)) + 1
        if terms + kmax > 50 * t.max_terms:
            raise BudgetError("double sum too large for the budget")
        x = c + np.arange(kmax, dtype=float)
        row = np.exp(2j * np.pi * (x * a.kappa + y * a.lam + x * y * z) - r * np.log(y))
        acc.add(row)
        terms += kmax
        n += 1
    return EvalResult(acc.value, math.exp(-cutoff), terms, ["double-sum"])
