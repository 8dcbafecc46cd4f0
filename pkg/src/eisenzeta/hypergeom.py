"""Confluent hypergeometric functions in the shapes the remainder formulas use.

Supported ``U(a; c; Z)`` shapes:

* ``a == 0``: identically 1.
* ``c == a + 1``: ``Z**(-a)``.
* ``c == a``: ``exp(Z) * Gamma(1 - a, Z)``, from the reduction
  ``U(a; a; Z) = Z**(1-a) U(1; 2-a; Z)`` and ``U(1; b; Z) = exp(Z) Z**(1-b) Gamma(b-1, Z)``.
* anything else with ``Re a > 0`` and ``|arg Z| < pi``: quadrature of the
  Laplace integral along the ray on which ``Z*w`` is positive (oracle).
"""

from __future__ import annotations

import cmath
import math
import warnings

import numpy as np
from scipy import integrate, special

from .lerch import gamma_fn, log_gamma, reciprocal_gamma
from .numkernel import (
    DEFAULT_TRUNCATION,
    BudgetError,
    DomainError,
    EvalResult,
    RegimeError,
    Truncation,
    UnsupportedShapeError,
    csum,
    eps_of,
)

_TINY = 1e-300


def _nonpos_int(x: complex) -> int | None:
    x = complex(x)
    if x.imag == 0 and x.real <= 0 and x.real == math.floor(x.real):
        return int(-x.real)
    return None


def _check_sector(Z: complex) -> None:
    if Z == 0:
        raise DomainError("Z must be nonzero")
    if Z.imag == 0 and Z.real < 0:
        raise DomainError("Z on the branch cut (negative real axis)")


def _gamma_cf(b: complex, Z: complex, t: Truncation) -> tuple[complex, int]:
    """Legendre continued fraction ``h`` with ``Gamma(b, Z) = exp(-Z) Z**b h``."""
    max_it = min(t.max_terms, 200_000)
    bn = Z + 1 - b
    c = 1 / _TINY
    d = 1 / bn if bn != 0 else 1 / _TINY
    h = d
    for i in range(1, max_it):
        an = -i * (i - b)
        bn += 2
        d = an * d + bn
        if d == 0:
            d = _TINY
        c = bn + an / c
        if c == 0:
            c = _TINY
        d = 1 / d
        step = d * c
        h *= step
        if abs(step - 1) < max(t.tol, 1e-16):
            return h, i
    raise BudgetError("incomplete gamma continued fraction did not converge", None, None)


def _lower_gamma_series(b: complex, Z: complex, t: Truncation, start: int = 0) -> tuple[complex, int]:
    """``Z**(-b) gamma(b, Z) = sum (-Z)**n / (n! (b+n))``, from ``n = start``."""
    terms = []
    term = 1 + 0j
    for n in range(t.max_terms):
        if n > 0:
            term *= -Z / n
        if n < start:
            continue
        if b + n == 0:
            raise DomainError("series hits b + n = 0")
        terms.append(term / (b + n))
        if n > abs(Z) and abs(term) < 1e-17 * max(abs(terms[0]), _TINY):
            return csum(terms), n
    raise BudgetError("lower incomplete gamma series did not converge")


def _gamma_nonpos_int(h: int, Z: complex) -> complex:
    """``Gamma(-h, Z)`` by downward recurrence from ``E_1``."""
    g = complex(special.exp1(Z))
    for k in range(1, h + 1):
        g = (g - cmath.exp(-k * cmath.log(Z) - Z)) / -k
    return g


def _log_gamma_1p_over_b(b: complex) -> complex:
    """``log Gamma(1 + b) / b`` for ``|b| <= 1/2``, finite at ``b = 0``."""
    acc = complex(-np.euler_gamma)
    power = -1 + 0j  # (-b)**k / b
    for k in range(2, 120):
        power *= -b
        term = float(special.zeta(k)) * power / k
        acc += term
        if abs(term) < 1e-18 * abs(acc):
            break
    return acc


def _expm1_ratio(x: complex) -> complex:
    """``expm1(x) / x`` with the removable point at 0."""
    if abs(x) < 1e-8:
        return 1 + x / 2
    return _expm1(x) / x


def _gamma_near_nonpos(a: complex, Z: complex, t: Truncation) -> tuple[complex, int]:
    """``Gamma(a, Z)`` for ``|Z| < 1`` and ``a`` within 1/2 of ``-k``, ``k >= 0``.

    ``Gamma(b) - Z**b / b`` is formed from ``expm1(x) / x`` factors so nothing
    of size ``1/b`` cancels, even for denormal ``b``; then recur down from
    ``b = a + k``.
    """
    k = max(0, round(-a.real))
    b = a + k
    logz = cmath.log(Z)
    lg = _log_gamma_1p_over_b(b)
    head = lg * _expm1_ratio(b * lg) - logz * _expm1_ratio(b * logz)
    rest, n = _lower_gamma_series(b, Z, t, start=1)
    g = head - cmath.exp(b * logz) * rest
    for j in range(1, k + 1):
        c = b - j
        g = (g - cmath.exp(c * logz - Z)) / c
    return g, n + k


def _expm1(w: complex) -> complex:
    if w.imag == 0:
        return complex(math.expm1(w.real))
    # expm1(x + iy) = expm1(x) cos y - 2 sin^2(y/2) + i e^x sin y
    x, y = w.real, w.imag
    return complex(math.expm1(x) * math.cos(y) - 2 * math.sin(y / 2) ** 2, math.exp(x) * math.sin(y))


def upper_incomplete_gamma(a: complex, Z: complex, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """``Gamma(a, Z) = int_Z^inf t**(a-1) exp(-t) dt`` for ``|arg Z| < pi``."""
    a, Z = complex(a), complex(Z)
    _check_sector(Z)
    if abs(Z) >= max(1.0, abs(a)):
        h, n = _gamma_cf(a, Z, t)
        return EvalResult(cmath.exp(a * cmath.log(Z) - Z) * h, abs(h) * t.tol, n, ["continued-fraction"])
    k = _nonpos_int(a)
    if k is not None:
        return EvalResult(_gamma_nonpos_int(k, Z), 0.0, k, ["exp1-recurrence"])
    if a.real < 0.5 and abs(a + max(0, round(-a.real))) <= 0.5:
        g, n = _gamma_near_nonpos(a, Z, t)
        return EvalResult(g, 1e-16 * abs(g), n, ["small-order-series"])
    s, n = _lower_gamma_series(a, Z, t)
    lower = cmath.exp(a * cmath.log(Z)) * s
    return EvalResult(gamma_fn(a) - lower, 1e-16 * abs(lower), n, ["series"])


def u_aa(a: complex, Z: complex, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """``U(a; a; Z) = exp(Z) Gamma(1 - a, Z)`` without overflow."""
    a, Z = complex(a), complex(Z)
    _check_sector(Z)
    if a == 0:
        return EvalResult(1 + 0j, 0.0, 0, ["trivial"])
    b = 1 - a
    if abs(Z) >= max(1.0, abs(b)):
        h, n = _gamma_cf(b, Z, t)
        val = cmath.exp(b * cmath.log(Z)) * h
        return EvalResult(val, abs(val) * t.tol, n, ["continued-fraction"])
    res = upper_incomplete_gamma(b, Z, t)
    return EvalResult(cmath.exp(Z) * res.value, abs(cmath.exp(Z)) * res.error, res.terms, res.notes)


def u_aa_asymptotic(a: complex, Z: complex, K: int) -> list[complex]:
    """Terms ``(-1)**k (a)_k Z**(-a-k)``, ``k < K``, of the large-``Z`` expansion."""
    a, Z = complex(a), complex(Z)
    logZ = cmath.log(Z)
    out = []
    poch = 1 + 0j
    for k in range(K):
        out.append((-1) ** k * poch * cmath.exp(-(a + k) * logZ))
        poch *= a + k
    return out


def _u_quadrature(a: complex, c: complex, Z: complex, t: Truncation) -> EvalResult:
    """``(1/Gamma(a)) int_0^inf exp(-Z w) w**(a-1) (1+w)**(c-a-1) dw`` on the ray ``arg w = -arg Z``."""
    if not a.real > 0:
        raise UnsupportedShapeError("quadrature oracle needs Re a > 0")
    theta = -cmath.phase(Z)
    rho = abs(Z)
    rot = cmath.exp(1j * theta)
    p = max(1.0, 2.0 / a.real)
    e = c - a - 1

    def f(x):
        if x == 0.0:
            return 0j
        u = x ** p
        return p * cmath.exp((p * a - 1) * math.log(x) - rho * u + e * cmath.log(1 + rot * u))

    x1 = (1.0 / rho) ** (1.0 / p)
    x2 = (60.0 / rho) ** (1.0 / p)
    total = 0j
    err = 0.0
    with warnings.catch_warnings():
        # quad's own error estimate is returned; its roundoff warnings add nothing
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for lo, hi in ((0.0, x1), (x1, x2), (x2, np.inf)):
            val, er = integrate.quad(f, lo, hi, complex_func=True, epsabs=0.0, epsrel=1e-13, limit=400)
            total += val
            err += abs(er)
    scale = cmath.exp(1j * theta * a) * reciprocal_gamma(a)
    return EvalResult(scale * total, abs(scale) * err, 0, ["quadrature"])


def kummer_u(a: complex, c: complex, Z: complex, t: Truncation = DEFAULT_TRUNCATION,
             mode: str = "auto") -> EvalResult:
    """Kummer's second solution in the supported shapes.

    ``mode="quadrature"`` forces the integral oracle regardless of shape.
    """
    a, c, Z = complex(a), complex(c), complex(Z)
    _check_sector(Z)
    if mode == "quadrature":
        return _u_quadrature(a, c, Z, t)
    if mode != "auto":
        raise DomainError(f"unknown mode {mode!r}")
    if a == 0:
        return EvalResult(1 + 0j, 0.0, 0, ["trivial"])
    if c == a + 1:
        return EvalResult(cmath.exp(-a * cmath.log(Z)), 0.0, 0, ["power"])
    if c == a:
        return u_aa(a, Z, t)
    if a.real > 0:
        return _u_quadrature(a, c, Z, t)
    raise UnsupportedShapeError(f"U({a}; {c}; Z) is outside the supported shapes")


def f_sJ(s: complex, J: int, Z: complex, t: Truncation = DEFAULT_TRUNCATION, turn: int = 0) -> EvalResult:
    """``U(s+J; s+J; Z')`` with ``Z' = exp(turn*pi*i) Z`` tracked on the cover.

    The rotated argument must stay inside ``(-pi, pi)``; that is always the
    case for the remainder sums in strict sectors.
    """
    Z = complex(Z)
    if Z == 0:
        raise DomainError("Z must be nonzero")
    arg = cmath.phase(Z) + turn * math.pi
    if not -math.pi < arg < math.pi:
        raise RegimeError("rotated argument leaves the principal sector")
    Zr = abs(Z) * cmath.exp(1j * arg)
    return u_aa(complex(s) + int(J), Zr, t)


def kummer_1f1(a: complex, c: complex, Z: complex, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """Ascending series, with Kummer's transformation when ``Re Z < 0``."""
    a, c, Z = complex(a), complex(c), complex(Z)
    if _nonpos_int(c) is not None:
        raise DomainError("1F1 undefined for c a non-positive integer")
    if abs(Z) > 50:
        raise RegimeError("series regime limited to |Z| <= 50")
    pref = 1 + 0j
    if Z.real < 0:
        pref = cmath.exp(Z)
        a, Z = c - a, -Z
    terms = [1 + 0j]
    term = 1 + 0j
    for k in range(t.max_terms):
        term *= (a + k) * Z / ((c + k) * (k + 1))
        terms.append(term)
        if term == 0 or (k > abs(Z) and abs(term) < 1e-17 * abs(csum(terms))):
            break
    else:
        raise BudgetError("1F1 series did not converge")
    # rounding grows with the largest summand when the series cancels
    peak = max(abs(x) for x in terms)
    err = abs(pref) * (abs(term) + 4e-16 * peak * math.sqrt(len(terms)))
    return EvalResult(pref * csum(terms), err, len(terms), ["series"])


def connection_sides(a: complex, c: complex, Z: complex,
                     t: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex]:
    """Both sides of the 1F1-to-U connection formula in ``0 < |arg Z| < pi``.

    The sector phase uses the first parameter ``a`` as exponent.
    """
    a, c, Z = complex(a), complex(c), complex(Z)
    eps = eps_of(Z)
    if eps == 0 or Z.imag == 0:
        raise DomainError("connection formula needs 0 < |arg Z| < pi")
    lhs = kummer_1f1(a, c, Z, t).value
    Zrot = abs(Z) * cmath.exp(1j * (cmath.phase(Z) - eps * math.pi))
    lg_c = log_gamma(c)
    t1 = cmath.exp(lg_c - log_gamma(c - a) + eps * 1j * math.pi * a) * kummer_u(a, c, Z, t).value
    t2 = (cmath.exp(lg_c - log_gamma(a) + eps * 1j * math.pi * (a - c) + Z)
          * kummer_u(c - a, c, Zrot, t).value)
    return lhs, t1 + t2
