"""Lerch, Hurwitz and exponential zeta functions on the whole r-plane.

Conventions: ``psi(r, g, k) = sum_{x = g + n > 0} e(x k) x**(-r)``, so with
``a = <g>'`` it equals ``e(a k) * Phi(r, a, k)`` where
``Phi(r, a, lam) = sum_{n >= 0} e(n lam) (a + n)**(-r)``.

``Phi`` is evaluated by a finite head sum plus a closed-form tail:

* untwisted (``lam`` integral): Euler-Maclaurin.
* twisted: Taylor-expand ``(b + m)**(-r)`` about ``m = 0`` and use
  ``sum_m w**m m**j = -A_{j+1}(w)/(j+1)`` (Abel sense), which turns the tail
  into ``-sum_j (-1)**j (r)_j A_{j+1}(w) b**(-r-j) / (j+1)!``.  The series is
  asymptotic in ``b`` with ratio about ``|r+j| / (2 pi dist(lam, Z) b)``.
  For ``Re r < 0`` the head terms grow and cancel, so the direct route
  switches to the convergent expansion in powers of ``2 pi i lam`` whose
  coefficients are Hurwitz values at ``r - k``.

For ``Re r < -1/4`` the functional equation moves the work to ``1 - r``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special

from .coeffs import bernoulli_fractions, bernoulli_poly, coeff_A, coeff_C
from .numkernel import (
    DEFAULT_TRUNCATION,
    TWO_PI,
    BranchSelector,
    BudgetError,
    CoverPoint,
    DomainError,
    EvalResult,
    PoleError,
    RegimeError,
    Truncation,
    csum,
    delta,
    e_of,
    frac_parts,
)

LOG_TWO_PI = math.log(TWO_PI)
# below this real part the functional equation is used
FE_THRESHOLD = -0.25


# ---------------------------------------------------------------- gamma

def _nonpos_int(s: complex) -> int | None:
    """Return ``h`` if ``s == -h`` for an integer ``h >= 0``."""
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0 and s.real == math.floor(s.real):
        return int(-s.real)
    return None


def _pos_int(s: complex) -> int | None:
    s = complex(s)
    if s.imag == 0.0 and s.real >= 1 and s.real == math.floor(s.real):
        return int(s.real)
    return None


def gamma_fn(s: complex) -> complex:
    if _nonpos_int(s) is not None:
        raise PoleError(f"gamma has a pole at {s!r}")
    return complex(special.gamma(complex(s)))


def reciprocal_gamma(s: complex) -> complex:
    """``1/Gamma(s)``; entire, exactly zero at non-positive integers."""
    if _nonpos_int(s) is not None:
        return 0j
    return complex(special.rgamma(complex(s)))


def log_gamma(s: complex) -> complex:
    """Principal-branch ``log Gamma`` (continuous off the negative axis)."""
    if _nonpos_int(s) is not None:
        raise PoleError(f"gamma has a pole at {s!r}")
    return complex(special.loggamma(complex(s)))


def reciprocal_gamma_deriv(s: complex) -> complex:
    """``d/ds (1/Gamma(s)) = -digamma(s)/Gamma(s)``; ``(-1)**h h!`` at ``-h``."""
    h = _nonpos_int(s)
    if h is not None:
        return complex((-1) ** h * math.factorial(h))
    s = complex(s)
    return -complex(special.psi(s)) * reciprocal_gamma(s)


def pochhammer(s: complex, n: int) -> complex:
    """``(s)_n = Gamma(s+n)/Gamma(s)`` as a finite product, ``n`` of either sign."""
    s = complex(s)
    n = int(n)
    out = 1 + 0j
    if n >= 0:
        for i in range(n):
            out *= s + i
        return out
    for i in range(1, -n + 1):
        d = s - i
        if d == 0:
            raise PoleError(f"(s)_{n} has a pole at s = {s!r}")
        out /= d
    return out


# ---------------------------------------------------------------- helpers

@dataclass(frozen=True)
class LerchArgs:
    r: complex
    gamma: float
    kappa: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.kappa)):
            raise DomainError("gamma and kappa must be finite")


def _reduce_twist(lam: float) -> float:
    """Representative of ``lam`` mod 1 in ``(-1/2, 1/2]``."""
    # direct subtraction keeps tiny twists exact
    f = lam - math.floor(lam + 0.5)
    return 0.5 if f == -0.5 else f


def _powers(base: np.ndarray, r: complex) -> np.ndarray:
    # base is real positive
    return np.exp(-r * np.log(base))


def _bpow(b: float, x: complex) -> complex:
    """``b**x`` for real ``b > 0``."""
    x = complex(x)
    return math.pow(b, x.real) * cmath.exp(1j * x.imag * math.log(b))


@lru_cache(maxsize=4096)
def _A_table(lam: float, K: int) -> tuple[complex, ...]:
    return coeff_A(K, e_of(lam))


# ---------------------------------------------------------------- untwisted

def _hurwitz_em(r: complex, a: float, t: Truncation) -> EvalResult:
    """Euler-Maclaurin with shift; valid for every ``r != 1`` but used for ``Re r >= -1/4``."""
    r = complex(r)
    B = bernoulli_fractions(64)
    N = max(8, int(abs(r) / 2) + 8)
    while True:
        if N > t.max_terms:
            raise BudgetError("Euler-Maclaurin shift exceeds max_terms")
        b = a + N
        head = csum(_powers(a + np.arange(N, dtype=float), r))
        corr = [_bpow(b, 1 - r) / (r - 1), 0.5 * _bpow(b, -r)]
        poch = r  # (r)_{2j-1}
        err = math.inf
        for j in range(1, 33):
            term = float(B[2 * j]) / math.factorial(2 * j) * poch * _bpow(b, -r - 2 * j + 1)
            corr.append(term)
            scale = max(abs(head), abs(corr[0]), 1e-300)
            if abs(term) <= t.tol * scale:
                err = abs(term)
                break
            poch *= (r + 2 * j - 1) * (r + 2 * j)
        if math.isfinite(err):
            return EvalResult(head + csum(corr), err, N + j, ["euler-maclaurin"])
        N *= 2


def _hurwitz_nonpos(j: int, a: float) -> complex:
    """``zeta(-j, a) = -B_{j+1}(a)/(j+1)`` for any real ``a > 0``."""
    return -bernoulli_poly(j + 1, a) / (j + 1)


# ---------------------------------------------------------------- twisted

def _twist_turns(lam: float, n: np.ndarray) -> np.ndarray:
    """``lam * n`` mod 1 without the rounding error of the full product."""
    hi = math.ldexp(round(math.ldexp(lam, 28)), -28)
    return np.mod(hi * n, 1.0) + (lam - hi) * n


def _twisted_series(r: complex, a: float, lam: float, t: Truncation) -> EvalResult:
    """``Phi(r, a, lam)`` for ``lam`` not integral, any ``r``.

    Head sum up to ``b = a + N`` and the asymptotic tail in ``A_k(e(lam))``;
    ``b`` is kept as small as the tail allows because the head terms grow
    like ``b**(-Re r)`` when ``Re r < 0``.
    """
    r = complex(r)
    lam = _reduce_twist(lam)
    d = TWO_PI * abs(lam)
    M = 60
    b_min = (abs(r) + 40.0) / d
    N = max(8, int(math.ceil(b_min - a)))
    if N > t.max_terms:
        raise BudgetError(
            f"twist {lam!r} too close to an integer for the term budget ({N} > {t.max_terms})"
        )
    n = np.arange(N, dtype=float)
    base = a + n
    # modulus by pow and phase separately: exp of the full complex exponent loses ~|r log b| ulps
    head = csum(np.power(base, -r.real) * np.exp(1j * (TWO_PI * _twist_turns(lam, n) - r.imag * np.log(base))))
    b = a + N
    A = _A_table(lam, M + 2)
    parts: list[complex] = []
    poch = 1 + 0j
    err = math.inf
    for j in range(M + 1):
        term = (-1) ** j * poch * A[j + 1] / math.factorial(j + 1) * _bpow(b, -r - j)
        parts.append(term)
        scale = max(abs(head), abs(parts[0]), 1e-300)
        # A_k(-1) vanishes for odd k >= 3, so demand two small terms in a row
        if j >= 2 and max(abs(term), abs(parts[-2])) <= t.tol * scale:
            err = abs(term) + abs(parts[-2])
            break
        poch *= r + j
    if not math.isfinite(err):
        err = abs(parts[-1])
        if err > 1e3 * t.tol * max(abs(head), 1e-300):
            raise BudgetError("twisted tail expansion did not settle", head, err)
    tail = -e_of(N * lam) * csum(parts)
    return EvalResult(head + tail, err, N + len(parts), ["twisted-tail"])


# ---------------------------------------------------------------- Phi

def _hurwitz_reflected(x: complex, a: float, t: Truncation) -> complex:
    """``zeta(x, a)`` for ``Re x < 0`` from the periodic zeta at ``w = 1 - x``."""
    w = 1 - complex(x)
    f_plus = e_of(a) * _series_phi(w, 1.0, a, t).value
    f_minus = e_of(-a) * _series_phi(w, 1.0, -a, t).value
    pref = cmath.exp(log_gamma(w) - w * LOG_TWO_PI)
    return pref * (cmath.exp(-0.5j * math.pi * w) * f_plus + cmath.exp(0.5j * math.pi * w) * f_minus)


def _small_twist_expansion(r: complex, a: float, lam: float, t: Truncation) -> EvalResult:
    """``Phi(r, a, lam)`` for ``Re r < 0`` as a power series in ``L = 2 pi i lam``.

    ``e(a lam) Phi = Gamma(1-r) (-L)**(r-1) + sum_k zeta(r-k, a) L**k / k!``
    converges for ``|L| < 2 pi``; the singular first term carries the size that
    the head-and-tail route would have to cancel away.
    """
    r = complex(r)
    lam = _reduce_twist(lam)
    L = TWO_PI * 1j * lam
    sing = cmath.exp(log_gamma(1 - r) + (r - 1) * cmath.log(-L))
    parts = [sing]
    small = 0
    for k in range(200):
        term = _hurwitz_reflected(r - k, a, t) * L ** k / math.factorial(k)
        parts.append(term)
        small = small + 1 if abs(term) <= t.tol * max(abs(parts[0]), abs(parts[1])) else 0
        if small == 2:
            break
    else:
        raise BudgetError("small-twist expansion did not converge", csum(parts), abs(parts[-1]))
    return EvalResult(e_of(-a * lam) * csum(parts), abs(parts[-1]), len(parts), ["small-twist-expansion"])


def _series_phi(r: complex, a: float, lam: float, t: Truncation) -> EvalResult:
    if frac_parts(lam)[2]:
        if complex(r) == 1:
            raise PoleError("Hurwitz zeta has a pole at r = 1")
        return _hurwitz_em(r, a, t)
    if complex(r).real < 0:
        return _small_twist_expansion(r, a, lam, t)
    return _twisted_series(r, a, lam, t)


def _shift_down(r: complex, a: float, lam: float, value_at_base, t: Truncation) -> EvalResult:
    """``Phi(r, a)`` from ``Phi(r, a')`` with ``a' = <a>'`` and ``a = a' + k``."""
    a0 = frac_parts(a)[1]
    k = int(round(a - a0))
    base = value_at_base(a0)
    if k == 0:
        return base
    n = np.arange(k, dtype=float)
    finite = csum(np.exp(2j * np.pi * lam * n - complex(r) * np.log(a0 + n)))
    return EvalResult(e_of(-k * lam) * (base.value - finite), base.error, base.terms + k, base.notes)


def lerch_phi(r: complex, a: float, lam: float, t: Truncation = DEFAULT_TRUNCATION,
              route: str = "auto") -> EvalResult:
    """``Phi(r, a, lam) = sum_{n >= 0} e(n lam) (a + n)**(-r)`` for real ``a > 0``."""
    r = complex(r)
    a = float(a)
    if not a > 0:
        raise DomainError("lerch_phi needs a > 0")
    h = _nonpos_int(r)
    if h is not None and route == "auto":
        def at_base(a0):
            g = 0.0 if a0 == 1.0 else a0
            return EvalResult(e_of(-a0 * lam) * psi_special(h, g, lam), 0.0, 0, ["closed-form"])
        return _shift_down(r, a, lam, at_base, t)
    if route == "series" or (route == "auto" and r.real >= FE_THRESHOLD):
        return _series_phi(r, a, lam, t)
    if route not in ("auto", "fe"):
        raise DomainError(f"unknown route {route!r}")

    def at_base(a0):
        res = _psi_fe(r, a0, lam, t)
        return EvalResult(e_of(-a0 * lam) * res.value, res.error, res.terms, res.notes)
    return _shift_down(r, a, lam, at_base, t)


def hurwitz_zeta(r: complex, a: float, t: Truncation = DEFAULT_TRUNCATION,
                 route: str = "auto") -> EvalResult:
    """``zeta(r, a) = sum_{n >= 0} (a + n)**(-r)`` for real ``a > 0``."""
    r = complex(r)
    if r == 1:
        raise PoleError("Hurwitz zeta has a pole at r = 1")
    h = _nonpos_int(r)
    if h is not None and route == "auto":
        return EvalResult(_hurwitz_nonpos(h, float(a)), 0.0, 0, ["bernoulli-polynomial"])
    return lerch_phi(r, a, 0.0, t, route)


# ---------------------------------------------------------------- psi

def _psi_fe(r: complex, gamma: float, kappa: float, t: Truncation) -> EvalResult:
    """Right side of the Lerch functional equation, inner values by series."""
    r = complex(r)
    if _pos_int(r) is not None:
        raise RegimeError("functional-equation route is singular at positive integers r")
    s = 1 - r
    p1 = psi_lerch(LerchArgs(s, kappa, -gamma), t, route="series")
    p2 = psi_lerch(LerchArgs(s, -kappa, gamma), t, route="series")
    pref = e_of(gamma * kappa) * cmath.exp(log_gamma(s) - s * LOG_TWO_PI)
    val = pref * (cmath.exp(0.5j * math.pi * s) * p1.value + cmath.exp(-0.5j * math.pi * s) * p2.value)
    amp = abs(pref) * (abs(cmath.exp(0.5j * math.pi * s)) * p1.error
                       + abs(cmath.exp(-0.5j * math.pi * s)) * p2.error)
    return EvalResult(val, amp, p1.terms + p2.terms, ["functional-equation"])


def psi_lerch(args: LerchArgs, t: Truncation = DEFAULT_TRUNCATION, route: str = "auto") -> EvalResult:
    """``psi(r, gamma, kappa)`` continued to the whole r-plane.

    ``route`` is ``auto`` (regime dispatch), ``series`` (direct evaluation
    without reflection, any ``r``) or ``fe`` (functional equation).
    """
    r, gamma, kappa = complex(args.r), float(args.gamma), float(args.kappa)
    _, a, _ = frac_parts(gamma)
    kappa_int = frac_parts(kappa)[2]
    if r == 1 and kappa_int:
        raise PoleError("psi(r, gamma, kappa) has a pole at r = 1 for integral kappa")
    if route == "fe":
        return _psi_fe(r, gamma, kappa, t)
    h = _nonpos_int(r)
    if h is not None and route == "auto":
        return EvalResult(psi_special(h, gamma, kappa), 0.0, 0, ["closed-form"])
    if route == "auto" and r.real < FE_THRESHOLD:
        return _psi_fe(r, gamma, kappa, t)
    if route not in ("auto", "series"):
        raise DomainError(f"unknown route {route!r}")
    phase = e_of(a * kappa)
    res = _series_phi(r, a, kappa, t)
    return EvalResult(phase * res.value, res.error, res.terms, res.notes)


def psi(r: complex, gamma: float, kappa: float, t: Truncation = DEFAULT_TRUNCATION,
        route: str = "auto") -> complex:
    return psi_lerch(LerchArgs(complex(r), gamma, kappa), t, route).value


def phi_lerch(r: complex, gamma: float, kappa: float, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``phi(r, gamma, kappa) = e(-gamma kappa) psi(r, gamma, kappa)``."""
    return e_of(-gamma * kappa) * psi(r, gamma, kappa, t)


def exp_zeta(r: complex, kappa: float, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``sum_{k >= 1} e(k kappa) k**(-r)``."""
    return psi(r, 0.0, kappa, t)


def psi_special(j: int, gamma: float, kappa: float) -> complex:
    """``psi(-j, gamma, kappa)`` in closed form."""
    j = int(j)
    if j < 0:
        raise DomainError("psi_special needs j >= 0")
    g = frac_parts(gamma)[0]
    C = coeff_C(j + 1, g, CoverPoint.e_tilde(kappa))
    return -C[j + 1] / (j + 1) - (1 if j == 0 else 0) * delta(gamma)


def residue_at_1(gamma: float, kappa: float) -> complex:
    """Residue of ``psi(r, gamma, kappa)`` at ``r = 1``."""
    g = frac_parts(gamma)[0]
    return coeff_C(0, g, CoverPoint.e_tilde(kappa))[0]


def psi_bilateral(r: complex, gamma: float, kappa: float, b: BranchSelector = BranchSelector.PLUS,
                  t: Truncation = DEFAULT_TRUNCATION, route: str = "split") -> EvalResult:
    """Two-sided ``psi`` with ``arg(x) = +-pi`` on negative summands.

    ``split`` adds the two one-sided sums; ``fe`` uses the single-term
    functional relation.
    """
    r = complex(r)
    sign = b.sign
    h = _nonpos_int(r)
    if h is not None:
        return EvalResult(complex(-(1 if h == 0 else 0) * delta(gamma)), 0.0, 0, ["closed-form"])
    if route == "split":
        p1 = psi_lerch(LerchArgs(r, -gamma, -kappa), t)
        p2 = psi_lerch(LerchArgs(r, gamma, kappa), t)
        ph = cmath.exp(-sign * 1j * math.pi * r)
        return EvalResult(ph * p1.value + p2.value, abs(ph) * p1.error + p2.error,
                          p1.terms + p2.terms, ["split"])
    if route == "fe":
        inner = psi_lerch(LerchArgs(1 - r, -sign * kappa, sign * gamma), t)
        pref = e_of(gamma * kappa) * cmath.exp(r * LOG_TWO_PI - sign * 0.5j * math.pi * r) * reciprocal_gamma(r)
        return EvalResult(pref * inner.value, abs(pref) * inner.error, inner.terms, ["fe"])
    raise DomainError(f"unknown route {route!r}")
