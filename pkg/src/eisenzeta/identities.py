"""Ramanujan-type identities evaluated as two-sided numeric residuals."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .coeffs import bernoulli_fractions, coeff_C
from .eisenstein import EisensteinParams, f_qform_derivative
from .lerch import hurwitz_zeta, log_gamma, psi
from .numkernel import (
    DEFAULT_TRUNCATION,
    CoverPoint,
    DomainError,
    RegimeError,
    Truncation,
    cover_pow,
    csum,
    delta,
    e_of,
    frac_parts,
    is_integer,
    tau_to_z,
)
from .qseries import SArgs, s_eval


@dataclass
class IdentityReport:
    lhs: complex
    rhs: complex
    params: dict = field(default_factory=dict)
    route_notes: str = ""
    # largest constituent term; guards points where both sides vanish by symmetry
    scale: float = 0.0

    @property
    def abs_residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_residual(self) -> float:
        return self.abs_residual / max(abs(self.lhs), abs(self.rhs), 1e-300)

    @property
    def scaled_residual(self) -> float:
        return self.abs_residual / max(abs(self.lhs), abs(self.rhs), self.scale, 1e-300)

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "scaled_residual": self.scaled_residual,
            "params": self.params,
            "route_notes": self.route_notes,
        }


def _S(r, g, d, k, l, z, dual, t) -> complex:
    return s_eval(SArgs(complex(r), g, d, k, l, z, dual), t).value


def _C_table(K: int, x: float, nu: float):
    return coeff_C(max(K, 0), frac_parts(x)[0], CoverPoint.e_tilde(nu))


def bernoulli_block(k: int, alpha, beta, mu, nu, tau, variant: bool = False) -> complex:
    """``(-2pi)**k sum_{j=0}^{k+1} (-+i)**j C_j C_{k+1-j} tau**(k-j) / (j! (k+1-j)!)``.

    Empty for ``k <= -2``.  ``variant`` swaps the roles of the two pairs and
    flips the sign of ``i``.
    """
    if k + 1 < 0:
        return 0j
    tau = complex(tau)
    if variant:
        Ca, Cb, unit = _C_table(k + 1, beta, nu), _C_table(k + 1, alpha, mu), 1j
    else:
        Ca, Cb, unit = _C_table(k + 1, alpha, mu), _C_table(k + 1, beta, nu), -1j
    terms = [unit ** j * Ca[j] * Cb[k + 1 - j] * tau ** (k - j) / (math.factorial(j) * math.factorial(k + 1 - j))
             for j in range(k + 2)]
    return (-2 * math.pi) ** k * csum(terms)


def _check_k1(k: int, alpha: float, beta: float) -> None:
    if k == 1 and (is_integer(alpha) or is_integer(beta)):
        raise DomainError("k = 1 needs alpha and beta non-integral")


def ramanujan_check(k: int, alpha: float, beta: float, mu: float, nu: float, tau: complex,
                    variant: bool = False, t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """Both sides of the twisted Ramanujan family at integer ``k``."""
    k = int(k)
    _check_k1(k, alpha, beta)
    tau = complex(tau)
    z = tau_to_z(tau)
    sgn = (-1) ** (k - 1)
    params = dict(k=k, alpha=alpha, beta=beta, mu=mu, nu=nu, tau=tau, variant=variant)
    # dual nome is e(-1/z) = exp(-2 pi / tau)
    if not variant:
        left_parts = [
            psi(k, -mu, alpha, t) if delta(beta) else 0j,
            _S(k, beta, -mu, nu, alpha, z, False, t),
            sgn * _S(k, -beta, mu, -nu, -alpha, z, False, t),
        ]
        lpref = e_of(alpha * mu)
        right_parts = [
            psi(k, nu, -beta, t) if delta(alpha) else 0j,
            _S(k, alpha, nu, mu, -beta, z, True, t),
            sgn * _S(k, -alpha, -nu, -mu, beta, z, True, t),
        ]
        rpref = e_of(beta * nu) * (-1j * tau) ** (k - 1)
    else:
        left_parts = [
            psi(k, nu, -beta, t) if delta(alpha) else 0j,
            _S(k, alpha, nu, mu, -beta, z, False, t),
            sgn * _S(k, -alpha, -nu, -mu, beta, z, False, t),
        ]
        lpref = e_of(beta * nu)
        right_parts = [
            psi(k, -mu, alpha, t) if delta(beta) else 0j,
            _S(k, beta, -mu, nu, alpha, z, True, t),
            sgn * _S(k, -beta, mu, -nu, -alpha, z, True, t),
        ]
        rpref = e_of(alpha * mu) * (1j * tau) ** (k - 1)
    poly = bernoulli_block(k, alpha, beta, mu, nu, tau, variant)
    scale = max([abs(poly)] + [abs(lpref * v) for v in left_parts] + [abs(rpref * v) for v in right_parts])
    return IdentityReport(lpref * csum(left_parts) - poly, rpref * csum(right_parts), params,
                          "variant" if variant else "direct", scale)


def variant_consistency(k: int, alpha, beta, mu, nu, tau, t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """Variant at ``tau`` against the direct form at ``1/tau``.

    The dual-nome block of the variant at ``tau`` must equal the plain-nome
    block of the direct form at ``1/tau``, rescaled by ``(i tau)**(k-1)``.
    """
    tau = complex(tau)
    v = ramanujan_check(k, alpha, beta, mu, nu, tau, True, t)
    d = ramanujan_check(k, alpha, beta, mu, nu, 1 / tau, False, t)
    poly = bernoulli_block(k, alpha, beta, mu, nu, 1 / tau, False)
    rhs = (1j * tau) ** (k - 1) * (d.lhs + poly)
    return IdentityReport(v.rhs, rhs, dict(k=k, alpha=alpha, beta=beta, mu=mu, nu=nu, tau=tau),
                          "variant(tau) vs direct(1/tau)")


def zeta_int(n: int) -> complex:
    """``zeta(n)`` at an integer ``n != 1``; non-positive values from Bernoulli numbers."""
    if n == 1:
        raise DomainError("zeta has a pole at 1")
    if n >= 2:
        return complex(hurwitz_zeta(n, 1.0).value)
    h = -n
    B = bernoulli_fractions(h + 1)
    return complex(float(-B[h + 1] / (h + 1)) - (1.0 if h == 0 else 0.0))


def euler_even(k: int) -> IdentityReport:
    """``zeta(2k)`` against its Bernoulli closed form."""
    k = int(k)
    if not 1 <= k <= 20:
        raise DomainError("k must lie in 1..20")
    B = bernoulli_fractions(2 * k)
    rhs = (-1) ** (k + 1) * (2 * math.pi) ** (2 * k) * float(B[2 * k]) / (2 * math.factorial(2 * k))
    return IdentityReport(complex(hurwitz_zeta(2 * k, 1.0).value), complex(rhs), dict(k=k), "hurwitz vs bernoulli")


def ramanujan_odd(k: int, tau: complex, t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """Ramanujan's relation between ``zeta(2k+1)`` at ``q`` and at the dual nome."""
    k = int(k)
    if k == 0:
        raise DomainError("k must be nonzero")
    tau = complex(tau)
    z = tau_to_z(tau)
    n = 2 * k + 1
    zv = zeta_int(n)
    B = bernoulli_fractions(max(2 * k + 2, 0))
    poly = []
    for j in range(0, k + 2):
        poly.append((-1) ** j * float(B[2 * j]) * float(B[2 * k + 2 - 2 * j])
                    / (math.factorial(2 * j) * math.factorial(2 * k + 2 - 2 * j)) * tau ** (n - 2 * j))
    Sq = 2 * _S(n, 0.0, 0.0, 0.0, 0.0, z, False, t)
    Sd = 2 * _S(n, 0.0, 0.0, 0.0, 0.0, z, True, t)
    P = (2 * math.pi) ** n * csum(poly)
    lhs = zv + Sq + P
    w = (-1) ** k * tau ** (2 * k)
    rhs = w * (zv + Sd)
    scale = max(abs(zv), abs(Sq), abs(P), abs(w * zv), abs(w * Sd))
    return IdentityReport(lhs, rhs, dict(k=k, tau=tau), "closed form", scale)


# ---------------------------------------------------------------- s-derivative at 1-k

def fprime_qform(k: int, alpha, beta, mu, nu, tau, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``dF/ds`` at ``s = 1-k`` from the q-series side."""
    k = int(k)
    _check_k1(k, alpha, beta)
    z = tau_to_z(tau)
    c = e_of(alpha * mu) * (2j * math.pi) ** (1 - k) * math.factorial(k - 1)
    out = c * (_S(k, beta, -mu, nu, alpha, z, False, t) + (-1) ** (k - 1) * _S(k, -beta, mu, -nu, -alpha, z, False, t))
    if delta(beta):
        out += 0.5 * c * ((-1) ** (k - 1) * psi(k, mu, -alpha, t) + psi(k, -mu, alpha, t))
    return out


def fprime_expansion_terms(k: int, alpha, beta, mu, nu, tau) -> list[complex]:
    """Polynomial part of the expansion-side derivative, one entry per ``j = -1..k``."""
    tau = complex(tau)
    Ca = _C_table(k + 1, alpha, mu)
    Cb = _C_table(k + 1, beta, nu)
    return [2 * math.pi * 1j ** (j + 1) * math.factorial(k - 1) / (math.factorial(j + 1) * math.factorial(k - j))
            * Ca[k - j] * Cb[j + 1] * tau ** j for j in range(-1, k + 1)]


def fprime_expansion(k: int, alpha, beta, mu, nu, tau, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``dF/ds`` at ``s = 1-k`` from the small-``tau`` expansion plus dual-nome remainder."""
    k = int(k)
    _check_k1(k, alpha, beta)
    tau = complex(tau)
    z = tau_to_z(tau)
    fk = math.factorial(k - 1)
    parts = fprime_expansion_terms(k, alpha, beta, mu, nu, tau)
    if delta(beta):
        parts.append(-0.5 * e_of(alpha * mu) * (2j * math.pi) ** (1 - k) * fk
                     * (psi(k, -mu, alpha, t) + (-1) ** k * psi(k, mu, -alpha, t)))
    scale = e_of(beta * nu) * (-2 * math.pi / tau) ** (1 - k) * fk
    if delta(alpha):
        parts.append(scale * psi(k, nu, -beta, t))
    parts.append(scale * (_S(k, alpha, nu, mu, -beta, z, True, t)
                          + (-1) ** (k - 1) * _S(k, -alpha, -nu, -mu, beta, z, True, t)))
    return csum(parts)


def fprime_check(k: int, alpha, beta, mu, nu, tau, t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """q-series side against expansion side for ``dF/ds`` at ``s = 1-k``."""
    if int(k) < 1:
        raise DomainError("k must be at least 1")
    lhs = fprime_qform(k, alpha, beta, mu, nu, tau, t)
    rhs = fprime_expansion(k, alpha, beta, mu, nu, tau, t)
    return IdentityReport(lhs, rhs, dict(k=k, alpha=alpha, beta=beta, mu=mu, nu=nu, tau=complex(tau)),
                          "q-form vs expansion")


def fprime_contour(k: int, alpha, beta, mu, nu, tau, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Third route: Cauchy-integral derivative of the exact q-form."""
    return f_qform_derivative(EisensteinParams(1 - k, alpha, beta, mu, nu, complex(tau)), t)


# ---------------------------------------------------------------- Lerch and coefficient laws

def functional_equation_check(r: complex, gamma: float, kappa: float,
                              t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """Direct value of ``psi(r)`` against the reflected ``psi(1-r)`` pair.

    Both sides use the direct (non-reflecting) evaluator.  ``scale`` is the
    size of the two reflected terms, which cancel heavily when ``gamma`` sits
    just off an integer.
    """
    r = complex(r)
    if abs(r.imag) < 1e-8 and r.real > 0.5 and abs(r.real - round(r.real)) < 1e-8:
        raise RegimeError("reflection is singular at positive integers r")
    s = 1 - r
    lhs = psi(r, gamma, kappa, t, route="series")
    pref = e_of(gamma * kappa) * cmath.exp(log_gamma(s) - s * math.log(2 * math.pi))
    t1 = pref * cmath.exp(0.5j * math.pi * s) * psi(s, kappa, -gamma, t, route="series")
    t2 = pref * cmath.exp(-0.5j * math.pi * s) * psi(s, -kappa, gamma, t, route="series")
    return IdentityReport(lhs, t1 + t2, dict(r=r, gamma=gamma, kappa=kappa), "series vs reflection",
                          abs(t1) + abs(t2))


def _table_residual(lhs, rhs) -> float:
    # neighbours set the scale: entries like B_21 vanish exactly while their rounding does not
    mags = [abs(b) for b in rhs]
    out = 0.0
    for k, (a, b) in enumerate(zip(lhs, rhs)):
        scale = max([1.0] + mags[max(k - 1, 0):k + 2])
        out = max(out, abs(a - b) / scale)
    return out


def reciprocity_check(K: int, X: complex, Y: CoverPoint) -> float:
    """Largest ``|C_k(1-X, 1/Y) - (-1)**k C_k(X, Y)|`` over ``k <= K``, scaled by neighbouring entries."""
    a = coeff_C(K, 1 - complex(X), Y.inverse())
    b = coeff_C(K, X, Y)
    return _table_residual(a.entries, [(-1) ** k * c for k, c in enumerate(b.entries)])


def reciprocity_zero_check(K: int, Y: CoverPoint) -> float:
    """``C_k(0, 1/Y) = (-1)**k C_k(0, Y) - [k == 1]``."""
    a = coeff_C(K, 0.0, Y.inverse())
    b = coeff_C(K, 0.0, Y)
    return _table_residual(a.entries, [(-1) ** k * c - (k == 1) for k, c in enumerate(b.entries)])


def reflection_check(K: int, gamma: float, kappa: float) -> float:
    """``C_k(<-gamma>, e~(-kappa)) = (-1)**k C_k(<gamma>, e~(kappa)) - [k == 1] delta(gamma)``."""
    a = _C_table(K, -gamma, -kappa)
    b = _C_table(K, gamma, kappa)
    d = delta(gamma)
    return _table_residual(a.entries, [(-1) ** k * c - (k == 1) * d for k, c in enumerate(b.entries)])


def generating_function_check(X: complex, Y: CoverPoint, K: int = 40, radius: float = 0.25,
                              nodes: int = 32) -> float:
    """Max deviation of the truncated series from the closed form on a circle."""
    C = coeff_C(K, X, Y).entries
    X = complex(X)
    amp = cover_pow(Y, X)
    y1 = Y.projection() if not Y.is_one() else 1.0
    worst = 0.0
    for j in range(nodes):
        Z = radius * cmath.exp(2j * math.pi * (j + 0.5) / nodes)
        series = csum([c * Z ** k / math.factorial(k) for k, c in enumerate(C)])
        exact = Z * amp * cmath.exp(X * Z) / (y1 * cmath.exp(Z) - 1)
        worst = max(worst, abs(series - exact))
    return worst
