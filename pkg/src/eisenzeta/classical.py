"""Classical Eisenstein series and Weierstrass functions for periods ``(1, z)``."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .coeffs import bernoulli_fractions
from .eisenstein import EisensteinParams, f_qform, f_qform_derivative
from .identities import IdentityReport, zeta_int
from .lerch import LOG_TWO_PI
from .numkernel import (
    DEFAULT_TRUNCATION,
    DomainError,
    EvalResult,
    Truncation,
    csum,
    delta,
    e_of,
    frac_prime,
    sgn,
)
from .qseries import SArgs, s_eval

PI = math.pi


def _check_z(z: complex) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("z must lie in the upper half-plane")
    return z


def _S(r, g, d, k, l, z, t) -> EvalResult:
    return s_eval(SArgs(complex(r), g, d, k, l, complex(z)), t)


# ---------------------------------------------------------------- E_2k

def eisenstein_constant(k2: int) -> float:
    """Normalizer ``a_{2k}``: ``zeta(1-2k)``, or ``-log(2 pi)`` at weight 0."""
    if k2 % 2:
        raise DomainError("weight must be even")
    if k2 == 0:
        return -LOG_TWO_PI
    return zeta_int(1 - k2).real


def E(k2: int, z: complex, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """``E_{2k}(z) = 1 + (2/a_{2k}) sum_l l**(2k-1) q**l / (1 - q**l)``."""
    z = _check_z(z)
    a = eisenstein_constant(k2)
    S = _S(1 - k2, 0.0, 0.0, 0.0, 0.0, z, t)
    return EvalResult(1 + 2 / a * S.value, 2 / abs(a) * S.error, S.terms, ["lambert"])


def E_from_lattice_series(k2: int, z: complex, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``E_{2k}`` from the generalized series at ``s = 2k`` (or its ``s``-derivative when ``2k <= 0``)."""
    z = _check_z(z)
    a = eisenstein_constant(k2)
    p = EisensteinParams(k2, 0.0, 0.0, 0.0, 0.0, -1j * z)
    if k2 >= 2:
        return math.factorial(k2 - 1) / ((2j * PI) ** k2 * a) * f_qform(p, t).value
    return (2j * PI) ** (-k2) / (math.factorial(-k2) * a) * f_qform_derivative(p, t)


def quasimodular_correction(k2: int, z: complex) -> complex:
    """Inhomogeneous term ``c`` in ``E_{2k}(-1/z) = z**(2k) (E_{2k}(z) + c)``.

    At weight 0 the logarithmic part carries the same ``(-2 pi i)/a_0``
    normalization as the polynomial part.
    """
    z = _check_z(z)
    k = k2 // 2
    a = eisenstein_constant(k2)
    B = bernoulli_fractions(max(2 - k2, 0))
    terms = []
    for j in range(0, 2 - k):
        if 2 - k2 - 2 * j < 0:
            break
        terms.append(float(B[2 * j]) * float(B[2 - k2 - 2 * j])
                     / (math.factorial(2 * j) * math.factorial(2 - k2 - 2 * j)) * z ** (1 - k2 - 2 * j))
    if k == 0:
        terms.append(cmath.log(z) / (2j * PI) - 0.25)
    return (-2j * PI) ** (1 - k2) / a * csum(terms)


def quasimodular_check(k2: int, z: complex, t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """Transformation law of ``E_{2k}`` under ``z -> -1/z``."""
    z = _check_z(z)
    lhs = E(k2, -1 / z, t).value
    Ez = E(k2, z, t).value
    corr = quasimodular_correction(k2, z)
    rhs = z ** k2 * (Ez + corr)
    # E_{2k} = 1 + (...): the unit constant term sets the scale where E vanishes
    scale = abs(z ** k2) * max(1.0, abs(Ez), abs(corr))
    return IdentityReport(lhs, rhs, dict(weight=k2, z=z), "lambert both sides", scale)


def weight0_check(z: complex, t: Truncation = DEFAULT_TRUNCATION) -> IdentityReport:
    """The weight-0 law written out with the logarithm."""
    z = _check_z(z)
    lhs = E(0, -1 / z, t).value
    rhs = E(0, z, t).value + (cmath.log(z) - 0.5j * PI + 1j * PI * z / 6 + 1j * PI / (6 * z)) / LOG_TWO_PI
    return IdentityReport(lhs, rhs, dict(z=z), "weight 0")


# ---------------------------------------------------------------- Weierstrass functions

@dataclass(frozen=True)
class LatticePoint:
    alpha: float
    beta: float
    z: complex

    def __post_init__(self):
        _check_z(self.z)

    @property
    def w(self) -> complex:
        return self.alpha + self.beta * complex(self.z)

    def require_offlattice(self) -> None:
        if delta(self.alpha) and delta(self.beta):
            raise DomainError("w lies on the period lattice")

    def require_box(self) -> None:
        if not (-1 < self.alpha < 1 and -1 < self.beta < 1) or (self.alpha == 0 and self.beta == 0):
            raise DomainError("(alpha, beta) must lie in (-1, 1)^2 minus the origin")


def _wp_lattice(pt: LatticePoint, radius: int, chunk: int = 128) -> complex:
    z = complex(pt.z)
    w = pt.w
    m = np.arange(-radius, radius + 1, dtype=float)
    parts = [1 / w ** 2]
    for start in range(-radius, radius + 1, chunk):
        n = np.arange(start, min(start + chunk, radius + 1), dtype=float)[:, None]
        om = m[None, :] + n * z
        zero = om == 0
        om_safe = np.where(zero, 1.0, om)
        terms = 1 / (w - om_safe) ** 2 - 1 / om_safe ** 2
        parts.append(complex(np.where(zero, 0.0, terms).sum()))
    return csum(parts)


def wp(pt: LatticePoint, route: str = "qform", t: Truncation = DEFAULT_TRUNCATION,
       radius: int = 1500) -> EvalResult:
    """Weierstrass ``p`` at ``w = alpha + beta z`` for periods ``(1, z)``."""
    pt.require_offlattice()
    if route == "lattice":
        return EvalResult(_wp_lattice(pt, radius), 10.0 / radius, (2 * radius + 1) ** 2, ["lattice"])
    if route != "qform":
        raise DomainError(f"unknown route {route!r}")
    z = complex(pt.z)
    a, b = pt.alpha, pt.beta
    E2 = E(2, z, t)
    S1 = _S(-1, b, 0.0, 0.0, a, z, t)
    S2 = _S(-1, -b, 0.0, 0.0, -a, z, t)
    parts = [-PI ** 2 / 3 * E2.value, -4 * PI ** 2 * (S1.value + S2.value)]
    if delta(b):
        parts.append(PI ** 2 / math.sin(PI * a) ** 2)
    err = PI ** 2 / 3 * E2.error + 4 * PI ** 2 * (S1.error + S2.error)
    return EvalResult(csum(parts), err, S1.terms + S2.terms, ["qform"])


def invariants_e(z: complex, t: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex, complex]:
    """``e_1, e_2, e_3`` from Lambert series in ``p = e(z/2)``."""
    z = _check_z(z)
    p = cmath.exp(1j * PI * z)
    s1, s2, s3 = [], [], []
    for l in range(1, t.max_terms):
        n = 2 * l - 1
        pn = p ** n
        s1.append(n * pn * pn / (1 - pn * pn))
        s2.append(n * pn / (1 - pn))
        s3.append(n * pn / (1 + pn))
        if abs(n * pn) < 1e-18:
            break
    c = 4 * PI ** 2
    return (c * (1 / 6 + 4 * csum(s1)), c * (-1 / 12 - 2 * csum(s2)), c * (-1 / 12 + 2 * csum(s3)))


def base_change_residuals(z: complex, t: Truncation = DEFAULT_TRUNCATION) -> tuple[float, float, float]:
    """Residuals of ``e_1(-1/z) = z^2 e_2(z)``, ``e_2(-1/z) = z^2 e_1(z)``, ``e_3(-1/z) = z^2 e_3(z)``."""
    z = _check_z(z)
    e = invariants_e(z, t)
    f = invariants_e(-1 / z, t)
    z2 = z * z
    return (abs(f[0] - z2 * e[1]), abs(f[1] - z2 * e[0]), abs(f[2] - z2 * e[2]))


def wzeta(pt: LatticePoint, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """Weierstrass zeta for ``(alpha, beta)`` in the open unit box."""
    pt.require_box()
    z = complex(pt.z)
    a, b = pt.alpha, pt.beta
    E2 = E(2, z, t)
    S1 = _S(0, b, 0.0, 0.0, a, z, t)
    S2 = _S(0, -b, 0.0, 0.0, -a, z, t)
    parts = [PI ** 2 / 3 * E2.value * pt.w, -sgn(b) * PI * 1j, -2j * PI * (S1.value - S2.value)]
    if delta(b):
        parts.append(PI / math.tan(PI * a))
    err = PI ** 2 / 3 * abs(pt.w) * E2.error + 2 * PI * (S1.error + S2.error)
    return EvalResult(csum(parts), err, S1.terms + S2.terms, ["qform"])


def eta_invariants(z: complex, t: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex, complex]:
    """``zeta`` at ``1/2``, ``z/2`` and ``-(1+z)/2``."""
    z = _check_z(z)
    return (wzeta(LatticePoint(0.5, 0.0, z), t).value,
            wzeta(LatticePoint(0.0, 0.5, z), t).value,
            wzeta(LatticePoint(-0.5, -0.5, z), t).value)


def eta_closed_form(z: complex, t: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex, complex]:
    z = _check_z(z)
    c = PI ** 2 / 6 * E(2, z, t).value
    return (c, c * z - 1j * PI, -c * (1 + z) + 1j * PI)


def legendre_residuals(z: complex, t: Truncation = DEFAULT_TRUNCATION) -> tuple[float, float, float]:
    """The three Legendre relations, each with target ``pi i / 2``."""
    z = _check_z(z)
    h1, h2, h3 = eta_invariants(z, t)
    target = 0.5j * PI
    return (abs(h1 * z / 2 - h2 / 2 - target),
            abs(h2 * (-(1 + z) / 2) - h3 * z / 2 - target),
            abs(h3 / 2 - h1 * (-(1 + z) / 2) - target))


def _qpoch(Z: complex, q: complex) -> complex:
    """``prod_{l>=0} (1 - Z q**l)`` as a sum of logs, principal branch per factor."""
    logs = []
    x = Z
    for _ in range(1_000_000):
        if abs(x) < 1e-18:
            break
        logs.append(cmath.log(1 - x))
        x *= q
    return cmath.exp(csum(logs))


def wsigma(pt: LatticePoint, t: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex]:
    """``(log sigma, sigma)`` from the logarithmic form and the product form."""
    pt.require_box()
    z = complex(pt.z)
    a, b = pt.alpha, pt.beta
    w = pt.w
    E2 = E(2, z, t).value
    head = PI ** 2 / 6 * E2 * w * w + sgn(b) * PI * 1j * (0.5 - w)
    parts = [head,
             -_S(1, b, 0.0, 0.0, a, z, t).value,
             -_S(1, -b, 0.0, 0.0, -a, z, t).value,
             2 * _S(1, 0.0, 0.0, 0.0, 0.0, z, t).value,
             -LOG_TWO_PI]
    if delta(b):
        parts.append(cmath.log(2 * math.sin(PI * a)))
    log_form = csum(parts)
    q = cmath.exp(2j * PI * z)
    num = _qpoch(e_of(a) * q ** frac_prime(b), q) * _qpoch(e_of(-a) * q ** frac_prime(-b), q)
    den = 2 * PI * _qpoch(q, q) ** 2
    pref = cmath.exp(head) * ((2 * math.sin(PI * a)) if delta(b) else 1.0)
    return log_form, pref * num / den


# ---------------------------------------------------------------- integration oracles

def _segment_integral(f, w: complex, lo: float = 0.0) -> complex:
    def g(x):
        return f(x) * w
    val, _ = integrate.quad(g, lo, 1.0, complex_func=True, epsabs=1e-14, epsrel=1e-12, limit=200)
    return val


def wzeta_by_integration(pt: LatticePoint, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``1/w - int_0^w (p(u) - 1/u^2) du`` along the straight segment."""
    pt.require_box()
    w = pt.w
    cut = 1e-3

    def f(x):
        u = x * w
        return wp(LatticePoint(x * pt.alpha, x * pt.beta, pt.z), t=t).value - 1 / (u * u)

    # p(u) - 1/u^2 = O(u^2): the piece on [0, cut] is below 1e-9 and dropped
    return 1 / w - _segment_integral(f, w, cut)


def log_wsigma_by_integration(pt: LatticePoint, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """``log w + int_0^w (zeta(u) - 1/u) du`` along the straight segment."""
    pt.require_box()
    w = pt.w
    cut = 1e-3

    def f(x):
        u = x * w
        return wzeta(LatticePoint(x * pt.alpha, x * pt.beta, pt.z), t).value - 1 / u

    return cmath.log(w) + _segment_integral(f, w, cut)
