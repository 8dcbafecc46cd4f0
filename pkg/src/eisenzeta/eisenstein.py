"""Generalized holomorphic Eisenstein series and its expansions.

    F(s; a, b; m, n; z) = mean over the two boundary branches of
        sum'_{M, N} e((a+M) m + (b+N) n) / (a + M + (b+N) z)**s

Routes:

* ``f_brute``: truncated lattice sum (oracle, ``Re s >= 4``).
* ``f_qform``: exact q-series transformation, valid for every ``s``.
* ``asymptotic_SJ`` / ``remainder_subtraction``: small-``tau`` expansion
  and its remainder, the latter defined by subtraction from ``f_qform``.
* ``remainder_mellin_barnes``: the remainder as a contour integral.
* ``remainder_refined``: the remainder split into dual-nome q-series and a
  double sum of Kummer functions, plus that sum's own expansion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .coeffs import coeff_C
from .hypergeom import u_aa, u_aa_asymptotic
from .lerch import (
    LOG_TWO_PI,
    log_gamma,
    pochhammer,
    psi,
    psi_bilateral,
    reciprocal_gamma,
)
from .numkernel import (
    DEFAULT_TRUNCATION,
    MINUS,
    PLUS,
    TWO_PI,
    BranchSelector,
    BudgetError,
    CoverPoint,
    DomainError,
    EvalResult,
    RegimeError,
    Truncation,
    csum,
    delta,
    e_of,
    eps_of,
    frac_parts,
    frac_prime,
    tau_to_z,
)
from .qseries import SArgs, s_eval


@dataclass(frozen=True)
class EisensteinParams:
    s: complex
    alpha: float
    beta: float
    mu: float
    nu: float
    tau: complex

    def __post_init__(self):
        tau_to_z(self.tau)  # validates the sector
        for name in ("alpha", "beta", "mu", "nu"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")

    @property
    def z(self) -> complex:
        return 1j * complex(self.tau)

    @property
    def sigma(self) -> float:
        return complex(self.s).real

    @property
    def eps(self) -> int:
        return eps_of(self.tau)

    def replace(self, **kw) -> EisensteinParams:
        d = dict(s=self.s, alpha=self.alpha, beta=self.beta, mu=self.mu, nu=self.nu, tau=self.tau)
        d.update(kw)
        return EisensteinParams(**d)


@dataclass(frozen=True)
class ExpansionOrder:
    J: int = 1
    K: int = 0

    def __post_init__(self):
        if self.J < 0 or self.K < 0:
            raise DomainError("expansion orders must be non-negative")


def _pow_2pi(s: complex) -> complex:
    return cmath.exp(complex(s) * LOG_TWO_PI)


def _ppow(base: complex, s: complex) -> complex:
    """Principal power ``base**s``."""
    return cmath.exp(complex(s) * cmath.log(complex(base)))


# ---------------------------------------------------------------- lattice oracle

def lattice_constant(z: complex) -> float:
    """``min |x + y z|`` over the boundary of the max-norm unit square."""
    z = complex(z)
    y = min(1.0, max(-1.0, -z.real / abs(z) ** 2))
    x = min(1.0, max(-1.0, -z.real))
    return min(abs(1 + y * z), abs(x + z))


def brute_tail_bound(p: EisensteinParams, radius: int) -> float:
    """Bound on the discarded shells ``max(|M|, |N|) > radius``."""
    sigma = p.sigma
    A = max(abs(p.alpha), abs(p.beta))
    X = radius + 1 - A
    if X <= 1:
        return math.inf
    cz = lattice_constant(p.z)
    shell_sum = (radius + 1) * X ** -sigma + X ** (2 - sigma) / (sigma - 2) + A * X ** (1 - sigma) / (sigma - 1)
    return 8.0 * cz ** -sigma * math.exp(math.pi * abs(complex(p.s).imag)) * shell_sum


def f_brute(p: EisensteinParams, b: BranchSelector | None = None, radius: int = 1500,
            chunk: int = 64) -> EvalResult:
    """Lattice sum over ``|M|, |N| <= radius``; ``b=None`` gives the branch mean."""
    if p.sigma < 4:
        raise RegimeError("lattice oracle needs Re s >= 4")
    s = complex(p.s)
    z = p.z
    M = np.arange(-radius, radius + 1, dtype=float)
    x = p.alpha + M
    parts = []
    mass = 0.0  # sum of moduli, for the rounding estimate
    neg_row = 0j  # summands on the negative real axis, computed with arg = +pi
    for start in range(-radius, radius + 1, chunk):
        N = np.arange(start, min(start + chunk, radius + 1), dtype=float)
        y = (p.beta + N)[:, None]
        w = x[None, :] + y * z
        zero = w == 0
        w = np.where(zero, 1.0, w)
        logw = np.log(np.abs(w)) + 1j * np.angle(w)
        on_axis = (w.imag == 0) & (w.real < 0)
        logw = np.where(on_axis, logw.real + 1j * math.pi, logw)
        ph = 2j * np.pi * (x[None, :] * p.mu + y * p.nu)
        with np.errstate(over="ignore", invalid="ignore"):
            terms = np.exp(ph - s * logw)
        terms = np.where(zero, 0.0, terms)
        if not np.isfinite(terms).all():
            raise DomainError("a lattice point sits on the pole; the sum overflows")
        parts.append(complex(terms.sum()))
        mass += float(np.abs(terms).sum())
        if on_axis.any():
            neg_row += complex(terms[on_axis].sum())
    plus = csum(parts)
    # the minus branch multiplies each negative-axis summand by e(s)
    minus = plus + neg_row * (cmath.exp(2j * math.pi * s) - 1)
    err = brute_tail_bound(p, radius) + 1e-15 * mass
    if b is PLUS:
        val = plus
    elif b is MINUS:
        val = minus
    else:
        val = 0.5 * (plus + minus)
    return EvalResult(val, err, (2 * radius + 1) ** 2, ["lattice"])


# ---------------------------------------------------------------- constant terms

def sin_pi(s: complex) -> complex:
    """``sin(pi s)``, exactly zero at integers."""
    s = complex(s)
    n = round(s.real)
    return (-1) ** (n % 2) * cmath.sin(math.pi * (s - n))


def coeff_A_first(s, alpha, mu, t=DEFAULT_TRUNCATION) -> complex:
    s = complex(s)
    return cmath.cos(math.pi * s) * psi(s, -alpha, -mu, t) + psi(s, alpha, mu, t)


def coeff_A_second(s, alpha, mu, t=DEFAULT_TRUNCATION) -> complex:
    s = complex(s)
    pref = e_of(alpha * mu) * _pow_2pi(s) * reciprocal_gamma(s) / 2
    if pref == 0:
        return 0j
    return pref * (cmath.exp(-0.5j * math.pi * s) * psi(1 - s, -mu, alpha, t)
                   + cmath.exp(0.5j * math.pi * s) * psi(1 - s, mu, -alpha, t))


def coeff_B1_first(s, alpha, mu, t=DEFAULT_TRUNCATION) -> complex:
    s = complex(s)
    sn = sin_pi(s)
    if sn == 0:
        return 0j
    return 1j * sn * psi(s, -alpha, -mu, t)


def coeff_B1_second(s, alpha, mu, t=DEFAULT_TRUNCATION) -> complex:
    s = complex(s)
    pref = 1j * e_of(alpha * mu) * _pow_2pi(s) * reciprocal_gamma(s) / 2
    if pref == 0:
        return 0j
    return pref * (cmath.exp(0.5j * math.pi * (1 - s)) * psi(1 - s, -mu, alpha, t)
                   + cmath.exp(-0.5j * math.pi * (1 - s)) * psi(1 - s, mu, -alpha, t))


def coeff_B2_first(s, beta, nu, t=DEFAULT_TRUNCATION) -> complex:
    s = complex(s)
    return (cmath.exp(0.5j * math.pi * s) * psi(s, -beta, -nu, t)
            + cmath.exp(-0.5j * math.pi * s) * psi(s, beta, nu, t))


def coeff_B2_second(s, beta, nu, t=DEFAULT_TRUNCATION) -> complex:
    s = complex(s)
    pref = e_of(beta * nu) * _pow_2pi(s) * reciprocal_gamma(s)
    if pref == 0:
        return 0j
    return pref * psi(1 - s, nu, -beta, t)


def abc_coeffs(p: EisensteinParams, t: Truncation = DEFAULT_TRUNCATION,
               form: str = "auto") -> tuple[complex, complex, complex]:
    """``(A, B1, B2)``; ``form`` is ``auto``, ``first`` or ``second``."""
    if form == "auto":
        form = "second" if p.sigma >= 1 else "first"
    if form == "first":
        return (coeff_A_first(p.s, p.alpha, p.mu, t), coeff_B1_first(p.s, p.alpha, p.mu, t),
                coeff_B2_first(p.s, p.beta, p.nu, t))
    if form == "second":
        return (coeff_A_second(p.s, p.alpha, p.mu, t), coeff_B1_second(p.s, p.alpha, p.mu, t),
                coeff_B2_second(p.s, p.beta, p.nu, t))
    raise DomainError(f"unknown form {form!r}")


# ---------------------------------------------------------------- exact q-form

def f_qform(p: EisensteinParams, t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """Exact evaluation through the q-series transformation."""
    s = complex(p.s)
    z = p.z
    const = 0j
    if delta(p.beta):
        const = abc_coeffs(p, t)[0]
    pref = e_of(p.alpha * p.mu) * _pow_2pi(s) * reciprocal_gamma(s)
    if pref == 0:
        return EvalResult(const, 0.0, 0, ["constant-only"])
    S1 = s_eval(SArgs(1 - s, p.beta, -p.mu, p.nu, p.alpha, z), t)
    S2 = s_eval(SArgs(1 - s, -p.beta, p.mu, -p.nu, -p.alpha, z), t)
    h1 = cmath.exp(-0.5j * math.pi * s)
    h2 = cmath.exp(0.5j * math.pi * s)
    val = const + pref * (h1 * S1.value + h2 * S2.value)
    err = abs(pref) * (abs(h1) * S1.error + abs(h2) * S2.error)
    return EvalResult(val, err, S1.terms + S2.terms, ["q-form"])


# ---------------------------------------------------------------- small-tau expansion

def _check_noninteger(s: complex) -> None:
    s = complex(s)
    if abs(s.imag) < 1e-6 and abs(s.real - round(s.real)) < 1e-6:
        raise RegimeError("s within 1e-6 of an integer; use the closed-form identities")


def series_term(p: EisensteinParams, j: int, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """The ``j``-th term (``j >= -1``) of the small-``tau`` series."""
    s = complex(p.s)
    C = coeff_C(j + 1, frac_parts(p.beta)[0], CoverPoint.e_tilde(p.nu))[j + 1]
    if C == 0:
        return 0j
    return (2 * sin_pi(s) * 1j ** (j + 1) * pochhammer(s, j) / math.factorial(j + 1)
            * psi(s + j, -p.alpha, -p.mu, t) * C * complex(p.tau) ** j)


def asymptotic_SJ(p: EisensteinParams, o: ExpansionOrder,
                  t: Truncation = DEFAULT_TRUNCATION) -> tuple[complex, complex]:
    """``(main, series)`` of the small-``tau`` expansion up to order ``J``."""
    _check_noninteger(p.s)
    if not p.sigma > -o.J:
        raise RegimeError("expansion needs Re s > -J")
    s = complex(p.s)
    main = 0j
    if delta(p.beta):
        main += abc_coeffs(p, t)[1]
    if delta(p.alpha):
        main += abc_coeffs(p, t)[2] * _ppow(p.tau, -s)
    series = csum([series_term(p, j, t) for j in range(-1, o.J)])
    return main, series


def remainder_subtraction(p: EisensteinParams, o: ExpansionOrder,
                          t: Truncation = DEFAULT_TRUNCATION) -> EvalResult:
    """``R_J = F - main - series`` with ``F`` from the exact q-form."""
    main, series = asymptotic_SJ(p, o, t)
    F = f_qform(p, t)
    val = csum([F.value, -main, -series])
    rounding = 4e-16 * max(abs(F.value), abs(main), abs(series))
    return EvalResult(val, F.error + rounding, F.terms, ["subtraction"])


# ---------------------------------------------------------------- Mellin-Barnes

def mb_abscissa(sigma: float, J: int) -> float:
    lo = max(-sigma, J - 1)
    if lo >= J:
        raise RegimeError("no admissible abscissa: need Re s > -J")
    return 0.5 * (lo + J)


def mb_integrand(p: EisensteinParams, w: complex, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Sum over both branches of the contour integrand at ``w``."""
    s = complex(p.s)
    tau = complex(p.tau)
    lg = log_gamma(s + w) + log_gamma(-w) - log_gamma(s)
    out = 0j
    for b in (PLUS, MINUS):
        sg = b.sign
        pz = psi_bilateral(s + w, p.alpha, p.mu, b, t).value
        pw = psi(-w, sg * p.beta, sg * p.nu, t)
        log_tau = complex(math.log(abs(tau)), cmath.phase(tau) + sg * math.pi / 2)
        out += cmath.exp(lg + w * log_tau) * pz * pw
    return out


def remainder_mellin_barnes(p: EisensteinParams, o: ExpansionOrder, t: Truncation = DEFAULT_TRUNCATION,
                            u: float | None = None, step: float = 0.1) -> EvalResult:
    """``R_J`` by trapezoidal quadrature on ``Re w = u`` up to ``|Im w| = contour_half_length``."""
    if o.J < 1:
        raise RegimeError("Mellin-Barnes remainder needs J >= 1")
    if abs(cmath.phase(complex(p.tau))) > math.pi / 2 - 0.1:
        raise RegimeError("|arg tau| must be at most pi/2 - 0.1")
    if u is None:
        u = mb_abscissa(p.sigma, o.J)
    elif not max(-p.sigma, o.J - 1) < u < o.J:
        raise RegimeError("abscissa outside the admissible interval")
    L = t.contour_half_length
    n = int(math.ceil(L / step))
    vals = [mb_integrand(p, complex(u, k * step), t) for k in range(-n, n + 1)]
    edge = max(abs(vals[0]), abs(vals[-1]))
    total = csum(vals) * step / TWO_PI
    peak = max(abs(v) for v in vals)
    if edge > 1e-8 * peak:
        raise BudgetError("contour integrand has not decayed at the cutoff", total, edge * L)
    # trapezoid error on a strip of half-width d free of poles
    d = min(u - max(-p.sigma, o.J - 1), o.J - u)
    mass = sum(abs(v) for v in vals) * step / TWO_PI
    err = edge * step / TWO_PI * 10 + mass * math.exp(-TWO_PI * d / step) + 1e-15 * abs(total)
    return EvalResult(total, err, len(vals), ["mellin-barnes"])


# ---------------------------------------------------------------- refined remainder

@dataclass
class RefinedRemainder:
    qhat_part: complex
    sstar_part: complex
    sstar: complex
    sstar_series: complex
    rstar: EvalResult


def _check_strict_sector(tau: complex) -> int:
    eps = eps_of(tau)
    if eps == 0 or complex(tau).imag == 0:
        raise RegimeError("refined remainder needs 0 < |arg tau| < pi/2")
    return eps


def qhat_part(p: EisensteinParams, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    s = complex(p.s)
    eps = _check_strict_sector(p.tau)
    pref = e_of(p.beta * p.nu) * _ppow(TWO_PI / complex(p.tau), s) * reciprocal_gamma(s)
    if pref == 0:
        return 0j
    S1 = s_eval(SArgs(1 - s, p.alpha, p.nu, p.mu, -p.beta, p.z, dual=True), t).value
    S2 = s_eval(SArgs(1 - s, -p.alpha, -p.nu, -p.mu, p.beta, p.z, dual=True), t).value
    return pref * (S1 + cmath.exp(eps * 1j * math.pi * s) * S2)


_ASYM_SWITCH = 40.0


def exp_log(w: complex) -> complex:
    """``exp(w)`` reading ``Im w`` as an argument in ``(-pi, pi)``."""
    return math.exp(w.real) * cmath.exp(1j * w.imag)


def sstar_sum(p: EisensteinParams, J: int, t: Truncation = DEFAULT_TRUNCATION,
              asym_terms: int = 8) -> EvalResult:
    """The double sum of ``U(s+J; s+J; .)`` values.

    The first ``asym_terms`` terms of the large-argument expansion of ``U``
    factor into products of Lerch functions and are summed in closed form;
    the remaining differences decay fast and are summed directly.
    """
    if J < 1:
        raise RegimeError("needs J >= 1")
    s = complex(p.s)
    if not p.sigma > 1 - J:
        raise RegimeError("double sum converges only for Re s > 1 - J")
    eps = _check_strict_sector(p.tau)
    tau = complex(p.tau)
    a = s + J
    K = asym_terms
    log_c = cmath.log(TWO_PI / tau)  # principal; arg in (-pi/2, pi/2)
    rot = cmath.exp(eps * 1j * math.pi * s)

    # closed-form part
    closed = []
    poch = 1 + 0j
    for k in range(K):
        common = (-1) ** k * poch * cmath.exp(-(a + k) * log_c) * psi(a + k, -p.alpha, -p.mu, t)
        first = psi(1 + J + k, p.nu, -p.beta, t)
        second = rot * cmath.exp(-eps * 1j * math.pi * (a + k)) * psi(1 + J + k, -p.nu, p.beta, t)
        closed.append(common * (first - second))
        poch *= a + k

    def diff(Zlog: complex) -> complex:
        """``U(a; a; Z) - (first K asymptotic terms)`` at ``Z = exp(Zlog)``."""
        Zabs = math.exp(Zlog.real)
        if Zabs > _ASYM_SWITCH:
            # optimally truncated tail of the expansion; remainder ~ exp(-|Z|)
            pk = pochhammer(a, K)
            tail = []
            for k in range(K, K + int(Zabs)):
                term = (-1) ** k * pk * cmath.exp(-(a + k) * Zlog)
                if tail and abs(term) > abs(tail[-1]):
                    break
                tail.append(term)
                if abs(term) < 1e-17 * abs(tail[0]):
                    break
                pk *= a + k
            return csum(tail)
        exact = u_aa(a, Zabs * cmath.exp(1j * Zlog.imag), t).value
        return exact - csum(u_aa_asymptotic(a, exp_log(Zlog), K))

    x0 = frac_prime(-p.alpha)
    closed_total = csum(closed)
    scale = max(abs(closed_total), 1e-300)
    parts = []
    count = 0
    for branch in (0, 1):
        y0 = frac_prime(p.nu) if branch == 0 else frac_prime(-p.nu)
        ysign = 1.0 if branch == 0 else -1.0
        m = 0
        while True:
            x = x0 + m
            row = []
            n = 0
            while True:
                y = y0 + n
                Zlog = log_c + math.log(x) + math.log(y)
                if branch == 1:
                    Zlog += eps * 1j * math.pi
                coef = cmath.exp(2j * math.pi * (-p.mu * x - ysign * p.beta * y) + (s - 1) * math.log(y))
                term = coef * diff(Zlog)
                if branch == 1:
                    term = -rot * term
                row.append(term)
                count += 1
                if count > t.max_terms:
                    raise BudgetError("double Kummer sum exceeded the term budget")
                if n >= 2 and abs(term) < 1e-18 * scale:
                    break
                n += 1
            parts.append(csum(row))
            if m >= 2 and max(abs(v) for v in row) < 1e-18 * scale:
                break
            m += 1
    total = closed_total + csum(parts)
    err = 1e-15 * scale
    return EvalResult(total, err, count, ["kummer-double-sum"])


def sstar_series(p: EisensteinParams, J: int, K: int, t: Truncation = DEFAULT_TRUNCATION) -> complex:
    """Asymptotic series of the Kummer double sum, ``K`` terms."""
    s = complex(p.s)
    eps = _check_strict_sector(p.tau)
    tau = complex(p.tau)
    log_tau_rot = complex(math.log(abs(tau)), cmath.phase(tau) - eps * math.pi / 2)
    log_base = complex(LOG_TWO_PI, -eps * math.pi / 2)
    pref = e_of(-p.beta * p.nu) * cmath.exp(-(s - 1) * log_base)
    C = coeff_C(J + K + 1, frac_parts(p.beta)[0], CoverPoint.e_tilde(p.nu))
    terms = []
    for k in range(K):
        # phase from the residues at w = -s-J-k of the contour representation
        phase = (-1) ** (k + 1) * eps ** (J + k + 1)
        terms.append(phase * pochhammer(s + J, k) / math.factorial(J + k + 1)
                     * psi(s + J + k, -p.alpha, -p.mu, t) * C[J + k + 1]
                     * cmath.exp((s + J + k) * log_tau_rot))
    return pref * csum(terms)


def remainder_refined(p: EisensteinParams, o: ExpansionOrder,
                      t: Truncation = DEFAULT_TRUNCATION) -> RefinedRemainder:
    """Dual-nome q-series part, Kummer-sum part, and the Kummer sum's expansion."""
    if o.J < 1:
        raise RegimeError("refined remainder needs J >= 1")
    if not p.sigma > 1 - o.J:
        raise RegimeError("refined remainder needs Re s > 1 - J")
    s = complex(p.s)
    J = o.J
    qh = qhat_part(p, t)
    S = sstar_sum(p, J, t)
    pref = (e_of(p.beta * p.nu) * (-1) ** J * pochhammer(s, J) * _ppow(TWO_PI / complex(p.tau), s)
            * reciprocal_gamma(s) * reciprocal_gamma(1 - s))
    series = sstar_series(p, J, o.K, t) if o.K > 0 else 0j
    rstar = EvalResult(S.value - series, S.error, S.terms, ["sstar-minus-series"])
    return RefinedRemainder(qh, pref * S.value, S.value, series, rstar)


# ---------------------------------------------------------------- contour derivative

def f_qform_derivative(p: EisensteinParams, t: Truncation = DEFAULT_TRUNCATION,
                       radius: float = 0.25, nodes: int = 32) -> complex:
    """``dF/ds`` by trapezoidal Cauchy integration of ``f_qform`` on a circle."""
    s0 = complex(p.s)
    acc = []
    for k in range(nodes):
        ph = cmath.exp(2j * math.pi * k / nodes)
        acc.append(f_qform(p.replace(s=s0 + radius * ph), t).value / ph)
    return csum(acc) / (nodes * radius)
