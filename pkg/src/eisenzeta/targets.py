"""Named verification targets with default grids and pass thresholds.

Each target maps a parameter dict to an :class:`Outcome`.  The default grids
are the acceptance grids, so running every target over its grid is the full
acceptance run.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import classical as cl
from . import eisenstein as es
from . import hypergeom as hg
from . import identities as ids
from .numkernel import DEFAULT_TRUNCATION, CoverPoint, DomainError, Truncation

PI = math.pi
TUPLE_MAIN = (0.3, 0.7, 0.1, 0.2)


@dataclass
class Outcome:
    lhs: complex | float
    rhs: complex | float
    residual: float
    measure: str
    notes: str = ""
    # per-row threshold when the criterion depends on the point
    threshold: float | None = None
    extra: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Target:
    name: str
    summary: str
    threshold: float
    params: dict[str, tuple[str, object]]
    run: Callable[[dict, Truncation], Outcome]
    grid: Callable[[], list[dict]]
    acceptance: bool = True

    def with_defaults(self, given: dict) -> dict:
        unknown = set(given) - set(self.params)
        if unknown:
            raise DomainError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        return {k: given.get(k, default) for k, (_, default) in self.params.items()}


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(xs, dtype=float)), np.log(np.asarray(ys, dtype=float)), 1)[0])


def polar(mod: float, deg: float) -> complex:
    return mod * cmath.exp(1j * math.radians(deg))


def _eparams(p: dict) -> es.EisensteinParams:
    return es.EisensteinParams(p["s"], p["alpha"], p["beta"], p["mu"], p["nu"], p["tau"])


def _report(rep: ids.IdentityReport, measure: str = "scaled", notes: str = "") -> Outcome:
    res = {"rel": rep.rel_residual, "scaled": rep.scaled_residual, "abs": rep.abs_residual}[measure]
    return Outcome(rep.lhs, rep.rhs, res, measure, notes or rep.route_notes)


def _rel(lhs, rhs, notes: str = "") -> Outcome:
    return Outcome(lhs, rhs, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300), "rel", notes)


# ---------------------------------------------------------------- lattice sum and expansions

EIS = {"s": ("complex", 6.0), "alpha": ("float", 0.3), "beta": ("float", 0.7),
       "mu": ("float", 0.1), "nu": ("float", 0.2)}


def _thm1(p, t):
    ep = _eparams(p)
    brute = es.f_brute(ep, radius=int(p["radius"]))
    q = es.f_qform(ep, t).value
    out = _rel(q, brute.value, "q-form vs mean lattice sum")
    out.threshold = max(1e-6, brute.error / max(abs(brute.value), 1e-300))
    out.extra["oracle_tail"] = brute.error
    out.extra["abs_delta"] = abs(q - brute.value)
    return out


def _thm1_grid():
    taus = [1.0 + 0j, polar(1, 45), polar(2, -30)]
    tuples = [(0.0, 0.0, 0.0, 0.0), TUPLE_MAIN, (0.5, 0.5, 0.5, 0.5)]
    return [dict(s=complex(s), alpha=a, beta=b, mu=m, nu=n, tau=tau)
            for s in (4.0, 6.0, 8.5) for (a, b, m, n) in tuples for tau in taus]


def _thm2_scaling(p, t):
    J = int(p["J"])
    taus = [p["tau0"] * 2.0 ** -n for n in range(int(p["points"]))]
    R = [abs(es.remainder_subtraction(_eparams({**p, "tau": tau}), es.ExpansionOrder(J), t).value) for tau in taus]
    slope = loglog_slope([abs(x) for x in taus], R)
    return Outcome(slope, float(J), abs(slope - J), "slope", "fit of log|R_J| on log|tau|",
                   extra={"abs_tau": [abs(x) for x in taus], "abs_remainder": R})


def _thm3(p, t):
    ep = _eparams(p)
    o = es.ExpansionOrder(int(p["J"]), 0)
    ref = es.remainder_subtraction(ep, o, t).value
    rr = es.remainder_refined(ep, o, t)
    return _rel(rr.qhat_part + rr.sstar_part, ref, "dual-nome part plus S* sum vs subtraction")


def _thm3_scaling(p, t):
    J, K = int(p["J"]), int(p["K"])
    taus = [p["tau0"] * 2.0 ** -n for n in range(int(p["points"]))]
    R = [abs(es.remainder_refined(_eparams({**p, "tau": tau}), es.ExpansionOrder(J, K), t).rstar.value)
         for tau in taus]
    slope = loglog_slope([abs(x) for x in taus], R)
    expected = complex(p["s"]).real + J + K
    return Outcome(slope, expected, abs(slope - expected), "slope", "fit of log|R*_{J,K}| on log|tau|",
                   extra={"abs_tau": [abs(x) for x in taus], "abs_remainder": R})


def _mellin_barnes(p, t):
    ep = _eparams(p)
    o = es.ExpansionOrder(int(p["J"]))
    return _rel(es.remainder_mellin_barnes(ep, o, t).value, es.remainder_subtraction(ep, o, t).value,
                "vertical-line integral vs subtraction")


# ---------------------------------------------------------------- identities

RAM = {"k": ("int", 2), "alpha": ("float", 0.3), "beta": ("float", 0.7), "mu": ("float", 0.1),
       "nu": ("float", 0.2), "tau": ("complex", 1.0 + 0j)}
RAM_TUPLES = [TUPLE_MAIN, (0.3, 0.7, 0.0, 0.0), (0.2, 0.0, 0.3, 0.0)]
RAM_TAUS = [1.0 + 0j, polar(1, 30)]


def _ram_grid():
    rows = [dict(k=k, alpha=a, beta=b, mu=m, nu=n, tau=tau)
            for k in (-3, -2, -1, 0, 2, 3) for (a, b, m, n) in RAM_TUPLES for tau in RAM_TAUS]
    rows += [dict(k=1, alpha=0.3, beta=0.7, mu=0.1, nu=0.2, tau=tau) for tau in RAM_TAUS]
    return rows


def _ram(p, t):
    return _report(ids.ramanujan_check(p["k"], p["alpha"], p["beta"], p["mu"], p["nu"], p["tau"], False, t))


def _ram_variant(p, t):
    return _report(ids.variant_consistency(p["k"], p["alpha"], p["beta"], p["mu"], p["nu"], p["tau"], t), "rel")


def _euler(p, t):
    return _report(ids.euler_even(p["k"]), "rel")


def _odd(p, t):
    out = _report(ids.ramanujan_odd(p["k"], p["tau"], t))
    out.threshold = 1e-11 if (p["k"] == 1 and p["tau"] == 1) else 1e-10
    return out


def _odd_grid():
    rows = [dict(k=1, tau=1.0 + 0j)]
    rows += [dict(k=k, tau=tau) for k in (-2, 2) for tau in RAM_TAUS]
    return rows


def _fprime(p, t):
    return _report(ids.fprime_check(p["k"], p["alpha"], p["beta"], p["mu"], p["nu"], p["tau"], t), "rel")


def _fe(p, t):
    return _report(ids.functional_equation_check(p["r"], p["gamma"], p["kappa"], t), "rel")


# |gamma - round(gamma)| below this (but nonzero) makes the reflected pair cancel
# by more than 1e7; such draws are redrawn
FE_RESONANCE_GAP = 0.01


def _fe_grid(n: int = 100, seed: int = 20260916):
    rng = np.random.default_rng(seed)
    rows = []
    i = 0
    while len(rows) < n:
        r = complex(rng.uniform(1.5, 4.0), rng.uniform(-5.0, 5.0))
        g, k = rng.uniform(-3, 3), rng.uniform(-3, 3)
        if i % 10 == 0:
            k = float(round(k))
        if i % 7 == 0:
            g = float(round(g))
        i += 1
        if 0 < abs(g - round(g)) < FE_RESONANCE_GAP:
            continue
        rows.append(dict(r=r, gamma=float(g), kappa=float(k)))
    return rows


def _coeff(p, t):
    law = p["law"]
    X = p["X"]
    Y = CoverPoint(p["Ymod"], p["Yarg"])
    K = int(p["K"])
    if law == "reciprocity":
        res = ids.reciprocity_check(K, X, Y)
    elif law == "reciprocity-zero":
        res = ids.reciprocity_zero_check(K, Y)
    elif law == "reflection":
        res = ids.reflection_check(K, p["gamma"], p["kappa"])
    elif law == "generating-function":
        res = ids.generating_function_check(X, Y, K)
        return Outcome(res, 0.0, res, "abs", law, threshold=1e-10)
    else:
        raise DomainError(f"unknown coefficient law {law!r}")
    return Outcome(res, 0.0, res, "rel", law)


# the series about Z = 0 converges only inside the nearest pole of the
# generating function, at distance dist(arg Y, 2 pi Z) for |Y| = 1
GENFN_POLE_GAP = 0.6


def _coeff_grid(n: int = 50, seed: int = 20260917):
    rng = np.random.default_rng(seed)
    rows = []
    base = dict(K=40, X=0j, Ymod=1.0, Yarg=0.0, gamma=0.0, kappa=0.0)
    for i in range(n):
        X = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        Y = (float(rng.uniform(0.5, 2.0)), float(rng.uniform(-4 * PI, 4 * PI)))
        rows.append({**base, "law": "reciprocity", "X": X, "Ymod": Y[0], "Yarg": Y[1]})
        rows.append({**base, "law": "reciprocity-zero", "Ymod": Y[0], "Yarg": Y[1]})
    for i in range(n):
        g, k = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
        if i % 5 == 0:
            g = float(round(g))
        rows.append({**base, "law": "reflection", "gamma": g, "kappa": k})
    for i in range(n):
        X = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        if i % 10 == 0:
            # exact lifts of 1
            arg = 2 * PI * ((i // 10) - 2)
        else:
            while True:
                arg = float(rng.uniform(-4 * PI, 4 * PI))
                if min(abs(arg - 2 * PI * m) for m in range(-2, 3)) > GENFN_POLE_GAP:
                    break
        rows.append({**base, "law": "generating-function", "X": X, "Yarg": arg})
    return rows


# ---------------------------------------------------------------- classical

Z_PAIR = [1j, 0.5 + 1j]
Z_TRIPLE = [1j, 2j, 0.5 + 1j]


def _quasi(p, t):
    return _report(cl.quasimodular_check(p["weight"], p["z"], t))


def _weight0(p, t):
    return _report(cl.weight0_check(p["z"], t), "rel")


def _e2(p, t):
    v = cl.E(2, p["z"], t).value
    return Outcome(v, 3 / PI, abs(v - 3 / PI), "abs", "E_2(i) against 3/pi")


def _esum(p, t):
    e = cl.invariants_e(p["z"], t)
    tot = sum(e)
    return Outcome(tot, 0.0, abs(tot) / max(abs(x) for x in e), "rel", "|e1+e2+e3| / max|e_j|")


def _legendre(p, t):
    r = cl.legendre_residuals(p["z"], t)
    h1, h2, _ = cl.eta_invariants(p["z"], t)
    z = complex(p["z"])
    return Outcome(h1 * z / 2 - h2 / 2, 0.5j * PI, max(r), "abs", "max over the three relations",
                   extra={"residuals": list(r)})


def _pt(p) -> cl.LatticePoint:
    return cl.LatticePoint(p["alpha"], p["beta"], p["z"])


def _wp(p, t):
    pt = _pt(p)
    return _rel(cl.wp(pt, "qform", t).value, cl.wp(pt, "lattice", t, radius=int(p["radius"])).value,
                "q-form vs lattice sum")


def _sigma(p, t):
    lf, pf = cl.wsigma(_pt(p), t)
    return _rel(cmath.exp(lf), pf, "exp(log form) vs product form")


def _zeta_int(p, t):
    pt = _pt(p)
    return _rel(cl.wzeta(pt, t).value, cl.wzeta_by_integration(pt, t), "q-form vs integrated p")


def _sigma_int(p, t):
    pt = _pt(p)
    return _rel(cl.wsigma(pt, t)[0], cl.log_wsigma_by_integration(pt, t), "log form vs integrated zeta")


LATTICE_POINTS = [dict(alpha=0.3, beta=0.4, z=1j), dict(alpha=-0.25, beta=0.5, z=0.3 + 1.2j)]
SIGMA_POINTS = LATTICE_POINTS + [dict(alpha=0.3, beta=0.0, z=1j)]


# ---------------------------------------------------------------- Kummer layer

def _connection(p, t):
    lhs, rhs = hg.connection_sides(p["a"], p["c"], p["Z"], t)
    return _rel(lhs, rhs, "1F1 vs U pair")


def _connection_grid(n: int = 30, seed: int = 12):
    rng = np.random.default_rng(seed)
    args = [PI / 4, -PI / 4, 3 * PI / 4, -3 * PI / 4]
    rows = []
    for i in range(n):
        a = complex(rng.uniform(0.1, 1.9), rng.uniform(-0.5, 0.5))
        c = a + complex(rng.uniform(0.1, 1.9), rng.uniform(-0.5, 0.5))
        Z = rng.uniform(1, 10) * cmath.exp(1j * args[i % 4])
        rows.append(dict(a=a, c=c, Z=Z))
    return rows


def _reduction(p, t):
    return _rel(hg.u_aa(p["a"], p["Z"], t).value, hg.kummer_u(p["a"], p["a"], p["Z"], t, mode="quadrature").value,
                "incomplete-gamma reduction vs integral")


def _reduction_grid(n: int = 20, seed: int = 13):
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(n):
        a = complex(rng.uniform(0.1, 2.9), rng.uniform(-1, 1))
        Z = rng.uniform(0.5, 20) * cmath.exp(1j * rng.uniform(-1.5, 1.5))
        rows.append(dict(a=a, Z=Z))
    return rows


# ---------------------------------------------------------------- registry

def _one(**kw):
    return lambda: [dict(kw)]


_TARGETS = [
    Target("thm1", "exact q-form against the mean lattice sum", 1e-6,
           {**EIS, "tau": ("complex", 1.0 + 0j), "radius": ("int", 1500)}, _thm1, _thm1_grid),
    Target("thm2-scaling", "slope of the subtraction remainder in |tau|", 0.25,
           {**EIS, "s": ("complex", 2.5 + 0j), "J": ("int", 1), "tau0": ("complex", polar(0.2, 45)),
            "points": ("int", 6)},
           _thm2_scaling, lambda: [dict(J=J) for J in (1, 2, 3)]),
    Target("thm3", "dual-nome part plus S* reproduces the remainder", 1e-7,
           {**EIS, "s": ("complex", 2.5 + 0j), "J": ("int", 2), "tau": ("complex", polar(0.4, 60))},
           _thm3, lambda: [dict(tau=polar(0.4, 60)), dict(tau=polar(0.4, -60))]),
    Target("thm3-scaling", "slope of the refined remainder in |tau|", 0.3,
           {**EIS, "s": ("complex", 2.5 + 0j), "J": ("int", 2), "K": ("int", 1),
            "tau0": ("complex", polar(0.3, 45)), "points": ("int", 5)},
           _thm3_scaling, _one()),
    Target("mellin-barnes", "vertical-line remainder against subtraction", 1e-6,
           {**EIS, "s": ("complex", 3.2 + 0j), "J": ("int", 1), "tau": ("complex", polar(0.3, 45))},
           _mellin_barnes, _one()),
    Target("ramanujan-2-31", "twisted Ramanujan family at integer k", 1e-9, RAM, _ram, _ram_grid),
    Target("ramanujan-variant", "variant form at tau against direct form at 1/tau", 1e-10, RAM,
           _ram_variant, _ram_grid),
    Target("euler-2-32", "zeta(2k) against its Bernoulli closed form", 1e-12, {"k": ("int", 3)}, _euler,
           lambda: [dict(k=k) for k in range(1, 11)]),
    Target("ramanujan-2-33", "odd zeta values at q and at the dual nome", 1e-10,
           {"k": ("int", 1), "tau": ("complex", 1.0 + 0j)}, _odd, _odd_grid),
    Target("functional-equation", "Lerch psi against its reflection", 1e-9,
           {"r": ("complex", 2.5 + 0.5j), "gamma": ("float", 0.3), "kappa": ("float", 0.7)}, _fe, _fe_grid),
    Target("coeff-laws", "reciprocity, reflection and generating function of C_k", 1e-11,
           {"law": ("str", "reciprocity"), "K": ("int", 40), "X": ("complex", 0.3 + 0.1j),
            "Ymod": ("float", 1.0), "Yarg": ("float", 1.0), "gamma": ("float", 0.3), "kappa": ("float", 0.7)},
           _coeff, _coeff_grid),
    Target("quasimodular-3-4", "weight-2k transformation law of E_2k", 1e-9,
           {"weight": ("int", 4), "z": ("complex", 1j)}, _quasi,
           lambda: [dict(weight=w, z=z) for w in (-4, -2, 0, 2, 4, 6) for z in Z_PAIR]),
    Target("weight0", "weight-0 law with the explicit logarithm", 1e-9, {"z": ("complex", 1j)}, _weight0,
           lambda: [dict(z=z) for z in Z_PAIR], acceptance=False),
    Target("e2-at-i", "E_2(i) = 3/pi", 1e-10, {"z": ("complex", 1j)}, _e2, _one(z=1j)),
    Target("e-sum-zero", "e1 + e2 + e3 = 0", 1e-11, {"z": ("complex", 1j)}, _esum,
           lambda: [dict(z=z) for z in Z_TRIPLE]),
    Target("legendre", "Legendre relations with value pi i/2", 1e-11, {"z": ("complex", 1j)}, _legendre,
           lambda: [dict(z=z) for z in Z_TRIPLE]),
    Target("wp-lattice", "p from the q-form against the lattice sum", 5e-4,
           {"alpha": ("float", 0.3), "beta": ("float", 0.4), "z": ("complex", 1j), "radius": ("int", 1500)},
           _wp, lambda: [dict(p) for p in LATTICE_POINTS]),
    Target("sigma-forms", "sigma from the log form against the product", 1e-9,
           {"alpha": ("float", 0.3), "beta": ("float", 0.4), "z": ("complex", 1j)}, _sigma,
           lambda: [dict(p) for p in SIGMA_POINTS]),
    Target("zeta-integration", "Weierstrass zeta against the integral of p", 1e-6,
           {"alpha": ("float", 0.3), "beta": ("float", 0.4), "z": ("complex", 1j)}, _zeta_int,
           lambda: [dict(p) for p in LATTICE_POINTS]),
    Target("sigma-integration", "log sigma against the integral of zeta", 1e-6,
           {"alpha": ("float", 0.3), "beta": ("float", 0.4), "z": ("complex", 1j)}, _sigma_int,
           lambda: [dict(p) for p in LATTICE_POINTS]),
    Target("kummer-connection", "1F1 to U connection in the open sectors", 1e-8,
           {"a": ("complex", 0.7 + 0.2j), "c": ("complex", 1.9 + 0j), "Z": ("complex", polar(4, 45))},
           _connection, _connection_grid),
    Target("kummer-reduction", "U(a; a; Z) reduction against quadrature", 1e-9,
           {"a": ("complex", 1.3 + 0.2j), "Z": ("complex", polar(3, 30))}, _reduction, _reduction_grid),
    Target("fprime", "s-derivative at 1-k: q-series side against expansion side", 1e-9,
           {"k": ("int", 2), "alpha": ("float", 0.3), "beta": ("float", 0.7), "mu": ("float", 0.1),
            "nu": ("float", 0.2), "tau": ("complex", 1.0 + 0j)},
           _fprime, lambda: [dict(k=k, alpha=0.3, beta=0.7, mu=0.1, nu=0.2, tau=tau)
                             for k in (1, 2, 3) for tau in RAM_TAUS], acceptance=False),
]

TARGETS: dict[str, Target] = {tg.name: tg for tg in _TARGETS}


def get_target(name: str) -> Target:
    try:
        return TARGETS[name]
    except KeyError:
        raise DomainError(f"unknown verify target {name!r}; known: {', '.join(TARGETS)}") from None


def run_target(name: str, params: dict | None = None, t: Truncation = DEFAULT_TRUNCATION) -> Outcome:
    tg = get_target(name)
    return tg.run(tg.with_defaults(params or {}), t)


def passed(tg: Target, out: Outcome, tol: float | None = None) -> bool:
    limit = tol if tol is not None else (out.threshold if out.threshold is not None else tg.threshold)
    return bool(out.residual <= limit)


__all__ = ["Outcome", "Target", "TARGETS", "get_target", "run_target", "passed", "loglog_slope", "polar"]
