"""Log-log slope fits of the small-tau remainders.

Prints |R_J| (subtraction remainder), the same with the dual-nome part removed,
and |R*_{J,K}| along a ray tau_n = tau0 * 2^-n, with least-squares slopes.
"""

import argparse
import cmath
import math
from dataclasses import dataclass

from eisenzeta import (
    EisensteinParams,
    ExpansionOrder,
    remainder_refined,
    remainder_subtraction,
)
from eisenzeta.targets import loglog_slope


@dataclass
class FitConfig:
    s: complex = 2.5
    alpha: float = 0.3
    beta: float = 0.7
    mu: float = 0.1
    nu: float = 0.2
    tau0: float = 0.2
    arg_deg: float = 45.0
    points: int = 6
    orders: tuple[int, ...] = (1, 2, 3)
    K: int = 1


def ray(cfg: FitConfig):
    base = cfg.tau0 * cmath.exp(1j * math.radians(cfg.arg_deg))
    return [base * 2.0 ** -n for n in range(cfg.points)]


def run(cfg: FitConfig) -> None:
    taus = ray(cfg)
    xs = [abs(t) for t in taus]
    for J in cfg.orders:
        full, rest, star = [], [], []
        for tau in taus:
            p = EisensteinParams(complex(cfg.s), cfg.alpha, cfg.beta, cfg.mu, cfg.nu, tau)
            R = remainder_subtraction(p, ExpansionOrder(J)).value
            rr = remainder_refined(p, ExpansionOrder(J, cfg.K))
            full.append(abs(R))
            rest.append(abs(R - rr.qhat_part))
            star.append(abs(rr.rstar.value))
        print(f"J={J}")
        print(f"  {'|tau|':>10} {'|R_J|':>12} {'|R_J - qhat|':>14} {'|R*_J,K|':>12}")
        for x, a, b, c in zip(xs, full, rest, star):
            print(f"  {x:10.4e} {a:12.4e} {b:14.4e} {c:12.4e}")
        print(f"  slope |R_J|         {loglog_slope(xs, full):6.3f}  (target {J})")
        print(f"  slope |R_J - qhat|  {loglog_slope(xs, rest):6.3f}")
        print(f"  slope |R*_J,K|      {loglog_slope(xs, star):6.3f}  (target {complex(cfg.s).real + J + cfg.K})")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s", type=float, default=FitConfig.s)
    ap.add_argument("--tau0", type=float, default=FitConfig.tau0)
    ap.add_argument("--arg-deg", type=float, default=FitConfig.arg_deg)
    ap.add_argument("--points", type=int, default=FitConfig.points)
    ap.add_argument("--K", type=int, default=FitConfig.K)
    a = ap.parse_args()
    run(FitConfig(s=a.s, tau0=a.tau0, arg_deg=a.arg_deg, points=a.points, K=a.K))


if __name__ == "__main__":
    main()
