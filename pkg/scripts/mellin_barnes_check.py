"""Vertical-line remainder against the subtraction remainder, over several
abscissae and arguments of tau."""

import cmath
import math
from dataclasses import dataclass

from eisenzeta import (
    EisensteinParams,
    ExpansionOrder,
    remainder_mellin_barnes,
    remainder_subtraction,
)


@dataclass
class MBConfig:
    s: complex = 3.2
    J: int = 1
    modulus: float = 0.3
    args_deg: tuple[float, ...] = (0.0, 22.5, 45.0, -45.0)
    abscissae: tuple[float, ...] = (0.35, 0.5, 0.65)


def run(cfg: MBConfig) -> None:
    o = ExpansionOrder(cfg.J)
    for deg in cfg.args_deg:
        tau = cfg.modulus * cmath.exp(1j * math.radians(deg))
        p = EisensteinParams(complex(cfg.s), 0.3, 0.7, 0.1, 0.2, tau)
        ref = remainder_subtraction(p, o).value
        for u in cfg.abscissae:
            mb = remainder_mellin_barnes(p, o, u=u)
            print(f"arg {deg:6.1f}  u={u:.2f}  rel diff {abs(mb.value - ref) / abs(ref):.2e}  "
                  f"reported error {mb.error:.1e}")


if __name__ == "__main__":
    run(MBConfig())
