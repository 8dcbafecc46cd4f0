import math

import pytest

from eisenzeta.numkernel import DomainError
from eisenzeta.targets import (
    TARGETS,
    Outcome,
    get_target,
    loglog_slope,
    passed,
    polar,
    run_target,
)


def test_registry_lookup():
    assert get_target("thm1").threshold == 1e-6
    with pytest.raises(DomainError, match="unknown verify target"):
        get_target("nope")


def test_unknown_parameter_refused():
    with pytest.raises(DomainError, match="unknown parameter"):
        TARGETS["euler-2-32"].with_defaults({"kk": 1})


def test_defaults_fill_in():
    p = TARGETS["ramanujan-2-33"].with_defaults({"k": 2})
    assert p == {"k": 2, "tau": 1.0 + 0j}


@pytest.mark.parametrize(
    "name, size",
    [("thm1", 27), ("thm2-scaling", 3), ("thm3", 2), ("ramanujan-2-31", 38), ("euler-2-32", 10),
     ("ramanujan-2-33", 5), ("functional-equation", 100), ("coeff-laws", 200),
     ("quasimodular-3-4", 12), ("legendre", 3), ("kummer-connection", 30), ("kummer-reduction", 20)],
)
def test_grid_sizes(name, size):
    assert len(TARGETS[name].grid()) == size


def test_grids_are_deterministic():
    for tg in TARGETS.values():
        assert tg.grid() == tg.grid()


def test_functional_grid_in_range():
    for row in TARGETS["functional-equation"].grid():
        assert 1.5 <= row["r"].real <= 4
        g = row["gamma"]
        assert g == round(g) or abs(g - round(g)) >= 0.01


def test_every_grid_row_is_accepted_by_its_target():
    for tg in TARGETS.values():
        for row in tg.grid():
            tg.with_defaults(row)


def test_loglog_slope_exact_power():
    xs = [2.0 ** -n for n in range(6)]
    assert loglog_slope(xs, [3 * x ** 2.5 for x in xs]) == pytest.approx(2.5, abs=1e-12)


def test_polar():
    assert abs(polar(2, 90) - 2j) < 1e-15


def test_passed_prefers_row_threshold():
    tg = TARGETS["euler-2-32"]
    out = Outcome(1, 1, 5e-12, "rel")
    assert not passed(tg, out)
    out.threshold = 1e-11
    assert passed(tg, out)
    assert not passed(tg, out, tol=1e-13)


def test_run_target_defaults():
    out = run_target("euler-2-32")
    assert out.residual <= 1e-12
    assert out.lhs == pytest.approx(math.pi ** 6 / 945, rel=1e-14)


def test_thresholds_positive():
    for tg in TARGETS.values():
        assert tg.threshold > 0 and tg.summary
