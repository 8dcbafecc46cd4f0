import cmath
import math

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eisenzeta import (
    MINUS,
    PLUS,
    CoverPoint,
    LerchArgs,
    PoleError,
    coeff_C,
    gamma_fn,
    hurwitz_zeta,
    psi_bilateral,
    psi_lerch,
    psi_special,
    residue_at_1,
)
from eisenzeta.lerch import (
    lerch_phi,
    phi_lerch,
    pochhammer,
    psi,
    reciprocal_gamma,
    reciprocal_gamma_deriv,
)
from eisenzeta.numkernel import delta, e_of, frac_parts


def oracle_psi(r, gamma, kappa):
    a = frac_parts(gamma)[1]
    z = mpmath.expjpi(2 * mpmath.mpf(kappa))
    return complex(mpmath.expjpi(2 * mpmath.mpf(a) * kappa) * mpmath.lerchphi(z, mpmath.mpc(r), a))


def test_zeta_two():
    assert psi(2, 1, 0) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)


def test_psi_at_zero_closed_form():
    assert psi_special(0, 0, 0) == pytest.approx(-0.5)
    assert psi(0, 0, 0) == pytest.approx(-0.5)


def test_residue():
    assert residue_at_1(0.3, 0) == pytest.approx(1.0)
    assert abs(residue_at_1(0.3, 0.4)) < 1e-15


def test_pole_raises():
    with pytest.raises(PoleError):
        psi_lerch(LerchArgs(1, 0.3, 2.0))
    with pytest.raises(PoleError):
        hurwitz_zeta(1, 0.5)


@pytest.mark.parametrize("r, a, want", [(-1, 1, -1 / 12), (0, 1, -0.5), (3, 1, 1.2020569031595942)])
def test_hurwitz_values(r, a, want):
    assert hurwitz_zeta(r, a).value == pytest.approx(want, rel=1e-14)


@pytest.mark.parametrize(
    "r, gamma, kappa",
    [
        (0.5, 0.3, 0.7),
        (2.5 + 1j, 0.25, 0.1),
        (0.2 - 3j, 1.7, 0.45),
        (1.0, 0.4, 0.3),
        (-0.7 + 0.5j, 0.6, 0.2),
        (-2.5, 0.3, 0.0),
        (-3.2 + 2j, 0.8, 0.35),
        (5.0, 0.1, 0.9),
    ],
)
def test_psi_against_mpmath(r, gamma, kappa):
    assert cmath.isclose(psi(r, gamma, kappa), oracle_psi(r, gamma, kappa), rel_tol=1e-11)


def test_strip_value_against_cesaro_sum():
    # averaged partial sums of the conditionally convergent defining series
    r, a, kappa = 0.5, 0.3, 0.7
    n = 200_000
    import numpy as np

    x = a + np.arange(n)
    partial = np.cumsum(np.exp(2j * np.pi * x * kappa) * x ** (-r))
    cesaro = partial[-1000:].mean()
    assert abs(psi(r, a, kappa) - cesaro) < 1e-3


def test_twist_shift():
    for r in (2.3, 0.6 + 1j, -1.5):
        assert cmath.isclose(psi(r, 0.3, 1.4), psi(r, 0.3, 0.4) * e_of(0.3), rel_tol=1e-12)


def test_phi_is_shift_invariant_in_twist():
    assert cmath.isclose(phi_lerch(2.5, 0.3, 1.2), phi_lerch(2.5, 0.3, 0.2), rel_tol=1e-13)


def test_special_against_fe_route():
    want = -coeff_C(2, 0.25, CoverPoint.e_tilde(0.5))[2] / 2
    assert psi_special(1, 0.25, 0.5) == pytest.approx(want, rel=1e-15)
    assert abs(psi(-1, 0.25, 0.5, route="fe") - want) < 1e-10


grid_reals = st.integers(-200, 200).map(lambda n: n / 80)


@given(st.integers(0, 3), grid_reals, grid_reals)
def test_special_value_symmetry(j, alpha, mu):
    k = -j
    lhs = psi_special(j, mu, -alpha)
    rhs = (-1) ** (1 - k) * psi_special(j, -mu, alpha) - (1 if k == 0 else 0) * delta(mu)
    assert abs(lhs - rhs) <= 1e-11 * max(1, abs(lhs))


@settings(max_examples=25)
@given(st.floats(1.5, 4), st.floats(-5, 5), st.floats(-1, 1), st.floats(0.05, 0.95))
def test_functional_equation_holds(re, im, gamma, kappa):
    r = complex(re, im)
    assume(abs(r - round(re)) > 1e-3)  # near the Gamma(1 - r) poles the two sides cancel
    gap = abs(gamma - round(gamma))
    assume(gap == 0 or gap > 0.01)  # conditioning grows like gap**(-Re r)
    direct = psi(r, gamma, kappa)
    via = psi(r, gamma, kappa, route="fe")
    assert abs(direct - via) <= 1e-9 * max(1, abs(direct))


@given(st.floats(1.3, 6), st.floats(0.05, 1))
def test_hurwitz_matches_untwisted_psi(r, a):
    assert cmath.isclose(hurwitz_zeta(r, a).value, psi(r, a, 0.0), rel_tol=1e-12)


def test_exp_zeta_termwise():
    r, kappa = 3.0, 0.3
    direct = sum(e_of(k * kappa) * k ** -r for k in range(1, 200_000))
    assert abs(psi(r, 0, kappa) - direct) < 1e-10
    assert psi(r, 2, kappa) == psi(r, 0, kappa)


def test_fe_route_refuses_positive_integers():
    with pytest.raises(ValueError):
        psi(2, 0.3, 0.5, route="fe")


def test_tiny_negative_twist_is_kept():
    a = 0.5
    ref = complex(mpmath.expjpi(a * -2e-30) * mpmath.lerchphi(mpmath.expjpi(-2e-30), -0.5, a))
    assert cmath.isclose(psi(-0.5, a, -1e-30, route="series"), ref, rel_tol=1e-12)


def test_lerch_phi_domain():
    with pytest.raises(ValueError):
        lerch_phi(2, 0.0, 0.1)


def test_bilateral_special_values():
    assert psi_bilateral(0, 0, 0.3, PLUS).value == pytest.approx(-1)
    assert abs(psi_bilateral(0, 0.5, 0.3, PLUS).value) < 1e-15
    assert abs(psi_bilateral(0, 0.5, 0.3, MINUS).value) < 1e-15


@pytest.mark.parametrize("b", [PLUS, MINUS])
@pytest.mark.parametrize("r, gamma, kappa", [(4, 0.2, 0), (2.5 + 1j, 0.3, 0.6), (-1.5, 0.7, 0.25)])
def test_bilateral_dual_routes(b, r, gamma, kappa):
    split = psi_bilateral(r, gamma, kappa, b, route="split").value
    fe = psi_bilateral(r, gamma, kappa, b, route="fe").value
    assert abs(split - fe) <= 1e-10 * max(1, abs(split))


def test_gamma_helpers():
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    for h in range(3):
        assert reciprocal_gamma(-h) == 0
        assert reciprocal_gamma_deriv(-h) == pytest.approx((-1) ** h * math.factorial(h))
    assert pochhammer(2.5, -1) == pytest.approx(1 / 1.5)
    assert pochhammer(2.5, 3) == pytest.approx(2.5 * 3.5 * 4.5)


@given(st.complex_numbers(max_magnitude=40).filter(lambda s: s.real > 0.1 or abs(s.imag) > 0.5))
def test_gamma_against_mpmath(s):
    ref = complex(mpmath.gamma(s))
    if abs(ref) > 1e-290:
        assert cmath.isclose(gamma_fn(s), ref, rel_tol=5e-13)
