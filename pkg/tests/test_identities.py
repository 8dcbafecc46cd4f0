import cmath
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eisenzeta import (
    CoverPoint,
    DomainError,
    euler_even,
    fprime_check,
    functional_equation_check,
    quasimodular_check,
    ramanujan_check,
    ramanujan_odd,
)
from eisenzeta.identities import (
    bernoulli_block,
    fprime_contour,
    fprime_expansion_terms,
    fprime_qform,
    generating_function_check,
    reciprocity_check,
    reciprocity_zero_check,
    reflection_check,
    variant_consistency,
    zeta_int,
)
from eisenzeta.numkernel import RegimeError, cover_pow

DIAG = cmath.exp(1j * math.pi / 4)
GENERIC = (0.3, 0.7, 0.1, 0.2)


@pytest.mark.parametrize("k", [-3, -2, -1, 0, 1, 2, 3])
@pytest.mark.parametrize("tau", [1.0, DIAG, 0.6 - 0.3j])
def test_twisted_family(k, tau):
    assert ramanujan_check(k, *GENERIC, tau).scaled_residual <= 1e-9


@pytest.mark.parametrize(
    "tup",
    [
        (0.3, 0.7, 0.0, 0.0),  # shifts only
        (0.0, 0.0, 0.3, 0.7),  # twists only
        (0.3, 0.0, 0.2, 0.0),  # beta = nu = 0
        (0.0, 0.4, 0.0, 0.6),  # alpha = nu = 0 needs k != 1 handling below
    ],
)
@pytest.mark.parametrize("k", [-2, -1, 0, 2, 3])
def test_specializations(tup, k):
    assert ramanujan_check(k, *tup, 1.2 + 0.4j).scaled_residual <= 1e-9


def test_example_rows():
    assert ramanujan_check(2, 0.3, 0.7, 0, 0, 1.0).rel_residual <= 1e-10
    assert ramanujan_check(-1, 0, 0, 0, 0, 1.0).scaled_residual <= 1e-10
    assert ramanujan_check(2, 0, 0, 0, 0, 1.0).scaled_residual <= 1e-10


def test_k1_needs_nonintegral_shifts():
    with pytest.raises(DomainError):
        ramanujan_check(1, 0.0, 0.5, 0.1, 0.2, 1.0)
    assert ramanujan_check(1, *GENERIC, 1.0).scaled_residual <= 1e-9


def test_empty_block_below_minus_one():
    assert bernoulli_block(-2, *GENERIC, 1.0) == 0
    # k = -1 keeps the single j = 0 term; C_0 is nonzero only for integral twists
    assert bernoulli_block(-1, 0.3, 0.7, 0.0, 0.0, 1.0) != 0


@pytest.mark.parametrize("k", [-2, 0, 2, 3])
@pytest.mark.parametrize("tau", [1.0, 1.3 * DIAG])
def test_variant(k, tau):
    assert ramanujan_check(k, *GENERIC, tau, variant=True).scaled_residual <= 1e-10
    assert variant_consistency(k, *GENERIC, tau).rel_residual <= 1e-10


@settings(max_examples=20)
@given(
    st.sampled_from([-2, -1, 0, 2, 3]),
    st.integers(-15, 15).map(lambda n: n / 8 + 1 / 16),
    st.integers(-15, 15).map(lambda n: n / 8),
    st.integers(-10, 10).map(lambda n: n / 10),
    st.integers(-10, 10).map(lambda n: n / 10),
    st.floats(0.6, 1.6),
    st.floats(-0.8, 0.8),
)
def test_twisted_family_property(k, a, b, m, n, mod, arg):
    assert ramanujan_check(k, a, b, m, n, cmath.rect(mod, arg)).scaled_residual <= 1e-9


def test_even_zeta_values():
    assert euler_even(1).lhs == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert euler_even(2).rhs == pytest.approx(math.pi ** 4 / 90, rel=1e-15)
    for k in range(1, 11):
        assert euler_even(k).rel_residual <= 1e-12
    with pytest.raises(DomainError):
        euler_even(21)


def test_odd_zeta_relation():
    assert ramanujan_odd(1, 1.0).scaled_residual <= 1e-11
    assert ramanujan_odd(1, cmath.exp(1j * math.pi / 6)).scaled_residual <= 1e-10
    assert ramanujan_odd(-2, 1.0).scaled_residual <= 1e-10
    assert zeta_int(-3) == pytest.approx(1 / 120)
    with pytest.raises(DomainError):
        ramanujan_odd(0, 1.0)


def test_derivative_routes():
    assert fprime_check(2, *GENERIC, 1.0).rel_residual <= 1e-8
    assert fprime_check(3, 0, 0, 0, 0, 1.0).rel_residual <= 1e-8
    assert len(fprime_expansion_terms(2, *GENERIC, 1.0)) == 4


@pytest.mark.slow
def test_derivative_contour_route():
    want = fprime_qform(2, *GENERIC, 1.1 + 0.2j)
    assert abs(fprime_contour(2, *GENERIC, 1.1 + 0.2j) - want) <= 1e-7 * abs(want)


def test_derivative_matches_quasimodular_data():
    # weight -4 at z = i: both reduce to the same transformation data
    assert fprime_check(3, 0, 0, 0, 0, 1.0).rel_residual <= 1e-8
    assert quasimodular_check(-4, 1j).scaled_residual <= 1e-9


@settings(max_examples=40)
@given(
    st.floats(1.5, 4),
    st.floats(-5, 5),
    st.integers(-40, 40).map(lambda n: n / 16 + 1 / 32),
    st.floats(0.05, 0.95),
)
def test_functional_equation_report(re, im, gamma, kappa):
    # the Gamma pole at positive integer r amplifies rounding by 1/dist(r, Z)
    assume(abs(complex(re - round(re), im)) >= 1e-3)
    rep = functional_equation_check(complex(re, im), gamma, kappa)
    assert rep.scaled_residual <= 1e-9


@given(st.integers(0, 30), st.complex_numbers(max_magnitude=2), st.floats(-2, 2))
def test_reciprocity(K, X, kappa):
    if abs(kappa - round(kappa)) < 1e-3:
        kappa += 0.01
    assert reciprocity_check(K, X, CoverPoint.e_tilde(kappa)) <= 1e-11


@given(st.integers(0, 30), st.floats(0.01, 0.99))
def test_reciprocity_at_zero(K, kappa):
    assert reciprocity_zero_check(K, CoverPoint.e_tilde(kappa)) <= 1e-11


@given(st.integers(0, 30), st.floats(-3, 3), st.floats(-3, 3))
def test_reflection(K, gamma, kappa):
    gap = abs(kappa - round(kappa))
    assume(gap == 0 or gap > 1e-6)  # closer twists are refused as near-resonant
    # rounding is amplified by 1/dist(kappa, Z) near integral twists
    assert reflection_check(K, gamma, kappa) <= max(1e-11, 1e-15 / (gap or 1))


def test_reflection_refuses_resonant_twist():
    with pytest.raises(DomainError):
        reflection_check(3, 0.2, 5e-324)


@pytest.mark.parametrize("gamma", [0.0, 1.0, -2.0])
def test_reflection_integral_shift(gamma):
    assert reflection_check(10, gamma, 0.3) <= 1e-11


@settings(max_examples=25)
@given(st.complex_numbers(max_magnitude=2), st.floats(-2, 2))
def test_generating_function(X, turns):
    # the Taylor series about 0 has radius dist(2 pi turns, 2 pi Z), so keep a gap
    gap = abs(turns - round(turns))
    if 0 < gap < 0.1:
        turns = round(turns) + 0.1
    Y = CoverPoint.e_tilde(turns)
    # absolute deviation carries the amplitude |Y^X|, up to e^(4 pi |Im X|)
    amp = max(1.0, abs(cover_pow(Y, X)))
    assert generating_function_check(X, Y) / amp <= 1e-10


@pytest.mark.parametrize("r", [2, 3 + 1e-300j])
def test_functional_equation_refuses_positive_integers(r):
    with pytest.raises(RegimeError):
        functional_equation_check(r, 0.3, 0.7)
