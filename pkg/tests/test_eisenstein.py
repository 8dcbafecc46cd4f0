import cmath
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from eisenzeta import (
    MINUS,
    PLUS,
    E,
    EisensteinParams,
    ExpansionOrder,
    RegimeError,
    abc_coeffs,
    asymptotic_SJ,
    f_brute,
    f_qform,
    f_sJ,
    psi_bilateral,
    remainder_mellin_barnes,
    remainder_refined,
    remainder_subtraction,
)
from eisenzeta.classical import eisenstein_constant
from eisenzeta.eisenstein import (
    coeff_A_first,
    coeff_A_second,
    coeff_B1_first,
    coeff_B1_second,
    coeff_B2_first,
    coeff_B2_second,
    mb_integrand,
    series_term,
)
from eisenzeta.numkernel import DomainError, e_of

GENERIC = (0.3, 0.7, 0.1, 0.2)
DIAG = cmath.exp(1j * math.pi / 4)


def params(s, tup=GENERIC, tau=1.0):
    return EisensteinParams(s, *tup, tau)


def test_brute_mean_real_at_half_integers():
    mean = f_brute(params(6, (0.5, 0.5, 0.0, 0.0)), radius=300).value
    assert abs(mean.imag) <= 1e-10


def test_brute_branches_differ_only_on_cut():
    p = params(6.5, (0.5, 0.0, 0.0, 0.0))  # beta = 0 puts summands on the cut
    plus = f_brute(p, PLUS, radius=200).value
    minus = f_brute(p, MINUS, radius=200).value
    assert abs(plus - minus) > 1e-3
    off_cut = params(6.5, (0.5, 0.5, 0.0, 0.0))
    assert f_brute(off_cut, PLUS, radius=200).value == f_brute(off_cut, MINUS, radius=200).value
    assert abs((plus + minus) / 2 - f_brute(p, radius=200).value) < 1e-12


def test_brute_out_of_regime():
    with pytest.raises(RegimeError):
        f_brute(params(3.5))


@settings(max_examples=15)
@given(
    st.floats(4.5, 9),
    st.floats(-1, 1),
    st.floats(-1, 1),
    st.floats(-1, 1),
    st.floats(-1, 1),
    st.floats(0.5, 2),
    st.floats(-1, 1),
)
def test_radius_doubling_within_reported_error(s, a, b, m, n, mod, arg):
    p = EisensteinParams(s, a, b, m, n, cmath.rect(mod, arg))
    try:
        coarse = f_brute(p, radius=60)
    except DomainError:
        assume(False)  # lattice point within overflow distance of the pole
    fine = f_brute(p, radius=120)
    assert abs(coarse.value - fine.value) <= coarse.error


@pytest.mark.parametrize("tup", [GENERIC, (0.5, 0.5, 0.5, 0.5), (0.0, 0.0, 0.0, 0.0), (0.0, 0.25, 0.5, 0.0)])
@pytest.mark.parametrize("tau", [1.0, DIAG, 2 * cmath.exp(-1j * math.pi / 6)])
def test_qform_matches_brute(tup, tau):
    p = params(6.5, tup, tau)
    brute = f_brute(p, radius=400)
    exact = f_qform(p).value
    assert abs(exact - brute.value) <= max(1e-9 * abs(brute.value), 2 * brute.error)


def test_weight_four_lambert_route():
    z = 1j
    F = f_qform(params(4, (0, 0, 0, 0), -1j * z)).value
    want = (2j * math.pi) ** 4 * eisenstein_constant(4) * E(4, z).value / math.factorial(3)
    assert cmath.isclose(F, want, rel_tol=1e-12)


def test_weight_six_lambert_route():
    z = 2j
    F = f_qform(params(6, (0, 0, 0, 0), -1j * z)).value
    want = (2j * math.pi) ** 6 * eisenstein_constant(6) * E(6, z).value / math.factorial(5)
    assert cmath.isclose(F, want, rel_tol=1e-12)


@pytest.mark.parametrize("s", [0, -1, -3])
def test_qform_at_nonpositive_integers(s):
    p = params(s, (0.3, 0.0, 0.2, 0.4), 0.7 + 0.2j)
    assert f_qform(p).value == abc_coeffs(p)[0]
    assert f_qform(params(s)).value == 0


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.75])
def test_constant_term_at_two(alpha):
    A = abc_coeffs(params(2, (alpha, 0, 0, 0)))[0]
    assert cmath.isclose(A, math.pi ** 2 / math.sin(math.pi * alpha) ** 2, rel_tol=1e-12)


@pytest.mark.parametrize("s", [2.7, 1.6 + 0.5j, 3.3, 1.2])
def test_constant_term_forms_agree(s):
    a, m = 0.4, 0.1
    assert cmath.isclose(coeff_A_first(s, a, m), coeff_A_second(s, a, m), rel_tol=1e-10)
    assert cmath.isclose(coeff_B1_first(s, a, m), coeff_B1_second(s, a, m), rel_tol=1e-10)
    assert cmath.isclose(coeff_B2_first(s, 0.7, 0.2), coeff_B2_second(s, 0.7, 0.2), rel_tol=1e-10)


def test_b1_is_a_minus_bilateral():
    s, a, m = 2.7, 0.4, 0.1
    diff = coeff_A_second(s, a, m) - psi_bilateral(s, a, m, PLUS).value
    assert abs(coeff_B1_second(s, a, m) - diff) <= 1e-10 * abs(diff)


def test_b1_vanishes_at_integer():
    assert coeff_B1_first(3, 0.3, 0.2) == 0


def test_periodicity_in_alpha_and_mu():
    # calibrated on the brute oracle: unit shift of alpha is exact, of mu costs e(alpha)
    p = params(6.5, GENERIC, 0.8 + 0.3j)
    base = f_qform(p).value
    assert abs(f_qform(p.replace(alpha=1.3)).value - base) <= 1e-10 * abs(base)
    assert abs(f_qform(p.replace(mu=1.1)).value - e_of(0.3) * base) <= 1e-10 * abs(base)
    brute = f_brute(p.replace(mu=1.1), radius=200).value
    assert abs(brute - e_of(0.3) * f_brute(p, radius=200).value) <= 1e-10 * abs(base)


shifts = st.integers(-16, 16).map(lambda k: k / 8 + 1 / 16)  # odd sixteenths


@settings(max_examples=15)
@given(shifts, shifts, shifts, shifts, st.floats(-3, 6))
def test_periodicity_property(a, b, m, n, s):
    p = EisensteinParams(complex(s, 0.5), a, b, m, n, 0.9 + 0.2j)
    base = f_qform(p).value
    shifted = f_qform(p.replace(alpha=a + 1, mu=m + 1)).value
    assert abs(shifted - e_of(a) * base) <= 1e-9 * max(1, abs(base))


def test_expansion_refuses_integer_s():
    with pytest.raises(RegimeError):
        asymptotic_SJ(params(3), ExpansionOrder(2))


def test_minus_one_term_needs_integral_twist():
    p = params(2.5, (0.3, 0.7, 0.1, 0.2), 0.1 * DIAG)
    assert series_term(p, -1) == 0
    assert series_term(p.replace(nu=1.0), -1) != 0


def test_order_zero_without_integral_shifts():
    p = params(2.5, GENERIC, 0.05 * DIAG)
    main, series = asymptotic_SJ(p, ExpansionOrder(0))
    assert main == 0
    R0 = remainder_subtraction(p, ExpansionOrder(0)).value
    assert 1e-3 < abs(R0) < 1e3


@pytest.mark.parametrize("J", [0, 1, 2])
def test_telescoping(J):
    p = params(2.5, (0.3, 0.7, 0.1, 0.0), 0.1 * DIAG)
    rj = remainder_subtraction(p, ExpansionOrder(J)).value
    rj1 = remainder_subtraction(p, ExpansionOrder(J + 1)).value
    assert abs((rj - rj1) - series_term(p, J)) <= 1e-10 * max(1, abs(rj))


def test_remainder_shrinks_with_tau():
    p = params(2.5, (0.3, 0.7, 0.1, 0.0), 0.2 * DIAG)
    big = abs(remainder_subtraction(p, ExpansionOrder(2)).value)
    small = abs(remainder_subtraction(p.replace(tau=0.05 * DIAG), ExpansionOrder(2)).value)
    assert small < big


@pytest.mark.slow
def test_mellin_barnes_matches_subtraction():
    p = params(3.2, GENERIC, 0.3 * DIAG)
    o = ExpansionOrder(1)
    ref = remainder_subtraction(p, o).value
    assert abs(remainder_mellin_barnes(p, o).value - ref) <= 1e-6 * max(1, abs(ref))


@pytest.mark.slow
def test_mellin_barnes_abscissa_independence():
    p = params(3.2, GENERIC, 0.3 * DIAG)
    o = ExpansionOrder(1)
    # stay 0.35 away from the Gamma(-w) poles so the trapezoid error is ~1e-10
    a = remainder_mellin_barnes(p, o, u=0.35).value
    b = remainder_mellin_barnes(p, o, u=0.65).value
    assert abs(a - b) <= 1e-8 * max(1, abs(a))


def decay_ratio(tau, v):
    p = params(3.2, GENERIC, tau)
    peak = max(abs(mb_integrand(p, complex(0.5, x))) for x in (-1, 0, 1))
    return max(abs(mb_integrand(p, complex(0.5, x))) for x in (-v, v)) / peak


def test_mellin_barnes_integrand_decay_real_tau():
    assert decay_ratio(0.3, 30) < 1e-12


def test_mellin_barnes_integrand_decay_diagonal():
    # slower on one side at |arg tau| = pi/4; the default cutoff 40 still leaves ~1e-9
    assert decay_ratio(0.3 * DIAG, 30) < 1e-5
    assert decay_ratio(0.3 * DIAG, 40) < 1e-8


def test_mellin_barnes_regime_guards():
    with pytest.raises(RegimeError):
        remainder_mellin_barnes(params(3.2), ExpansionOrder(0))
    with pytest.raises(RegimeError):
        remainder_mellin_barnes(params(3.2, GENERIC, cmath.rect(1, 1.55)), ExpansionOrder(1))


@pytest.mark.parametrize("sign", [1, -1])
def test_refined_remainder_identity(sign):
    p = params(2.5, GENERIC, 0.4 * cmath.exp(sign * 1j * math.pi / 3))
    o = ExpansionOrder(2, 1)
    ref = remainder_subtraction(p, o).value
    rr = remainder_refined(p, o)
    assert abs(rr.qhat_part + rr.sstar_part - ref) <= 1e-7 * max(1, abs(ref))


def test_dual_nome_twist_sign():
    # the second dual-nome series carries -nu; flipping it breaks the identity
    from eisenzeta.eisenstein import eps_of, reciprocal_gamma
    from eisenzeta.qseries import SArgs, s_eval

    p = params(2.5, GENERIC, 0.4 * cmath.exp(1j * math.pi / 3))
    o = ExpansionOrder(2, 1)
    ref = remainder_subtraction(p, o).value
    rr = remainder_refined(p, o)
    s = complex(p.s)
    pref = e_of(p.beta * p.nu) * (2 * math.pi / p.tau) ** s * reciprocal_gamma(s)
    rot = cmath.exp(eps_of(p.tau) * 1j * math.pi * s)
    flip = s_eval(SArgs(1 - s, -p.alpha, p.nu, -p.mu, p.beta, p.z, dual=True)).value
    keep = s_eval(SArgs(1 - s, -p.alpha, -p.nu, -p.mu, p.beta, p.z, dual=True)).value
    wrong = rr.qhat_part + pref * rot * (flip - keep)
    assert abs(rr.qhat_part + rr.sstar_part - ref) <= 1e-7 * abs(ref)
    assert abs(wrong + rr.sstar_part - ref) > 1e-3 * abs(ref)


def test_refined_needs_strict_sector():
    with pytest.raises(RegimeError):
        remainder_refined(params(2.5, GENERIC, 0.4), ExpansionOrder(2, 1))


def test_double_sum_terms_decay():
    tau = 0.4 * DIAG
    mods = []
    for k in range(5, 30):
        m = n = k
        Z = 2 * math.pi * (m + 0.7) * (n + 0.8) / tau
        mods.append(abs(f_sJ(2.5, 2, Z).value))
    assert all(b < a for a, b in zip(mods, mods[1:]))


def test_brute_refuses_overflowing_pole():
    with pytest.raises(DomainError):
        f_brute(params(5, (0.0, 1e-218, 0.0, 0.0), 1.0), radius=4)
