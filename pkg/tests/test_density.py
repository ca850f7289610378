import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from eisencubic.characters import cubic_symbol_slow
from eisencubic.density import (
    check_support,
    density_csv,
    error_term_E,
    explicit_formula,
    family_arrays,
    family_mass,
    gamma_term,
    gamma_term_leading,
    h9,
    nonvanishing_bound,
    one_level_density_primeside,
    one_level_density_zeroside,
    pair_euler_product,
    predicted_mass,
    prime_sum_S,
    prime_sum_S_by_character,
    zeta_K,
)
from eisencubic.eisenstein import ONE_MINUS_OMEGA, EisensteinInt as E
from eisencubic.errors import SupportExceeded, UnsupportedRange
from eisencubic.sieve import brute_force_primes, brute_full_family, brute_thin_family
from eisencubic.testfunctions import TestFunction, fejer, fejer_squared, gaussian


def test_h9_is_nine():
    assert h9() == 9


def test_zeta_K_two_against_dirichlet_series():
    L = mpmath.dirichlet(2, [0, 1, -1])
    assert zeta_K(2.0) == pytest.approx(float(mpmath.zeta(2) * L), rel=1e-14)


def test_pair_euler_product_converged():
    assert pair_euler_product(10**5) == pytest.approx(pair_euler_product(10**6), rel=1e-6)


@pytest.mark.parametrize("ident,brute", [("thin", brute_thin_family), ("full", brute_full_family)])
def test_family_arrays_match_brute_force(ident, brute):
    fam = family_arrays(ident, 2000)
    assert len(fam) == len(brute(2000))
    assert np.all(np.diff(fam.norms) >= 0)


def test_family_arrays_reuse_larger_cache():
    big = family_arrays("thin", 5000)
    small = family_arrays("thin", 1000)
    assert len(small) == int(np.sum(big.norms <= 1000))


@pytest.mark.parametrize("ident", ["thin", "full"])
def test_exponents_against_slow_symbol(ident):
    fam = family_arrays(ident, 3000)
    for pi in [E(-1, 3), E(2, 3), E(-2, 0), E(-5, 0), E(5, 0), ONE_MINUS_OMEGA]:
        e = fam.exponents_at(pi)
        for i in range(0, len(fam), max(1, len(fam) // 60)):
            val = cubic_symbol_slow(pi, fam.modulus(i))
            assert e[i] == (-1 if val.is_zero else val.e)


def test_empty_family_below_smallest_conductor():
    m = family_mass("thin", gaussian(), 10.0)
    assert m.count == 0 and m.A == 0


def test_thin_mass_ratio_near_one():
    m = family_mass("thin", gaussian(), 10**5)
    assert abs(m.ratio - 1) < 0.05


def test_mass_increases_with_X():
    values = [family_mass("thin", gaussian(), X).A for X in (10**3, 10**4, 10**5)]
    assert values == sorted(values)


def test_full_mass_forms_differ_by_constant():
    w = gaussian()
    derived = predicted_mass("full", w, 1e5, "derived")
    stated = predicted_mass("full", w, 1e5, "stated")
    # (4/9) (pi / 3 sqrt3)^2 against 2 pi / (9 sqrt3)
    assert derived / stated == pytest.approx(2 * math.sqrt(3) * math.pi / 27, rel=1e-14)
    with pytest.raises(ValueError):
        predicted_mass("full", w, 1e5, "other")


def test_prime_sum_orders_agree():
    w = gaussian()
    for ident, X, y in [("thin", 2000, 300), ("full", 3000, 200)]:
        a = prime_sum_S(ident, w, X, y)
        b = prime_sum_S_by_character(ident, w, X, y)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


def test_prime_sum_trivial_only_is_chebyshev():
    w = gaussian()
    y = 100
    theta = math.fsum(math.log(p.norm()) for p in brute_force_primes(y))
    w1 = float(w(np.array([0.1]))[0])
    s = prime_sum_S("thin", w, 10.0, y)
    assert s.real == pytest.approx(w1 * theta, rel=1e-13) and s.imag == 0 and s.real > 0


def test_prime_sum_hand_enumeration_small_y():
    w = gaussian()
    X, y = 500, 8
    fam = family_arrays("thin", math.floor(X * w.cutoff))
    wt = w(fam.norms / X)
    primes = (E(-2, 0), E(2, 3), E(-1, -3))
    assert [p.norm() for p in primes] == [4, 7, 7]
    total = float(w(np.array([1 / X]))[0]) * (math.log(4) + 2 * math.log(7))
    for i in range(len(fam)):
        for p in primes:
            val = cubic_symbol_slow(p, fam.modulus(i))
            if not val.is_zero:
                total += wt[i] * complex(val) * math.log(p.norm())
    assert abs(prime_sum_S("thin", w, X, y) - total) < 1e-9


def test_check_support_rejects_wide_transform():
    bad = TestFunction("wide", 0.5, lambda x: np.zeros_like(x), lambda t: np.ones_like(np.asarray(t, float)))
    with pytest.raises(SupportExceeded):
        check_support(bad)
    check_support(fejer(0.5))


@pytest.mark.parametrize("phi,power", [(fejer(1.0), 1.5), (fejer_squared(1.0), 2.0)], ids=["fejer", "fejer_squared"])
def test_gamma_term_approaches_leading_term(phi, power):
    # the correction is O(1/L^2) up to logs, faster when phi decays faster
    d1 = abs(gamma_term(phi, 1e4) - gamma_term_leading(phi, 1e4))
    d2 = abs(gamma_term(phi, 1e12) - gamma_term_leading(phi, 1e12))
    assert d2 < d1 * (math.log(1e4) / math.log(1e12)) ** power


def test_explicit_formula_single_character():
    ef = explicit_formula(E(1, 9), fejer_squared(1.0), 1e4, T=25.0)
    assert ef.zeros > 0
    assert ef.difference <= ef.budget


def test_primeside_real_and_small_support_has_no_primes():
    w = gaussian()
    rep = one_level_density_primeside("thin", w, fejer(0.05), 1e4)
    assert isinstance(rep.D_primeside, float)
    assert all(v == 0 for v in rep.prime_terms.values())
    assert rep.D_primeside == pytest.approx(rep.conductor_term + rep.gamma_term, abs=1e-15)


def test_zero_side_matches_prime_side():
    rep = one_level_density_zeroside("thin", gaussian(), fejer_squared(1.0), 300, T=25.0)
    assert rep.consistent()
    assert rep.budget < 0.05
    text = density_csv([rep])
    assert text.splitlines()[0] == "# eisencubic density v1"
    assert len(text.splitlines()) == 3


def test_error_term_sublinear():
    w, phi = gaussian(), fejer(2 / 3)
    Xs = (1e3, 1e4, 1e5)
    E_vals = [abs(error_term_E("thin", w, phi, X)) for X in Xs]
    A_vals = [family_mass("thin", w, X).A for X in Xs]
    slope = np.polyfit(np.log(Xs), np.log(E_vals), 1)[0]
    assert slope < 0.95
    assert E_vals[-1] / A_vals[-1] < E_vals[0] / A_vals[0]


def test_error_term_simplified_equals_faithful_for_k_one():
    w, phi = gaussian(), fejer(0.4)
    # with v < log 4 / log X no prime square is reached and both forms agree
    X = 1e3
    assert error_term_E("thin", w, phi, X, simplified=True) == pytest.approx(error_term_E("thin", w, phi, X), rel=1e-12)


def test_nonvanishing_endpoint():
    rep = nonvanishing_bound("thin", Fraction(13, 11))
    assert rep.asymptotic == Fraction(2, 13)
    assert nonvanishing_bound("thin", 1).asymptotic == 0
    assert nonvanishing_bound("full", 1).asymptotic == 0


def test_nonvanishing_rejects_out_of_range():
    with pytest.raises(UnsupportedRange):
        nonvanishing_bound("thin", Fraction(6, 5))
    with pytest.raises(UnsupportedRange):
        nonvanishing_bound("full", Fraction(11, 10))
    with pytest.raises(UnsupportedRange):
        nonvanishing_bound("thin", 0)


def test_phi_hat_at_zero_is_inverse_support():
    for v in (0.5, 1.0, 13 / 11):
        assert float(fejer(v).phi_hat(0.0)) == pytest.approx(1 / v)


def test_nonvanishing_empirical_finite():
    rep = nonvanishing_bound("thin", Fraction(1, 2), X=1e4)
    assert rep.D is not None and math.isfinite(rep.empirical)
