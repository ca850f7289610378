import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eisencubic.characters import LambdaCharacter, all_lambdas, trivial_lambda
from eisencubic.eisenstein import ONE, EisensteinInt as E, divides, factor, gcd, is_primary
from eisencubic.errors import IdentityViolation, InvalidRange, ModulusNotCoprimeToThree
from eisencubic.gauss import gauss_direct
from eisencubic.hsums import (
    HSUM_SCHEMA,
    balance_bound,
    balanced_minimum,
    bilinear_forms,
    fit_slope,
    h_grid,
    h_statistic,
    h_statistic_lambda_weighted,
    ha_lhs,
    max_support,
    psi_truncated,
    shift_decomposition,
    support_exponents,
    type1_sum_F,
    vaughan_decompose,
    verify_ha_identity,
)
from eisencubic.sieve import brute_force_primes

PI7 = E(-2, -3)
PI13 = E(1, -3)
LAMS = all_lambdas()
TWISTED = LambdaCharacter(LAMS[1].psi, PI13)


def brute_primary(B):
    R = int(math.isqrt(4 * B // 3)) + 2
    out = []
    for a in range(-R, R + 1):
        for b in range(-R, R + 1):
            z = E(a, b)
            if 0 < z.norm() <= B and is_primary(z):
                out.append(z)
    return out


def g_direct(r, c):
    return 1.0 + 0j if c == ONE else gauss_direct(r, c).value


def test_h_by_hand_small_Z():
    for r in (ONE, PI7):
        for lam in (LAMS[0], LAMS[4], TWISTED):
            Z = 150
            expect = 0j
            for p in brute_force_primes(Z):
                if gcd(p, r) != ONE or p.norm() % 3 == 0:
                    continue
                expect += g_direct(r, p) * lam.value(p) * math.log(p.norm()) / math.sqrt(p.norm())
            assert abs(h_statistic(Z, r, lam) - expect) < 1e-10


def test_h_matches_von_mangoldt_form():
    for r in (ONE, PI7 * PI7):
        a = h_statistic(800, r)
        b = h_statistic_lambda_weighted(800, r)
        assert abs(a - b) < 1e-10


def test_h_grid_is_prefix_of_single_pass():
    Zs = [100, 300, 1000, 3000]
    rep = h_grid(Zs, PI7, LAMS[2])
    for z, h in zip(rep.Z, rep.H):
        assert abs(h - h_statistic(z, PI7, LAMS[2])) < 1e-10
    text = rep.to_csv()
    assert text.splitlines()[0] == HSUM_SCHEMA
    assert len(text.splitlines()) == 2 + len(Zs)
    with pytest.raises(InvalidRange):
        h_grid([10, 20])


def test_h_zero_below_first_prime():
    assert h_statistic(3.5) == 0


def test_fit_slope_exact_power_law():
    Z = np.geomspace(10, 1e5, 8)
    slope, ci, icept = fit_slope(Z, 3 * Z ** 0.75)
    assert slope == pytest.approx(0.75, abs=1e-12)
    assert icept == pytest.approx(math.log(3), abs=1e-10)


@pytest.mark.parametrize("a,r", [(ONE, ONE), (PI7, ONE), (PI7, PI13), (ONE, PI7 * PI7)])
def test_type1_sum_brute_force(a, r):
    lam = LAMS[3]
    z = 400
    expect = 0j
    for b in brute_primary(z):
        # non-square-free b are included; their Gauss sums vanish when (b, r) = 1
        if not divides(a, b) or gcd(b, r) != ONE:
            continue
        expect += g_direct(r, b) * lam.value(b) / math.sqrt(b.norm())
    assert abs(type1_sum_F(z, a, r, lam) - expect) < 1e-10


def test_type1_rejects_bad_a():
    with pytest.raises(InvalidRange):
        type1_sum_F(100, PI7 * PI7)
    with pytest.raises(InvalidRange):
        type1_sum_F(100, PI7, PI7)


@pytest.mark.parametrize("r", [ONE, PI7, PI7 * PI13])
def test_vaughan_small_u(r):
    Z = 300
    rep = vaughan_decompose(Z, r, Z ** (1 / 3), LAMS[5])
    assert rep.identity_residual < 1e-12
    assert abs(rep.sigma["0"] - rep.h_difference) < 1e-10
    assert rep.sigma["4"] == 0
    assert rep.type1_bound is not None and abs(rep.sigma["1"]) <= rep.type1_bound


def test_vaughan_large_u_needs_corrected_sigma4():
    Z = 300
    rep = vaughan_decompose(Z, ONE, 3 * Z)
    s = rep.sigma
    assert rep.identity_residual < 1e-12
    assert abs(s["0"] - rep.h_difference) < 1e-10
    with_stated = s["1"] - s["2'"] - s["2''"] - s["3"] + rep.sigma4_stated
    assert abs(s["0"] - with_stated) > 1.0


def test_vaughan_rejects_u_below_one():
    with pytest.raises(InvalidRange):
        vaughan_decompose(100, ONE, 0.5)


def test_vaughan_json_roundtrip():
    import json

    d = json.loads(vaughan_decompose(100, PI7, 2.0).to_json())
    assert d["r"] == [PI7.a, PI7.b] and set(d["sigma"]) == {"0", "1", "2'", "2''", "3", "4"}


@pytest.mark.parametrize("r,lam", [(ONE, LAMS[0]), (PI7, LAMS[7]), (PI7 * PI13, TWISTED)])
def test_bilinear_forms_match_direct(r, lam):
    Z = 500
    u = Z ** (1 / 3)
    s2, s3 = bilinear_forms(Z, r, u, lam)
    rep = vaughan_decompose(Z, r, u, lam)
    assert abs(s2 - rep.sigma["2''"]) < 1e-10
    assert abs(s3 - rep.sigma["3"]) < 1e-10


def test_bilinear_forms_range():
    with pytest.raises(InvalidRange):
        bilinear_forms(100, ONE, 10.0)


def test_psi_brute_force():
    lam, s, B = LAMS[2], 2.3 + 1.0j, 500
    expect = 0j
    for b in brute_primary(B):
        expect += lam.value(b) * g_direct(PI7, b) * b.norm() ** (-s)
    v = psi_truncated(PI7, lam, s, B)
    assert abs(v.value - expect) < 1e-12


def test_psi_prefix_within_tail():
    small = psi_truncated(ONE, None, 2.5, 300)
    big = psi_truncated(ONE, None, 2.5, 3000)
    assert abs(big.value - small.value) <= small.tail
    assert big.terms > small.terms


def test_psi_dominated_by_b_one_at_large_s():
    v = psi_truncated(ONE, None, 60.0, 200)
    assert abs(v.value - 1) < 1e-20 + v.tail


@pytest.mark.parametrize("s", [1.5, 1.0, 0.5 + 3j])
def test_psi_rejects_non_convergent(s):
    with pytest.raises(InvalidRange):
        psi_truncated(ONE, None, s, 100)


@pytest.mark.parametrize("a,r", [(ONE, ONE), (PI7, ONE), (PI7, PI13), (ONE, PI7 * PI7), (PI13, PI7 ** 3)])
def test_ha_identity(a, r):
    for lam in (LAMS[0], LAMS[6], TWISTED):
        assert verify_ha_identity(a, r, lam, B=1000) < 1e-9


def test_ha_lhs_nonzero():
    c = ha_lhs(PI7, PI13, trivial_lambda(), 1000)
    assert np.abs(c).max() > 1
    assert c[PI7.norm()] != 0


def test_ha_rejects_bad_a():
    with pytest.raises(InvalidRange):
        verify_ha_identity(PI7 * PI7)
    with pytest.raises(InvalidRange):
        verify_ha_identity(PI7, PI7)


def test_lambda_type_and_twist_size_checked():
    with pytest.raises(TypeError):
        h_statistic(100, ONE, "psi0")
    with pytest.raises(InvalidRange):
        h_statistic(100, ONE, LambdaCharacter(LAMS[0].psi, E(200, 3)))


@given(st.floats(0.1, 50), st.floats(0.1, 2), st.floats(0.1, 50), st.floats(0.1, 2))
@settings(max_examples=100)
def test_balance_bound_near_minimum(A, a, B, b):
    Hopt = (b * B / (a * A)) ** (1 / (a + b))
    H, val, bound = balance_bound([(A, a)], [(B, b)], Hopt / 1e3, Hopt * 1e3)
    m = balanced_minimum(A, a, B, b)
    assert m <= val * (1 + 1e-12)
    assert val <= 1.01 * m
    # the balanced expression bounds the minimum up to the number of terms
    assert val <= 2 * bound * (1 + 1e-12)


def test_balance_bound_degenerate_interval():
    H, val, _ = balance_bound([(1.0, 1.0)], [(1.0, 1.0)], 2.0, 2.0)
    assert H == 2.0 and val == pytest.approx(2.5)
    with pytest.raises(InvalidRange):
        balance_bound([(1.0, 1.0)], [(1.0, 1.0)], 3.0, 2.0)
    with pytest.raises(InvalidRange):
        balance_bound([(-1.0, 1.0)], [(1.0, 1.0)], 1.0, 2.0)


def test_max_support():
    assert max_support() == (Fraction(13, 11), "(5/6,1/12)")
    ex = dict(support_exponents(Fraction(13, 11)))
    assert ex["(5/6,1/12)"] == 1
    assert all(e < 1 for k, e in ex.items() if k != "(5/6,1/12)")
    assert max(e for _, e in support_exponents(Fraction(6, 5))) > 1


small_primes = [p for p in brute_force_primes(200) if p.norm() % 3]


@given(st.lists(st.tuples(st.sampled_from(small_primes), st.integers(1, 7)), max_size=3, unique_by=lambda t: t[0]))
def test_shift_decomposition_recomposes(parts):
    r = ONE
    for p, k in parts:
        r = r * p ** k
    sh = shift_decomposition(r)
    assert sh.recompose() == r
    f1 = factor(sh.r1).primes if sh.r1 != ONE else ()
    f2 = factor(sh.r2).primes if sh.r2 != ONE else ()
    assert gcd(sh.r1, sh.r2) == ONE
    assert factor(sh.r1).is_squarefree() if sh.r1 != ONE else True
    assert factor(sh.r2).is_squarefree() if sh.r2 != ONE else True
    star = factor(sh.r3_star).primes if sh.r3_star != ONE else ()
    assert not set(star) & (set(f1) | set(f2))
    for p in star:
        assert divides(p, sh.r3)


def test_shift_decomposition_rejects_non_primary():
    with pytest.raises(ModulusNotCoprimeToThree):
        shift_decomposition(E(2, 0))


def test_identity_violation_is_assertion():
    assert issubclass(IdentityViolation, AssertionError)
