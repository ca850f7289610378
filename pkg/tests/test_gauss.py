import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eisencubic.characters import classify, cubic_symbol_fast
from eisencubic.eisenstein import ONE, EisensteinInt, factor, gcd, primary_associate
from eisencubic.errors import CapExceeded, NotPrimitive
from eisencubic.gauss import (
    gauss_direct,
    gauss_fast,
    poisson_sides,
    prime_gauss,
    prime_gauss_table,
    root_number,
    root_number_direct,
    totient,
    w_hat,
    w_hat_2d,
)
from eisencubic.sieve import primary_lattice, prime_table
from eisencubic.testfunctions import WeightFunction, gaussian

PI7 = EisensteinInt(-2, -3)
PI13 = EisensteinInt(1, -3)
small = st.builds(EisensteinInt, st.integers(-10**4, 10**4), st.integers(-10**4, 10**4))


def test_empty_modulus():
    assert gauss_direct(EisensteinInt(5, 2), ONE).value == 1
    assert gauss_fast(EisensteinInt(5, 2), ONE).value == 1


def test_prime_sums_have_modulus_root_norm():
    for pi in prime_table(10**4).primes:
        g = gauss_direct(ONE, pi).value
        assert abs(abs(g) ** 2 / pi.norm() - 1) < 1e-9


@given(small, small, st.sampled_from(prime_table(2000).primes))
def test_twist_law(r, s, pi):
    chi = cubic_symbol_fast(s, pi)
    lhs = gauss_direct(r * s, pi).value
    rhs = complex(chi.conj()) * gauss_direct(r, pi).value
    assert abs(lhs - rhs) < 1e-9 * math.sqrt(pi.norm())


def _closed_form(r, pi, j, k):
    q = pi.norm()
    if k == j + 1:
        g = gauss_direct(r, pi).value
        return {0: -(q ** j), 1: q ** j * g, 2: q ** j * g.conjugate()}[k % 3]
    if k % 3 == 0 and k <= j:
        return q ** (k - 1) * (q - 1)
    return 0.0


@pytest.mark.parametrize("pi", [EisensteinInt(-2, 0), PI7, PI13])
def test_prime_power_branches(pi):
    r = next(z for z in (EisensteinInt(2, 7), EisensteinInt(5, 1)) if not cubic_symbol_fast(z, pi).is_zero)
    branches = set()
    for k in range(1, 5):
        for j in range(0, 5):
            m = r * pi ** j
            direct = gauss_direct(m, pi ** k).value
            assert abs(direct - _closed_form(r, pi, j, k)) < 1e-9 * max(1, abs(direct))
            assert abs(direct - gauss_fast(m, pi ** k).value) < 1e-9 * max(1, abs(direct))
            branches.add((k == j + 1, k % 3 if k == j + 1 else (k % 3 == 0, k <= j)))
    assert len(branches) >= 6


def test_totient():
    assert totient(PI7, 1) == 6 and totient(PI7, 3) == 49 * 6
    assert totient(EisensteinInt(-2, 0), 2) == 4 * 3


def test_fast_matches_direct_on_all_small_moduli():
    rng = np.random.default_rng(11)
    a, b = primary_lattice(3000)
    for x, y in zip(a.tolist(), b.tolist()):
        n = EisensteinInt(x, y)
        r = EisensteinInt(*(int(v) for v in rng.integers(-500, 500, 2)))
        d = gauss_direct(r, n).value
        f = gauss_fast(r, n).value
        assert abs(d - f) < 1e-9 * max(1.0, abs(d)), n


def test_vanishing_on_non_squarefree():
    a, b = primary_lattice(3000)
    r = EisensteinInt(2, 7)
    seen = 0
    for x, y in zip(a.tolist(), b.tolist()):
        n = EisensteinInt(x, y)
        if factor(n).is_squarefree() or gcd(n, r) != ONE:
            continue
        assert abs(gauss_direct(r, n).value) < 1e-8
        seen += 1
    assert seen > 50


def _random_primary(rng, side):
    while True:
        z = EisensteinInt(*(int(v) for v in rng.integers(-side, side + 1, 2)))
        if z.norm() > 1 and z.norm() % 3:
            return primary_associate(z)[1]


def test_splitting_law():
    rng = np.random.default_rng(5)
    done = 0
    while done < 60:
        n1, n2 = _random_primary(rng, 25), _random_primary(rng, 25)
        if gcd(n1, n2) != ONE or n1.norm() * n2.norm() > 10**5:
            continue
        r = EisensteinInt(*(int(v) for v in rng.integers(-100, 100, 2)))
        lhs = gauss_direct(r, n1 * n2).value
        g1 = gauss_direct(r, n1).value
        assert abs(lhs - gauss_direct(r * n1, n2).value * g1) < 1e-9 * math.sqrt(n1.norm() * n2.norm())
        twisted = complex(cubic_symbol_fast(n1, n2).conj()) * g1 * gauss_direct(r, n2).value
        assert abs(lhs - twisted) < 1e-9 * math.sqrt(n1.norm() * n2.norm())
        done += 1


def test_prime_table_matches_single_primes():
    table = prime_gauss_table(20000)
    for pi in prime_table(20000).primes[::97]:
        assert abs(table(pi) - prime_gauss(pi)) < 1e-9 * math.sqrt(pi.norm())


def test_direct_cap():
    with pytest.raises(CapExceeded):
        gauss_direct(ONE, PI7 * PI13, cap=50)


def test_root_numbers():
    a, b = primary_lattice(1000)
    for x, y in zip(a.tolist(), b.tolist()):
        n = EisensteinInt(x, y)
        chi = classify(n)
        if not chi.is_primitive:
            continue
        N = chi.conductor.norm()
        w1, w2 = root_number(chi).value, root_number_direct(chi).value
        assert abs(abs(w1) ** 2 / N - 1) < 1e-9
        assert abs(w1 - w2) < 1e-9 * math.sqrt(N)


def test_root_number_rejects_trivial():
    with pytest.raises(NotPrimitive):
        root_number(classify(PI7 ** 3))


@pytest.mark.parametrize("n", [PI7, PI13 * PI13, PI7 * PI13])
def test_poisson_identity(n):
    chi = classify(n)
    for Y in (10.0, 100.0):
        rep = poisson_sides(chi, gaussian(), Y)
        assert rep.residual < 1e-6
        assert poisson_sides(chi.conjugate(), gaussian(), Y).residual < 1e-6


def test_poisson_linear_in_weight():
    chi = classify(PI7 * PI13)
    c = 3.5
    scaled = WeightFunction("scaled_gaussian", (c,), lambda x: c * np.exp(-x * x), cutoff=6.2)
    base = poisson_sides(chi, gaussian(), 10.0)
    rep = poisson_sides(chi, scaled, 10.0)
    assert abs(rep.lhs - c * base.lhs) < 1e-9 * abs(c * base.lhs)
    assert abs(rep.rhs - c * base.rhs) < 1e-9 * abs(c * base.rhs)


@pytest.mark.parametrize("t", [0.0, 0.3, 1.1])
def test_w_hat_radial_against_double_integral(t):
    w = gaussian()
    val, err = w_hat(w, t)
    assert abs(val - w_hat_2d(w, t)) < 1e-8
