import cmath
import math

import mpmath
import numpy as np
import pytest

from eisencubic.characters import classify, cubic_symbol_fast
from eisencubic.eisenstein import EisensteinInt
from eisencubic.errors import InsufficientTruncation, NotHecke
from eisencubic.gauss import primitive_characters
from eisencubic.lfunction import (
    coefficients,
    coefficients_by_ideals,
    fe_residual,
    find_zeros,
    inc_gamma,
    lambda_eval,
    ldata_for_fe,
    ldata_for_height,
    winding_count,
    zeros_both_sides,
)

N73 = EisensteinInt(1, 9)      # thin family, norm 73
N91 = EisensteinInt(10, 9)     # thin family, norm 91
# first ordinate for N73: the same to 1e-15 under three different AFE cuts
FIRST_ZERO_73 = 2.14024990608217


def _ideal_counts(M):
    r = math.isqrt(4 * M // 3) + 2
    out = np.zeros(M + 1, dtype=int)
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            m = x * x - x * y + y * y
            if 1 <= m <= M:
                out[m] += 1
    return out // 6


def test_coefficients_against_ideal_enumeration():
    for n in (N73, N91, EisensteinInt(-2, -3) * EisensteinInt(1, 3) * EisensteinInt(1, 3)):
        chi = classify(n)
        if not chi.is_hecke:
            continue
        ld = coefficients(chi, 200)
        assert ld.coeffs[1] == 1
        assert np.max(np.abs(ld.coeffs[1:] - coefficients_by_ideals(chi, 200)[1:])) < 1e-12


def test_split_prime_coefficient():
    chi = classify(N73)
    ld = coefficients(chi, 100)
    pi, pib = EisensteinInt(-2, -3), EisensteinInt(1, 3)
    expect = complex(cubic_symbol_fast(pi, N73)) + complex(cubic_symbol_fast(pib, N73))
    assert abs(ld.coeffs[7] - expect) < 1e-12


def test_divisor_bound():
    ld = coefficients(classify(N91), 3000)
    counts = _ideal_counts(3000)
    assert np.all(np.abs(ld.coeffs[1:]) <= counts[1:] + 1e-9)


def test_non_hecke_rejected():
    with pytest.raises(NotHecke):
        coefficients(classify(EisensteinInt(-2, -3)), 10)


def test_functional_equation_at_fixed_point():
    s = complex(0.7, 0.3)
    chars = [c for c in primitive_characters(500) if c.is_hecke]
    assert len(chars) > 20
    for chi in chars:
        ld = ldata_for_fe(chi, [s])
        assert fe_residual(ld, s) < 1e-6


def test_conjugation_symmetry():
    ld = ldata_for_height(classify(N91), 10)
    ldb = ld.conjugate()
    for s in (complex(0.3, 2.0), complex(1.2, 7.5), complex(0.5, 9.0)):
        a = lambda_eval(ldb, s.conjugate()).value
        b = lambda_eval(ld, s).value.conjugate()
        assert abs(a - b) < 1e-9 * abs(b)


def test_truncation_guard():
    ld = coefficients(classify(N73), 20)
    with pytest.raises(InsufficientTruncation):
        lambda_eval(ld, complex(0.5, 10.0))


def test_no_zeros_below_first():
    ld = ldata_for_height(classify(N73), 3)
    assert len(find_zeros(ld, 1.5)) == 0
    zl = find_zeros(ld, 3.0, delta=1e-12)
    assert zl.zeros[0] == pytest.approx(FIRST_ZERO_73, abs=1e-10)


def test_frozen_zero_vanishes_with_other_cut():
    ld = ldata_for_height(classify(N73), 5)
    s = complex(0.5, FIRST_ZERO_73)
    v = lambda_eval(ld, s, cut=1.2 * cmath.exp(0.15j)).value
    scale = abs(lambda_eval(ld, complex(0.5, FIRST_ZERO_73 + 0.5)).value)
    assert abs(v) < 1e-9 * scale


def test_zero_counts_stable_under_refinement():
    chars = sorted((c for c in primitive_characters(200) if c.is_hecke),
                   key=lambda c: (c.conductor.norm(), c.modulus.a, c.modulus.b))[:5]
    for chi in chars:
        ld = ldata_for_height(chi, 15)
        a = find_zeros(ld, 15, delta=1e-6)
        b = find_zeros(ld, 15, delta=5e-7)
        assert len(a) == len(b) == a.winding_count
        assert np.max(np.abs(np.array(a.zeros) - np.array(b.zeros))) < 2e-6


def test_conjugate_zeros_are_mirrored():
    ld = ldata_for_height(classify(N91), 12)
    gam, up, down = zeros_both_sides(ld, 12)
    ldb = ld.conjugate()
    # zeros of conj chi at height t correspond to zeros of chi at -t
    for g in down.zeros:
        assert abs(lambda_eval(ld, complex(0.5, -g)).value) < 1e-8 * abs(lambda_eval(ld, complex(0.5, -g - 0.5)).value)
    assert len(gam) == len(up) + len(down)
    assert winding_count(ldb, 0.01, 12) == len(down)


def test_zero_counting_growth():
    ld = ldata_for_height(classify(N91), 25)
    n = len(find_zeros(ld, 25))
    A = math.sqrt(3 * 91) / (2 * math.pi)
    # argument of A^s Gamma(s) along the line: (T / pi) log(A T / e)
    expect = 25 / math.pi * math.log(A * 25 / math.e)
    assert abs(n - expect) < 3


@pytest.mark.parametrize("s", [0.5 + 3j, 1.0 + 0.2j, 2.7 - 11j, 0.05 + 25j])
def test_inc_gamma_against_mpmath(s):
    zs = np.array([0.01, 0.7, 3.0, 9.5, 40.0, 2.0 + 1.5j, 12.0 - 4.0j])
    got = inc_gamma(s, zs)
    for z, g in zip(zs, got):
        ref = complex(mpmath.gammainc(s, complex(z)))
        assert abs(g - ref) <= 1e-12 * max(1.0, abs(ref))
