import math

import pytest
from sympy import isprime

from eisencubic import sieve

from eisencubic.eisenstein import EisensteinInt, factor, is_primary
from eisencubic.sieve import (
    PrimeTable,
    brute_full_family,
    brute_thin_family,
    enumerate_full_family,
    enumerate_thin_family,
    moebius,
    primary_lattice,
    prime_table,
    sieve_primes,
    squarefree_mask,
    von_mangoldt,
)


def _scan_primes(B):
    """Primary primes by norm: N prime (split) or N = q^2 with q = 2 mod 3 (inert)."""
    out = []
    r = math.isqrt(4 * B // 3) + 2
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            z = EisensteinInt(a, b)
            n = z.norm()
            if not 2 <= n <= B or not is_primary(z):
                continue
            q = math.isqrt(n)
            if (isprime(n) and n % 3 == 1) or (q * q == n and isprime(q) and q % 3 == 2):
                out.append(z)
    return sorted(out, key=lambda z: (z.norm(), z.a, z.b))


def test_small_bounds():
    assert sieve_primes(2).primes == []
    assert sieve_primes(6).primes == [EisensteinInt(-2, 0)]
    assert [p.norm() for p in sieve_primes(7).primes] == [4, 7, 7]


@pytest.mark.parametrize("B", [50, 1000, 20000])
def test_matches_direct_scan(B):
    assert sieve_primes(B).primes == _scan_primes(B)


def test_split_and_inert_structure():
    table = sieve_primes(5000)
    for n, ps in table.norm_index.items():
        if isprime(n):
            assert n % 3 == 1 and len(ps) == 2 and ps[0] == ps[1].conj()
        else:
            q = math.isqrt(n)
            assert q * q == n and q % 3 == 2 and ps == [EisensteinInt(-q, 0)]


def test_count_up_to_1e5():
    # two primes above each p = 1 mod 3, one for each q = 2 mod 3 with q^2 <= B
    split = sum(1 for p in range(2, 10**5 + 1) if p % 3 == 1 and isprime(p))
    inert = sum(1 for q in range(2, 317) if q % 3 == 2 and isprime(q))
    assert len(sieve_primes(10**5)) == 2 * split + inert == 9602


def test_disk_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("EISENCUBIC_CACHE_DIR", str(tmp_path))
    monkeypatch.setattr(sieve, "_TABLES", {})
    t = sieve_primes(3000)
    t.save(tmp_path / "t.bin")
    assert PrimeTable.load(tmp_path / "t.bin").primes == t.primes
    assert prime_table(1500, use_disk=True).primes == t.up_to(1500)
    assert [p.name for p in tmp_path.glob("primes_*.bin")] == ["primes_2000.bin"]
    # a cold memory cache reads the file back
    monkeypatch.setattr(sieve, "_TABLES", {})
    assert prime_table(1800).primes == t.up_to(1800)


def test_moebius_and_von_mangoldt():
    p7, q7 = EisensteinInt(-2, -3), EisensteinInt(1, 3)
    assert moebius(factor(EisensteinInt(1, 0))) == 1
    assert moebius(factor(p7 * p7)) == 0
    assert moebius(factor(p7 * q7)) == 1
    assert moebius(factor(p7)) == -1
    assert von_mangoldt(factor(p7)) == pytest.approx(math.log(7))
    assert von_mangoldt(factor(p7 ** 3)) == pytest.approx(math.log(7))
    assert von_mangoldt(factor(p7 * q7)) == 0
    assert von_mangoldt(factor(EisensteinInt(1, 0))) == 0


def test_squarefree_detector_by_moebius_sum():
    a, b = primary_lattice(10**4)
    mask = squarefree_mask(a, b)
    for x, y, m in zip(a.tolist(), b.tolist(), mask.tolist()):
        z = EisensteinInt(x, y)
        f = factor(z)
        detector = 0
        # sum of mu(d) over d^2 | z
        from itertools import product
        ranges = [range(e // 2 + 1) for _, e in f.factors]
        for ks in product(*ranges):
            if all(k <= 1 for k in ks):
                detector += (-1) ** sum(ks)
        assert detector == int(m)


def test_thin_family():
    assert list(enumerate_thin_family(10)) == []
    got = list(enumerate_thin_family(10**4))
    assert sorted(got, key=lambda z: (z.norm(), z.a, z.b)) == sorted(brute_thin_family(10**4), key=lambda z: (z.norm(), z.a, z.b))
    assert len(got) == 391  # frozen from the brute scan
    for n in got:
        assert n.a % 9 == 1 and n.b % 9 == 0 and factor(n).is_squarefree()


def test_full_family():
    got = list(enumerate_full_family(10**4))
    assert sorted(got, key=lambda t: (t[0].a, t[0].b, t[1].a, t[1].b)) == \
        sorted(brute_full_family(10**4), key=lambda t: (t[0].a, t[0].b, t[1].a, t[1].b))
    thin = set(enumerate_thin_family(10**4))
    ones = {a for a, b in got if b == EisensteinInt(1, 0)}
    assert thin <= ones | {EisensteinInt(1, 0)}
    for a, b in got:
        assert not set(factor(a).primes) & set(factor(b).primes)
