"""Exact arithmetic in the Eisenstein integers Z[w], w = exp(2 pi i / 3).

Elements are written a + b*w with w^2 = -1 - w.  An element is *primary*
when it is congruent to 1 modulo 3; every ideal prime to 3 has exactly one
primary generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import factorint

from .errors import BothZero, NotCoprimeToThree, ZeroInput, ZeroModulus


@dataclass(frozen=True, slots=True, order=True)
class EisensteinInt:
    a: int
    b: int

    def __add__(self, other: "EisensteinInt | int") -> "EisensteinInt":
        other = as_eis(other)
        return EisensteinInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: "EisensteinInt | int") -> "EisensteinInt":
        other = as_eis(other)
        return EisensteinInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other: "EisensteinInt | int") -> "EisensteinInt":
        return as_eis(other) - self

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other: "EisensteinInt | int") -> "EisensteinInt":
        other = as_eis(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        bd = b * d
        return EisensteinInt(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "EisensteinInt":
        if k < 0:
            raise ValueError("negative exponent")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "EisensteinInt":
        # conj(w) = w^2 = -1 - w
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def trace(self) -> int:
        return 2 * self.a - self.b

    def __complex__(self) -> complex:
        return complex(self.a - 0.5 * self.b, 0.8660254037844386 * self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __repr__(self) -> str:
        return f"E({self.a},{self.b})"


def as_eis(x: "EisensteinInt | int | tuple[int, int]") -> EisensteinInt:
    if isinstance(x, EisensteinInt):
        return x
    if isinstance(x, tuple):
        return EisensteinInt(int(x[0]), int(x[1]))
    return EisensteinInt(int(x), 0)


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
OMEGA = EisensteinInt(0, 1)
OMEGA2 = EisensteinInt(-1, -1)
ONE_MINUS_OMEGA = EisensteinInt(1, -1)
# Fixed branch of sqrt(-3); (1 + 2w)^2 = -3.
SQRT_MINUS_3 = EisensteinInt(1, 2)
UNITS: tuple[EisensteinInt, ...] = (
    ONE, OMEGA, OMEGA2, EisensteinInt(-1, 0), EisensteinInt(0, -1), EisensteinInt(1, 1),
)


def norm(z: EisensteinInt) -> int:
    return z.norm()


def unit_exponent(u: EisensteinInt) -> tuple[int, int]:
    """Return (s, k) with u = s * w^k, s = +-1."""
    for k, base in enumerate((ONE, OMEGA, OMEGA2)):
        if u == base:
            return 1, k
        if u == -base:
            return -1, k
    raise ValueError(f"{u!r} is not a unit")


def is_primary(z: EisensteinInt) -> bool:
    return (z.a - 1) % 3 == 0 and z.b % 3 == 0


def is_coprime_to_three(z: EisensteinInt) -> bool:
    return z.norm() % 3 != 0


def primary_associate(z: EisensteinInt) -> tuple[EisensteinInt, EisensteinInt]:
    """Return (u, p) with p = u*z primary and u a unit."""
    if z.norm() % 3 == 0:
        raise NotCoprimeToThree(f"{z!r} is divisible by 1 - w")
    for u in UNITS:
        p = u * z
        if is_primary(p):
            return u, p
    raise AssertionError("no primary associate found")  # unreachable


def divides(d: EisensteinInt, x: EisensteinInt) -> bool:
    if d.is_zero():
        return x.is_zero()
    n = d.norm()
    q = x * d.conj()
    return q.a % n == 0 and q.b % n == 0


def div_exact(x: EisensteinInt, d: EisensteinInt) -> EisensteinInt:
    n = d.norm()
    if n == 0:
        raise ZeroModulus("division by zero")
    q = x * d.conj()
    if q.a % n or q.b % n:
        raise ValueError(f"{d!r} does not divide {x!r}")
    return EisensteinInt(q.a // n, q.b // n)


def _round_div(p: int, n: int) -> int:
    return (2 * p + n) // (2 * n)


def divmod_round(x: EisensteinInt, y: EisensteinInt) -> tuple[EisensteinInt, EisensteinInt]:
    """Euclidean division with N(r) <= 3/4 N(y)."""
    n = y.norm()
    if n == 0:
        raise ZeroModulus("division by zero")
    q = x * y.conj()
    q = EisensteinInt(_round_div(q.a, n), _round_div(q.b, n))
    return q, x - q * y


def _canonical(g: EisensteinInt) -> EisensteinInt:
    if g.is_zero():
        return g
    k = 0
    while g.norm() % 3 == 0:
        g = div_exact(g, ONE_MINUS_OMEGA)
        k += 1
    _, p = primary_associate(g)
    return ONE_MINUS_OMEGA ** k * p


def gcd(x: EisensteinInt, y: EisensteinInt) -> EisensteinInt:
    """Greatest common divisor in canonical form (1-w)^k * primary."""
    if x.is_zero() and y.is_zero():
        raise BothZero("gcd(0, 0) is undefined")
    while not y.is_zero():
        _, r = divmod_round(x, y)
        x, y = y, r
    return _canonical(x)


@lru_cache(maxsize=None)
def lattice_basis(m: EisensteinInt) -> tuple[int, int, int]:
    """Hermite basis (h11, h12, h22) of the ideal m Z[w] in (a, b) coordinates.

    The ideal is spanned by (h11, h12) and (0, h22); residues are the box
    0 <= a < h11, 0 <= b < h22.
    """
    if m.is_zero():
        raise ZeroModulus("modulus is zero")
    a, b = m.a, m.b
    # m*1 = (a, b), m*w = (-b, a - b)
    g, s, t = _ext_gcd(a, -b)
    h12 = s * b + t * (a - b)
    h22 = m.norm() // g
    return g, h12 % h22, h22


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def mod_reduce(x: EisensteinInt, m: EisensteinInt) -> EisensteinInt:
    """Representative of x modulo m in the fixed box fundamental domain."""
    h11, h12, h22 = lattice_basis(m)
    q = x.a // h11
    return EisensteinInt(x.a - q * h11, (x.b - q * h12) % h22)


def mod_reduce_arrays(a: np.ndarray, b: np.ndarray, m: EisensteinInt) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised mod_reduce on coordinate arrays (int64)."""
    h11, h12, h22 = lattice_basis(m)
    q = a // h11
    return a - q * h11, (b - q * h12) % h22


def residues(m: EisensteinInt) -> tuple[np.ndarray, np.ndarray]:
    """All N(m) residue representatives, as coordinate arrays."""
    h11, _, h22 = lattice_basis(m)
    a, b = np.meshgrid(np.arange(h11, dtype=np.int64), np.arange(h22, dtype=np.int64), indexing="ij")
    return a.ravel(), b.ravel()


@lru_cache(maxsize=None)
def split_prime(p: int) -> EisensteinInt:
    """Primary prime of norm p for a rational prime p = 1 mod 3.

    The conjugate of the returned element is the other prime above p.
    """
    if p % 3 != 1:
        raise ValueError(f"{p} does not split")
    e = (p - 1) // 3
    for g in range(2, p):
        c = pow(g, e, p)
        if c != 1:
            break
    # (p, w - c) is a prime ideal of norm p
    pi = gcd(EisensteinInt(p, 0), EisensteinInt(-c, 1))
    assert pi.norm() == p
    return pi


def primes_above(p: int) -> tuple[EisensteinInt, ...]:
    """Primary primes dividing the rational prime p (p != 3)."""
    if p % 3 == 2:
        return (EisensteinInt(-p, 0),)
    pi = split_prime(p)
    _, pic = primary_associate(pi.conj())
    return tuple(sorted((pi, pic), key=prime_sort_key))


def prime_sort_key(z: EisensteinInt) -> tuple[int, int, int]:
    return (z.norm(), z.a, z.b)


@dataclass(frozen=True)
class PrimaryFactorization:
    unit: EisensteinInt
    lambda_exp: int
    factors: tuple[tuple[EisensteinInt, int], ...]
    # element the factorization was computed from
    value: EisensteinInt = field(compare=False, default=ONE)

    def recompose(self) -> EisensteinInt:
        out = self.unit * ONE_MINUS_OMEGA ** self.lambda_exp
        for p, e in self.factors:
            out = out * p ** e
        return out

    @property
    def primes(self) -> tuple[EisensteinInt, ...]:
        return tuple(p for p, _ in self.factors)

    def is_squarefree(self) -> bool:
        return self.lambda_exp <= 1 and all(e == 1 for _, e in self.factors)

    def split(self) -> tuple[EisensteinInt, EisensteinInt, EisensteinInt]:
        """Primary (n1, n2, n3) with n1 n2^2 n3^3 = primary part, n1 n2 square-free."""
        n1 = n2 = n3 = ONE
        for p, e in self.factors:
            q, r = divmod(e, 3)
            if r == 1:
                n1 = n1 * p
            elif r == 2:
                n2 = n2 * p
            n3 = n3 * p ** q
        return n1, n2, n3

    def r3_star(self) -> EisensteinInt:
        """Product of primes whose exponent is a positive multiple of 3."""
        out = ONE
        for p, e in self.factors:
            if e % 3 == 0:
                out = out * p
        return out


def _factor_norm(n: int) -> dict[int, int]:
    return {int(p): int(e) for p, e in factorint(n).items()}


def factor(z: EisensteinInt) -> PrimaryFactorization:
    """Factor z as unit * (1-w)^k * product of primary prime powers."""
    if z.is_zero():
        raise ZeroInput("cannot factor zero")
    rest = z
    k = 0
    while rest.norm() % 3 == 0:
        rest = div_exact(rest, ONE_MINUS_OMEGA)
        k += 1
    factors: list[tuple[EisensteinInt, int]] = []
    n = rest.norm()
    for p, e in sorted(_factor_norm(n).items()):
        for pi in primes_above(p):
            c = 0
            while divides(pi, rest):
                rest = div_exact(rest, pi)
                c += 1
            if c:
                factors.append((pi, c))
    assert rest.is_unit(), rest
    factors.sort(key=lambda t: prime_sort_key(t[0]))
    return PrimaryFactorization(rest, k, tuple(factors), z)


def is_squarefree(z: EisensteinInt) -> bool:
    return factor(z).is_squarefree()
