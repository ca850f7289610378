"""Cubic residue symbols, character classification and ray class characters mod 9."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .eisenstein import (
    ONE,
    ONE_MINUS_OMEGA,
    OMEGA,
    OMEGA2,
    EisensteinInt,
    PrimaryFactorization,
    as_eis,
    div_exact,
    divides,
    divmod_round,
    factor,
    is_primary,
    mod_reduce,
    primary_associate,
    unit_exponent,
)
from .errors import ModulusNotCoprimeToThree, NotPrimitive

OMEGA_C = cmath.exp(2j * math.pi / 3)
ROOTS3 = (1.0 + 0j, OMEGA_C, OMEGA_C.conjugate())


@dataclass(frozen=True, slots=True)
class CubicValue:
    """0 or w^e; ``e is None`` encodes zero."""

    e: int | None

    @property
    def is_zero(self) -> bool:
        return self.e is None

    def __mul__(self, other: "CubicValue") -> "CubicValue":
        if self.e is None or other.e is None:
            return ZERO_VALUE
        return CubicValue((self.e + other.e) % 3)

    def __pow__(self, k: int) -> "CubicValue":
        if self.e is None:
            return ZERO_VALUE if k > 0 else CubicValue(0)
        return CubicValue((self.e * k) % 3)

    def conj(self) -> "CubicValue":
        return self if self.e is None else CubicValue((-self.e) % 3)

    def __complex__(self) -> complex:
        return 0j if self.e is None else ROOTS3[self.e]

    def __repr__(self) -> str:
        return "Zero" if self.e is None else f"Root({self.e})"


ZERO_VALUE = CubicValue(None)


def root(e: int) -> CubicValue:
    return CubicValue(e % 3)


# ------------------------------------------------------------ slow symbol

def _check_modulus(n: EisensteinInt) -> EisensteinInt:
    n = as_eis(n)
    if n.is_zero() or n.norm() % 3 == 0:
        raise ModulusNotCoprimeToThree(f"modulus {n!r} is not prime to 3")
    return n


def _powmod(x: EisensteinInt, e: int, m: EisensteinInt) -> EisensteinInt:
    out = mod_reduce(ONE, m)
    base = mod_reduce(x, m)
    while e:
        if e & 1:
            out = mod_reduce(out * base, m)
        base = mod_reduce(base * base, m)
        e >>= 1
    return out


def symbol_at_prime(a: EisensteinInt, pi: EisensteinInt) -> CubicValue:
    """chi_pi(a) from the defining congruence a^((N pi - 1)/3) = w^e mod pi."""
    a = as_eis(a)
    if divides(pi, a):
        return ZERO_VALUE
    v = _powmod(a, (pi.norm() - 1) // 3, pi)
    for e, u in enumerate((ONE, OMEGA, OMEGA2)):
        if divides(pi, v - u):
            return CubicValue(e)
    raise AssertionError(f"{pi!r} is not prime")


def cubic_symbol_slow(a: EisensteinInt, n: EisensteinInt) -> CubicValue:
    """(a/n)_3 by factoring n and exponentiating modulo each prime."""
    n = _check_modulus(n)
    out = CubicValue(0)
    for pi, v in factor(n).factors:
        out = out * symbol_at_prime(a, pi) ** v
        if out.is_zero:
            return out
    return out


# ------------------------------------------------------------ fast symbol

# Exponent of (1 - w / n)_3 for primary n, keyed by (a mod 9, b mod 9) of n.
# The value only depends on n mod 9 (in fact on a mod 9) and is multiplicative
# in n.  The table was
# produced by evaluating cubic_symbol_slow(1 - w, pi) over primary primes and
# is re-checked against the slow symbol in the test suite.
ONE_MINUS_OMEGA_SUPPLEMENT: dict[tuple[int, int], int] = {
    (1, 0): 0, (1, 3): 0, (1, 6): 0,
    (4, 0): 1, (4, 3): 1, (4, 6): 1,
    (7, 0): 2, (7, 3): 2, (7, 6): 2,
}


def derive_supplement_table(limit: int = 400) -> dict[tuple[int, int], int]:
    """Re-derive the (1 - w) supplement from the slow symbol on primary primes."""
    from .sieve import prime_table

    table: dict[tuple[int, int], int] = {}
    for pi in prime_table(limit).primes:
        key = (pi.a % 9, pi.b % 9)
        e = cubic_symbol_slow(ONE_MINUS_OMEGA, pi).e
        if table.setdefault(key, e) != e:
            raise AssertionError(f"supplement is not a function of n mod 9 at {pi!r}")
    return table


def _omega_exp(n: EisensteinInt) -> int:
    return ((n.norm() - 1) // 3) % 3


def cubic_symbol_fast(a: EisensteinInt, n: EisensteinInt) -> CubicValue:
    """(a/n)_3 by a Euclidean flip-and-reduce loop using cubic reciprocity."""
    n = _check_modulus(n)
    _, n = primary_associate(n)
    a = as_eis(a)
    e = 0
    while True:
        if n == ONE:
            return CubicValue(e % 3)
        _, a = divmod_round(a, n)
        if a.is_zero():
            return ZERO_VALUE
        k = 0
        while a.norm() % 3 == 0:
            a = div_exact(a, ONE_MINUS_OMEGA)
            k += 1
        if k:
            e += k * ONE_MINUS_OMEGA_SUPPLEMENT[(n.a % 9, n.b % 9)]
        u, p = primary_associate(a)
        # a = u^-1 p, and (-1/n) = 1, (w/n) = w^((N n - 1)/3)
        _, j = unit_exponent(u)
        e -= j * _omega_exp(n)
        a, n = n, p


# ------------------------------------------------------------ vectorised symbol at a prime

def _powmod_arr(x: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def _fq2_mul(x1, y1, x2, y2, q):
    yy = y1 * y2
    return (x1 * x2 - yy) % q, (x1 * y2 + x2 * y1 - yy) % q


def _fq2_pow(x: np.ndarray, y: np.ndarray, e: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    ox, oy = np.ones_like(x), np.zeros_like(y)
    bx, by = x % q, y % q
    while e:
        if e & 1:
            ox, oy = _fq2_mul(ox, oy, bx, by, q)
        bx, by = _fq2_mul(bx, by, bx, by, q)
        e >>= 1
    return ox, oy


@lru_cache(maxsize=None)
def omega_image(pi: EisensteinInt) -> int:
    """c in Z/p with w = c mod pi, for a split prime pi of norm p."""
    p = pi.norm()
    return (-pi.a * pow(pi.b, -1, p)) % p


@lru_cache(maxsize=4096)
def _prime_table(pi: EisensteinInt) -> np.ndarray:
    """Exponent table of chi_pi over Z[w]/pi (-1 marks zero).

    For split pi the index is the image in Z/p; for inert pi = -q it is a*q + b.
    """
    n = pi.norm()
    if pi.b == 0:
        q = abs(pi.a)
        xs, ys = np.divmod(np.arange(q * q, dtype=np.int64), q)
        vx, vy = _fq2_pow(xs, ys, (n - 1) // 3, q)
        out = np.full(q * q, -1, dtype=np.int8)
        out[(vx == 1) & (vy == 0)] = 0
        out[(vx == 0) & (vy == 1)] = 1
        out[(vx == q - 1) & (vy == q - 1)] = 2
        out[0] = -1
        return out
    p, c = n, omega_image(pi)
    v = _powmod_arr(np.arange(p, dtype=np.int64), (p - 1) // 3, p)
    out = np.full(p, -1, dtype=np.int8)
    out[v == 1] = 0
    out[v == c] = 1
    out[v == c * c % p] = 2
    out[0] = -1
    return out


def symbol_at_prime_array(pi: EisensteinInt, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exponents of chi_pi(a + b w) for coordinate arrays (-1 for zero)."""
    n = pi.norm()
    if pi.b == 0:
        q = abs(pi.a)
        return _prime_table(pi)[(a % q) * q + (b % q)]
    p = n
    t = (a % p + (b % p) * omega_image(pi)) % p
    if p <= 4 * max(len(t), 1) or p <= 20000:
        return _prime_table(pi)[t]
    v = _powmod_arr(t, (p - 1) // 3, p)
    c = omega_image(pi)
    out = np.full(t.shape, -1, dtype=np.int8)
    out[v == 1] = 0
    out[v == c] = 1
    out[v == c * c % p] = 2
    return out


def symbol_array(n: EisensteinInt, a: np.ndarray, b: np.ndarray,
                 fac: PrimaryFactorization | None = None) -> np.ndarray:
    """Exponents of chi_n over coordinate arrays (-1 for zero)."""
    fac = fac or factor(n)
    total = np.zeros(a.shape, dtype=np.int64)
    zero = np.zeros(a.shape, dtype=bool)
    for pi, v in fac.factors:
        e = symbol_at_prime_array(pi, a, b).astype(np.int64)
        zero |= e < 0
        total += v * e
    total %= 3
    total[zero] = -1
    return total.astype(np.int8)


# ------------------------------------------------------------ classification

@dataclass(frozen=True)
class CharacterSpec:
    modulus: EisensteinInt
    factorization: PrimaryFactorization
    conductor: EisensteinInt
    is_primitive: bool
    is_hecke: bool

    def __call__(self, a: EisensteinInt) -> CubicValue:
        return cubic_symbol_fast(a, self.modulus)

    @property
    def split(self) -> tuple[EisensteinInt, EisensteinInt, EisensteinInt]:
        return self.factorization.split()

    def conjugate(self) -> "CharacterSpec":
        """The conjugate character, in the reduced form n1^2 n2."""
        n1, n2, n3 = self.split
        return classify(n1 * n1 * n2 * n3 ** 3)

    def label(self) -> str:
        return f"({self.modulus.a},{self.modulus.b})"


def classify(n: EisensteinInt) -> CharacterSpec:
    n = _check_modulus(n)
    if not is_primary(n):
        raise ModulusNotCoprimeToThree(f"{n!r} is not primary")
    fac = factor(n)
    n1, n2, n3 = fac.split()
    primitive = n3 == ONE and not (n1 == ONE and n2 == ONE)
    return CharacterSpec(n, fac, n1 * n2, primitive, n.norm() % 9 == 1)


def require_primitive(chi: CharacterSpec) -> None:
    if not chi.is_primitive:
        raise NotPrimitive(f"character mod {chi.modulus!r} is not primitive")


# ------------------------------------------------------------ ray class group mod 9

@dataclass(frozen=True)
class RayClassCharacter:
    label: int
    exps: tuple[int, ...]          # exponent of exp(2 pi i / exponent) per class id
    exponent: int                  # exponent of the group
    order: int                     # order of this character

    def exp_of(self, z: EisensteinInt) -> int:
        return self.exps[ray_class_id(z)]

    def __call__(self, z: EisensteinInt) -> complex:
        return cmath.exp(2j * math.pi * self.exp_of(z) / self.exponent)

    def is_trivial(self) -> bool:
        return self.order == 1


@dataclass(frozen=True)
class _RayGroup:
    residues: tuple[tuple[int, int], ...]      # (Z[w]/9)^x
    class_of: dict[tuple[int, int], int]        # residue -> class id
    order: int
    exponent: int
    characters: tuple[RayClassCharacter, ...]


def _mul9(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    z = EisensteinInt(*x) * EisensteinInt(*y)
    return (z.a % 9, z.b % 9)


@lru_cache(maxsize=1)
def _ray_group() -> _RayGroup:
    units_group = [(a, b) for a in range(9) for b in range(9) if (a * a - a * b + b * b) % 3]
    from .eisenstein import UNITS
    unit_res = {(u.a % 9, u.b % 9) for u in UNITS}
    class_of: dict[tuple[int, int], int] = {}
    reps: list[tuple[int, int]] = []
    for x in units_group:
        if x in class_of:
            continue
        cid = len(reps)
        reps.append(x)
        for u in unit_res:
            class_of[_mul9(x, u)] = cid
    h = len(reps)
    table = [[class_of[_mul9(reps[i], reps[j])] for j in range(h)] for i in range(h)]
    ident = class_of[(1, 0)]

    def elem_order(i: int) -> int:
        k, x = 1, i
        while x != ident:
            x = table[x][i]
            k += 1
        return k

    exponent = math.lcm(*(elem_order(i) for i in range(h)))
    # greedy generating set
    gens: list[int] = []
    span = {ident}
    while len(span) < h:
        g = next(i for i in range(h) if i not in span)
        gens.append(g)
        frontier = list(span)
        span = set(frontier)
        while frontier:
            new = []
            for x in frontier:
                for s in gens:
                    y = table[x][s]
                    if y not in span:
                        span.add(y)
                        new.append(y)
            frontier = new
    # every assignment of generator images that extends to a homomorphism
    chars: list[tuple[int, ...]] = []
    for images in product(range(exponent), repeat=len(gens)):
        val = {ident: 0}
        frontier = [ident]
        ok = True
        while frontier and ok:
            new = []
            for x in frontier:
                for s, im in zip(gens, images):
                    y = table[x][s]
                    v = (val[x] + im) % exponent
                    if y in val:
                        if val[y] != v:
                            ok = False
                            break
                    else:
                        val[y] = v
                        new.append(y)
                if not ok:
                    break
            frontier = new
        if ok and len(val) == h:
            chars.append(tuple(val[i] for i in range(h)))
    chars.sort()
    rc = tuple(
        RayClassCharacter(i, ex, exponent, exponent // math.gcd(exponent, math.gcd(*ex)) if any(ex) else 1)
        for i, ex in enumerate(chars)
    )
    return _RayGroup(tuple(units_group), class_of, h, exponent, rc)


def ray_class_id(z: EisensteinInt) -> int:
    key = (z.a % 9, z.b % 9)
    try:
        return _ray_group().class_of[key]
    except KeyError:
        raise ModulusNotCoprimeToThree(f"{z!r} is not prime to 3") from None


def ray_class_mod9() -> tuple[int, list[RayClassCharacter]]:
    """Order h_9 of (Z[w]/9)^x / units and all characters of that quotient."""
    g = _ray_group()
    return g.order, list(g.characters)


def unit_group_mod9_order() -> int:
    return len(_ray_group().residues)


# ------------------------------------------------------------ lambda = ray class character * fixed twist

@dataclass(frozen=True)
class LambdaCharacter:
    """c -> psi(c) * (t/c)_3 with psi a ray class character mod 9 and t fixed."""

    psi: RayClassCharacter
    twist: EisensteinInt | None = None

    @property
    def ident(self) -> str:
        base = f"psi{self.psi.label}"
        return base if self.twist is None else f"{base}*t({self.twist.a},{self.twist.b})"

    def value(self, c: EisensteinInt) -> complex:
        v = self.psi(c)
        if self.twist is not None:
            v *= complex(cubic_symbol_fast(self.twist, c))
        return v

    __call__ = value


def trivial_lambda() -> LambdaCharacter:
    _, chars = ray_class_mod9()
    return LambdaCharacter(next(c for c in chars if c.is_trivial()))


def all_lambdas() -> list[LambdaCharacter]:
    _, chars = ray_class_mod9()
    return [LambdaCharacter(c) for c in chars]
