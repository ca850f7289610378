"""Primary primes, square-free elements and the two character families."""

from __future__ import annotations

import math
import os
import struct
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterator

import numpy as np

from .eisenstein import (
    ONE,
    EisensteinInt,
    PrimaryFactorization,
    div_exact,
    factor,
    gcd,
    is_primary,
    primes_above,
    prime_sort_key,
)
from .errors import BoundTooSmall, NotCoprimeToThree

CACHE_ENV = "EISENCUBIC_CACHE_DIR"
_MAGIC = b"EISPRIME"
_VERSION = 1
_HEADER = struct.Struct("<8sIIQQ")


def rational_primes(n: int) -> np.ndarray:
    """Rational primes <= n (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@dataclass
class PrimeTable:
    bound: int
    primes: list[EisensteinInt]
    norm_index: dict[int, list[EisensteinInt]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.norm_index:
            for p in self.primes:
                self.norm_index.setdefault(p.norm(), []).append(p)
        self.norms = np.array([p.norm() for p in self.primes], dtype=np.int64)
        self.coords = np.array([(p.a, p.b) for p in self.primes], dtype=np.int64).reshape(-1, 2)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[EisensteinInt]:
        return iter(self.primes)

    def up_to(self, y: float) -> list[EisensteinInt]:
        return self.primes[: bisect_right(self.norms, y)]

    def save(self, path: str | os.PathLike) -> None:
        rec = np.empty((len(self.primes), 3), dtype="<i8")
        rec[:, 0] = self.norms
        rec[:, 1:] = self.coords
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(_MAGIC, _VERSION, 0, self.bound, len(self.primes)))
            fh.write(rec.tobytes())

    @classmethod
    def load(cls, path: str | os.PathLike) -> "PrimeTable":
        with open(path, "rb") as fh:
            magic, version, _, bound, count = _HEADER.unpack(fh.read(_HEADER.size))
            if magic != _MAGIC or version != _VERSION:
                raise ValueError(f"{path}: not a prime table (version {_VERSION})")
            rec = np.frombuffer(fh.read(), dtype="<i8").reshape(-1, 3)
        if len(rec) != count:
            raise ValueError(f"{path}: truncated prime table")
        primes = [EisensteinInt(int(a), int(b)) for a, b in rec[:, 1:]]
        return cls(int(bound), primes)


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    path = Path(root) if root else Path.home() / ".cache" / "eisencubic"
    path.mkdir(parents=True, exist_ok=True)
    return path


def sieve_primes(B: int) -> PrimeTable:
    """All primary primes of norm <= B, ordered by (norm, a, b)."""
    if B < 2:
        raise BoundTooSmall(f"bound {B} < 2")
    primes: list[EisensteinInt] = []
    for p in rational_primes(B).tolist():
        if p == 3:
            continue
        if p % 3 == 1:
            primes.extend(primes_above(p))
        elif p * p <= B:
            primes.append(EisensteinInt(-p, 0))
    primes.sort(key=prime_sort_key)
    return PrimeTable(B, primes)


_TABLES: dict[int, PrimeTable] = {}


def prime_table(B: int, use_disk: bool = True) -> PrimeTable:
    """Cached prime table covering norms <= B (memory, then disk)."""
    for bound in sorted(_TABLES):
        if bound >= B:
            t = _TABLES[bound]
            return t if bound == B else PrimeTable(B, t.up_to(B))
    B_req = B
    B = _round_bound(B)
    path = cache_dir() / f"primes_{B}.bin" if use_disk else None
    if path is not None and path.exists():
        try:
            table = PrimeTable.load(path)
        except ValueError:
            table = sieve_primes(B)
    else:
        table = sieve_primes(B)
        if path is not None:
            table.save(path)
    _TABLES[B] = table
    return table if B == B_req else PrimeTable(B_req, table.up_to(B_req))


def _round_bound(B: int) -> int:
    """Round B up to 1, 2 or 5 times a power of ten (at least 1000) so caches are shared."""
    step = 1000
    while True:
        for m in (1, 2, 5):
            if m * step >= B:
                return m * step
        step *= 10


def brute_force_primes(B: int) -> list[EisensteinInt]:
    """Primary primes of norm <= B by scanning lattice points (test oracle)."""
    out = []
    r = math.isqrt(4 * B // 3) + 2
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            z = EisensteinInt(a, b)
            n = z.norm()
            if n < 2 or n > B or n % 3 == 0 or not is_primary(z):
                continue
            f = factor(z)
            if len(f.factors) == 1 and f.factors[0][1] == 1:
                out.append(z)
    return sorted(out, key=prime_sort_key)


def moebius(f: PrimaryFactorization) -> int:
    if f.lambda_exp:
        raise NotCoprimeToThree("moebius is defined on elements prime to 3")
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def von_mangoldt(f: PrimaryFactorization) -> float:
    if f.lambda_exp:
        raise NotCoprimeToThree("von_mangoldt is defined on elements prime to 3")
    if len(f.factors) == 1:
        return math.log(f.factors[0][0].norm())
    return 0.0


# ---------------------------------------------------------------- enumeration

def primary_lattice(Y: int, a0: int = 1, step: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of all z = (a0 + step*i) + step*j*w with 1 <= N(z) <= Y.

    With step 3 this is every primary element; step 9 gives z = a0 mod 9.
    """
    a_parts, b_parts = [], []
    jmax = math.isqrt(4 * Y // 3) // step + 1
    for j in range(-jmax, jmax + 1):
        b = step * j
        disc = Y - 0.75 * b * b
        if disc < 0:
            continue
        lo = math.floor(b / 2 - math.sqrt(disc)) - 1
        hi = math.ceil(b / 2 + math.sqrt(disc)) + 1
        i0 = -((a0 - lo) // step)
        i1 = (hi - a0) // step
        a = a0 + step * np.arange(i0, i1 + 1, dtype=np.int64)
        a_parts.append(a)
        b_parts.append(np.full(a.shape, b, dtype=np.int64))
    a = np.concatenate(a_parts)
    b = np.concatenate(b_parts)
    n = a * a - a * b + b * b
    keep = (n >= 1) & (n <= Y)
    a, b, n = a[keep], b[keep], n[keep]
    order = np.lexsort((b, a, n))
    return a[order], b[order]


def squarefree_mask(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """True where a + b*w (assumed prime to 3) is square-free."""
    n = a * a - a * b + b * b
    ok = np.ones(a.shape, dtype=bool)
    if a.size == 0:
        return ok
    top = int(n.max())
    for p in rational_primes(math.isqrt(top)).tolist():
        if p == 3:
            continue
        if p % 3 == 2:
            # inert: the square of (p) has norm p^4
            if p ** 4 > top:
                continue
            p2 = p * p
            idx = np.flatnonzero(n % (p2 * p2) == 0)
            bad = (a[idx] % p2 == 0) & (b[idx] % p2 == 0)
            ok[idx[bad]] = False
            continue
        p2 = p * p
        idx = np.flatnonzero(n % p2 == 0)
        if idx.size == 0:
            continue
        for pi in primes_above(p):
            sq = (pi * pi).conj()
            x, y = a[idx], b[idx]
            ua = x * sq.a - y * sq.b
            ub = x * sq.b + y * sq.a - y * sq.b
            bad = (ua % p2 == 0) & (ub % p2 == 0)
            ok[idx[bad]] = False
    return ok


def thin_family_arrays(Y: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of the thin family {n != 1 square-free, n = 1 mod 9, N(n) <= Y}."""
    if Y < 1:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    a, b = primary_lattice(Y, a0=1, step=9)
    keep = squarefree_mask(a, b) & ~((a == 1) & (b == 0))
    return a[keep], b[keep]


def enumerate_thin_family(X: int) -> Iterator[EisensteinInt]:
    a, b = thin_family_arrays(int(X))
    for x, y in zip(a.tolist(), b.tolist()):
        yield EisensteinInt(x, y)


def squarefree_elements(Y: int, table: PrimeTable | None = None) -> list[tuple[EisensteinInt, tuple[EisensteinInt, ...]]]:
    """Square-free primary elements of norm <= Y with their prime factors.

    Built as products of distinct primary primes, so factorizations come for free.
    """
    table = table or prime_table(max(Y, 2))
    primes = table.up_to(Y)
    norms = [p.norm() for p in primes]
    out: list[tuple[EisensteinInt, tuple[EisensteinInt, ...]]] = [(ONE, ())]

    def extend(start: int, value: EisensteinInt, nv: int, fac: tuple[EisensteinInt, ...]) -> None:
        for i in range(start, len(primes)):
            nn = nv * norms[i]
            if nn > Y:
                break
            v = value * primes[i]
            f = fac + (primes[i],)
            out.append((v, f))
            extend(i + 1, v, nn, f)

    extend(0, ONE, 1, ())
    out.sort(key=lambda t: prime_sort_key(t[0]))
    return out


def _mod9_one(z: EisensteinInt) -> bool:
    return (z.a - 1) % 9 == 0 and z.b % 9 == 0


def enumerate_full_family(X: int) -> Iterator[tuple[EisensteinInt, EisensteinInt]]:
    """Pairs (a, b) square-free, coprime, primary, ab^2 = 1 mod 9, ab^2 != 1, N(ab) <= X."""
    for q, fac in squarefree_elements(int(X)):
        for k in range(len(fac) + 1):
            for sub in combinations(fac, k):
                b = ONE
                for p in sub:
                    b = b * p
                a = div_exact(q, b)
                m = a * b * b
                if m == ONE or not _mod9_one(m):
                    continue
                yield a, b


def brute_thin_family(X: int) -> list[EisensteinInt]:
    """Thin family by factoring every lattice point (test oracle)."""
    out = []
    r = math.isqrt(4 * X // 3) + 2
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            z = EisensteinInt(a, b)
            n = z.norm()
            if n < 2 or n > X or not _mod9_one(z):
                continue
            if factor(z).is_squarefree():
                out.append(z)
    return sorted(out, key=prime_sort_key)


def brute_full_family(X: int) -> list[tuple[EisensteinInt, EisensteinInt]]:
    """Full family by a double loop over square-free primary elements (test oracle)."""
    elems = []
    r = math.isqrt(4 * X // 3) + 2
    for a in range(-r, r + 1):
        for b in range(-r, r + 1):
            z = EisensteinInt(a, b)
            n = z.norm()
            if n < 1 or n > X or not is_primary(z):
                continue
            if factor(z).is_squarefree():
                elems.append(z)
    out = []
    for x in elems:
        for y in elems:
            if x.norm() * y.norm() > X or gcd(x, y) != ONE:
                continue
            m = x * y * y
            if m != ONE and _mod9_one(m):
                out.append((x, y))
    return out
