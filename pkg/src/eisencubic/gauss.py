"""Cubic Gauss sums g(r, n), root numbers and the Poisson summation check.

g(r, n) = sum over alpha mod n of chi_n(alpha) e(tr(r alpha / n)), where
e(x) = exp(2 pi i x) and tr(u + v w) = 2u - v.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np
from scipy import integrate, special

from .characters import (
    CharacterSpec,
    classify,
    cubic_symbol_fast,
    omega_image,
    require_primitive,
    symbol_array,
)
from .eisenstein import (
    ONE,
    SQRT_MINUS_3,
    EisensteinInt,
    PrimaryFactorization,
    as_eis,
    div_exact,
    divides,
    factor,
    is_primary,
    mod_reduce,
    residues,
    split_prime,
)
from .errors import CapExceeded, ModulusNotCoprimeToThree, QuadratureFailure
from .sieve import cache_dir, rational_primes
from .testfunctions import WeightFunction

DIRECT_CAP = 10**6
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class GaussSum:
    r: EisensteinInt
    n: EisensteinInt
    value: complex
    exact_norm_sq: int | None = None

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class RootNumber:
    chi: CharacterSpec
    value: complex


def _check_primary(n: EisensteinInt) -> EisensteinInt:
    n = as_eis(n)
    if n.norm() % 3 == 0:
        raise ModulusNotCoprimeToThree(f"{n!r} is not coprime to 3")
    if not is_primary(n):
        raise ModulusNotCoprimeToThree(f"{n!r} is not primary")
    return n


def _norm_sq_if_primitive(r: EisensteinInt, n: EisensteinInt, fac: PrimaryFactorization) -> int | None:
    if fac.is_squarefree() and all(not divides(p, r) for p in fac.primes):
        return n.norm()
    return None


def _phase_sum(k: np.ndarray, den: int) -> complex:
    """Sum of exp(2 pi i k/den) for integers 0 <= k < den, compensated."""
    ang = (TWO_PI / den) * k.astype(np.float64)
    return complex(math.fsum(np.cos(ang)), math.fsum(np.sin(ang)))


def _trace_against(x: np.ndarray, y: np.ndarray, c: int, d: int) -> np.ndarray:
    """tr((x + y w)(c + d w)) on coordinate arrays."""
    u = x * c - y * d
    v = x * d + y * c - y * d
    return 2 * u - v


def gauss_direct(r, n, cap: int = DIRECT_CAP) -> GaussSum:
    """Literal summation over the residue box of n."""
    r, n = as_eis(r), _check_primary(n)
    N = n.norm()
    if N > cap:
        raise CapExceeded(f"N(n) = {N} exceeds the direct summation cap {cap}")
    fac = factor(n)
    if n == ONE:
        return GaussSum(r, n, 1 + 0j, 1)
    rr = mod_reduce(r, n)
    m = rr * n.conj()  # tr(r a / n) = tr(r a conj(n)) / N(n)
    x, y = residues(n)
    e = symbol_array(n, x, y, fac).astype(np.int64)
    live = e >= 0
    t = _trace_against(x[live], y[live], m.a, m.b) % N
    k = (3 * t + e[live] * N) % (3 * N)
    return GaussSum(r, n, _phase_sum(k, 3 * N), _norm_sq_if_primitive(r, n, fac))


# ------------------------------------------------------------ multiplicative evaluation

@lru_cache(maxsize=None)
def prime_gauss(pi: EisensteinInt) -> complex:
    """g(1, pi) for a primary prime, by direct summation (memoised)."""
    return gauss_direct(ONE, pi).value


def totient(pi: EisensteinInt, k: int) -> int:
    q = pi.norm()
    return q ** (k - 1) * (q - 1)


def _valuation(s: EisensteinInt, pi: EisensteinInt) -> tuple[int, EisensteinInt]:
    j = 0
    while divides(pi, s):
        s = div_exact(s, pi)
        j += 1
    return j, s


def prime_power_gauss(s: EisensteinInt, pi: EisensteinInt, k: int, base=prime_gauss) -> complex:
    """g(s, pi^k) from the prime-power closed forms plus the twist law."""
    if s.is_zero():
        return complex(totient(pi, k)) if k % 3 == 0 else 0j
    j, unit_part = _valuation(s, pi)
    if k == j + 1:
        scale = pi.norm() ** j
        if k % 3 == 0:
            core = -1 + 0j
        elif k % 3 == 1:
            core = base(pi)
        else:
            core = base(pi).conjugate()
        core *= scale
    elif k % 3 == 0 and k <= j:
        core = complex(totient(pi, k))
    else:
        return 0j
    # g(pi^j s', pi^k) = conj(chi_{pi^k}(s')) g(pi^j, pi^k)
    twist = cubic_symbol_fast(unit_part, pi) ** k
    return complex(twist.conj()) * core


def gauss_fast(r, n, fac: PrimaryFactorization | None = None, base=prime_gauss) -> GaussSum:
    """g(r, n) via g(r, m pi^k) = g(r m, pi^k) g(r, m) over the factorisation of n."""
    r, n = as_eis(r), _check_primary(n)
    fac = fac or factor(n)
    if n == ONE:
        return GaussSum(r, n, 1 + 0j, 1)
    s = mod_reduce(r, n)
    value = 1 + 0j
    for pi, k in fac.factors:
        pk = pi ** k
        value *= prime_power_gauss(mod_reduce(s, pk), pi, k, base)
        if value == 0:
            break
        s = s * pk
    return GaussSum(r, n, value, _norm_sq_if_primitive(r, n, fac))


# ------------------------------------------------------------ bulk prime sums

@numba.njit(cache=True)
def _powmod(x, e, p):
    out = 1
    x %= p
    while e:
        if e & 1:
            out = out * x % p
        x = x * x % p
        e >>= 1
    return out


@numba.njit(cache=True)
def _primitive_root(p):
    m = p - 1
    fs = np.zeros(32, dtype=np.int64)
    nf = 0
    q = 2
    while q * q <= m:
        if m % q == 0:
            fs[nf] = q
            nf += 1
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        fs[nf] = m
        nf += 1
    g = 2
    while True:
        ok = True
        for i in range(nf):
            if _powmod(g, (p - 1) // fs[i], p) == 1:
                ok = False
                break
        if ok:
            return g
        g += 1


@numba.njit(cache=True)
def _index_classes(p, g, cls):
    """cls[g^k mod p] = k mod 3, walking eight interleaved chains."""
    lanes = 8
    m = (p - 1 + lanes - 1) // lanes
    xs = np.empty(lanes, dtype=np.int64)
    js = np.empty(lanes, dtype=np.int64)
    gm = _powmod(g, m, p)
    x = 1
    for l in range(lanes):
        xs[l] = x
        js[l] = (l * m) % 3
        x = x * gm % p
    pf = float(p)
    inv = 1.0 / pf
    gf = float(g)
    for k in range(m):
        for l in range(lanes):
            if l * m + k < p - 1:
                cls[xs[l]] = js[l]
            jj = js[l] + 1
            js[l] = 0 if jj == 3 else jj
            # x*g < 2^53, so the float quotient is off by at most one
            prod = float(xs[l]) * gf
            q = math.floor(prod * inv)
            r = int(prod - q * pf)
            if r < 0:
                r += p
            elif r >= p:
                r -= p
            xs[l] = r


@numba.njit(cache=True)
def _split_gauss_kernel(ps, cs, ts, out):
    """g(1, pi) for split primes pi of norm p with w = c mod pi and tr(pi) = t.

    Uses g(1, pi) = conj(chi(t)) G where G is the classical Gauss sum of the
    cubic character x -> x^((p-1)/3) on Z/p, evaluated through Gauss periods.
    """
    pmax = 0
    for i in range(ps.size):
        if ps[i] > pmax:
            pmax = ps[i]
    cls = np.zeros(pmax + 1, dtype=np.int8)
    block = 1024
    lo_c = np.empty(block)
    lo_s = np.empty(block)
    hi_c = np.empty(pmax // block + 2)
    hi_s = np.empty(pmax // block + 2)
    for i in range(ps.size):
        p = ps[i]
        g = _primitive_root(p)
        _index_classes(p, g, cls)
        e0 = 1 if _powmod(g, (p - 1) // 3, p) == cs[i] else 2
        for k in range(block):
            a = 2 * np.pi * k / p
            lo_c[k] = np.cos(a)
            lo_s[k] = np.sin(a)
        for k in range(p // block + 1):
            a = 2 * np.pi * ((k * block) % p) / p
            hi_c[k] = np.cos(a)
            hi_s[k] = np.sin(a)
        s0 = 0.0
        s1 = 0.0
        s2 = 0.0
        half = (p - 1) // 2
        for xx in range(1, half + 1):
            h = xx // block
            l = xx - h * block
            cv = hi_c[h] * lo_c[l] - hi_s[h] * lo_s[l]
            c = cls[xx]
            if c == 0:
                s0 += cv
            elif c == 1:
                s1 += cv
            else:
                s2 += cv
        # G = sum_j S_j w^(j e0), S_j = 2 * partial sums (x and -x pair up)
        w_re = -0.5
        w_im = math.sqrt(3.0) / 2
        if e0 == 1:
            re = 2 * (s0 + w_re * (s1 + s2))
            im = 2 * w_im * (s1 - s2)
        else:
            re = 2 * (s0 + w_re * (s1 + s2))
            im = 2 * w_im * (s2 - s1)
        # conj(chi(t)) = w^(-e) with e = cls[t] * e0
        et = (cls[ts[i] % p] * e0) % 3
        if et == 0:
            out[i, 0] = re
            out[i, 1] = im
        else:
            ang = -2 * np.pi * et / 3
            ca = math.cos(ang)
            sa = math.sin(ang)
            out[i, 0] = re * ca - im * sa
            out[i, 1] = re * sa + im * ca


def split_gauss_batch(primes: list[EisensteinInt]) -> np.ndarray:
    """Complex g(1, pi) for a list of split primary primes (compiled kernel)."""
    if not primes:
        return np.zeros(0, dtype=complex)
    ps = np.array([p.norm() for p in primes], dtype=np.int64)
    cs = np.array([omega_image(p) for p in primes], dtype=np.int64)
    ts = np.array([p.trace() % p.norm() for p in primes], dtype=np.int64)
    out = np.zeros((len(primes), 2))
    _split_gauss_kernel(ps, cs, ts, out)
    return out[:, 0] + 1j * out[:, 1]


class PrimeGaussTable:
    """g(1, pi) for every primary prime of norm <= B, cached on disk.

    One sum per rational prime p = 1 mod 3 is computed; the conjugate prime
    gets the complex conjugate value.
    """

    def __init__(self, B: int, use_disk: bool = True):
        self.B = int(B)
        path = cache_dir() / f"gauss1_{self.B}.npz" if use_disk else None
        if path is not None and path.exists():
            data = np.load(path)
            ps, a, b, vals = data["p"], data["a"], data["b"], data["g"]
        else:
            plist = [int(p) for p in rational_primes(self.B) if p % 3 == 1]
            pis = [split_prime(p) for p in plist]
            vals = split_gauss_batch(pis)
            ps = np.array(plist, dtype=np.int64)
            a = np.array([x.a for x in pis], dtype=np.int64)
            b = np.array([x.b for x in pis], dtype=np.int64)
            if path is not None:
                np.savez(path, p=ps, a=a, b=b, g=vals)
        self._split = {int(p): (EisensteinInt(int(x), int(y)), complex(v)) for p, x, y, v in zip(ps, a, b, vals)}

    def __call__(self, pi: EisensteinInt) -> complex:
        n = pi.norm()
        if pi.b == 0:
            return prime_gauss(pi)
        rep, val = self._split[n]
        return val if pi == rep else val.conjugate()


@lru_cache(maxsize=4)
def prime_gauss_table(B: int) -> PrimeGaussTable:
    return PrimeGaussTable(B)


# ------------------------------------------------------------ root numbers

def _conductor_sum(n1: EisensteinInt, n2: EisensteinInt, base=prime_gauss) -> complex:
    """sum over y mod n1 n2 of chi_{n1 n2^2}(y) e(tr(y / (n1 n2)))."""
    g1 = gauss_fast(ONE, n1, base=base).value
    if n2 == ONE:
        return g1
    g2 = gauss_fast(ONE, n2, base=base).value
    c = complex(cubic_symbol_fast(n2, n1)) * complex(cubic_symbol_fast(n1, n2).conj())
    return c * g1 * g2.conjugate()


def root_number(chi: CharacterSpec, base=prime_gauss) -> RootNumber:
    """W(chi) = chi(sqrt(-3)) times the Gauss sum of chi at its conductor."""
    require_primitive(chi)
    n1, n2, _ = chi.split
    value = complex(chi(SQRT_MINUS_3)) * _conductor_sum(n1, n2, base)
    return RootNumber(chi, value)


def root_number_direct(chi: CharacterSpec, cap: int = DIRECT_CAP) -> RootNumber:
    """W(chi) = sum over x mod m of chi(x) e(tr(x / (m sqrt(-3)))), m the conductor."""
    require_primitive(chi)
    m = chi.conductor
    M = m.norm()
    if M > cap:
        raise CapExceeded(f"conductor norm {M} exceeds cap {cap}")
    x, y = residues(m)
    e = symbol_array(chi.modulus, x, y, chi.factorization).astype(np.int64)
    live = e >= 0
    # 1/(m sqrt(-3)) = conj(m) conj(sqrt(-3)) / (3 N(m)), conj(sqrt(-3)) = -sqrt(-3)
    d = m.conj() * (-SQRT_MINUS_3)
    t = _trace_against(x[live], y[live], d.a, d.b) % (3 * M)
    k = (t + e[live] * M) % (3 * M)
    return RootNumber(chi, _phase_sum(k, 3 * M))


# ------------------------------------------------------------ Poisson summation

@dataclass(frozen=True)
class PoissonReport:
    residual: float
    lhs: complex
    rhs: complex
    lhs_terms: int
    rhs_terms: int
    lhs_tail: float
    rhs_tail: float
    quad_error: float
    extras: dict = field(default_factory=dict)


def w_hat(w: WeightFunction, t: float, epsabs: float = 1e-15) -> tuple[float, float]:
    """Transform of z -> w(N(z)) in lattice coordinates, as a radial integral.

    With z = x + y w, dx dy = (2/sqrt 3) dA and the phase e(-t y) is a plane
    wave of frequency 2t/sqrt(3), so the double integral collapses to
    (4 pi / sqrt 3) int_0^inf w(r^2) J0(4 pi t r / sqrt 3) r dr.
    """
    R = math.sqrt(w.cutoff)
    k = 4 * math.pi * t / math.sqrt(3)
    osc = max(1, int(k * R / math.pi) + 1)
    pts = np.linspace(0, R, min(osc + 1, 400))[1:-1]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(lambda r: float(w(r * r)) * special.j0(k * r) * r, 0, R,
                                  limit=1000, epsabs=epsabs, epsrel=1e-13, points=pts if len(pts) else None)
    c = 4 * math.pi / math.sqrt(3)
    return c * val, c * err


def w_hat_2d(w: WeightFunction, t: float) -> float:
    """The same transform as a literal double integral over the (x, y) plane."""
    L = math.sqrt(4 * w.cutoff / 3) + 1

    def f(x, y):
        return float(w(x * x - x * y + y * y)) * math.cos(TWO_PI * t * y)

    val, _ = integrate.dblquad(f, -L, L, -L, L, epsabs=1e-11, epsrel=1e-11)
    return val


def _lattice(R: float) -> tuple[np.ndarray, np.ndarray]:
    """All (a, b) with N(a + b w) <= R."""
    bmax = int(math.isqrt(int(4 * R / 3))) + 2
    b = np.arange(-bmax, bmax + 1, dtype=np.int64)
    amax = bmax + int(math.isqrt(int(R))) + 2
    a = np.arange(-amax, amax + 1, dtype=np.int64)
    A, B = np.meshgrid(a, b, indexing="ij")
    A, B = A.ravel(), B.ravel()
    n = A * A - A * B + B * B
    keep = n <= R
    return A[keep], B[keep]


def _char_values(chi: CharacterSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    e = symbol_array(chi.modulus, a, b, chi.factorization).astype(np.int64)
    out = np.exp(2j * np.pi * np.where(e < 0, 0, e) / 3)
    out[e < 0] = 0
    return out


def poisson_sides(chi: CharacterSpec, w: WeightFunction, Y: float, tol: float = 1e-12) -> PoissonReport:
    """Both sides of the twisted Poisson summation formula for chi and w(N(.)/Y)."""
    require_primitive(chi)
    if Y <= 0:
        raise ValueError("Y must be positive")
    Nf = chi.conductor.norm()
    # left side: sum over the lattice until w is negligible
    R = Y * w.cutoff
    a, b = _lattice(R)
    nrm = (a * a - a * b + b * b).astype(float)
    vals = _char_values(chi, a, b) * w(nrm / Y)
    lhs = complex(math.fsum(vals.real), math.fsum(vals.imag))
    lhs_tail = float(w(np.array(w.cutoff))) * (2 * math.pi / math.sqrt(3)) * R
    # right side: dual sum, cut where the transform is negligible
    cache: dict[int, float] = {}
    qerr = 0.0

    def what(nv: int) -> float:
        nonlocal qerr
        if nv not in cache:
            v, e = w_hat(w, math.sqrt(Y * nv / Nf))
            if e > tol:
                raise QuadratureFailure(f"transform error {e:.2e} above {tol:.1e}")
            qerr = max(qerr, e)
            cache[nv] = v
        return cache[nv]

    t_cut, step, quiet = 0.0, 0.25, 0
    while quiet < 4:
        t_cut += step
        v, e = w_hat(w, t_cut)
        # below the quadrature noise floor or negligible even summed over the ring
        small = abs(v) <= 10 * e or abs(v) * (1 + t_cut * t_cut * Nf / Y) < tol * 1e-3
        quiet = quiet + 1 if small else 0
        if t_cut > 200:
            raise QuadratureFailure("transform does not decay")
    Rd = t_cut * t_cut * Nf / Y
    da, db = _lattice(Rd)
    dn = (da * da - da * db + db * db).tolist()
    conj_chi = chi.conjugate()
    cv = _char_values(conj_chi, da, db)
    terms = np.array([what(int(v)) for v in dn]) * cv
    W_bar = root_number(conj_chi).value
    dual = complex(math.fsum(terms.real), math.fsum(terms.imag))
    rhs = Y / W_bar * dual
    rhs_tail = Y / math.sqrt(Nf) * abs(w_hat(w, t_cut)[0]) * (2 * math.pi / math.sqrt(3)) * Rd
    return PoissonReport(abs(lhs - rhs), lhs, rhs, len(a), len(da), lhs_tail, rhs_tail, qerr,
                         {"conductor_norm": Nf, "Y": Y, "weight": w.ident})


def poisson_check(chi: CharacterSpec, w: WeightFunction, Y: float) -> float:
    return poisson_sides(chi, w, Y).residual


def primitive_characters(max_conductor_norm: int) -> list[CharacterSpec]:
    """Every primitive cubic character chi_{n1 n2^2} with N(n1 n2) <= bound."""
    from .sieve import squarefree_elements
    from itertools import combinations

    out = []
    for q, fac in squarefree_elements(max_conductor_norm):
        if q == ONE:
            continue
        for k in range(len(fac) + 1):
            for sub in combinations(fac, k):
                n = ONE
                for p in fac:
                    n = n * (p * p if p in sub else p)
                out.append(classify(n))
    return out
