"""Averages of cubic Gauss sums over primes, Vaughan's identity and the h_a series."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy import stats

from .characters import LambdaCharacter, cubic_symbol_fast, trivial_lambda
from .eisenstein import ONE, EisensteinInt, PrimaryFactorization, as_eis, div_exact, divides, factor, gcd, is_primary
from .errors import IdentityViolation, InvalidRange, ModulusNotCoprimeToThree
from .gauss import gauss_fast, prime_gauss, prime_gauss_table
from .sieve import prime_table, primary_lattice, squarefree_elements

HSUM_COLUMNS = ("Z", "r_a", "r_b", "lambda_id", "re_H", "im_H")
HSUM_SCHEMA = "# eisencubic hsum v1"
TABLE_BOUND = 10**6


# ------------------------------------------------------------ shifts

@dataclass(frozen=True)
class ShiftDecomposition:
    """r = r1 r2^2 r3^3 with r1, r2 square-free and coprime; r3_star = primes of r3 not dividing r1 r2."""

    r: EisensteinInt
    r1: EisensteinInt
    r2: EisensteinInt
    r3: EisensteinInt
    r3_star: EisensteinInt

    def recompose(self) -> EisensteinInt:
        return self.r1 * self.r2 ** 2 * self.r3 ** 3


def shift_decomposition(r) -> ShiftDecomposition:
    r = as_eis(r)
    if not is_primary(r):
        raise ModulusNotCoprimeToThree(f"shift {r!r} is not primary")
    fac = factor(r)
    r1, r2, r3 = fac.split()
    return ShiftDecomposition(r, r1, r2, r3, fac.r3_star())


def _check_lambda(lam: LambdaCharacter | None) -> LambdaCharacter:
    lam = lam if lam is not None else trivial_lambda()
    if not isinstance(lam, LambdaCharacter):
        raise TypeError("lambda must be a ray class character mod 9 times an optional fixed twist")
    if lam.twist is not None and lam.twist.norm() > 10**4:
        raise InvalidRange("twist modulus too large: lambda must have bounded conductor")
    return lam


# ------------------------------------------------------------ normalized Gauss sums

def g_tilde(r: EisensteinInt, c: EisensteinInt, lam: LambdaCharacter, fac=None) -> complex:
    """g(r, c) lambda(c) N(c)^(-1/2)."""
    g = gauss_fast(r, c, fac).value
    if g == 0:
        return 0j
    return g * lam.value(c) / math.sqrt(c.norm())


@lru_cache(maxsize=16)
def _squarefree_upto(Y: int) -> tuple[tuple[EisensteinInt, tuple[EisensteinInt, ...]], ...]:
    return tuple(squarefree_elements(Y))


def _coprime_to(fac: tuple[EisensteinInt, ...], r_primes: frozenset) -> bool:
    return not any(p in r_primes for p in fac)


def _prime_set(r: EisensteinInt) -> frozenset:
    return frozenset(factor(r).primes) if r != ONE else frozenset()


# ------------------------------------------------------------ H(Z, r, lambda)

def _prime_terms(Z: float, r: EisensteinInt, lam: LambdaCharacter) -> tuple[np.ndarray, np.ndarray]:
    """Norms and terms g~(r, pi) log N(pi) for primes pi prime to r, sorted by norm."""
    primes = prime_table(max(int(Z), 2)).up_to(Z)
    rp = _prime_set(r)
    table = prime_gauss_table(TABLE_BOUND) if Z > 5 * 10**4 and Z <= TABLE_BOUND else None
    norms, vals = [], []
    for pi in primes:
        if pi in rp:
            continue
        q = pi.norm()
        g1 = table(pi) if table is not None else prime_gauss(pi)
        tw = cubic_symbol_fast(r, pi)  # chi_pi(r); g(r, pi) = conj(chi_pi(r)) g(1, pi)
        g = g1 * complex(tw).conjugate()
        norms.append(q)
        vals.append(g * lam.value(pi) * math.log(q) / math.sqrt(q))
    return np.array(norms, dtype=np.int64), np.array(vals, dtype=complex)


def h_statistic(Z: float, r=ONE, lam: LambdaCharacter | None = None) -> complex:
    """H(Z, r, lambda): sum over primary primes pi prime to r with N(pi) <= Z of g~(r, pi) log N(pi)."""
    lam = _check_lambda(lam)
    r = as_eis(r)
    _, vals = _prime_terms(Z, r, lam)
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def h_statistic_lambda_weighted(Z: float, r=ONE, lam: LambdaCharacter | None = None) -> complex:
    """H(Z, r, lambda) as the von Mangoldt weighted sum over all primary c prime to r.

    Every prime power is evaluated with gauss_fast, so vanishing at higher powers is not assumed.
    """
    lam = _check_lambda(lam)
    r = as_eis(r)
    rp = _prime_set(r)
    terms = []
    for pi in prime_table(max(int(Z), 2)).up_to(Z):
        if pi in rp:
            continue
        q = pi.norm()
        c, k = pi, 1
        while c.norm() <= Z:
            g = gauss_fast(r, c).value
            if g != 0:
                terms.append(g * lam.value(c) * math.log(q) / math.sqrt(c.norm()))
            c, k = c * pi, k + 1
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


@dataclass(frozen=True)
class HsumReport:
    r: EisensteinInt
    lambda_id: str
    Z: tuple[float, ...]
    H: tuple[complex, ...]
    slope: float
    slope_ci: tuple[float, float]
    intercept: float

    def rows(self) -> list[tuple]:
        return [(z, self.r.a, self.r.b, self.lambda_id, h.real, h.imag) for z, h in zip(self.Z, self.H)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(HSUM_SCHEMA + "\n")
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(HSUM_COLUMNS)
        for z, ra, rb, lid, re, im in self.rows():
            wr.writerow((repr(z), ra, rb, lid, repr(re), repr(im)))
        return buf.getvalue()


def fit_slope(Z, values, level: float = 0.95) -> tuple[float, tuple[float, float], float]:
    """Least squares slope of log|H| against log Z with a t-based confidence interval."""
    x = np.log(np.asarray(Z, dtype=float))
    y = np.log(np.abs(np.asarray(values)))
    fit = stats.linregress(x, y)
    q = stats.t.ppf(0.5 + level / 2, len(x) - 2)
    return float(fit.slope), (float(fit.slope - q * fit.stderr), float(fit.slope + q * fit.stderr)), float(fit.intercept)


def h_grid(Z_values, r=ONE, lam: LambdaCharacter | None = None) -> HsumReport:
    """H on a grid of Z (prefix sums of a single pass) with the log-log slope."""
    lam = _check_lambda(lam)
    r = as_eis(r)
    Z_values = sorted(float(z) for z in Z_values)
    if len(Z_values) < 3:
        raise InvalidRange("need at least three Z values for a slope")
    norms, vals = _prime_terms(max(Z_values), r, lam)
    cs_re = np.cumsum(vals.real)
    cs_im = np.cumsum(vals.imag)
    H = []
    for z in Z_values:
        k = int(np.searchsorted(norms, z, side="right"))
        H.append(complex(cs_re[k - 1], cs_im[k - 1]) if k else 0j)
    slope, ci, icept = fit_slope(Z_values, H)
    return HsumReport(r, lam.ident, tuple(Z_values), tuple(H), slope, ci, icept)


def geometric_grid(lo: float, hi: float, count: int = 10) -> list[float]:
    return [float(z) for z in np.geomspace(lo, hi, count)]


# ------------------------------------------------------------ Type I sums

def _sqf_coprime(Y: int, r: EisensteinInt):
    rp = _prime_set(r)
    return [(q, f) for q, f in _squarefree_upto(int(Y)) if _coprime_to(f, rp)]


def type1_sum_F(z: float, a, r=ONE, lam: LambdaCharacter | None = None) -> complex:
    """F_a(z, r, lambda): sum of g~(r, b) over primary b with a | b, (b, r) = 1, N(b) <= z.

    Only square-free b are visited; g(r, b) vanishes otherwise when (b, r) = 1.
    """
    lam = _check_lambda(lam)
    a, r = as_eis(a), as_eis(r)
    fa = factor(a)
    if not fa.is_squarefree() or fa.lambda_exp or gcd(a, r) != ONE:
        raise InvalidRange("a must be square-free, primary and prime to r")
    need = set(fa.primes)
    terms = []
    for b, f in _sqf_coprime(int(z), r):
        if need.issubset(f):
            terms.append(_gt(r, b, f, lam))
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _gt(r: EisensteinInt, b: EisensteinInt, f: tuple[EisensteinInt, ...], lam: LambdaCharacter) -> complex:
    return _gt_cached(r, b, f, lam)


@lru_cache(maxsize=1 << 18)
def _gt_cached(r, b, f, lam) -> complex:
    if b == ONE:
        return lam.value(ONE)
    fac = PrimaryFactorization(ONE, 0, tuple((p, 1) for p in f), b)
    return g_tilde(r, b, lam, fac)


def type1_sup(Z: float, a: EisensteinInt, r: EisensteinInt, lam: LambdaCharacter) -> float:
    """sup over Z <= z <= 2Z of |F_a(z, r, lambda)| (F is a step function in z)."""
    need = set(factor(a).primes)
    pts = []
    for b, f in _sqf_coprime(int(2 * Z), r):
        if need.issubset(f):
            pts.append((b.norm(), _gt(r, b, f, lam)))
    pts.sort(key=lambda t: t[0])
    total, best = 0j, 0.0
    for n, v in pts:
        if n > Z and abs(total) > best:
            best = abs(total)
        total += v
    return max(best, abs(total))


# ------------------------------------------------------------ Vaughan's identity

SIGMA_KEYS = ("0", "1", "2'", "2''", "3", "4")


@dataclass(frozen=True)
class VaughanReport:
    Z: float
    u: float
    r: EisensteinInt
    lambda_id: str
    sigma: dict[str, complex]
    identity_residual: float
    h_difference: complex
    h_residual: float
    sigma4_stated: complex
    type1_bound: float | None = None

    def to_json(self) -> str:
        d = asdict(self)
        d["r"] = [self.r.a, self.r.b]
        d["sigma"] = {k: [v.real, v.imag] for k, v in self.sigma.items()}
        d["h_difference"] = [self.h_difference.real, self.h_difference.imag]
        d["sigma4_stated"] = [self.sigma4_stated.real, self.sigma4_stated.imag]
        return json.dumps(d, sort_keys=True)


def _triples(Z: float, r: EisensteinInt):
    """(a, N(a), N(b), N(c), number of primes in b, n, primes of n) over square-free n = abc, Z < N(n) <= 2Z.

    a is a prime (the only square-free support of the von Mangoldt function) and
    b, c run over complementary divisors of n / a.
    """
    for n, f in _sqf_coprime(int(2 * Z), r):
        if n.norm() <= Z:
            continue
        for i, a in enumerate(f):
            rest = f[:i] + f[i + 1 :]
            for k in range(len(rest) + 1):
                for bs in combinations(rest, k):
                    cs = tuple(p for p in rest if p not in bs)
                    nb = math.prod(p.norm() for p in bs)
                    nc = math.prod(p.norm() for p in cs)
                    yield a, a.norm(), nb, nc, len(bs), n, f


def _fsum_c(vals) -> complex:
    vals = list(vals)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def vaughan_decompose(Z: float, r=ONE, u: float = 1.0, lam: LambdaCharacter | None = None,
                      tol: float = 1e-8) -> VaughanReport:
    """All six sums of Vaughan's identity and both consistency checks.

    Sigma_4 is taken over N(a) <= u and N(bc) <= u; the variant N(a) < N(bc) <= u is reported
    as sigma4_stated.
    """
    lam = _check_lambda(lam)
    r = as_eis(r)
    if u < 1:
        raise InvalidRange("u must be >= 1")
    acc: dict[str, list[complex]] = {k: [] for k in SIGMA_KEYS}
    stated4 = []
    for a, na, nb, nc, kb, n, f in _triples(Z, r):
        val = math.log(na) * (-1) ** kb * _gt(r, n, f, lam)
        if val == 0:
            continue
        if nb * nc <= u:
            acc["0"].append(val)
        if nb <= u:
            acc["1"].append(val)
        if na * nb <= u:
            acc["2'"].append(val)
        if na <= u and nb <= u < na * nb:
            acc["2''"].append(val)
        if nb <= u < na and u < nb * nc:
            acc["3"].append(val)
        if na <= u and nb * nc <= u:
            acc["4"].append(val)
        if na < nb * nc <= u:
            stated4.append(val)
    sig = {k: _fsum_c(v) for k, v in acc.items()}
    rhs = sig["1"] - sig["2'"] - sig["2''"] - sig["3"] + sig["4"]
    scale = 1 + max(abs(v) for v in sig.values())
    resid = abs(sig["0"] - rhs) / scale
    hd = h_statistic(2 * Z, r, lam) - h_statistic(Z, r, lam)
    hres = abs(sig["0"] - hd) / scale
    if resid > tol or hres > tol:
        raise IdentityViolation(f"Vaughan identity fails at Z={Z}, u={u}, r={r!r}: {resid:.3e}, {hres:.3e}")
    if u <= Z ** (1 / 3) and sig["4"] != 0:
        raise IdentityViolation(f"Sigma_4 = {sig['4']} but u <= Z^(1/3)")
    bound = None
    if u <= Z ** (1 / 3):
        bound = type1_bound(Z, r, u, lam)
        if abs(sig["1"]) > bound * (1 + 1e-12):
            raise IdentityViolation(f"|Sigma_1| = {abs(sig['1'])} exceeds the Type I bound {bound}")
    return VaughanReport(float(Z), float(u), r, lam.ident, sig, resid, hd, hres, _fsum_c(stated4), bound)


def type1_bound(Z: float, r: EisensteinInt, u: float, lam: LambdaCharacter) -> float:
    """3 log(2Z) times the sum over square-free a prime to r, N(a) <= u, of sup |F_a| on [Z, 2Z]."""
    total = [type1_sup(Z, a, r, lam) for a, f in _sqf_coprime(int(u), r)]
    return 3 * math.log(2 * Z) * math.fsum(total)


def bilinear_forms(Z: float, r=ONE, u: float = 1.0, lam: LambdaCharacter | None = None,
                   tol: float = 1e-8) -> tuple[complex, complex]:
    """Sigma_2'' and Sigma_3 rebuilt as bilinear forms sum A(v) B(w) conj(chi_v(w)).

    Uses g~(r, vw) = conj(chi_v(w)) g~(r, v) g~(r, w); compared against the direct sums.
    """
    lam = _check_lambda(lam)
    r = as_eis(r)
    if not 1 <= u <= Z ** (1 / 3):
        raise InvalidRange("the bilinear forms need 1 <= u <= Z^(1/3)")
    elems = _sqf_coprime(int(2 * Z), r)
    A: dict[EisensteinInt, complex] = {}
    C: dict[EisensteinInt, complex] = {}
    D: dict[EisensteinInt, complex] = {}
    for v, f in elems:
        nv = v.norm()
        gt = _gt(r, v, f, lam)
        if len(f) == 1:
            C[v] = math.log(nv) * gt
        # A(v) = sum over v = ab with a prime, N(a), N(b) <= u of log N(a) mu(b) g~(r, v)
        s = 0.0
        for a in f:
            nb = nv // a.norm()
            if a.norm() <= u and nb <= u:
                s += math.log(a.norm()) * (-1) ** (len(f) - 1)
        if s:
            A[v] = s * gt
        # D(w) = sum over w = bc with N(b) <= u of mu(b) g~(r, w)
        t = 0
        for k in range(len(f) + 1):
            for bs in combinations(f, k):
                if math.prod(p.norm() for p in bs) <= u:
                    t += (-1) ** k
        if t:
            D[v] = t * gt
    B = {v: _gt(r, v, f, lam) for v, f in elems}
    s2, s3 = [], []
    for (left, right, out) in ((A, B, s2), (C, D, s3)):
        for v, av in left.items():
            nv = v.norm()
            if nv <= u:
                continue
            for w, f in elems:
                nw = w.norm()
                if nw <= u or not (Z < nv * nw <= 2 * Z) or w not in right:
                    continue
                chi = cubic_symbol_fast(w, v)
                if chi.is_zero:
                    continue
                out.append(av * right[w] * complex(chi).conjugate())
    s2v, s3v = _fsum_c(s2), _fsum_c(s3)
    rep = vaughan_decompose(Z, r, u, lam, tol)
    scale = 1 + max(abs(v) for v in rep.sigma.values())
    if abs(s2v - rep.sigma["2''"]) > tol * scale or abs(s3v - rep.sigma["3"]) > tol * scale:
        raise IdentityViolation(f"bilinear forms disagree: {s2v} vs {rep.sigma[SIGMA_KEYS[3]]}, "
                                f"{s3v} vs {rep.sigma['3']}")
    return s2v, s3v


# ------------------------------------------------------------ psi and h_a

@dataclass(frozen=True)
class PsiValue:
    value: complex
    tail: float
    terms: int


def _primary_elements(B: int) -> list[EisensteinInt]:
    a, b = primary_lattice(int(B), a0=1, step=3)
    return [EisensteinInt(int(x), int(y)) for x, y in zip(a.tolist(), b.tolist())]


@lru_cache(maxsize=8)
def _primary_with_factors(B: int):
    out = []
    for z in _primary_elements(B):
        out.append((z, factor(z)))
    return tuple(out)


@lru_cache(maxsize=4096)
def _gauss_row(m: EisensteinInt, B: int) -> tuple[np.ndarray, np.ndarray]:
    """(norms, g(m, b)) over all primary b with N(b) <= B."""
    elems = _primary_with_factors(B)
    norms = np.array([z.norm() for z, _ in elems], dtype=np.int64)
    vals = np.array([_g(m, z, f) for z, f in elems], dtype=complex)
    return norms, vals


@lru_cache(maxsize=64)
def _lambda_row(lam: LambdaCharacter, B: int) -> np.ndarray:
    return np.array([lam.value(z) for z, _ in _primary_with_factors(B)], dtype=complex)


def psi_coefficients(m: EisensteinInt, lam: LambdaCharacter, B: int) -> np.ndarray:
    """c[n] = sum over primary b of norm n of lambda(b) g(m, b), for n <= B."""
    norms, vals = _gauss_row(m, B)
    out = np.zeros(B + 1, dtype=complex)
    np.add.at(out, norms, vals * _lambda_row(lam, B))
    return out


def psi_truncated(r, lam: LambdaCharacter | None, s: complex, B: int) -> PsiValue:
    """Partial sum of psi(r, lambda, s) over N(b) <= B with a tail bound, for Re s > 3/2."""
    lam = _check_lambda(lam)
    r = as_eis(r)
    s = complex(s)
    if s.real <= 1.5:
        raise InvalidRange("psi is only summed where it converges absolutely (Re s > 3/2)")
    c = psi_coefficients(r, lam, int(B))
    n = np.arange(1, len(c))
    live = c[1:] != 0
    terms = c[1:][live] * np.exp(-s * np.log(n[live]))
    val = complex(math.fsum(terms.real), math.fsum(terms.imag))
    # |g(r, b)| <= sqrt(N(b) N(r)) and there are about 2 pi x / (9 sqrt 3) primary b of norm <= x
    sigma = s.real
    dens = 2 * math.pi / (9 * math.sqrt(3))
    tail = math.sqrt(r.norm()) * dens * (sigma - 0.5) / (sigma - 1.5) * max(B, 1) ** (1.5 - sigma)
    return PsiValue(val, tail, int(live.sum()))


def _dconv(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Dirichlet convolution over norm indices, truncated at len - 1."""
    B = len(x) - 1
    out = np.zeros(B + 1, dtype=complex)
    for i in np.flatnonzero(x[1:]) + 1:
        top = B // i
        out[i * np.arange(1, top + 1)] += x[i] * y[1 : top + 1]
    return out


def _delta(n: int, value: complex, B: int) -> np.ndarray:
    out = np.zeros(B + 1, dtype=complex)
    if n <= B:
        out[n] = value
    return out


def _euler_cube(pi: EisensteinInt, lam: LambdaCharacter, B: int) -> np.ndarray:
    """(1 - lambda(pi)^3 N(pi)^(2 - 3s))^(-1) as a Dirichlet series."""
    q = pi.norm()
    l3 = lam.value(pi) ** 3
    out = np.zeros(B + 1, dtype=complex)
    k, n = 0, 1
    while n <= B:
        out[n] = l3 ** k * q ** (2 * k)
        k += 1
        n = q ** (3 * k)
    return out


def _divisors(primes: tuple[EisensteinInt, ...]):
    for k in range(len(primes) + 1):
        for sub in combinations(primes, k):
            d = ONE
            for p in sub:
                d = d * p
            yield d, sub


def ha_lhs(a: EisensteinInt, r: EisensteinInt, lam: LambdaCharacter, B: int) -> np.ndarray:
    """Coefficients of h_a(r, lambda, s) = sum over primary b, a | b, (b, r) = 1 of lambda(b) g(r, b) N(b)^-s."""
    out = np.zeros(B + 1, dtype=complex)
    rp = _prime_set(r)
    for z, f in _primary_with_factors(B):
        if rp.intersection(f.primes) or not divides(a, z):
            continue
        out[z.norm()] += lam.value(z) * _g(r, z, f)
    return out


def ha_rhs(a: EisensteinInt, r: EisensteinInt, lam: LambdaCharacter, B: int) -> np.ndarray:
    """Coefficients of the factorized expression for h_a through psi, Euler factors and divisor sums."""
    sh = shift_decomposition(r)
    r1, r2 = sh.r1, sh.r2
    fa = factor(a).primes if a != ONE else ()
    f1 = factor(r1).primes if r1 != ONE else ()
    f2 = factor(r2).primes if r2 != ONE else ()
    fs = factor(sh.r3_star).primes if sh.r3_star != ONE else ()
    m0 = a * r1 * r2 ** 2
    total = np.zeros(B + 1, dtype=complex)
    for d, dp in _divisors(fs):
        mu_d = (-1) ** len(dp)
        term = _delta(d.norm(), mu_d * lam.value(d) * _g(m0, d), B)
        for p in dp:
            term = _dconv(term, _euler_cube(p, lam, B))
        inner = np.zeros(B + 1, dtype=complex)
        for c, cp in _divisors(tuple(dp) + tuple(fa) + tuple(f1)):
            m = div_exact(d * a * r1 * r2 ** 2, c)
            coef = (-1) ** len(cp) * c.norm() * lam.value(c) ** 2 * np.conj(_g(m, c))
            inner += _dconv(_delta(c.norm() ** 2, coef, B), psi_coefficients(m, lam, B))
        total += _dconv(term, inner)
    out = _delta(a.norm(), _g(r, a) * lam.value(a), B)
    for p in tuple(fa) + tuple(f1) + tuple(f2):
        out = _dconv(out, _euler_cube(p, lam, B))
    return _dconv(out, total)


def _g(m: EisensteinInt, c: EisensteinInt, fac=None) -> complex:
    return 1.0 + 0j if c == ONE else gauss_fast(m, c, fac).value


def verify_ha_identity(a, r=ONE, lam: LambdaCharacter | None = None, B: int = 2000) -> float:
    """Largest coefficient mismatch between h_a and its factorized form, up to norm B."""
    lam = _check_lambda(lam)
    a, r = as_eis(a), as_eis(r)
    fa = factor(a)
    if not is_primary(a) or not fa.is_squarefree() or gcd(a, r) != ONE:
        raise InvalidRange("a must be primary, square-free and prime to r")
    shift_decomposition(r)
    diff = ha_lhs(a, r, lam, B) - ha_rhs(a, r, lam, B)
    return float(np.abs(diff).max())


# ------------------------------------------------------------ balancing

def balance_value(terms_A, terms_B, H: float) -> float:
    return math.fsum(A * H ** a for A, a in terms_A) + math.fsum(Bc * H ** (-b) for Bc, b in terms_B)


def balance_bound(terms_A, terms_B, H1: float, H2: float, grid: int = 4001) -> tuple[float, float, float]:
    """Minimize sum A_i H^a_i + sum B_j H^-b_j over [H1, H2].

    Returns (H*, value at H*, the balanced bound
    sum (A_i^b_j B_j^a_i)^(1/(a_i+b_j)) + sum A_i H1^a_i + sum B_j H2^-b_j).
    """
    if not (0 < H1 <= H2):
        raise InvalidRange("need 0 < H1 <= H2")
    for c, e in list(terms_A) + list(terms_B):
        if c <= 0 or e <= 0:
            raise InvalidRange("constants and exponents must be positive")
    Hs = np.geomspace(H1, H2, grid) if H2 > H1 else np.array([H1])
    vals = [balance_value(terms_A, terms_B, h) for h in Hs]
    k = int(np.argmin(vals))
    bound = math.fsum((A ** b * Bc ** a) ** (1 / (a + b)) for A, a in terms_A for Bc, b in terms_B)
    bound += math.fsum(A * H1 ** a for A, a in terms_A) + math.fsum(Bc * H2 ** (-b) for Bc, b in terms_B)
    return float(Hs[k]), float(vals[k]), bound


def balanced_minimum(A: float, a: float, B: float, b: float) -> float:
    """Exact minimum of A H^a + B H^-b over H > 0."""
    H = (b * B / (a * A)) ** (1 / (a + b))
    return A * H ** a + B * H ** (-b)


# exponent pairs (vartheta, theta) of the bound H(Z, r) << sum Z^vartheta N(r)^theta
H_EXPONENTS = ((Fraction(2, 3), Fraction(1, 6)), (Fraction(1, 2), Fraction(1, 4)),
               (Fraction(5, 6), Fraction(1, 12)), (Fraction(4, 5), Fraction(1, 10)))


def support_exponents(v: Fraction) -> list[tuple[str, Fraction]]:
    """X-exponents of the pieces of the error term at y = X^v with D = X^eps (eps -> 0).

    Each (vartheta, theta) gives y^(vartheta + theta + 1/2) D^(1 + 3 theta) / X^theta in S(y),
    which after partial summation against y^(-3/2) is X^(v (vartheta + theta) - theta);
    the sum over primes adds X^(v/2 + 1/3).
    """
    v = Fraction(v)
    out = [(f"({t1},{t2})", v * (t1 + t2) - t2) for t1, t2 in H_EXPONENTS]
    out.append(("prime", v / 2 + Fraction(1, 3)))
    return out


def max_support() -> tuple[Fraction, str]:
    """Largest v with every exponent below 1, and the term that binds."""
    limits = [(Fraction(1 + t2) / (t1 + t2), f"({t1},{t2})") for t1, t2 in H_EXPONENTS]
    limits.append((Fraction(4, 3), "prime"))
    return min(limits)
