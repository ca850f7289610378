"""Family counts, prime sums and the one-level density of the two cubic families."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special

from .characters import ONE_MINUS_OMEGA_SUPPLEMENT, classify, cubic_symbol_fast, ray_class_mod9, symbol_at_prime_array
from .eisenstein import ONE_MINUS_OMEGA, EisensteinInt
from .errors import SupportExceeded, UnsupportedRange
from .lfunction import ldata_for_height, prime_ideals, zeros_both_sides
from .sieve import enumerate_full_family, prime_table, thin_family_arrays
from .testfunctions import TestFunction, WeightFunction, fejer, integrate_against

FAMILIES = ("thin", "full")
DENSITY_COLUMNS = ("family", "X", "v", "A_F", "D_primeside", "D_zeroside", "E_F", "budget")
DENSITY_SCHEMA = "# eisencubic density v1"
_ROOTS = np.exp(2j * np.pi * np.arange(3) / 3)


# ------------------------------------------------------------ families

@dataclass(frozen=True)
class FamilyArrays:
    """Members of a family with conductor norm <= bound.

    A member is the character prod chi_m^k over its parts (m, k); the thin family
    has the single part (n, 1), the full family the parts (a, 1) and (b, 2).
    """

    ident: str
    bound: int
    norms: np.ndarray
    parts: tuple[tuple[np.ndarray, np.ndarray, int], ...]

    def __len__(self) -> int:
        return len(self.norms)

    def select(self, mask: np.ndarray) -> "FamilyArrays":
        return replace(self, norms=self.norms[mask], parts=tuple((a[mask], b[mask], k) for a, b, k in self.parts))

    def modulus(self, i: int) -> EisensteinInt:
        m = EisensteinInt(1, 0)
        for a, b, k in self.parts:
            m = m * EisensteinInt(int(a[i]), int(b[i])) ** k
        return m

    def exponents_at(self, pi: EisensteinInt) -> np.ndarray:
        """Exponent of chi(pi) for every member (-1 where chi(pi) = 0).

        For primary pi this is the reciprocal symbol (m/pi)_3; (1 - w) uses the supplement.
        """
        total = np.zeros(len(self), dtype=np.int64)
        zero = np.zeros(len(self), dtype=bool)
        for a, b, k in self.parts:
            if pi == ONE_MINUS_OMEGA:
                e = _supplement_exponents(a, b)
            else:
                e = symbol_at_prime_array(pi, a, b).astype(np.int64)
            zero |= e < 0
            total += k * e
        total %= 3
        total[zero] = -1
        return total


@lru_cache(maxsize=1)
def _supplement_lookup() -> np.ndarray:
    table = np.full((9, 9), -1, dtype=np.int64)
    for (x, y), e in ONE_MINUS_OMEGA_SUPPLEMENT.items():
        table[x, y] = e
    return table


def _supplement_exponents(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _supplement_lookup()[a % 9, b % 9]


def _norm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a * a - a * b + b * b


@lru_cache(maxsize=8)
def _family_cached(ident: str, bound: int) -> FamilyArrays:
    if ident == "thin":
        a, b = thin_family_arrays(bound)
        return FamilyArrays("thin", bound, _norm(a, b), ((a, b, 1),))
    if ident == "full":
        pairs = list(enumerate_full_family(bound))
        aa = np.array([p[0].a for p in pairs], dtype=np.int64)
        ab = np.array([p[0].b for p in pairs], dtype=np.int64)
        ba = np.array([p[1].a for p in pairs], dtype=np.int64)
        bb = np.array([p[1].b for p in pairs], dtype=np.int64)
        norms = _norm(aa, ab) * _norm(ba, bb)
        order = np.lexsort((bb, ba, ab, aa, norms))
        return FamilyArrays("full", bound, norms[order],
                            ((aa[order], ab[order], 1), (ba[order], bb[order], 2)))
    raise ValueError(f"unknown family {ident!r}; expected one of {FAMILIES}")


def family_arrays(ident: str, bound: int) -> FamilyArrays:
    """Members with conductor norm <= bound, reusing a larger cached enumeration if present."""
    bound = int(bound)
    for (fid, b) in list(_FAMILY_BOUNDS):
        if fid == ident and b >= bound:
            fam = _family_cached(fid, b)
            return fam if b == bound else replace(fam.select(fam.norms <= bound), bound=bound)
    _FAMILY_BOUNDS.add((ident, bound))
    return _family_cached(ident, bound)


_FAMILY_BOUNDS: set[tuple[str, int]] = set()


def _weighted_family(ident: str, w: WeightFunction, X: float) -> tuple[FamilyArrays, np.ndarray]:
    fam = family_arrays(ident, math.floor(X * w.cutoff))
    return fam, w(fam.norms / X)


# ------------------------------------------------------------ constants

@lru_cache(maxsize=1)
def h9() -> int:
    """Order of the ray class group mod 9, from the quotient (Z[w]/9)^x / units."""
    return ray_class_mod9()[0]


@lru_cache(maxsize=1)
def zeta_K(s: float = 2.0) -> float:
    """Dedekind zeta of Q(w): zeta(s) L(s, chi_-3)."""
    s = mpmath.mpf(s)
    L = (mpmath.zeta(s, mpmath.mpf(1) / 3) - mpmath.zeta(s, mpmath.mpf(2) / 3)) / mpmath.power(3, s)
    return float(mpmath.zeta(s) * L)


ZETA_K_RESIDUE = math.pi / (3 * math.sqrt(3))


@lru_cache(maxsize=4)
def pair_euler_product(B: int = 10**6) -> float:
    """prod over p not dividing 3 of (1 - 3/Np^2 + 2/Np^3), with a tail estimate beyond B."""
    norms = prime_table(B).norms.astype(float)
    logs = np.log1p(-3 / norms ** 2 + 2 / norms ** 3)
    # prime ideals of norm > B contribute about -3 * sum 1/N^2 ~ -3 / (B log B)
    return float(math.exp(math.fsum(logs) - 3 / (B * math.log(B))))


def predicted_mass(ident: str, w: WeightFunction, X: float, form: str = "derived") -> float:
    """Leading term of A_F(X).

    thin: pi w(1) X / (4 sqrt3 h9 zeta_K(2)).
    full: c w(1) X log X with c = (4/9) res(zeta_K)^2 F(1) / h9 ("derived") or the
    displayed 2 pi F(1) / (9 sqrt3 h9) ("stated").
    """
    m1 = w.mellin_one if w.mellin_one is not None else w.mellin(1.0)
    if ident == "thin":
        return math.pi * m1 * X / (4 * math.sqrt(3) * h9() * zeta_K(2.0))
    F1 = pair_euler_product()
    if form == "derived":
        c = 4 / 9 * ZETA_K_RESIDUE ** 2 * F1 / h9()
    elif form == "stated":
        c = 2 * math.pi * F1 / (9 * math.sqrt(3) * h9())
    else:
        raise ValueError(form)
    return c * m1 * X * math.log(X)


@dataclass(frozen=True)
class FamilyMass:
    family: str
    X: float
    count: int
    A: float
    log_conductor_sum: float
    predicted: float

    @property
    def ratio(self) -> float:
        return self.A / self.predicted if self.predicted else math.nan


def family_mass(ident: str, w: WeightFunction, X: float, form: str = "derived") -> FamilyMass:
    """A_F(X) = sum of w(N(cond)/X) and the weighted sum of log N(cond)."""
    fam, wt = _weighted_family(ident, w, X)
    logs = np.log(fam.norms.astype(float))
    return FamilyMass(ident, float(X), len(fam), math.fsum(wt), math.fsum(wt * logs),
                      predicted_mass(ident, w, X, form))


# ------------------------------------------------------------ prime sums

def _split_and_inert(y: float) -> list[EisensteinInt]:
    return prime_table(max(int(y), 2)).up_to(y) if y >= 2 else []


def _class_weights(e: np.ndarray, wt: np.ndarray) -> np.ndarray:
    """Total weight on each exponent class 0, 1, 2 (zeros dropped)."""
    ok = e >= 0
    return np.bincount(e[ok], weights=wt[ok], minlength=3)


def prime_sum_S(ident: str, w: WeightFunction, X: float, y: float) -> complex:
    """S_F(y): sum over the family and the trivial character of w * chi(p) log Np, over Np <= y, p prime to 3.

    Summed prime by prime with the characters of the family aggregated inside.
    """
    fam, wt = _weighted_family(ident, w, X)
    w1 = float(w(np.array([1.0 / X]))[0])
    terms = []
    for pi in _split_and_inert(y):
        cw = _class_weights(fam.exponents_at(pi), wt)
        terms.append((complex(cw @ _ROOTS) + w1) * math.log(pi.norm()))
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def prime_sum_S_by_character(ident: str, w: WeightFunction, X: float, y: float) -> complex:
    """S_F(y) summed character by character (reference order)."""
    fam, wt = _weighted_family(ident, w, X)
    primes = _split_and_inert(y)
    logs = np.array([math.log(p.norm()) for p in primes])
    total = float(w(np.array([1.0 / X]))[0]) * math.fsum(logs)
    acc = []
    for i in range(len(fam)):
        chi = classify(fam.modulus(i))
        vals = np.array([complex(cubic_symbol_fast(p, chi.modulus)) for p in primes]) if primes else np.zeros(0)
        acc.append(wt[i] * complex(vals @ logs))
    return complex(total + math.fsum(a.real for a in acc), math.fsum(a.imag for a in acc))


# ------------------------------------------------------------ explicit formula pieces

def check_support(phi: TestFunction) -> None:
    probe = phi.v * np.linspace(1.0, 3.0, 41)
    if np.any(np.abs(phi.phi_hat(probe)) > 0) or np.any(np.abs(phi.phi_hat(-probe)) > 0):
        raise SupportExceeded(f"{phi.ident}: phi_hat does not vanish on |t| >= {phi.v}")


@lru_cache(maxsize=64)
def gamma_term(phi: TestFunction, X: float) -> float:
    """(2 / log X) * integral of phi(x) Re digamma(1/2 + 2 pi i x / log X) over R."""
    L = math.log(X)
    g = lambda x: float(special.digamma(0.5 + 2j * math.pi * x / L).real)
    return 2 * 2 * integrate_against(phi, g) / L


def gamma_term_leading(phi: TestFunction, X: float) -> float:
    """Leading part 2 digamma(1/2) phi_hat(0) / log X of the Gamma term."""
    return 2 * float(special.digamma(0.5)) * float(phi.phi_hat(0.0)) / math.log(X)


def _prime_powers(phi: TestFunction, X: float, kmax: int | None, include_three: bool):
    """(generator, norm, k, weight) with weight = phi_hat(k log Np / log X) log Np / (Np^(k/2) log X)."""
    L = math.log(X)
    top = X ** phi.v
    out = []
    for pi, q in prime_ideals(int(top)):
        if q == 3 and not include_three:
            continue
        lq = math.log(q)
        k = 1
        while (kmax is None or k <= kmax) and k * lq < phi.v * L:
            out.append((pi, q, k, float(phi.phi_hat(k * lq / L)) * lq / (q ** (k / 2) * L)))
            k += 1
    return out


@dataclass(frozen=True)
class ExplicitFormula:
    """Both sides of the explicit formula for a single primitive character."""

    modulus: EisensteinInt
    X: float
    T: float
    zero_side: float
    conductor_term: float
    gamma_term: float
    prime_term: float
    budget: float
    zeros: int

    @property
    def prime_side(self) -> float:
        return self.conductor_term + self.gamma_term - self.prime_term

    @property
    def difference(self) -> float:
        return abs(self.zero_side - self.prime_side)


def zero_tail_bound(phi: TestFunction, X: float, A: float, T: float) -> float:
    """Bound for the sum of phi(gamma log X / 2 pi) over zeros with |gamma| > T.

    Uses phi(x) <= C / (v x)^d and at most 1.5 log(A (t + 1)) / pi + 2 zeros in [t, t + 1].
    """
    L = math.log(X)
    t = T + np.arange(0, 200000, dtype=float)
    phimax = phi.decay_const / (phi.v * t * L / (2 * math.pi)) ** phi.decay
    count = 1.5 * np.log(A * (t + 1)) / math.pi + 2
    body = float(np.sum(phimax * count))
    # remainder beyond the grid, bounded by an integral of the same majorant
    t1 = t[-1] + 1
    rest = phi.decay_const * (2 * math.pi / (phi.v * L)) ** phi.decay * (1.5 * math.log(A * (t1 + 1)) / math.pi + 3) \
        * t1 ** (1 - phi.decay) / (phi.decay - 1)
    return 2 * (body + rest)


def explicit_prime_side(modulus: EisensteinInt, phi: TestFunction, X: float) -> tuple[float, float, float]:
    """(conductor term, Gamma term, prime-power term) of the explicit formula for chi_modulus."""
    check_support(phi)
    chi = classify(modulus)
    L = math.log(X)
    N = chi.conductor.norm()
    cond = float(phi.phi_hat(0.0)) * math.log(3 * N / (4 * math.pi ** 2)) / L
    terms = []
    for pi, q, k, wgt in _prime_powers(phi, X, None, include_three=True):
        val = cubic_symbol_fast(pi, chi.modulus)
        if val.is_zero:
            continue
        terms.append(2 * math.cos(2 * math.pi * k * val.e / 3) * wgt)
    return cond, gamma_term(phi, X), math.fsum(terms)


def explicit_formula(modulus: EisensteinInt, phi: TestFunction, X: float, T: float = 25.0,
                     delta: float = 1e-8) -> ExplicitFormula:
    """Zero side against conductor, Gamma and all prime-power terms for chi_modulus."""
    cond, gam_t, prime = explicit_prime_side(modulus, phi, X)
    chi = classify(modulus)
    L = math.log(X)
    ld = ldata_for_height(chi, T)
    gam, up, down = zeros_both_sides(ld, T, delta)
    zs = math.fsum(phi.phi(gam * L / (2 * math.pi)))
    # zero positions are accurate to delta and |phi'| <= 2 pi v
    loc = len(gam) * delta * phi.v * L
    budget = zero_tail_bound(phi, X, ld.A, T) + loc + 1e-10
    return ExplicitFormula(modulus, float(X), float(T), zs, cond, gam_t, prime, budget, len(gam))


# ------------------------------------------------------------ one-level density

@dataclass(frozen=True)
class DensityReport:
    family: str
    X: float
    v: float
    phi: str
    weight: str
    A: float
    members: int
    D_primeside: float
    conductor_term: float
    gamma_term: float
    gamma_term_leading: float
    prime_terms: dict[int, float]
    E_F: float
    D_zeroside: float | None = None
    budget: float | None = None
    extras: dict = field(default_factory=dict)

    def consistent(self) -> bool:
        if self.D_zeroside is None:
            return True
        return abs(self.D_primeside - self.D_zeroside) <= self.budget

    def row(self) -> dict:
        return {
            "family": self.family, "X": repr(float(self.X)), "v": repr(float(self.v)), "A_F": repr(self.A),
            "D_primeside": repr(self.D_primeside),
            "D_zeroside": "" if self.D_zeroside is None else repr(self.D_zeroside),
            "E_F": repr(self.E_F), "budget": "" if self.budget is None else repr(self.budget),
        }


def density_csv(reports: list[DensityReport]) -> str:
    buf = io.StringIO()
    buf.write(DENSITY_SCHEMA + "\n")
    wr = csv.DictWriter(buf, fieldnames=DENSITY_COLUMNS, lineterminator="\n")
    wr.writeheader()
    for r in reports:
        wr.writerow(r.row())
    return buf.getvalue()


def _family_prime_sums(fam: FamilyArrays, wt: np.ndarray, phi: TestFunction, X: float,
                       kmax: int | None, simplified: bool, include_three: bool, conj_pair: bool):
    """Per-k sums of sum_chi w * c_chi(p, k) * weight(p, k), as complex numbers.

    c = chi(p^k) + conj chi(p^k) when conj_pair, else chi(p^k) (or chi(p) when simplified).
    """
    sums: dict[int, list[complex]] = {}
    for pi, q, k, wgt in _prime_powers(phi, X, kmax, include_three):
        e = fam.exponents_at(pi)
        cw = _class_weights(e, wt)
        power = 1 if simplified else k
        val = complex(cw @ _ROOTS ** power)
        if conj_pair:
            val += complex(cw @ _ROOTS ** ((-power) % 3))
        sums.setdefault(k, []).append(val * wgt)
    return {k: complex(math.fsum(z.real for z in v), math.fsum(z.imag for z in v)) for k, v in sums.items()}


def error_term_E(ident: str, w: WeightFunction, phi: TestFunction, X: float, simplified: bool = False) -> float:
    """E_F(X) over the family and the trivial character, p prime to 3, k = 1, 2.

    simplified=True uses chi(p) for both k as in the short display; the default uses chi(p^k).
    """
    check_support(phi)
    fam, wt = _weighted_family(ident, w, X)
    w1 = float(w(np.array([1.0 / X]))[0])
    L = math.log(X)
    total = []
    for k, s in _family_prime_sums(fam, wt, phi, X, 2, simplified, False, False).items():
        total.append(s * L)
    for pi, q, k, wgt in _prime_powers(phi, X, 2, include_three=False):
        total.append(complex(w1 * wgt * L))
    z = complex(math.fsum(t.real for t in total), math.fsum(t.imag for t in total))
    if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
        raise AssertionError(f"E_F has imaginary part {z.imag}")
    return z.real


def one_level_density_primeside(ident: str, w: WeightFunction, phi: TestFunction, X: float,
                                kmax: int | None = 2, simplified_E: bool = False) -> DensityReport:
    """D(X; phi, F) from conductor, Gamma and prime-power terms, averaged with weights.

    kmax=None keeps every prime power, which makes each member's value equal to its zero sum.
    """
    check_support(phi)
    fam, wt = _weighted_family(ident, w, X)
    A = math.fsum(wt)
    L = math.log(X)
    ph0 = float(phi.phi_hat(0.0))
    logs = np.log(3 * fam.norms.astype(float) / (4 * math.pi ** 2))
    cond = ph0 * math.fsum(wt * logs) / (A * L) if A else 0.0
    gam = gamma_term(phi, X)
    sums = _family_prime_sums(fam, wt, phi, X, kmax, False, True, True)
    for k, z in sums.items():
        if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
            raise AssertionError(f"prime sum k={k} has imaginary part {z.imag}")
    prime = {k: z.real / A for k, z in sorted(sums.items())} if A else {}
    D = cond + gam - math.fsum(prime.values())
    return DensityReport(ident, float(X), phi.v, phi.ident, w.ident, A, len(fam), D, cond, gam,
                         gamma_term_leading(phi, X), prime, error_term_E(ident, w, phi, X, simplified_E))


def one_level_density_zeroside(ident: str, w: WeightFunction, phi: TestFunction, X: float, T: float = 25.0,
                               min_weight: float = 1e-6) -> DensityReport:
    """Zero side of D(X) with every member's zeros to height T, next to the exact prime side.

    Members with weight below min_weight are skipped; their prime-side values go into the budget.
    """
    report = one_level_density_primeside(ident, w, phi, X, kmax=None)
    fam, wt = _weighted_family(ident, w, X)
    A = report.A
    zero_terms, budget = [], []
    for i in range(len(fam)):
        if wt[i] >= min_weight:
            ef = explicit_formula(fam.modulus(i), phi, X, T)
            zero_terms.append(wt[i] * ef.zero_side)
            budget.append(wt[i] * ef.budget)
        else:
            cond, gam_t, prime = explicit_prime_side(fam.modulus(i), phi, X)
            budget.append(wt[i] * (abs(cond + gam_t - prime) + zero_tail_bound(phi, X, math.sqrt(3 * fam.norms[i]) / (2 * math.pi), T)))
    Dz = math.fsum(zero_terms) / A
    return replace(report, D_zeroside=Dz, budget=math.fsum(budget) / A + 1e-12,
                   extras={"T": T, "min_weight": min_weight})


# ------------------------------------------------------------ non-vanishing

@dataclass(frozen=True)
class NonvanishingReport:
    family: str
    v: Fraction
    asymptotic: Fraction
    X: float | None = None
    D: float | None = None
    empirical: float | None = None


_SUPPORT_LIMIT = {"thin": Fraction(13, 11), "full": Fraction(1)}


def nonvanishing_bound(ident: str, v, X: float | None = None, w: WeightFunction | None = None) -> NonvanishingReport:
    """Proportion of members with L(1/2) != 0 implied by phi_v: 1 - 1/v asymptotically.

    The endpoint v = 13/11 (thin) or 1 (full) is accepted as the limiting value.
    With X given the empirical bound 1 - phi_hat(0) - |D - phi_hat(0)| is also reported.
    """
    v = Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10**6)
    if ident not in _SUPPORT_LIMIT:
        raise ValueError(f"unknown family {ident!r}")
    if v <= 0 or v > _SUPPORT_LIMIT[ident]:
        raise UnsupportedRange(f"v = {v} outside (0, {_SUPPORT_LIMIT[ident]}] for the {ident} family")
    asym = 1 - 1 / v
    if X is None:
        return NonvanishingReport(ident, v, asym)
    from .testfunctions import gaussian

    phi = fejer(float(v))
    rep = one_level_density_primeside(ident, w or gaussian(), phi, X)
    ph0 = float(phi.phi_hat(0.0))
    return NonvanishingReport(ident, v, asym, float(X), rep.D_primeside,
                              1 - ph0 - abs(rep.D_primeside - ph0))
