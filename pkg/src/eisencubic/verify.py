"""The invariant suite behind `eisencubic verify` and the acceptance tests.

Each check returns measured quantities next to the threshold it is judged
against; the caller decides how to report them.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .characters import (
    all_lambdas,
    classify,
    cubic_symbol_fast,
    cubic_symbol_slow,
    symbol_at_prime,
    trivial_lambda,
)
from .density import explicit_formula, family_mass, nonvanishing_bound, one_level_density_primeside
from .eisenstein import (
    ONE,
    EisensteinInt,
    factor,
    gcd,
    is_coprime_to_three,
    is_primary,
    primary_associate,
)
from .gauss import (
    gauss_direct,
    gauss_fast,
    poisson_check,
    primitive_characters,
    root_number,
    root_number_direct,
    totient,
)
from .hsums import (
    bilinear_forms,
    geometric_grid,
    h_grid,
    h_statistic,
    h_statistic_lambda_weighted,
    vaughan_decompose,
    verify_ha_identity,
)
from .lfunction import fe_residual, ldata_for_fe
from .sieve import prime_table, thin_family_arrays
from .testfunctions import fejer, fejer_squared, gaussian

PI7 = EisensteinInt(-2, -3)
PI13 = EisensteinInt(1, -3)


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def row(self) -> tuple:
        return (self.criterion, self.name, "pass" if self.passed else "FAIL", f"{self.measured:.3e}",
                f"{self.threshold:.3e}", f"{self.seconds:.1f}", self.detail)


CHECK_COLUMNS = ("criterion", "check", "status", "measured", "threshold", "seconds", "detail")


def _below(criterion: int, name: str, measured: float, threshold: float, t0: float, detail: str = "") -> CheckResult:
    return CheckResult(criterion, name, float(measured), float(threshold), bool(measured < threshold), detail,
                       time.perf_counter() - t0)


def _rel(x: complex, y: complex, scale: float) -> float:
    return abs(x - y) / scale


def _random_primary(rng: np.random.Generator, max_norm: int) -> EisensteinInt:
    """Uniform primary element of norm in [2, max_norm] by rejection from a box."""
    side = int(math.isqrt(4 * max_norm // 3)) + 1
    while True:
        x, y = (int(v) for v in rng.integers(-side, side + 1, 2))
        z = EisensteinInt(x, y)
        if 2 <= z.norm() <= max_norm and is_coprime_to_three(z):
            return primary_associate(z)[1]


def _random_element(rng: np.random.Generator, size: int) -> EisensteinInt:
    x, y = (int(v) for v in rng.integers(-size, size + 1, 2))
    return EisensteinInt(x, y)


# ------------------------------------------------------------ criterion 1

def gauss_twist(max_norm: int = 10**4, pairs: int = 20, seed: int = 0) -> CheckResult:
    """g(rs, pi) = conj(chi_pi(s)) g(r, pi) against direct sums, for every primary prime."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    primes = prime_table(max_norm).primes
    for pi in primes:
        root = math.sqrt(pi.norm())
        for _ in range(pairs):
            r = _random_element(rng, 10**4)
            s = _random_element(rng, 10**4)
            while cubic_symbol_fast(s, pi).is_zero:
                s = _random_element(rng, 10**4)
            lhs = gauss_direct(r * s, pi).value
            rhs = complex(cubic_symbol_fast(s, pi).conj()) * gauss_direct(r, pi).value
            worst = max(worst, _rel(lhs, rhs, root))
    return _below(1, "gauss twist law", worst, 1e-9, t0, f"{len(primes)} primes x {pairs} pairs")


def gauss_splitting(max_norm: int = 10**5, pairs: int = 1000, seed: int = 1) -> CheckResult:
    """g(r, n1 n2) = conj(chi_n2(n1)) g(r, n1) g(r, n2) = g(r n1, n2) g(r, n1), all by direct sums."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    done = 0
    while done < pairs:
        n1 = _random_primary(rng, int(math.sqrt(max_norm)) * 3)
        n2 = _random_primary(rng, max_norm // n1.norm())
        if n1.norm() * n2.norm() > max_norm or gcd(n1, n2) != ONE:
            continue
        r = _random_element(rng, 10**4)
        lhs = gauss_direct(r, n1 * n2).value
        g1 = gauss_direct(r, n1).value
        rhs1 = complex(cubic_symbol_fast(n1, n2).conj()) * g1 * gauss_direct(r, n2).value
        rhs2 = gauss_direct(r * n1, n2).value * g1
        scale = math.sqrt(n1.norm() * n2.norm())
        worst = max(worst, _rel(lhs, rhs1, scale), _rel(lhs, rhs2, scale))
        done += 1
    return _below(1, "gauss splitting law", worst, 1e-9, t0, f"{pairs} coprime pairs")


def _prime_power_expected(r: EisensteinInt, pi: EisensteinInt, j: int, k: int) -> tuple[complex, str]:
    """Closed form of g(r pi^j, pi^k) for (r, pi) = 1, built on a direct prime sum."""
    q = pi.norm()
    if k == j + 1:
        base = gauss_direct(r, pi).value
        if k % 3 == 0:
            return -(q ** j), "k=j+1, 3|k"
        if k % 3 == 1:
            return q ** j * base, "k=j+1, k=1 mod 3"
        return q ** j * base.conjugate(), "k=j+1, k=2 mod 3"
    if k % 3 == 0 and k <= j:
        return totient(pi, k), "3|k, k<=j"
    if k % 3 == 0:
        return 0.0, "3|k, k>j+1"
    return 0.0, "3∤k, k!=j+1"


MATRIX_COLUMNS = ("prime", "j", "k", "branch", "re_direct", "im_direct", "re_closed", "im_closed")


def prime_power_matrix(kmax: int = 4, jmax: int = 4, seed: int = 2) -> list[tuple]:
    """(prime label, j, k, branch, direct g(r pi^j, pi^k), closed form) for small primes pi."""
    rng = np.random.default_rng(seed)
    rows = []
    for pi in (EisensteinInt(-2, 0), PI7, PI13):
        for k in range(1, kmax + 1):
            for j in range(jmax + 1):
                r = _random_element(rng, 100)
                while cubic_symbol_fast(r, pi).is_zero:
                    r = _random_element(rng, 100)
                m = r * pi ** j
                direct = gauss_direct(m, pi ** k).value
                expected, branch = _prime_power_expected(r, pi, j, k)
                fast = gauss_fast(m, pi ** k).value
                if abs(fast - direct) > abs(expected - direct):
                    expected = fast  # report whichever disagrees more
                rows.append((f"({pi.a},{pi.b})", j, k, branch, direct, complex(expected)))
    return rows


def gauss_prime_powers(kmax: int = 4, jmax: int = 4, seed: int = 2) -> CheckResult:
    """Every branch of the prime-power closed forms, plus gauss_fast, against direct sums."""
    t0 = time.perf_counter()
    rows = prime_power_matrix(kmax, jmax, seed)
    worst = max(abs(d - e) / max(1.0, abs(d)) for *_, d, e in rows)
    branches = {row[3] for row in rows}
    ok = worst < 1e-9 and len(branches) == 6
    return CheckResult(1, "gauss prime-power branches", worst, 1e-9, ok, f"{len(branches)} of 6 branches hit",
                       time.perf_counter() - t0)


# ------------------------------------------------------------ criterion 2

def symbol_equivalence(samples: int = 10**5, max_norm: int = 10**6, seed: int = 3) -> CheckResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        n = _random_primary(rng, max_norm)
        a = _random_element(rng, 10**6)
        if cubic_symbol_fast(a, n) != cubic_symbol_slow(a, n):
            bad += 1
    return CheckResult(2, "fast symbol == slow symbol", bad, 1, bad == 0, f"{samples} random (a, n)",
                       time.perf_counter() - t0)


def cubic_reciprocity(max_norm: int = 1000) -> CheckResult:
    """(p1/p2) = (p2/p1) for distinct primary primes, both sides by exponentiation."""
    t0 = time.perf_counter()
    primes = prime_table(max_norm).primes
    bad = 0
    pairs = 0
    for i, p in enumerate(primes):
        for q in primes[i + 1:]:
            pairs += 1
            if symbol_at_prime(p, q) != symbol_at_prime(q, p):
                bad += 1
    return CheckResult(2, "cubic reciprocity", bad, 1, bad == 0, f"{pairs} prime pairs", time.perf_counter() - t0)


# ------------------------------------------------------------ criterion 3

def thin_members(max_norm: int) -> list[EisensteinInt]:
    a, b = thin_family_arrays(max_norm)
    out = [EisensteinInt(int(x), int(y)) for x, y in zip(a, b)]
    return sorted((z for z in out if z != ONE), key=lambda z: (z.norm(), z.a, z.b))


def root_numbers(max_norm: int = 10**4) -> list[CheckResult]:
    t0 = time.perf_counter()
    worst_abs = worst_agree = 0.0
    members = thin_members(max_norm)
    for n in members:
        chi = classify(n)
        N = chi.conductor.norm()
        w1 = root_number(chi).value
        w2 = root_number_direct(chi).value
        worst_abs = max(worst_abs, abs(abs(w1) ** 2 / N - 1), abs(abs(w2) ** 2 / N - 1))
        worst_agree = max(worst_agree, _rel(w1, w2, math.sqrt(N)))
    detail = f"{len(members)} thin characters"
    return [_below(3, "|W|^2 = N", worst_abs, 1e-9, t0, detail),
            _below(3, "W two evaluations agree", worst_agree, 1e-9, t0, detail)]


# ------------------------------------------------------------ criterion 4

def poisson(max_conductor: int = 200, Ys: tuple[float, ...] = (10.0, 100.0)) -> CheckResult:
    t0 = time.perf_counter()
    w = gaussian()
    chars = primitive_characters(max_conductor)
    worst = max(poisson_check(chi, w, Y) for chi in chars for Y in Ys)
    return _below(4, "Poisson summation", worst, 1e-6, t0, f"{len(chars)} characters, Y in {list(Ys)}")


# ------------------------------------------------------------ criterion 5

def vaughan(Zs: tuple[int, ...] = (200, 500, 1000, 2000), moduli: tuple[EisensteinInt, ...] = (ONE, PI7, PI7 * PI13),
            lambdas=None) -> list[CheckResult]:
    t0 = time.perf_counter()
    lambdas = lambdas if lambdas is not None else all_lambdas()
    resid = sigma4 = bil = 0.0
    runs = 0
    for Z in Zs:
        u = Z ** (1 / 3)
        for r in moduli:
            for lam in lambdas:
                rep = vaughan_decompose(Z, r, u, lam, tol=math.inf)
                scale = 1 + max(abs(v) for v in rep.sigma.values())
                resid = max(resid, rep.identity_residual, rep.h_residual)
                sigma4 = max(sigma4, abs(rep.sigma["4"]))
                s2, s3 = bilinear_forms(Z, r, u, lam, tol=math.inf)
                bil = max(bil, abs(s2 - rep.sigma["2''"]) / scale, abs(s3 - rep.sigma["3"]) / scale)
                runs += 1
    detail = f"{runs} (Z, r, lambda) runs at u = Z^(1/3)"
    return [_below(5, "Vaughan identity residual", resid, 1e-8, t0, detail),
            CheckResult(5, "Sigma_4 vanishes", sigma4, 0.0, sigma4 == 0.0, detail, time.perf_counter() - t0),
            _below(5, "bilinear Sigma_2'', Sigma_3", bil, 1e-8, t0, detail)]


# ------------------------------------------------------------ criterion 6

def _primary_upto(max_norm: int) -> list[EisensteinInt]:
    side = int(math.isqrt(4 * max_norm // 3)) + 1
    out = {EisensteinInt(a, b) for a in range(-side, side + 1) for b in range(-side, side + 1)}
    return sorted((z for z in out if 0 < z.norm() <= max_norm and is_primary(z)), key=lambda z: (z.norm(), z.a, z.b))


def ha_identity(max_norm: int = 50, B: int = 2000, lambdas=None) -> CheckResult:
    t0 = time.perf_counter()
    lambdas = lambdas if lambdas is not None else all_lambdas()
    prim = _primary_upto(max_norm)
    sqf = [a for a in prim if a == ONE or factor(a).is_squarefree()]
    worst = 0.0
    runs = 0
    for a in sqf:
        for r in prim:
            if gcd(a, r) != ONE:
                continue
            for lam in lambdas:
                worst = max(worst, verify_ha_identity(a, r, lam, B))
                runs += 1
    return _below(6, "h_a factorization", worst, 1e-9, t0, f"{runs} (a, r, lambda) up to norm {B}")


# ------------------------------------------------------------ criterion 7

FE_GRID = tuple(complex(-0.5 + 2 * j / 9, 2.1 * j) for j in range(10))


def functional_equation(max_norm: int = 500, grid: tuple[complex, ...] = FE_GRID) -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    members = thin_members(max_norm)
    for n in members:
        ld = ldata_for_fe(classify(n), grid)
        ldb = ld.conjugate()
        worst = max(worst, max(fe_residual(ld, s, ldb) for s in grid))
    return _below(7, "functional equation", worst, 1e-6, t0, f"{len(members)} thin characters x {len(grid)} points")


# ------------------------------------------------------------ criterion 8

def explicit_formulas(count: int = 3, max_norm: int = 200, T: float = 25.0, X: float = 1e5) -> CheckResult:
    """Zero side against prime side; measured is the worst ratio difference / budget."""
    t0 = time.perf_counter()
    phi = fejer_squared(1.0)
    ratio = 0.0
    parts = []
    chosen: dict[int, EisensteinInt] = {}
    for n in thin_members(max_norm):
        chosen.setdefault(n.norm(), n)
    for n in list(chosen.values())[:count]:
        ef = explicit_formula(n, phi, X, T)
        ratio = max(ratio, ef.difference / ef.budget)
        parts.append(f"N={n.norm()}: {ef.difference:.1e}/{ef.budget:.1e}")
    return _below(8, "explicit formula within budget", ratio, 1.0, t0, "; ".join(parts))


# ------------------------------------------------------------ criterion 9

def family_constant(X: float = 1e6) -> CheckResult:
    t0 = time.perf_counter()
    fm = family_mass("thin", gaussian(), X)
    return _below(9, "thin family mass ratio", abs(fm.ratio - 1), 0.05, t0, f"A/predicted = {fm.ratio:.5f}")


# ------------------------------------------------------------ criterion 10

def density_trend(Xs: tuple[float, ...] = (1e4, 1e5, 1e6), v: float = 0.5) -> list[CheckResult]:
    t0 = time.perf_counter()
    phi = fejer(v)
    gaps = [abs(one_level_density_primeside("thin", gaussian(), phi, X).D_primeside - float(phi.phi_hat(0.0)))
            for X in Xs]
    shrink = all(b < a for a, b in zip(gaps, gaps[1:]))
    trend = CheckResult(10, "density gap shrinks", gaps[-1], gaps[0], shrink,
                        ", ".join(f"{g:.4f}" for g in gaps), time.perf_counter() - t0)
    t1 = time.perf_counter()
    nv = nonvanishing_bound("thin", Fraction(13, 11))
    exact = nv.asymptotic == Fraction(2, 13) and isinstance(nv.asymptotic, Fraction)
    bound = CheckResult(10, "non-vanishing at v = 13/11", float(nv.asymptotic), 2 / 13, exact, str(nv.asymptotic),
                        time.perf_counter() - t1)
    return [trend, bound]


# ------------------------------------------------------------ criterion 11

def h_forms(Zs: tuple[float, ...] = (100.0, 1000.0, 1e4), moduli: tuple[EisensteinInt, ...] = (ONE, PI7),
            lambdas=None) -> CheckResult:
    t0 = time.perf_counter()
    lambdas = lambdas if lambdas is not None else all_lambdas()
    worst = 0.0
    for Z in Zs:
        for r in moduli:
            for lam in lambdas:
                a = h_statistic(Z, r, lam)
                b = h_statistic_lambda_weighted(Z, r, lam)
                worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return _below(11, "H prime-only == Lambda-weighted", worst, 1e-9, t0, f"Z up to {max(Zs):g}")


def h_slope(lo: float = 1e3, hi: float = 1e6, count: int = 10) -> CheckResult:
    t0 = time.perf_counter()
    rep = h_grid(geometric_grid(lo, hi, count), ONE, trivial_lambda())
    limit = 5 / 6 + 0.1
    return CheckResult(11, "H log-log slope", rep.slope, limit, rep.slope <= limit,
                       f"95% CI ({rep.slope_ci[0]:.3f}, {rep.slope_ci[1]:.3f})", time.perf_counter() - t0)


# ------------------------------------------------------------ suite

def _wrap(results) -> list[CheckResult]:
    return list(results) if isinstance(results, list) else [results]


CRITERIA: dict[int, tuple[str, Callable[[], list[CheckResult]]]] = {
    1: ("Gauss-sum laws", lambda: [gauss_twist(), gauss_splitting(), gauss_prime_powers()]),
    2: ("symbol oracle and reciprocity", lambda: [symbol_equivalence(), cubic_reciprocity()]),
    3: ("root numbers", lambda: root_numbers()),
    4: ("Poisson summation", lambda: [poisson()]),
    5: ("Vaughan identity", lambda: vaughan()),
    6: ("h_a identity", lambda: [ha_identity()]),
    7: ("functional equation", lambda: [functional_equation()]),
    8: ("explicit formula", lambda: [explicit_formulas()]),
    9: ("family asymptotics", lambda: [family_constant()]),
    10: ("density trend and non-vanishing", lambda: density_trend()),
    11: ("H statistic", lambda: [h_forms(), h_slope()]),
}


def run_suite(criteria=None) -> list[CheckResult]:
    out: list[CheckResult] = []
    for c in sorted(criteria or CRITERIA):
        out.extend(_wrap(CRITERIA[c][1]()))
    return out
