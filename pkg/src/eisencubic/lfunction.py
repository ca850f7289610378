"""Hecke L-functions of primitive cubic characters: coefficients, the completed
function Lambda(s) = A^s Gamma(s) L(s) with A = sqrt(3 N(f)) / (2 pi), and zeros.

Lambda is evaluated through the smoothed approximate functional equation

    Lambda(s) = sum a_m (A/m)^s Gamma(s, m c/A)
              + eps sum conj(a_m) (A/m)^(1-s) Gamma(1-s, m/(c A)),

valid for any cut c with Re c > 0, where eps = W(chi) / sqrt(N(f)).  Rotating
c towards the imaginary axis keeps the terms the same size as the result when
|Im s| is large.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np
from scipy import optimize
from scipy.special import loggamma

from .characters import CharacterSpec, cubic_symbol_fast, require_primitive
from .eisenstein import ONE_MINUS_OMEGA, EisensteinInt
from .errors import CountMismatch, InsufficientTruncation, NotHecke
from .gauss import RootNumber, root_number
from .sieve import prime_table

ZEROLIST_COLUMNS = ("n_a", "n_b", "norm", "gamma", "multiplicity")
# decay needed from the cutoff exp(-m Re(c)/A) before a term is dropped
_TAIL_EXPONENT = 46.0
# digits we allow the sum to lose to cancellation when choosing the cut
_CANCEL_BUDGET = 8.0


# ------------------------------------------------------------ incomplete gamma

@numba.njit(cache=True)
def _inc_gamma_kernel(s, gamma_s, z, out):
    tol = 1e-17
    for i in range(z.size):
        zi = z[i]
        if abs(zi) < 0.6 * abs(s) + 8:
            # Gamma(s) minus the lower function z^s e^-z sum z^k / (s)_(k+1)
            term = 1 / s
            tot = term
            k = 0
            while k < 5000:
                k += 1
                term = term * zi / (s + k)
                tot += term
                if abs(term) <= tol * abs(tot):
                    break
            out[i] = gamma_s - np.exp(s * np.log(zi) - zi) * tot
        else:
            # Legendre continued fraction, modified Lentz
            tiny = 1e-300
            b = zi + 1 - s
            f = b
            C = b
            D = 0j
            for j in range(1, 5000):
                an = -j * (j - s)
                b = b + 2
                D = b + an * D
                if abs(D) < tiny:
                    D = tiny
                C = b + an / C
                if abs(C) < tiny:
                    C = tiny
                D = 1 / D
                delta = C * D
                f = f * delta
                if abs(delta - 1) < tol:
                    break
            out[i] = np.exp(s * np.log(zi) - zi) / f


def inc_gamma(s: complex, z) -> np.ndarray:
    """Upper incomplete gamma Gamma(s, z) for complex s and Re z > 0."""
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=np.complex128)
    out = np.empty_like(z)
    s = complex(s)
    _inc_gamma_kernel(s, complex(np.exp(loggamma(s))), z, out)
    return out


# ------------------------------------------------------------ coefficients

@dataclass(frozen=True)
class LData:
    chi: CharacterSpec
    coeffs: np.ndarray  # coeffs[m] = a_m, coeffs[0] = 0
    M: int
    root_number: RootNumber
    conductor_norm: int

    @property
    def A(self) -> float:
        return math.sqrt(3 * self.conductor_norm) / (2 * math.pi)

    @property
    def eps(self) -> complex:
        return self.root_number.value / math.sqrt(self.conductor_norm)

    def conjugate(self) -> "LData":
        chib = self.chi.conjugate()
        return LData(chib, np.conj(self.coeffs), self.M, root_number(chib), self.conductor_norm)


def prime_ideals(M: int) -> list[tuple[EisensteinInt, int]]:
    """Generators of the prime ideals of norm <= M with their norms."""
    out = [(ONE_MINUS_OMEGA, 3)] if M >= 3 else []
    if M >= 2:
        out += [(p, p.norm()) for p in prime_table(M).primes]
    return out


def coefficients(chi: CharacterSpec, M: int) -> LData:
    """a_m = sum of chi over ideals of norm m, built from the Euler product."""
    require_primitive(chi)
    if not chi.is_hecke:
        raise NotHecke(f"chi_{chi.label()} is not trivial on units")
    M = int(M)
    a = np.zeros(M + 1, dtype=complex)
    a[1] = 1
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    for pi, q in prime_ideals(M):
        val = cubic_symbol_fast(pi, chi.modulus)
        if val.is_zero:
            continue
        c = roots[val.e]
        base = a.copy()
        qk, ck = q, c
        while qk <= M:
            idx = np.arange(1, M // qk + 1)
            a[idx * qk] += ck * base[idx]
            qk *= q
            ck *= c
    return LData(chi, a, M, root_number(chi), chi.conductor.norm())


def ldata_for_height(chi: CharacterSpec, T: float, margin: float = 1.3) -> LData:
    """LData with enough coefficients for lambda_eval at |Im s| <= T + 2."""
    A = math.sqrt(3 * chi.conductor.norm()) / (2 * math.pi)
    c = default_cut(0.5 + 1j * (abs(T) + 2))
    M = int(margin * _TAIL_EXPONENT * A / min(c.real, (1 / c).real)) + 10
    return coefficients(chi, M)


def coefficients_by_ideals(chi: CharacterSpec, M: int) -> np.ndarray:
    """a_m from 1/6 of the sum of chi over all elements of norm m (oracle)."""
    out = np.zeros(M + 1, dtype=complex)
    r = math.isqrt(4 * M // 3) + 2
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            m = x * x - x * y + y * y
            if 1 <= m <= M:
                out[m] += complex(cubic_symbol_fast(EisensteinInt(x, y), chi.modulus))
    return out / 6


# ------------------------------------------------------------ completed L-function

@dataclass(frozen=True)
class LambdaValue:
    value: complex
    error: float
    terms: int

    def __complex__(self) -> complex:
        return self.value


def default_cut(s: complex) -> complex:
    t = s.imag
    if abs(t) <= 2 * _CANCEL_BUDGET / math.pi:
        return 1 + 0j
    phi = math.copysign(min(math.pi / 2 - _CANCEL_BUDGET / abs(t), 1.45), t)
    return cmath.exp(1j * phi)


def terms_needed(ld: LData, c: complex) -> int:
    re = min(c.real, (1 / c).real)
    return int(_TAIL_EXPONENT * ld.A / re) + 2


def lambda_eval(ld: LData, s: complex, cut: complex | None = None) -> LambdaValue:
    """Completed L-function at s with an error estimate."""
    s = complex(s)
    c = complex(cut) if cut is not None else default_cut(s)
    if c.real <= 0:
        raise ValueError("cut parameter needs Re c > 0")
    M = terms_needed(ld, c)
    if M > ld.M:
        raise InsufficientTruncation(f"need {M} coefficients at s = {s}, have {ld.M}")
    A = ld.A
    m = np.arange(1, M + 1, dtype=float)
    a = ld.coeffs[1 : M + 1]
    live = a != 0
    m, a = m[live], a[live]
    logr = np.log(A / m)
    t1 = a * np.exp(s * logr) * inc_gamma(s, m * c / A)
    t2 = np.conj(a) * np.exp((1 - s) * logr) * inc_gamma(1 - s, m / (c * A))
    value = t1.sum() + ld.eps * t2.sum()
    scale = np.abs(t1).sum() + np.abs(t2).sum()
    # roundoff in the sum plus the relative accuracy of the gamma kernel
    err = 1e-15 * scale * math.sqrt(len(m)) + 1e-11 * scale
    return LambdaValue(complex(value), float(err), int(M))


def _fe_cuts(s: complex) -> tuple[complex, complex]:
    return default_cut(s) * 1.15 * cmath.exp(0.1j), default_cut(1 - s) * 0.8 * cmath.exp(-0.2j)


def ldata_for_fe(chi: CharacterSpec, points) -> LData:
    """LData with enough coefficients for fe_residual at every point."""
    A = math.sqrt(3 * chi.conductor.norm()) / (2 * math.pi)
    M = 0
    for s in points:
        for c in _fe_cuts(complex(s)):
            M = max(M, int(_TAIL_EXPONENT * A / min(c.real, (1 / c).real)) + 2)
    return coefficients(chi, M)


def fe_residual(ld: LData, s: complex, ld_bar: LData | None = None) -> float:
    """Relative |Lambda(s, chi) - eps Lambda(1 - s, conj chi)|, two unrelated cuts."""
    ld_bar = ld_bar or ld.conjugate()
    c1, c2 = _fe_cuts(s)
    lhs = lambda_eval(ld, s, c1).value
    rhs = ld.eps * lambda_eval(ld_bar, 1 - s, c2).value
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def hardy_z(ld: LData, t: float, rot: complex | None = None) -> float:
    """eps^(-1/2) Lambda(1/2 + it), real on the critical line."""
    rot = rot if rot is not None else 1 / cmath.sqrt(ld.eps)
    v = rot * lambda_eval(ld, complex(0.5, t)).value
    return v.real


# ------------------------------------------------------------ zeros

@dataclass
class ZeroList:
    chi: CharacterSpec
    T: float
    zeros: list[float] = field(default_factory=list)
    multiplicities: list[int] = field(default_factory=list)
    winding_count: int = 0

    def __len__(self) -> int:
        return sum(self.multiplicities)

    def to_csv(self, path: str | Path) -> None:
        n = self.chi.modulus
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(ZEROLIST_COLUMNS)
            for g, k in zip(self.zeros, self.multiplicities):
                w.writerow((n.a, n.b, n.norm(), repr(float(g)), k))

    @staticmethod
    def read_csv(path: str | Path) -> list[tuple[int, int, int, float, int]]:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        if tuple(rows[0]) != ZEROLIST_COLUMNS:
            raise ValueError(f"{path}: unexpected header {rows[0]}")
        return [(int(a), int(b), int(n), float(g), int(k)) for a, b, n, g, k in rows[1:]]


def _arg_change(f, a: complex, b: complex, fa: complex, fb: complex, depth: int = 0) -> float:
    d = cmath.phase(fb / fa)
    if abs(d) < 0.5 or depth > 30:
        return d
    mid = (a + b) / 2
    fm = f(mid)
    return _arg_change(f, a, mid, fa, fm, depth + 1) + _arg_change(f, mid, b, fm, fb, depth + 1)


def winding_count(ld: LData, t0: float, t1: float, sigma0: float = -0.5, sigma1: float = 1.5,
                  step: float = 0.25) -> int:
    """Zeros of Lambda in [sigma0, sigma1] x [t0, t1] by the argument principle."""
    f = lambda s: lambda_eval(ld, s).value
    corners = [complex(sigma0, t0), complex(sigma1, t0), complex(sigma1, t1), complex(sigma0, t1)]
    total = 0.0
    for k in range(4):
        a, b = corners[k], corners[(k + 1) % 4]
        n = max(2, int(abs(b - a) / step) + 1)
        pts = [a + (b - a) * j / n for j in range(n + 1)]
        vals = [f(p) for p in pts]
        for j in range(n):
            total += _arg_change(f, pts[j], pts[j + 1], vals[j], vals[j + 1])
    return round(total / (2 * math.pi))


def _scan(z, t0: float, t1: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    n = max(2, int(math.ceil((t1 - t0) / h)))
    ts = np.linspace(t0, t1, n + 1)
    return ts, np.array([z(t) for t in ts])


def find_zeros(ld: LData, T: float, delta: float = 1e-8, step: float = 0.1, max_refine: int = 4) -> ZeroList:
    """Zeros 1/2 + i gamma with 0 <= gamma <= T, certified by a winding count.

    Z(t) = eps^(-1/2) Lambda(1/2 + it) is real, so simple zeros are sign
    changes; the scan step is halved until the located count matches the
    argument principle.
    """
    rot = 1 / cmath.sqrt(ld.eps)
    z = lambda t: hardy_z(ld, t, rot)
    def off_zero(x: float, direction: float) -> float:
        # keep the contour edges away from zeros sitting on them
        while abs(z(x)) < 0.05 * max(abs(z(x + 0.2)), abs(z(x - 0.2))):
            x += direction * 0.01
        return x

    lo = off_zero(0.0, -1.0)
    hi = off_zero(float(T), 1.0)
    target = winding_count(ld, lo, hi)
    h = step
    for _ in range(max_refine + 1):
        ts, vs = _scan(z, lo, hi, h)
        roots = []
        for j in range(len(ts) - 1):
            if vs[j] == 0:
                roots.append(ts[j])
            elif vs[j] * vs[j + 1] < 0:
                roots.append(optimize.brentq(z, ts[j], ts[j + 1], xtol=delta / 4, rtol=4 * np.finfo(float).eps))
        if len(roots) == target:
            roots = [r for r in roots if 0 <= r <= T]
            for r in roots:
                # Lambda(1/2 + it) changes sign within delta of each located ordinate
                v = lambda_eval(ld, complex(0.5, r))
                assert abs(v.value) <= 1e3 * v.error or z(r - delta) * z(r + delta) <= 0, r
            return ZeroList(ld.chi, float(T), roots, [1] * len(roots), target)
        h /= 2
    raise CountMismatch(f"located {len(roots)} zeros but the argument principle gives {target}")


def zeros_both_sides(ld: LData, T: float, delta: float = 1e-8) -> tuple[np.ndarray, ZeroList, ZeroList]:
    """All ordinates in [-T, T]: zeros of chi up to T and mirrored zeros of conj chi."""
    up = find_zeros(ld, T, delta)
    down = find_zeros(ld.conjugate(), T, delta)
    gam = np.concatenate([np.array(up.zeros), -np.array(down.zeros)])
    return np.sort(gam), up, down
