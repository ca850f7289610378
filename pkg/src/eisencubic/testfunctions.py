"""Weight functions w and test functions phi used by the family statistics."""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate


@dataclass(frozen=True)
class WeightFunction:
    """Weight w on [0, inf), evaluated at N(cond)/X."""

    ident: str
    params: tuple = ()
    func: Callable[[np.ndarray], np.ndarray] = field(compare=False, default=None, repr=False)
    cutoff: float = 1.0  # w(x) is negligible (< 1e-16 relative) for x > cutoff
    mellin_one: float | None = None  # closed form of the integral of w over [0, inf), if known

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def mellin(self, s: float = 1.0) -> float:
        """Integral of w(x) x^(s-1) over (0, inf)."""
        val, err = integrate.quad(lambda x: float(self.func(np.array(x))) * x ** (s - 1), 0, self.cutoff, limit=400)
        return val


def gaussian() -> WeightFunction:
    """w(x) = exp(-x^2)."""
    return WeightFunction("gaussian", (), lambda x: np.exp(-x * x), cutoff=6.2, mellin_one=math.sqrt(math.pi) / 2)


def planar_gaussian() -> WeightFunction:
    """w(x) = exp(-|x|), so that z -> w(N(z)) is a Gaussian on the plane."""
    return WeightFunction("planar_gaussian", (), lambda x: np.exp(-np.abs(x)), cutoff=38.0, mellin_one=1.0)


def smoothed_indicator(X: float) -> WeightFunction:
    """1 on [0, 1], smooth bump down to 0 on (1, 1 + 1/X)."""

    def f(x):
        x = np.abs(x)
        out = np.zeros_like(x)
        out[x <= 1] = 1.0
        mid = (x > 1) & (x < 1 + 1 / X)
        u = X * X * (x[mid] - 1) ** 2
        out[mid] = np.exp(1 - 1 / (1 - u))
        return out

    return WeightFunction("smoothed_indicator", (X,), f, cutoff=1 + 1 / X)


WEIGHTS = {"gaussian": gaussian, "planar_gaussian": planar_gaussian}


def weight_from_config(ident: str, **params) -> WeightFunction:
    if ident == "smoothed_indicator":
        return smoothed_indicator(float(params["X"]))
    return WEIGHTS[ident]()


@dataclass(frozen=True)
class TestFunction:
    """Even phi with Fourier transform supported in [-v, v]."""

    ident: str
    v: float
    phi: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    phi_hat: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    decay: int = 2  # phi(x) <= C_decay / (v x)^decay
    decay_const: float = 1.0
    # phi(x) = sum c cos(2 pi f x) / x^decay exactly for x > 0, as pairs (c, f)
    cosine_terms: tuple[tuple[float, float], ...] = ()

    __test__ = False


def _sinc_sq(x: np.ndarray, v: float) -> np.ndarray:
    return np.sinc(v * x) ** 2  # numpy sinc is sin(pi y)/(pi y)


def fejer(v: float) -> TestFunction:
    """phi_v(x) = (sin(pi v x)/(pi v x))^2 with phi_hat(t) = (v - |t|)/v^2."""

    def phi_hat(t):
        t = np.abs(np.asarray(t, dtype=float))
        return np.where(t < v, (v - t) / (v * v), 0.0)

    c = 1 / (2 * math.pi ** 2 * v * v)
    return TestFunction("fejer", float(v), lambda x: _sinc_sq(np.asarray(x, dtype=float), v), phi_hat,
                        decay=2, decay_const=1 / math.pi ** 2, cosine_terms=((c, 0.0), (-c, float(v))))


def fejer_squared(v: float) -> TestFunction:
    """phi = phi_{v/2}^2, whose transform is a cubic spline supported in [-v, v]."""
    h = v / 2

    def spline(u):
        u = np.abs(u)
        return np.where(u <= 1, 2 / 3 - u * u + u ** 3 / 2, np.where(u < 2, (2 - u) ** 3 / 6, 0.0))

    def phi_hat(t):
        t = np.asarray(t, dtype=float)
        return spline(t / h) / h

    c = 1 / (8 * (math.pi * h) ** 4)
    return TestFunction("fejer_squared", float(v), lambda x: _sinc_sq(np.asarray(x, dtype=float), h) ** 2, phi_hat,
                        decay=4, decay_const=16 / math.pi ** 4,
                        cosine_terms=((3 * c, 0.0), (-4 * c, h), (c, 2 * h)))


TESTFUNCTIONS = {"fejer": fejer, "fejer_squared": fejer_squared}


def phi_from_config(ident: str, v: float) -> TestFunction:
    return TESTFUNCTIONS[ident](float(v))


def _quiet(fn):
    """Tolerances below what quad can certify are requested on purpose; drop its warnings."""

    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            return fn(*args, **kwargs)

    return wrapped


@_quiet
def integrate_against(phi: TestFunction, g: Callable[[float], float], R: float | None = None) -> float:
    """Integral of phi(x) g(x) over (0, inf) for smooth, slowly varying g.

    [0, R] is done by adaptive quadrature; the tail uses the exact cosine
    expansion of phi, with oscillatory pieces handled by QAWF.
    """
    if not phi.cosine_terms:
        raise ValueError(f"{phi.ident}: no cosine expansion for the tail")
    R = R if R is not None else 40 / phi.v
    d = phi.decay
    n = max(1, math.ceil(R * phi.v))
    head = math.fsum(
        integrate.quad(lambda s: float(phi.phi(s)) * g(s), R * i / n, R * (i + 1) / n,
                       limit=200, epsabs=1e-15, epsrel=1e-13)[0]
        for i in range(n)
    )
    tail = 0.0
    for c, f in phi.cosine_terms:
        h = lambda s: g(s) / s ** d
        if f < 1e-12:
            val, _ = integrate.quad(h, R, np.inf, limit=400, epsabs=1e-15, epsrel=1e-13)
        else:
            val, _ = integrate.quad(lambda s: h(s + R), 0, np.inf, weight="cos", wvar=2 * math.pi * f,
                                    limlst=200, epsabs=1e-16)
            # cos(2 pi f (s + R)) = cos(2 pi f s) when f R is an integer
            if abs(f * R - round(f * R)) > 1e-12:
                raise ValueError("tail start must be a whole number of periods")
        tail += c * val
    return head + tail


@_quiet
def numerical_fourier(phi: TestFunction, t: float) -> float:
    """Numerical transform of phi at t (even function, cosine transform)."""
    t = abs(float(t))
    R = 40 / phi.v
    d = phi.decay
    n = max(1, math.ceil(R * max(phi.v, t)))
    head = math.fsum(
        integrate.quad(lambda s: float(phi.phi(s)) * math.cos(2 * math.pi * t * s), R * i / n, R * (i + 1) / n,
                       limit=200, epsabs=1e-15, epsrel=1e-13)[0]
        for i in range(n)
    )
    tail = 0.0
    for c, f in phi.cosine_terms:
        # cos(a) cos(b) = (cos(a + b) + cos(a - b)) / 2, then shift s -> s + R
        for freq in (f + t, abs(f - t)):
            if freq < 1e-12:
                val = R ** (1 - d) / (d - 1)
            else:
                cs, _ = integrate.quad(lambda s: (s + R) ** -d, 0, np.inf, weight="cos", wvar=2 * math.pi * freq,
                                       limlst=200, epsabs=1e-16)
                sn, _ = integrate.quad(lambda s: (s + R) ** -d, 0, np.inf, weight="sin", wvar=2 * math.pi * freq,
                                       limlst=200, epsabs=1e-16)
                ph = 2 * math.pi * freq * R
                val = math.cos(ph) * cs - math.sin(ph) * sn
            tail += c * val / 2
    return 2 * (head + tail)
