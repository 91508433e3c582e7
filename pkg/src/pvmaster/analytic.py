"""Analytic test functions, Taylor coefficients and the circle combinations.

Every catalog function is vectorised over numpy arrays and has real Taylor
coefficients at real expansion points, so ``f(conj z) == conj f(z)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

CATALOG = ("power", "exp", "sinh", "cos_exp", "log1p", "atan_sq", "exp_exp", "series")


class DomainError(ValueError):
    """Argument outside the disc of analyticity or on a branch cut."""


class UnsupportedFunctionError(ValueError):
    pass


class CoefficientMismatchError(RuntimeError):
    """Analytic and circle-average Taylor coefficients disagree."""


def _series_coefficients(params: Mapping[str, float]) -> tuple[float, ...]:
    keys = sorted((k for k in params if k.startswith("M")), key=lambda k: int(k[1:]))
    if not keys:
        raise ValueError("series function needs coefficients M0..MK")
    K = int(keys[-1][1:])
    return tuple(float(params.get(f"M{k}", 0.0)) for k in range(K + 1))


@dataclass(frozen=True)
class AnalyticFunction:
    """One member of the function catalog.

    ``center`` is the point about which analyticity is asserted; ``radius``
    is the distance from it to the nearest singularity (``math.inf`` for
    entire functions).
    """

    name: str
    params: tuple[tuple[str, float], ...] = ()
    center: float = 0.0
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.name not in CATALOG:
            raise ValueError(f"unknown catalog function {self.name!r}")
        p = self.param_map
        if self.name == "power":
            m = p.get("m", 1.0)
            if m < 0:
                raise ValueError("power exponent must be >= 0")
            if m != int(m):
                if self.center <= 0:
                    raise DomainError("non-integer power needs a positive center (branch point at 0)")
                object.__setattr__(self, "warnings", ("multivalued: principal branch of z**m",))
        if self.name == "log1p" and self.center <= -1:
            raise DomainError("log1p needs center > -1 to stay off the branch cut")
        if self.name == "series":
            _series_coefficients(p)

    @classmethod
    def make(cls, name: str, params: Mapping[str, float] | None = None, center: float = 0.0):
        items = tuple(sorted((str(k), float(v)) for k, v in (params or {}).items()))
        return cls(name, items, float(center))

    @property
    def param_map(self) -> dict[str, float]:
        return dict(self.params)

    @property
    def real_coefficients(self) -> bool:
        return True

    @property
    def singularities(self) -> tuple[complex, ...]:
        """Finite singular points (branch points included)."""
        if self.name == "log1p":
            return (-1 + 0j,)
        if self.name == "atan_sq":
            return (1j, -1j)
        if self.name == "power" and not self.is_integer_power:
            return (0j,)
        return ()

    @property
    def is_integer_power(self) -> bool:
        m = self.param_map.get("m", 1.0)
        return m == int(m)

    def radius_at(self, alpha: float) -> float:
        s = self.singularities
        if not s:
            return math.inf
        return min(abs(z - alpha) for z in s)

    @property
    def radius(self) -> float:
        return self.radius_at(self.center)

    def with_center(self, center: float) -> "AnalyticFunction":
        return AnalyticFunction(self.name, self.params, float(center))

    def __call__(self, z):
        """Vectorised evaluation, no domain checks."""
        z = np.asarray(z, dtype=complex)
        p = self.param_map
        name = self.name
        if name == "power":
            m = p.get("m", 1.0)
            if m == int(m):
                return z ** int(m)
            return np.exp(m * np.log(z))
        if name == "exp":
            return np.exp(z)
        if name == "sinh":
            return np.sinh(z)
        if name == "cos_exp":
            return np.cos(np.exp(z))
        if name == "log1p":
            return np.log1p(z)
        if name == "atan_sq":
            return np.arctan(z) ** 2
        if name == "exp_exp":
            return np.exp(np.exp(z))
        M = _series_coefficients(p)
        alpha_s = p.get("alpha", 0.0)
        w = np.exp(-(z - alpha_s))
        out = np.zeros_like(z)
        for coeff in reversed(M):  # Horner in e^{-(z - alpha)}
            out = out * w + coeff
        return out

    def analytic_taylor(self, alpha: float, K: int) -> np.ndarray | None:
        """Closed-form coefficients f^(k)(alpha)/k!, k = 0..K, when known."""
        p = self.param_map
        k = np.arange(K + 1)
        inv_fact = np.exp(-np.array([math.lgamma(j + 1.0) for j in k]))  # 1/k! without overflow
        name = self.name
        if name == "power" and self.is_integer_power:
            m = int(p.get("m", 1.0))
            return np.array([math.comb(m, j) * alpha ** (m - j) if j <= m else 0.0 for j in k], dtype=complex)
        if name == "exp":
            return (math.exp(alpha) * inv_fact).astype(complex)
        if name == "sinh":
            even = np.where(k % 2 == 0, math.sinh(alpha), math.cosh(alpha))
            return (even * inv_fact).astype(complex)
        if name == "log1p":
            c = np.empty(K + 1, dtype=complex)
            c[0] = math.log1p(alpha)
            j = k[1:]
            c[1:] = (-1.0) ** (j + 1) / (j * (1.0 + alpha) ** j)
            return c
        if name == "series":
            M = np.array(_series_coefficients(p))
            alpha_s = p.get("alpha", 0.0)
            idx = np.arange(len(M))
            base = M * np.exp(-idx * (alpha - alpha_s))
            return np.array([np.sum(base * (-idx) ** j) * inv_fact[j] for j in k], dtype=complex)
        return None


@dataclass(frozen=True)
class SeriesFunction:
    """g(alpha + z) = sum_k M_k exp(-k z) for a finite coefficient list."""

    coefficients: tuple[float, ...]
    alpha: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if not self.coefficients:
            raise ValueError("need at least one coefficient")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        w = np.exp(-(z - self.alpha))
        out = np.zeros_like(z)
        for coeff in reversed(self.coefficients):
            out = out * w + coeff
        return out

    def as_analytic(self) -> AnalyticFunction:
        """The same function as a catalog ``series`` entry centered at alpha."""
        params = {f"M{k}": c for k, c in enumerate(self.coefficients)}
        params["alpha"] = self.alpha
        return AnalyticFunction.make("series", params, self.alpha)


@dataclass(frozen=True)
class CombinationParams:
    alpha: float
    beta: float
    theta: float

    def check(self, f: AnalyticFunction, allow_boundary: bool = False) -> bool:
        """Validate against ``f``; returns True for a boundary case (|beta| == radius)."""
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        r = f.radius_at(self.alpha)
        b = abs(self.beta)
        if b < r * (1 - 1e-12):
            return False
        if allow_boundary and math.isclose(b, r, rel_tol=1e-12):
            return True
        raise DomainError(f"|beta|={b} must be smaller than the radius {r} of {f.name} about {self.alpha}")


def _check_finite(w, what="value"):
    w = np.asarray(w)
    if not np.all(np.isfinite(w)):
        raise DomainError(f"non-finite {what} (singular point or overflow)")


def eval(f: AnalyticFunction, z: complex, allow_boundary: bool = False) -> complex:  # noqa: A001
    """Checked scalar evaluation of a catalog function."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("argument is not finite")
    d = abs(z - f.center)
    r = f.radius
    if not (d < r or (allow_boundary and d <= r * (1 + 1e-12))):
        raise DomainError(f"|z - {f.center}| = {d} outside the disc of radius {r}")
    w = complex(f(z))
    _check_finite(w)
    return w


def taylor_coeffs(f: AnalyticFunction, alpha: float, r: float, K: int, check: bool = True) -> np.ndarray:
    """Taylor coefficients c_k = f^(k)(alpha)/k!, k = 0..K.

    Uses the analytic series when the catalog knows one, cross-checked against
    the trapezoidal circle average on |z - alpha| = r with M = max(64, 8K)
    samples.  Comparison is made on the scaled coefficients c_k r^k, which is
    the quantity the circle average actually resolves.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if not r > 0:
        raise ValueError("r must be positive")
    if r >= f.radius_at(alpha):
        raise DomainError(f"circle radius {r} reaches a singularity of {f.name}")
    M = max(64, 8 * K)
    nodes = alpha + r * np.exp(2j * np.pi * np.arange(M) / M)
    vals = f(nodes)
    _check_finite(vals, "sample on the coefficient circle")
    scaled = np.fft.fft(vals)[: K + 1] / M
    circle = scaled / r ** np.arange(K + 1)
    known = f.analytic_taylor(alpha, K)
    if known is None:
        return circle
    if check:
        scale = max(1.0, float(np.max(np.abs(vals))))
        gap = np.abs(known - circle) * r ** np.arange(K + 1)
        if np.max(gap) > 1e-8 * scale:
            raise CoefficientMismatchError(
                f"{f.name}: circle average disagrees with series by {np.max(gap):.3e}"
            )
    return known


def _orbit(p: CombinationParams, x):
    e = np.exp(1j * p.theta * np.asarray(x, dtype=float))
    return p.alpha + p.beta * e, p.alpha + p.beta * np.conj(e)


def _require_real(f: AnalyticFunction):
    if not f.real_coefficients:
        raise UnsupportedFunctionError(f"{f.name} has complex Taylor coefficients")


def _realify(w, tol=1e-12):
    w = np.asarray(w, dtype=complex)
    _check_finite(w, "combination value")
    if np.any(np.abs(w.imag) > tol * (1 + np.abs(w.real))):
        raise DomainError("combination is not real; Taylor coefficients are not real on this orbit")
    return w.real


def even_combination(f: AnalyticFunction, p: CombinationParams, x):
    """f(a + b e^{i th x}) + f(a + b e^{-i th x}), a real number for each x."""
    _require_real(f)
    up, down = _orbit(p, x)
    out = _realify(f(up) + f(down))
    return out if np.ndim(x) else float(out)


def odd_combination(f: AnalyticFunction, p: CombinationParams, x):
    """(f(a + b e^{i th x}) - f(a + b e^{-i th x})) / i."""
    _require_real(f)
    up, down = _orbit(p, x)
    out = _realify((f(up) - f(down)) / 1j)
    return out if np.ndim(x) else float(out)


def series_combination(g: SeriesFunction, theta: float, x, parity: str):
    """Cosine (even) or sine (odd) series sum_k M_k cos/sin(k theta x)."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    if theta < 0 or (parity == "odd" and theta == 0):
        raise ValueError("theta must be >= 0 (even) or > 0 (odd)")
    xs = np.asarray(x, dtype=float)
    lo = g(g.alpha - 1j * theta * xs)
    hi = g(g.alpha + 1j * theta * xs)
    w = (lo + hi) / 2 if parity == "even" else (lo - hi) / 2j
    out = _realify(w)
    return out if np.ndim(x) else float(out)


def catalog_function(name: str, params: Mapping[str, float] | None = None, center: float = 0.0) -> AnalyticFunction:
    return AnalyticFunction.make(name, params, center)


def constant(c: float) -> AnalyticFunction:
    return AnalyticFunction.make("series", {"M0": c}, 0.0)


def boundary_angles(f: AnalyticFunction, alpha: float, beta: float) -> tuple[float, ...]:
    """Angles phi in [0, 2pi) where alpha + beta e^{i phi} hits a singularity."""
    out = []
    for s in f.singularities:
        if math.isclose(abs(s - alpha), abs(beta), rel_tol=1e-12):
            out.append(cmath.phase((s - alpha) / beta) % (2 * math.pi))
    return tuple(sorted(out))

