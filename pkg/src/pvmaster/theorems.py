"""Closed forms of the master theorems and their special cases.

Every formula is registered in :data:`FORMULAS` under its public id
("thm1", "t1r2", "gen66", ...).  A formula has a ``printed`` variant,
optionally corrected variants, and a builder for the raw integrand whose
principal value it claims.  ``mode="printed"`` evaluates the printed variant;
``mode="audited"`` applies the variant and sign chosen by
:mod:`pvmaster.audit` against the quadrature oracle.

Closed forms are evaluated in complex arithmetic on the circle
alpha + beta e^{iu}; the imaginary part of the result is kept as
``imag_residual`` (it vanishes for functions with real Taylor coefficients).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analytic
from .analytic import AnalyticFunction, CombinationParams, DomainError, SeriesFunction
from .kernels import (
    KERNEL_FORMULA,
    KERNEL_VARIANTS,
    FamilyOrder,
    ParameterError,
    check_kernel_domain,
    even_denominator,
    even_poles,
    kernel_integrand,
    odd_denominator,
    odd_poles,
)
from .quadrature import PVIntegrand

PI = math.pi
C = math.comb


@dataclass(frozen=True)
class ClosedFormValue:
    value: float
    imag_residual: float
    mode: str
    sign_factor: int
    formula_id: str
    correction: str | None = None


# -- parameter records ---------------------------------------------------------


@dataclass(frozen=True)
class KernelParams:
    kind: str
    theta: float
    order: FamilyOrder

    @property
    def formula_id(self):
        return KERNEL_FORMULA[self.kind]

    def validate(self):
        check_kernel_domain(self.kind, self.theta, self.order)
        return False


@dataclass(frozen=True)
class TheoremParams:
    theorem: int
    f: AnalyticFunction
    comb: CombinationParams
    order: FamilyOrder
    allow_boundary: bool = False

    @property
    def formula_id(self):
        return f"thm{self.theorem}"

    def validate(self) -> bool:
        """Check the domain; returns True for a boundary case."""
        t, th, o = self.theorem, self.comb.theta, self.order
        if t not in range(1, 7):
            raise ParameterError(f"theorem must be 1..6, got {t!r}")
        if t in (2, 3, 5) and not th > 0:
            raise ParameterError(f"theorem {t} needs theta > 0")
        if th < 0:
            raise ParameterError("theta must be >= 0")
        if t in (3, 4) and o.n < 1:
            raise ParameterError(f"theorem {t} needs n >= 1")
        if t in (5, 6) and o.m is None:
            raise ParameterError(f"theorem {t} needs m >= 1")
        return self.comb.check(self.f, self.allow_boundary)


@dataclass(frozen=True)
class Table1Params:
    row: int
    g: SeriesFunction
    theta: float
    order: FamilyOrder

    @property
    def formula_id(self):
        return f"t1r{self.row}"

    def validate(self):
        r, th, o = self.row, self.theta, self.order
        if r not in range(1, 5):
            raise ParameterError(f"table 1 row must be 1..4, got {r!r}")
        if th < 0 or (r == 2 and th == 0):
            raise ParameterError("theta must be >= 0 (> 0 for row 2)")
        if r == 3 and o.n < 1:
            raise ParameterError("row 3 needs n >= 1")
        if r == 4 and o.m is None:
            raise ParameterError("row 4 needs m >= 1")
        return False


TABLE2_ORDER = {1: (1, 0), 2: (2, 0), 3: (1, 1), 4: (2, 1), 5: (3, 2), 6: (4, 2)}


@dataclass(frozen=True)
class Table2Params:
    row: int
    f: AnalyticFunction
    comb: CombinationParams
    allow_boundary: bool = False

    @property
    def formula_id(self):
        return f"t2r{self.row}"

    def theorem_params(self) -> TheoremParams:
        t, n = TABLE2_ORDER[self.row]
        return TheoremParams(t, self.f, self.comb, FamilyOrder(n), self.allow_boundary)

    def validate(self):
        if self.row not in TABLE2_ORDER:
            raise ParameterError(f"table 2 row must be 1..6, got {self.row!r}")
        if self.row in (1, 2) and (self.comb.alpha != 0 or self.comb.beta != 1):
            raise ParameterError("table 2 rows 1 and 2 fix alpha = 0 and beta = 1")
        if not self.comb.theta > 0:
            raise ParameterError("table 2 needs theta > 0")
        return self.theorem_params().validate()


@dataclass(frozen=True)
class Remark1Params:
    f: AnalyticFunction
    beta: float
    phi: float
    allow_boundary: bool = False

    formula_id = "rem1"

    def validate(self):
        if not self.phi > 0:
            raise ParameterError("phi must be positive")
        return CombinationParams(0.0, self.beta, self.phi).check(self.f, self.allow_boundary)


GENERATORS = ("gen61", "gen63", "gen64", "gen66", "gen68", "gen70", "gen72", "gen74", "gen76")
GENERATOR_FUNCTION = {
    "gen61": "power", "gen63": "power", "gen64": "exp", "gen66": "exp", "gen68": "sinh",
    "gen70": "sinh", "gen72": "cos_exp", "gen74": "log1p", "gen76": "log1p",
}
GENERATOR_THEOREM = {
    "gen61": 1, "gen63": 3, "gen64": 1, "gen66": 2, "gen68": 1, "gen70": 3, "gen72": 1, "gen74": 1, "gen76": 1,
}


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters of a generated family.

    ``m`` is the (positive, possibly non-integer) exponent of z^m for
    gen61/gen63; those two and gen76 fix alpha = 0, beta = 1.
    """

    gen: str
    theta: float
    n: int
    alpha: float = 0.0
    beta: float = 1.0
    m: float = 1.0

    @property
    def formula_id(self):
        return self.gen

    def theorem_params(self) -> TheoremParams:
        f = AnalyticFunction.make(GENERATOR_FUNCTION[self.gen], {"m": self.m} if self.gen in ("gen61", "gen63") else {}, self.alpha)
        return TheoremParams(GENERATOR_THEOREM[self.gen], f, CombinationParams(self.alpha, self.beta, self.theta), FamilyOrder(self.n), self.gen == "gen76")

    def validate(self):
        g = self.gen
        if g not in GENERATORS:
            raise ParameterError(f"unknown generator {g!r}")
        FamilyOrder(self.n)
        th = self.theta
        theorem = GENERATOR_THEOREM[g]
        if th < 0 or (theorem in (2, 3) and th == 0):
            raise ParameterError(f"{g} needs theta {'> 0' if theorem in (2, 3) else '>= 0'}")
        if theorem == 3 and self.n < 1:
            raise ParameterError(f"{g} needs n >= 1")
        if g in ("gen61", "gen63", "gen76") and (self.alpha != 0 or self.beta != 1):
            raise ParameterError(f"{g} fixes alpha = 0 and beta = 1")
        if g in ("gen61", "gen63") and not self.m > 0:
            raise ParameterError("exponent m must be positive")
        if g == "gen74" and not abs(self.beta) < abs(1 + self.alpha):
            raise DomainError("ln(1+z) needs |beta| < |1 + alpha| to stay off the branch cut")
        if g == "gen76":
            return True
        return False


@dataclass(frozen=True)
class ExampleParams:
    id: int
    theta: float
    b: float = 1.0

    @property
    def formula_id(self):
        return f"ex{self.id}"

    def validate(self):
        if self.id not in (1, 2, 3):
            raise ParameterError(f"example id must be 1..3, got {self.id!r}")
        if not self.theta > 0:
            raise ParameterError("examples need theta > 0")
        return self.id == 3


# -- circle samplers -------------------------------------------------------------


@dataclass(frozen=True)
class _Circle:
    """u -> F(e^{iu}) for the function whose Taylor data the sums consume.

    ``center`` is F(0) (f(alpha) for a catalog function, M0 for a series g)
    and ``at_one`` is F(1) (f(alpha + beta), or g(alpha) = sum M_k).
    """

    on: Callable
    center: complex
    at_one: complex


def _finite(w):
    w = np.asarray(w, dtype=complex)
    if not np.all(np.isfinite(w)):
        raise DomainError("closed form samples a singular point of f on the circle")
    return w


def _circle_f(f: AnalyticFunction, alpha: float, beta: float) -> _Circle:
    on = lambda u: _finite(f(alpha + beta * np.exp(1j * np.asarray(u, dtype=float))))
    return _Circle(on, complex(_finite(f(alpha))), complex(on(0.0)))


def _circle_g(g: SeriesFunction) -> _Circle:
    on = lambda u: _finite(g(g.alpha - 1j * np.asarray(u, dtype=float)))
    return _Circle(on, complex(g.coefficients[0]), complex(on(0.0)))


@dataclass(frozen=True)
class TermEvaluations:
    """The sampled values entering one theorem's finite sum."""

    psi: np.ndarray
    phi: np.ndarray
    gamma: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    lam: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    eta: complex = 0j
    varphi: complex = 0j

    @classmethod
    def odd_family(cls, c: _Circle, theta: float, n: int, eta_factor: float = 0.0):
        """psi/phi at theta(2s-1-2n); eta = eta_factor * F(0)."""
        a = 2 * np.arange(n + 1) - 1 - 2 * n
        return cls(c.on(theta * a), c.on(-theta * a), eta=eta_factor * c.center)

    @classmethod
    def even_family(cls, c: _Circle, theta: float, n: int):
        """psi/phi at theta(2n-2s), s < n; eta = F(0), varphi = F(1)."""
        b = 2 * n - 2 * np.arange(n)
        return cls(c.on(theta * b), c.on(-theta * b), eta=c.center, varphi=c.at_one)

    @classmethod
    def mixed_family(cls, c: _Circle, theta: float, n: int, m: int):
        a = 2 * n + 1 - 2 * np.arange(n + 1)
        b = 2 * m - 2 * np.arange(m)
        return cls(
            c.on(theta * a), c.on(-theta * a), c.on(theta * b), c.on(-theta * b), eta=c.center, varphi=c.at_one
        )

    @classmethod
    def for_theorem(cls, p: TheoremParams) -> "TermEvaluations":
        c = _circle_f(p.f, p.comb.alpha, p.comb.beta)
        t, th, n, m = p.theorem, p.comb.theta, p.order.n, p.order.m
        if t in (1, 2):
            return cls.odd_family(c, th, n, 2.0 if t == 2 else 0.0)
        if t in (3, 4):
            return cls.even_family(c, th, n)
        return cls.mixed_family(c, th, n, m)


# -- the finite sums ------------------------------------------------------------


def _signed_binom(N: int, count: int, offset: int = 0):
    s = np.arange(count)
    return np.array([(-1) ** (int(k) + offset) * C(N, int(k)) for k in s], dtype=float)


def sum_thm1(T: TermEvaluations, n: int) -> complex:
    w = _signed_binom(2 * n + 1, n + 1)
    return (-1) ** (n + 1) * PI / (1j * 2 ** (2 * n + 1) * math.factorial(2 * n + 1)) * np.sum(w * (T.psi - T.phi))


def sum_thm2(T: TermEvaluations, n: int) -> complex:
    w = _signed_binom(2 * n + 1, n + 1) * (2 * np.arange(n + 1) - 1 - 2 * n)
    return (-1) ** (n + 1) * PI / (2 ** (2 * n + 1) * math.factorial(2 * n + 1)) * np.sum(w * (T.psi + T.phi - T.eta))


def sum_thm3(T: TermEvaluations, n: int) -> complex:
    w = _signed_binom(2 * n, n, n)
    inner = C(2 * n, n) * (T.varphi - T.eta) + np.sum(w * (T.psi + T.phi - 2 * T.eta))
    return PI / (2 ** (2 * n) * math.factorial(2 * n)) * inner


def sum_thm4(T: TermEvaluations, n: int, power: int | None = None) -> complex:
    power = 2 * n if power is None else power
    w = _signed_binom(2 * n, n, n + 1) * (2 * n - 2 * np.arange(n))
    return PI / (2**power * 1j * math.factorial(2 * n)) * np.sum(w * (T.psi - T.phi))


def _mixed_weights(n: int, m: int):
    s = np.arange(n + 1)
    k = np.arange(m)
    a = (2 * n + 1 - 2 * s).astype(float)
    b = (2 * m - 2 * k).astype(float)
    ws = _signed_binom(2 * n + 1, n + 1)
    cross = np.array(
        [[(-1) ** (int(kk) + m + int(ss) + 1) * C(2 * m, int(kk)) * C(2 * n + 1, int(ss)) for ss in s] for kk in k],
        dtype=float,
    )
    denom = b[:, None] ** 2 - a[None, :] ** 2
    return a, b, ws, cross, denom


def _mixed_prefactors(n: int, m: int, corrected: bool):
    first = (-1) ** n * PI / (2 ** (2 * m + 2 * n) * math.factorial(m) ** 2 * math.factorial(2 * n + 1))
    second = 2 * first
    if corrected:
        second /= C(2 * m, m)
    return first, second


def sum_thm5(T: TermEvaluations, n: int, m: int, corrected: bool = False) -> complex:
    a, b, ws, cross, denom = _mixed_weights(n, m)
    p1, p2 = _mixed_prefactors(n, m, corrected)
    first = np.sum(ws * (T.varphi - 0.5 * (T.psi + T.phi)) / a)
    pair = 0.5 * ((T.gamma + T.lam)[:, None] - (T.psi + T.phi)[None, :])
    second = np.sum(cross * a[None, :] * pair / denom)
    return p1 * first + p2 * second


def sum_thm6(T: TermEvaluations, n: int, m: int, corrected: bool = False) -> complex:
    a, b, ws, cross, denom = _mixed_weights(n, m)
    p1, p2 = _mixed_prefactors(n, m, corrected)
    d_odd = (T.psi - T.phi) / 2j
    d_even = (T.gamma - T.lam) / 2j
    first = np.sum(ws * d_odd)
    second = np.sum(cross * a[None, :] * (a[None, :] * d_odd[None, :] - b[:, None] * d_even[:, None]) / denom)
    return p1 * first + p2 * second


NORMALIZATION_FIX = "cross-term normalization (2m)! instead of (m!)^2"


def _theorem_variants(p: TheoremParams, corrected: bool = False) -> complex:
    T = TermEvaluations.for_theorem(p)
    n, m = p.order.n, p.order.m
    return {
        1: lambda: sum_thm1(T, n),
        2: lambda: sum_thm2(T, n),
        3: lambda: sum_thm3(T, n),
        4: lambda: sum_thm4(T, n),
        5: lambda: sum_thm5(T, n, m, corrected),
        6: lambda: sum_thm6(T, n, m, corrected),
    }[p.theorem]()


# -- raw integrands -----------------------------------------------------------------


def _rate(theta):
    return theta if theta > 0 else 1.0


def _singular_layout(f: AnalyticFunction, alpha: float, beta: float, theta: float, boundary: bool):
    """Offsets/period of x where alpha + beta e^{+-i theta x} meets a singularity."""
    if not boundary or theta <= 0:
        return (), None
    P = 2 * PI / theta
    offs = set()
    for phi0 in analytic.boundary_angles(f, alpha, beta):
        for ang in (phi0, 2 * PI - phi0):
            offs.add(round((ang / theta) % P, 15))
    return tuple(sorted(offs)), P


def theorem_integrand(p: TheoremParams) -> PVIntegrand:
    boundary = p.validate()
    t, n, m = p.theorem, p.order.n, p.order.m
    f, comb = p.f, p.comb
    even = lambda x: analytic.even_combination(f, comb, x)
    odd = lambda x: analytic.odd_combination(f, comb, x)
    if t == 1:
        fn, poles, deg, rem = (lambda x: even(x) / odd_denominator(n, x)), odd_poles(n), 2 * n + 2, ()
    elif t == 2:
        fn, poles, deg, rem = (lambda x: x * odd(x) / odd_denominator(n, x)), odd_poles(n), 2 * n + 1, ()
    elif t == 3:
        fn, poles, deg, rem = (lambda x: odd(x) / (x * even_denominator(n, x))), even_poles(n), 2 * n + 1, (0.0,)
    elif t == 4:
        fn, poles, deg, rem = (lambda x: even(x) / even_denominator(n, x)), even_poles(n), 2 * n, ()
    elif t == 5:
        fn = lambda x: odd(x) / (odd_denominator(n, x) * x * even_denominator(m, x))
        poles, deg, rem = sorted(odd_poles(n) + even_poles(m)), 2 * n + 2 * m + 3, (0.0,)
    else:
        fn = lambda x: even(x) / (odd_denominator(n, x) * even_denominator(m, x))
        poles, deg, rem = sorted(odd_poles(n) + even_poles(m)), 2 * n + 2 * m + 2, ()
    offs, period = _singular_layout(f, comb.alpha, comb.beta, comb.theta, boundary)
    return PVIntegrand(fn, tuple(poles), deg, _rate(comb.theta), rem, offs, period, p.formula_id)


def table1_integrand(p: Table1Params) -> PVIntegrand:
    p.validate()
    g, th, n, m = p.g, p.theta, p.order.n, p.order.m
    even = lambda x: 2 * analytic.series_combination(g, th, x, "even")
    odd = lambda x: 2 * analytic.series_combination(g, th, x, "odd")
    if p.row == 1:
        return PVIntegrand(lambda x: even(x) / odd_denominator(n, x), tuple(odd_poles(n)), 2 * n + 2, _rate(th))
    if p.row == 2:
        return PVIntegrand(lambda x: x * odd(x) / odd_denominator(n, x), tuple(odd_poles(n)), 2 * n + 1, _rate(th))
    if p.row == 3:
        return PVIntegrand(lambda x: even(x) / even_denominator(n, x), tuple(even_poles(n)), 2 * n, _rate(th))
    poles = tuple(sorted(odd_poles(n) + even_poles(m)))
    fn = lambda x: even(x) / (odd_denominator(n, x) * even_denominator(m, x))
    return PVIntegrand(fn, poles, 2 * n + 2 * m + 2, _rate(th))


def remark1_integrand(p: Remark1Params) -> PVIntegrand:
    boundary = p.validate()
    comb = CombinationParams(0.0, p.beta, p.phi)
    fn = lambda y: analytic.odd_combination(p.f, comb, y) / (y * (1 - y * y))
    offs, period = _singular_layout(p.f, 0.0, p.beta, p.phi, boundary)
    return PVIntegrand(fn, (1.0,), 3, p.phi, (0.0,), offs, period, "rem1")


def generator_integrand(p: GeneratorParams) -> PVIntegrand:
    """The left-hand side of each generated formula, transcribed literally."""
    p.validate()
    g, th, n, a, b = p.gen, p.theta, p.n, p.alpha, p.beta
    rate = _rate(th)
    Do = lambda x: odd_denominator(n, x)
    De = lambda x: even_denominator(n, x)
    odd_p, even_p = tuple(odd_poles(n)), tuple(even_poles(n))
    if g == "gen61":
        rate = _rate(p.m * th)
        return PVIntegrand(lambda x: 2 * np.cos(th * p.m * x) / Do(x), odd_p, 2 * n + 2, rate, label=g)
    if g == "gen63":
        fn = lambda x: 2 * np.sin(th * p.m * x) / (x * De(x))
        return PVIntegrand(fn, even_p, 2 * n + 1, _rate(p.m * th), (0.0,), label=g)
    if g == "gen64":
        fn = lambda x: 2 * np.exp(a + b * np.cos(th * x)) * np.cos(b * np.sin(th * x)) / Do(x)
        return PVIntegrand(fn, odd_p, 2 * n + 2, rate, label=g)
    if g == "gen66":
        fn = lambda x: x * (2 * np.exp(a + b * np.cos(th * x)) * np.sin(b * np.sin(th * x))) / Do(x)
        return PVIntegrand(fn, odd_p, 2 * n + 1, rate, label=g)
    if g == "gen68":
        fn = lambda x: 2 * np.cos(b * np.sin(th * x)) * np.sinh(a + b * np.cos(th * x)) / Do(x)
        return PVIntegrand(fn, odd_p, 2 * n + 2, rate, label=g)
    if g == "gen70":
        fn = lambda x: 2 * np.sin(b * np.sin(th * x)) * np.cosh(a + b * np.cos(th * x)) / (x * De(x))
        return PVIntegrand(fn, even_p, 2 * n + 1, rate, (0.0,), label=g)
    if g == "gen72":

        def fn(x):
            A = np.exp(a + b * np.cos(th * x))
            B = b * np.sin(th * x)
            return 2 * np.cos(A * np.cos(B)) * np.cosh(np.sin(B) * A) / Do(x)

        return PVIntegrand(fn, odd_p, 2 * n + 2, rate, label=g)
    if g == "gen74":
        fn = lambda x: np.log((a + 1) ** 2 + b * b + 2 * (a + 1) * b * np.cos(th * x)) / Do(x)
        return PVIntegrand(fn, odd_p, 2 * n + 2, rate, label=g)
    # gen76: log singularities where theta x = pi (mod 2 pi)
    fn = lambda x: 2 * np.log(np.abs(2 * np.cos(th * x / 2))) / Do(x)
    return PVIntegrand(fn, odd_p, 2 * n + 2, rate, (), (PI / th,), 2 * PI / th, g)


def example_integrand(p: ExampleParams) -> PVIntegrand:
    p.validate()
    th, b = p.theta, p.b
    if p.id == 1:

        def fn(x):
            u = th * x
            return x * np.exp(np.exp(np.cos(u)) * np.cos(np.sin(u))) * np.sin(np.sin(np.sin(u)) * np.exp(np.cos(u))) / (1 - x * x)

        return PVIntegrand(fn, (1.0,), 1, th, label="ex1")
    if p.id == 2:

        def fn(x):
            t = np.arctan(th * x)
            num = (np.exp(b * t) + np.exp(-b * t)) * np.cos(0.5 * b * np.log1p((th * x) ** 2))
            return num / ((1 - x * x) * (9 - x * x))

        return PVIntegrand(fn, (1.0, 3.0), 4, 1.0, label="ex2")

    def fn(x):
        return np.log(np.abs(np.tan(th * x / 2 - PI / 4))) ** 2 / ((4 - x * x) * (16 - x * x))

    # tan(theta x/2 - pi/4) vanishes or blows up where theta x = pi/2 (mod pi)
    return PVIntegrand(fn, (2.0, 4.0), 4, th, (), (PI / (2 * th),), PI / th, "ex3")


# -- formula registry ----------------------------------------------------------------


@dataclass(frozen=True)
class Formula:
    formula_id: str
    variants: dict
    integrand: Callable
    description: str


def _t1_variants(p: Table1Params):
    c = _circle_g(p.g)
    th, n, m = p.theta, p.order.n, p.order.m
    if p.row == 1:
        return {"printed": lambda: sum_thm1(TermEvaluations.odd_family(c, th, n), n)}
    if p.row == 2:
        printed = TermEvaluations.odd_family(c, th, n)
        printed = TermEvaluations(printed.psi, printed.phi, eta=2 * c.at_one)
        fixed = TermEvaluations.odd_family(c, th, n, 2.0)
        return {"printed": lambda: sum_thm2(printed, n), "eta = 2 M0": lambda: sum_thm2(fixed, n)}
    if p.row == 3:
        T = TermEvaluations.even_family(c, th, n)
        return {"printed": lambda: sum_thm4(T, n, 2 * n + 1), "prefactor 2^(2n)": lambda: sum_thm4(T, n)}
    T = TermEvaluations.mixed_family(c, th, n, m)
    return {"printed": lambda: sum_thm6(T, n, m), NORMALIZATION_FIX: lambda: sum_thm6(T, n, m, True)}


def _t2_variants(p: Table2Params):
    tp = p.theorem_params()
    c = _circle_f(p.f, p.comb.alpha, p.comb.beta)
    on, th = c.on, p.comb.theta
    r = p.row
    if r == 1:
        return {"printed": lambda: PI / 2j * (on(th) - on(-th))}
    if r == 2:
        return {"printed": lambda: PI * (c.center - 0.5 * (on(th) + on(-th)))}
    if r == 3:
        return {
            "printed": lambda: PI / 48j * (on(-3 * th) - on(-th) - 3 * (on(-th) - on(th))),
            "first pair f(e^{-3i theta}) - f(e^{3i theta})": lambda: PI / 48j
            * (on(-3 * th) - on(3 * th) - 3 * (on(-th) - on(th))),
        }
    if r == 4:
        return {"printed": lambda: PI / 16 * (on(-th) + on(th) - on(-3 * th) - on(3 * th))}
    if r == 5:
        return {
            "printed": lambda: PI / 384
            * (6 * c.at_one + on(4 * th) + on(-4 * th) - 4 * (on(2 * th) + on(-2 * th)))
        }
    return {"printed": lambda: PI / 96j * (2 * (on(2 * th) - on(-2 * th)) - (on(4 * th) - on(-4 * th)))}


def _gen_variants(p: GeneratorParams):
    g, th, n, a, b = p.gen, p.theta, p.n, p.alpha, p.beta
    s = np.arange(n + 1)
    w = _signed_binom(2 * n + 1, n + 1)
    u = th * (2 * s - 1 - 2 * n)
    odd_pref = (-1) ** (n + 1) * PI / (2 ** (2 * n) * math.factorial(2 * n + 1))
    if g == "gen61":
        return {"printed": lambda: odd_pref * np.sum(w * np.sin(p.m * u))}
    if g == "gen63":
        k = np.arange(n)
        wk = _signed_binom(2 * n, n, n)
        val = lambda: PI / (2 ** (2 * n) * math.factorial(2 * n)) * (
            C(2 * n, n) + 2 * np.sum(wk * np.cos(th * p.m * (2 * n - 2 * k)))
        )
        return {"printed": val}
    if g == "gen64":
        return {
            "printed": lambda: odd_pref
            * np.sum(w * math.exp(a) * np.sin(b * np.sin(u)) * (np.sinh(b * np.cos(u)) + np.cosh(b * np.cos(u))))
        }
    if g == "gen66":
        z = lambda v: np.exp(a + b * np.exp(1j * v))
        return {
            "printed": lambda: odd_pref / 2
            * np.sum(w * (2 * s - 1 - 2 * n) * (z(u) + z(-u) - 2 * math.exp(a)))
        }
    if g == "gen68":
        z = lambda v: np.sinh(a + b * np.exp(1j * v))
        printed = lambda: odd_pref / 2 * np.sum(w * (z(u) - z(-u)) / 2j)
        return {"printed": printed, "doubled (1/i instead of 1/2i)": lambda: 2 * printed()}
    if g == "gen70":
        k = np.arange(n)
        wk = _signed_binom(2 * n, n, n)
        v = th * (2 * n - 2 * k)
        z = lambda t: np.sinh(a + b * np.exp(1j * t))
        pref = PI / (2 ** (2 * n) * math.factorial(2 * n))
        return {
            "printed": lambda: pref * C(2 * n, n) * (math.sinh(a + b) - math.sinh(a))
            + pref * np.sum(wk * (z(v) + z(-v) - 2 * math.sinh(a)))
        }
    if g == "gen72":
        z = lambda v: np.cos(np.exp(a + b * np.exp(1j * v)))
        return {"printed": lambda: odd_pref * np.sum(w * (z(u) - z(-u)) / 2j)}

    def logs():
        z = lambda v: _finite(np.log(1 + a + b * np.exp(1j * v)))
        return odd_pref * np.sum(w * (z(u) - z(-u)) / 2j)

    return {"printed": logs}


def _ex_variants(p: ExampleParams):
    th = p.theta
    if p.id == 1:
        E = np.exp(np.exp(np.exp(1j * th)))
        printed = lambda: PI * (E.real - math.e) + 0j
        return {"printed": printed, "half (integrand is half the theorem numerator)": lambda: 0.5 * printed()}
    if p.id == 2:
        gz = lambda z: np.cos(p.b * np.log(1 + z))
        return {
            "printed": lambda: PI / 48j
            * (gz(3j * th) - gz(-3j * th) - 3 * (gz(1j * th) - gz(-1j * th)))
        }
    f = AnalyticFunction.make("atan_sq")
    on = _circle_f(f, 0.0, 1.0).on

    def printed():
        a2 = np.arctan(np.exp(2j * th)) ** 2
        b2 = np.arctan(np.exp(-2j * th)) ** 2
        return -PI / 48j * (2 * a2 - b2 - (a2 - b2))

    def recomputed():
        thm4 = PI / 96j * (2 * (on(2 * th) - on(-2 * th)) - (on(4 * th) - on(-4 * th)))
        return -2 * thm4

    return {"printed": printed, "recomputed from the four-pole theorem": recomputed}


def _kernel_variants(p: KernelParams):
    return {name: (lambda fn=fn: fn(p.theta, p.order) + 0j) for name, fn in KERNEL_VARIANTS[p.formula_id].items()}


def _thm_variants(p: TheoremParams):
    out = {"printed": lambda: _theorem_variants(p)}
    if p.theorem in (5, 6):
        out[NORMALIZATION_FIX] = lambda: _theorem_variants(p, True)
    return out


def _rem1_variants(p: Remark1Params):
    c = _circle_f(p.f, 0.0, p.beta)
    return {"printed": lambda: PI * (c.at_one - 0.5 * (c.on(p.phi) + c.on(-p.phi)))}


_DESCRIPTIONS = {
    "eq19": "PV int cos(theta x) / odd family",
    "eq20": "PV int x sin(theta x) / odd family",
    "eq21": "PV int sin(theta x) / (x even family)",
    "eq22": "PV int cos(theta x) / even family",
    "eq23": "PV int sin(theta x) / (odd family x even family)",
    "eq25": "PV int cos(theta x) / (odd family even family)",
    "thm1": "PV int [f(a+b e^{i theta x}) + f(a+b e^{-i theta x})] / odd family",
    "thm2": "PV int x [f(a+b e^{i theta x}) - f(a+b e^{-i theta x})] / (i odd family)",
    "thm3": "PV int [f(a+b e^{i theta x}) - f(a+b e^{-i theta x})] / (i x even family)",
    "thm4": "PV int [f(a+b e^{i theta x}) + f(a+b e^{-i theta x})] / even family",
    "thm5": "PV int [f(a+b e^{i theta x}) - f(a+b e^{-i theta x})] / (i odd family x even family)",
    "thm6": "PV int [f(a+b e^{i theta x}) + f(a+b e^{-i theta x})] / (odd family even family)",
    "t1r1": "PV int [g(a - i theta x) + g(a + i theta x)] / odd family",
    "t1r2": "PV int x [g(a - i theta x) - g(a + i theta x)] / (i odd family)",
    "t1r3": "PV int [g(a - i theta x) + g(a + i theta x)] / even family",
    "t1r4": "PV int [g(a - i theta x) + g(a + i theta x)] / (odd family even family)",
    "t2r1": "PV int [f(e^{i theta x}) + f(e^{-i theta x})] / (1 - x^2)",
    "t2r2": "PV int x [f(e^{i theta x}) - f(e^{-i theta x})] / (i (1 - x^2))",
    "t2r3": "PV int [f(a+b e^{i theta x}) + f(a+b e^{-i theta x})] / ((1 - x^2)(9 - x^2))",
    "t2r4": "PV int x [f(a+b e^{i theta x}) - f(a+b e^{-i theta x})] / (i (1 - x^2)(9 - x^2))",
    "t2r5": "PV int [f(a+b e^{i theta x}) - f(a+b e^{-i theta x})] / (i x (4 - x^2)(16 - x^2))",
    "t2r6": "PV int [f(a+b e^{i theta x}) + f(a+b e^{-i theta x})] / ((4 - x^2)(16 - x^2))",
    "rem1": "PV int [f(b e^{i phi y}) - f(b e^{-i phi y})] / (i y (1 - y^2))",
    "gen61": "PV int 2 cos(m theta x) / odd family",
    "gen63": "PV int 2 sin(m theta x) / (x even family)",
    "gen64": "PV int 2 e^{a + b cos theta x} cos(b sin theta x) / odd family",
    "gen66": "PV int 2 x e^{a + b cos theta x} sin(b sin theta x) / odd family",
    "gen68": "PV int 2 cos(b sin theta x) sinh(a + b cos theta x) / odd family",
    "gen70": "PV int 2 sin(b sin theta x) cosh(a + b cos theta x) / (x even family)",
    "gen72": "PV int 2 cos(e^{a + b cos theta x} cos(b sin theta x)) cosh(sin(b sin theta x) e^{a + b cos theta x}) / odd family",
    "gen74": "PV int ln((a+1)^2 + b^2 + 2(a+1) b cos theta x) / odd family",
    "gen76": "PV int 2 ln|2 cos(theta x / 2)| / odd family",
    "ex1": "PV int x e^{e^{cos theta x} cos(sin theta x)} sin(sin(sin theta x) e^{cos theta x}) / (1 - x^2)",
    "ex2": "PV int 2 cosh(b atan(theta x)) cos((b/2) ln(1 + theta^2 x^2)) / ((1 - x^2)(9 - x^2))",
    "ex3": "PV int ln^2|tan(theta x/2 - pi/4)| / ((4 - x^2)(16 - x^2))",
}


def _registry() -> dict[str, Formula]:
    out = {}
    for kind, fid in KERNEL_FORMULA.items():
        out[fid] = Formula(fid, _kernel_variants, lambda p: kernel_integrand(p.kind, p.theta, p.order), _DESCRIPTIONS[fid])
    for t in range(1, 7):
        out[f"thm{t}"] = Formula(f"thm{t}", _thm_variants, theorem_integrand, _DESCRIPTIONS[f"thm{t}"])
    for r in range(1, 5):
        out[f"t1r{r}"] = Formula(f"t1r{r}", _t1_variants, table1_integrand, _DESCRIPTIONS[f"t1r{r}"])
    for r in range(1, 7):
        out[f"t2r{r}"] = Formula(
            f"t2r{r}", _t2_variants, lambda p: theorem_integrand(p.theorem_params()), _DESCRIPTIONS[f"t2r{r}"]
        )
    out["rem1"] = Formula("rem1", _rem1_variants, remark1_integrand, _DESCRIPTIONS["rem1"])
    for g in GENERATORS:
        out[g] = Formula(g, _gen_variants, generator_integrand, _DESCRIPTIONS[g])
    for i in (1, 2, 3):
        out[f"ex{i}"] = Formula(f"ex{i}", _ex_variants, example_integrand, _DESCRIPTIONS[f"ex{i}"])
    return out


FORMULAS: dict[str, Formula] = _registry()


def variant_values(params) -> dict[str, complex]:
    """All registered variants of the formula behind ``params``, unsigned."""
    params.validate()
    return {name: complex(fn()) for name, fn in FORMULAS[params.formula_id].variants(params).items()}


def integrand_for(params) -> PVIntegrand:
    return FORMULAS[params.formula_id].integrand(params)


def evaluate(params, mode: str = "audited") -> ClosedFormValue:
    """Closed-form value of any registered formula."""
    if mode not in ("printed", "audited"):
        raise ParameterError(f"unknown mode {mode!r}")
    params.validate()
    fid = params.formula_id
    variants = FORMULAS[fid].variants(params)
    if mode == "printed":
        name, sigma = "printed", 1
    else:
        from .audit import audited_choice

        name, sigma = audited_choice(fid)
    z = sigma * complex(variants[name]())
    return ClosedFormValue(
        float(z.real), abs(z.imag), mode, sigma, fid, None if name == "printed" else name
    )


def theorem_value(p: TheoremParams, mode: str = "audited") -> ClosedFormValue:
    return evaluate(p, mode)


def table1_value(row: int, g: SeriesFunction, theta: float, order: FamilyOrder, mode: str = "audited") -> ClosedFormValue:
    return evaluate(Table1Params(row, g, theta, order), mode)


def table2_value(row: int, f: AnalyticFunction, comb: CombinationParams, mode: str = "audited") -> ClosedFormValue:
    return evaluate(Table2Params(row, f, comb), mode)


def remark1_value(f: AnalyticFunction, beta: float, phi: float, mode: str = "audited") -> ClosedFormValue:
    return evaluate(Remark1Params(f, beta, phi), mode)


def generator_value(gen: str, theta: float, n: int, alpha: float = 0.0, beta: float = 1.0, m: float = 1.0, mode: str = "audited") -> ClosedFormValue:
    return evaluate(GeneratorParams(gen, theta, n, alpha, beta, m), mode)


def example_value(id: int, theta: float, b: float = 1.0, mode: str = "audited") -> ClosedFormValue:  # noqa: A002
    return evaluate(ExampleParams(id, theta, b), mode)
