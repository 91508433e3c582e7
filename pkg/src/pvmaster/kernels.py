"""Rational pole-family identities and the closed-form kernel integrals.

Three denominator families appear throughout:

* odd:   (1 - x^2)(9 - x^2) ... ((2n+1)^2 - x^2)
* even:  (4 - x^2)(16 - x^2) ... (4n^2 - x^2)   (often with an extra factor x)
* mixed: odd(n) times x * even(m)

Kernel integrals are the principal values over [0, inf) of cos/sin against
these families.  Each kernel has a *printed* closed form plus, where the
printed form needs it, corrected variants; which one is trusted in audited
mode is decided by :mod:`pvmaster.audit` against the quadrature oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .quadrature import PVIntegrand

MAX_ORDER = 8
POLE_GAP = 1e-6

KERNEL_KINDS = ("cos_odd", "xsin_odd", "sin_even", "cos_even", "sin_mixed", "cos_mixed")
KERNEL_FORMULA = {
    "cos_odd": "eq19",
    "xsin_odd": "eq20",
    "sin_even": "eq21",
    "cos_even": "eq22",
    "sin_mixed": "eq23",
    "cos_mixed": "eq25",
}
BASE_FACTS = ("cos_over_a2mx2", "sin_over_x_a2mx2", "xsin_over_a2mx2")


class ParameterError(ValueError):
    pass


class PoleProximityError(ValueError):
    pass


class DivergenceError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyOrder:
    n: int
    m: int | None = None

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and 0 <= self.n <= MAX_ORDER):
            raise ParameterError(f"n must be an integer in [0, {MAX_ORDER}], got {self.n!r}")
        if self.m is not None and not (isinstance(self.m, (int, np.integer)) and 1 <= self.m <= MAX_ORDER):
            raise ParameterError(f"m must be an integer in [1, {MAX_ORDER}], got {self.m!r}")


def odd_poles(n: int) -> list[int]:
    return [2 * j + 1 for j in range(n + 1)]


def even_poles(n: int) -> list[int]:
    return [2 * j for j in range(1, n + 1)]


def _pole_product(poles, x):
    # (p - x)(p + x) keeps full relative accuracy near a pole, unlike p^2 - x^2
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for p in poles:
        out = out * ((p - x) * (p + x))
    return out


def odd_denominator(n: int, x):
    return _pole_product(odd_poles(n), x)


def even_denominator(n: int, x):
    return _pole_product(even_poles(n), x)


# -- rational identities ----------------------------------------------------


def _odd_terms(n: int, X: Fraction) -> Fraction:
    return sum(
        (-1) ** k * math.comb(2 * n + 1, k) * Fraction(2 * n + 1 - 2 * k) / (X * X - (2 * n + 1 - 2 * k) ** 2)
        for k in range(n + 1)
    )


def _odd_sum(n: int, X: Fraction) -> Fraction:
    return Fraction((-1) ** (n + 1), 4**n * math.factorial(2 * n + 1)) * _odd_terms(n, X)


def _even_sum(n: int, X: Fraction) -> Fraction:
    total = math.comb(2 * n, n) / X
    total += sum(
        2 * (-1) ** (k + n + 1) * math.comb(2 * n, k) * X / ((2 * n - 2 * k) ** 2 - X * X) for k in range(n)
    )
    return total / (4**n * math.factorial(2 * n))


def _mixed_sum(n: int, m: int, X: Fraction, mode: str) -> Fraction:
    # the double sum over (k, s) factorises into a k-sum times the odd s-sum
    X2 = X * X
    odd = _odd_terms(n, X)
    first = Fraction((-1) ** (n + 1), 4 ** (m + n) * math.factorial(m) ** 2 * math.factorial(2 * n + 1)) / X
    norm = math.factorial(m) ** 2 if mode == "printed" else math.factorial(2 * m)
    second = Fraction((-1) ** (n + m + 1), 2 ** (2 * m + 2 * n - 1) * norm * math.factorial(2 * n + 1))
    even = sum((-1) ** k * math.comb(2 * m, k) / (X2 - (2 * m - 2 * k) ** 2) for k in range(m))
    return odd * (first + second * X * even)


def rational_identity_eval(identity: str, form: str, order: FamilyOrder, x: float, mode: str = "audited") -> float:
    """Evaluate one side of a pole-family partial-fraction identity.

    ``form="product"`` is the reciprocal pole product, ``form="sum"`` the
    binomial partial-fraction sum.  Beyond the last pole the sum cancels
    heavily, so it is evaluated in exact rational arithmetic on the binary
    value of x and rounded once.  For the mixed family the printed sum
    normalises its cross term by (m!)^2; ``mode="audited"`` uses (2m)!, the
    value that makes the two sides agree.
    """
    if identity not in ("odd", "even", "mixed"):
        raise ParameterError(f"unknown identity {identity!r}")
    if form not in ("product", "sum"):
        raise ParameterError(f"unknown form {form!r}")
    if mode not in ("printed", "audited"):
        raise ParameterError(f"unknown mode {mode!r}")
    n = order.n
    if identity == "mixed" and order.m is None:
        raise ParameterError("mixed identity needs m")
    if identity == "even" and n < 1:
        raise ParameterError("even identity needs n >= 1")
    x = float(x)
    poles: list[int] = []
    if identity in ("odd", "mixed"):
        poles += odd_poles(n)
    if identity == "even":
        poles += [0] + even_poles(n)
    if identity == "mixed":
        poles += [0] + even_poles(order.m)
    if any(abs(abs(x) - p) < POLE_GAP for p in poles):
        raise PoleProximityError(f"x={x} is within {POLE_GAP} of a pole")

    if form == "product":
        if identity == "odd":
            return float(1.0 / odd_denominator(n, x))
        if identity == "even":
            return float(1.0 / (x * even_denominator(n, x)))
        return float(1.0 / (odd_denominator(n, x) * x * even_denominator(order.m, x)))
    X = Fraction(x)
    if identity == "odd":
        return float(_odd_sum(n, X))
    if identity == "even":
        return float(_even_sum(n, X))
    return float(_mixed_sum(n, order.m, X, mode))


def sinh_power_reduction(n: int, t: float) -> float:
    """(1/4^n) sum_k (-1)^k C(2n+1, k) sinh((2n+1-2k) t), i.e. sinh(t)^(2n+1)."""
    FamilyOrder(n)
    if abs(t) > 10:
        raise OverflowError("|t| > 10 risks overflow in sinh((2n+1) t)")
    terms = [(-1) ** k * math.comb(2 * n + 1, k) * math.sinh((2 * n + 1 - 2 * k) * t) for k in range(n + 1)]
    return math.fsum(terms) / 4**n


def laplace_sinh(n: int, x: float, form: str = "closed") -> float:
    """Laplace transform of sinh(t)^(2n+1) at x > 2n+1.

    ``closed`` is the signed factorial over the odd pole product,
    ``recursive`` applies the two-step integration-by-parts reduction to
    the n = 0 base value, and ``sum`` integrates the power reduction term by
    term.  The sum cancels heavily for large x, so it is evaluated in exact
    rational arithmetic on the binary value of x.
    """
    FamilyOrder(n)
    if not x > 2 * n + 1:
        raise DivergenceError(f"integral diverges for x <= {2 * n + 1}")
    if form == "closed":
        return (-1) ** (n + 1) * math.factorial(2 * n + 1) / float(odd_denominator(n, x))
    if form == "recursive":
        value = -1.0 / (1.0 - x * x)
        for j in range(1, n + 1):
            value *= -(2 * j + 1) * (2 * j) / ((2 * j + 1) ** 2 - x * x)
        return value
    if form == "sum":
        X = Fraction(x)
        total = Fraction(0)
        for k in range(n + 1):
            b = 2 * n + 1 - 2 * k
            total += (-1) ** k * math.comb(2 * n + 1, k) * Fraction(b) / (X * X - b * b)
        return float(total / 4**n)
    raise ParameterError(f"unknown form {form!r}")


# -- kernel closed forms -------------------------------------------------------


def _odd_pref(n: int) -> float:
    return (-1) ** (n + 1) * math.pi / (2 ** (2 * n + 1) * math.factorial(2 * n + 1))


def cos_odd_printed(theta, order: FamilyOrder):
    n = order.n
    th = np.asarray(theta, dtype=float)
    acc = sum((-1) ** k * math.comb(2 * n + 1, k) * np.sin(th * (2 * k - 1 - 2 * n)) for k in range(n + 1))
    return _odd_pref(n) * acc


def xsin_odd_printed(theta, order: FamilyOrder):
    n = order.n
    th = np.asarray(theta, dtype=float)
    acc = sum(
        (-1) ** k * math.comb(2 * n + 1, k) * (2 * k - 1 - 2 * n) * np.cos(th * (2 * k - 1 - 2 * n))
        for k in range(n + 1)
    )
    return _odd_pref(n) * acc


def sin_even_printed(theta, order: FamilyOrder):
    n = order.n
    th = np.asarray(theta, dtype=float)
    acc = math.comb(2 * n, n) + 2 * sum(
        (-1) ** (k + n) * math.comb(2 * n, k) * np.cos(th * (2 * n - 2 * k)) for k in range(n)
    )
    return math.pi / (2 ** (2 * n + 1) * math.factorial(2 * n)) * acc


def _cos_even(theta, order: FamilyOrder, flip: bool):
    n = order.n
    th = np.asarray(theta, dtype=float)
    sgn = -1 if flip else 1
    acc = sum(
        (-1) ** (k + n + 1) * math.comb(2 * n, k) * (2 * n - 2 * k) * np.sin(sgn * th * (2 * k - 2 * n))
        for k in range(n)
    )
    return math.pi / (4**n * math.factorial(2 * n)) * acc + 0 * th


def cos_even_printed(theta, order):
    return _cos_even(theta, order, flip=False)


def cos_even_swapped(theta, order):
    return _cos_even(theta, order, flip=True)


def _mixed_prefactors(n: int, m: int, corrected: bool) -> tuple[float, float]:
    base = (-1) ** n * math.pi / (math.factorial(m) ** 2 * math.factorial(2 * n + 1))
    first = base / 2 ** (2 * m + 2 * n + 1)
    second = base / 2 ** (2 * m + 2 * n)
    if corrected:
        second /= math.comb(2 * m, m)
    return first, second


def _sin_mixed(theta, order: FamilyOrder, corrected: bool):
    n, m = order.n, order.m
    th = np.asarray(theta, dtype=float)
    p1, p2 = _mixed_prefactors(n, m, corrected)
    first = sum(
        (-1) ** s * math.comb(2 * n + 1, s) * (1 - np.cos(th * (2 * n + 1 - 2 * s))) / (2 * n + 1 - 2 * s)
        for s in range(n + 1)
    )
    second = 0.0
    for k in range(m):
        a = 2 * m - 2 * k
        for s in range(n + 1):
            b = 2 * n + 1 - 2 * s
            c = (-1) ** (k + m + s + 1) * math.comb(2 * m, k) * math.comb(2 * n + 1, s) * b
            second = second + c * (np.cos(th * a) - np.cos(th * b)) / (a * a - b * b)
    return p1 * first + p2 * second


def _cos_mixed(theta, order: FamilyOrder, corrected: bool):
    n, m = order.n, order.m
    th = np.asarray(theta, dtype=float)
    p1, p2 = _mixed_prefactors(n, m, corrected)
    first = sum((-1) ** s * math.comb(2 * n + 1, s) * np.sin(th * (2 * n + 1 - 2 * s)) for s in range(n + 1))
    second = 0.0
    for k in range(m):
        a = 2 * m - 2 * k
        for s in range(n + 1):
            b = 2 * n + 1 - 2 * s
            c = (-1) ** (k + m + s + 1) * math.comb(2 * m, k) * math.comb(2 * n + 1, s) * b
            second = second + c * (b * np.sin(th * b) - a * np.sin(th * a)) / (a * a - b * b)
    return p1 * first + p2 * second


NORMALIZATION_FIX = "cross-term normalization (2m)! instead of (m!)^2"
ARGUMENT_FIX = "sine argument theta(2n-2k)"

KERNEL_VARIANTS: dict[str, dict[str, Callable]] = {
    "eq19": {"printed": cos_odd_printed},
    "eq20": {"printed": xsin_odd_printed},
    "eq21": {"printed": sin_even_printed},
    "eq22": {"printed": cos_even_printed, ARGUMENT_FIX: cos_even_swapped},
    "eq23": {
        "printed": lambda th, o: _sin_mixed(th, o, False),
        NORMALIZATION_FIX: lambda th, o: _sin_mixed(th, o, True),
    },
    "eq25": {
        "printed": lambda th, o: _cos_mixed(th, o, False),
        NORMALIZATION_FIX: lambda th, o: _cos_mixed(th, o, True),
    },
}


def check_kernel_domain(kind: str, theta, order: FamilyOrder) -> None:
    if kind not in KERNEL_KINDS:
        raise ParameterError(f"unknown kernel kind {kind!r}")
    th = np.asarray(theta, dtype=float)
    if kind.startswith("cos"):
        if np.any(th < 0):
            raise ParameterError(f"{kind} needs theta >= 0")
    elif np.any(th <= 0):
        raise ParameterError(f"{kind} needs theta > 0")
    if kind in ("sin_even", "cos_even") and order.n < 1:
        raise ParameterError(f"{kind} needs n >= 1")
    if kind.endswith("mixed") and order.m is None:
        raise ParameterError(f"{kind} needs m >= 1")


def kernel_value(kind: str, theta, order: FamilyOrder, mode: str = "audited"):
    """Closed-form principal value of a kernel integral.

    Vectorised over ``theta``.  In audited mode the variant and sign chosen
    by the oracle audit are applied; ``mode="printed"`` returns the formula as
    printed.  Use :func:`pvmaster.audit.audit_entry` with ``KERNEL_FORMULA[kind]``
    to read the applied sign factor.
    """
    check_kernel_domain(kind, theta, order)
    fid = KERNEL_FORMULA[kind]
    variants = KERNEL_VARIANTS[fid]
    if mode == "printed":
        out = variants["printed"](theta, order)
    elif mode == "audited":
        from .audit import audited_choice

        variant, sigma = audited_choice(fid)
        out = sigma * variants[variant](theta, order)
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    return float(out) if np.ndim(out) == 0 else out


def base_fact(kind: str, a: float, theta: float) -> float:
    """Single-pole principal values used to build every kernel."""
    if kind not in BASE_FACTS:
        raise ParameterError(f"unknown base fact {kind!r}")
    if not a > 0:
        raise ParameterError("a must be positive")
    if theta < 0 or (theta == 0 and kind != "cos_over_a2mx2"):
        raise ParameterError("theta must be positive (>= 0 for the cosine fact)")
    if kind == "cos_over_a2mx2":
        return math.pi / (2 * a) * math.sin(a * theta)
    if kind == "sin_over_x_a2mx2":
        return math.pi / (2 * a * a) * (1 - math.cos(a * theta))
    return -math.pi / 2 * math.cos(a * theta)


# -- integrands for the oracle ---------------------------------------------------


def kernel_integrand(kind: str, theta: float, order: FamilyOrder) -> PVIntegrand:
    """The raw integrand whose principal value ``kernel_value`` claims.

    The mixed cosine kernel carries no 1/x factor: with it the integral
    would diverge at the origin, and without it the kernel is exactly the
    theta-derivative of the mixed sine kernel.
    """
    check_kernel_domain(kind, theta, order)
    n, m = order.n, order.m
    th = float(theta)
    rate = th if th > 0 else 1.0
    if kind == "cos_odd":
        fn = lambda x: np.cos(th * x) / odd_denominator(n, x)
        poles, deg, removable = odd_poles(n), 2 * n + 2, ()
    elif kind == "xsin_odd":
        fn = lambda x: x * np.sin(th * x) / odd_denominator(n, x)
        poles, deg, removable = odd_poles(n), 2 * n + 1, ()
    elif kind == "sin_even":
        fn = lambda x: np.sin(th * x) / (x * even_denominator(n, x))
        poles, deg, removable = even_poles(n), 2 * n + 1, (0.0,)
    elif kind == "cos_even":
        fn = lambda x: np.cos(th * x) / even_denominator(n, x)
        poles, deg, removable = even_poles(n), 2 * n, ()
    elif kind == "sin_mixed":
        fn = lambda x: np.sin(th * x) / (odd_denominator(n, x) * x * even_denominator(m, x))
        poles, deg, removable = sorted(odd_poles(n) + even_poles(m)), 2 * n + 2 * m + 3, (0.0,)
    else:
        fn = lambda x: np.cos(th * x) / (odd_denominator(n, x) * even_denominator(m, x))
        poles, deg, removable = sorted(odd_poles(n) + even_poles(m)), 2 * n + 2 * m + 2, ()
    return PVIntegrand(fn, tuple(float(p) for p in poles), deg, rate, removable)


def base_fact_integrand(kind: str, a: float, theta: float) -> PVIntegrand:
    if kind not in BASE_FACTS:
        raise ParameterError(f"unknown base fact {kind!r}")
    rate = theta if theta > 0 else 1.0
    if kind == "cos_over_a2mx2":
        return PVIntegrand(lambda x: np.cos(theta * x) / (a * a - x * x), (a,), 2, rate)
    if kind == "sin_over_x_a2mx2":
        return PVIntegrand(lambda x: np.sin(theta * x) / (x * (a * a - x * x)), (a,), 3, rate, (0.0,))
    return PVIntegrand(lambda x: x * np.sin(theta * x) / (a * a - x * x), (a,), 1, rate)
