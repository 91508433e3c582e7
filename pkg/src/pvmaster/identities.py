"""Property suite for the pole-family identities and the sinh machinery.

Each check draws random points and reports the worst relative residual
between two forms of the same quantity.  Rational identities are sampled on
(0.05, 2N + 3) where N is the largest pole order, which covers every pole
interval and the region past the last pole.  The power reduction is sampled
on 1 <= |t| <= 6, where sinh(t)^(2n+1) is not swamped by cancellation.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .kernels import FamilyOrder, PoleProximityError, laplace_sinh, rational_identity_eval, sinh_power_reduction

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    description: str
    samples: int
    worst_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.worst_residual <= self.tol

    def to_dict(self):
        return dict(asdict(self), passed=self.passed)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _rational(identity: str, max_order: int, points: int, rng) -> tuple[int, float]:
    count, worst = 0, 0.0
    ns = range(1 if identity == "even" else 0, max_order + 1)
    ms = range(1, max_order + 1) if identity == "mixed" else (None,)
    for n in ns:
        for m in ms:
            order = FamilyOrder(n, m)
            top = 2 * max(n, m or 0) + 3
            for x in rng.uniform(0.05, top, points):
                try:
                    prod = rational_identity_eval(identity, "product", order, x)
                except PoleProximityError:
                    continue
                worst = max(worst, _rel(prod, rational_identity_eval(identity, "sum", order, x)))
                count += 1
    return count, worst


def _power_reduction(max_order: int, points: int, rng) -> tuple[int, float]:
    count, worst = 0, 0.0
    for n in range(max_order + 1):
        t = rng.uniform(1.0, 6.0, points) * rng.choice((-1.0, 1.0), points)
        for ti in t:
            worst = max(worst, _rel(math.sinh(ti) ** (2 * n + 1), sinh_power_reduction(n, ti)))
            count += 1
    return count, worst


def _laplace(max_order: int) -> tuple[int, float]:
    count, worst = 0, 0.0
    for n in range(max_order + 1):
        for x in (2 * n + 2, 2 * n + 5, 50):
            closed = laplace_sinh(n, x, "closed")
            for form in ("recursive", "sum"):
                worst = max(worst, _rel(closed, laplace_sinh(n, x, form)))
            count += 1
    return count, worst


def run_identity_suite(points: int = 200, max_order: int = 6, seed: int = 0) -> list[IdentityCheck]:
    """Run every identity check; ``points`` random samples per order."""
    rng = np.random.default_rng(seed)
    out = []
    for name, identity, text in (
        ("eq4", "odd", "1/D_odd(x) against its partial-fraction sum"),
        ("eq17", "even", "1/(x D_even(x)) against its partial-fraction sum"),
        ("eq18", "mixed", "1/(D_odd(x) x D_even(x)) against its partial-fraction sum"),
    ):
        count, worst = _rational(identity, max_order, points, rng)
        out.append(IdentityCheck(name, text, count, worst, IDENTITY_TOL))
    count, worst = _power_reduction(max_order, points, rng)
    out.append(IdentityCheck("eq12", "sinh(t)^(2n+1) against its power reduction", count, worst, IDENTITY_TOL))
    count, worst = _laplace(max_order)
    out.append(IdentityCheck("laplace", "Laplace transform of sinh^(2n+1): closed, recursive and sum forms", count, worst, IDENTITY_TOL))
    return out
