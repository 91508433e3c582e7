"""Built-in verification suites."""

from __future__ import annotations

import itertools

Z = {"name": "power", "params": {"m": 1}}
Z2 = {"name": "power", "params": {"m": 2}}
EXP = {"name": "exp"}
SINH = {"name": "sinh"}
COS_EXP = {"name": "cos_exp"}
LOG1P = {"name": "log1p"}
EXP_EXP = {"name": "exp_exp"}

THEOREM_ORDERS = {
    1: [(n, None) for n in (0, 1, 2)],
    2: [(n, None) for n in (0, 1, 2)],
    3: [(n, None) for n in (1, 2)],
    4: [(n, None) for n in (1, 2)],
    5: [(n, m) for n in (0, 1, 2) for m in (1, 2)],
    6: [(n, m) for n in (0, 1, 2) for m in (1, 2)],
}


def _theorem_case(t, f, alpha, beta, theta, n, m=None):
    case = {"kind": "theorem", "id": t, "f": f, "alpha": alpha, "beta": beta, "theta": theta, "n": n}
    if m is not None:
        case["m"] = m
    return case


def smoke() -> dict:
    """Six theorems with f = z and f = exp at theta = 1."""
    cases = []
    for t in range(1, 7):
        n, m = (1, None) if t in (3, 4) else (0, 1 if t >= 5 else None)
        for f in (Z, EXP):
            cases.append(_theorem_case(t, f, 0.0, 1.0, 1.0, n, m))
    return {"name": "smoke", "mode": "audited", "cases": cases}


def theorem_grid() -> dict:
    """Every theorem over the function catalog, orders, centers and radii."""
    cases = []
    funcs = [(f, b) for f in (Z, Z2, EXP, SINH, COS_EXP, EXP_EXP) for b in (0.5, 1.0)] + [(LOG1P, 0.5)]
    for (f, beta), alpha, theta in itertools.product(funcs, (0.0, 0.3), (0.5, 1.3)):
        for t, orders in THEOREM_ORDERS.items():
            for n, m in orders:
                cases.append(_theorem_case(t, f, alpha, beta, theta, n, m))
    return {"name": "theorems", "mode": "audited", "cases": cases}


def full() -> dict:
    """One or more cases for every formula family."""
    cases = []
    for kind in ("cos_odd", "xsin_odd", "sin_even", "cos_even", "sin_mixed", "cos_mixed"):
        ns = (1, 2) if kind in ("sin_even", "cos_even") else (0, 2)
        m = 2 if kind.endswith("mixed") else None
        for n in ns:
            case = {"kind": "kernel", "id": kind, "theta": [0.7, 1.9], "n": n}
            if m:
                case["m"] = m
            cases.append(case)
    for t, orders in THEOREM_ORDERS.items():
        n, m = orders[-1]
        cases.append(_theorem_case(t, EXP, 0.3, 0.5, [0.5, 1.3], n, m))
        cases.append(_theorem_case(t, LOG1P, 0.0, 0.5, 1.3, n, m))
    for row, (n, m) in {1: (1, None), 2: (1, None), 3: (2, None), 4: (1, 2)}.items():
        case = {"kind": "table1", "id": row, "M": [0.3, 1.0, -0.5, 0.25], "theta": [0.6, 1.4], "n": n}
        if m:
            case["m"] = m
        cases.append(case)
    for row in range(1, 7):
        if row <= 2:
            cases.append({"kind": "table2", "id": row, "f": EXP, "alpha": 0.0, "beta": 1.0, "theta": [0.6, 1.4]})
        else:
            cases.append({"kind": "table2", "id": row, "f": COS_EXP, "alpha": 0.3, "beta": 0.5, "theta": [0.6, 1.4]})
    cases.append({"kind": "remark", "f": EXP, "beta": 0.5, "theta": [0.4, 1.1]})
    for gen in ("gen61", "gen63"):
        cases.append({"kind": "generator", "id": gen, "theta": [0.6, 1.4], "n": 1, "m": 1.5})
    for gen in ("gen64", "gen66", "gen68", "gen72"):
        cases.append({"kind": "generator", "id": gen, "theta": [0.6, 1.4], "n": 1, "alpha": 0.3, "beta": 0.5})
    cases.append({"kind": "generator", "id": "gen70", "theta": [0.6, 1.4], "n": 2, "alpha": 0.3, "beta": 0.5})
    cases.append({"kind": "generator", "id": "gen74", "theta": [0.6, 1.4], "n": 1, "alpha": 0.3, "beta": 0.6})
    cases.append({"kind": "generator", "id": "gen76", "theta": 1.2, "n": 1})
    cases.append({"kind": "example", "id": 1, "theta": [0.6, 1.2]})
    cases.append({"kind": "example", "id": 2, "theta": [0.6, 1.2], "b": 0.7})
    cases.append({"kind": "example", "id": 3, "theta": 1.2})
    return {"name": "full", "mode": "audited", "cases": cases}


SUITES = {"smoke": smoke, "full": full, "theorems": theorem_grid}


def get_suite(name: str) -> dict:
    try:
        return SUITES[name]()
    except KeyError:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}") from None
