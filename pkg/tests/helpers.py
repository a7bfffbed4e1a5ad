"""Independent oracles and fixtures shared by the test modules."""

import itertools
from pathlib import Path

import numpy as np

from quadcut.generate import generate

DATA = Path(__file__).parent / "data"


def lp_vertex_opt(sense, c, rows, lb, ub, tol=1e-9):
    """Optimize over a bounded polytope by enumerating its vertices.

    Every vertex is the solution of ``nvar`` linearly independent active
    constraints drawn from the rows and the (finite) variable bounds.
    Returns None if no feasible vertex exists.
    """
    c = np.asarray(c, dtype=float)
    nvar = len(c)
    planes = [(np.asarray(a, dtype=float), float(b)) for a, _, b in rows]
    for j in range(nvar):
        e = np.zeros(nvar)
        e[j] = 1.0
        planes.append((e, float(lb[j])))
        planes.append((e, float(ub[j])))

    def feasible(x):
        if np.any(x < np.asarray(lb) - tol) or np.any(x > np.asarray(ub) + tol):
            return False
        for a, rel, b in rows:
            lhs = float(np.dot(a, x))
            if rel == "le" and lhs > b + tol:
                return False
            if rel == "ge" and lhs < b - tol:
                return False
            if rel == "eq" and abs(lhs - b) > tol:
                return False
        return True

    best = None
    for combo in itertools.combinations(range(len(planes)), nvar):
        A = np.array([planes[k][0] for k in combo])
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        x = np.linalg.solve(A, np.array([planes[k][1] for k in combo]))
        if not feasible(x):
            continue
        val = float(c @ x)
        if best is None or (val < best if sense == "min" else val > best):
            best = val
    return best


def row_sum_oracle(inst, i, sense, fix=None):
    """Extreme value of ``sum_{j != i} b_ij x_j`` over the relaxation by vertex enumeration."""
    n = inst.n
    obj = np.array(inst.B[i], dtype=float)
    obj[i] = 0.0
    lb, ub = [0.0] * n, [1.0] * n
    if fix is not None:
        lb[i] = ub[i] = float(fix)
    rows = [(w, op, rhs) for w, op, rhs in inst.linear_rows()]
    return lp_vertex_opt(sense, obj, rows, lb, ub)


def quad(inst, x):
    """Quadratic term computed by explicit double loop."""
    n = inst.n
    return sum(inst.B[i][j] * x[i] * x[j] for i in range(n) for j in range(n) if i != j)


CLASSES = ("box", "card", "knap")


def class_spec(cls, n):
    return {"box": "box", "card": "card:eq:half", "knap": "knap:le:0.5"}[cls]


def random_instance(seed, n, density, cls, b_max=10.0):
    return generate(n, density, b_max, (-10.0, 10.0), class_spec(cls, n), seed)
