"""Dense two-phase tableau simplex with Bland's anti-cycling rule.

Sized for the small continuous programs used to price bound vectors and
to compute relaxation lower bounds; no attempt is made at sparsity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-9
MAX_ITER = 10_000

INF = math.inf


class LpIterationLimit(RuntimeError):
    """The simplex iteration cap was hit (cycling protection failed)."""


@dataclass
class LinearProgram:
    """``sense c'x`` subject to ``rows`` and ``lb <= x <= ub``.

    Each row is ``(coefficients, relation, rhs)`` with relation one of
    ``"le"``, ``"ge"``, ``"eq"``. Infinite bounds mean unbounded.
    """

    sense: str
    c: list
    rows: list = field(default_factory=list)
    lb: list | None = None
    ub: list | None = None

    def __post_init__(self):
        nvar = len(self.c)
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if self.lb is None:
            self.lb = [0.0] * nvar
        if self.ub is None:
            self.ub = [INF] * nvar
        if len(self.lb) != nvar or len(self.ub) != nvar:
            raise ValueError("bound vectors must match variable count")
        for lo, hi in zip(self.lb, self.ub):
            if lo > hi:
                raise ValueError(f"lower bound {lo} exceeds upper bound {hi}")
        for coeffs, rel, _ in self.rows:
            if len(coeffs) != nvar:
                raise ValueError("row coefficient length must equal variable count")
            if rel not in ("le", "ge", "eq"):
                raise ValueError(f"unknown relation {rel!r}")

    @property
    def nvar(self) -> int:
        return len(self.c)


@dataclass
class LpSolution:
    status: str  # optimal | infeasible | unbounded
    value: float = math.nan
    x: np.ndarray | None = None
    iterations: int = 0


def _pivot(T: np.ndarray, r: int, k: int) -> None:
    T[r] /= T[r, k]
    col = T[:, k].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _simplex(T: np.ndarray, basis: list, ncols: int, budget: list) -> str:
    """Run Bland-rule primal simplex on tableau ``T`` (objective in last row).

    Only the first ``ncols`` columns may enter. ``budget`` is a one-element
    list holding remaining iterations, shared across phases.
    """
    m = T.shape[0] - 1
    while True:
        obj = T[-1, :ncols]
        entering = np.flatnonzero(obj < -PIVOT_TOL)
        if entering.size == 0:
            return "optimal"
        k = int(entering[0])
        col = T[:m, k]
        rows = np.flatnonzero(col > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        r = min(ties, key=lambda i: basis[i])
        if budget[0] <= 0:
            raise LpIterationLimit(f"simplex exceeded {MAX_ITER} iterations")
        budget[0] -= 1
        _pivot(T, int(r), k)
        basis[r] = k


def solve_lp(lp: LinearProgram, max_iter: int = MAX_ITER) -> LpSolution:
    nvar = lp.nvar
    sign = 1.0 if lp.sense == "min" else -1.0
    c = sign * np.asarray(lp.c, dtype=float)

    # Map each original variable onto nonnegative standard-form columns:
    # x = shift + sum(mult * col).
    cols: list[list[tuple[int, float]]] = []
    shift = np.zeros(nvar)
    ncol = 0
    extra_rows = []
    for j in range(nvar):
        lo, hi = float(lp.lb[j]), float(lp.ub[j])
        if math.isfinite(lo):
            shift[j] = lo
            cols.append([(ncol, 1.0)])
            if math.isfinite(hi):
                extra_rows.append((ncol, hi - lo))
            ncol += 1
        elif math.isfinite(hi):
            shift[j] = hi
            cols.append([(ncol, -1.0)])
            ncol += 1
        else:
            cols.append([(ncol, 1.0), (ncol + 1, -1.0)])
            ncol += 2

    def expand(coeffs):
        a = np.zeros(ncol)
        for j, cj in enumerate(coeffs):
            if cj:
                for k, mult in cols[j]:
                    a[k] += cj * mult
        return a

    A_rows, rels, rhs = [], [], []
    for coeffs, rel, b in lp.rows:
        coeffs = np.asarray(coeffs, dtype=float)
        A_rows.append(expand(coeffs))
        rels.append(rel)
        rhs.append(float(b) - float(coeffs @ shift))
    for k, width in extra_rows:
        a = np.zeros(ncol)
        a[k] = 1.0
        A_rows.append(a)
        rels.append("le")
        rhs.append(width)
    cost = expand(c)

    m = len(A_rows)
    nslack = sum(1 for r in rels if r != "eq")
    A = np.zeros((m, ncol + nslack))
    b = np.zeros(m)
    slack_of = [-1] * m
    s = ncol
    for i in range(m):
        A[i, :ncol] = A_rows[i]
        b[i] = rhs[i]
        if rels[i] == "le":
            A[i, s] = 1.0
            slack_of[i] = s
            s += 1
        elif rels[i] == "ge":
            A[i, s] = -1.0
            slack_of[i] = s
            s += 1
        if b[i] < 0:
            A[i] *= -1.0
            b[i] = -b[i]
    nreal = ncol + nslack

    # Artificials only for rows without a usable +1 slack.
    basis = [-1] * m
    art_rows = []
    for i in range(m):
        k = slack_of[i]
        if k >= 0 and A[i, k] == 1.0:
            basis[i] = k
        else:
            art_rows.append(i)
    nart = len(art_rows)
    width = nreal + nart
    T = np.zeros((m + 1, width + 1))
    T[:m, :nreal] = A
    T[:m, -1] = b
    for a, i in enumerate(art_rows):
        T[i, nreal + a] = 1.0
        basis[i] = nreal + a
    budget = [max_iter]

    if nart:
        T[-1, nreal:width] = 1.0
        for i in art_rows:
            T[-1] -= T[i]
        _simplex(T, basis, width, budget)
        if -T[-1, -1] > FEAS_TOL * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpSolution("infeasible", iterations=max_iter - budget[0])
        # Drive zero-level artificials out of the basis or drop redundant rows.
        keep = []
        for i in range(m):
            if basis[i] >= nreal:
                cand = np.flatnonzero(np.abs(T[i, :nreal]) > PIVOT_TOL)
                if cand.size:
                    _pivot(T, i, int(cand[0]))
                    basis[i] = int(cand[0])
                    keep.append(i)
            else:
                keep.append(i)
        T = np.vstack([T[keep], T[-1:]])
        basis = [basis[i] for i in keep]
        T = np.delete(T, np.s_[nreal:width], axis=1)
        m = len(keep)

    T[-1, :] = 0.0
    T[-1, :ncol] = cost
    for i, k in enumerate(basis):
        if T[-1, k] != 0.0:
            T[-1] -= T[-1, k] * T[i]
    status = _simplex(T, basis, nreal, budget)
    iters = max_iter - budget[0]
    if status == "unbounded":
        return LpSolution("unbounded", iterations=iters)

    z = np.zeros(nreal)
    for i, k in enumerate(basis):
        z[k] = T[i, -1]
    x = shift.copy()
    for j in range(nvar):
        for k, mult in cols[j]:
            x[j] += mult * z[k]
    value = float(np.asarray(lp.c, dtype=float) @ x)
    return LpSolution("optimal", value, x, iters)
