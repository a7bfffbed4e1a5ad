"""Exact restricted master problem.

The master minimizes ``g(x) = max_t (coeffs_t . x - offset_t) + c . x`` over
the binary feasible set. ``z`` is never searched: for fixed ``x`` its optimal
value is the largest cut. Search is depth-first in index order with
``x_i = 0`` tried first; the last few levels are scored as one block in
lexicographic order, so the first optimum found is the lexicographic
minimum among optimal points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from quadcut.linearize import Cut, Variant
from quadcut.model import FEAS_TOL, QuadraticInstance

# Slack on the pruning test so round-off never discards an optimal leaf.
PRUNE_TOL = 1e-9
TAIL_LEVELS = 6


@dataclass
class MasterProblem:
    inst: QuadraticInstance
    cuts: Sequence[Cut]
    variant: Variant | None = None

    def __post_init__(self):
        if not self.cuts:
            raise ValueError("master problem needs at least one cut")
        kinds = {cut.variant for cut in self.cuts}
        if len(kinds) > 1:
            raise ValueError("cuts of mixed variants in one pool")
        if self.variant is None:
            self.variant = kinds.pop()
        elif Variant(self.variant) not in kinds:
            raise ValueError("pool variant does not match the master variant")


@dataclass
class MasterSolution:
    status: str  # optimal | infeasible
    x: tuple | None = None
    z: float = math.nan
    value: float = math.nan
    nodes: int = 0


def _pool_arrays(cuts):
    C = np.array([cut.coeffs for cut in cuts], dtype=float)
    off = np.array([cut.offset for cut in cuts], dtype=float)
    return C, off


def _finish(inst, C, off, x):
    xf = np.asarray(x, dtype=float)
    z = float((C @ xf - off).max())
    return z, z + float(inst.c @ xf)


def solve_master(mp: MasterProblem) -> MasterSolution:
    inst = mp.inst
    n = inst.n
    C, off = _pool_arrays(mp.cuts)
    c = np.asarray(inst.c, dtype=float)

    # Suffix sums of the most negative contribution free variables can make.
    neg_cut = np.zeros((len(off), n + 1))
    neg_cut[:, :n] = np.cumsum(np.minimum(C, 0.0)[:, ::-1], axis=1)[:, ::-1]
    neg_c = np.zeros(n + 1)
    neg_c[:n] = np.cumsum(np.minimum(c, 0.0)[::-1])[::-1]

    rows = inst.linear_rows()
    W = np.array([w for w, _, _ in rows], dtype=float).reshape(len(rows), n)
    ops = [op for _, op, _ in rows]
    rhs = np.array([r for _, _, r in rows], dtype=float)
    w_suffix = np.zeros((len(rows), n + 1))
    if rows:
        w_suffix[:, :n] = np.cumsum(W[:, ::-1], axis=1)[:, ::-1]

    def reachable(d, load):
        for k, op in enumerate(ops):
            if op in ("le", "eq") and load[k] > rhs[k] + FEAS_TOL:
                return False
            if op in ("ge", "eq") and load[k] + w_suffix[k, d] < rhs[k] - FEAS_TOL:
                return False
        return True

    # The last ``tail`` levels are enumerated as one block per node.
    tail = min(n, TAIL_LEVELS)
    head = n - tail
    S = ((np.arange(1 << tail)[:, None] >> np.arange(tail - 1, -1, -1)) & 1).astype(float)
    tail_cut = C[:, head:] @ S.T
    tail_c = S @ c[head:]
    tail_load = W[:, head:] @ S.T

    best = [math.inf, None]
    nodes = [0]
    x = [0] * n

    def leaves(part, cval, load):
        ok = np.ones(S.shape[0], dtype=bool)
        for k, op in enumerate(ops):
            total = load[k] + tail_load[k]
            if op in ("le", "eq"):
                ok &= total <= rhs[k] + FEAS_TOL
            if op in ("ge", "eq"):
                ok &= total >= rhs[k] - FEAS_TOL
        if not ok.any():
            return
        g = (part[:, None] + tail_cut).max(axis=0) + cval + tail_c
        g[~ok] = math.inf
        k = int(np.argmin(g))
        if g[k] < best[0]:
            best[0] = float(g[k])
            best[1] = tuple(x[:head]) + tuple(int(v) for v in S[k])

    def dfs(d, part, cval, load):
        nodes[0] += 1
        if not reachable(d, load):
            return
        bound = float((part + neg_cut[:, d]).max()) + cval + neg_c[d]
        if bound > best[0] + PRUNE_TOL * max(1.0, abs(best[0])):
            return
        if d == head:
            leaves(part, cval, load)
            return
        x[d] = 0
        dfs(d + 1, part, cval, load)
        x[d] = 1
        dfs(d + 1, part + C[:, d], cval + c[d], load + W[:, d])
        x[d] = 0

    dfs(0, -off, 0.0, np.zeros(len(rows)))
    if best[1] is None:
        return MasterSolution("infeasible", nodes=nodes[0])
    z, value = _finish(inst, C, off, best[1])
    return MasterSolution("optimal", best[1], z, value, nodes[0])


def solve_master_enum(mp: MasterProblem) -> MasterSolution:
    """Plain enumeration of the master; reference for the pruned search."""
    from quadcut.model import feasible_blocks

    inst = mp.inst
    C, off = _pool_arrays(mp.cuts)
    best_val, best_x = math.inf, None
    for pts in feasible_blocks(inst):
        P = pts.astype(float)
        g = (P @ C.T - off).max(axis=1) + P @ inst.c
        k = int(np.argmin(g))
        if g[k] < best_val:
            best_val, best_x = float(g[k]), tuple(int(v) for v in pts[k])
    if best_x is None:
        return MasterSolution("infeasible")
    z, value = _finish(inst, C, off, best_x)
    return MasterSolution("optimal", best_x, z, value)


def subproblem_lambda(x_tilde) -> tuple:
    """Optimal multipliers of SP(x~) over the unit cube: ``lam = x~``."""
    arr = np.asarray(x_tilde)
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("x~ must be binary")
    return tuple(int(v) for v in arr)


def subproblem_objective(inst: QuadraticInstance, u, x_tilde) -> np.ndarray:
    """Coefficients of ``lam`` in SP(x~): ``s_i(x~) - u_i + u_i x~_i``."""
    B = np.array(inst.B, dtype=float)
    np.fill_diagonal(B, 0.0)
    xt = np.asarray(x_tilde, dtype=float)
    u = np.asarray(u, dtype=float)
    return B @ xt - u + u * xt
