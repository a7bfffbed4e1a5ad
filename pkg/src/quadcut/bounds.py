"""Row-sum bound vectors u, v, l over the continuous relaxation.

For row ``i`` the quantity of interest is ``s_i(x) = sum_{j != i} b_ij x_j``.

* ``u_i`` is its maximum over the relaxation,
* ``v_i`` its maximum with ``x_i`` fixed to 0,
* ``l_i`` its minimum with ``x_i`` fixed to 1.

The relaxation is ``[0,1]^n`` intersected with the instance constraints.
With at most one non-box constraint each subproblem is a fractional
knapsack and is solved greedily; otherwise it goes to the simplex code.
When a restriction is empty, ``v_i`` falls back to ``u_i`` and ``l_i`` to
0, and the index is flagged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quadcut.lp import LinearProgram, solve_lp
from quadcut.model import FEAS_TOL, QuadraticInstance


@dataclass(frozen=True, eq=False)
class BoundVectors:
    u: np.ndarray
    v: np.ndarray
    l: np.ndarray
    v_fallback: np.ndarray
    l_fallback: np.ndarray

    @property
    def any_fallback(self) -> bool:
        return bool(self.v_fallback.any() or self.l_fallback.any())


def _greedy_max(p: np.ndarray, a: np.ndarray, op: str | None, cap: float):
    """Maximize ``p.x`` over ``0 <= x <= 1`` with ``a.x op cap``, ``a >= 0``.

    Returns None when infeasible. Ties in the ratio order are broken by
    index, which does not affect the optimal value.
    """
    if op is None:
        return float(np.maximum(p, 0.0).sum())
    total = float(a.sum())
    if op in ("le", "eq") and cap < -FEAS_TOL:
        return None
    if op in ("ge", "eq") and total < cap - FEAS_TOL:
        return None

    free = a == 0
    value = float(np.maximum(p[free], 0.0).sum())
    idx = np.flatnonzero(~free)
    ratio = p[idx] / a[idx]
    order = idx[np.argsort(-ratio, kind="stable")]

    if op == "le":
        room = max(cap, 0.0)
        for j in order:
            if p[j] <= 0 or room <= 0:
                break
            take = min(1.0, room / a[j])
            value += take * p[j]
            room -= take * a[j]
        return value

    # ge/eq: walk the ratio order, filling weight until ``cap`` is met
    # (eq), then keep taking profitable items for ge.
    need = cap
    for j in order:
        if need > 0:
            take = min(1.0, need / a[j])
            value += take * p[j]
            need -= take * a[j]
            if take < 1.0 and op == "ge" and p[j] > 0:
                value += (1.0 - take) * p[j]
        elif op == "ge" and p[j] > 0:
            value += p[j]
        else:
            break
    return value


def _single_row(inst: QuadraticInstance):
    rows = inst.linear_rows()
    if not rows:
        return "box", None
    if len(rows) == 1:
        return "single", rows[0]
    return "multi", None


def _subproblem_greedy(inst, i, sense, fix, row):
    """Optimize ``s_i`` with ``x_i`` either free (fix=None) or fixed."""
    p = inst.B[i].astype(float).copy()
    p[i] = 0.0
    if sense == "min":
        p = -p
    if row is None:
        w, op, cap = np.zeros(inst.n), None, 0.0
    else:
        w, op, cap = row
    if fix is None:
        val = _greedy_max(p, w, op, cap)
    else:
        keep = np.arange(inst.n) != i
        val = _greedy_max(p[keep], w[keep], op, cap - fix * w[i])
    if val is None:
        return None
    return -val if sense == "min" else val


def _subproblem_lp(inst, i, sense, fix):
    n = inst.n
    obj = inst.B[i].astype(float).copy()
    obj[i] = 0.0
    lb = [0.0] * n
    ub = [1.0] * n
    if fix is not None:
        lb[i] = ub[i] = float(fix)
    lp = LinearProgram(
        sense=sense,
        c=list(obj),
        rows=[(list(w), op, rhs) for w, op, rhs in inst.linear_rows()],
        lb=lb,
        ub=ub,
    )
    sol = solve_lp(lp)
    if sol.status != "optimal":
        return None
    return sol.value


def _solve(inst, i, sense, fix, method):
    kind, row = _single_row(inst)
    if method == "lp" or kind == "multi":
        return _subproblem_lp(inst, i, sense, fix)
    return _subproblem_greedy(inst, i, sense, fix, row)


def _check_method(method):
    if method not in ("auto", "lp"):
        raise ValueError(f"method must be 'auto' or 'lp', got {method!r}")


def compute_u(inst: QuadraticInstance, method: str = "auto") -> np.ndarray:
    _check_method(method)
    out = np.empty(inst.n)
    for i in range(inst.n):
        val = _solve(inst, i, "max", None, method)
        if val is None:
            raise ValueError("relaxation is empty")
        out[i] = val
    return out


def _restricted(inst, sense, fix, fallback, method):
    vals = np.empty(inst.n)
    flags = np.zeros(inst.n, dtype=bool)
    for i in range(inst.n):
        val = _solve(inst, i, sense, fix, method)
        if val is None:
            flags[i] = True
            val = fallback[i]
        vals[i] = val
    return vals, flags


def compute_v(inst: QuadraticInstance, method: str = "auto", u: np.ndarray | None = None) -> np.ndarray:
    _check_method(method)
    if u is None:
        u = compute_u(inst, method)
    return _restricted(inst, "max", 0, u, method)[0]


def compute_l(inst: QuadraticInstance, method: str = "auto") -> np.ndarray:
    _check_method(method)
    return _restricted(inst, "min", 1, np.zeros(inst.n), method)[0]


def compute_bounds(inst: QuadraticInstance, method: str = "auto") -> BoundVectors:
    _check_method(method)
    u = compute_u(inst, method)
    v, vflag = _restricted(inst, "max", 0, u, method)
    l, lflag = _restricted(inst, "min", 1, np.zeros(inst.n), method)
    # LP round-off can leave tiny negatives or v_i a hair above u_i.
    u = np.maximum(u, 0.0)
    v = np.clip(v, 0.0, u)
    l = np.maximum(l, 0.0)
    for arr in (u, v, l, vflag, lflag):
        arr.setflags(write=False)
    return BoundVectors(u, v, l, vflag, lflag)
