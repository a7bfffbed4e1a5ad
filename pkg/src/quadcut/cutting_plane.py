"""Cutting-plane loop over BML or improved cuts.

Each iteration solves the restricted master for a lower bound and a point
``x~``, evaluates ``x~`` for an upper bound, and (unless the bounds meet)
adds the cut generated by ``lam = x~``. The pool is seeded with the
all-zeros cut ``z >= 0`` (``z >= l.x`` for the improved family).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

from quadcut.bounds import BoundVectors, compute_bounds
from quadcut.linearize import Cut, Variant, make_cut
from quadcut.master import MasterProblem, solve_master, subproblem_lambda
from quadcut.model import QuadraticInstance, objective_value

log = logging.getLogger(__name__)

DEFAULT_EPS = 1e-9


class DuplicateLambdaError(AssertionError):
    """A generating vector reappeared before termination."""


@dataclass
class TraceRow:
    iter: int
    lb: float
    ub: float
    cuts: int
    xtilde: tuple

    @property
    def gap(self) -> float:
        return self.ub - self.lb


@dataclass
class MasterState:
    pool: list = field(default_factory=list)
    r: int = 0
    lb_trace: list = field(default_factory=list)
    ub_trace: list = field(default_factory=list)
    incumbent: tuple | None = None
    incumbent_value: float = math.inf
    seen: set = field(default_factory=set)
    rows: list = field(default_factory=list)

    def add_cut(self, cut: Cut) -> None:
        if cut.lam in self.seen:
            raise DuplicateLambdaError(f"lambda {cut.lam} generated twice")
        self.seen.add(cut.lam)
        self.pool.append(cut)


@dataclass
class SolveReport:
    variant: Variant
    status: str  # converged | iteration-cap | infeasible
    x: tuple | None
    value: float
    iterations: int
    lb_trace: list
    ub_trace: list
    trace: list
    lambdas: list
    bounds: BoundVectors | None = None

    @property
    def gap(self) -> float:
        if not self.lb_trace:
            return math.nan
        return self.ub_trace[-1] - self.lb_trace[-1]


def upper_bound(inst: QuadraticInstance, x_tilde, state: MasterState | None = None) -> float:
    """Objective at ``x~``; updates the incumbent of ``state`` if it improves."""
    val = objective_value(inst, x_tilde)
    if state is not None and val < state.incumbent_value:
        state.incumbent_value = val
        state.incumbent = tuple(int(v) for v in x_tilde)
    return val


def run(
    inst: QuadraticInstance,
    variant="bml",
    eps: float = DEFAULT_EPS,
    max_iter: int | None = None,
    bounds: BoundVectors | None = None,
) -> SolveReport:
    variant = Variant(variant)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    if max_iter is None:
        max_iter = (1 << min(inst.n, 60)) + 1
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    if bounds is None:
        bounds = compute_bounds(inst)

    state = MasterState()
    state.add_cut(make_cut(variant, [0] * inst.n, inst, bounds))
    status = "iteration-cap"
    while state.r < max_iter:
        state.r += 1
        sol = solve_master(MasterProblem(inst, state.pool, variant))
        if sol.status == "infeasible":
            status = "infeasible"
            break
        lb = sol.value
        upper_bound(inst, sol.x, state)
        ub = state.incumbent_value
        state.lb_trace.append(lb)
        state.ub_trace.append(ub)
        state.rows.append(TraceRow(state.r, lb, ub, len(state.pool), sol.x))
        log.debug("iter %d lb=%.12g ub=%.12g x=%s", state.r, lb, ub, sol.x)
        if ub - lb <= eps:
            status = "converged"
            break
        state.add_cut(make_cut(variant, subproblem_lambda(sol.x), inst, bounds))

    return SolveReport(
        variant=variant,
        status=status,
        x=state.incumbent,
        value=state.incumbent_value if state.incumbent is not None else math.nan,
        iterations=state.r,
        lb_trace=state.lb_trace,
        ub_trace=state.ub_trace,
        trace=state.rows,
        lambdas=[cut.lam for cut in state.pool],
        bounds=bounds,
    )


def replay(
    inst: QuadraticInstance,
    variant,
    lambdas: Iterable,
    bounds: BoundVectors | None = None,
) -> list[float]:
    """Master values when the pool is grown from a fixed sequence of vectors.

    ``lambdas`` lists the generating vectors after the seed cut; the value
    at position ``r`` uses the seed plus the first ``r`` of them. Used to
    compare the two cut families on identical pools.
    """
    variant = Variant(variant)
    if bounds is None:
        bounds = compute_bounds(inst)
    pool = [make_cut(variant, [0] * inst.n, inst, bounds)]
    values = [solve_master(MasterProblem(inst, pool, variant)).value]
    for lam in lambdas:
        pool.append(make_cut(variant, lam, inst, bounds))
        values.append(solve_master(MasterProblem(inst, pool, variant)).value)
    return values
