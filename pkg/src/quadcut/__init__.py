"""Exact solvers for quadratic 0-1 programs ``min x'Bx + c'x, x in X``.

Two cutting-plane algorithms are provided: one over Balas-Mazzola cuts and
one over the strengthened cut family built from restricted row-sum bounds.
"""

from quadcut.bounds import BoundVectors, compute_bounds, compute_l, compute_u, compute_v
from quadcut.cutting_plane import SolveReport, replay, run, upper_bound
from quadcut.linearize import (
    Cut,
    MixedModel,
    ModelKind,
    Variant,
    build_pl1,
    build_pl2,
    build_pl2_prime,
    evaluate_cut,
    make_cut,
    relaxation_bound,
)
from quadcut.lp import LinearProgram, LpSolution, solve_lp
from quadcut.master import MasterProblem, MasterSolution, solve_master, subproblem_lambda
from quadcut.model import (
    Box,
    Cardinality,
    InstanceError,
    Knapsack,
    QuadraticInstance,
    enumerate_feasible,
    is_feasible,
    load_instance,
    objective_value,
    parse_instance,
)
from quadcut.oracle import brute_force, brute_force_mixed

__version__ = "0.1.0"
