"""Mixed 0-1 linearizations and the cut families derived from them.

Each model has one continuous variable per row ``i`` bounded below by two
affine functions of ``x``::

    PL1:   y_i >= s_i(x) + u_i x_i - u_i,          y_i >= 0
    PL2:   y_i >= s_i(x) + v_i x_i - v_i,          y_i >= l_i x_i
    PL2':  t_i >= s_i(x) + (v_i - l_i) x_i - v_i,  t_i >= 0

where ``s_i(x) = sum_{j != i} b_ij x_j``. PL2' is PL2 under
``t_i = y_i - l_i x_i`` and carries ``l_i + c_i`` on ``x_i`` in the objective.

Cuts are rows ``z >= coeffs . x - offset`` generated by a binary vector
``lam``. BML cuts come from PL1; IMPROVED cuts come from PL2' and already
include the ``+ l_i`` shift so both families share the master objective
``z + c.x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from quadcut.bounds import BoundVectors
from quadcut.lp import LinearProgram, solve_lp
from quadcut.model import QuadraticInstance


class Variant(str, Enum):
    BML = "bml"
    IMPROVED = "improved"


class ModelKind(str, Enum):
    PL1 = "pl1"
    PL2 = "pl2"
    PL2PRIME = "pl2prime"


@dataclass(frozen=True, eq=False)
class MixedModel:
    """Continuous variable ``i`` must satisfy ``w_i >= row_coeffs[i, k] . x + row_consts[i, k]``
    for ``k`` in {0, 1}; objective is ``sum_i w_i + x_obj . x``."""

    kind: ModelKind
    row_coeffs: np.ndarray  # (n, 2, n)
    row_consts: np.ndarray  # (n, 2)
    x_obj: np.ndarray

    @property
    def n(self) -> int:
        return len(self.x_obj)

    def row_lower(self, x) -> np.ndarray:
        """Per-row lower bounds ``(n, 2)`` on the continuous variables at ``x``."""
        return self.row_coeffs @ np.asarray(x, dtype=float) + self.row_consts


def _offdiag(inst: QuadraticInstance) -> np.ndarray:
    B = np.array(inst.B, dtype=float)
    np.fill_diagonal(B, 0.0)
    return B


def _build(inst, kind, diag_big, const_big, diag_small, x_obj):
    n = inst.n
    coeffs = np.zeros((n, 2, n))
    consts = np.zeros((n, 2))
    B = _offdiag(inst)
    idx = np.arange(n)
    coeffs[:, 0, :] = B
    coeffs[idx, 0, idx] = diag_big
    consts[:, 0] = -const_big
    coeffs[idx, 1, idx] = diag_small
    return MixedModel(kind, coeffs, consts, np.asarray(x_obj, dtype=float))


def build_pl1(inst: QuadraticInstance, bounds: BoundVectors) -> MixedModel:
    return _build(inst, ModelKind.PL1, bounds.u, bounds.u, 0.0, inst.c)


def build_pl2(inst: QuadraticInstance, bounds: BoundVectors) -> MixedModel:
    return _build(inst, ModelKind.PL2, bounds.v, bounds.v, bounds.l, inst.c)


def build_pl2_prime(inst: QuadraticInstance, bounds: BoundVectors) -> MixedModel:
    return _build(inst, ModelKind.PL2PRIME, bounds.v - bounds.l, bounds.v, 0.0, bounds.l + inst.c)


BUILDERS = {
    ModelKind.PL1: build_pl1,
    ModelKind.PL2: build_pl2,
    ModelKind.PL2PRIME: build_pl2_prime,
}


def relaxation_lp(inst: QuadraticInstance, model: MixedModel) -> LinearProgram:
    """Continuous relaxation: ``x`` in the relaxed feasible set, ``w`` free.

    Variables are ordered ``x_0..x_{n-1}, w_0..w_{n-1}``.
    """
    n = inst.n
    rows = []
    for i in range(n):
        for k in range(2):
            a = np.zeros(2 * n)
            a[:n] = -model.row_coeffs[i, k]
            a[n + i] = 1.0
            rows.append((a, "ge", float(model.row_consts[i, k])))
    for w, op, rhs in inst.linear_rows():
        a = np.zeros(2 * n)
        a[:n] = w
        rows.append((a, op, rhs))
    c = np.concatenate([model.x_obj, np.ones(n)])
    lb = [0.0] * n + [-np.inf] * n
    ub = [1.0] * n + [np.inf] * n
    return LinearProgram("min", list(c), rows, lb, ub)


def relaxation_bound(inst: QuadraticInstance, bounds: BoundVectors, variant="pl1") -> float:
    """Optimal value of the continuous relaxation of PL1, PL2 or PL2'."""
    kind = ModelKind(variant)
    model = BUILDERS[kind](inst, bounds)
    sol = solve_lp(relaxation_lp(inst, model))
    if sol.status != "optimal":
        raise RuntimeError(f"relaxation LP returned status {sol.status}")
    return sol.value


@dataclass(frozen=True, eq=False)
class Cut:
    variant: Variant
    lam: tuple
    coeffs: np.ndarray
    offset: float

    def __call__(self, x) -> float:
        return evaluate_cut(self, x)


def _as_lambda(lam, n: int) -> tuple:
    arr = np.asarray(lam)
    if arr.shape != (n,):
        raise ValueError(f"lambda must have length {n}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("lambda must be a binary vector")
    return tuple(int(v) for v in arr)


def make_cut(variant, lam, inst: QuadraticInstance, bounds: BoundVectors) -> Cut:
    variant = Variant(variant)
    lam_t = _as_lambda(lam, inst.n)
    lam_f = np.asarray(lam_t, dtype=float)
    transposed = _offdiag(inst).T @ lam_f
    if variant is Variant.BML:
        coeffs = transposed + lam_f * bounds.u
        offset = float(lam_f @ bounds.u)
    else:
        coeffs = transposed + lam_f * (bounds.v - bounds.l) + bounds.l
        offset = float(lam_f @ bounds.v)
    coeffs.setflags(write=False)
    return Cut(variant, lam_t, coeffs, offset)


def evaluate_cut(cut: Cut, x) -> float:
    """``coeffs . x - offset``."""
    return float(cut.coeffs @ np.asarray(x, dtype=float) - cut.offset)
