"""Brute-force ground truth.

Depends only on the model module (plus the MixedModel data it is handed),
so it stays independent of the solver paths it checks.
"""

from __future__ import annotations

import math

import numpy as np

from quadcut.model import DimensionTooLarge, QuadraticInstance, feasible_blocks


def brute_force(inst: QuadraticInstance, limit: int = 25):
    """Return ``(value, point)`` minimizing the objective over X, or None if X is empty.

    Ties go to the lexicographically smallest point.
    """
    B = np.asarray(inst.B, dtype=float)
    c = np.asarray(inst.c, dtype=float)
    best_val, best_x = math.inf, None
    for pts in feasible_blocks(inst, limit):
        P = pts.astype(float)
        vals = np.einsum("ki,ij,kj->k", P, B, P) + P @ c
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_x = float(vals[k]), tuple(int(v) for v in pts[k])
    if best_x is None:
        return None
    return best_val, best_x


def brute_force_mixed(model, inst: QuadraticInstance, limit: int = 15) -> float:
    """Optimum of a mixed linearization with ``x`` restricted to X.

    For fixed ``x`` each continuous variable sits at the largest of its
    row lower bounds and 0. Returns ``inf`` when X is empty.
    """
    if inst.n > limit:
        raise DimensionTooLarge(f"n={inst.n} exceeds mixed enumeration limit {limit}")
    best = math.inf
    for pts in feasible_blocks(inst, limit):
        P = pts.astype(float)
        # (k, n, 2): lower bounds for every point, row and piece.
        lows = np.einsum("iqj,kj->kiq", model.row_coeffs, P) + model.row_consts
        w = np.maximum(lows.max(axis=2), 0.0)
        vals = w.sum(axis=1) + P @ model.x_obj
        best = min(best, float(vals.min()))
    return best
