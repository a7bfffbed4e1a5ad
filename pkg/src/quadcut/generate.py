"""Seeded random instances.

Draws come from numpy's PCG64 bit generator (``numpy.random.Generator``
seeded with ``PCG64(seed)``), in this fixed order: the off-diagonal
sparsity mask (``random((n, n)) < density``), the entry values
(``uniform(0, b_max, (n, n))``), ``c`` (``uniform(lo, hi, n)``), then
knapsack weights (``uniform(1, 10, n)``) when a knapsack is requested.
"""

from __future__ import annotations

import math

import numpy as np

from quadcut.model import Box, Cardinality, Knapsack, QuadraticInstance

KNAP_WEIGHT_RANGE = (1.0, 10.0)


def parse_constraint_spec(spec: str):
    """``box``, ``card:<op>:<k|half>`` or ``knap:<le|ge>:<ratio>``.

    ``half`` means ``ceil(n/2)``; a knapsack capacity is ``ratio`` times the
    total weight. Returns a factory ``(n, rng) -> constraint``.
    """
    parts = spec.split(":")
    kind = parts[0]
    if kind == "box" and len(parts) == 1:
        return lambda n, rng: Box()
    if kind == "card" and len(parts) == 3 and parts[1] in ("le", "ge", "eq"):
        op, k = parts[1], parts[2]
        if k == "half":
            return lambda n, rng: Cardinality(op, math.ceil(n / 2))
        try:
            kval = int(k)
        except ValueError:
            raise ValueError(f"bad cardinality {k!r} in {spec!r}") from None
        return lambda n, rng: Cardinality(op, kval)
    if kind == "knap" and len(parts) == 3 and parts[1] in ("le", "ge"):
        op = parts[1]
        try:
            ratio = float(parts[2])
        except ValueError:
            raise ValueError(f"bad knapsack ratio {parts[2]!r} in {spec!r}") from None

        def knap(n, rng):
            w = rng.uniform(*KNAP_WEIGHT_RANGE, n)
            return Knapsack(tuple(float(v) for v in w), op, float(ratio * w.sum()))

        return knap
    raise ValueError(f"invalid constraint spec {spec!r}")


def generate(
    n: int,
    density: float,
    b_max: float,
    c_range=(-10.0, 10.0),
    constraint: str = "box",
    seed: int = 0,
) -> QuadraticInstance:
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    if b_max < 0:
        raise ValueError("b_max must be nonnegative")
    lo, hi = c_range
    if lo > hi:
        raise ValueError("c range is reversed")
    make_con = parse_constraint_spec(constraint)
    rng = np.random.Generator(np.random.PCG64(seed))
    mask = rng.random((n, n)) < density
    B = rng.uniform(0.0, b_max, (n, n)) * mask
    np.fill_diagonal(B, 0.0)
    c = rng.uniform(lo, hi, n)
    con = make_con(n, rng)
    cons = () if isinstance(con, Box) else (con,)
    return QuadraticInstance(B, c, cons)
