"""Quadratic 0-1 problem instances: data model, file format, evaluation.

An instance is ``min x'Bx + c'x`` over ``x`` in ``X``, where ``B`` is
nonnegative with a zero diagonal and ``X`` is the set of binary points
satisfying a small list of linear side constraints.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

import numpy as np

FEAS_TOL = 1e-9

_OPS = ("le", "ge", "eq")


class InstanceError(ValueError):
    """Raised for malformed or invalid instances."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Box:
    """No side constraint beyond 0 <= x <= 1."""


@dataclass(frozen=True)
class Cardinality:
    op: str
    k: int


@dataclass(frozen=True)
class Knapsack:
    weights: tuple
    op: str
    capacity: float


Constraint = Union[Box, Cardinality, Knapsack]


def constraint_row(con: Constraint, n: int):
    """Return ``(weights, op, rhs)`` for a linear constraint, or None for Box."""
    if isinstance(con, Box):
        return None
    if isinstance(con, Cardinality):
        return np.ones(n), con.op, float(con.k)
    return np.asarray(con.weights, dtype=float), con.op, float(con.capacity)


def _admits(lhs, op: str, rhs: float):
    if op == "le":
        return lhs <= rhs + FEAS_TOL
    if op == "ge":
        return lhs >= rhs - FEAS_TOL
    return np.abs(lhs - rhs) <= FEAS_TOL


@dataclass(frozen=True, eq=False)
class QuadraticInstance:
    B: np.ndarray
    c: np.ndarray
    constraints: tuple = field(default_factory=tuple)
    name: str = ""

    def __post_init__(self):
        B = np.array(self.B, dtype=float)
        c = np.array(self.c, dtype=float)
        if B.ndim != 2 or B.shape[0] != B.shape[1]:
            raise InstanceError("B must be square")
        n = B.shape[0]
        if n < 1:
            raise InstanceError("n must be positive")
        if c.shape != (n,):
            raise InstanceError(f"c must have length {n}")
        if not (np.all(np.isfinite(B)) and np.all(np.isfinite(c))):
            raise InstanceError("non-finite coefficient")
        if np.any(np.diag(B) != 0):
            raise InstanceError("nonzero diagonal")
        if np.any(B < 0):
            raise InstanceError("negative B entry")
        for con in self.constraints:
            _check_constraint(con, n)
        B.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def n(self) -> int:
        return self.B.shape[0]

    def linear_rows(self):
        """Non-box constraints as ``(weights, op, rhs)`` triples."""
        rows = (constraint_row(con, self.n) for con in self.constraints)
        return [r for r in rows if r is not None]

    def __eq__(self, other):
        if not isinstance(other, QuadraticInstance):
            return NotImplemented
        return (
            np.array_equal(self.B, other.B)
            and np.array_equal(self.c, other.c)
            and self.constraints == other.constraints
        )

    __hash__ = None


def _check_constraint(con, n: int) -> None:
    if isinstance(con, Box):
        return
    if isinstance(con, Cardinality):
        if con.op not in _OPS:
            raise InstanceError(f"unknown operator {con.op!r}")
        if not 0 <= con.k <= n:
            raise InstanceError("cardinality out of range")
        return
    if isinstance(con, Knapsack):
        if con.op not in ("le", "ge"):
            raise InstanceError(f"knapsack operator must be le or ge, got {con.op!r}")
        if len(con.weights) != n:
            raise InstanceError(f"knapsack needs {n} weights, got {len(con.weights)}")
        if any(w < 0 or not math.isfinite(w) for w in con.weights):
            raise InstanceError("knapsack weights must be nonnegative")
        if not math.isfinite(con.capacity):
            raise InstanceError("knapsack capacity must be finite")
        return
    raise InstanceError(f"unsupported constraint {con!r}")


def objective_value(inst: QuadraticInstance, x) -> float:
    """``sum_i sum_{j != i} b_ij x_i x_j + sum_i c_i x_i``."""
    x = np.asarray(x, dtype=float)
    return float(x @ inst.B @ x + inst.c @ x)


def quadratic_term(inst: QuadraticInstance, x) -> float:
    x = np.asarray(x, dtype=float)
    return float(x @ inst.B @ x)


def is_feasible(inst: QuadraticInstance, x) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise ValueError(f"point must have length {inst.n}")
    for w, op, rhs in inst.linear_rows():
        if not _admits(float(w @ x), op, rhs):
            return False
    return True


def feasible_blocks(inst: QuadraticInstance, limit: int = 25, block: int = 1 << 16) -> Iterator[np.ndarray]:
    """Yield the binary feasible points as int8 row blocks, lexicographically."""
    n = inst.n
    if n > limit:
        raise DimensionTooLarge(f"n={n} exceeds enumeration limit {limit}")
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    rows = inst.linear_rows()
    total = 1 << n
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total), dtype=np.int64)
        pts = ((idx[:, None] >> shifts) & 1).astype(np.int8)
        keep = np.ones(len(pts), dtype=bool)
        for w, op, rhs in rows:
            keep &= _admits(pts @ w, op, rhs)
        if keep.any():
            yield pts[keep]


def enumerate_feasible(inst: QuadraticInstance, limit: int = 25) -> list[tuple[int, ...]]:
    """All members of X in lexicographic order."""
    out = []
    for pts in feasible_blocks(inst, limit):
        out.extend(tuple(int(v) for v in row) for row in pts)
    return out


def relaxation_nonempty(inst: QuadraticInstance) -> bool:
    """Whether ``[0,1]^n`` intersected with the side constraints is nonempty."""
    rows = inst.linear_rows()
    if len(rows) <= 1:
        for w, op, rhs in rows:
            lo, hi = 0.0, float(w.sum())
            if op == "le" and lo > rhs + FEAS_TOL:
                return False
            if op == "ge" and hi < rhs - FEAS_TOL:
                return False
            if op == "eq" and not (lo - FEAS_TOL <= rhs <= hi + FEAS_TOL):
                return False
        return True
    from quadcut.lp import LinearProgram, solve_lp

    n = inst.n
    lp = LinearProgram(
        sense="min",
        c=[0.0] * n,
        rows=[(list(w), op, rhs) for w, op, rhs in rows],
        lb=[0.0] * n,
        ub=[1.0] * n,
    )
    return solve_lp(lp).status == "optimal"


# -- file format -----------------------------------------------------------


def _num(tok: str, lineno: int) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise InstanceError(f"expected a number, got {tok!r}", lineno) from None
    if not math.isfinite(val):
        raise InstanceError(f"non-finite number {tok!r}", lineno)
    return val


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceError(f"expected an integer, got {tok!r}", lineno) from None


def parse_instance(text: Union[str, io.TextIOBase], name: str = "") -> QuadraticInstance:
    """Parse the line-oriented instance format.

    ``n <int>``, ``c <real>*n``, ``b <i> <j> <real>`` (0-based, repeated),
    ``constraint card <le|ge|eq> <k>`` and
    ``constraint knap <le|ge> <capacity> <w_0> ... <w_{n-1}>``.
    ``#`` starts a comment.
    """
    if not isinstance(text, str):
        text = text.read()
    n = None
    c = None
    B = None
    seen = set()
    constraints: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        key = tok[0]
        if key == "n":
            if n is not None:
                raise InstanceError("duplicate n line", lineno)
            if len(tok) != 2:
                raise InstanceError("expected 'n <int>'", lineno)
            n = _int(tok[1], lineno)
            if n < 1:
                raise InstanceError("n must be positive", lineno)
            B = np.zeros((n, n))
            continue
        if n is None:
            raise InstanceError("'n' line must come first", lineno)
        if key == "c":
            if c is not None:
                raise InstanceError("duplicate c line", lineno)
            if len(tok) != n + 1:
                raise InstanceError(f"expected {n} values for c, got {len(tok) - 1}", lineno)
            c = [_num(t, lineno) for t in tok[1:]]
        elif key == "b":
            if len(tok) != 4:
                raise InstanceError("expected 'b <i> <j> <real>'", lineno)
            i, j, val = _int(tok[1], lineno), _int(tok[2], lineno), _num(tok[3], lineno)
            if not (0 <= i < n and 0 <= j < n):
                raise InstanceError(f"index out of range: ({i}, {j})", lineno)
            if (i, j) in seen:
                raise InstanceError(f"duplicate entry ({i}, {j})", lineno)
            seen.add((i, j))
            if i == j and val != 0:
                raise InstanceError("nonzero diagonal", lineno)
            if val < 0:
                raise InstanceError("negative B entry", lineno)
            B[i, j] = val
        elif key == "constraint":
            constraints.append(_parse_constraint(tok[1:], n, lineno))
        else:
            raise InstanceError(f"unknown directive {key!r}", lineno)
    if n is None:
        raise InstanceError("missing 'n' line")
    if c is None:
        raise InstanceError("missing 'c' line")
    inst = QuadraticInstance(B, np.array(c), tuple(constraints), name=name)
    if not relaxation_nonempty(inst):
        raise InstanceError("empty relaxation: no point of [0,1]^n satisfies the constraints")
    return inst


def _parse_constraint(tok: Sequence[str], n: int, lineno: int):
    if not tok:
        raise InstanceError("empty constraint", lineno)
    kind = tok[0]
    if kind == "box":
        return Box()
    if kind == "card":
        if len(tok) != 3 or tok[1] not in _OPS:
            raise InstanceError("expected 'constraint card <le|ge|eq> <k>'", lineno)
        k = _int(tok[2], lineno)
        if not 0 <= k <= n:
            raise InstanceError("cardinality out of range", lineno)
        return Cardinality(tok[1], k)
    if kind == "knap":
        if len(tok) != 3 + n or tok[1] not in ("le", "ge"):
            raise InstanceError(f"expected 'constraint knap <le|ge> <capacity>' and {n} weights", lineno)
        cap = _num(tok[2], lineno)
        weights = tuple(_num(t, lineno) for t in tok[3:])
        if any(w < 0 for w in weights):
            raise InstanceError("knapsack weights must be nonnegative", lineno)
        return Knapsack(weights, tok[1], cap)
    raise InstanceError(f"unknown constraint kind {kind!r}", lineno)


def format_instance(inst: QuadraticInstance, header: str | None = None) -> str:
    """Serialize to the instance format; floats round-trip exactly."""
    out = []
    if header:
        out.extend(f"# {h}" for h in header.splitlines())
    out.append(f"n {inst.n}")
    out.append("c " + " ".join(repr(float(v)) for v in inst.c))
    rows, cols = np.nonzero(inst.B)
    for i, j in zip(rows, cols):
        out.append(f"b {i} {j} {float(inst.B[i, j])!r}")
    for con in inst.constraints:
        if isinstance(con, Box):
            out.append("constraint box")
        elif isinstance(con, Cardinality):
            out.append(f"constraint card {con.op} {con.k}")
        else:
            ws = " ".join(repr(float(w)) for w in con.weights)
            out.append(f"constraint knap {con.op} {float(con.capacity)!r} {ws}")
    return "\n".join(out) + "\n"


def load_instance(path) -> QuadraticInstance:
    from pathlib import Path

    path = Path(path)
    return parse_instance(path.read_text(), name=path.stem)
