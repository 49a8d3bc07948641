"""Min-plus kernels and the Lax-Oleinik operators on finite cost instances.

A cost instance is an ``n x n`` matrix ``c`` over the extended reals, read as
the one-step transition price ``c(x, y)`` from row point ``x`` to column
point ``y``.  The two value-update operators are

    ``T-(u)(x) = min_y  u(y) + c(y, x)``   (backward / min-plus)
    ``T+(u)(x) = max_y  u(y) - c(x, y)``   (forward  / max-plus)

``T+`` is always evaluated through the reversal identity
``T+(u) = -T-_(c transposed)(-u)`` so that both operators share one kernel.
N-step chain costs are min-plus matrix powers.  All operations are pure
functions of immutable inputs and deterministic (ties in argmins break to the
lowest point index).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .numbers import EXACT, InputError, Mode, Value, is_inf, neg

Matrix = tuple[tuple[Value, ...], ...]


def _freeze(rows: Sequence[Sequence[Value]]) -> Matrix:
    return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class CostInstance:
    """Finite point set with a total (or sparse) cost matrix.

    ``total`` is true iff every cost entry is finite; the structural theorems
    of this package (critical constants, potentials, barriers) require total
    instances.  ``+inf`` entries are a sparse-graph convenience only.
    """

    n: int
    labels: tuple[str, ...]
    cost: Matrix
    mode: Mode = EXACT
    metric: Optional[Matrix] = None
    total: bool = field(default=True)

    def label_of(self, i: int) -> str:
        return self.labels[i]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown point label {label!r}") from None

    def value_scale(self) -> Value:
        """n * max|c| over finite entries; tolerance scale for walk sums."""
        finite = [abs(v) for row in self.cost for v in row if not is_inf(v)]
        top = max(finite) if finite else 0
        return self.n * max(top, 1)

    def require_total(self, op: str) -> None:
        if not self.total:
            raise InputError(f"{op} requires a total instance (no +inf costs)")


@dataclass(frozen=True)
class ValueFunction:
    """One value per point, with a free-form provenance tag."""

    values: tuple[Value, ...]
    tag: str = ""

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Value:
        return self.values[i]

    def is_finite(self) -> bool:
        return not any(is_inf(v) for v in self.values)


@dataclass(frozen=True)
class PotentialTable:
    """Matrix-valued potential with a provenance kind.

    ``kind`` is one of ``phi`` (Mane potential), ``phi_n`` (tail potential of
    order ``order``), ``c_n`` (n-step chain cost, ``order`` steps) or
    ``barrier`` (Peierls barrier).  ``alpha0`` records the critical constant
    baked into the entries, ``None`` for raw chain costs.
    """

    entries: Matrix
    kind: str
    alpha0: Optional[Value] = None
    order: Optional[int] = None

    def row(self, x: int, tag: str = "") -> ValueFunction:
        return ValueFunction(self.entries[x], tag=tag)

    def col(self, y: int) -> tuple[Value, ...]:
        return tuple(row[y] for row in self.entries)


def make_instance(
    cost: Sequence[Sequence[Value]],
    labels: Optional[Sequence[str]] = None,
    mode: Mode = EXACT,
    metric: Optional[Sequence[Sequence[Value]]] = None,
) -> CostInstance:
    """Validate and freeze a cost instance.

    Checks squareness, n >= 1, label uniqueness, and (when a metric is
    given) symmetry, zero diagonal, nonnegativity and the triangle
    inequality over all triples.
    """
    n = len(cost)
    if n < 1:
        raise InputError("instance needs at least one point")
    rows = []
    for row in cost:
        if len(row) != n:
            raise InputError(f"cost matrix is not square ({len(row)} != {n})")
        rows.append(tuple(mode.coerce(v) for v in row))
    cmat = tuple(rows)
    if labels is None:
        labels = tuple(f"p{i}" for i in range(n))
    else:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise InputError("label count does not match point count")
        if len(set(labels)) != n:
            raise InputError("labels must be unique")
    mmat: Optional[Matrix] = None
    if metric is not None:
        if len(metric) != n or any(len(r) != n for r in metric):
            raise InputError("metric matrix is not n x n")
        mmat = _freeze([[mode.coerce(v) for v in r] for r in metric])
        for i in range(n):
            if mmat[i][i] != 0:
                raise InputError(f"metric diagonal must be zero at {i}")
            for j in range(n):
                if is_inf(mmat[i][j]) or mmat[i][j] < 0:
                    raise InputError(f"metric entry ({i},{j}) must be finite >= 0")
                if mmat[i][j] != mmat[j][i]:
                    raise InputError(f"metric not symmetric at ({i},{j})")
        for i in range(n):
            for j in range(n):
                dij = mmat[i][j]
                for k in range(n):
                    if dij > mmat[i][k] + mmat[k][j]:
                        raise InputError(
                            f"metric violates triangle inequality at ({i},{k},{j})"
                        )
    total = not any(is_inf(v) for row in cmat for v in row)
    return CostInstance(n=n, labels=labels, cost=cmat, mode=mode, metric=mmat, total=total)


def as_value_function(inst: CostInstance, values: Sequence[Value], tag: str = "") -> ValueFunction:
    if len(values) != inst.n:
        raise InputError(f"function length {len(values)} != {inst.n} points")
    return ValueFunction(tuple(inst.mode.coerce(v) for v in values), tag=tag)


def constant_function(inst: CostInstance, k: Value, tag: str = "const") -> ValueFunction:
    return as_value_function(inst, [k] * inst.n, tag=tag)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

def minplus_apply(cost: Matrix, values: Sequence[Value]) -> tuple[Value, ...]:
    """Raw backward update: result(x) = min_y values(y) + cost(y, x)."""
    n = len(cost)
    return tuple(
        min(values[y] + cost[y][x] for y in range(n)) for x in range(n)
    )


def minplus_product(a: Matrix, b: Matrix) -> Matrix:
    """Min-plus matrix product: entry (x,y) = min_z a(x,z) + b(z,y)."""
    n = len(a)
    rng = range(n)
    return tuple(
        tuple(min(arow[z] + b[z][y] for z in rng) for y in rng) for arow in a
    )


def matrix_add_scalar(a: Matrix, k: Value) -> Matrix:
    return tuple(tuple(v + k for v in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def lax_oleinik_neg(inst: CostInstance, u: ValueFunction) -> ValueFunction:
    """Backward operator: result(x) = min_y u(y) + c(y, x)."""
    _check_function(inst, u)
    out = minplus_apply(inst.cost, u.values)
    if any(is_inf(v) for v in out):
        raise InputError("backward update produced +inf (a point has no incoming edge)")
    return ValueFunction(out, tag=f"T-[{u.tag}]" if u.tag else "T-")


def reverse_cost(inst: CostInstance) -> CostInstance:
    """Transpose the cost matrix; everything else is preserved."""
    return CostInstance(
        n=inst.n,
        labels=inst.labels,
        cost=transpose(inst.cost),
        mode=inst.mode,
        metric=inst.metric,
        total=inst.total,
    )


def lax_oleinik_pos(inst: CostInstance, u: ValueFunction) -> ValueFunction:
    """Forward operator: result(x) = max_y u(y) - c(x, y).

    Evaluated as -T-(transposed cost)(-u): both operators run on one kernel,
    which makes the reversal identity bit-exact by construction.
    """
    _check_function(inst, u)
    neg_u = ValueFunction(tuple(neg(v) for v in u.values))
    inner = lax_oleinik_neg(reverse_cost(inst), neg_u)
    return ValueFunction(
        tuple(neg(v) for v in inner.values),
        tag=f"T+[{u.tag}]" if u.tag else "T+",
    )


def cost_power(inst: CostInstance, n: int) -> PotentialTable:
    """n-step chain cost: entry (x,y) = min over length-n chains x -> y.

    Computed as the n-fold min-plus power of the cost matrix; n = 0 is
    rejected (chain costs start at one step).
    """
    if n < 1:
        raise InputError("chain cost is defined for step count >= 1")
    acc = inst.cost
    for _ in range(n - 1):
        acc = minplus_product(acc, inst.cost)
    return PotentialTable(entries=acc, kind="c_n", alpha0=None, order=n)


def _check_function(inst: CostInstance, u: ValueFunction) -> None:
    if len(u.values) != inst.n:
        raise InputError(f"function length {len(u.values)} != {inst.n} points")
    if not u.is_finite():
        raise InputError("value function must be finite everywhere")


# ---------------------------------------------------------------------------
# small vector helpers shared by the solver modules
# ---------------------------------------------------------------------------

def vf_le(mode: Mode, u: Sequence[Value], v: Sequence[Value], scale: Value = 1) -> bool:
    return all(mode.le(a, b, scale=scale) for a, b in zip(u, v))


def vf_eq(mode: Mode, u: Sequence[Value], v: Sequence[Value], scale: Value = 1) -> bool:
    return all(mode.eq(a, b, scale=scale) for a, b in zip(u, v))
