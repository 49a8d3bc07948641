"""Peierls barrier, weak KAM solutions, Aubry sets, and sub-solution limits.

The Peierls barrier ``h(x, y)`` is the limiting reduced cost of long chains
from x to y.  Row x is computed by value iteration: starting from the tail
potential row ``phi_1(x, .)``, the map ``v -> T-(v) + alpha0`` is monotone
nondecreasing and, with rational data, reaches its fixed point in finitely
many steps.  Rows of ``h`` are fixed points of ``T- + alpha0`` (negative
weak KAM solutions); negated columns are fixed points of ``T+ - alpha0``
(positive solutions).

The projected Aubry set is the zero diagonal of the barrier; the edge Aubry
set collects the ordered pairs closing a zero-reduced-weight circuit,
``c(x,y) + alpha0 + h(y,x) = 0``.

For a dominated u, the normalized orbits ``T-^k u + k alpha0`` (nondecreasing)
and ``T+^k u - k alpha0`` (nonincreasing) stabilize to the enveloping
solutions ``u_minus >= u`` and ``u_plus <= u``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    CostInstance,
    Matrix,
    PotentialTable,
    ValueFunction,
    lax_oleinik_neg,
    lax_oleinik_pos,
    vf_eq,
    vf_le,
)
from .critical import CriticalData, is_dominated
from .numbers import ConstructionError, InputError, NonConvergenceError, Value, neg
from .potential import jump_F, phi_n

_EXACT_ITER_CAP = 100_000


@dataclass(frozen=True)
class BarrierData:
    """Peierls barrier with convergence metadata."""

    h: PotentialTable
    finite: bool
    iterations_to_fix: int


@dataclass(frozen=True)
class AubryData:
    """Projected Aubry vertices, Aubry edges, and the jump values F."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    jumps: ValueFunction


def _iterate_row_to_fix(
    inst: CostInstance, crit: CriticalData, start: Sequence[Value]
) -> tuple[tuple[Value, ...], int]:
    """Drive v -> T-(v) + alpha0 to its fixed point; return (row, steps)."""
    mode = inst.mode
    scale = inst.value_scale()
    cap = 4 * inst.n * inst.n if not mode.exact else _EXACT_ITER_CAP
    cur = tuple(start)
    red = crit.reduced
    n = inst.n
    for step in range(cap + 1):
        nxt = tuple(min(cur[z] + red[z][y] for z in range(n)) for y in range(n))
        if vf_eq(mode, nxt, cur, scale=scale):
            return cur, step
        cur = nxt
    raise NonConvergenceError(
        f"barrier row did not stabilize within {cap} iterations"
    )


def peierls_barrier(inst: CostInstance, crit: CriticalData) -> BarrierData:
    """Value-iterate each row of the barrier from the tail potential."""
    inst.require_total("Peierls barrier")
    phi1 = phi_n(inst, crit, 1)
    rows = []
    worst = 0
    for x in range(inst.n):
        row, steps = _iterate_row_to_fix(inst, crit, phi1.entries[x])
        rows.append(row)
        worst = max(worst, steps)
    table = PotentialTable(entries=tuple(rows), kind="barrier", alpha0=crit.alpha0)
    return BarrierData(h=table, finite=True, iterations_to_fix=worst)


def aubry(
    inst: CostInstance,
    crit: CriticalData,
    bar: BarrierData,
    phi: Optional[PotentialTable] = None,
) -> AubryData:
    """Aubry sets read off the barrier.

    x is an Aubry vertex iff h(x, x) = 0; the ordered pair (x, y) is an
    Aubry edge iff the step x -> y closes a zero-reduced circuit:
    c(x, y) + alpha0 + h(y, x) = 0.
    """
    mode = inst.mode
    scale = inst.value_scale()
    h = bar.h.entries
    vertices = tuple(x for x in range(inst.n) if mode.is_zero(h[x][x], scale=scale))
    edges = []
    for x in range(inst.n):
        for y in range(inst.n):
            if mode.is_zero(inst.cost[x][y] + crit.alpha0 + h[y][x], scale=scale):
                edges.append((x, y))
    jumps = jump_F(inst, crit, phi=phi)
    return AubryData(vertices=vertices, edges=tuple(edges), jumps=jumps)


def weak_kam_neg(bar: BarrierData, x: int) -> ValueFunction:
    """Row x of the barrier: a negative weak KAM solution."""
    return bar.h.row(x, tag=f"h_row[{x}]")


def weak_kam_pos(bar: BarrierData, x: int) -> ValueFunction:
    """Negated column x of the barrier: a positive weak KAM solution."""
    return ValueFunction(tuple(neg(v) for v in bar.h.col(x)), tag=f"h_col[{x}]")


def is_weak_kam(
    inst: CostInstance, crit: CriticalData, u: ValueFunction, sign: str
) -> bool:
    """Fixed-point test: u = T-(u) + alpha0 (negative) or T+(u) - alpha0."""
    mode = inst.mode
    scale = inst.value_scale()
    if sign == "negative":
        img = lax_oleinik_neg(inst, u)
        return vf_eq(mode, tuple(v + crit.alpha0 for v in img.values), u.values, scale=scale)
    if sign == "positive":
        img = lax_oleinik_pos(inst, u)
        return vf_eq(mode, tuple(v - crit.alpha0 for v in img.values), u.values, scale=scale)
    raise InputError(f"sign must be 'negative' or 'positive', got {sign!r}")


# ---------------------------------------------------------------------------
# normalized orbits and limits
# ---------------------------------------------------------------------------

def orbit_neg(
    inst: CostInstance, crit: CriticalData, u: ValueFunction, require_dominated: bool = True
) -> list[tuple[Value, ...]]:
    """Iterates u, T-u + a0, T-^2 u + 2 a0, ... up to the first repeat."""
    if require_dominated and not is_dominated(inst, u, crit.alpha0).ok:
        raise InputError("function is not dominated at the critical constant")
    mode = inst.mode
    scale = inst.value_scale()
    cap = 4 * inst.n * inst.n if not mode.exact else _EXACT_ITER_CAP
    red = crit.reduced
    n = inst.n
    cur = tuple(u.values)
    out = [cur]
    for _ in range(cap):
        nxt = tuple(min(cur[z] + red[z][y] for z in range(n)) for y in range(n))
        if vf_eq(mode, nxt, cur, scale=scale):
            return out
        out.append(nxt)
        cur = nxt
    raise NonConvergenceError(f"orbit did not stabilize within {cap} iterations")


def orbit_pos(
    inst: CostInstance, crit: CriticalData, u: ValueFunction, require_dominated: bool = True
) -> list[tuple[Value, ...]]:
    """Iterates u, T+u - a0, T+^2 u - 2 a0, ... up to the first repeat."""
    if require_dominated and not is_dominated(inst, u, crit.alpha0).ok:
        raise InputError("function is not dominated at the critical constant")
    mode = inst.mode
    scale = inst.value_scale()
    cap = 4 * inst.n * inst.n if not mode.exact else _EXACT_ITER_CAP
    cur = ValueFunction(tuple(u.values))
    out = [cur.values]
    for _ in range(cap):
        img = lax_oleinik_pos(inst, cur)
        nxt = tuple(v - crit.alpha0 for v in img.values)
        if vf_eq(mode, nxt, cur.values, scale=scale):
            return out
        out.append(nxt)
        cur = ValueFunction(nxt)
    raise NonConvergenceError(f"orbit did not stabilize within {cap} iterations")


def u_minus(inst: CostInstance, crit: CriticalData, u: ValueFunction) -> ValueFunction:
    """Limit of the nondecreasing normalized backward orbit: the least
    negative weak KAM solution above u."""
    hist = orbit_neg(inst, crit, u)
    return ValueFunction(hist[-1], tag=f"u_minus[{u.tag}]" if u.tag else "u_minus")


def u_plus(inst: CostInstance, crit: CriticalData, u: ValueFunction) -> ValueFunction:
    """Limit of the nonincreasing normalized forward orbit: the greatest
    positive weak KAM solution below u."""
    hist = orbit_pos(inst, crit, u)
    return ValueFunction(hist[-1], tag=f"u_plus[{u.tag}]" if u.tag else "u_plus")


# ---------------------------------------------------------------------------
# conjugation calculus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConjugateReport:
    """Outcome of the alternating-limit calculus on a dominated function."""

    u_minus: ValueFunction
    u_minus_plus: ValueFunction
    u_minus_plus_minus: ValueFunction
    u_minus_plus_minus_plus: ValueFunction
    idempotent: bool            # u_-+ == u_-+-+
    lower_bound_holds: bool     # T+ T- u <= u
    upper_bound_holds: bool     # T- T+ u >= u
    composite_idempotent: bool  # (T- T+)^2 u == (T- T+) u

    @property
    def ok(self) -> bool:
        return (
            self.idempotent
            and self.lower_bound_holds
            and self.upper_bound_holds
            and self.composite_idempotent
        )


def conjugate_check(
    inst: CostInstance, crit: CriticalData, u: ValueFunction
) -> ConjugateReport:
    """Compute u_-, u_-+, u_-+- and u_-+-+ and verify the limit identities."""
    mode = inst.mode
    scale = inst.value_scale()
    um = u_minus(inst, crit, u)
    ump = u_plus(inst, crit, um)
    umpm = u_minus(inst, crit, ump)
    umpmp = u_plus(inst, crit, umpm)
    idem = vf_eq(mode, ump.values, umpmp.values, scale=scale)

    tm = lax_oleinik_neg(inst, u)
    tptm = lax_oleinik_pos(inst, tm)
    lower = vf_le(mode, tptm.values, u.values, scale=scale)
    tp = lax_oleinik_pos(inst, u)
    tmtp = lax_oleinik_neg(inst, tp)
    upper = vf_le(mode, u.values, tmtp.values, scale=scale)
    twice = lax_oleinik_neg(inst, lax_oleinik_pos(inst, tmtp))
    comp = vf_eq(mode, twice.values, tmtp.values, scale=scale)
    return ConjugateReport(
        u_minus=um,
        u_minus_plus=ump,
        u_minus_plus_minus=umpm,
        u_minus_plus_minus_plus=umpmp,
        idempotent=idem,
        lower_bound_holds=lower,
        upper_bound_holds=upper,
        composite_idempotent=comp,
    )


def inf_solutions(
    inst: CostInstance, crit: CriticalData, solutions: Sequence[ValueFunction]
) -> ValueFunction:
    """Pointwise minimum of negative solutions, itself a negative solution."""
    if not solutions:
        raise InputError("need at least one solution")
    for w in solutions:
        if not is_weak_kam(inst, crit, w, "negative"):
            raise InputError("input is not a negative weak KAM solution")
    vals = tuple(min(w.values[i] for w in solutions) for i in range(inst.n))
    out = ValueFunction(vals, tag="inf_solutions")
    if not is_weak_kam(inst, crit, out, "negative"):
        raise ConstructionError("pointwise min of solutions failed the fixed-point test")
    return out


# ---------------------------------------------------------------------------
# barrier identities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RepresentationResult:
    matrix: Matrix
    ok: bool


def representation_check(
    inst: CostInstance,
    crit: CriticalData,
    u: ValueFunction,
    N: int,
    bar: Optional[BarrierData] = None,
) -> RepresentationResult:
    """Orbit bound S(x,y) = max_{n,m <= N} T-^n u(y) - T+^m u(x) + (n+m) a0.

    S never exceeds the barrier; equality is attained rowwise when u ranges
    over the tail-potential rows and N covers the stabilization index.
    """
    if N < 1:
        raise InputError("horizon must be >= 1")
    if bar is None:
        bar = peierls_barrier(inst, crit)
    mode = inst.mode
    scale = inst.value_scale()
    neg_its = [tuple(u.values)]
    cur = ValueFunction(u.values)
    for _ in range(N):
        img = lax_oleinik_neg(inst, cur)
        cur = ValueFunction(tuple(v + crit.alpha0 for v in img.values))
        neg_its.append(cur.values)
    pos_its = [tuple(u.values)]
    cur = ValueFunction(u.values)
    for _ in range(N):
        img = lax_oleinik_pos(inst, cur)
        cur = ValueFunction(tuple(v - crit.alpha0 for v in img.values))
        pos_its.append(cur.values)
    hi = tuple(max(it[y] for it in neg_its) for y in range(inst.n))
    lo = tuple(min(it[x] for it in pos_its) for x in range(inst.n))
    S = tuple(tuple(hi[y] - lo[x] for y in range(inst.n)) for x in range(inst.n))
    ok = all(
        mode.le(S[x][y], bar.h.entries[x][y], scale=scale)
        for x in range(inst.n)
        for y in range(inst.n)
    )
    return RepresentationResult(matrix=S, ok=ok)


def min_formula_check(
    inst: CostInstance, crit: CriticalData, bar: BarrierData, n: int
) -> bool:
    """Both n-step splittings of the barrier:

    h(x,y) = min_z h(x,z) + c_n(z,y) + n a0 = min_z c_n(x,z) + n a0 + h(z,y).
    """
    if n < 1:
        raise InputError("step count must be >= 1")
    from .core import cost_power  # local import keeps module deps one-way

    mode = inst.mode
    scale = inst.value_scale()
    cn = cost_power(inst, n).entries
    h = bar.h.entries
    shift = n * crit.alpha0
    rng = range(inst.n)
    for x in rng:
        for y in rng:
            right = min(h[x][z] + cn[z][y] for z in rng) + shift
            left = min(cn[x][z] + h[z][y] for z in rng) + shift
            if not mode.eq(h[x][y], right, scale=scale):
                return False
            if not mode.eq(h[x][y], left, scale=scale):
                return False
    return True


def barrier_closed_form(
    inst: CostInstance,
    crit: CriticalData,
    phi1: Optional[PotentialTable] = None,
    jumps: Optional[ValueFunction] = None,
) -> Matrix:
    """Independent route to the barrier: h(x,y) = min over Aubry vertices a
    of phi_1(x,a) + phi_1(a,y), Aubry vertices being the zero set of F."""
    if phi1 is None:
        phi1 = phi_n(inst, crit, 1)
    mode = inst.mode
    scale = inst.value_scale()
    if jumps is None:
        jumps = ValueFunction(tuple(phi1.entries[x][x] for x in range(inst.n)))
    verts = [x for x in range(inst.n) if mode.is_zero(jumps.values[x], scale=scale)]
    if not verts:
        raise ConstructionError("no Aubry vertex found for the closed form")
    e = phi1.entries
    return tuple(
        tuple(min(e[x][a] + e[a][y] for a in verts) for y in range(inst.n))
        for x in range(inst.n)
    )
