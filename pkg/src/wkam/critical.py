"""Critical constant, domination checks, and sub-solution synthesis.

A function ``u`` is alpha-dominated when ``u(y) - u(x) <= c(x, y) + alpha``
for every ordered pair.  Summing that inequality around any cycle forces
``alpha >= -(cycle mean)``, so the smallest feasible constant is

    ``alpha0 = -(minimum mean over simple cycles)``,

computed here with Karp's recurrence on the (super-source augmented)
digraph.  Feasible sub-solutions at a given alpha are shortest-path
potentials for the shifted weights ``c + alpha`` from a virtual source
connected to every point at weight zero (difference-constraint feasibility);
an infeasible alpha yields a negative-cycle witness instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import CostInstance, Matrix, ValueFunction, as_value_function, matrix_add_scalar
from .numbers import INF, InputError, Value, is_inf, neg


@dataclass(frozen=True)
class CriticalData:
    """Critical constant with a witness cycle and the reduced cost matrix.

    ``witness_cycle`` is a simple cycle (vertex indices, closing edge
    implied) whose mean cost equals ``-alpha0``; ``reduced`` is
    ``c + alpha0``, which has no negative cycle and at least one zero cycle.
    """

    alpha0: Value
    witness_cycle: tuple[int, ...]
    reduced: Matrix


class DominationResult(NamedTuple):
    ok: bool
    witness: Optional[tuple[int, int]]

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.ok


class SubsolutionResult(NamedTuple):
    feasible: bool
    u: Optional[ValueFunction]
    negative_cycle: Optional[tuple[int, ...]]


def critical_value(inst: CostInstance) -> CriticalData:
    """Smallest alpha admitting a dominated function, with witness cycle."""
    n = inst.n
    if not inst.total:
        for x in range(n):
            if all(is_inf(v) for v in inst.cost[x]):
                raise InputError(f"point {inst.labels[x]} has out-degree 0")
    mu = _karp_min_cycle_mean(inst)
    alpha0 = neg(mu)
    reduced = matrix_add_scalar(inst.cost, alpha0)
    witness = _zero_cycle(inst, reduced)
    return CriticalData(alpha0=alpha0, witness_cycle=witness, reduced=reduced)


def _karp_min_cycle_mean(inst: CostInstance) -> Value:
    """Karp's recurrence with a virtual source feeding every point at 0.

    D[k][v] is the least weight of a walk with exactly k edges from the
    source; the minimum cycle mean is min_v max_k (D[N][v]-D[k][v])/(N-k)
    over finite entries, N being the augmented vertex count.
    """
    n = inst.n
    cost = inst.cost
    big = n + 1  # vertices 0..n-1 plus source n
    prev = [INF] * n
    levels = [list(prev)]
    prev = [0] * n  # one edge: source -> v at weight 0
    levels.append(list(prev))
    for _ in range(2, big + 1):
        cur = []
        for v in range(n):
            best = INF
            for u in range(n):
                if is_inf(prev[u]) or is_inf(cost[u][v]):
                    continue
                w = prev[u] + cost[u][v]
                if w < best:
                    best = w
            cur.append(best)
        levels.append(cur)
        prev = cur
    top = levels[big]
    mu: Optional[Value] = None
    for v in range(n):
        if is_inf(top[v]):
            continue
        worst: Optional[Value] = None
        for k in range(big):
            if is_inf(levels[k][v]):
                continue
            ratio = (top[v] - levels[k][v]) / (big - k)
            if worst is None or ratio > worst:
                worst = ratio
        if worst is not None and (mu is None or worst < mu):
            mu = worst
    if mu is None:
        raise InputError("instance has no cycle; critical constant undefined")
    return inst.mode.coerce(mu)


def _zero_cycle(inst: CostInstance, reduced: Matrix) -> tuple[int, ...]:
    """Deterministic simple cycle of zero reduced weight.

    Shortest-path potentials p for the reduced weights make every
    zero-reduced cycle live inside the tight subgraph p(v) = p(u) + r(u,v);
    a DFS scanning vertices and successors in ascending index returns the
    first (hence lexicographically least) cycle.
    """
    n = inst.n
    mode = inst.mode
    scale = inst.value_scale()
    pot = _bellman_ford(reduced, n)
    tol_steps = 0
    while True:
        adj: list[list[int]] = [[] for _ in range(n)]
        for u in range(n):
            for v in range(n):
                r = reduced[u][v]
                if is_inf(r):
                    continue
                if mode.eq(pot[u] + r, pot[v], scale=scale * (10 ** tol_steps)):
                    adj[u].append(v)
        cyc = _first_cycle(adj, n)
        if cyc is not None:
            return cyc
        if mode.exact or tol_steps >= 3:
            raise RuntimeError("no zero-reduced cycle found in tight subgraph")
        tol_steps += 1  # float fringe: widen the tightness band and retry


def _bellman_ford(weights: Matrix, n: int) -> list[Value]:
    dist: list[Value] = [0] * n
    for _ in range(n):
        changed = False
        for u in range(n):
            du = dist[u]
            if is_inf(du):
                continue
            row = weights[u]
            for v in range(n):
                if is_inf(row[v]):
                    continue
                w = du + row[v]
                if w < dist[v]:
                    dist[v] = w
                    changed = True
        if not changed:
            break
    return dist


def _first_cycle(adj: list[list[int]], n: int) -> Optional[tuple[int, ...]]:
    for start in range(n):
        path = [start]
        onpath = {start}
        iters = [iter(adj[start])]
        while iters:
            try:
                nxt = next(iters[-1])
            except StopIteration:
                iters.pop()
                onpath.discard(path.pop())
                continue
            if nxt == start:
                return tuple(path)
            if nxt in onpath or nxt < start:
                continue
            path.append(nxt)
            onpath.add(nxt)
            iters.append(iter(adj[nxt]))
    return None


def is_dominated(
    inst: CostInstance, u: ValueFunction, alpha: Value
) -> DominationResult:
    """Check u(y) - u(x) <= c(x, y) + alpha for all pairs; witness on failure."""
    mode = inst.mode
    scale = inst.value_scale()
    vals = u.values
    for x in range(inst.n):
        row = inst.cost[x]
        ux = vals[x]
        for y in range(inst.n):
            if is_inf(row[y]):
                continue
            if not mode.le(vals[y] - ux, row[y] + alpha, scale=scale):
                return DominationResult(False, (x, y))
    return DominationResult(True, None)


def solve_subsolution(inst: CostInstance, alpha: Value) -> SubsolutionResult:
    """Produce a dominated function at alpha, or a negative-cycle witness.

    Bellman-Ford on weights c + alpha with a virtual source at weight 0 to
    every point: converged distances d satisfy d(y) <= d(x) + c(x,y) + alpha,
    which is exactly domination.  A relaxation surviving n rounds exposes a
    cycle of negative shifted weight, i.e. alpha below the critical constant.
    """
    n = inst.n
    alpha = inst.mode.coerce(alpha)
    w = matrix_add_scalar(inst.cost, alpha)
    dist: list[Value] = [0] * n
    pred: list[Optional[int]] = [None] * n
    for _ in range(n):
        changed = False
        for u in range(n):
            du = dist[u]
            if is_inf(du):
                continue
            for v in range(n):
                if is_inf(w[u][v]):
                    continue
                cand = du + w[u][v]
                if cand < dist[v]:
                    dist[v] = cand
                    pred[v] = u
                    changed = True
        if not changed:
            break
    margin = 0 if inst.mode.exact else inst.mode.tolerance * float(inst.value_scale())
    for u in range(n):
        for v in range(n):
            if is_inf(w[u][v]):
                continue
            if dist[u] + w[u][v] < dist[v] - margin:
                pred[v] = u
                return SubsolutionResult(False, None, _trace_cycle(pred, v, n))
    u_fn = as_value_function(inst, dist, tag=f"subsolution(alpha={alpha})")
    return SubsolutionResult(True, u_fn, None)


def _trace_cycle(pred: list[Optional[int]], v: int, n: int) -> tuple[int, ...]:
    for _ in range(n):  # walk back onto the cycle itself
        v = pred[v]  # type: ignore[assignment]
    cyc = [v]
    x = pred[v]
    while x != v:
        cyc.append(x)  # type: ignore[arg-type]
        x = pred[x]  # type: ignore[index]
    cyc.reverse()
    k = cyc.index(min(cyc))
    return tuple(cyc[k:] + cyc[:k])
