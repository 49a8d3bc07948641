"""Instance generators, JSON serialization, and metric-space validators.

File format: a JSON object ``{n, labels?, mode, tolerance?, cost, metric?}``
where cost/metric entries are numbers or rational strings ("p/q"); "inf"
marks a missing edge in graph mode.  Exact-mode round trips are byte-stable.

The metric validators implement the coarse length-space machinery: a metric
space is a B-length space at scale K when every pair is joined by a chain of
steps of length at most K whose total length is at most B times the
distance; such a chain can always be thinned to at most 2*B*d/K + 1 steps.
Dominated functions on such spaces are Lipschitz in the large,
``|u(x)-u(y)| <= k d(x,y) + b`` with

    ``k = 2 (A(K) + alpha) B / K,    b = A(K) + alpha``,

where A(R) bounds the cost over pairs within distance R and C(k) is the
super-linearity defect ``max(k d - c)``.  The same constants bound how far a
backward-update argmin can sit from its target:
``d(x, argmin) <= (A(r) + 2 k r + C(2k) + b) / k`` for targets within r of a
base point (r = 0 for the pointwise check).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from random import Random
from typing import NamedTuple, Optional, Sequence

from .core import CostInstance, ValueFunction, make_instance
from .numbers import (
    EXACT,
    InputError,
    Mode,
    Value,
    format_value,
    is_inf,
    parse_value,
)

RANDOM_DENOMINATOR = 4  # exact-mode random entries are quarters: fast gcds


def gen_constant(n: int, k: Value, mode: Mode = EXACT) -> CostInstance:
    """Instance with every cost equal to k."""
    if n < 1:
        raise InputError("need n >= 1")
    kk = mode.coerce(k)
    return make_instance([[kk] * n for _ in range(n)], mode=mode)


def gen_random(
    n: int, seed: int, lo: Value, hi: Value, mode: Mode = EXACT
) -> CostInstance:
    """Seed-deterministic random instance with entries in [lo, hi].

    Exact mode draws rationals on the 1/4 grid so that downstream exact
    arithmetic stays cheap; float mode draws uniform floats.
    """
    if n < 1:
        raise InputError("need n >= 1")
    if not lo <= hi:
        raise InputError("need lo <= hi")
    rng = Random(seed)
    if mode.exact:
        q = RANDOM_DENOMINATOR
        a = math.ceil(Fraction(lo) * q)
        b = math.floor(Fraction(hi) * q)
        if a > b:
            raise InputError("range [lo, hi] contains no representable entry")
        cost = [[Fraction(rng.randint(a, b), q) for _ in range(n)] for _ in range(n)]
    else:
        cost = [[rng.uniform(float(lo), float(hi)) for _ in range(n)] for _ in range(n)]
    return make_instance(cost, mode=mode)


def circle_metric(m: int) -> list[list[int]]:
    """Arc-step distance on m equispaced circle points (one step = 1)."""
    return [[min(abs(i - j), m - abs(i - j)) for j in range(m)] for i in range(m)]


def gen_fk(
    m: int,
    lam: Value,
    potential: Sequence[Value],
    mode: Mode = EXACT,
) -> CostInstance:
    """Discrete one-step model on a circle grid.

    Cost c(x, y) = lam * d(x, y)^2 + V(y) with d the arc-step circle
    distance.  V must be nonnegative with minimum zero, so the critical
    constant is zero and the zero set of V meets the Aubry set.
    """
    if m < 1:
        raise InputError("need m >= 1")
    lam = mode.coerce(lam)
    if is_inf(lam) or lam < 0:
        raise InputError("coupling must be finite and >= 0")
    if len(potential) != m:
        raise InputError(f"potential needs {m} values")
    V = [mode.coerce(v) for v in potential]
    if any(is_inf(v) or v < 0 for v in V):
        raise InputError("potential values must be finite and >= 0")
    if min(V) != 0:
        raise InputError("potential must attain 0")
    d = circle_metric(m)
    cost = [[lam * (d[i][j] ** 2) + V[j] for j in range(m)] for i in range(m)]
    return make_instance(
        cost,
        labels=[str(i) for i in range(m)],
        mode=mode,
        metric=d,
    )


def fk_potential_well(m: int, center: int = 0) -> list[Value]:
    """Single-well potential: squared circle distance to the center point."""
    d = circle_metric(m)
    return [Fraction(d[center][j] ** 2) for j in range(m)]


# ---------------------------------------------------------------------------
# length-space checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LengthSpaceReport:
    B: Value
    K: Value
    ok: bool
    witness_chains: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    max_chain_length_bound: int = 0
    failures: tuple[tuple[int, int], ...] = ()


def check_length_space(
    metric: Sequence[Sequence[Value]],
    B: Value,
    K: Value,
    mode: Mode = EXACT,
) -> LengthSpaceReport:
    """Search, pair by pair, for chains certifying the (B, K) length bound.

    Dynamic programming over the step graph (edges of length <= K, weighted
    by length) gives the least total length among chains of at most j hops;
    a pair passes when some chain within the thinning bound
    2*B*d(x,y)/K + 1 has total length <= B*d(x,y).  Thinning guarantees the
    hop cap loses nothing.
    """
    n = len(metric)
    if n < 1 or any(len(r) != n for r in metric):
        raise InputError("metric matrix is not square")
    B = mode.coerce(B)
    K = mode.coerce(K)
    if B < 1 or K <= 0:
        raise InputError("need B >= 1 and K > 0")
    d = [[mode.coerce(v) for v in row] for row in metric]
    INF_ = float("inf")
    step = [
        [d[i][j] if d[i][j] <= K else INF_ for j in range(n)] for i in range(n)
    ]
    bounds = {}
    max_bound = 0
    for x in range(n):
        for y in range(n):
            bound = math.floor(2 * B * d[x][y] / K + 1)
            bounds[(x, y)] = bound
            max_bound = max(max_bound, bound)
    # best[j][x][y]: least total length using at most j hops; parent for paths
    best = [[INF_] * n for _ in range(n)]
    for i in range(n):
        best[i][i] = 0
    hops = [ [row[:] for row in best] ]
    for _ in range(max_bound):
        prev = hops[-1]
        cur = [row[:] for row in prev]
        for x in range(n):
            for z in range(n):
                pz = prev[x][z]
                if pz == INF_:
                    continue
                for y in range(n):
                    w = step[z][y]
                    if w == INF_:
                        continue
                    cand = pz + w
                    if cand < cur[x][y]:
                        cur[x][y] = cand
        hops.append(cur)
    chains: dict[tuple[int, int], tuple[int, ...]] = {}
    failures = []
    for x in range(n):
        for y in range(n):
            bound = bounds[(x, y)]
            total = hops[bound][x][y]
            if total != INF_ and mode.le(total, B * d[x][y]):
                chains[(x, y)] = _reconstruct_chain(step, hops, x, y, bound)
            else:
                failures.append((x, y))
    return LengthSpaceReport(
        B=B,
        K=K,
        ok=not failures,
        witness_chains=chains,
        max_chain_length_bound=max_bound,
        failures=tuple(failures),
    )


def _reconstruct_chain(step, hops, x, y, bound) -> tuple[int, ...]:
    n = len(step)
    inf = float("inf")
    chain = [y]
    j = bound
    cur = y
    while cur != x and j > 0:
        target = hops[j][x][cur]
        if hops[j - 1][x][cur] == target:  # same value with fewer hops
            j -= 1
            continue
        for z in range(n):
            pz = hops[j - 1][x][z]
            w = step[z][cur]
            if pz != inf and w != inf and pz + w == target:
                chain.append(z)
                cur = z
                break
        j -= 1
    chain.reverse()
    # drop zero-length repeats so witness steps are genuine moves
    out = [chain[0]]
    for p in chain[1:]:
        if p != out[-1]:
            out.append(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# growth constants and Lipschitz-in-the-large checks
# ---------------------------------------------------------------------------

class GrowthReport(NamedTuple):
    C: dict
    A: dict


def growth_C(inst: CostInstance, k: Value) -> Value:
    """Tight super-linearity defect: C(k) = max over pairs of k*d - c."""
    _need_metric(inst)
    vals = []
    for x in range(inst.n):
        for y in range(inst.n):
            if is_inf(inst.cost[x][y]):
                continue
            vals.append(k * inst.metric[x][y] - inst.cost[x][y])
    return max(vals)


def growth_A(inst: CostInstance, R: Value) -> Value:
    """Tight uniform bound: A(R) = max cost over pairs within distance R."""
    _need_metric(inst)
    vals = [
        inst.cost[x][y]
        for x in range(inst.n)
        for y in range(inst.n)
        if inst.metric[x][y] <= R and not is_inf(inst.cost[x][y])
    ]
    if not vals:
        raise InputError(f"no pair within distance {R}")
    return max(vals)


def growth_constants(
    inst: CostInstance,
    ks: Optional[Sequence[Value]] = None,
    Rs: Optional[Sequence[Value]] = None,
) -> GrowthReport:
    """Sampled tight constants for super-linearity and uniform boundedness."""
    _need_metric(inst)
    if ks is None:
        ks = [0, 1, 2, 4]
    if Rs is None:
        Rs = sorted({inst.metric[x][y] for x in range(inst.n) for y in range(inst.n)})
    return GrowthReport(
        C={k: growth_C(inst, inst.mode.coerce(k)) for k in ks},
        A={R: growth_A(inst, inst.mode.coerce(R)) for R in Rs},
    )


class LipschitzResult(NamedTuple):
    ok: bool
    witness: Optional[tuple[int, int]]


def lipschitz_large_check(
    inst: CostInstance, u: ValueFunction, k: Value, b: Value
) -> LipschitzResult:
    """Check |u(x) - u(y)| <= k*d(x,y) + b over all pairs."""
    _need_metric(inst)
    mode = inst.mode
    scale = inst.value_scale()
    for x in range(inst.n):
        for y in range(inst.n):
            gap = abs(u.values[x] - u.values[y])
            if not mode.le(gap, k * inst.metric[x][y] + b, scale=scale):
                return LipschitzResult(False, (x, y))
    return LipschitzResult(True, None)


def lipschitz_constants(
    inst: CostInstance, alpha: Value, B: Value, K: Value
) -> tuple[Value, Value]:
    """Constants making every alpha-dominated function Lipschitz in the
    large on a B-length space at scale K: (2(A(K)+alpha)B/K, A(K)+alpha)."""
    aK = growth_A(inst, K)
    b = aK + alpha
    k = 2 * b * B / K
    return inst.mode.coerce(k), inst.mode.coerce(b)


def apriori_radius(
    inst: CostInstance, alpha: Value, B: Value, K: Value, r: Value = 0
) -> Optional[Value]:
    """Radius bound for backward-update argmins, or None when the slope
    constant degenerates to zero (all dominated functions are constant)."""
    k, b = lipschitz_constants(inst, alpha, B, K)
    if k == 0:
        return None
    return (growth_A(inst, r) + 2 * k * r + growth_C(inst, 2 * k) + b) / k


class AprioriResult(NamedTuple):
    ok: bool
    radius: Optional[Value]
    witness: Optional[tuple[int, int]]


def check_apriori(
    inst: CostInstance, u: ValueFunction, alpha: Value, B: Value, K: Value
) -> AprioriResult:
    """Every point's backward-update argmin sits within the a-priori radius."""
    _need_metric(inst)
    D = apriori_radius(inst, alpha, B, K)
    if D is None:
        return AprioriResult(True, None, None)
    for x in range(inst.n):
        best = None
        arg = None
        for y in range(inst.n):
            if is_inf(inst.cost[y][x]):
                continue
            v = u.values[y] + inst.cost[y][x]
            if best is None or v < best:
                best = v
                arg = y
        if arg is not None and inst.metric[x][arg] > D:
            return AprioriResult(False, D, (x, arg))
    return AprioriResult(True, D, None)


def _need_metric(inst: CostInstance) -> None:
    if inst.metric is None:
        raise InputError("instance carries no metric")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def instance_to_dict(inst: CostInstance) -> dict:
    doc: dict = {
        "n": inst.n,
        "labels": list(inst.labels),
        "mode": inst.mode.kind,
    }
    if not inst.mode.exact:
        doc["tolerance"] = inst.mode.tolerance
    doc["cost"] = [[format_value(v) for v in row] for row in inst.cost]
    if inst.metric is not None:
        doc["metric"] = [[format_value(v) for v in row] for row in inst.metric]
    return doc


def instance_from_dict(doc: dict) -> CostInstance:
    if not isinstance(doc, dict):
        raise InputError("instance document must be a JSON object")
    try:
        kind = doc.get("mode", "exact")
        tol = doc.get("tolerance", 1e-9)
        mode = Mode(kind, tol) if kind == "float" else Mode(kind)
        cost_doc = doc["cost"]
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    if not isinstance(cost_doc, list) or not cost_doc:
        raise InputError("cost must be a nonempty matrix")
    n = doc.get("n", len(cost_doc))
    if n != len(cost_doc) or any(
        not isinstance(r, list) or len(r) != n for r in cost_doc
    ):
        raise InputError("cost matrix is not n x n")
    cost = [[parse_value(v, mode) for v in row] for row in cost_doc]
    metric_doc = doc.get("metric")
    metric = None
    if metric_doc is not None:
        metric = [[parse_value(v, mode) for v in row] for row in metric_doc]
        if any(is_inf(v) for row in metric for v in row):
            raise InputError("metric entries must be finite")
    labels = doc.get("labels")
    return make_instance(cost, labels=labels, mode=mode, metric=metric)


def dumps(inst: CostInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def loads(text: str) -> CostInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    return instance_from_dict(doc)


def save(inst: CostInstance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst), encoding="utf-8")


def load(path: str | Path) -> CostInstance:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such instance file: {p}")
    return loads(p.read_text(encoding="utf-8"))
