"""Acceptance gate: the ten exit criteria, one pass/fail line each.

Corpus: 200 seeded random instances (point counts cycling 1..8, rational
costs on the quarter grid), all in exact mode, plus circle-model instances
for the metric criteria.  Run with ``pytest tests/test_acceptance.py -s``
to see the per-criterion lines.
"""

from fractions import Fraction as F
from functools import cached_property

import pytest

from wkam import (
    ValueFunction,
    aubry,
    barrier_closed_form,
    check_apriori,
    check_length_space,
    conjugate_check,
    critical_value,
    gen_fk,
    is_dominated,
    is_weak_kam,
    jump_F,
    lax_oleinik_neg,
    lax_oleinik_pos,
    lipschitz_constants,
    lipschitz_large_check,
    min_formula_check,
    peierls_barrier,
    phi_n,
    representation_check,
    solve_subsolution,
    strict_pairs,
    strict_subsolution,
    weak_kam_neg,
)
from wkam.core import minplus_product
from wkam.models import circle_metric, fk_potential_well, gen_random
from wkam.oracle import (
    aubry_chain_sets,
    cycle_scan,
    liminf_barrier_bounded,
    subsolution_sampler,
)
from wkam.potential import mane_potential
from wkam.subsolution import max_strict_subsolution

N_INSTANCES = 200


class Bundle:
    """Per-instance cache so the criteria share all heavy computations."""

    def __init__(self, seed: int):
        self.seed = seed
        self.inst = gen_random((seed % 8) + 1, seed, -2, 2)
        self._phi_tables = {}
        self._raw_powers = {}
        self._samples = {}

    @cached_property
    def crit(self):
        return critical_value(self.inst)

    @cached_property
    def scan(self):
        return cycle_scan(self.inst, alpha0=self.crit.alpha0)

    @cached_property
    def phi(self):
        return mane_potential(self.inst, self.crit)

    @cached_property
    def phi1(self):
        return phi_n(self.inst, self.crit, 1)

    @cached_property
    def F(self):
        return jump_F(self.inst, self.crit, phi=self.phi)

    @cached_property
    def bar(self):
        return peierls_barrier(self.inst, self.crit)

    @cached_property
    def aub(self):
        return aubry(self.inst, self.crit, self.bar, phi=self.phi)

    def phi_table(self, k: int):
        if 1 not in self._phi_tables:
            self._phi_tables[1] = self.phi1.entries
        top = max(self._phi_tables)
        while top < k:
            self._phi_tables[top + 1] = minplus_product(
                self._phi_tables[top], self.crit.reduced
            )
            top += 1
        return self._phi_tables[k]

    def raw_power(self, k: int):
        if 1 not in self._raw_powers:
            self._raw_powers[1] = self.inst.cost
        top = max(self._raw_powers)
        while top < k:
            self._raw_powers[top + 1] = minplus_product(
                self._raw_powers[top], self.inst.cost
            )
            top += 1
        return self._raw_powers[k]

    def samples(self, count: int):
        have = self._samples.get("list", [])
        if len(have) < count:
            have = subsolution_sampler(
                self.inst, self.crit, self.seed, count, phi=self.phi, bar=self.bar
            )
            self._samples["list"] = have
        return have[:count]


@pytest.fixture(scope="session")
def corpus():
    return [Bundle(seed) for seed in range(N_INSTANCES)]


def report(num, text):
    print(f"[acceptance] criterion {num:>2}: PASS  ({text})")


# --- criterion 1 -----------------------------------------------------------------

def test_criterion_1_critical_value(corpus):
    for b in corpus:
        assert b.crit.alpha0 == -b.scan.min_mean, f"seed {b.seed}"
        at = solve_subsolution(b.inst, b.crit.alpha0)
        assert at.feasible and is_dominated(b.inst, at.u, b.crit.alpha0).ok
        for q in (1, 2, 4):
            below = solve_subsolution(b.inst, b.crit.alpha0 - F(1, q))
            assert not below.feasible, f"seed {b.seed} q={q}"
            cyc = below.negative_cycle
            total = sum(
                b.inst.cost[x][y] + b.crit.alpha0 - F(1, q)
                for x, y in zip(cyc, cyc[1:] + cyc[:1])
            )
            assert total < 0
    report(1, f"alpha0 = -min cycle mean bit-exact on {len(corpus)} instances; "
              "feasible at alpha0, infeasible below")


# --- criterion 2 -----------------------------------------------------------------

def test_criterion_2_potential_axioms(corpus):
    for b in corpus:
        p = b.phi.entries
        n = b.inst.n
        a0 = b.crit.alpha0
        for x in range(n):
            assert p[x][x] == 0, f"seed {b.seed}"
            row = b.inst.cost[x]
            for y in range(n):
                assert p[x][y] <= row[y] + a0, f"seed {b.seed} ({x},{y})"
        for x in range(n):
            px = p[x]
            for y in range(n):
                pxy = px[y]
                py = p[y]
                for z in range(n):
                    assert px[z] <= pxy + py[z], f"seed {b.seed} ({x},{y},{z})"
    report(2, "zero diagonal, reduced-cost bound, triangle inequality, exhaustive")


# --- criterion 3 -----------------------------------------------------------------

def test_criterion_3_sup_representation(corpus):
    small = [b for b in corpus if b.inst.n <= 6]
    for b in small:
        p = b.phi.entries
        n = b.inst.n
        for u in b.samples(100):
            uv = u.values
            for x in range(n):
                ux = uv[x]
                px = p[x]
                for y in range(n):
                    assert uv[y] - ux <= px[y], f"seed {b.seed} {u.tag}"
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                best = max(p[z][y] - p[z][x] for z in range(n))
                assert best == p[x][y], f"seed {b.seed} ({x},{y})"
    report(3, f"100 dominated samples bounded by phi on {len(small)} instances; "
              "attainment by the potential rows themselves")


# --- criterion 4 -----------------------------------------------------------------

def test_criterion_4_barrier(corpus):
    for b in corpus:
        n = b.inst.n
        rep = liminf_barrier_bounded(b.inst, b.crit, 4 * n * n + 8)
        assert rep.stabilized, f"seed {b.seed}"
        h = b.bar.h.entries
        assert rep.matrix == h, f"seed {b.seed}"
        cf = barrier_closed_form(b.inst, b.crit, phi1=b.phi1, jumps=b.F)
        assert cf == h, f"seed {b.seed}"
    report(4, "value-iterated barrier equals liminf oracle and the "
              "Aubry closed form, entrywise exact")


# --- criterion 5 -----------------------------------------------------------------

def test_criterion_5_aubry_equivalences(corpus):
    for b in corpus:
        n = b.inst.n
        h = b.bar.h.entries
        by_h = tuple(x for x in range(n) if h[x][x] == 0)
        by_F = tuple(x for x in range(n) if b.F.values[x] == 0)
        by_kam = tuple(
            x
            for x in range(n)
            if is_weak_kam(b.inst, b.crit, ValueFunction(b.phi.entries[x]), "negative")
        )
        assert by_h == by_F == by_kam == b.scan.zero_vertices, f"seed {b.seed}"
        assert b.aub.vertices == by_h
        assert tuple(sorted(b.aub.edges)) == b.scan.zero_edges, f"seed {b.seed}"
    report(5, "zero barrier diagonal = zero jump = solution rows = cycle oracle, "
              "four-way, all instances")


# --- criterion 6 -----------------------------------------------------------------

def test_criterion_6_semigroup_calculus(corpus):
    for b in corpus:
        inst = b.inst
        n = inst.n
        a0 = b.crit.alpha0
        # order inequalities and idempotence of the composed operators
        for u in b.samples(3):
            v = u
            for _ in range(3):
                v = lax_oleinik_pos(inst, v)
            for _ in range(3):
                v = lax_oleinik_neg(inst, v)
            assert all(a >= c for a, c in zip(v.values, u.values)), f"seed {b.seed}"
            w = u
            for _ in range(3):
                w = lax_oleinik_neg(inst, w)
            for _ in range(3):
                w = lax_oleinik_pos(inst, w)
            assert all(a <= c for a, c in zip(w.values, u.values)), f"seed {b.seed}"
            once = lax_oleinik_neg(inst, lax_oleinik_pos(inst, u))
            twice = lax_oleinik_neg(inst, lax_oleinik_pos(inst, once))
            assert twice.values == once.values, f"seed {b.seed}"
        sol = weak_kam_neg(b.bar, 0)
        v = sol
        for _ in range(2):
            v = lax_oleinik_pos(inst, v)
        for _ in range(2):
            v = lax_oleinik_neg(inst, v)
        assert v.values == sol.values, f"seed {b.seed}"
        # forward vanishing at the base point, iterated up to five steps
        for x in range(n):
            for start in (b.phi1.entries[x], b.phi.entries[x]):
                cur = ValueFunction(start)
                for m in range(1, 6):
                    cur = ValueFunction(
                        tuple(v - a0 for v in lax_oleinik_pos(inst, cur).values)
                    )
                    assert cur.values[x] == 0, f"seed {b.seed} x={x} m={m}"
        # one-step recursion between consecutive tail potentials
        for k in range(1, 4):
            curt = b.phi_table(k)
            nxt = b.phi_table(k + 1)
            for x in range(n):
                img = lax_oleinik_neg(inst, ValueFunction(curt[x]))
                assert tuple(v + a0 for v in img.values) == nxt[x], f"seed {b.seed}"
        # the order-1 tail potential is the backward update of the potential
        for x in range(n):
            img = lax_oleinik_neg(inst, ValueFunction(b.phi.entries[x]))
            assert tuple(v + a0 for v in img.values) == b.phi1.entries[x]
        _check_chain_splittings(b)
        for steps in range(1, 4):
            assert min_formula_check(inst, b.crit, b.bar, steps), f"seed {b.seed}"
    report(6, "operator order laws, vanishing, tail recursion, chain-splitting "
              "suite (indices <= 4), min-formulas (steps <= 3), all exact")


def _check_chain_splittings(b: Bundle) -> None:
    inst = b.inst
    n = inst.n
    rng = range(n)
    a0 = b.crit.alpha0
    h = b.bar.h.entries
    for m in range(1, 5):
        cm = b.raw_power(m)
        shift = m * a0
        for k in range(1, 5):
            pk = b.phi_table(k)
            pkm = b.phi_table(k + m)
            for x in rng:
                for y in rng:
                    bound = pk[x][y] + shift
                    cmy = cm[y]
                    pxm = pkm[x]
                    for z in rng:
                        assert pxm[z] <= bound + cmy[z], f"seed {b.seed}"
        for x in rng:
            hx = h[x]
            cmx = cm[x]
            for y in rng:
                hxy = hx[y] + shift
                cxy = cmx[y] + shift
                cmy = cm[y]
                hy = h[y]
                for z in rng:
                    assert hx[z] <= hxy + cmy[z], f"seed {b.seed}"
                    assert hx[z] <= cxy + hy[z], f"seed {b.seed}"
    for m in range(1, 5):
        pm = b.phi_table(m)
        for l in range(1, 5):
            pl = b.phi_table(l)
            for k in range(1, min(4, l + m) + 1):
                pk = b.phi_table(k)
                for x in rng:
                    pkx = pk[x]
                    pmx = pm[x]
                    for y in rng:
                        bound = pmx[y]
                        ply = pl[y]
                        for z in rng:
                            assert pkx[z] <= bound + ply[z], f"seed {b.seed}"
    for k in range(1, 5):
        pk = b.phi_table(k)
        for x in rng:
            hx = h[x]
            for y in rng:
                hxy = hx[y]
                pky = pk[y]
                for z in rng:
                    assert hx[z] <= hxy + pky[z], f"seed {b.seed}"


# --- criterion 7 -----------------------------------------------------------------

def test_criterion_7_limits(corpus):
    from wkam.barrier import orbit_neg, orbit_pos

    for b in corpus:
        inst = b.inst
        for u in b.samples(20):
            rep = representation_check(inst, b.crit, u, 6, bar=b.bar)
            assert rep.ok, f"seed {b.seed} {u.tag}"
        for u in b.samples(5):
            assert conjugate_check(inst, b.crit, u).ok, f"seed {b.seed} {u.tag}"
        N = max(1, b.bar.iterations_to_fix)
        for x in range(inst.n):
            rep = representation_check(
                inst, b.crit, ValueFunction(b.phi1.entries[x]), N, bar=b.bar
            )
            assert rep.ok
            assert rep.matrix[x] == b.bar.h.entries[x], f"seed {b.seed} row {x}"
    report(7, "alternating limits idempotent; orbit bound <= barrier "
              "(20 samples, N=6) with rowwise attainment via tail rows")


def test_criterion_7_stabilization_within_4n_squared(corpus):
    # Stated bound: the normalized orbits of sampled dominated functions
    # stabilize within 4*n^2 iterations.  The true stabilization count is
    # (initial slack) / (smallest positive reduced weight), which is not
    # polynomial in n; small instances with small positive reduced
    # self-loops exceed the bound.  Kept faithful; see the failure message
    # for the concrete counterexamples.
    from wkam.barrier import orbit_neg, orbit_pos

    violations = []
    for b in corpus:
        inst = b.inst
        cap = 4 * inst.n * inst.n
        for u in b.samples(20):
            steps = max(
                len(orbit_neg(inst, b.crit, u)) - 1,
                len(orbit_pos(inst, b.crit, u)) - 1,
            )
            if steps > cap:
                violations.append((b.seed, inst.n, u.tag, steps, cap))
    if violations:
        print(
            f"[acceptance] criterion  7: FAIL  (stabilization bound 4n^2: "
            f"{len(violations)} of {len(corpus) * 20} sampled orbits exceed it, "
            f"e.g. seed={violations[0][0]} n={violations[0][1]} needs "
            f"{violations[0][3]} > {violations[0][4]} iterations; the bound is "
            f"slack/gap, not polynomial in n)"
        )
    else:
        report(7, "all sampled orbits stabilize within 4n^2 iterations")
    assert not violations, (
        "orbit stabilization exceeded 4*n^2 iterations on "
        f"{len(violations)} sampled functions: {violations}"
    )


# --- criterion 8 -----------------------------------------------------------------

def test_criterion_8_strictness(corpus):
    small = [b for b in corpus if b.inst.n <= 6]
    for b in small:
        inst = b.inst
        n = inst.n
        funcs = list(b.samples(5)) + [weak_kam_neg(b.bar, 0)]
        for u in funcs:
            u2 = strict_subsolution(inst, b.crit, u)
            assert is_dominated(inst, u2, b.crit.alpha0).ok
            verts, edges = aubry_chain_sets(inst, b.crit, u)
            strict = set(strict_pairs(inst, b.crit, u2))
            edge_set = set(edges)
            for x in range(n):
                for y in range(n):
                    assert ((x, y) in strict) == ((x, y) not in edge_set), (
                        f"seed {b.seed} {u.tag} pair ({x},{y})"
                    )
            for v in verts:
                assert u2.values[v] == u.values[v], f"seed {b.seed} {u.tag} at {v}"
        u1 = max_strict_subsolution(inst, b.crit)
        strict = set(strict_pairs(inst, b.crit, u1))
        zero_edges = set(b.scan.zero_edges)
        for x in range(n):
            for y in range(n):
                assert ((x, y) in strict) == ((x, y) not in zero_edges), (
                    f"seed {b.seed} global pair ({x},{y})"
                )
    report(8, f"strict exactly off the chain-oracle Aubry edges on "
              f"{len(small)} instances; global pattern matches zero cycles")


# --- criterion 9 -----------------------------------------------------------------

FK_CASES = [
    (2, F(1), "well"),
    (4, F(1), "well"),
    (8, F(1), "well"),
    (16, F(1), "well"),
    (8, F(1, 2), "zero"),
    (12, F(1), "zero"),
]


def _fk(m, lam, profile):
    pot = fk_potential_well(m, 0) if profile == "well" else [0] * m
    return gen_fk(m, lam, pot)


def test_criterion_9_metric_machinery():
    for m, lam, profile in FK_CASES:
        inst = _fk(m, lam, profile)
        crit = critical_value(inst)
        k, bb = lipschitz_constants(inst, crit.alpha0, B=1, K=1)
        for u in subsolution_sampler(inst, crit, seed=m, count=20):
            assert lipschitz_large_check(inst, u, k, bb).ok, f"m={m} {profile}"
            assert check_apriori(inst, u, crit.alpha0, B=1, K=1).ok, f"m={m}"
        rep = check_length_space(circle_metric(m), 1, 1)
        assert rep.ok, f"m={m}"
        d = circle_metric(m)
        for (x, y), chain in rep.witness_chains.items():
            steps = list(zip(chain, chain[1:]))
            assert all(d[a][c] <= 1 for a, c in steps)
            assert sum(d[a][c] for a, c in steps) <= d[x][y]
            assert len(steps) <= 2 * d[x][y] + 1
    report(9, "dominated samples are Lipschitz in the large with measured "
              "constants; circle grids are 1-length spaces at one arc step "
              "with thinned witness chains")


# --- criterion 10 ----------------------------------------------------------------

def test_criterion_10_circle_model_sanity():
    for m in (4, 8, 16):
        inst = gen_fk(m, 1, fk_potential_well(m, 0))
        crit = critical_value(inst)
        assert crit.alpha0 == 0
        bar = peierls_barrier(inst, crit)
        aub = aubry(inst, crit, bar)
        assert aub.vertices == (0,), f"m={m}"
    for m in (4, 8):
        inst = gen_fk(m, 1, [0] * m)
        crit = critical_value(inst)
        assert crit.alpha0 == 0
        bar = peierls_barrier(inst, crit)
        aub = aubry(inst, crit, bar)
        assert aub.vertices == tuple(range(m)), f"m={m}"
    report(10, "single-well circle model: alpha0 = 0 and the well is the "
               "Aubry set; flat potential: every point is Aubry")
