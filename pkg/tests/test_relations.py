"""Relations, densities, pathsets, minterms, costs, and restrictions."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from pathlab import formulas as F
from pathlab import jointrees as jt
from pathlab import relations as R
from pathlab import samples
from pathlab.errors import DomainError
from pathlab.paths import EMPTY, from_edges, full_path, make_path, single_edge


# -- joins ---------------------------------------------------------------------


def test_join_disjoint_is_product():
    a = samples.random_relation(random.Random(0), make_path(0, 1), 3, 0.5)
    b = samples.random_relation(random.Random(1), make_path(3, 4), 3, 0.5)
    assert len(R.join(a, b)) == len(a) * len(b)


def test_join_same_graph_is_intersection():
    g = make_path(0, 2)
    a = samples.random_relation(random.Random(2), g, 3, 0.5)
    b = samples.random_relation(random.Random(3), g, 3, 0.5)
    assert R.join(a, b).tuples == a.tuples & b.tuples


def test_join_overlap_example():
    a = R.Relation(make_path(0, 1), 3, [(1, 2)])
    b = R.Relation(make_path(1, 2), 3, [(2, 3)])
    j = R.join(a, b)
    assert j.tuples == {(1, 2, 3)}


def test_join_commutative_associative_and_projects():
    rng = random.Random(4)
    for _ in range(60):
        gs = [samples.random_pathgraph(rng, 0, 4, max_comps=1) or single_edge(1) for _ in range(3)]
        rels = [samples.random_relation(rng, g, 3, 0.4) for g in gs]
        ab = R.join(rels[0], rels[1])
        ba = R.join(rels[1], rels[0])
        assert ab == ba
        assert R.join(ab, rels[2]) == R.join(rels[0], R.join(rels[1], rels[2]))
        # projections land back inside the factors
        averts = rels[0].verts
        for t in ab.tuples:
            m = dict(zip(ab.verts, t))
            assert tuple(m[v] for v in averts) in rels[0].tuples


# -- densities -----------------------------------------------------------------


def test_density_extremes():
    g = make_path(0, 2)
    assert R.density(R.Relation.full(g, 2)) == 1
    assert R.density(R.Relation.empty(g, 4), make_path(0, 1)) == 0


def test_density_conditioning_only_grows():
    rng = random.Random(5)
    for _ in range(100):
        g = samples.random_pathgraph(rng, 0, 5, max_comps=2)
        if not g:
            continue
        a = samples.random_relation(rng, g, 3, 0.4)
        f = samples.random_pathgraph(rng, 0, 5, max_comps=1)
        assert R.density(a) == R.density(a, EMPTY) <= R.density(a, f) <= 1


# -- the pathset predicate -------------------------------------------------------


def test_pathset_predicate_extremes():
    params = R.PathsetParams(3, 3)
    assert R.is_pathset(R.Relation.empty(single_edge(1), 3), params)
    assert not R.is_pathset(R.Relation.full(single_edge(1), 3), params)
    single = R.Relation(full_path(3), 3, [(1, 2, 1, 2)])
    assert R.is_pathset(single, params)


def rational_pathset_oracle(a: R.Relation, params: R.PathsetParams) -> bool:
    """Direct rational-power recomputation of the predicate."""
    n, k = params.n, params.k
    for f in R.subgraphs_of_path(k):
        mu = R.density(a, f)
        d = a.graph.ominus(f).delta
        # mu <= n^(-(k-1)d/k)  <=>  mu^k <= (1/n)^((k-1)d)
        if mu**k > Fraction(1, n ** ((k - 1) * d)):
            return False
    return True


def test_pathset_predicate_matches_rational_recomputation():
    rng = random.Random(6)
    params = R.PathsetParams(3, 4)
    agree = 0
    while agree < 200:
        g = samples.random_pathgraph(rng, 0, 4, max_comps=2)
        if not g:
            continue
        a = samples.random_relation(rng, g, 3, rng.choice([0.05, 0.15, 0.4]))
        assert R.is_pathset(a, params) == rational_pathset_oracle(a, params)
        agree += 1


# -- chain rules -----------------------------------------------------------------


def test_chain_rules_random():
    rng = random.Random(7)
    params = R.PathsetParams(3, 4)
    for _ in range(150):
        g1 = samples.random_pathgraph(rng, 0, 4, max_comps=2)
        g2 = samples.random_pathgraph(rng, 0, 4, max_comps=2)
        if not g1 or not g2:
            continue
        a = samples.random_relation(rng, g1, 3, 0.3)
        b = samples.random_relation(rng, g2, 3, 0.3)
        cond = samples.random_pathgraph(rng, 0, 4, max_comps=1)
        report = R.chain_rule_check([a, b], cond, params)
        assert report["ok"], report["violations"][:2]


def test_chain_rule_empty_side():
    g = make_path(0, 1)
    a = R.Relation.empty(g, 2)
    b = R.Relation.full(make_path(1, 2), 2)
    report = R.chain_rule_check([a, b])
    assert report["ok"]
    assert R.density(R.join(a, b)) == 0


def test_chain_rule_disjoint_equality():
    a = R.Relation(make_path(0, 1), 2, [(1, 1), (2, 1)])
    b = R.Relation(make_path(3, 4), 2, [(1, 2)])
    assert R.density(R.join(a, b)) == R.density(a) * R.density(b)


# -- sections and minterms ---------------------------------------------------------


def test_section_single_edge():
    assert R.section(single_edge(1), {0: 1, 1: 1}, 2) == frozenset({(1, 1, 1)})


def test_section_shares_inner_vertex():
    edges = R.section(make_path(0, 2), (1, 2, 1), 3)
    assert edges == frozenset({(1, 1, 2), (2, 2, 1)})


def test_section_preserves_edge_count():
    rng = random.Random(8)
    for _ in range(50):
        g = samples.random_pathgraph(rng, 0, 6, max_comps=2)
        alpha = {v: rng.randint(1, 3) for v in g.vertices()}
        assert len(R.section(g, alpha, 3)) == g.norm


def test_minterm_bridge_oracle():
    for n, k in ((2, 2), (2, 4), (3, 3), (4, 4)):
        m = R.minterms(R.bmm_evaluator(n, k), full_path(k), "M", n)
        want = {
            t for t in product(range(1, n + 1), repeat=k + 1) if t[0] == 1 and t[-1] == 1
        }
        assert m.tuples == want
        assert R.density(m) == Fraction(1, n * n)


def test_minterms_of_constant_one():
    m = R.minterms(lambda edges: 1, make_path(0, 2), "M", 2)
    assert not m.tuples


def test_dependence_mode_on_parity():
    g = make_path(0, 2)
    parity = lambda edges: len(edges) % 2
    m = R.minterms(parity, g, "N", 2)
    assert len(m.tuples) == 2 ** g.num_vertices


def test_minterms_within_dependence_relation():
    rng = random.Random(9)
    for _ in range(40):
        g = samples.random_pathgraph(rng, 0, 3, max_comps=2)
        if not g:
            continue
        phi = F.build_matrix_formula("D", 2, 3)
        ev = R.formula_evaluator(phi)
        mm = R.minterms(ev, g, "M", 2)
        nn = R.minterms(ev, g, "N", 2)
        assert mm.tuples <= nn.tuples


def _random_monotone_formula(rng, n, k, terms=3):
    """A small monotone DNF over the blow-up edge variables."""
    varpool = [(i, a, b) for i in range(1, k + 1) for a in range(1, n + 1) for b in range(1, n + 1)]
    out = []
    for _ in range(terms):
        width = rng.randint(1, 3)
        out.append(F.conj([F.lit(rng.choice(varpool)) for _ in range(width)]))
    return F.disj(out)


def test_minterm_gate_containments_exhaustive():
    rng = random.Random(10)
    n, k = 2, 3
    graphs = [g for g in R.subgraphs_of_path(k) if g]
    for _ in range(25):
        f1 = _random_monotone_formula(rng, n, k)
        f2 = _random_monotone_formula(rng, n, k)
        ev1, ev2 = R.formula_evaluator(f1), R.formula_evaluator(f2)
        ev_or = lambda e: ev1(e) | ev2(e)
        ev_and = lambda e: ev1(e) & ev2(e)
        for g in graphs:
            m_or = R.minterms(ev_or, g, "M", n).tuples
            m1 = R.minterms(ev1, g, "M", n).tuples
            m2 = R.minterms(ev2, g, "M", n).tuples
            assert m_or <= m1 | m2
            m_and = R.minterms(ev_and, g, "M", n)
            cover = set()
            for g1 in R.subgraphs_of_path(k):
                g2_needed = g.edge_difference(g1)
                if not g1.is_subgraph(g):
                    continue
                for g2 in R.subgraphs_of_path(k):
                    if not g2.is_subgraph(g) or g1.union(g2) != g:
                        continue
                    a = R.minterms(ev1, g1, "M", n)
                    b = R.minterms(ev2, g2, "M", n)
                    cover |= R.join(a, b).tuples
            assert m_and.tuples <= cover


# -- tree-shaped minterm subsets ------------------------------------------------------


def test_restricted_minterms_single_edge_tree():
    phi = F.build_matrix_formula("D", 2, 1)
    dm = F.convert(phi, "right_deep")
    g = single_edge(1)
    t = jt.leaf(g)
    assert (
        R.restricted_minterms(dm, g, t, 2).tuples
        == R.minterms(R.formula_evaluator(dm), g, "M", 2).tuples
    )


def test_restricted_minterms_empty_for_pure_disjunctions():
    # a right-comb of ORs has and-left-depth 0, so every proper tree split is
    # unreachable and the subsets die on graphs with two or more edges
    lits = [F.lit((i, 1, 1)) for i in (1, 2)]
    dm = F.convert(F.disj(lits), "right_deep")
    g = make_path(0, 2)
    for t in jt.enumerate_strict(g):
        if jt.left_depth(t) >= 1:
            assert not R.restricted_minterms(dm, g, t, 2).tuples


def test_restricted_minterms_union_identity():
    n, k = 2, 3
    dm = F.convert(F.build_matrix_formula("D", n, k), "right_deep")
    g = full_path(k)
    want = R.minterms(R.formula_evaluator(dm), g, "M", n).tuples
    union = set()
    best = 0
    trees = list(jt.enumerate_strict(g))
    for t in trees:
        got = R.restricted_minterms(dm, g, t, n).tuples
        union |= got
        best = max(best, len(got))
        if got:
            assert jt.left_depth(t) <= F.and_left_depth(dm)
    assert union == want
    # pigeonhole: some tree keeps a fair share
    d = F.and_left_depth(dm)
    assert best * 2 ** (g.norm ** (d + 1)) >= len(want)


# -- decomposition costs ---------------------------------------------------------------


def test_chi_lower_values():
    params = R.PathsetParams(2, 3)
    t = jt.maximally_overlapping(3)
    empty = R.Relation.empty(full_path(3), 2)
    assert R.chi_lower(t, empty, params)["float"] == 0.0
    single = R.Relation(full_path(3), 2, [(1, 2, 1, 2)])
    info = R.chi_lower(t, single, params)
    assert info["psi"] == 1
    assert info["float"] == pytest.approx(2.0 ** (2 / 3) * 2.0**-4)


def test_chi_lower_rejects_non_pathsets():
    params = R.PathsetParams(2, 3)
    t = jt.maximally_overlapping(3)
    with pytest.raises(DomainError):
        R.chi_lower(t, R.Relation.full(full_path(3), 2), params)


def test_chi_cost_single_literal():
    params = R.PathsetParams(2, 3)
    dm = F.dm_lit((1, 1, 1))
    g = single_edge(1)
    t = jt.leaf(g)
    assert R.chi_decomposition_cost(t, None, dm, params) == 1


def test_chi_cost_constant():
    params = R.PathsetParams(2, 3)
    t = jt.leaf(single_edge(1))
    assert R.chi_decomposition_cost(t, None, F.dm_const(0), params) == 0


def _substitute_ones(g, xi_edges):
    if g.op == "lit" and g.var in xi_edges:
        return F.dm_const(1)
    if g.op in ("and", "or"):
        return F.DeMorgan(g.op, _substitute_ones(g.left, xi_edges), _substitute_ones(g.right, xi_edges))
    return g


def test_chi_cost_toy_pipeline():
    # frozen restriction seed for which every subformula minterm relation is
    # a pathset (found by scanning seeds once; deterministic thereafter)
    n, k, seed = 2, 3, 0
    params = R.PathsetParams(n, k)
    dm = F.convert(F.build_matrix_formula("D", n, k), "right_deep")
    sample = R.sample_xi(n, k, seed)
    fx = _substitute_ones(dm, sample.xi_edges())
    g = full_path(k)
    costs = []
    for t in list(jt.enumerate_strict(g))[:8]:
        cost = R.chi_decomposition_cost(t, None, fx, params)
        costs.append(cost)
        mgt = R.restricted_minterms(fx, g, t, n)
        assert R.exceeds_ntilde_bound(cost, params, jt.psi(t), mgt)
    assert any(c > 0 for c in costs)


# -- restrictions --------------------------------------------------------------------


def test_induced_subperm_rules():
    zeta = np.array([[1, 1], [0, 1]], dtype=np.int8)
    xi = R.induced_subperm(zeta)
    # row 0 has two ones -> both die; column 1 then still has two ones
    assert xi.tolist() == [[0, 0], [0, 0]]
    zeta = np.array([[1, 0], [1, 0]], dtype=np.int8)
    assert R.induced_subperm(zeta).tolist() == [[0, 0], [0, 0]]
    zeta = np.array([[1, 0], [0, 1]], dtype=np.int8)
    assert R.induced_subperm(zeta).tolist() == [[1, 0], [0, 1]]
    zeros = np.zeros((3, 3), dtype=np.int8)
    assert R.induced_subperm(zeros).tolist() == zeros.tolist()


def test_sampled_xi_always_subperm():
    for seed in range(500):
        assert R.sample_xi(20, 3, seed).xi_is_subperm()


def test_empty_restriction_reproduces_exact_density():
    n, k = 4, 2
    xi = np.zeros((k, n, n), dtype=np.int8)
    count = R._minterm_count_bmm_restricted(xi, n, k)
    assert Fraction(count, n ** (k + 1)) == Fraction(1, n * n)


def test_restricted_count_matches_generic_scan():
    n, k = 4, 2
    for seed in range(10):
        sample = R.sample_xi(n, k, seed)
        fast = R._minterm_count_bmm_restricted(sample.xi, n, k)
        ev = R.bmm_evaluator(n, k)
        xi_edges = sample.xi_edges()
        slow = len(R.minterms(lambda e: ev(e | xi_edges), full_path(k), "M", n).tuples)
        assert fast == slow


def test_montecarlo_mpath2_smoke():
    report = R.montecarlo_mpath2(4, 2, trials=20, seed=11)
    assert 0.0 <= report["frequency"] <= 1.0
    assert len(report["rows"]) == 20


def test_montecarlo_mpath2_formula_backed_matches_fast_path():
    n, k = 3, 2
    ev = R.bmm_evaluator(n, k)
    fast = R.montecarlo_mpath2(n, k, trials=12, seed=21)
    slow = R.montecarlo_mpath2(n, k, trials=12, seed=21, f=ev)
    assert [r["count"] for r in fast["rows"]] == [r["count"] for r in slow["rows"]]


# -- strictified random join trees ------------------------------------------------------


def test_eps1_single_edge_is_certain():
    report = R.montecarlo_eps1(1, 5, trials=200, seed=0)
    assert report["frequency"] == 1.0


def test_eps1_uniform_floor():
    freqs = [R.montecarlo_eps1(2, t, trials=1500, seed=3)["frequency"] for t in range(2, 11)]
    assert min(freqs) > 0.3


def test_eps1_skewed_distribution():
    report = R.montecarlo_eps1(2, 9, trials=2000, seed=4, p=[0.99, 0.01])
    assert report["frequency"] > 0.0


def test_relation_json_round_trip():
    a = R.Relation(make_path(0, 2), 3, [(1, 2, 3), (3, 2, 1)])
    assert R.Relation.from_json(a.to_json()) == a
