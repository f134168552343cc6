"""Relations over path graphs: joins, exact densities, the pathset predicate,
blow-up sections, minterm relations, decomposition-cost certificates, and the
random-restriction experiments.

Densities are exact rationals.  The pathset predicate compares against the
irrational-exponent threshold n^((k-1)/k) by raising both sides to the k-th
power, so the comparison stays in big integers; no tolerance exists anywhere
in this module.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from . import formulas, jointrees
from .errors import DomainError, InvalidParameterError, ResourceLimitError
from .paths import EMPTY, PathGraph, from_edges, full_path

# ---------------------------------------------------------------------------
# relations and densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathsetParams:
    n: int
    k: int

    @property
    def ntilde_exponent(self) -> Fraction:
        return Fraction(self.k - 1, self.k)


class Relation:
    """A set of assignments V(graph) -> [n], attached to its graph."""

    __slots__ = ("graph", "n", "verts", "tuples")

    def __init__(self, graph: PathGraph, n: int, tuples: Iterable[Sequence[int]]):
        self.graph = graph
        self.n = n
        self.verts = tuple(graph.vertices())
        frozen = frozenset(tuple(t) for t in tuples)
        for t in frozen:
            if len(t) != len(self.verts) or any(not 1 <= x <= n for x in t):
                raise DomainError(f"tuple {t} does not fit V(G) -> [{n}]")
        self.tuples = frozen

    def __len__(self):
        return len(self.tuples)

    def __eq__(self, other):
        return (
            isinstance(other, Relation)
            and self.graph == other.graph
            and self.n == other.n
            and self.tuples == other.tuples
        )

    def __hash__(self):
        return hash((self.graph, self.n, self.tuples))

    def __repr__(self):
        return f"Relation({self.graph!r}, n={self.n}, |A|={len(self.tuples)})"

    def assignments(self) -> Iterable[dict[int, int]]:
        for t in self.tuples:
            yield dict(zip(self.verts, t))

    @classmethod
    def full(cls, graph: PathGraph, n: int) -> "Relation":
        nv = graph.num_vertices
        return cls(graph, n, product(range(1, n + 1), repeat=nv))

    @classmethod
    def empty(cls, graph: PathGraph, n: int) -> "Relation":
        return cls(graph, n, ())

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "n": self.n,
            "tuples": sorted(list(t) for t in self.tuples),
        }

    @classmethod
    def from_json(cls, data) -> "Relation":
        return cls(PathGraph.from_json(data["graph"]), data["n"], data["tuples"])


def join(a: Relation, b: Relation) -> Relation:
    """Tuples over the union graph whose projections lie in both relations."""
    if a.n != b.n:
        raise DomainError(f"mismatched universes n={a.n} vs n={b.n}")
    g = a.graph.union(b.graph)
    verts = tuple(g.vertices())
    pos_a = [verts.index(v) for v in a.verts]
    shared = [v for v in b.verts if v in set(a.verts)]
    shared_in_b = [b.verts.index(v) for v in shared]
    index: dict[tuple, list] = {}
    for tb in b.tuples:
        index.setdefault(tuple(tb[i] for i in shared_in_b), []).append(tb)
    out = []
    b_pos = {v: i for i, v in enumerate(b.verts)}
    for ta in a.tuples:
        amap = dict(zip(a.verts, ta))
        key = tuple(amap[v] for v in shared)
        for tb in index.get(key, ()):
            merged = dict(amap)
            merged.update(zip(b.verts, tb))
            out.append(tuple(merged[v] for v in verts))
    return Relation(g, a.n, out)


def join_all(rels: Sequence[Relation]) -> Relation:
    out = rels[0]
    for r in rels[1:]:
        out = join(out, r)
    return out


def density(a: Relation, cond: PathGraph | None = None) -> Fraction:
    """mu(A), or the maximum density of A conditioned on a graph."""
    if cond is None or not cond:
        return Fraction(len(a.tuples), a.n ** len(a.verts))
    shared_pos = [i for i, v in enumerate(a.verts) if cond.has_vertex(v)]
    free = len(a.verts) - len(shared_pos)
    if not a.tuples:
        return Fraction(0)
    counts: dict[tuple, int] = {}
    for t in a.tuples:
        key = tuple(t[i] for i in shared_pos)
        counts[key] = counts.get(key, 0) + 1
    return Fraction(max(counts.values()), a.n**free)


def _max_conditional_count(a: Relation, cond: PathGraph) -> int:
    shared_pos = [i for i, v in enumerate(a.verts) if cond.has_vertex(v)]
    if not a.tuples:
        return 0
    counts: dict[tuple, int] = {}
    for t in a.tuples:
        key = tuple(t[i] for i in shared_pos)
        counts[key] = counts.get(key, 0) + 1
    return max(counts.values())


def subgraphs_of_path(k: int) -> list[PathGraph]:
    """All 2^k subgraphs of Path_k (as interval unions)."""
    return [from_edges(i for i in range(1, k + 1) if (bits >> (i - 1)) & 1) for bits in range(1 << k)]


def is_pathset(a: Relation, params: PathsetParams, k_limit: int = 10) -> bool:
    """Exact predicate: mu(A | F) <= ntilde^(-delta(G - F)) for every subgraph
    F of Path_k, via integer comparison of k-th powers."""
    n, k = params.n, params.k
    if k > k_limit:
        raise ResourceLimitError(f"k={k} exceeds pathset-check limit {k_limit}")
    if a.n != n:
        raise DomainError(f"relation universe {a.n} != params n={n}")
    if not a.graph.is_subgraph(full_path(k)):
        raise DomainError(f"{a.graph!r} is not a subgraph of Path_{k}")
    for f in subgraphs_of_path(k):
        d = a.graph.ominus(f).delta
        shared = sum(1 for v in a.verts if f.has_vertex(v))
        free = len(a.verts) - shared
        c = _max_conditional_count(a, f)
        # (c / n^free)^k <= n^-(k-1) d
        if c**k * n ** ((k - 1) * d) > n ** (k * free):
            return False
    return True


def chain_rule_check(
    rels: Sequence[Relation], cond: PathGraph = EMPTY, params: PathsetParams | None = None
) -> dict:
    """The join-density chain rule, its m-ary version over all permutations,
    and (for pathsets, when params are given) the ordered pathset bound."""
    from itertools import permutations as _perms

    from .paths import vec_delta as _vd

    report: dict = {"checked": 0, "violations": []}
    if len(rels) >= 2:
        a, b = rels[0], join_all(rels[1:])
        lhs = density(join(a, b), cond)
        rhs = density(a, cond) * density(b, cond.union(a.graph))
        report["checked"] += 1
        if lhs > rhs:
            report["violations"].append({"rule": "binary", "lhs": str(lhs), "rhs": str(rhs)})
    joined = join_all(list(rels))
    mu_join = density(joined)
    for perm in _perms(range(len(rels))):
        acc = EMPTY
        rhs = Fraction(1)
        for i in perm:
            rhs *= density(rels[i], acc)
            acc = acc.union(rels[i].graph)
        report["checked"] += 1
        if mu_join > rhs:
            report["violations"].append(
                {"rule": "m-ary", "perm": list(perm), "lhs": str(mu_join), "rhs": str(rhs)}
            )
    if params is not None and all(is_pathset(r, params) for r in rels):
        n, k = params.n, params.k
        nv = len(joined.verts)
        for perm in _perms(range(len(rels))):
            vd = _vd([rels[i].graph for i in perm])
            # mu^k <= ntilde^-vd  <=>  |A|^k n^((k-1) vd) <= n^(k nv)
            report["checked"] += 1
            if len(joined) ** k * n ** ((k - 1) * vd) > n ** (k * nv):
                report["violations"].append(
                    {"rule": "pathset-join", "perm": list(perm), "vec_delta": vd}
                )
    report["ok"] = not report["violations"]
    return report


# ---------------------------------------------------------------------------
# blow-up sections and minterm relations
# ---------------------------------------------------------------------------


def section(g: PathGraph, alpha: dict[int, int] | Sequence[int], n: int) -> frozenset:
    """Blow-up edges (i, alpha_{i-1}, alpha_i) of the copy of g selected by alpha."""
    if not isinstance(alpha, dict):
        alpha = dict(zip(g.vertices(), alpha))
    for v, x in alpha.items():
        if not 1 <= x <= n:
            raise DomainError(f"alpha[{v}] = {x} outside [{n}]")
    return frozenset((i, alpha[i - 1], alpha[i]) for i in g.edges())


Evaluator = Callable[[frozenset], int]


def formula_evaluator(phi) -> Evaluator:
    def run(edges: frozenset) -> int:
        return formulas.evaluate(phi, lambda var: 1 if var in edges else 0)

    return run


def bmm_evaluator(n: int, k: int, a0: int = 1, ak: int = 1) -> Evaluator:
    def run(edges: frozenset) -> int:
        reach = {a0}
        for i in range(1, k + 1):
            reach = {b for (j, a, b) in edges if j == i and a in reach}
            if not reach:
                return 0
        return 1 if ak in reach else 0

    return run


def minterms(
    f: Evaluator,
    g: PathGraph,
    mode: Literal["M", "N"],
    n: int,
    budget: int = 2_000_000,
) -> Relation:
    """mode M: alpha whose section is a minimal 1-certificate of (monotone) f;
    mode N: alpha whose restricted subfunction depends on every edge."""
    verts = tuple(g.vertices())
    edges = tuple(g.edges())
    per_alpha = (len(edges) + 1) if mode == "M" else (1 << len(edges))
    if n ** len(verts) * per_alpha > budget:
        raise ResourceLimitError("minterm scan exceeds evaluation budget")
    out = []
    for alpha in product(range(1, n + 1), repeat=len(verts)):
        amap = dict(zip(verts, alpha))
        full = frozenset((i, amap[i - 1], amap[i]) for i in edges)
        if mode == "M":
            if not f(full):
                continue
            by_edge = {i: (i, amap[i - 1], amap[i]) for i in edges}
            if all(not f(full - {by_edge[i]}) for i in edges):
                out.append(alpha)
        else:
            by_edge = [(i, amap[i - 1], amap[i]) for i in edges]
            values = {}
            for bits in range(1 << len(edges)):
                sub = frozenset(by_edge[j] for j in range(len(edges)) if (bits >> j) & 1)
                values[bits] = f(sub)
            depends_all = True
            for j in range(len(edges)):
                if not any(
                    values[bits] != values[bits | (1 << j)]
                    for bits in range(1 << len(edges))
                    if not (bits >> j) & 1
                ):
                    depends_all = False
                    break
            if depends_all:
                out.append(alpha)
    return Relation(g, n, out)


def _strict_tree_parts(t: jointrees.JoinTree):
    if t.is_leaf:
        raise DomainError("expected an internal node of a strict join tree")
    return t.left, t.right


def restricted_minterms(
    fdm: formulas.DeMorgan,
    g: PathGraph,
    t: jointrees.JoinTree,
    n: int,
    budget: int = 2_000_000,
) -> Relation:
    """The tree-shaped subset of the minterm relation: literals only reach
    graphs of at most one edge, disjunctions filter, and conjunctions add the
    join along the tree split."""
    if not jointrees.is_strict(t):
        raise DomainError("the join tree must be strict")
    if t.graph != g:
        raise DomainError("join tree root graph differs from g")
    plain_memo: dict[tuple, Relation] = {}
    tree_memo: dict[tuple, Relation] = {}

    def plain(node, h: PathGraph) -> Relation:
        key = (id(node), h)
        got = plain_memo.get(key)
        if got is None:
            got = minterms(formula_evaluator(node), h, "M", n, budget)
            plain_memo[key] = got
        return got

    def rec(node, h: PathGraph, tree: jointrees.JoinTree) -> Relation:
        key = (id(node), h, tree)
        got = tree_memo.get(key)
        if got is not None:
            return got
        if h.norm <= 1:
            out = plain(node, h)
        elif node.op not in ("and", "or"):
            out = Relation.empty(h, n)
        else:
            t1, t2 = _strict_tree_parts(tree)
            base = plain(node, h)
            parts = rec(node.left, h, tree).tuples | rec(node.right, h, tree).tuples
            if node.op == "and":
                joined = join(
                    rec(node.left, t1.graph, t1), rec(node.right, t2.graph, t2)
                )
                parts = parts | joined.tuples
            out = Relation(h, n, base.tuples & parts)
        tree_memo[key] = out
        return out

    return rec(fdm, g, t)


# ---------------------------------------------------------------------------
# decomposition-cost certificates
# ---------------------------------------------------------------------------


def ntilde_power_mu(params: PathsetParams, psi_value: int, rel: Relation) -> float:
    """Float rendering of ntilde^psi * mu(rel)."""
    n, k = params.n, params.k
    exponent = Fraction(k - 1, k) * psi_value - len(rel.verts)
    return len(rel.tuples) * float(n) ** float(exponent)


def exceeds_ntilde_bound(cost: int, params: PathsetParams, psi_value: int, rel: Relation) -> bool:
    """cost >= ntilde^psi * mu(rel), exactly (k-th powers in big integers)."""
    n, k = params.n, params.k
    nv = len(rel.verts)
    return cost**k * n ** (k * nv) >= n ** ((k - 1) * psi_value) * len(rel.tuples) ** k


def chi_lower(t: jointrees.JoinTree, a: Relation, params: PathsetParams) -> dict:
    """The complexity floor ntilde^Psi(T) * mu(A) for a pathset A, as exact
    exponent data plus a float rendering."""
    if not is_pathset(a, params):
        raise DomainError("chi_lower is defined for pathsets only")
    if t.graph != a.graph:
        raise DomainError("join tree and relation live on different graphs")
    psi_value = jointrees.psi(t)
    return {
        "psi": psi_value,
        "count": len(a.tuples),
        "exponent": Fraction(params.k - 1, params.k) * psi_value - len(a.verts),
        "float": ntilde_power_mu(params, psi_value, a),
    }


def chi_decomposition_cost(
    t: jointrees.JoinTree,
    a: Relation | None,
    fdm: formulas.DeMorgan,
    params: PathsetParams,
    budget: int = 2_000_000,
) -> int:
    """Certified covering cost of the tree-shaped minterm subset, following
    the formula's gates (sums at gates, max across the tree split).  Checks
    the binomial upper bound in size(f) and the ntilde^Psi * mu lower bound."""
    n, k = params.n, params.k
    g = t.graph
    if not jointrees.is_strict(t):
        raise DomainError("the join tree must be strict")
    subformula_ids = set()
    stack = [fdm]
    subs = []
    while stack:
        node = stack.pop()
        if id(node) in subformula_ids:
            continue
        subformula_ids.add(id(node))
        subs.append(node)
        if node.op in ("and", "or"):
            stack.extend((node.left, node.right))
    for node in subs:
        for h in subgraphs_of_path(k):
            rel = minterms(formula_evaluator(node), h, "M", n, budget)
            if not is_pathset(rel, params):
                raise DomainError(
                    f"minterm relation of a subformula on {h!r} is not a pathset"
                )

    plain_memo: dict[tuple, Relation] = {}

    def plain(node, h: PathGraph) -> Relation:
        key = (id(node), h)
        got = plain_memo.get(key)
        if got is None:
            got = minterms(formula_evaluator(node), h, "M", n, budget)
            plain_memo[key] = got
        return got

    def cost(node, h: PathGraph, tree: jointrees.JoinTree) -> int:
        if h.norm <= 1:
            return 1 if plain(node, h).tuples else 0
        if node.op not in ("and", "or"):
            return 0
        if node.op == "or":
            return cost(node.left, h, tree) + cost(node.right, h, tree)
        t1, t2 = _strict_tree_parts(tree)
        return (
            cost(node.left, h, tree)
            + cost(node.right, h, tree)
            + max(cost(node.left, t1.graph, t1), cost(node.right, t2.graph, t2))
        )

    total = cost(fdm, g, t)
    d_cap = formulas.and_depth(fdm)
    bound = math.comb(d_cap + g.norm - 1, g.norm - 1) * formulas.size(fdm)
    if total > bound:
        raise AssertionError(f"certified cost {total} exceeds the binomial bound {bound}")
    mgt = restricted_minterms(fdm, g, t, n, budget)
    if a is None:
        target = mgt
    else:
        if not a.tuples <= mgt.tuples:
            raise DomainError("relation is not inside the tree-shaped minterm subset")
        target = a
    psi_value = jointrees.psi(t)
    if not exceeds_ntilde_bound(total, params, psi_value, target):
        raise AssertionError("certified cost fell below the ntilde^Psi * mu floor")
    return total


# ---------------------------------------------------------------------------
# random restrictions
# ---------------------------------------------------------------------------


@dataclass
class RestrictionSample:
    zeta: np.ndarray  # shape (k, n, n), 0/1
    xi: np.ndarray  # induced sub-permutation matrices
    seed: int

    def xi_is_subperm(self) -> bool:
        return all(
            formulas.is_subperm_matrix(self.xi[i].tolist()) for i in range(self.xi.shape[0])
        )

    def xi_edges(self) -> frozenset:
        k, n, _ = self.xi.shape
        return frozenset(
            (i + 1, a + 1, b + 1)
            for i in range(k)
            for a in range(n)
            for b in range(n)
            if self.xi[i, a, b]
        )


def induced_subperm(zeta: np.ndarray) -> np.ndarray:
    """Keep an entry only when it is the unique 1 in its row and column."""
    rows = zeta.sum(axis=1, keepdims=True)
    cols = zeta.sum(axis=0, keepdims=True)
    return (zeta & (rows == 1) & (cols == 1)).astype(np.int8)


def sample_xi(n: int, k: int, seed: int) -> RestrictionSample:
    if n < 2:
        raise InvalidParameterError("n must be >= 2")
    rng = np.random.default_rng(seed)
    p = float(n) ** (-1.0 - 1.0 / (2.0 * k))
    zeta = (rng.random((k, n, n)) < p).astype(np.int8)
    xi = np.stack([induced_subperm(zeta[i]) for i in range(k)])
    return RestrictionSample(zeta, xi, seed)


def _minterm_count_bmm_restricted(xi: np.ndarray, n: int, k: int) -> int:
    """|M_{Path_k}(bmm^(union Xi))| by scanning all alpha and testing each
    single-edge deletion via bitmask reachability."""
    rows = [[0] * (n + 1) for _ in range(k + 1)]  # rows[i][a] = bitmask of b's
    for i in range(1, k + 1):
        for a in range(1, n + 1):
            mask = 0
            for b in range(1, n + 1):
                if xi[i - 1, a - 1, b - 1]:
                    mask |= 1 << b
            rows[i][a] = mask

    def reaches(alpha: tuple[int, ...], skip: int) -> bool:
        reach = 1 << 1  # start at index 1
        for i in range(1, k + 1):
            nxt = 0
            r = reach
            while r:
                low = r & -r
                r ^= low
                nxt |= rows[i][low.bit_length() - 1]
            if i != skip and (reach >> alpha[i - 1]) & 1:
                nxt |= 1 << alpha[i]
            reach = nxt
            if not reach:
                return False
        return bool((reach >> 1) & 1)

    count = 0
    for alpha in product(range(1, n + 1), repeat=k + 1):
        if not reaches(alpha, 0):
            continue
        if all(not reaches(alpha, i) for i in range(1, k + 1)):
            count += 1
    return count


def montecarlo_mpath2(
    n: int,
    k: int,
    trials: int,
    seed: int,
    f: Evaluator | None = None,
    budget: int = 50_000_000,
) -> dict:
    """Fraction of restriction samples for which the restricted minterm
    relation keeps density at least 1/(2 n^2)."""
    if n ** (k + 1) * (k + 1) * trials > budget:
        raise ResourceLimitError("minterm scans exceed the Monte Carlo budget")
    threshold = Fraction(1, 2 * n * n)
    denom = n ** (k + 1)
    hits = 0
    rows = []
    for i in range(trials):
        sample = sample_xi(n, k, seed + i)
        if f is None:
            count = _minterm_count_bmm_restricted(sample.xi, n, k)
        else:
            xi_edges = sample.xi_edges()
            restricted: Evaluator = lambda edges: f(edges | xi_edges)
            count = len(minterms(restricted, full_path(k), "M", n, budget).tuples)
        dens = Fraction(count, denom)
        ok = dens >= threshold
        hits += ok
        rows.append({"trial": i, "count": count, "density": str(dens), "hit": bool(ok)})
    return {
        "n": n,
        "k": k,
        "trials": trials,
        "seed": seed,
        "frequency": hits / trials if trials else 0.0,
        "threshold": str(threshold),
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# strictified random join trees
# ---------------------------------------------------------------------------


def montecarlo_eps1(
    k: int,
    t: int,
    trials: int,
    seed: int,
    p: Sequence[float] | None = None,
    t_limit: int = 14,
    k_limit: int = 4,
) -> dict:
    """Frequency with which the strictification of a random depth-t join tree
    (leaves drawn independently over the k single edges) collapses to the
    canonical doubling-combinator tree of all k edges."""
    if k > k_limit or t > t_limit:
        raise ResourceLimitError(f"limits are k <= {k_limit}, t <= {t_limit}")
    if p is None:
        probs = np.full(k, 1.0 / k)
    else:
        probs = np.asarray(p, dtype=float)
        if len(probs) != k or abs(probs.sum() - 1.0) > 1e-9 or (probs <= 0).any():
            raise InvalidParameterError("p must be a positive length-k distribution")
    rng = np.random.default_rng(seed)

    intern: dict = {}
    graph_mask: list[int] = []
    combine: dict[tuple[int, int], int] = {}

    def leaf_id(edge: int) -> int:
        key = ("leaf", 1 << (edge - 1))
        if key not in intern:
            intern[key] = len(intern)
            graph_mask.append(1 << (edge - 1))
        return intern[key]

    def node_id(a: int, b: int) -> int:
        got = combine.get((a, b))
        if got is not None:
            return got
        mask = graph_mask[a] | graph_mask[b]
        if graph_mask[a] == mask:
            out = a
        elif graph_mask[b] == mask:
            out = b
        else:
            key = ("node", a, b)
            if key not in intern:
                intern[key] = len(intern)
                graph_mask.append(mask)
            out = intern[key]
        combine[(a, b)] = out
        return out

    # intern the target by the same rules (it is already strict)
    def intern_strict(tree: jointrees.JoinTree) -> int:
        if tree.is_leaf:
            return leaf_id(next(iter(tree.graph.edges())))
        a = intern_strict(tree.left)
        b = intern_strict(tree.right)
        key = ("node", a, b)
        if key not in intern:
            intern[key] = len(intern)
            graph_mask.append(graph_mask[a] | graph_mask[b])
        return intern[key]

    target = intern_strict(
        jointrees.sem([jointrees.leaf(from_edges([i])) for i in range(1, k + 1)])
    )

    leaf_ids = np.array([leaf_id(i) for i in range(1, k + 1)], dtype=np.int64)
    draws = rng.choice(k, size=(trials, 1 << t), p=probs)
    ids = leaf_ids[draws]
    width = 1 << t
    while width > 1:
        left = ids[:, 0:width:2]
        right = ids[:, 1:width:2]
        codes = left.astype(np.int64) * (1 << 32) + right
        uniq, inverse = np.unique(codes, return_inverse=True)
        mapped = np.array(
            [node_id(int(c >> 32), int(c & 0xFFFFFFFF)) for c in uniq], dtype=np.int64
        )
        ids = mapped[inverse].reshape(left.shape)
        width //= 2
    matches = int((ids[:, 0] == target).sum())
    return {
        "k": k,
        "t": t,
        "trials": trials,
        "seed": seed,
        "matches": matches,
        "frequency": matches / trials if trials else 0.0,
    }
