"""Unbounded fan-in and binary Boolean formulas over matrix-entry variables
or edge variables, with the block constructions for deciding the top-left
entry of a product of sub-permutation matrices.

Variable conventions: a matrix-entry variable is the triple ``(i, a, b)``
(1-based: entry (a, b) of the i-th matrix); an edge variable is the integer
``i`` for the i-th edge of the path.  Exhaustive checks run on truth tables
packed into Python big integers (bit j holds the value of input j).
"""

from __future__ import annotations

import random
from itertools import product
from typing import Callable, Iterable, Literal, Sequence

from .errors import (
    ArityError,
    DomainError,
    InvalidParameterError,
    ResourceLimitError,
)
from .paths import EMPTY, PathGraph, from_edges

# ---------------------------------------------------------------------------
# IR
# ---------------------------------------------------------------------------


class Formula:
    """Unbounded fan-in AND/OR tree over literals and constants."""

    __slots__ = ("op", "children", "var", "neg", "value")

    def __init__(self, op, children=(), var=None, neg=False, value=0):
        self.op = op
        self.children = children
        self.var = var
        self.neg = neg
        self.value = value

    def __repr__(self):
        if self.op == "const":
            return f"const({self.value})"
        if self.op == "lit":
            return f"lit({self.var}{', neg' if self.neg else ''})"
        return f"{self.op}<{len(self.children)}>"


def const(value: int) -> Formula:
    return Formula("const", value=1 if value else 0)


def lit(var, neg: bool = False) -> Formula:
    return Formula("lit", var=var, neg=neg)


def _gate(op: str, children: Sequence[Formula]) -> Formula:
    kids = []
    for c in children:
        if c.op == op:
            kids.extend(c.children)  # merge same-op gates, keeping depth tight
        else:
            kids.append(c)
    if not kids:
        raise ArityError(f"{op} gate needs at least one child")
    if len(kids) == 1:
        return kids[0]
    return Formula(op, tuple(kids))


def conj(children: Sequence[Formula]) -> Formula:
    return _gate("and", children)


def disj(children: Sequence[Formula]) -> Formula:
    return _gate("or", children)


class DeMorgan:
    """Binary AND/OR tree over the same leaves."""

    __slots__ = ("op", "left", "right", "var", "neg", "value")

    def __init__(self, op, left=None, right=None, var=None, neg=False, value=0):
        self.op = op
        self.left = left
        self.right = right
        self.var = var
        self.neg = neg
        self.value = value

    def __repr__(self):
        if self.op == "const":
            return f"dm_const({self.value})"
        if self.op == "lit":
            return f"dm_lit({self.var}{', neg' if self.neg else ''})"
        return f"dm_{self.op}"


def dm_const(value: int) -> DeMorgan:
    return DeMorgan("const", value=1 if value else 0)


def dm_lit(var, neg: bool = False) -> DeMorgan:
    return DeMorgan("lit", var=var, neg=neg)


def dm_and(left: DeMorgan, right: DeMorgan) -> DeMorgan:
    return DeMorgan("and", left, right)


def dm_or(left: DeMorgan, right: DeMorgan) -> DeMorgan:
    return DeMorgan("or", left, right)


def _dm_children(g: DeMorgan) -> tuple:
    return (g.left, g.right) if g.op in ("and", "or") else ()


# ---------------------------------------------------------------------------
# measures (memoized by node identity so shared subtrees are walked once)
# ---------------------------------------------------------------------------


def _measure(phi, combine, leaf_value):
    memo: dict[int, object] = {}

    def rec(node):
        got = memo.get(id(node))
        if got is None:
            kids = node.children if isinstance(node, Formula) else _dm_children(node)
            if not kids:
                got = leaf_value(node)
            else:
                got = combine(node, [rec(c) for c in kids])
            memo[id(node)] = got
        return got

    return rec(phi)


def size(phi) -> int:
    """Number of leaves labeled by literals."""
    return _measure(
        phi,
        lambda node, vals: sum(vals),
        lambda node: 1 if node.op == "lit" else 0,
    )


def depth(phi) -> int:
    return _measure(phi, lambda node, vals: 1 + max(vals), lambda node: 0)


def and_depth(phi) -> int:
    return _measure(
        phi,
        lambda node, vals: (1 if node.op == "and" else 0) + max(vals),
        lambda node: 0,
    )


def fanin(phi) -> int:
    return _measure(
        phi,
        lambda node, vals: max(
            len(node.children if isinstance(node, Formula) else _dm_children(node)),
            max(vals),
        ),
        lambda node: 0,
    )


def and_fanin(phi) -> int:
    def combine(node, vals):
        kids = node.children if isinstance(node, Formula) else _dm_children(node)
        own = len(kids) if node.op == "and" else 0
        return max(own, max(vals))

    return _measure(phi, combine, lambda node: 0)


def is_monotone(phi) -> bool:
    return _measure(
        phi,
        lambda node, vals: all(vals),
        lambda node: not (node.op == "lit" and node.neg),
    )


def left_depth(g: DeMorgan) -> int:
    memo: dict[int, int] = {}

    def rec(node):
        got = memo.get(id(node))
        if got is None:
            if node.op in ("and", "or"):
                got = max(rec(node.left) + 1, rec(node.right))
            else:
                got = 0
            memo[id(node)] = got
        return got

    return rec(g)


def and_left_depth(g: DeMorgan) -> int:
    memo: dict[int, int] = {}

    def rec(node):
        got = memo.get(id(node))
        if got is None:
            if node.op in ("and", "or"):
                step = 1 if node.op == "and" else 0
                got = max(rec(node.left) + step, rec(node.right))
            else:
                got = 0
            memo[id(node)] = got
        return got

    return rec(g)


def variables(phi) -> set:
    out: set = set()
    seen: set[int] = set()

    def rec(node):
        if id(node) in seen:
            return
        seen.add(id(node))
        if node.op == "lit":
            out.add(node.var)
        for c in node.children if isinstance(node, Formula) else _dm_children(node):
            rec(c)

    rec(phi)
    return out


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def evaluate(phi, getval: Callable) -> int:
    """Evaluate against ``getval(var) -> 0/1``."""
    memo: dict[int, int] = {}

    def rec(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        if node.op == "const":
            v = node.value
        elif node.op == "lit":
            v = getval(node.var)
            if node.neg:
                v = 1 - v
        else:
            kids = node.children if isinstance(node, Formula) else _dm_children(node)
            if node.op == "and":
                v = 1
                for c in kids:
                    if rec(c) == 0:
                        v = 0
                        break
            else:
                v = 0
                for c in kids:
                    if rec(c) == 1:
                        v = 1
                        break
        memo[id(node)] = v
        return v

    return rec(phi)


def matrix_env(matrices: Sequence[Sequence[Sequence[int]]]) -> Callable:
    def getval(var):
        i, a, b = var
        return 1 if matrices[i - 1][a - 1][b - 1] else 0

    return getval


def edge_set_env(edges: frozenset | set) -> Callable:
    """Input as a set of blow-up edges (i, a, b)."""
    return lambda var: 1 if var in edges else 0


def edge_assignment_env(bits: dict | int) -> Callable:
    if isinstance(bits, dict):
        return lambda var: 1 if bits[var] else 0
    return lambda var: (bits >> (var - 1)) & 1


# -- packed truth tables -----------------------------------------------------


def var_table(index: int, nvars: int) -> int:
    """Truth table of variable ``index`` (0-based) over 2^nvars inputs."""
    block = ((1 << (1 << index)) - 1) << (1 << index)
    width = 1 << (index + 1)
    total = 1 << nvars
    while width < total:
        block |= block << width
        width <<= 1
    return block


def truth_table(phi, varlist: Sequence, nvars_limit: int = 24) -> int:
    """Packed truth table of the formula over the given variable order."""
    n = len(varlist)
    if n > nvars_limit:
        raise ResourceLimitError(f"{n} variables exceeds truth-table limit {nvars_limit}")
    full = (1 << (1 << n)) - 1
    index = {v: i for i, v in enumerate(varlist)}
    tables = {v: var_table(i, n) for v, i in index.items()}
    memo: dict[int, int] = {}

    def rec(node):
        got = memo.get(id(node))
        if got is not None:
            return got
        if node.op == "const":
            v = full if node.value else 0
        elif node.op == "lit":
            v = tables[node.var]
            if node.neg:
                v ^= full
        else:
            kids = node.children if isinstance(node, Formula) else _dm_children(node)
            if node.op == "and":
                v = full
                for c in kids:
                    v &= rec(c)
            else:
                v = 0
                for c in kids:
                    v |= rec(c)
        memo[id(node)] = v
        return v

    return rec(phi)


# ---------------------------------------------------------------------------
# brute-force matrix oracles
# ---------------------------------------------------------------------------


def is_subperm_matrix(matrix: Sequence[Sequence[int]]) -> bool:
    n = len(matrix)
    for row in matrix:
        if sum(1 for x in row if x) > 1:
            return False
    for b in range(n):
        if sum(1 for a in range(n) if matrix[a][b]) > 1:
            return False
    return True


def oracle_bmm(matrices, a0: int = 1, ak: int = 1) -> int:
    """Entry (a0, ak) of the Boolean matrix product, by reachability."""
    n = len(matrices[0])
    reach = {a0 - 1}
    for mat in matrices:
        reach = {b for a in reach for b in range(n) if mat[a][b]}
        if not reach:
            return 0
    return 1 if (ak - 1) in reach else 0


def oracle_subpmm(matrices, a0: int = 1, ak: int = 1) -> int:
    for mat in matrices:
        if not is_subperm_matrix(mat):
            raise DomainError("input is not a tuple of sub-permutation matrices")
    return oracle_bmm(matrices, a0, ak)


def all_subperm_matrices(n: int) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for bits in range(1 << (n * n)):
        mat = tuple(
            tuple((bits >> (a * n + b)) & 1 for b in range(n)) for a in range(n)
        )
        if is_subperm_matrix(mat):
            out.append(mat)
    return out


def random_subperm_matrix(n: int, rng: random.Random):
    size = rng.randint(0, n)
    rows = rng.sample(range(n), size)
    cols = rng.sample(range(n), size)
    entries = set(zip(rows, cols))
    return tuple(
        tuple(1 if (a, b) in entries else 0 for b in range(n)) for a in range(n)
    )


# ---------------------------------------------------------------------------
# the block constructions
# ---------------------------------------------------------------------------

Kind = Literal["D", "C", "SigmaI", "SigmaII", "PiII"]

_BUILD_NODE_LIMIT = 4_000_000


def _check_tuple_budget(n: int, length: int):
    if length >= 1 and n ** (length - 1) * length > _BUILD_NODE_LIMIT:
        raise ResourceLimitError(
            f"flat block over {length} matrices with n={n} exceeds the node budget"
        )


def _build_d(n: int, lo: int, hi: int, a0: int, ak: int) -> Formula:
    """Disjunction over all index paths a0 -> ... -> ak through matrices
    lo+1..hi; correct for arbitrary Boolean matrices."""
    length = hi - lo
    _check_tuple_budget(n, length)
    terms = []
    for mids in product(range(1, n + 1), repeat=length - 1):
        walk = (a0, *mids, ak)
        terms.append(
            conj([lit((lo + i + 1, walk[i], walk[i + 1])) for i in range(length)])
        )
    return disj(terms)


def _build_c(n: int, lo: int, hi: int, a0: int, ak: int) -> Formula:
    """Conjunction over index paths of 'some step leaves the path'; correct
    when every matrix has at most one 1 per row."""
    length = hi - lo
    _check_tuple_budget(n, length)
    clauses = []
    for mids in product(range(1, n + 1), repeat=length - 1):
        walk = (a0, *mids, ak)
        lits = []
        for i in range(length - 1):
            lits.extend(
                lit((lo + i + 1, walk[i], b))
                for b in range(1, n + 1)
                if b != walk[i + 1]
            )
        lits.append(lit((lo + length, walk[length - 1], ak)))
        clauses.append(disj(lits))
    return conj(clauses)


def _split_points(lo: int, hi: int, parts: int) -> list[int]:
    step = (hi - lo) // parts
    return [lo + i * step for i in range(parts)] + [hi]


def _build_sigma1(n: int, lo: int, hi: int, d: int, a0: int, ak: int, ell: int) -> Formula:
    if d == 1:
        return _build_d(n, lo, hi, a0, ak)
    cuts = _split_points(lo, hi, ell)
    _check_tuple_budget(n, ell)
    terms = []
    for mids in product(range(1, n + 1), repeat=ell - 1):
        walk = (a0, *mids, ak)
        terms.append(
            conj(
                [
                    _build_sigma1(n, cuts[i], cuts[i + 1], d - 1, walk[i], walk[i + 1], ell)
                    for i in range(ell)
                ]
            )
        )
    return disj(terms)


def _build_sigma2(n: int, lo: int, hi: int, d: int, a0: int, ak: int, ell: int) -> Formula:
    if d == 1:
        return _build_d(n, lo, hi, a0, ak)
    cuts = _split_points(lo, hi, ell)
    _check_tuple_budget(n, ell)
    terms = []
    for mids in product(range(1, n + 1), repeat=ell - 1):
        walk = (a0, *mids, ak)
        terms.append(
            conj(
                [
                    _build_pi2(n, cuts[i], cuts[i + 1], d - 1, walk[i], walk[i + 1], ell)
                    for i in range(ell)
                ]
            )
        )
    return disj(terms)


def _build_pi2(n: int, lo: int, hi: int, d: int, a0: int, ak: int, ell: int) -> Formula:
    if d == 1:
        return _build_c(n, lo, hi, a0, ak)
    cuts = _split_points(lo, hi, ell)
    _check_tuple_budget(n, ell)
    clauses = []
    for mids in product(range(1, n + 1), repeat=ell - 1):
        walk = (a0, *mids, ak)
        parts = []
        for i in range(ell - 1):
            parts.extend(
                _build_sigma2(n, cuts[i], cuts[i + 1], d - 1, walk[i], b, ell)
                for b in range(1, n + 1)
                if b != walk[i + 1]
            )
        parts.append(_build_sigma2(n, cuts[ell - 1], cuts[ell], d - 1, walk[ell - 1], ak, ell))
        clauses.append(disj(parts))
    return conj(clauses)


def build_matrix_formula(
    kind: Kind, n: int, k: int, d: int = 1, a0: int = 1, ak: int = 1
) -> Formula:
    """Monotone formulas computing entry (a0, ak) of a k-fold matrix product:
    ``D``/``C`` are the flat disjunctive/conjunctive forms (d = 1); the three
    recursive kinds split the product into k^(1/d) consecutive blocks."""
    if n < 1 or k < 1 or not (1 <= a0 <= n and 1 <= ak <= n):
        raise InvalidParameterError("need n, k >= 1 and endpoint indices in [n]")
    if kind in ("D", "C"):
        if d != 1:
            raise InvalidParameterError(f"kind {kind} is the d=1 construction")
        return (_build_d if kind == "D" else _build_c)(n, 0, k, a0, ak)
    if d < 1:
        raise InvalidParameterError("d must be >= 1")
    ell = round(k ** (1.0 / d))
    if not any((cand := c) ** d == k for c in (ell - 1, ell, ell + 1) if c >= 1):
        raise InvalidParameterError(f"k^(1/d) = {k}^(1/{d}) is not an integer")
    ell = cand
    if kind == "SigmaI":
        return _build_sigma1(n, 0, k, d, a0, ak, ell)
    if kind == "SigmaII":
        return _build_sigma2(n, 0, k, d, a0, ak, ell)
    if kind == "PiII":
        return _build_pi2(n, 0, k, d, a0, ak, ell)
    raise InvalidParameterError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# exhaustive / sampled correctness checks
# ---------------------------------------------------------------------------


def matrix_varlist(n: int, k: int) -> list[tuple[int, int, int]]:
    return [(i, a, b) for i in range(1, k + 1) for a in range(1, n + 1) for b in range(1, n + 1)]


def oracle_table(n: int, k: int, varlist: Sequence, a0: int = 1, ak: int = 1) -> int:
    """Packed truth table of the product entry (a0, ak) over all 2^(kn^2)
    inputs, by reachability on packed variable tables (independent of any
    formula construction)."""
    nv = len(varlist)
    tables = {v: var_table(i, nv) for i, v in enumerate(varlist)}
    full = (1 << (1 << nv)) - 1
    reach = {a: (full if a == a0 else 0) for a in range(1, n + 1)}
    for i in range(1, k + 1):
        reach = {
            b: _or_all(reach[a] & tables[(i, a, b)] for a in range(1, n + 1))
            for b in range(1, n + 1)
        }
    return reach[ak]


def _or_all(parts: Iterable[int]) -> int:
    out = 0
    for p in parts:
        out |= p
    return out


def valid_mask(n: int, k: int, varlist: Sequence, rows_only: bool = False) -> int:
    """Packed mask of the inputs where every matrix has at most one 1 per row
    (and per column unless ``rows_only``)."""
    nv = len(varlist)
    tables = {v: var_table(i, nv) for i, v in enumerate(varlist)}
    full = (1 << (1 << nv)) - 1
    mask = full
    for i in range(1, k + 1):
        for a in range(1, n + 1):
            for b1 in range(1, n + 1):
                for b2 in range(b1 + 1, n + 1):
                    mask &= full ^ (tables[(i, a, b1)] & tables[(i, a, b2)])
        if not rows_only:
            for b in range(1, n + 1):
                for a1 in range(1, n + 1):
                    for a2 in range(a1 + 1, n + 1):
                        mask &= full ^ (tables[(i, a1, b)] & tables[(i, a2, b)])
    return mask


def _decode_input(index: int, n: int, k: int, varlist: Sequence):
    matrices = [[[0] * n for _ in range(n)] for _ in range(k)]
    for pos, (i, a, b) in enumerate(varlist):
        matrices[i - 1][a - 1][b - 1] = (index >> pos) & 1
    return tuple(tuple(tuple(row) for row in mat) for mat in matrices)


def check_formula_correct(
    phi: Formula,
    n: int,
    k: int,
    mode: str = "exhaustive",
    input_class: Literal["any", "rows", "subperm"] = "subperm",
    a0: int = 1,
    ak: int = 1,
    count: int = 1000,
    seed: int = 0,
    nvars_limit: int = 24,
) -> dict:
    """Compare the formula against the brute-force product oracle.

    Exhaustive mode walks all 2^(kn^2) inputs via packed truth tables (the
    oracle table is built by reachability, independently of the formula);
    sample mode draws random tuples from the input class.
    """
    if mode == "exhaustive":
        varlist = matrix_varlist(n, k)
        f_table = truth_table(phi, varlist, nvars_limit=nvars_limit)
        o_table = oracle_table(n, k, varlist, a0, ak)
        nv = len(varlist)
        full = (1 << (1 << nv)) - 1
        if input_class == "any":
            mask = full
        elif input_class == "rows":
            mask = valid_mask(n, k, varlist, rows_only=True)
        else:
            mask = valid_mask(n, k, varlist)
        diff = (f_table ^ o_table) & mask
        checked = bin(mask).count("1")
        if diff:
            idx = (diff & -diff).bit_length() - 1
            bad = _decode_input(idx, n, k, varlist)
            return {
                "ok": False,
                "checked": checked,
                "counterexample": {
                    "matrices": bad,
                    "formula": evaluate(phi, matrix_env(bad)),
                    "oracle": oracle_bmm(bad, a0, ak),
                },
            }
        return {"ok": True, "checked": checked}
    if mode != "sample":
        raise InvalidParameterError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    for trial in range(count):
        if input_class == "subperm":
            mats = tuple(random_subperm_matrix(n, rng) for _ in range(k))
        elif input_class == "rows":
            mats = tuple(
                tuple(
                    tuple(
                        1 if (b == rng.randrange(n + 1)) else 0 for b in range(n)
                    )
                    for _ in range(n)
                )
                for _ in range(k)
            )
        else:
            mats = tuple(
                tuple(tuple(rng.randint(0, 1) for _ in range(n)) for _ in range(n))
                for _ in range(k)
            )
        got = evaluate(phi, matrix_env(mats))
        want = oracle_bmm(mats, a0, ak)
        if got != want:
            return {
                "ok": False,
                "checked": trial + 1,
                "counterexample": {"matrices": mats, "formula": got, "oracle": want},
            }
    return {"ok": True, "checked": count}


# ---------------------------------------------------------------------------
# DeMorgan conversions
# ---------------------------------------------------------------------------


def _leaf_to_dm(node) -> DeMorgan:
    if node.op == "const":
        return dm_const(node.value)
    return dm_lit(node.var, node.neg)


def _fold_right(op: str, parts: list[DeMorgan]) -> DeMorgan:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = DeMorgan(op, p, out)
    return out


def _fold_balanced(op: str, parts: list[DeMorgan]) -> DeMorgan:
    if len(parts) == 1:
        return parts[0]
    mid = (len(parts) + 1) // 2
    return DeMorgan(op, _fold_balanced(op, parts[:mid]), _fold_balanced(op, parts[mid:]))


def convert(phi: Formula, style: Literal["right_deep", "balanced"]) -> DeMorgan:
    """Replace each fan-in-m gate by m-1 binary gates, either as a right-deep
    chain or as a left-heavy balanced tree."""
    fold = _fold_right if style == "right_deep" else _fold_balanced
    memo: dict[int, DeMorgan] = {}

    def rec(node: Formula) -> DeMorgan:
        got = memo.get(id(node))
        if got is None:
            if node.op in ("and", "or"):
                got = fold(node.op, [rec(c) for c in node.children])
            else:
                got = _leaf_to_dm(node)
            memo[id(node)] = got
        return got

    return rec(phi)


def randomized_conversion(phi: Formula, t: int, seed: int) -> DeMorgan:
    """Sampled balanced conversion: each fan-in-m gate becomes a balanced
    tree of t*m - 1 binary gates over t*m uniformly chosen children, children
    sampled once each and reused; deterministic under the seed."""
    if t < 1:
        raise InvalidParameterError("t must be >= 1")
    rng = random.Random(seed)

    def rec(node: Formula) -> DeMorgan:
        if node.op in ("and", "or"):
            kids = [rec(c) for c in node.children]
            m = len(kids)
            picks = [rng.randrange(m) for _ in range(t * m)]
            return _fold_balanced(node.op, [kids[i] for i in picks])
        return _leaf_to_dm(node)

    return rec(phi)


def randomized_conversion_value(phi: Formula, t: int, seed: int, getval: Callable) -> int:
    """Value of the sampled conversion on one input, without materializing
    the sample; consumes the generator stream exactly like
    :func:`randomized_conversion`, so equal seeds agree."""
    rng = random.Random(seed)

    def rec(node: Formula) -> int:
        if node.op in ("and", "or"):
            vals = [rec(c) for c in node.children]
            m = len(vals)
            picks = [rng.randrange(m) for _ in range(t * m)]
            chosen = [vals[i] for i in picks]
            return min(chosen) if node.op == "and" else max(chosen)
        if node.op == "const":
            return node.value
        v = getval(node.var)
        return 1 - v if node.neg else v

    return rec(phi)


# ---------------------------------------------------------------------------
# strictness, doubling-combinator depth, support trees (edge-variable world)
# ---------------------------------------------------------------------------


def dm_truth_table(g: DeMorgan, k: int, limit: int = 16) -> int:
    """Truth table over the k edge variables, packed into an int."""
    if k > limit:
        raise ResourceLimitError(f"{k} variables exceeds the 2^{limit} table limit")
    return truth_table(g, list(range(1, k + 1)), nvars_limit=limit)


def strictify_demorgan(g: DeMorgan, k: int, limit: int = 16) -> DeMorgan:
    """Equivalent strict formula: recursively drop any gate child computing
    the same function as the gate (checked by truth table)."""
    full = (1 << (1 << k)) - 1
    tt_memo: dict[int, int] = {}

    def tt(node: DeMorgan) -> int:
        got = tt_memo.get(id(node))
        if got is None:
            if node.op == "const":
                got = full if node.value else 0
            elif node.op == "lit":
                got = var_table(node.var - 1, k)
                if node.neg:
                    got ^= full
            elif node.op == "and":
                got = tt(node.left) & tt(node.right)
            else:
                got = tt(node.left) | tt(node.right)
            tt_memo[id(node)] = got
        return got

    if k > limit:
        raise ResourceLimitError(f"{k} variables exceeds the 2^{limit} table limit")

    def rec(node: DeMorgan) -> DeMorgan:
        if node.op not in ("and", "or"):
            return node
        if tt(node.left) == tt(node):
            return rec(node.left)
        if tt(node.right) == tt(node):
            return rec(node.right)
        return DeMorgan(node.op, rec(node.left), rec(node.right))

    return rec(g)


def is_strict_demorgan(g: DeMorgan, k: int) -> bool:
    def tt(node):
        return dm_truth_table(node, k)

    def rec(node) -> bool:
        if node.op not in ("and", "or"):
            return True
        mine = tt(node)
        if tt(node.left) == mine or tt(node.right) == mine:
            return False
        return rec(node.left) and rec(node.right)

    return rec(g)


def dm_structural_key(g: DeMorgan):
    if g.op == "const":
        return ("const", g.value)
    if g.op == "lit":
        return ("lit", g.var, g.neg)
    return (g.op, dm_structural_key(g.left), dm_structural_key(g.right))


def _dm_sem_seqs(g: DeMorgan, op: str, memo: dict, counter: list[int], limit: int):
    key = (id(g), op)
    got = memo.get(key)
    if got is not None:
        return got
    if g.op != op:
        out: tuple = ((g,),)
    else:
        acc = [(g,)]
        for a in _dm_sem_seqs(g.left, op, memo, counter, limit):
            for b in _dm_sem_seqs(g.right, op, memo, counter, limit):
                if (
                    len(a) == len(b)
                    and all(x is y or dm_structural_key(x) == dm_structural_key(y)
                            for x, y in zip(a[:-1], b[:-1]))
                ):
                    acc.append(a + (b[-1],))
        out = tuple(acc)
    counter[0] += len(out)
    if counter[0] > limit:
        raise ResourceLimitError(f"recognition exceeded {limit} memo entries")
    memo[key] = out
    return out


def sem_depth_demorgan(g: DeMorgan, memo_limit: int = 1 << 16) -> int:
    """Minimum nesting depth of doubling-combinator applications (of either
    gate type) expressing the formula."""
    seq_memo: dict = {}
    counter = [0]
    depth_memo: dict[int, int] = {}

    def rec(node: DeMorgan) -> int:
        got = depth_memo.get(id(node))
        if got is not None:
            return got
        if node.op not in ("and", "or"):
            depth_memo[id(node)] = 0
            return 0
        best = None
        for s in _dm_sem_seqs(node, node.op, seq_memo, counter, memo_limit):
            if len(s) < 2:
                continue
            d = max(rec(part) for part in s)
            if best is None or d < best:
                best = d
        depth_memo[id(node)] = 1 + best
        return 1 + best

    return rec(g)


def sem_demorgan(parts: Sequence[DeMorgan], op: str) -> DeMorgan:
    """Doubling combinator over formulas with the given gate type."""
    parts = tuple(parts)
    if not parts:
        raise ArityError("need at least one argument")
    memo: dict = {}

    def rec(args: tuple) -> DeMorgan:
        if len(args) == 1:
            return args[0]
        key = tuple(id(a) for a in args)
        got = memo.get(key)
        if got is None:
            got = DeMorgan(op, rec(args[:-1]), rec(args[:-2] + (args[-1],)))
            memo[key] = got
        return got

    return rec(parts)


# -- support machinery --------------------------------------------------------


def support(g: DeMorgan, k: int) -> PathGraph:
    """Edges of Path_k the computed function depends on."""
    table = dm_truth_table(g, k)
    return from_edges(i for i in range(1, k + 1) if _cofactors_differ(table, i, k))


def _cofactors_differ(table: int, i: int, k: int) -> bool:
    shift = 1 << (i - 1)
    vt = var_table(i - 1, k)
    pos = (table & vt) >> shift
    neg = table & (vt >> shift)
    return pos != neg


def dm_restrict(g: DeMorgan, keep: PathGraph) -> DeMorgan:
    """Syntactically send out-of-graph positive literals to 0 and negative
    literals to 1."""
    memo: dict[int, DeMorgan] = {}

    def rec(node: DeMorgan) -> DeMorgan:
        got = memo.get(id(node))
        if got is None:
            if node.op == "lit" and not keep.has_edge(node.var):
                got = dm_const(1 if node.neg else 0)
            elif node.op in ("and", "or"):
                got = DeMorgan(node.op, rec(node.left), rec(node.right))
            else:
                got = node
            memo[id(node)] = got
        return got

    return rec(g)


def support_tree(g: DeMorgan, k: int):
    """The join tree whose leaves are the formula's dependent coordinates,
    built by the recursive restrict-children-to-support rule."""
    from . import jointrees

    def rec(node: DeMorgan):
        if node.op == "const":
            return jointrees.leaf(EMPTY)
        if node.op == "lit":
            return jointrees.leaf(from_edges([node.var]))
        supp = support(node, k)
        return jointrees.node(
            rec(dm_restrict(node.left, supp)), rec(dm_restrict(node.right, supp))
        )

    return rec(g)


def support_tools(g: DeMorgan, k: int, limit: int = 16):
    """(support graph, restriction operator, support tree, strict support tree)."""
    from . import jointrees

    if k > limit:
        raise ResourceLimitError(f"{k} variables exceeds the 2^{limit} table limit")
    supp = support(g, k)
    stree = support_tree(g, k)
    return supp, (lambda h: dm_restrict(g, h)), stree, jointrees.strictify(stree)


# -- serialization --------------------------------------------------------------


def _var_tokens(var) -> str:
    if isinstance(var, tuple):
        return " ".join(str(x) for x in var)
    return str(var)


def to_sexpr(phi) -> str:
    """Text form, e.g. ``(and (or (lit 1 2 3) ...) ...)``; matrix-entry
    variables print as three numbers, edge variables as one."""
    if phi.op == "const":
        return f"(const {phi.value})"
    if phi.op == "lit":
        name = "nlit" if phi.neg else "lit"
        return f"({name} {_var_tokens(phi.var)})"
    kids = phi.children if isinstance(phi, Formula) else _dm_children(phi)
    return f"({phi.op} " + " ".join(to_sexpr(c) for c in kids) + ")"


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse(tokens: list[str], pos: int):
    if tokens[pos] != "(":
        raise ArityError(f"expected '(' at token {pos}")
    head = tokens[pos + 1]
    pos += 2
    if head == "const":
        node = ("const", int(tokens[pos]))
        pos += 1
    elif head in ("lit", "nlit"):
        nums = []
        while tokens[pos] != ")":
            nums.append(int(tokens[pos]))
            pos += 1
        var = tuple(nums) if len(nums) > 1 else nums[0]
        node = ("lit", var, head == "nlit")
    elif head in ("and", "or"):
        kids = []
        while tokens[pos] != ")":
            child, pos = _parse(tokens, pos)
            kids.append(child)
        node = (head, kids)
    else:
        raise ArityError(f"unknown head {head!r}")
    if tokens[pos] != ")":
        raise ArityError("missing ')'")
    return node, pos + 1


def _to_formula(node) -> Formula:
    if node[0] == "const":
        return const(node[1])
    if node[0] == "lit":
        return lit(node[1], node[2])
    return _gate(node[0], [_to_formula(c) for c in node[1]])


def _to_demorgan(node) -> DeMorgan:
    if node[0] == "const":
        return dm_const(node[1])
    if node[0] == "lit":
        return dm_lit(node[1], node[2])
    kids = [_to_demorgan(c) for c in node[1]]
    if len(kids) != 2:
        raise ArityError("binary formulas need exactly two children per gate")
    return DeMorgan(node[0], kids[0], kids[1])


def from_sexpr(text: str, binary: bool = False):
    node, pos = _parse(_tokenize(text), 0)
    return _to_demorgan(node) if binary else _to_formula(node)


def to_json_dict(phi) -> dict:
    if phi.op == "const":
        return {"const": phi.value}
    if phi.op == "lit":
        var = list(phi.var) if isinstance(phi.var, tuple) else phi.var
        return {"lit": var, "neg": phi.neg}
    kids = phi.children if isinstance(phi, Formula) else _dm_children(phi)
    return {phi.op: [to_json_dict(c) for c in kids]}


def from_json_dict(data, binary: bool = False):
    if "const" in data:
        return dm_const(data["const"]) if binary else const(data["const"])
    if "lit" in data:
        var = tuple(data["lit"]) if isinstance(data["lit"], list) else data["lit"]
        neg = data.get("neg", False)
        return dm_lit(var, neg) if binary else lit(var, neg)
    (op, kids), = data.items()
    parsed = [from_json_dict(c, binary) for c in kids]
    if binary:
        if len(parsed) != 2:
            raise ArityError("binary formulas need exactly two children per gate")
        return DeMorgan(op, parsed[0], parsed[1])
    return _gate(op, parsed)


# -- exhaustive strict-formula count ------------------------------------------


def count_strict_demorgan(
    k: int, d: int, budget: int = 200_000, return_formulas: bool = False
):
    """Number of distinct strict k-variable formulas of doubling-combinator
    depth at most d, by exhaustive generation with strictness pruning."""
    if k < 1 or d < 0:
        raise InvalidParameterError("need k >= 1 and d >= 0")
    base: list[DeMorgan] = [dm_const(0), dm_const(1)]
    for i in range(1, k + 1):
        base.append(dm_lit(i))
        base.append(dm_lit(i, neg=True))
    level = {dm_structural_key(g): g for g in base}
    for _ in range(d):
        new = dict(level)
        pool = list(level.values())

        def extend(seq: tuple, op: str):
            formula = sem_demorgan(seq, op)
            if not is_strict_demorgan(formula, k):
                return
            key = dm_structural_key(formula)
            if key not in new:
                new[key] = formula
                if len(new) > budget:
                    raise ResourceLimitError(f"strict enumeration exceeded {budget}")
            for g in pool:
                extend(seq + (g,), op)

        for op in ("and", "or"):
            for g1 in pool:
                for g2 in pool:
                    extend((g1, g2), op)
        level = new
    if return_formulas:
        return len(level), list(level.values())
    return len(level)
