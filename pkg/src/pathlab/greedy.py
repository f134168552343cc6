"""Greedy sequences, the generalized tight example, Dyck sequences, and
exact-rational verification of the linear-programming optimality certificates.

All LP arithmetic uses ``fractions.Fraction`` over big integers; the dual
feasibility margins shrink quickly with t and floats would mask violations.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidParameterError, NotGreedyError, ResourceLimitError
from .paths import EMPTY, GraphSequence, PathGraph, union_all, vec_delta

DEFAULT_DYCK_LIMIT = 12


# ---------------------------------------------------------------------------
# greedy sequences
# ---------------------------------------------------------------------------


def is_vec_delta_greedy(seq: GraphSequence, base: PathGraph = EMPTY) -> bool:
    """True when each graph maximizes its component increment against the
    union of everything placed before it."""
    acc = base
    for j, g in enumerate(seq):
        inc = g.ominus(acc).delta
        for later in seq[j + 1 :]:
            if later.ominus(acc).delta > inc:
                return False
        acc = acc.union(g)
    return True


def greedy_order(family: Iterable[PathGraph], base: PathGraph = EMPTY) -> list[PathGraph]:
    """A greedy enumeration of the family; ties broken by the canonical
    graph order (smallest interval list first)."""
    remaining = sorted(family)
    out: list[PathGraph] = []
    acc = base
    while remaining:
        best_idx = max(range(len(remaining)), key=lambda i: (remaining[i].ominus(acc).delta, -i))
        # max() keeps the earliest index on ties thanks to the -i tiebreak
        g = remaining.pop(best_idx)
        out.append(g)
        acc = acc.union(g)
    return out


# ---------------------------------------------------------------------------
# the generalized tight construction
# ---------------------------------------------------------------------------


class _Builder:
    """Places single-edge components on a fresh stretch of the integer line,
    far enough apart that attachment chains can never collide."""

    def __init__(self, spacing: int):
        self.spacing = spacing
        self.cursor = 0
        # free endpoints per graph index: vertex v with the free cell on side d
        self.slots: dict[int, list[tuple[int, int]]] = {}
        self.edges: dict[int, list[tuple[int, int]]] = {}

    def new_graph(self) -> int:
        gid = len(self.edges)
        self.edges[gid] = []
        self.slots[gid] = []
        return gid

    def add_free_edge(self, gid: int) -> None:
        s = self.cursor
        self.cursor += self.spacing
        self.edges[gid].append((s, s + 1))
        self.slots[gid].append((s, -1))
        self.slots[gid].append((s + 1, +1))

    def attach_edge(self, gid: int, target: int) -> None:
        """Add to gid a single edge sharing one vertex with graph ``target``."""
        v, direction = self.slots[target].pop()
        if direction < 0:
            edge = (v - 1, v)
            outer = v - 1
        else:
            edge = (v, v + 1)
            outer = v + 1
        self.edges[gid].append(edge)
        self.slots[gid].append((outer, direction))

    def graph(self, gid: int) -> PathGraph:
        return PathGraph(self.edges[gid])


def build_greedy_example(t: int) -> list[PathGraph]:
    """The tight greedy family for parameter t: all components are single
    edges, the first graph has t of them, and the ratio of total edges to the
    greedy vector-component value meets the LP optimum exactly.

    Levels 0..t-2 hold one graph each (t free edges shrinking by one per
    level, plus one edge attached to each earlier level); level t-1 holds
    t+2 such graphs; level t holds (t+2)(t+1) single edges, each attached to
    a level-(t-1) graph.
    """
    if t < 1:
        raise InvalidParameterError(f"t must be >= 1, got {t}")
    b = _Builder(spacing=2 * t + 6)
    levels: list[list[int]] = []
    for s in range(t - 1):
        gid = b.new_graph()
        for _ in range(t - s):
            b.add_free_edge(gid)
        for r in range(1, s + 1):
            target = levels[s - r][0]
            b.attach_edge(gid, target)
        levels.append([gid])
    top: list[int] = []
    for _ in range(t + 2):
        gid = b.new_graph()
        for _ in range(t - (t - 1)):
            b.add_free_edge(gid)
        for r in range(1, t):
            target_level = levels[t - 1 - r]
            target = next(x for x in target_level if b.slots[x])
            b.attach_edge(gid, target)
        top.append(gid)
    levels.append(top)
    singles: list[int] = []
    for _ in range((t + 2) * (t + 1)):
        gid = b.new_graph()
        target = next(x for x in top if b.slots[x])
        b.attach_edge(gid, target)
        singles.append(gid)
    order = [g for level in levels for g in level] + singles
    return [b.graph(g) for g in order]


# ---------------------------------------------------------------------------
# Dyck sequences and profiles
# ---------------------------------------------------------------------------


def is_dyck(seq: Sequence[int]) -> bool:
    total = 0
    for r, a in enumerate(seq, start=1):
        if a < 0:
            return False
        total += a
        if total > r:
            return False
    return True


def enumerate_dyck(s: int, limit: int = DEFAULT_DYCK_LIMIT) -> list[tuple[int, ...]]:
    """All length-s sequences of nonnegative integers whose prefix sums
    satisfy a_1 + ... + a_r <= r.  Their number is the Catalan number C_{s+1}."""
    if s < 0:
        raise InvalidParameterError("length must be >= 0")
    if s > limit:
        raise ResourceLimitError(f"Dyck length {s} exceeds limit {limit}")
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], total: int):
        r = len(prefix)
        if r == s:
            out.append(prefix)
            return
        for a in range(r + 1 - total + 1):
            rec(prefix + (a,), total + a)

    rec((), 0)
    return out


def catalan(n: int) -> int:
    num = 1
    for i in range(n):
        num = num * 2 * (2 * i + 1) // (i + 2)
    return num


def extract_profiles(seq: GraphSequence, base: PathGraph = EMPTY) -> list[tuple[int, ...]]:
    """Level profiles of a greedy sequence: graph j at level s gets
    (a_1..a_s) where a_r counts vertices shared with level-(s-r) graphs.

    Meaningful under the normalization that each edge of G_j has at most one
    endpoint among the predecessors (as in the attachment-style families)."""
    if not is_vec_delta_greedy(seq, base):
        raise NotGreedyError("profiles are defined for greedy sequences only")
    t = seq[0].ominus(base).delta if seq else 0
    acc = base
    level_vertices: dict[int, set[int]] = {}
    profiles: list[tuple[int, ...]] = []
    for g in seq:
        s = t - g.ominus(acc).delta
        prof = []
        mine = set(g.vertices())
        for r in range(1, s + 1):
            prof.append(len(mine & level_vertices.get(s - r, set())))
        profiles.append(tuple(prof))
        level_vertices.setdefault(s, set()).update(mine)
        acc = acc.union(g)
    return profiles


# ---------------------------------------------------------------------------
# the LP certificates
# ---------------------------------------------------------------------------


def gamma(t: int) -> Fraction:
    """The exact optimum ratio constant: 5 + 2/(t+1) - 12/(t+2)."""
    if t < 1:
        raise InvalidParameterError(f"t must be >= 1, got {t}")
    return Fraction(5) + Fraction(2, t + 1) - Fraction(12, t + 2)


def gamma_closed_form(t: int) -> Fraction:
    return Fraction(2 * (3 * t * t + 4 * t + 2), (t + 2) * (t + 1)) - 1


def certificate_w(t: int) -> dict[tuple[int, ...], Fraction]:
    """The integral primal optimum: 1 on the all-ones sequences of lengths
    0..t-2, t+2 on the all-ones sequence of length t-1, (t+2)(t+1) on
    (1, 0, ..., 0) of length t.

    At t = 1 the two patterns collide on the empty sequence; the matrix
    identities pin the basic vertex (1, 2) there, of which the t = 1 tight
    family is the threefold scaling."""
    if t == 1:
        return {(): Fraction(1), (1,): Fraction(2)}
    w: dict[tuple[int, ...], Fraction] = {}
    for s in range(t - 1):
        w[(1,) * s] = Fraction(1)
    w[(1,) * (t - 1)] = Fraction(t + 2)
    w[(1,) + (0,) * (t - 1)] = Fraction((t + 2) * (t + 1))
    return w


def certificate_y(t: int) -> list[Fraction]:
    """The dual optimum: y_0 = 0 and
    y_r = gamma/2 - (r-1)(4t+2-r) / (2(2t+2-r)(2t+1-r))."""
    g = gamma(t)
    y = [Fraction(0)]
    for r in range(1, t + 1):
        y.append(g / 2 - Fraction((r - 1) * (4 * t + 2 - r), 2 * (2 * t + 2 - r) * (2 * t + 1 - r)))
    return y


def _column_coefficient(t: int, row: int, a: tuple[int, ...]) -> Fraction:
    """Coefficient of the Dyck-sequence column ``a`` in constraint row
    ``row`` of the standard-form system (rows 0..t)."""
    s = len(a)
    if row == 0:
        return Fraction(-1) if s == 0 else Fraction(0)
    coef = Fraction(0)
    if row <= s:
        coef += a[s - row]  # a_{s-row+1} with 1-based indexing
    if row == s + 1:
        coef -= sum(a) + 2 * (t - s)
    return coef


def _objective_coefficient(t: int, a: tuple[int, ...]) -> Fraction:
    g = gamma(t)
    return Fraction(sum(a)) - (t - len(a)) * g


def verify_lp_certificates(
    t: int,
    w: dict[tuple[int, ...], Fraction] | None = None,
    y: Sequence[Fraction] | None = None,
    dyck_limit: int = 8,
) -> dict:
    """Exact check that the primal/dual pair certifies LP value 0.

    Verifies nonnegativity, every primal constraint over all Dyck columns,
    primal objective 0, dual feasibility for every Dyck sequence of length
    <= t, the monotone chain 5/2 > gamma/2 = y_1 > ... > y_t = 1, and the
    matrix identities M w = (-1, 0, ..., 0), M^T y = f, f^T w = -y_0 = 0 on
    the support columns.
    """
    if t > dyck_limit:
        raise ResourceLimitError(f"t={t} exceeds Dyck enumeration limit {dyck_limit}")
    g = gamma(t)
    w = dict(certificate_w(t)) if w is None else dict(w)
    y = certificate_y(t) if y is None else list(y)
    columns: list[tuple[int, ...]] = []
    for s in range(t + 1):
        columns.extend(enumerate_dyck(s))
    violated: list[str] = []

    for a, val in w.items():
        if not is_dyck(a):
            violated.append(f"support: w[{a}] indexed by a non-Dyck sequence")
        if val < 0:
            violated.append(f"nonnegativity: w[{a}] = {val} < 0")
    if any(v < 0 for v in y):
        violated.append("nonnegativity: some y_r < 0")

    def wval(a: tuple[int, ...]) -> Fraction:
        return w.get(a, Fraction(0))

    # primal constraints: row 0 is w_() >= 1, rows r >= 1 are <=-inequalities
    row_sums = []
    for row in range(t + 1):
        row_sums.append(sum(_column_coefficient(t, row, a) * wval(a) for a in columns))
    if not row_sums[0] <= -1:
        violated.append("(*_0): w_() >= 1 fails")
    for row in range(1, t + 1):
        if not row_sums[row] <= 0:
            violated.append(f"(*_{row}): primal constraint violated by {row_sums[row]}")

    primal_obj = sum(_objective_coefficient(t, a) * wval(a) for a in columns)
    if primal_obj != 0:
        violated.append(f"objective: primal value {primal_obj} != 0")

    # dual feasibility: M^T y >= f over every Dyck column
    for a in columns:
        lhs = sum(_column_coefficient(t, row, a) * y[row] for row in range(t + 1))
        if not lhs >= _objective_coefficient(t, a):
            violated.append(f"(star_{a}): dual constraint violated")
    if y[0] != 0:
        violated.append(f"dual objective: -y_0 = {-y[0]} != 0")
    if t >= 1 and not (Fraction(5, 2) > y[1] == g / 2):
        violated.append("chain: y_1 != gamma/2 or y_1 >= 5/2")
    for r in range(1, t):
        if not y[r] > y[r + 1]:
            violated.append(f"chain: y_{r} <= y_{r + 1}")
    if y[t] != 1:
        violated.append(f"chain: y_t = {y[t]} != 1")

    # support-matrix identities
    support = [(1,) * s for s in range(t)] + [(1,) + (0,) * (t - 1)]
    m_w = [
        sum(_column_coefficient(t, row, a) * wval(a) for a in support) for row in range(t + 1)
    ]
    if m_w != [Fraction(-1)] + [Fraction(0)] * t:
        violated.append("identity: M w != (-1, 0, ..., 0)")
    for a in support:
        lhs = sum(_column_coefficient(t, row, a) * y[row] for row in range(t + 1))
        if lhs != _objective_coefficient(t, a):
            violated.append(f"identity: (M^T y)[{a}] != f[{a}]")
    f_w = sum(_objective_coefficient(t, a) * wval(a) for a in support)
    if not f_w == -y[0] == 0:
        violated.append("identity: f^T w != -y_0 or != 0")

    return {
        "t": t,
        "gamma": str(g),
        "primal_ok": not any(v.startswith(("(*_", "objective", "support", "nonneg")) for v in violated),
        "dual_ok": not any(v.startswith(("(star", "dual", "chain")) for v in violated),
        "identities_ok": not any(v.startswith("identity") for v in violated),
        "violated": violated,
        "ok": not violated,
    }


# ---------------------------------------------------------------------------
# ratio checks
# ---------------------------------------------------------------------------


def check_greedy_ratio(seq: GraphSequence, base: PathGraph = EMPTY) -> dict:
    """Verify the tight edge-count bound for unit-component greedy sequences
    and the conditional 5*delta(F) + 6*vec_delta bound; report slack."""
    if not is_vec_delta_greedy(seq, base):
        raise NotGreedyError("sequence is not greedy over the given base graph")
    report: dict = {"ok": True}
    vd_cond = vec_delta(seq, base)
    residuals = [g.ominus(base) for g in seq]
    max_lam = max((r.lam for r in residuals), default=0)

    if not base and seq and all(g.lam <= 1 for g in seq) and seq[0].delta >= 1:
        t = seq[0].delta
        bound = (gamma(t) + 1) * vec_delta(seq)
        total = union_all(seq).norm
        report["unit_case"] = {
            "t": t,
            "edges": total,
            "bound": str(bound),
            "slack": str(bound - total),
            "tight": bound == total,
        }
        if total > bound:
            report["ok"] = False

    if max_lam > 0:
        covered = union_all(residuals).norm
        bound6 = 5 * base.delta + 6 * vd_cond
        report["conditional_case"] = {
            "covered_edges": covered,
            "max_component_length": max_lam,
            "bound": bound6,
            "holds": Fraction(covered, max_lam) <= bound6,
        }
        if Fraction(covered, max_lam) > bound6:
            report["ok"] = False
    return report


def check_greedy_quotient(seq: GraphSequence, base: PathGraph = EMPTY) -> bool:
    """The corollary form: ||(union seq) - base|| / max lambda(G_j - base)
    <= 6 * vec_delta(seq | base)."""
    if not is_vec_delta_greedy(seq, base):
        raise NotGreedyError("sequence is not greedy over the given base graph")
    residual_union = union_all(seq).ominus(base)
    max_lam = max((g.ominus(base).lam for g in seq), default=0)
    if max_lam == 0:
        return residual_union.norm == 0
    return Fraction(residual_union.norm, max_lam) <= 6 * vec_delta(seq, base)
