"""Shift permutations: permutations sigma of [m] with sigma(j) >= j - 1.

They are indexed by subsets I of [m] containing m, and there are exactly
2^(m-1) of them.  ``best_shift`` brute-forces the full family, maximizing one
of the vector measures of a graph sequence.
"""

from __future__ import annotations

import json
from itertools import combinations
from typing import Iterable, Iterator, Literal

import numpy as np

from . import _kernels
from .errors import InvalidIndexSetError, InvalidShiftError, ResourceLimitError
from .paths import GraphSequence, PathGraph, vec_measures

Objective = Literal["vec_delta", "vec_lambda", "vec_lambda_delta"]

_OBJECTIVE_CODE = {
    "vec_delta": _kernels.OBJ_DELTA,
    "vec_lambda": _kernels.OBJ_LAMBDA,
    "vec_lambda_delta": _kernels.OBJ_LAMBDA_DELTA,
}

DEFAULT_ENUM_LIMIT = 25


class ShiftPermutation:
    """A permutation of [m] with sigma(j) >= j - 1, carried with its index set."""

    __slots__ = ("m", "index_set", "perm")

    def __init__(self, m: int, index_set: frozenset[int], perm: tuple[int, ...]):
        self.m = m
        self.index_set = index_set
        self.perm = perm

    def __call__(self, j: int) -> int:
        return self.perm[j - 1]

    def __eq__(self, other):
        return isinstance(other, ShiftPermutation) and self.perm == other.perm

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        return f"ShiftPermutation(I={sorted(self.index_set)}, perm={self.perm})"

    def apply(self, seq: GraphSequence) -> list[PathGraph]:
        """Reorder seq as (G_sigma(1), ..., G_sigma(m))."""
        if len(seq) != self.m:
            raise InvalidShiftError(f"sequence length {len(seq)} != m={self.m}")
        return [seq[self.perm[p] - 1] for p in range(self.m)]

    def to_json(self) -> dict:
        return {"m": self.m, "I": sorted(self.index_set)}

    @classmethod
    def from_json(cls, data) -> "ShiftPermutation":
        if isinstance(data, str):
            data = json.loads(data)
        return from_set(data["m"], data["I"])


def from_set(m: int, index_set: Iterable[int]) -> ShiftPermutation:
    """sigma_I per the block formula: sigma(i_{h-1}+1) = i_h, else sigma(j) = j-1."""
    iset = frozenset(int(i) for i in index_set)
    if m < 1 or m not in iset or not iset <= set(range(1, m + 1)):
        raise InvalidIndexSetError(f"need m in I subseteq [m], got m={m}, I={sorted(iset)}")
    perm = [j - 1 for j in range(1, m + 1)]
    prev = 0
    for i in sorted(iset):
        perm[prev] = i
        prev = i
    return ShiftPermutation(m, iset, tuple(perm))


def to_set(perm: Iterable[int] | ShiftPermutation) -> frozenset[int]:
    """Inverse of the indexing bijection: {j : {sigma(1..j)} = {1..j}}."""
    if isinstance(perm, ShiftPermutation):
        images = perm.perm
    else:
        images = tuple(perm)
    m = len(images)
    if sorted(images) != list(range(1, m + 1)):
        raise InvalidShiftError(f"{images} is not a permutation of [{m}]")
    for j, img in enumerate(images, start=1):
        if img < j - 1:
            raise InvalidShiftError(f"sigma({j}) = {img} < {j - 1}: not a shift permutation")
    out = []
    running_max = 0
    for j, img in enumerate(images, start=1):
        running_max = max(running_max, img)
        if running_max == j:
            out.append(j)
    return frozenset(out)


def induced(sigma: ShiftPermutation, j: int) -> ShiftPermutation:
    """The induced shift permutation for position j: keep the blocks before
    j's block intact and flatten the rest up to j."""
    if not 1 <= j <= sigma.m:
        raise InvalidIndexSetError(f"j={j} out of range [1, {sigma.m}]")
    iset = sorted(sigma.index_set)
    if j in sigma.index_set:
        h = iset.index(j)
        prev = iset[h - 1] if h > 0 else 0
        new_set = sigma.index_set | set(range(1, prev + 1))
    else:
        new_set = sigma.index_set | set(range(1, j))
    return from_set(sigma.m, new_set)


def enumerate_all(m: int, limit: int = DEFAULT_ENUM_LIMIT) -> Iterator[ShiftPermutation]:
    """All 2^(m-1) shift permutations; index sets by increasing size, then lex."""
    if m < 1:
        raise InvalidIndexSetError(f"m={m} must be >= 1")
    if m > limit:
        raise ResourceLimitError(f"m={m} exceeds enumeration limit {limit}")
    rest = range(1, m)
    for size in range(0, m):
        for extra in combinations(rest, size):
            yield from_set(m, frozenset(extra) | {m})


def _lex_min_mask(masks: np.ndarray, m: int) -> int:
    """Among index-set bitmasks (bit e-1 = element e, element m implicit),
    return the one whose sorted index set is lexicographically smallest."""
    full = masks.astype(np.int64) | (1 << (m - 1))
    originals = masks.copy()
    while len(full) > 1:
        low = full & -full
        nonzero = low[low > 0]
        if nonzero.size == 0:
            break
        lo = nonzero.min()
        keep = low == lo
        full = full[keep] ^ lo
        originals = originals[keep]
    return int(originals[0])


def _prep_arrays(seq: GraphSequence):
    """Vertex-window bitmask arrays for the numba/python sweep kernels."""
    verts = [v for g in seq for iv in g.intervals for v in iv]
    if not verts:
        return None
    lo, hi = min(verts), max(verts)
    if hi - lo > 61:
        return None
    comp_vmask: list[int] = []
    comp_len: list[int] = []
    offsets = np.zeros(len(seq) + 1, np.int64)
    gmask = np.zeros(len(seq), np.int64)
    for j, g in enumerate(seq):
        acc = 0
        for s, t in g.intervals:
            mask = ((1 << (t - s + 1)) - 1) << (s - lo)
            comp_vmask.append(mask)
            comp_len.append(t - s)
            acc |= mask
        gmask[j] = acc
        offsets[j + 1] = len(comp_vmask)
    return (
        np.asarray(comp_vmask, np.int64),
        np.asarray(comp_len, np.int16),
        offsets,
        gmask,
    )


def best_shift(
    seq: GraphSequence,
    objective: Objective = "vec_delta",
    limit: int = DEFAULT_ENUM_LIMIT,
) -> tuple[ShiftPermutation, int]:
    """Maximize the chosen vector measure of (G_sigma(1), ..., G_sigma(m)) over
    all shift permutations; ties resolved by the lexicographically smallest
    index set."""
    m = len(seq)
    if m < 1:
        raise InvalidIndexSetError("best_shift needs a nonempty sequence")
    if m > limit:
        raise ResourceLimitError(f"m={m} exceeds sweep limit {limit} (2^{m - 1} candidates)")
    code = _OBJECTIVE_CODE[objective]
    arrays = _prep_arrays(seq)
    if arrays is not None:
        values = _kernels.shift_sweep(*arrays, m, code)
        best = int(values.max())
        achievers = np.nonzero(values == best)[0]
        mask = _lex_min_mask(achievers, m)
        elements = frozenset(e for e in range(1, m) if (mask >> (e - 1)) & 1) | {m}
        return from_set(m, elements), best
    # vertex window too wide for the kernels: direct evaluation
    best_val = -1
    best_sigma = None
    for sigma in enumerate_all(m, limit=limit):
        val = vec_measures(sigma.apply(seq))[code]
        if val > best_val:
            best_val = val
            best_sigma = sigma
        elif val == best_val and sorted(sigma.index_set) < sorted(best_sigma.index_set):
            best_sigma = sigma
    return best_sigma, best_val
