"""Overlap profiles of ordered r-tuples of k-subsets.

An ordered tuple (S_1, ..., S_r) of k-subsets of {1..n} is described, up to
the choice of actual vertices, by its Venn cell sizes: for every nonempty
T of {1..r}, ``a_T`` counts the vertices lying in exactly the sets indexed by
T.  Cells are addressed by bitmask, bit ``i`` standing for index ``i + 1``, so
the canonical cell order is the integer order 1, 2, ..., 2**r - 1.

This module is the plain reference enumeration.  The compiled aggregation in
:mod:`ramsey_moments._profile_kernel` computes the same sums much faster and
is checked against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ResourceLimitError

DEFAULT_MAX_NODES = 10**8


def _members(mask: int, r: int) -> list[int]:
    return [i for i in range(r) if mask >> i & 1]


@dataclass(frozen=True)
class OverlapProfile:
    r: int
    k: int
    cells: tuple[int, ...]  # cells[mask - 1] = a_mask

    def __post_init__(self):
        if len(self.cells) != (1 << self.r) - 1:
            raise ValueError(f"expected {(1 << self.r) - 1} cells, got {len(self.cells)}")
        if any(a < 0 for a in self.cells):
            raise ValueError("cell sizes must be non-negative")
        for i in range(self.r):
            row = sum(a for m, a in enumerate(self.cells, 1) if m >> i & 1)
            if row != self.k:
                raise ValueError(f"index {i + 1} covers {row} vertices, expected {self.k}")

    def size(self, mask: int) -> int:
        return self.cells[mask - 1]

    @property
    def cell_sizes(self) -> dict[frozenset[int], int]:
        """Nonzero cells keyed by the set of 1-based indices they belong to."""
        return {
            frozenset(i + 1 for i in _members(m, self.r)): a
            for m, a in enumerate(self.cells, 1) if a
        }

    def intersection(self, i: int, j: int) -> int:
        """|S_i ∩ S_j| for 0-based indices."""
        both = (1 << i) | (1 << j)
        return sum(a for m, a in enumerate(self.cells, 1) if m & both == both)

    def relabel(self, perm: Sequence[int]) -> "OverlapProfile":
        """Profile of the tuple whose index ``perm[i]`` is this tuple's index ``i``."""
        cells = [0] * len(self.cells)
        for m, a in enumerate(self.cells, 1):
            pm = 0
            for i in _members(m, self.r):
                pm |= 1 << perm[i]
            cells[pm - 1] = a
        return OverlapProfile(self.r, self.k, tuple(cells))

    def has_distinct_subsets(self) -> bool:
        """True when no two of the r subsets coincide."""
        return all(
            self.intersection(i, j) < self.k
            for i in range(self.r) for j in range(i + 1, self.r)
        )


@dataclass(frozen=True)
class ProfileStats:
    v: int
    edge_count: int
    component_count: int
    symmetry_denominator: int


def profile_stats(p: OverlapProfile) -> ProfileStats:
    r = p.r
    nz = [(m, a) for m, a in enumerate(p.cells, 1) if a]
    v = sum(a for _, a in nz)
    edges = sum(a * (a - 1) // 2 for _, a in nz)
    for x in range(len(nz)):
        mx, ax = nz[x]
        for y in range(x + 1, len(nz)):
            my, ay = nz[y]
            if mx & my:
                edges += ax * ay
    # indices sharing an edge must share a colour
    parent = list(range(r))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(r):
        for j in range(i + 1, r):
            if p.intersection(i, j) >= 2:
                parent[find(i)] = find(j)
    comps = len({find(i) for i in range(r)})
    denom = 1
    for _, a in nz:
        denom *= math.factorial(a)
    return ProfileStats(v, edges, comps, denom)


def tuple_probability(p: OverlapProfile) -> Fraction:
    """Probability that all r induced subgraphs are monochromatic at once."""
    st = profile_stats(p)
    return Fraction(2 ** st.component_count, 2 ** st.edge_count)


def enumerate_profiles(r: int, k: int, *, max_nodes: int = DEFAULT_MAX_NODES,
                       index_order: Sequence[int] | None = None) -> Iterator[OverlapProfile]:
    """Yield every overlap profile of an ordered r-tuple of k-subsets once.

    Cells are filled depth-first in increasing mask order.  A branch is cut as
    soon as some index can no longer reach exactly ``k`` vertices with the
    cells still unvisited.  ``index_order`` relabels indices before the cell
    order is applied; it changes the visiting order, never the set produced.

    Raises
    ------
    ResourceLimitError
        When more than ``max_nodes`` search nodes would be visited.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if k < 2:
        raise ValueError("k must be at least 2")
    perm = list(index_order) if index_order is not None else list(range(r))
    if sorted(perm) != list(range(r)):
        raise ValueError(f"index_order must be a permutation of 0..{r - 1}")
    ncells = (1 << r) - 1
    # order[t] is the mask, in original labels, of the t-th visited cell
    inv = [0] * r
    for i, pi in enumerate(perm):
        inv[pi] = i
    order = []
    for pm in range(1, ncells + 1):
        m = 0
        for i in _members(pm, r):
            m |= 1 << inv[i]
        order.append(m)
    members = [_members(m, r) for m in order]
    # later[t][i]: is there a cell at position >= t containing index i
    later = [[False] * r for _ in range(ncells + 1)]
    for t in range(ncells - 1, -1, -1):
        later[t] = list(later[t + 1])
        for i in members[t]:
            later[t][i] = True

    rem = [k] * r
    cells = [0] * ncells
    nodes = 0

    def capacity_ok(t: int) -> bool:
        # remaining demand of each index must fit in cells t.. that contain it
        for i in range(r):
            if rem[i] and not later[t][i]:
                return False
        if t == ncells:
            return True
        for i in range(r):
            if not rem[i]:
                continue
            cap = 0
            for u in range(t, ncells):
                if order[u] >> i & 1:
                    cap += min(rem[j] for j in members[u])
                    if cap >= rem[i]:
                        break
            if cap < rem[i]:
                return False
        return True

    def dfs(t: int) -> Iterator[OverlapProfile]:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimitError(
                f"profile enumeration for r={r}, k={k} exceeded {max_nodes} nodes"
            )
        if t == ncells:
            yield OverlapProfile(r, k, tuple(cells))
            return
        mem = members[t]
        hi = min(rem[i] for i in mem)
        for a in range(hi + 1):
            for i in mem:
                rem[i] -= a
            cells[order[t] - 1] = a
            if capacity_ok(t + 1):
                yield from dfs(t + 1)
            for i in mem:
                rem[i] += a
        cells[order[t] - 1] = 0

    yield from dfs(0)


@lru_cache(maxsize=None)
def count_profiles(r: int, k: int) -> int:
    """Number of overlap profiles, by dynamic programming over remaining demands."""
    ncells = (1 << r) - 1
    members = [_members(m, r) for m in range(1, ncells + 1)]

    @lru_cache(maxsize=None)
    def f(t: int, rem: tuple[int, ...]) -> int:
        if t == ncells:
            return int(not any(rem))
        hi = min(rem[i] for i in members[t])
        total = 0
        for a in range(hi + 1):
            nxt = list(rem)
            for i in members[t]:
                nxt[i] -= a
            total += f(t + 1, tuple(nxt))
        return total

    out = f(0, (k,) * r)
    f.cache_clear()
    return out
