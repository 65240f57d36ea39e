"""Exact law of X for small n by listing every 2-colouring of K_n.

Edges are numbered in lexicographic order of pairs (u, v), u < v, and a
colouring is the integer whose bit ``i`` is the colour of edge ``i``.  Each
k-subset gets a mask of its C(k, 2) edge bits; it is monochromatic when the
colouring restricted to the mask is all zeros or all ones.

Only colourings with the top edge bit clear are visited: complementing a
colouring maps X to itself, so the histogram over the other half is
identical and is accounted for by doubling.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numba as nb
import numpy as np

from .errors import DomainError, ResourceLimitError
from .exact import binomial

DEFAULT_MAX_N = 7


def edge_index(n: int) -> dict[tuple[int, int], int]:
    """Lexicographic numbering of the edges of K_n."""
    return {e: i for i, e in enumerate(itertools.combinations(range(n), 2))}


def subset_masks(n: int, k: int) -> np.ndarray:
    """Edge-bit mask of every k-subset, subsets in lexicographic order."""
    idx = edge_index(n)
    masks = []
    for sub in itertools.combinations(range(n), k):
        m = 0
        for e in itertools.combinations(sub, 2):
            m |= 1 << idx[e]
        masks.append(m)
    return np.array(masks, dtype=np.uint64)


@nb.njit(cache=True, nogil=True)
def _histogram(masks, start, stop, hist):
    for col in range(start, stop):
        c = np.uint64(col)
        x = 0
        for m in masks:
            b = c & m
            if b == 0 or b == m:
                x += 1
        hist[x] += 1


@dataclass(frozen=True)
class ExactDistribution:
    n: int
    k: int
    counts: dict[int, int]
    denominator: int

    def probability(self, i: int) -> Fraction:
        return Fraction(self.counts.get(i, 0), self.denominator)

    def as_json(self, max_r: int = 0) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "denominator": str(self.denominator),
            "counts": {str(i): str(c) for i, c in sorted(self.counts.items())},
            "moments": [
                {"r": r, "numerator": str(m.numerator), "denominator": str(m.denominator)}
                for r in range(max_r + 1)
                for m in [oracle_moment(self, r)]
            ],
        }


def exact_distribution(n: int, k: int, *, max_n: int = DEFAULT_MAX_N, workers: int = 1,
                       use_symmetry: bool = True) -> ExactDistribution:
    """Histogram of X over all 2**C(n,2) colourings of K_n.

    ``max_n`` guards the exponential cost; raise it explicitly for n = 8.
    The colouring range is split into ``workers`` contiguous chunks whose
    histograms are added, so the result does not depend on the split.
    """
    if k < 2 or n < 0:
        raise DomainError(f"need k >= 2 and n >= 0, got n={n}, k={k}")
    n_edges = binomial(n, 2)
    if n > max_n:
        raise ResourceLimitError(
            f"exact distribution for n={n} needs 2^{n_edges} colourings; cap is n <= {max_n}"
        )
    if n_edges > 63:
        raise ResourceLimitError(f"n={n} does not fit the 64-bit colouring encoding")
    total = 1 << n_edges
    if k > n:
        return ExactDistribution(n, k, {0: total}, total)
    masks = subset_masks(n, k)
    halve = use_symmetry and n_edges > 0
    stop = total >> 1 if halve else total
    nchunks = max(1, workers)
    edges = np.linspace(0, stop, nchunks + 1).round().astype(np.int64)
    hists = [np.zeros(len(masks) + 1, np.int64) for _ in range(nchunks)]

    def run(i):
        _histogram(masks, int(edges[i]), int(edges[i + 1]), hists[i])

    if nchunks == 1:
        run(0)
    else:
        with ThreadPoolExecutor(max_workers=nchunks) as ex:
            list(ex.map(run, range(nchunks)))
    hist = sum(hists[1:], hists[0].copy())
    factor = 2 if halve else 1
    counts = {i: int(c) * factor for i, c in enumerate(hist) if c}
    return ExactDistribution(n, k, counts, total)


def oracle_moment(d: ExactDistribution, r: int) -> Fraction:
    """E[X^r] = sum_i i^r P(X = i)."""
    if r < 0:
        raise DomainError("moment order must be non-negative")
    return Fraction(sum(i ** r * c for i, c in d.counts.items()), d.denominator)


def oracle_p_zero(d: ExactDistribution) -> Fraction:
    return d.probability(0)
