"""Monte Carlo sampling of X and model fits to the sampled histogram.

Random bits come from numpy's Philox4x64-10 keyed by the seed.  Every Philox
counter step yields 256 bits; sample ``i`` owns counter steps
``[i*B, (i+1)*B)`` with ``B = ceil(C(n,2) / 256)`` and reads edge ``e`` (in
lexicographic pair order) from bit ``e % 64`` of word ``e // 64``; a set bit
is red.  A sample's colouring therefore depends only on (seed, i), and the
histogram is the same for any chunking or worker count.

Per sample, X is the number of red k-cliques plus blue k-cliques, counted by
depth-first search over bitset candidate sets.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numba as nb
import numpy as np
from scipy import stats

from .distributions import DelaporteParams, delaporte_from_moments, fit_bign
from .errors import DomainError, RegimeError, ResourceLimitError
from .exact import binomial

RNG_NAME = "numpy Philox4x64-10, key=seed, counter=sample*ceil(C(n,2)/256)"
CHUNK = 1 << 14
DEFAULT_MAX_COST = 10**12
MAX_ORDER = 5


def blocks_per_sample(n: int) -> int:
    return max(1, -(-binomial(n, 2) // 256))


@nb.njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@nb.njit(cache=True)
def _count_cliques(adj, n, k, cand):
    """Number of k-cliques of the graph with bitset rows ``adj``; cand is (k, W) scratch."""
    W = adj.shape[1]
    for w in range(W):
        cand[0, w] = 0
    for v in range(n):
        cand[0, v >> 6] |= np.uint64(1) << np.uint64(v & 63)
    if k == 1:
        return n
    total = 0
    d = 0
    while d >= 0:
        if d == k - 1:
            for w in range(W):
                total += _popcount(cand[d, w])
            d -= 1
            continue
        # pop the lowest vertex of cand[d]
        v = -1
        for w in range(W):
            x = cand[d, w]
            if x:
                low = x & (~x + np.uint64(1))
                cand[d, w] = x ^ low
                v = w * 64 + _popcount(low - np.uint64(1))
                break
        if v < 0:
            d -= 1
            continue
        # remaining bits of cand[d] all exceed v
        for w in range(W):
            cand[d + 1, w] = cand[d, w] & adj[v, w]
        d += 1
    return total


@nb.njit(cache=True)
def _fill_adjacency(words, n, red, blue):
    W = red.shape[1]
    for u in range(n):
        for w in range(W):
            red[u, w] = 0
            blue[u, w] = 0
    e = 0
    one = np.uint64(1)
    for u in range(n):
        for v in range(u + 1, n):
            bit = (words[e >> 6] >> np.uint64(e & 63)) & one
            if bit:
                red[u, v >> 6] |= one << np.uint64(v & 63)
                red[v, u >> 6] |= one << np.uint64(u & 63)
            else:
                blue[u, v >> 6] |= one << np.uint64(v & 63)
                blue[v, u >> 6] |= one << np.uint64(u & 63)
            e += 1


@nb.njit(cache=True, nogil=True)
def _count_batch(raw, n, k, out):
    W = (n + 63) >> 6
    red = np.zeros((n, W), np.uint64)
    blue = np.zeros((n, W), np.uint64)
    cand = np.zeros((max(k, 1), W), np.uint64)
    for i in range(raw.shape[0]):
        _fill_adjacency(raw[i], n, red, blue)
        out[i] = _count_cliques(red, n, k, cand) + _count_cliques(blue, n, k, cand)


def _words(seed: int, n: int, start: int, count: int) -> np.ndarray:
    b = blocks_per_sample(n)
    bg = np.random.Philox(key=seed, counter=start * b)
    return bg.random_raw(4 * b * count).reshape(count, 4 * b)


def sample_count(n: int, k: int, coloring) -> int:
    """X for one colouring, given as a sequence of C(n,2) bits (1 = red) or packed uint64 words."""
    if n < k or k < 1:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    m = binomial(n, 2)
    arr = np.asarray(coloring)
    if arr.dtype != np.uint64 or arr.size != -(-m // 64):
        bits = np.asarray(coloring, dtype=np.uint8).ravel()
        if bits.size != m:
            raise DomainError(f"expected {m} edge bits, got {bits.size}")
        packed = np.packbits(bits, bitorder="little")
        buf = np.zeros(-(-m // 64) * 8, np.uint8)
        buf[:packed.size] = packed
        arr = buf.view("<u8").astype(np.uint64)
    out = np.zeros(1, np.int64)
    _count_batch(arr.reshape(1, -1), n, k, out)
    return int(out[0])


def sample_counts(n: int, k: int, start: int, count: int, seed: int, *,
                  complement: bool = False) -> np.ndarray:
    """X for samples start..start+count-1; with ``complement`` every colour is swapped."""
    raw = _words(seed, n, start, count)
    if complement:
        raw = ~raw
    out = np.zeros(count, np.int64)
    _count_batch(raw, n, k, out)
    return out


@dataclass
class SimulationReport:
    n: int
    k: int
    samples: int
    seed: int
    histogram: dict[int, int]
    power_sums: list[int]
    elapsed_ms: float = 0.0
    rng: str = RNG_NAME
    chunk: int = CHUNK

    @property
    def mean(self) -> Fraction:
        return Fraction(self.power_sums[1], self.samples)

    def central_sum(self, m: int) -> Fraction:
        """sum_i (x_i - mean)^m, exact."""
        mu = self.mean
        return sum((math.comb(m, j) * self.power_sums[j] * (-mu) ** (m - j)
                    for j in range(m + 1)), Fraction(0))

    def central_moment(self, m: int) -> Fraction:
        return self.central_sum(m) / self.samples

    @property
    def moment_accumulators(self) -> dict[int, float]:
        return {m: float(self.central_sum(m)) for m in range(2, MAX_ORDER + 1)}

    def pmf(self) -> dict[int, float]:
        return {x: c / self.samples for x, c in sorted(self.histogram.items())}

    def as_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "samples": self.samples, "seed": str(self.seed),
            "histogram": {str(x): c for x, c in sorted(self.histogram.items())},
            "mean": float(self.mean),
            "moment_accumulators": {str(m): v for m, v in self.moment_accumulators.items()},
            "elapsed_ms": self.elapsed_ms,
            "rng": self.rng,
        }


def run(n: int, k: int, samples: int, seed: int, workers: int = 1, *,
        max_cost: int = DEFAULT_MAX_COST) -> SimulationReport:
    """Simulate ``samples`` colourings of K_n and tabulate X.

    Chunks of ``CHUNK`` consecutive sample indices are counted independently
    and merged in index order; only integers are merged, so the report does
    not depend on ``workers``.
    """
    if samples < 1:
        raise DomainError("samples must be positive")
    if n < k or k < 1:
        raise DomainError(f"need 1 <= k <= n, got n={n}, k={k}")
    if not 0 <= seed < 1 << 128:
        raise DomainError("seed must be in [0, 2^128)")
    cost = samples * binomial(n, k)
    if cost > max_cost:
        raise ResourceLimitError(
            f"{samples} samples x C({n},{k}) = {cost} subset tests exceeds cap {max_cost}")
    t0 = time.perf_counter()
    starts = list(range(0, samples, CHUNK))

    def job(s):
        counts = sample_counts(n, k, s, min(CHUNK, samples - s), seed)
        vals, freq = np.unique(counts, return_counts=True)
        return vals, freq

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(job, starts))
    else:
        parts = [job(s) for s in starts]
    hist: dict[int, int] = {}
    for vals, freq in parts:
        for v, f in zip(vals.tolist(), freq.tolist()):
            hist[v] = hist.get(v, 0) + f
    power = [sum(c * x ** p for x, c in hist.items()) for p in range(MAX_ORDER + 1)]
    return SimulationReport(n, k, samples, seed, dict(sorted(hist.items())), power,
                            (time.perf_counter() - t0) * 1e3)


def color_swap_check(n: int, k: int, samples: int, seed: int) -> bool:
    """Complementing each sampled colouring leaves every count unchanged."""
    a = sample_counts(n, k, 0, samples, seed)
    b = sample_counts(n, k, 0, samples, seed, complement=True)
    return bool(np.array_equal(a, b))


# model fitting


@dataclass
class FitReport:
    model: str
    params: dict | None
    chi_square: float | None = None
    dof: int | None = None
    p_value: float | None = None
    log_likelihood: float | None = None
    binning: list[tuple[int, int | None]] = field(default_factory=list)
    note: str = ""

    def as_json(self) -> dict:
        return {
            "model": self.model, "params": self.params, "chi_square": self.chi_square,
            "dof": self.dof, "p_value": self.p_value, "log_likelihood": self.log_likelihood,
            "binning": [[lo, hi] for lo, hi in self.binning], "note": self.note,
        }


def delaporte_pmf_array(p: DelaporteParams, J: int) -> np.ndarray:
    """Float64 pmf on 0..J as the convolution of scipy's Poisson and negative binomial."""
    j = np.arange(J + 1)
    nbp = stats.nbinom.pmf(j, float(p.alpha), 1 / (1 + float(p.beta)))
    pp = stats.poisson.pmf(j, float(p.lam))
    return np.convolve(nbp, pp)[: J + 1]


def _bins(expected: np.ndarray, min_expected: float) -> list[tuple[int, int]]:
    """Merge consecutive cells left to right until each holds >= min_expected."""
    bins = []
    lo, acc = 0, 0.0
    for j, e in enumerate(expected):
        acc += e
        if acc >= min_expected:
            bins.append((lo, j))
            lo, acc = j + 1, 0.0
    if lo < len(expected):
        if bins:
            bins[-1] = (bins[-1][0], len(expected) - 1)
        else:
            bins.append((0, len(expected) - 1))
    return bins


def _score(model: str, params: dict, probs: np.ndarray, tail: float, rep: SimulationReport,
           n_fitted: int, min_expected: float) -> FitReport:
    """Chi-square and log-likelihood of a pmf on 0..J plus tail mass P(X > J)."""
    J = len(probs) - 1
    obs = np.zeros(J + 2)
    for x, c in rep.histogram.items():
        obs[min(x, J + 1)] += c
    cells = np.append(probs, max(tail, 0.0))
    expected = rep.samples * cells
    bins = _bins(expected, min_expected)
    e_b = np.array([expected[a:b + 1].sum() for a, b in bins])
    o_b = np.array([obs[a:b + 1].sum() for a, b in bins])
    chi = float(((o_b - e_b) ** 2 / e_b).sum())
    dof = len(bins) - 1 - n_fitted
    pval = float(stats.chi2.sf(chi, dof)) if dof > 0 else None
    with np.errstate(divide="ignore"):
        logp = np.log(cells)
    ll = float(sum(c * logp[min(x, J + 1)] for x, c in rep.histogram.items()))
    binning = [(a, None if b == J + 1 else b) for a, b in bins]
    return FitReport(model, params, chi, dof, pval, ll, binning)


def fit_and_compare(rep: SimulationReport, models=("delaporte", "poisson", "normal"), *,
                    min_expected: float = 5.0) -> list[FitReport]:
    """Method-of-moments fits scored by binned chi-square and log-likelihood.

    Models: ``delaporte`` (mean, variance, third central moment), ``poisson``
    (mean), ``normal`` (mean, variance; cells are unit intervals around each
    integer), and ``delaporte-bign`` / ``delaporte-bign-exact`` (parameters
    from :func:`fit_bign`, nothing estimated from the data).  Bins are merged until each expects at least
    ``min_expected`` counts; the last bin always absorbs the upper tail.
    """
    if len(rep.histogram) < 2:
        raise DomainError("histogram has a single value; nothing to fit")
    mean = float(rep.mean)
    var = float(rep.central_moment(2))
    mu3 = float(rep.central_moment(3))
    top = max(rep.histogram)
    sd = math.sqrt(var)
    J = int(max(top, mean + 12 * sd)) + 1
    out = []
    for model in models:
        if model == "poisson":
            probs = stats.poisson.pmf(np.arange(J + 1), mean)
            out.append(_score(model, {"lambda": mean}, probs, float(stats.poisson.sf(J, mean)),
                              rep, 1, min_expected))
        elif model == "normal":
            edges = np.arange(J + 2) - 0.5
            cdf = stats.norm.cdf(edges, mean, sd)
            probs = np.diff(cdf)
            probs[0] += cdf[0]
            out.append(_score(model, {"mean": mean, "variance": var}, probs,
                              float(stats.norm.sf(edges[-1], mean, sd)), rep, 2, min_expected))
        elif model in ("delaporte", "delaporte-bign", "delaporte-bign-exact"):
            if model == "delaporte":
                params, raw = delaporte_from_moments(mean, var, mu3)
                n_fit = 3
                if params is None:
                    out.append(FitReport(model, None, note=(
                        "method-of-moments infeasible: lambda={:.6g}, alpha={:.6g}, beta={:.6g}"
                        .format(*(float(x) for x in raw)))))
                    continue
            else:
                try:
                    params = fit_bign(rep.n, rep.k, exact_mean=model.endswith("exact"))
                except (RegimeError, DomainError) as exc:
                    out.append(FitReport(model, None, note=str(exc)))
                    continue
                n_fit = 0
            Jd = int(max(J, float(params.mean) + 12 * math.sqrt(float(params.variance)))) + 1
            probs = delaporte_pmf_array(params, Jd)
            out.append(_score(model, params.as_dict(), probs, max(0.0, 1.0 - probs.sum()),
                              rep, n_fit, min_expected))
        else:
            raise DomainError(f"unknown model {model!r}")
    return out
