"""Compiled aggregation of overlap profiles.

Instead of walking Venn cells, the tuple is built one subset at a time.  After
sets 0..j-1 are placed, the vertices fall into regions R (nonempty subsets of
{0..j-1}) of known size c_R.  Set j picks x_R vertices from each region and
y = k - sum(x) new ones.  Every sequence of choices is exactly one profile,
and the number of labelled tuples it stands for is

    (n)_v * prod_j [ prod_R C(c_R, x_R) / y_j! ].

Scaling by k!**r makes every factor an integer, so the kernel accumulates

    W(v, e, c) = sum over profiles with v vertices, e edges and c colour
                 components of  k!**r / prod_T a_T!

exactly, as residues modulo 2**64, P1 and P2; the caller recombines them with
the Chinese remainder theorem after checking that the true sums fit.

The contribution of the last set only depends on the region sizes left by the
first r-1 sets, and those are permuted, not changed, by relabelling the first
r-1 indices.  With ``symmetric`` set, the last stage is evaluated once per
orbit (on the lexicographically smallest region vector) and weighted by the
orbit size.
"""
from __future__ import annotations

import itertools
import math

import numba as nb
import numpy as np

P1 = 2147483647
P2 = 2147483629
MODULUS = (1 << 64) * P1 * P2


@nb.njit(cache=True, nogil=True)
def _ncomp_after(j, lab, linked):
    # components among sets 0..j once set j joins every label in `linked`
    seen = 0
    touched = 0
    for t in range(j):
        seen |= 1 << lab[t]
        if (linked >> t) & 1:
            touched |= 1 << lab[t]
    rest = seen & ~touched
    cnt = 0
    while rest:
        rest &= rest - 1
        cnt += 1
    return cnt + 1


@nb.njit(cache=True, nogil=True)
def _choices(c, j, k, binom, materialize, xs_out, s_out, d_out, link_out, w_out,
             local_w, local_n, work):
    """Enumerate the picks of set j from regions 1..2**j-1.

    For each pick: s = total picked, d = number of picked pairs lying in
    disjoint regions (those pairs are not yet edges), linked = indices sharing
    at least two vertices with set j, w = prod C(c_R, x_R).  Either writes the
    picks out (materialize) or accumulates w and a count into
    local_*[s, d, linked].  Returns the number of picks; work[0] counts nodes.
    """
    M = 1 << j
    x = np.zeros(M, np.int64)
    ub = np.zeros(M, np.int64)
    acc = np.zeros(M, np.int64)
    s = np.zeros(M, np.int64)
    d = np.zeros(M, np.int64)
    w = np.zeros(M, np.int64)
    inter = np.zeros((M, j), np.int64)
    last = M - 1
    cnt = 0
    t = 1
    x[1] = -1
    w[1] = 1
    ub[1] = min(c[1], k)
    if last == 1:
        # single region: handled by the leaf loop below
        pass
    while t >= 1:
        if t == last:
            # the last region meets every other region, so it adds no
            # disjoint pairs and bumps every index
            cl = c[t]
            lim = min(cl, k - s[t])
            for xv in range(lim + 1):
                ns = s[t] + xv
                nw = w[t] * binom[cl, xv]
                linked = 0
                for i in range(j):
                    if inter[t, i] + xv >= 2:
                        linked |= 1 << i
                if materialize:
                    for u in range(1, last):
                        xs_out[cnt, u] = x[u]
                    xs_out[cnt, last] = xv
                    s_out[cnt] = ns
                    d_out[cnt] = d[t]
                    link_out[cnt] = linked
                    w_out[cnt] = nw
                else:
                    local_w[ns, d[t], linked] += nw
                    local_n[ns, d[t], linked] += 1
                cnt += 1
            work[0] += lim + 1
            t -= 1
            continue
        x[t] += 1
        if x[t] > ub[t]:
            t -= 1
            continue
        work[0] += 1
        xv = x[t]
        t1 = t + 1
        s[t1] = s[t] + xv
        d[t1] = d[t] + xv * acc[t]
        w[t1] = w[t] * binom[c[t], xv]
        for i in range(j):
            if (t >> i) & 1:
                inter[t1, i] = inter[t, i] + xv
            else:
                inter[t1, i] = inter[t, i]
        a = 0
        for u in range(1, t1):
            if (u & t1) == 0:
                a += x[u]
        acc[t1] = a
        ub[t1] = min(c[t1], k - s[t1])
        x[t1] = -1
        t = t1
    return cnt


@nb.njit(cache=True, nogil=True)
def _is_canonical(c, j, perm_masks):
    """Return the orbit size of region vector c under relabelling 0..j-1, or 0
    when some relabelling gives a lexicographically smaller vector."""
    M = 1 << j
    nperm = perm_masks.shape[0]
    cp = np.empty(M, np.int64)
    stab = 0
    for p in range(nperm):
        for m in range(1, M):
            cp[perm_masks[p, m]] = c[m]
        cmp = 0
        for m in range(1, M):
            if cp[m] != c[m]:
                cmp = -1 if cp[m] < c[m] else 1
                break
        if cmp < 0:
            return 0
        if cmp == 0:
            stab += 1
    return nperm // stab


@nb.njit(cache=True, nogil=True)
def aggregate(r, k, binom, kfo, perm_masks, symmetric, lo, hi, table, counts,
              max_work, work):
    """Fill ``table[v, e, comps, 0..2]`` and ``counts[v, e, comps]``.

    Only tuples with |S_0 ∩ S_1| in [lo, hi] are visited (r >= 3), which lets
    callers split the work.  Returns 0, or -1 when ``max_work`` nodes were
    exceeded.
    """
    ck2 = k * (k - 1) // 2
    if r == 1:
        table[k, ck2, 1, 0] += np.uint64(1)
        table[k, ck2, 1, 1] += np.uint64(1)
        table[k, ck2, 1, 2] += np.uint64(1)
        counts[k, ck2, 1] += np.uint64(1)
        return 0
    full = 1 << r
    cs = np.zeros((r, full), np.int64)
    sv = np.zeros(r, np.int64)
    se = np.zeros(r, np.int64)
    lab = np.zeros((r, r), np.int64)
    W0 = np.zeros(r, np.uint64)
    W1 = np.zeros(r, np.int64)
    W2 = np.zeros(r, np.int64)
    cs[1, 1] = k
    sv[1] = k
    se[1] = ck2
    W0[1] = 1
    W1[1] = 1
    W2[1] = 1

    # per-stage materialized picks for stages 1..r-2
    capmax = 1
    for j in range(1, r - 1):
        nreg = (1 << j) - 1
        b = 1
        for q in range(1, nreg + 1):  # C(k + nreg, nreg): picks with sum <= k
            b = b * (k + q) // q
        if b > capmax:
            capmax = b
    nst = max(r - 1, 1)
    xs = np.zeros((nst, capmax, full), np.int64)
    ss = np.zeros((nst, capmax), np.int64)
    ds = np.zeros((nst, capmax), np.int64)
    ls = np.zeros((nst, capmax), np.int64)
    ws = np.zeros((nst, capmax), np.int64)
    ncho = np.zeros(nst, np.int64)
    idx = np.zeros(nst, np.int64)

    jl = r - 1
    ML = 1 << jl
    local_w = np.zeros((k + 1, ck2 + 1, ML), np.int64)
    local_n = np.zeros((k + 1, ck2 + 1, ML), np.int64)
    dummy2 = np.zeros((1, 1), np.int64)
    dummy1 = np.zeros(1, np.int64)

    if r == 2:
        _last(1, cs[1], sv[1], se[1], lab[1], W0[1], W1[1], W2[1], 1, k, ck2,
              binom, kfo, local_w, local_n, table, counts, dummy2, dummy1, work)
        return 0

    j = 1
    ncho[1] = _choices(cs[1], 1, k, binom, True, xs[1], ss[1], ds[1], ls[1], ws[1],
                       local_w, local_n, work)
    idx[1] = -1
    while j >= 1:
        idx[j] += 1
        if idx[j] >= ncho[j]:
            j -= 1
            continue
        q = idx[j]
        if j == 1 and (xs[1, q, 1] < lo or xs[1, q, 1] > hi):
            continue
        if work[0] > max_work:
            return -1
        jn = j + 1
        s = ss[j, q]
        y = k - s
        # refine regions
        for m in range(1 << jn):
            cs[jn, m] = 0
        for m in range(1, 1 << j):
            xm = xs[j, q, m]
            cs[jn, m] = cs[j, m] - xm
            cs[jn, m | (1 << j)] = xm
        cs[jn, 1 << j] = y
        sv[jn] = sv[j] + y
        se[jn] = se[j] + ck2 - (s * (s - 1) // 2 - ds[j, q])
        linked = ls[j, q]
        for t in range(j):
            lab[jn, t] = lab[j, t]
        for i in range(j):
            if (linked >> i) & 1:
                li = lab[j, i]
                for t in range(j):
                    if lab[j, t] == li:
                        lab[jn, t] = j
        lab[jn, j] = j
        f = ws[j, q] * kfo[y]
        W0[jn] = W0[j] * np.uint64(f)
        W1[jn] = (W1[j] * (f % P1)) % P1
        W2[jn] = (W2[j] * (f % P2)) % P2
        if jn == r - 1:
            orbit = 1
            if symmetric:
                orbit = _is_canonical(cs[jn], jn, perm_masks)
                if orbit == 0:
                    continue
            _last(jn, cs[jn], sv[jn], se[jn], lab[jn], W0[jn], W1[jn], W2[jn], orbit,
                  k, ck2, binom, kfo, local_w, local_n, table, counts, dummy2, dummy1,
                  work)
            continue
        j = jn
        ncho[j] = _choices(cs[j], j, k, binom, True, xs[j], ss[j], ds[j], ls[j], ws[j],
                           local_w, local_n, work)
        idx[j] = -1
    return 0


@nb.njit(cache=True, nogil=True)
def _last(j, c, v0, e0, lab, w0, w1, w2, orbit, k, ck2, binom, kfo, local_w, local_n,
          table, counts, dummy2, dummy1, work):
    local_w[:, :, :] = 0
    local_n[:, :, :] = 0
    _choices(c, j, k, binom, False, dummy2, dummy1, dummy1, dummy1, dummy1,
             local_w, local_n, work)
    ML = 1 << j
    for s in range(k + 1):
        y = k - s
        for d in range(ck2 + 1):
            for linked in range(ML):
                lw = local_w[s, d, linked]
                if lw == 0:
                    continue
                val = lw * kfo[y] * orbit
                v = v0 + y
                e = e0 + ck2 - (s * (s - 1) // 2 - d)
                nc = _ncomp_after(j, lab, linked)
                table[v, e, nc, 0] += w0 * np.uint64(val)
                table[v, e, nc, 1] += np.uint64((w1 * (val % P1)) % P1)
                table[v, e, nc, 2] += np.uint64((w2 * (val % P2)) % P2)
                counts[v, e, nc] += np.uint64(local_n[s, d, linked] * orbit)


def perm_mask_table(j: int) -> np.ndarray:
    """perm_masks[p, m] = image of mask m (over bits 0..j-1) under the p-th permutation."""
    perms = list(itertools.permutations(range(j)))
    out = np.zeros((len(perms), 1 << j), np.int64)
    for p, perm in enumerate(perms):
        for m in range(1 << j):
            pm = 0
            for i in range(j):
                if m >> i & 1:
                    pm |= 1 << perm[i]
            out[p, m] = pm
    return out


def binom_table(r: int, k: int) -> np.ndarray:
    size = r * k + 1
    out = np.zeros((size, k + 1), np.int64)
    for a in range(size):
        for b in range(k + 1):
            out[a, b] = math.comb(a, b)
    return out


def crt(a0: int, a1: int, a2: int) -> int:
    """The unique x in [0, 2**64 * P1 * P2) with the given residues."""
    m01 = (1 << 64) * P1
    # combine mod 2**64 and mod P1
    t = ((a1 - a0) * pow(1 << 64, -1, P1)) % P1
    x01 = a0 + (1 << 64) * t
    t = ((a2 - x01) * pow(m01, -1, P2)) % P2
    return x01 + m01 * t


def _last_stage_bound(r: int, k: int) -> int:
    # largest value formed in int64 inside _last: sum_x prod C(c_R, x_R) * k! * orbit
    v = (r - 1) * k
    return sum(math.comb(v, s) for s in range(k + 1)) * math.factorial(k) * math.factorial(max(r - 1, 1))


def profile_weights(r: int, k: int, *, symmetric: bool = True, workers: int = 1,
                    max_work: int = 10**8) -> tuple[dict[tuple[int, int, int], tuple[int, int]], int]:
    """Exact ``{(v, edges, comps): (sum of k!**r / prod a_T!, profile count)}``.

    Returns the table and the number of search nodes visited.  Raises
    ResourceLimitError when ``max_work`` would be exceeded or when the
    integer ranges the kernel relies on would overflow.
    """
    from concurrent.futures import ThreadPoolExecutor

    from .errors import ResourceLimitError

    if r < 1 or k < 2:
        raise ValueError("need r >= 1 and k >= 2")
    if _last_stage_bound(r, k) >= 2**63:
        raise ResourceLimitError(f"r={r}, k={k} is beyond the 64-bit range of the profile kernel")
    binom = binom_table(r, k)
    kfo = np.array([math.factorial(k) // math.factorial(y) for y in range(k + 1)], np.int64)
    perm_masks = perm_mask_table(max(r - 1, 1))
    size_v = r * k + 1
    size_e = r * k * (k - 1) // 2 + 1

    # split on |S_0 ∩ S_1|; only meaningful for r >= 3
    nparts = max(1, min(workers, k + 1)) if r >= 3 else 1
    bounds = np.linspace(0, k + 1, nparts + 1).round().astype(int)
    parts = [(int(bounds[i]), int(bounds[i + 1]) - 1) for i in range(nparts)]

    def run(part):
        lo, hi = part
        table = np.zeros((size_v, size_e, r + 1, 3), np.uint64)
        counts = np.zeros((size_v, size_e, r + 1), np.uint64)
        work = np.zeros(1, np.int64)
        status = aggregate(r, k, binom, kfo, perm_masks, symmetric, lo, hi, table, counts,
                           max_work, work)
        return status, table, counts, int(work[0])

    if nparts == 1:
        results = [run(parts[0])]
    else:
        with ThreadPoolExecutor(max_workers=nparts) as ex:
            results = list(ex.map(run, parts))

    total_work = sum(res[3] for res in results)
    if any(res[0] < 0 for res in results) or total_work > max_work:
        raise ResourceLimitError(
            f"moment enumeration for r={r}, k={k} exceeded the cap of {max_work} search nodes"
        )
    # fixed-order reduction; residues combine exactly
    r0 = np.zeros((size_v, size_e, r + 1), dtype=object)
    r1 = np.zeros_like(r0)
    r2 = np.zeros_like(r0)
    cnt = np.zeros_like(r0)
    for _, table, counts, _ in results:
        r0 = r0 + table[..., 0].astype(object)
        r1 = r1 + table[..., 1].astype(object)
        r2 = r2 + table[..., 2].astype(object)
        cnt = cnt + counts.astype(object)
    out = {}
    total = 0
    for v, e, c in zip(*np.nonzero(cnt)):
        n_prof = int(cnt[v, e, c])
        w = crt(int(r0[v, e, c]) % (1 << 64), int(r1[v, e, c]) % P1, int(r2[v, e, c]) % P2)
        out[(int(v), int(e), int(c))] = (w, n_prof)
        total += n_prof
    if total * math.factorial(k) ** r >= MODULUS:
        raise ResourceLimitError(f"r={r}, k={k} weights exceed the residue range")
    return out, total_work
