"""numba kernels behind the sampler, the tree scans and the Monte Carlo loop.

The RNG here mirrors ``centroidlab.rng`` bit-for-bit: SplitMix64 seeding of a
xoshiro256++ state addressed by (master_seed, trial_index).  The weighted
sampler keeps node weights in a binary-indexed (Fenwick) tree with O(log n)
draw/update; recursive trees short-circuit to O(1) uniform draws.  The total
weight used for each draw is taken from the closed form (m-1)*c1 + c2 rather
than the accumulated tree sum, so float drift cannot bias the draw.
"""

import numpy as np
from numba import njit

_U64_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_U64_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_U64_MIX2 = np.uint64(0x94D049BB133111EB)
_U64_FM1 = np.uint64(0xFF51AFD7ED558CCD)
_U64_FM2 = np.uint64(0xC4CEB9FE1A85EC53)
_U64_STREAM = np.uint64(0xD6E8FEB86659FD93)
_TWO_NEG53 = 2.0 ** -53


@njit(inline="always")
def _sm64(state):
    state = state + _U64_GOLDEN
    z = state
    z = (z ^ (z >> np.uint64(30))) * _U64_MIX1
    z = (z ^ (z >> np.uint64(27))) * _U64_MIX2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(33))) * _U64_FM1
    z = (z ^ (z >> np.uint64(33))) * _U64_FM2
    return z ^ (z >> np.uint64(33))


@njit(inline="always")
def _seed4(master_seed, stream_index):
    sm = _mix64(master_seed) ^ _mix64(stream_index ^ _U64_STREAM)
    sm, s0 = _sm64(sm)
    sm, s1 = _sm64(sm)
    sm, s2 = _sm64(sm)
    sm, s3 = _sm64(sm)
    if s0 | s1 | s2 | s3 == np.uint64(0):
        s0 = _U64_GOLDEN
    return s0, s1, s2, s3


@njit(inline="always")
def _rotl(x, k):
    return (x << k) | (x >> (np.uint64(64) - k))


@njit(inline="always")
def _next_u64(s0, s1, s2, s3):
    result = _rotl(s0 + s3, np.uint64(23)) + s0
    t = s1 << np.uint64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, np.uint64(45))
    return result, s0, s1, s2, s3


@njit(inline="always")
def _next_double(s0, s1, s2, s3):
    r, s0, s1, s2, s3 = _next_u64(s0, s1, s2, s3)
    return np.float64(r >> np.uint64(11)) * _TWO_NEG53, s0, s1, s2, s3


@njit(inline="always")
def _fen_add(fen, n, i, delta):
    while i <= n:
        fen[i] += delta
        i += i & (-i)


@njit(inline="always")
def _fen_search(fen, n, top, target):
    # smallest index with prefix sum > target
    pos = 0
    r = top
    while r > 0:
        nxt = pos + r
        if nxt <= n and fen[nxt] <= target:
            pos = nxt
            target -= fen[nxt]
        r >>= 1
    return pos + 1


@njit(inline="always")
def _sample_parents(parents, weights, fen, outdeg, n, recursive, c1, c2, s0, s1, s2, s3):
    if recursive:
        for m in range(2, n + 1):
            u, s0, s1, s2, s3 = _next_double(s0, s1, s2, s3)
            p = 1 + int(u * (m - 1))
            if p >= m:
                p = m - 1
            parents[m] = p
        return s0, s1, s2, s3

    for i in range(n + 1):
        fen[i] = 0.0
        weights[i] = 0.0
        outdeg[i] = 0
    w_leaf = c1 + c2
    weights[1] = w_leaf
    _fen_add(fen, n, 1, w_leaf)
    top = 1
    while (top << 1) <= n:
        top <<= 1
    # weights that are zero up to float dust (d-ary capacity with
    # non-representable alpha) are snapped to exactly zero
    floor_tol = 1e-12 * (c1 + abs(c2))
    for m in range(2, n + 1):
        total = c1 * (m - 1) + c2
        u, s0, s1, s2, s3 = _next_double(s0, s1, s2, s3)
        v = _fen_search(fen, n, top, u * total)
        while v > 1 and (v >= m or weights[v] <= 0.0):
            v -= 1
        parents[m] = v
        outdeg[v] += 1
        nw = c1 + c2 - c2 * outdeg[v]
        if nw < floor_tol:
            nw = 0.0
        _fen_add(fen, n, v, nw - weights[v])
        weights[v] = nw
        weights[m] = w_leaf
        _fen_add(fen, n, m, w_leaf)
    return s0, s1, s2, s3


@njit(cache=True, nogil=True)
def sample_tree_kernel(parents, n, recursive, c1, c2, s0, s1, s2, s3):
    weights = np.zeros(n + 1, np.float64)
    fen = np.zeros(n + 1, np.float64)
    outdeg = np.zeros(n + 1, np.int64)
    return _sample_parents(
        parents, weights, fen, outdeg, n, recursive, c1, c2, s0, s1, s2, s3
    )


@njit(cache=True, nogil=True)
def shape_count_kernel(n, recursive, c1, c2, master_seed, trial_lo, trial_hi, counts):
    # counts is indexed by the mixed-radix code of the parent array,
    # sum_{m} (parent[m]-1) with radix m-1; size (n-1)!
    parents = np.zeros(n + 1, np.int64)
    weights = np.zeros(n + 1, np.float64)
    fen = np.zeros(n + 1, np.float64)
    outdeg = np.zeros(n + 1, np.int64)
    for t in range(trial_lo, trial_hi):
        s0, s1, s2, s3 = _seed4(master_seed, np.uint64(t))
        _sample_parents(
            parents, weights, fen, outdeg, n, recursive, c1, c2, s0, s1, s2, s3
        )
        code = 0
        for m in range(2, n + 1):
            code = code * (m - 1) + (parents[m] - 1)
        counts[code] += 1


@njit(cache=True, nogil=True)
def subtree_sizes_kernel(parents, n, sizes):
    for i in range(1, n + 1):
        sizes[i] = 1
    for k in range(n, 1, -1):
        sizes[parents[k]] += sizes[k]


@njit(cache=True, nogil=True)
def depths_kernel(parents, n, depth):
    depth[1] = 0
    for k in range(2, n + 1):
        depth[k] = depth[parents[k]] + 1


@njit(cache=True, nogil=True)
def total_distances_kernel(parents, n, sizes, depth, out):
    tot = 0
    for k in range(1, n + 1):
        tot += depth[k]
    out[1] = tot
    for k in range(2, n + 1):
        out[k] = out[parents[k]] + n - 2 * sizes[k]


@njit(cache=True, nogil=True)
def centroid_kernel(parents, sizes, n):
    # nodes with more than floor(n/2) strict descendants form a chain from
    # the root; its deepest member (minimal subtree size) is the centroid
    # nearest the root
    half = n // 2
    best = n + 1
    label = 1
    second = 0
    for k in range(1, n + 1):
        sk = sizes[k]
        if sk > half and sk < best:
            best = sk
            label = k
    if n % 2 == 0:
        for k in range(2, n + 1):
            if sizes[k] == half:
                second = k
                break
    depth = 0
    v = label
    while v != 1:
        v = parents[v]
        depth += 1
    return label, second, sizes[label], depth


@njit(cache=True, nogil=True)
def mc_chunk_kernel(
    n,
    recursive,
    c1,
    c2,
    master_seed,
    trial_lo,
    trial_hi,
    depth_counts,
    label_counts,
    size_counts,
):
    parents = np.zeros(n + 1, np.int64)
    weights = np.zeros(n + 1, np.float64)
    fen = np.zeros(n + 1, np.float64)
    outdeg = np.zeros(n + 1, np.int64)
    sizes = np.zeros(n + 1, np.int64)
    half = n // 2
    even = n % 2 == 0
    twins = 0
    for t in range(trial_lo, trial_hi):
        s0, s1, s2, s3 = _seed4(master_seed, np.uint64(t))
        s0, s1, s2, s3 = _sample_parents(
            parents, weights, fen, outdeg, n, recursive, c1, c2, s0, s1, s2, s3
        )
        for i in range(1, n + 1):
            sizes[i] = 1
        for k in range(n, 1, -1):
            sizes[parents[k]] += sizes[k]
        best = n + 1
        label = 1
        twin = False
        for k in range(1, n + 1):
            sk = sizes[k]
            if sk > half:
                if sk < best:
                    best = sk
                    label = k
            elif even and sk == half:
                twin = True
        d = 0
        v = label
        while v != 1:
            v = parents[v]
            d += 1
        depth_counts[d] += 1
        label_counts[label] += 1
        size_counts[sizes[label]] += 1
        if twin:
            twins += 1
    return twins
