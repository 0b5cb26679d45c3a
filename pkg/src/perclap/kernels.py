"""Hot numeric kernels: counter-based RNG, union-find, Cheeger cut search.

Every kernel exists in two variants, a numba-compiled one and a pure-numpy
one, selected at import time by :mod:`perclap.jitshim`.  The variants are
bit-identical: the RNG is a splitmix64 finalizer evaluated per counter
value, so edge decisions depend only on (seed, edge index) and never on
iteration order.
"""

import numpy as np

from .jitshim import NUMBA_ENABLED, njit

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
# 2^-53; uniforms live on the dyadic grid k * 2^-53, k < 2^53
_INV53 = 1.1102230246251565e-16


def splitmix64(x: int) -> int:
    """Finalize a 64-bit state to a well-mixed 64-bit value."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, index: int) -> int:
    """Positional sub-seed: realization ``index`` of stream ``master``.

    Adding realizations never perturbs earlier ones, and distinct indices
    give statistically independent streams.
    """
    return splitmix64((master & _MASK64) ^ splitmix64(index & _MASK64))


# ---------------------------------------------------------------------------
# per-edge uniforms


def uniforms_numpy(seed: int, n: int) -> np.ndarray:
    i = np.arange(1, n + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK64) + i * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)) * _INV53


if NUMBA_ENABLED:

    @njit(cache=True)
    def _uniforms_jit(seed, n):
        out = np.empty(n, dtype=np.float64)
        for i in range(n):
            z = seed + np.uint64(i + 1) * np.uint64(_GOLDEN)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
            z = z ^ (z >> np.uint64(31))
            out[i] = (z >> np.uint64(11)) * _INV53
        return out

    def uniforms_numba(seed: int, n: int) -> np.ndarray:
        return _uniforms_jit(np.uint64(seed & _MASK64), n)

    edge_uniforms = uniforms_numba
else:
    uniforms_numba = None
    edge_uniforms = uniforms_numpy


def edge_open_mask(seed: int, n: int, p: float) -> np.ndarray:
    """Openness of the ``n`` candidate edges of one realization."""
    return edge_uniforms(seed, n) < p


# ---------------------------------------------------------------------------
# union-find cluster labeling


def component_roots_numpy(n_vertices: int, eu: np.ndarray, ev: np.ndarray) -> np.ndarray:
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    if eu.size == 0:
        return np.arange(n_vertices, dtype=np.int64)
    adj = coo_matrix(
        (np.ones(eu.size, dtype=np.int8), (eu, ev)), shape=(n_vertices, n_vertices)
    )
    _, labels = connected_components(adj, directed=False)
    minvert = np.full(labels.max() + 1, n_vertices, dtype=np.int64)
    np.minimum.at(minvert, labels, np.arange(n_vertices, dtype=np.int64))
    return minvert[labels]


if NUMBA_ENABLED:

    @njit(cache=True)
    def _roots_jit(n_vertices, eu, ev):
        parent = np.arange(n_vertices, dtype=np.int64)
        for k in range(eu.shape[0]):
            u = eu[k]
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            v = ev[k]
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            # union by smaller index: final root is the minimal vertex
            if u < v:
                parent[v] = u
            elif v < u:
                parent[u] = v
        for i in range(n_vertices):
            r = i
            while parent[r] != r:
                r = parent[r]
            parent[i] = r
        return parent

    def component_roots_numba(n_vertices: int, eu: np.ndarray, ev: np.ndarray) -> np.ndarray:
        return _roots_jit(n_vertices, np.ascontiguousarray(eu, dtype=np.int64),
                          np.ascontiguousarray(ev, dtype=np.int64))

    component_roots = component_roots_numba
else:
    component_roots_numba = None
    component_roots = component_roots_numpy


# ---------------------------------------------------------------------------
# exhaustive Cheeger cut


def best_cheeger_cut_numpy(n_vertices: int, eu: np.ndarray, ev: np.ndarray):
    total = 1 << n_vertices
    best_b, best_w = -1, 1
    eu = eu.astype(np.uint32)
    ev = ev.astype(np.uint32)
    chunk = 1 << 16
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        w = np.bitwise_count(masks).astype(np.int64)
        keep = 2 * w <= n_vertices
        masks, w = masks[keep], w[keep]
        if masks.size == 0:
            continue
        b = np.zeros(masks.size, dtype=np.int64)
        for u, v in zip(eu, ev):
            b += ((masks >> u) ^ (masks >> v)) & 1
        # distinct ratios with w <= n are separated by >> float eps,
        # so the float argmin picks an exactly optimal cut
        j = int(np.argmin(b / w))
        if best_b < 0 or b[j] * best_w < best_b * w[j]:
            best_b, best_w = int(b[j]), int(w[j])
    return best_b, best_w


if NUMBA_ENABLED:

    @njit(cache=True)
    def _cut_jit(n_vertices, eu, ev):
        m = eu.shape[0]
        best_b = -1
        best_w = 1
        for mask in range(1, 1 << n_vertices):
            t = mask
            w = 0
            while t:
                t &= t - 1
                w += 1
            if 2 * w > n_vertices:
                continue
            b = 0
            for k in range(m):
                if ((mask >> eu[k]) ^ (mask >> ev[k])) & 1:
                    b += 1
            if best_b < 0 or b * best_w < best_b * w:
                best_b = b
                best_w = w
        return best_b, best_w

    def best_cheeger_cut_numba(n_vertices: int, eu: np.ndarray, ev: np.ndarray):
        b, w = _cut_jit(n_vertices, np.ascontiguousarray(eu, dtype=np.int64),
                        np.ascontiguousarray(ev, dtype=np.int64))
        return int(b), int(w)

    best_cheeger_cut = best_cheeger_cut_numba
else:
    best_cheeger_cut_numba = None
    best_cheeger_cut = best_cheeger_cut_numpy
