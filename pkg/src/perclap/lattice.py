"""Finite-volume bond percolation on the hypercubic lattice.

Vertices of the box {0,...,L-1}^d are linearized row-major,
``index = sum_nu x_nu * L**nu`` (first coordinate fastest), so golden
files are portable.  Candidate edges are enumerated axis-major and,
within an axis, by the linear index of the lower endpoint; the RNG is
keyed by (seed, edge index), making realizations independent of
iteration order.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .exceptions import ConfigurationError, DomainError


@dataclass(frozen=True)
class LatticeBox:
    """Axis-aligned box {0,...,L-1}^d with free (restricted) boundary."""

    d: int
    L: int

    def __post_init__(self):
        if self.d < 1 or self.L < 1:
            raise ConfigurationError(f"invalid box: d={self.d}, L={self.L}")

    @property
    def n_vertices(self) -> int:
        return self.L ** self.d

    @property
    def n_edges(self) -> int:
        return self.d * self.L ** (self.d - 1) * (self.L - 1)

    def linear_index(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        powers = self.L ** np.arange(self.d, dtype=np.int64)
        return coords @ powers

    def coords(self, linear) -> np.ndarray:
        linear = np.asarray(linear, dtype=np.int64)
        powers = self.L ** np.arange(self.d, dtype=np.int64)
        return (linear[..., None] // powers) % self.L

    def candidate_edges(self):
        """(eu, ev) linear-index endpoints of all nearest-neighbour pairs."""
        return _candidate_edges(self.d, self.L)


@lru_cache(maxsize=32)
def _candidate_edges(d, L):
    idx = np.arange(L ** d, dtype=np.int64)
    eu_parts, ev_parts = [], []
    for nu in range(d):
        step = L ** nu
        lower = idx[(idx // step) % L < L - 1]
        eu_parts.append(lower)
        ev_parts.append(lower + step)
    eu = np.concatenate(eu_parts)
    ev = np.concatenate(ev_parts)
    eu.setflags(write=False)
    ev.setflags(write=False)
    return eu, ev


@dataclass(frozen=True)
class PercolationGraph:
    """One realization restricted to a box: the open-edge set."""

    box: LatticeBox
    p: float
    seed: int
    open_eu: np.ndarray
    open_ev: np.ndarray

    @property
    def n_open_edges(self) -> int:
        return self.open_eu.size


def sample_graph(box: LatticeBox, p: float, seed: int) -> PercolationGraph:
    """Sample open edges, each present independently with probability p.

    p = 0 and p = 1 are admitted as deterministic test fixtures.
    """
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"bond probability out of range: {p}")
    eu, ev = box.candidate_edges()
    mask = kernels.edge_open_mask(seed, box.n_edges, p)
    return PercolationGraph(box, p, seed, eu[mask], ev[mask])


def graph_to_json_dict(graph: PercolationGraph) -> dict:
    """Debug dump with linearized vertex indices."""
    return {
        "d": graph.box.d,
        "L": graph.box.L,
        "p": graph.p,
        "seed": graph.seed,
        "open_edges": [[int(u), int(v)] for u, v in zip(graph.open_eu, graph.open_ev)],
    }


class Cluster:
    """A maximally connected component: vertex list, edge list, degrees.

    ``vertices`` are global linear indices (ascending); ``coords`` the
    matching lattice points; ``edges`` index into ``vertices``.
    """

    __slots__ = ("d", "vertices", "coords", "edges", "degrees", "_key")

    def __init__(self, d, vertices, coords, edges, degrees):
        self.d = d
        self.vertices = vertices
        self.coords = coords
        self.edges = edges
        self.degrees = degrees
        self._key = None

    @property
    def n_vertices(self) -> int:
        return self.vertices.size

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    def parity(self) -> np.ndarray:
        """(-1)^(sum of coordinates) per vertex, the bipartite sign."""
        return 1 - 2 * (np.abs(self.coords).sum(axis=1) % 2).astype(np.int64)

    def canonical_key(self):
        """Translation-invariant structure key, used to cache spectra.

        Vertex order (ascending linear index) is lexicographic in the
        reversed coordinate tuple, which translation preserves, so two
        translates of the same shape produce identical keys.
        """
        if self._key is None:
            shifted = self.coords - self.coords.min(axis=0)
            self._key = (self.d, shifted.tobytes(), self.edges.tobytes())
        return self._key


def clusters(graph: PercolationGraph) -> list:
    """Decompose a realization into clusters, ordered by smallest vertex."""
    box = graph.box
    nv = box.n_vertices
    eu, ev = graph.open_eu, graph.open_ev
    roots = kernels.component_roots(nv, eu, ev)

    order = np.argsort(roots, kind="stable")
    sorted_roots = roots[order]
    cuts = np.flatnonzero(np.diff(sorted_roots)) + 1
    vertex_groups = np.split(order, cuts)

    degrees_global = (
        np.bincount(eu, minlength=nv) + np.bincount(ev, minlength=nv)
    ).astype(np.int64)
    coords_all = box.coords(np.arange(nv, dtype=np.int64))

    edge_groups = {}
    if eu.size:
        eroots = roots[eu]
        eorder = np.argsort(eroots, kind="stable")
        seroots = eroots[eorder]
        ecuts = np.flatnonzero(np.diff(seroots)) + 1
        starts = np.concatenate(([0], ecuts))
        for s, grp in zip(starts, np.split(eorder, ecuts)):
            edge_groups[int(seroots[s])] = grp

    out = []
    empty = np.empty((0, 2), dtype=np.int64)
    for verts in vertex_groups:
        root = int(verts[0])
        eg = edge_groups.get(root)
        if eg is None:
            edges = empty
        else:
            gu = np.searchsorted(verts, eu[eg])
            gv = np.searchsorted(verts, ev[eg])
            edges = np.column_stack((gu, gv))
        out.append(
            Cluster(box.d, verts, coords_all[verts], edges, degrees_global[verts])
        )
    return out


def _cluster_from_coords(d, coords, edge_pairs):
    """Build a Cluster from explicit coordinates and local edge pairs."""
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, d)
    n = coords.shape[0]
    edges = np.asarray(edge_pairs, dtype=np.int64).reshape(-1, 2)
    degrees = np.bincount(edges.ravel(), minlength=n).astype(np.int64)
    # linearize within the bounding box for portable global ids
    side = int(coords.max(initial=0)) + 1 if n else 1
    powers = side ** np.arange(d, dtype=np.int64)
    vertices = coords @ powers
    return Cluster(d, vertices, coords, edges, degrees)


def make_linear_cluster(n: int, d: int) -> Cluster:
    """Path of n vertices along the first coordinate axis."""
    if n < 2:
        raise DomainError(f"linear cluster needs n >= 2, got {n}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    coords = np.zeros((n, d), dtype=np.int64)
    coords[:, 0] = np.arange(n)
    edges = np.column_stack((np.arange(n - 1), np.arange(1, n)))
    return _cluster_from_coords(d, coords, edges)


def make_cubic_cluster(l: int, d: int) -> Cluster:
    """Fully connected restriction of the lattice to an l^d box."""
    if l < 2:
        raise DomainError(f"cubic cluster needs l >= 2, got {l}")
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    box = LatticeBox(d, l)
    eu, ev = box.candidate_edges()
    verts = np.arange(box.n_vertices, dtype=np.int64)
    coords = box.coords(verts)
    edges = np.column_stack((eu, ev))
    degrees = np.bincount(edges.ravel(), minlength=verts.size).astype(np.int64)
    return Cluster(d, verts, coords, edges, degrees)
