import numpy as np
import pytest

from perclap import LatticeBox, sample_graph
from perclap.kernels import derive_seed


def dfs_components(n_vertices, eu, ev):
    """Reference connected-components labeling by explicit DFS.

    Independent of the union-find / scipy code under test: adjacency
    lists plus an explicit stack.  Returns the root (minimal vertex) of
    each vertex's component.
    """
    adj = [[] for _ in range(n_vertices)]
    for u, v in zip(eu.tolist(), ev.tolist()):
        adj[u].append(v)
        adj[v].append(u)
    roots = np.full(n_vertices, -1, dtype=np.int64)
    for start in range(n_vertices):
        if roots[start] >= 0:
            continue
        stack = [start]
        roots[start] = start
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if roots[y] < 0:
                    roots[y] = start
                    stack.append(y)
    return roots


def reference_laplacian(cluster, bc_name):
    """Assemble a Laplacian from scratch (adjacency + degree loops)."""
    n = cluster.n_vertices
    d = cluster.d
    a = np.zeros((n, n), dtype=np.int64)
    for u, v in cluster.edges:
        a[u, v] -= 1
        a[v, u] -= 1
    deg = -a.sum(axis=1)
    if bc_name == "N":
        a[np.diag_indices(n)] = deg
    elif bc_name == "Dt":
        a[np.diag_indices(n)] = 2 * d
    elif bc_name == "D":
        a[np.diag_indices(n)] = 4 * d - deg
    else:
        raise ValueError(bc_name)
    return a


@pytest.fixture(scope="session")
def small_ensemble():
    """A handful of modest graphs reused by unit tests across modules."""
    graphs = []
    for i, (d, L, p) in enumerate(
        [(1, 200, 0.3), (2, 12, 0.3), (2, 16, 0.5), (3, 6, 0.2), (2, 10, 0.05)]
    ):
        graphs.append(sample_graph(LatticeBox(d, L), p, derive_seed(777, i)))
    return graphs
