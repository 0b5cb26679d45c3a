"""Per-cluster graph Laplacians for the three boundary conditions.

Matrices are assembled with exact integer entries; floating point only
enters in the eigensolvers.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .lattice import Cluster


class BoundaryCondition(enum.Enum):
    NEUMANN = "N"
    PSEUDO_DIRICHLET = "Dt"
    DIRICHLET = "D"

    def isolated_value(self, d: int) -> int:
        """Action on an isolated vertex: 0, 2d or 4d."""
        if self is BoundaryCondition.NEUMANN:
            return 0
        if self is BoundaryCondition.PSEUDO_DIRICHLET:
            return 2 * d
        return 4 * d

    def diagonal(self, degrees: np.ndarray, d: int) -> np.ndarray:
        if self is BoundaryCondition.NEUMANN:
            return degrees
        if self is BoundaryCondition.PSEUDO_DIRICHLET:
            return np.full_like(degrees, 2 * d)
        return 4 * d - degrees


ALL_BCS = (
    BoundaryCondition.NEUMANN,
    BoundaryCondition.PSEUDO_DIRICHLET,
    BoundaryCondition.DIRICHLET,
)


@dataclass(frozen=True)
class SymmetricOperator:
    """Dense symmetric integer matrix of one Laplacian on one cluster."""

    cluster: Cluster
    bc: BoundaryCondition
    matrix: np.ndarray  # int64, |V| x |V|

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def spectral_width(self) -> int:
        return 4 * self.cluster.d


def assemble(cluster: Cluster, bc: BoundaryCondition) -> SymmetricOperator:
    """Degree/adjacency combination for the requested boundary condition."""
    n = cluster.n_vertices
    mat = np.zeros((n, n), dtype=np.int64)
    diag = bc.diagonal(cluster.degrees, cluster.d)
    mat[np.arange(n), np.arange(n)] = diag
    if cluster.n_edges:
        u, v = cluster.edges[:, 0], cluster.edges[:, 1]
        mat[u, v] = -1
        mat[v, u] = -1
    return SymmetricOperator(cluster, bc, mat)


def _sorted_eigs(cluster, bc):
    return np.linalg.eigvalsh(assemble(cluster, bc).matrix.astype(np.float64))


def reflection_check(cluster: Cluster, tol: float):
    """Dirichlet spectrum vs the reflected Neumann spectrum.

    Returns (ok, max absolute deviation) for the entrywise comparison of
    sorted spec(Dirichlet) with 4d - reversed sorted spec(Neumann).
    """
    e_n = _sorted_eigs(cluster, BoundaryCondition.NEUMANN)
    e_d = _sorted_eigs(cluster, BoundaryCondition.DIRICHLET)
    dev = float(np.max(np.abs(e_d - (4 * cluster.d - e_n[::-1]))))
    return dev <= tol, dev


def chain_check(cluster: Cluster, grid, tol: float) -> bool:
    """Eigenvalue-count ordering N >= Dt >= D on an energy grid.

    Also requires every eigenvalue to lie in [-tol, 4d + tol].
    """
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("energy grid must be nonempty")
    width = 4 * cluster.d
    counts = []
    for bc in ALL_BCS:
        eigs = _sorted_eigs(cluster, bc)
        if eigs[0] < -tol or eigs[-1] > width + tol:
            return False
        counts.append(np.searchsorted(eigs, grid, side="right"))
    c_n, c_dt, c_d = counts
    return bool(np.all(c_n >= c_dt) and np.all(c_dt >= c_d))
