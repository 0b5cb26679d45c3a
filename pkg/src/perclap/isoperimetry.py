"""Cheeger and Faber-Krahn bounds checked against computed spectra.

The Cheeger constant is exact: the subset search runs over vertex
bitmasks (the edge boundary depends only on the vertex set) and the
minimal ratio is kept as an integer pair, so margins carry no
search-side floating error.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .exceptions import DomainError, UnsupportedSizeError
from .laplacian import BoundaryCondition
from .lattice import Cluster, make_cubic_cluster, make_linear_cluster
from .spectral import summarize

EXHAUSTIVE_CUTOFF = 20


def cheeger_constant(cluster: Cluster) -> Fraction:
    """Minimal |boundary edges| / |W| over subsets W with |W| <= |V|/2."""
    n = cluster.n_vertices
    if n < 2:
        raise DomainError("Cheeger constant needs at least 2 vertices")
    if n > EXHAUSTIVE_CUTOFF:
        raise UnsupportedSizeError(
            f"exhaustive Cheeger search capped at {EXHAUSTIVE_CUTOFF} vertices, got {n}"
        )
    b, w = kernels.best_cheeger_cut(n, cluster.edges[:, 0], cluster.edges[:, 1])
    return Fraction(b, w)


def lowest_nonzero_neumann(cluster: Cluster) -> float:
    return summarize(cluster, BoundaryCondition.NEUMANN).lowest_nonzero


def check_cheeger(cluster: Cluster) -> float:
    """Margin of E1_N >= h_Ch^2 / (4d); nonnegative when the bound holds."""
    h = cheeger_constant(cluster)
    bound = float(h * h) / (4 * cluster.d)
    return lowest_nonzero_neumann(cluster) - bound


def check_crude_cheeger(cluster: Cluster) -> float:
    """Margin of E1_N >= 1/(d |V|^2); valid for clusters of any size."""
    n = cluster.n_vertices
    if n < 2:
        raise DomainError("crude Cheeger bound needs at least 2 vertices")
    return lowest_nonzero_neumann(cluster) - 1.0 / (cluster.d * n * n)


def fk_ratio(cluster: Cluster) -> float:
    """E1_Dt * |V|^(2/d), the scale-free Faber-Krahn ratio."""
    n = cluster.n_vertices
    if n < 2:
        raise DomainError("Faber-Krahn ratio needs at least 2 vertices")
    e1 = summarize(cluster, BoundaryCondition.PSEUDO_DIRICHLET).lowest_nonzero
    return e1 * n ** (2.0 / cluster.d)


def estimate_fk_constant(cluster_list) -> float:
    """Empirical lower bound for the Faber-Krahn constant of a population."""
    ratios = [fk_ratio(c) for c in cluster_list if c.n_vertices >= 2]
    if not ratios:
        raise DomainError("no clusters with at least 2 vertices supplied")
    return min(ratios)


def linear_bound_check(n: int, d: int) -> float:
    """Margin of E1_N(path of n) <= 12/n^2."""
    e1 = lowest_nonzero_neumann(make_linear_cluster(n, d))
    return 12.0 / (n * n) - e1


def cubic_bound_check(l: int, d: int) -> float:
    """Margin of E1_D(cube of side l) <= 27d/l^2."""
    e1 = summarize(make_cubic_cluster(l, d), BoundaryCondition.DIRICHLET).lowest_nonzero
    return 27.0 * d / (l * l) - e1


@dataclass(frozen=True)
class IsoperimetryReport:
    """Eigenvalue bounds of one cluster; h_ch is None above the cutoff."""

    n_vertices: int
    e1_neumann: float
    e1_pseudo_dirichlet: float
    e1_dirichlet: float
    h_cheeger: Fraction | None
    cheeger_margin: float | None
    crude_margin: float
    fk_ratio: float


def report_cluster(cluster: Cluster) -> IsoperimetryReport:
    if cluster.n_vertices < 2:
        raise DomainError("isoperimetry report needs at least 2 vertices")
    e1_n = lowest_nonzero_neumann(cluster)
    e1_dt = summarize(cluster, BoundaryCondition.PSEUDO_DIRICHLET).lowest_nonzero
    e1_d = summarize(cluster, BoundaryCondition.DIRICHLET).lowest_nonzero
    if cluster.n_vertices <= EXHAUSTIVE_CUTOFF:
        h = cheeger_constant(cluster)
        ch_margin = e1_n - float(h * h) / (4 * cluster.d)
    else:
        h = None
        ch_margin = None
    return IsoperimetryReport(
        n_vertices=cluster.n_vertices,
        e1_neumann=e1_n,
        e1_pseudo_dirichlet=e1_dt,
        e1_dirichlet=e1_d,
        h_cheeger=h,
        cheeger_margin=ch_margin,
        crude_margin=check_crude_cheeger(cluster),
        fk_ratio=fk_ratio(cluster),
    )
