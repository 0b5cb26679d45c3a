"""Cheeger / Faber-Krahn constants and eigenvalue bound checks."""

from fractions import Fraction

import numpy as np
import pytest

from perclap import (
    DomainError,
    LatticeBox,
    UnsupportedSizeError,
    cheeger_constant,
    check_cheeger,
    check_crude_cheeger,
    clusters,
    cubic_bound_check,
    estimate_fk_constant,
    fk_ratio,
    linear_bound_check,
    make_cubic_cluster,
    make_linear_cluster,
    sample_graph,
)
from perclap.isoperimetry import EXHAUSTIVE_CUTOFF, report_cluster
from perclap.kernels import derive_seed
from perclap.lattice import Cluster


def test_path_cheeger_constant_closed_form():
    """h(path of n) = 1/floor(n/2): cut at the midpoint."""
    for n in range(2, 17):
        assert cheeger_constant(make_linear_cluster(n, 1)) == Fraction(1, n // 2)


def test_cycle_cheeger_constant():
    assert cheeger_constant(make_cubic_cluster(2, 2)) == 1  # 4-cycle
    # 8-vertex cube: best cut is a face, 4 boundary edges over 4 vertices
    assert cheeger_constant(make_cubic_cluster(2, 3)) == 1


def test_cheeger_size_limits():
    isolated = Cluster(1, np.array([0]), np.zeros((1, 1), dtype=np.int64),
                       np.empty((0, 2), dtype=np.int64), np.zeros(1, dtype=np.int64))
    with pytest.raises(DomainError):
        cheeger_constant(isolated)
    with pytest.raises(UnsupportedSizeError):
        cheeger_constant(make_linear_cluster(EXHAUSTIVE_CUTOFF + 1, 1))


def test_cheeger_bound_margins_nonnegative():
    g = sample_graph(LatticeBox(2, 10), 0.4, derive_seed(81, 0))
    seen = 0
    for c in clusters(g):
        if 2 <= c.n_vertices <= EXHAUSTIVE_CUTOFF:
            assert check_cheeger(c) >= -1e-12
            seen += 1
        if c.n_vertices >= 2:
            assert check_crude_cheeger(c) >= -1e-12
    assert seen >= 3


def test_fk_ratio_positive_and_scaling():
    rs = [fk_ratio(make_cubic_cluster(l, 2)) for l in (8, 16, 24)]
    assert all(r > 0 for r in rs)
    # ratio stabilizes once l is moderate: |V|^(2/d) scaling is correct
    assert abs(rs[2] - rs[1]) / rs[1] < 0.10


def test_estimate_fk_constant():
    g = sample_graph(LatticeBox(2, 12), 0.35, derive_seed(82, 0))
    cs = [c for c in clusters(g) if c.n_vertices >= 2]
    est = estimate_fk_constant(cs)
    assert est > 0
    assert all(fk_ratio(c) >= est for c in cs)
    with pytest.raises(DomainError):
        estimate_fk_constant([])


def test_linear_bound_margins():
    for n in (2, 3, 10, 50, 300):
        assert linear_bound_check(n, 1) >= 0.0


def test_cubic_bound_margins():
    for l in (2, 4, 8, 16):
        assert cubic_bound_check(l, 2) >= 0.0
    for l in (2, 4, 8):
        assert cubic_bound_check(l, 3) >= 0.0


def test_report_cluster_fields():
    c = make_linear_cluster(6, 2)
    rep = report_cluster(c)
    assert rep.n_vertices == 6
    assert rep.h_cheeger == Fraction(1, 3)
    assert rep.cheeger_margin >= 0
    assert rep.crude_margin >= 0
    assert rep.fk_ratio > 0
    big = make_linear_cluster(EXHAUSTIVE_CUTOFF + 5, 2)
    rep_big = report_cluster(big)
    assert rep_big.h_cheeger is None and rep_big.cheeger_margin is None
