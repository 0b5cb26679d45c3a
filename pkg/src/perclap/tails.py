"""Band-edge tail exponents and cluster-size decay.

The one-dimensional analytic series reaches energies far below anything
Monte Carlo can resolve: every cluster is a path, so the per-vertex
eigenvalue mass is a geometric sum over path lengths with closed-form
eigenvalue counts.  The path formulas are validated against dense
diagonalization in the test suite before being trusted here.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import DomainError, InsufficientDataError, PrecisionError
from .laplacian import BoundaryCondition
from .lattice import LatticeBox
from .spectral import EmpiricalIDS

TAIL_FLOOR_ANALYTIC = 1e-300
DECAY_MIN_COUNT = 50

# engineering caps well below the literature percolation thresholds;
# the source analysis never states numeric p_c values
SUBCRITICAL_P_CAP = {1: 1.0, 2: 0.4, 3: 0.2}


def series_truncation(p: float, e_min: float) -> int:
    """Smallest path length covering both the weight and energy tails."""
    n_weight = math.ceil(math.log(1e-16) / math.log(p))
    n_energy = math.ceil(4.0 * math.pi / math.sqrt(e_min))
    return max(n_weight, n_energy, 2)


def _path_counts(energy: float, n: np.ndarray, bc: BoundaryCondition) -> np.ndarray:
    """Nonzero path-Laplacian eigenvalues <= energy, in closed form.

    Neumann eigenvalues of a path of n vertices: 2(1-cos(pi k / n)),
    k=1..n-1; Pseudo-Dirichlet (d=1): 2-2cos(pi k/(n+1)), k=1..n.
    """
    theta = math.acos(1.0 - min(energy, 4.0) / 2.0)
    if bc is BoundaryCondition.NEUMANN:
        c = np.floor(n * (theta / math.pi) + 1e-9)
        return np.minimum(c, n - 1)
    if bc is BoundaryCondition.PSEUDO_DIRICHLET:
        c = np.floor((n + 1) * (theta / math.pi) + 1e-9)
        return np.minimum(c, n)
    raise DomainError(f"series supports N and Dt only, got {bc}")


def ids_1d_series(p: float, energy: float, bc: BoundaryCondition, n_max: int | None = None) -> float:
    """N_X(E) - N_X(0) for d=1, exact up to the geometric truncation."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"bond probability must be in (0,1), got {p}")
    if not 0.0 < energy <= 4.0:
        raise DomainError(f"energy must be in (0,4], got {energy}")
    if n_max is None:
        n_max = series_truncation(p, energy)
    tail = p ** n_max
    if tail >= 1e-16:
        raise PrecisionError(
            f"truncation n_max={n_max} leaves weight tail ~{tail:.3e} >= 1e-16"
        )
    if n_max < 4.0 * math.pi / math.sqrt(energy):
        raise PrecisionError(
            f"truncation n_max={n_max} misses paths contributing at E={energy}; "
            f"need >= {4.0 * math.pi / math.sqrt(energy):.0f}"
        )
    n = np.arange(1, n_max + 1, dtype=np.float64)
    weights = (1.0 - p) ** 2 * p ** (n - 1.0)
    return float(np.dot(weights, _path_counts(energy, n, bc)))


def ids_1d_series_many(p, energies, bc, n_max=None) -> np.ndarray:
    """Vectorized series; each energy gets its own truncation by default."""
    energies = np.asarray(energies, dtype=np.float64)
    return np.array([ids_1d_series(p, float(e), bc, n_max) for e in energies])


@dataclass(frozen=True)
class TailFit:
    """Double-log slope of the band-edge mass against the edge distance."""

    bc: BoundaryCondition
    edge: str  # "lower" | "upper"
    window: tuple
    slope: float
    residual: float
    n_points: int


def _fit_double_log(gaps, mass, bc, edge, window, floor):
    gaps = np.asarray(gaps, dtype=np.float64)
    mass = np.asarray(mass, dtype=np.float64)
    keep = (mass > floor) & (mass < 1.0) & (gaps > 0)
    if int(keep.sum()) < 8:
        raise InsufficientDataError(
            f"only {int(keep.sum())} usable points above floor {floor:g}"
        )
    x = np.log(gaps[keep])
    y = np.log(-np.log(mass[keep]))
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return TailFit(bc, edge, (float(window[0]), float(window[1])),
                   float(slope), resid, int(keep.sum()))


def analytic_tail_fit(p: float, bc: BoundaryCondition, window,
                      edge: str = "lower", n_points: int = 96) -> TailFit:
    """Tail exponent fit on the d=1 series over a log-spaced energy window.

    Upper-edge fits use the spectral reflection: the Dirichlet mass at
    distance g below 4d equals the Neumann mass at energy g (and the
    Pseudo-Dirichlet spectrum is reflection symmetric), so the fit runs
    on identical data.
    """
    lo, hi = window
    if not 0.0 < lo < hi <= 4.0:
        raise DomainError(f"window must satisfy 0 < lo < hi <= 4, got {window}")
    if edge == "lower":
        series_bc = bc
    elif edge == "upper":
        if bc is BoundaryCondition.DIRICHLET:
            series_bc = BoundaryCondition.NEUMANN
        elif bc is BoundaryCondition.PSEUDO_DIRICHLET:
            series_bc = BoundaryCondition.PSEUDO_DIRICHLET
        else:
            raise DomainError("analytic upper-edge fit supports Dt and D only")
    else:
        raise DomainError(f"edge must be 'lower' or 'upper', got {edge!r}")
    gaps = np.geomspace(lo, hi, n_points)
    mass = ids_1d_series_many(p, gaps, series_bc)
    return _fit_double_log(gaps, mass, bc, edge, window, TAIL_FLOOR_ANALYTIC)


def fit_tail(ids: EmpiricalIDS, edge: str, window) -> TailFit:
    """Tail exponent fit on an empirical IDS (grid points in the window)."""
    lo, hi = window
    width = float(ids.grid[-1])
    floor = 10.0 / ids.total_vertices
    zero_tol = 1e-9 * width
    if edge == "lower":
        sel = (ids.grid >= lo) & (ids.grid <= hi)
        gaps = ids.grid[sel]
        mass = ids.evaluate(gaps) - ids.evaluate(zero_tol)
    elif edge == "upper":
        sel = (width - ids.grid >= lo) & (width - ids.grid <= hi)
        energies = ids.grid[sel]
        gaps = width - energies
        top = np.searchsorted(ids.eigenvalues, width - zero_tol) / ids.total_vertices
        mass = top - ids.evaluate(energies)
    else:
        raise DomainError(f"edge must be 'lower' or 'upper', got {edge!r}")
    return _fit_double_log(gaps, mass, ids.bc, edge, window, floor)


@dataclass(frozen=True)
class DecayFit:
    """Exponential decay of the origin-cluster size distribution."""

    d: int
    p: float
    samples: int
    sizes_n: np.ndarray          # size thresholds used in the fit
    survival: np.ndarray         # P(|cluster of origin| >= n), all n
    zeta_hat: float
    r_squared: float
    truncated: int               # samples whose cluster touched the box wall


def _default_decay_radius(d: int, p: float) -> int:
    if d == 1:
        return max(32, int(60.0 / math.log(1.0 / p)) + 1)
    return 16 if d == 2 else 8


def cluster_size_decay(d: int, p: float, samples: int, seed: int,
                       radius: int | None = None) -> DecayFit:
    """Sample the cluster of the origin and fit its size-decay rate.

    The survival curve is fit as ln S(n) = a + b ln(n+1) - zeta n by
    weighted least squares (the ln(n+1) term absorbs the polynomial
    prefactor of the subcritical size law), over n with at least
    50 surviving samples.
    """
    cap = SUBCRITICAL_P_CAP.get(d)
    if cap is None:
        raise DomainError(f"decay sampling supports d in {{1,2,3}}, got {d}")
    if not 0.0 < p < cap:
        raise DomainError(f"need 0 < p < {cap} for d={d} (safely subcritical), got {p}")
    if samples < 1:
        raise DomainError("samples must be positive")
    if radius is None:
        radius = _default_decay_radius(d, p)

    side = 2 * radius + 1
    box = LatticeBox(d, side)
    eu, ev = box.candidate_edges()
    nv, ne = box.n_vertices, box.n_edges
    origin = box.linear_index(np.full(d, radius, dtype=np.int64))
    coords = box.coords(np.arange(nv, dtype=np.int64))
    boundary = np.flatnonzero(
        np.any((coords == 0) | (coords == side - 1), axis=1)
    )

    sizes = np.empty(samples, dtype=np.int64)
    truncated = 0
    for i in range(samples):
        mask = kernels.edge_open_mask(kernels.derive_seed(seed, i), ne, p)
        roots = kernels.component_roots(nv, eu[mask], ev[mask])
        r0 = roots[origin]
        sizes[i] = np.count_nonzero(roots == r0)
        if np.any(roots[boundary] == r0):
            truncated += 1
    if truncated:
        import logging

        logging.getLogger(__name__).warning(
            "%d/%d origin clusters touched the sampling box wall "
            "(radius %d too small); their sizes are lower bounds",
            truncated, samples, radius,
        )

    nmax = int(sizes.max())
    n_all = np.arange(1, nmax + 1)
    surv_counts = np.array([(sizes >= n).sum() for n in n_all])
    survival = surv_counts / samples

    keep = surv_counts >= DECAY_MIN_COUNT
    if int(keep.sum()) < 4:
        raise InsufficientDataError("too few size thresholds with enough samples")
    n = n_all[keep].astype(np.float64)
    s = survival[keep]
    y = np.log(s)
    design = np.column_stack((np.ones_like(n), np.log(n + 1.0), n))
    weights = samples * s / np.maximum(1.0 - s, 1e-12)
    sw = np.sqrt(weights)[:, None]
    coef, *_ = np.linalg.lstsq(design * sw, y * sw[:, 0], rcond=None)
    fitted = design @ coef
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    return DecayFit(
        d=d, p=p, samples=samples,
        sizes_n=n_all[keep], survival=survival,
        zeta_hat=float(-coef[2]), r_squared=r2, truncated=truncated,
    )
