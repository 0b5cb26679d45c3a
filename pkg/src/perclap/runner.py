"""Task orchestration: ensembles, persistence, reproducible manifests.

All outputs are byte-deterministic functions of the config: seeds are
derived positionally per realization, pooled spectra are merged in
realization order, and no timestamps enter any file.
"""

import hashlib
import json
from pathlib import Path

import numpy as np

from . import kernels
from .config import ExperimentConfig
from .exceptions import DomainError, PerclapError
from .isoperimetry import EXHAUSTIVE_CUTOFF, cheeger_constant, fk_ratio
from .laplacian import ALL_BCS, BoundaryCondition
from .lattice import LatticeBox, clusters, graph_to_json_dict, sample_graph
from .spectral import (
    cluster_eigenvalues,
    default_grid,
    empirical_ids,
    zero_tolerance,
)
from .tails import analytic_tail_fit, cluster_size_decay, fit_tail

_BC_BY_NAME = {bc.value: bc for bc in ALL_BCS}

EXPECTED_SLOPES = {
    ("N", "lower"): -0.5,
    ("Dt", "lower"): None,  # -d/2, filled at runtime
    ("D", "lower"): None,
    ("D", "upper"): -0.5,
    ("N", "upper"): None,
    ("Dt", "upper"): None,
}


def expected_slope(bc_name: str, edge: str, d: int) -> float:
    v = EXPECTED_SLOPES[(bc_name, edge)]
    return v if v is not None else -d / 2.0


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_text(path: Path, text: str) -> str:
    data = text.encode()
    path.write_bytes(data)
    return hashlib.sha256(data).hexdigest()


def _write_json(path: Path, obj) -> str:
    return _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _ids_csv(ids) -> str:
    lines = ["E,N"]
    for e, v in zip(ids.grid, ids.grid_values):
        lines.append(f"{_fmt(e)},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def _sample_ensemble(cfg: ExperimentConfig):
    box = LatticeBox(cfg.d, cfg.L)
    return [
        sample_graph(box, cfg.p, kernels.derive_seed(cfg.seed, i))
        for i in range(cfg.realizations)
    ]


def _run_ids(cfg, graphs, grid, outputs, out):
    cache = {}
    for name in cfg.boundary_conditions:
        bc = _BC_BY_NAME[name]
        ids = empirical_ids(graphs, bc, grid=grid, cache=cache, threads=cfg.threads)
        fname = f"ids_{name}.csv"
        outputs[fname] = _write_text(out / fname, _ids_csv(ids))
        summary = {
            "bc": name,
            "p": cfg.p,
            "d": cfg.d,
            "L": cfg.L,
            "realizations": cfg.realizations,
            "seed": cfg.seed,
            "kappa_hat": ids.n_clusters / ids.total_vertices,
            "total_vertices": ids.total_vertices,
        }
        sname = f"summary_{name}.json"
        outputs[sname] = _write_json(out / sname, summary)


def _run_verify(cfg, graphs, grid, outputs, out):
    tol = zero_tolerance(cfg.d)
    width = 4 * cfg.d
    cache = {}
    rows = []
    violations = {"reflection": 0, "chain": 0, "cheeger": 0, "crude": 0, "range": 0}
    checked = 0
    fk_min = None
    for g in graphs:
        for c in clusters(g):
            eigs = {bc: cluster_eigenvalues(c, bc, cache) for bc in ALL_BCS}
            e_n = eigs[BoundaryCondition.NEUMANN]
            e_dt = eigs[BoundaryCondition.PSEUDO_DIRICHLET]
            e_d = eigs[BoundaryCondition.DIRICHLET]
            checked += 1
            for e in eigs.values():
                if e[0] < -tol or e[-1] > width + tol:
                    violations["range"] += 1
            if c.n_vertices <= 500:
                dev = float(np.max(np.abs(e_d - (width - e_n[::-1]))))
                if dev > 1e-9:
                    violations["reflection"] += 1
            c_n = np.searchsorted(e_n, grid, side="right")
            c_dt = np.searchsorted(e_dt, grid, side="right")
            c_d = np.searchsorted(e_d, grid, side="right")
            if not (np.all(c_n >= c_dt) and np.all(c_dt >= c_d)):
                violations["chain"] += 1
            if c.n_vertices < 2:
                continue
            e1_n = float(e_n[1])
            e1_dt = float(e_dt[0])
            e1_d = float(e_d[0])
            crude = e1_n - 1.0 / (cfg.d * c.n_vertices**2)
            if crude < -1e-12:
                violations["crude"] += 1
            if c.n_vertices <= EXHAUSTIVE_CUTOFF:
                h = cheeger_constant(c)
                ch_margin = e1_n - float(h * h) / width
                if ch_margin < -1e-12:
                    violations["cheeger"] += 1
                h_str, ch_str = _fmt(float(h)), _fmt(ch_margin)
            else:
                h_str, ch_str = "", ""
            ratio = fk_ratio(c)
            fk_min = ratio if fk_min is None else min(fk_min, ratio)
            rows.append(
                f"{c.n_vertices},{_fmt(e1_n)},{_fmt(e1_dt)},{_fmt(e1_d)},"
                f"{h_str},{ch_str},{_fmt(crude)},{_fmt(ratio)}"
            )
    header = "size,e1_N,e1_Dt,e1_D,h_ch,cheeger_margin,crude_margin,fk_ratio"
    outputs["report.csv"] = _write_text(out / "report.csv", "\n".join([header] + rows) + "\n")
    summary = {
        "clusters_checked": checked,
        "violations": violations,
        "fk_estimate": fk_min,
    }
    outputs["verify_summary.json"] = _write_json(out / "verify_summary.json", summary)


def _run_tails(cfg, graphs, grid, outputs, out):
    if cfg.tail_mode == "analytic" and cfg.d != 1:
        raise DomainError(
            "analytic tail fits require d = 1; use tail_mode 'mc' for d >= 2"
        )
    window = tuple(cfg.tail_window)
    jobs = [("N", "lower"), ("Dt", "lower"), ("D", "upper"), ("Dt", "upper")]
    if cfg.tail_mode == "mc":
        jobs = [(name, edge) for name in cfg.boundary_conditions
                for edge in ("lower", "upper")]
        cache = {}
        ids_by_bc = {
            name: empirical_ids(graphs, _BC_BY_NAME[name], grid=grid,
                                cache=cache, threads=cfg.threads)
            for name in {n for n, _ in jobs}
        }
    for name, edge in jobs:
        if cfg.tail_mode == "analytic":
            fit = analytic_tail_fit(cfg.p, _BC_BY_NAME[name], window, edge=edge)
        else:
            fit = fit_tail(ids_by_bc[name], edge, window)
        report = {
            "bc": name,
            "edge": edge,
            "d": cfg.d,
            "p": cfg.p,
            "window": list(window),
            "slope": fit.slope,
            "expected_slope": expected_slope(name, edge, cfg.d),
            "residual": fit.residual,
            "points": fit.n_points,
        }
        fname = f"tail_{name}_{edge}.json"
        outputs[fname] = _write_json(out / fname, report)


def _run_decay(cfg, outputs, out):
    fit = cluster_size_decay(
        cfg.d, cfg.p, cfg.decay_samples,
        kernels.derive_seed(cfg.seed, 0xDECA), radius=cfg.decay_radius,
    )
    report = {
        "d": cfg.d,
        "p": cfg.p,
        "samples": cfg.decay_samples,
        "zeta_hat": fit.zeta_hat,
        "r2": fit.r_squared,
        "truncated": fit.truncated,
        "seed": cfg.seed,
    }
    outputs["decay.json"] = _write_json(out / "decay.json", report)


def run(cfg: ExperimentConfig, out_dir, task: str | None = None) -> dict:
    """Execute a task and write all outputs plus a hashed manifest."""
    task = task or cfg.task
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs: dict = {}
    grid = default_grid(cfg.d, cfg.grid_points, cfg.grid_refine)

    manifest = {"config": {**cfg.to_dict(), "task": task}, "outputs": outputs,
                "status": "ok"}
    try:
        needs_graphs = task in ("ids", "verify", "all") or (
            task == "tails" and cfg.tail_mode == "mc"
        )
        graphs = _sample_ensemble(cfg) if needs_graphs else []
        if cfg.emit_graph:
            for i, g in enumerate(graphs):
                fname = f"graph_r{i:04d}.json"
                outputs[fname] = _write_json(out / fname, graph_to_json_dict(g))
        if task in ("ids", "all"):
            _run_ids(cfg, graphs, grid, outputs, out)
        if task in ("verify", "all"):
            _run_verify(cfg, graphs, grid, outputs, out)
        if task in ("tails", "all"):
            if task == "all" and cfg.tail_mode == "analytic" and cfg.d != 1:
                pass  # analytic series is one-dimensional only
            else:
                _run_tails(cfg, graphs, grid, outputs, out)
        if task in ("decay", "all"):
            _run_decay(cfg, outputs, out)
    except PerclapError as exc:
        manifest["status"] = "failed"
        manifest["failure"] = str(exc)
        _write_json(out / "manifest.json", manifest)
        raise
    _write_json(out / "manifest.json", manifest)
    return manifest
