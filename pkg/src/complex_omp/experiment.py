"""Monte Carlo recovery experiments on GTD scenes.

Each trial draws k scatterer locations and random amplitude phases, adds
complex white noise at the configured SNR, runs OMP and records whether the
support was recovered exactly and how far the least-squares amplitudes are
from the truth. Trial ``t`` at sparsity ``k`` owns a generator seeded with
``base_seed XOR splitmix64((k << 32) | t)`` so any single trial can be
replayed in isolation.
"""

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .erc import b1_radius, certify_cawgn, certify_noiseless
from .errors import ParseError
from .gtd import (
    build_gtd_dictionary,
    cawgn,
    make_rng,
    parse_snr,
    scene_from_config,
    snr_sigma,
    synthesize_measurement,
)
from .omp import SparseSignal, StoppingRule, omp_solve

MASK64 = (1 << 64) - 1

TRIALS_HEADER = (
    "trial_id", "k", "planted_support", "recovered_support", "support_exact",
    "coeff_error_l2", "residual_final", "certified_noiseless", "certified_cawgn",
)
SUMMARY_HEADER = ("k", "num_trials", "success_rate", "mean_error", "median_error")
CDE_HEADER = ("k", "error_value", "cum_fraction")
QUANTILES = (0.5, 0.9, 0.99)


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def trial_seed(base_seed, k, t):
    return (int(base_seed) & MASK64) ^ splitmix64(((int(k) & 0xFFFFFFFF) << 32) | (int(t) & 0xFFFFFFFF))


@dataclass
class ExperimentConfig:
    scene: object
    k_values: list
    num_trials: int
    snr_db: float = math.inf
    base_seed: int = 0
    stopping: dict = field(default_factory=lambda: {"kind": "iterations"})
    sampling: str = "fixed"
    output_path: str = None

    def __post_init__(self):
        n = self.scene.range_grid.size
        if not self.k_values:
            raise ValueError("k_values is empty")
        for k in self.k_values:
            if not 1 <= k <= n:
                raise ValueError(f"k = {k} outside [1, {n}]")
        if self.num_trials < 1:
            raise ValueError("num_trials must be >= 1")
        if self.sampling not in ("fixed", "grid"):
            raise ValueError(f"sampling must be 'fixed' or 'grid', got {self.sampling!r}")
        if self.sampling == "fixed":
            avail = len(self.scene.scatterers)
            if max(self.k_values) > avail:
                raise ValueError(f"k up to {max(self.k_values)} but only {avail} scatterer locations")
        if self.stopping.get("kind", "iterations") not in ("iterations", "residual", "noise_bound"):
            raise ValueError(f"unknown stopping kind {self.stopping.get('kind')!r}")

    @classmethod
    def from_dict(cls, cfg):
        if not isinstance(cfg, dict):
            raise ParseError("experiment config must be a JSON object")
        if "scene" not in cfg:
            raise ParseError("missing key", field="scene")
        scene = scene_from_config(cfg["scene"])
        snr = parse_snr(cfg["snr_db"]) if "snr_db" in cfg else scene.snr_db
        k_values = cfg.get("k_values", [1, 2, 3, 4, 5])
        if not isinstance(k_values, list) or not all(isinstance(k, int) for k in k_values):
            raise ParseError("expected a list of integers", field="k_values")
        num_trials = cfg.get("num_trials", 10000)
        if not isinstance(num_trials, int) or isinstance(num_trials, bool):
            raise ParseError("expected an integer", field="num_trials")
        base_seed = cfg.get("base_seed", 0)
        if not isinstance(base_seed, int) or isinstance(base_seed, bool):
            raise ParseError("expected an integer", field="base_seed")
        stopping = cfg.get("stopping", {"kind": "iterations"})
        if not isinstance(stopping, dict):
            raise ParseError("expected an object", field="stopping")
        try:
            return cls(
                scene=scene,
                k_values=k_values,
                num_trials=num_trials,
                snr_db=snr,
                base_seed=base_seed,
                stopping=stopping,
                sampling=cfg.get("sampling", "fixed"),
                output_path=cfg.get("output_path"),
            )
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            try:
                cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, line=exc.lineno) from exc
        return cls.from_dict(cfg)

    def rule_for(self, k, sigma, m):
        kind = self.stopping.get("kind", "iterations")
        cap = self.stopping.get("max_iterations")
        if kind == "iterations":
            return StoppingRule.iterations(self.stopping.get("value", k), cap)
        if kind == "residual":
            return StoppingRule.residual(self.stopping.get("value", 1e-10), cap)
        # noise_bound: explicit value, or the B1 radius of the trial's noise level
        value = self.stopping.get("value")
        if value is None:
            value = b1_radius(sigma, m) if sigma > 0 else 1e-10
        return StoppingRule.noise_bound(value, cap)


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    k: int
    planted_support: tuple
    recovered_support: tuple
    support_exact: bool
    coeff_error_l2: float
    residual_final: float
    certified_noiseless: bool
    certified_cawgn: bool
    noise_norm: float = 0.0
    cawgn_radius: float = 0.0


@dataclass
class MonteCarloResult:
    records: list
    summary: list

    def summary_for(self, k):
        for row in self.summary:
            if row["k"] == k:
                return row
        raise KeyError(k)


def _draw_support(rng, cfg, k):
    scene = cfg.scene
    if cfg.sampling == "fixed":
        pool = [scene.grid_index(r) for r, _ in scene.scatterers]
    else:
        pool = list(range(scene.range_grid.size))
    order = np.argsort(rng.random(len(pool)), kind="stable")
    return sorted(pool[i] for i in order[:k])


def run_trial(cfg, D, k, t, noiseless_cert):
    scene = cfg.scene
    m = scene.num_freqs
    rng = make_rng(trial_seed(cfg.base_seed, k, t))
    support = _draw_support(rng, cfg, k)
    phases = rng.random(k)
    if scene.random_phase or cfg.sampling == "grid":
        amps = np.exp(2j * np.pi * phases)
    else:
        by_index = {scene.grid_index(r): a for r, a in scene.scatterers}
        amps = np.array([by_index[i] for i in support], dtype=np.complex128)
    grid = scene.range_grid
    truth_scene = scene.with_scatterers([(grid[i], a) for i, a in zip(support, amps)])
    y_clean = synthesize_measurement(truth_scene)
    sigma = snr_sigma(y_clean, cfg.snr_db)
    noise = cawgn(m, sigma, rng) if sigma > 0 else np.zeros(m, dtype=np.complex128)

    res = omp_solve(D, y_clean + noise, cfg.rule_for(k, sigma, m))
    # solver coefficients refer to unit-norm atoms; raw atoms have norm sqrt(m)
    x_hat = res.coefficients.to_dense() / math.sqrt(m)
    x_true = truth_scene.planted()
    recovered = tuple(sorted(res.support))

    cert_cawgn = False
    radius = 0.0
    if sigma > 0:
        planted = SparseSignal(D.n, support, amps * math.sqrt(m))
        rep = certify_cawgn(D, planted, sigma, "b1")
        cert_cawgn = rep.certified
        radius = rep.stopping_radius
    return TrialRecord(
        trial_id=t,
        k=k,
        planted_support=tuple(support),
        recovered_support=recovered,
        support_exact=set(recovered) == set(support),
        coeff_error_l2=float(np.linalg.norm(x_hat - x_true)),
        residual_final=res.residual_norms[-1],
        certified_noiseless=bool(sigma == 0 and noiseless_cert),
        certified_cawgn=bool(cert_cawgn),
        noise_norm=float(np.linalg.norm(noise)),
        cawgn_radius=float(radius),
    )


def _run_k(cfg, k):
    D = build_gtd_dictionary(cfg.scene)
    noiseless_cert = certify_noiseless(D, k).certified
    return [run_trial(cfg, D, k, t, noiseless_cert) for t in range(cfg.num_trials)]


def summarize(records):
    out = []
    for k in sorted({r.k for r in records}):
        group = [r for r in records if r.k == k]
        errs = np.array([r.coeff_error_l2 for r in group])
        out.append(
            {
                "k": k,
                "num_trials": len(group),
                "success_rate": float(np.mean([r.support_exact for r in group])),
                "mean_error": float(errs.mean()),
                "median_error": float(np.median(errs)),
                "mean_residual": float(np.mean([r.residual_final for r in group])),
            }
        )
    return out


def run_monte_carlo(cfg, workers=1):
    """Run every (k, trial) of ``cfg``; records come back sorted by (k, trial_id)."""
    ks = list(cfg.k_values)
    if workers > 1 and len(ks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_k, [cfg] * len(ks), ks))
    else:
        chunks = [_run_k(cfg, k) for k in ks]
    records = sorted((r for chunk in chunks for r in chunk), key=lambda r: (r.k, r.trial_id))
    return MonteCarloResult(records, summarize(records))


def cde_export(records):
    """Empirical CDF of the coefficient error per k.

    Returns ``(rows, quantiles)``: rows of ``(k, error_value, cum_fraction)``
    with cum_fraction running from 1/N to 1, and ``{k: {q: value}}`` for the
    0.5, 0.9 and 0.99 quantiles.
    """
    if not records:
        raise ValueError("no trial records")
    rows, quantiles = [], {}
    for k in sorted({r.k for r in records}):
        errs = np.sort([r.coeff_error_l2 for r in records if r.k == k])
        N = errs.size
        rows.extend((k, float(e), (i + 1) / N) for i, e in enumerate(errs))
        quantiles[k] = {q: float(np.quantile(errs, q)) for q in QUANTILES}
    return rows, quantiles


def certificate_counterexamples(records):
    """Certified trials whose support was nonetheless missed.

    A CAWGN certificate only covers draws whose noise fell inside the
    stopping radius, so other draws are not counted.
    """
    bad = []
    for r in records:
        covered = r.certified_noiseless or (r.certified_cawgn and r.noise_norm <= r.cawgn_radius)
        if covered and not r.support_exact:
            bad.append(r)
    return bad


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return " ".join(str(i) for i in v)
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_outputs(result, out_dir):
    """Write trials.csv, summary.csv, cde.csv and cde_quantiles.csv into ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    _write_csv(
        os.path.join(out_dir, "trials.csv"),
        TRIALS_HEADER,
        ([getattr(r, name) for name in TRIALS_HEADER] for r in result.records),
    )
    _write_csv(
        os.path.join(out_dir, "summary.csv"),
        SUMMARY_HEADER,
        ([s[name] for name in SUMMARY_HEADER] for s in result.summary),
    )
    rows, quantiles = cde_export(result.records)
    _write_csv(os.path.join(out_dir, "cde.csv"), CDE_HEADER, rows)
    _write_csv(
        os.path.join(out_dir, "cde_quantiles.csv"),
        ("k",) + tuple(f"q{q}" for q in QUANTILES),
        ([k] + [quantiles[k][q] for q in QUANTILES] for k in sorted(quantiles)),
    )
