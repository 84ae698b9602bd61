"""Batch experiment runners emitting deterministic CSV.

Each experiment is a pure function of (config, seed): trials draw from
per-trial substreams, run in a worker pool, and are written in grid
order, so re-runs produce byte-identical CSVs.  Wall-clock timings go
to a sidecar file (<out>.timing.csv) to keep the main CSV reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ._rng import substream
from .analysis import l1_isometry_check, rank2_l1_mc, rank2_l1_mean_complex, rank2_l1_mean_real
from .certificate import build_certificate, verify_certificate
from .hermitian import COMPLEX, REAL
from .measurement import NOISE_MODELS, add_noise, intensities, sample_ensemble
from .recovery import recover, rel_mse
from .solver import SolverOptions, solve_constrained

SCHEMA_VERSION = "phaselift-csv-1"

EXPERIMENTS = (
    "snr-sweep",
    "oversampling-sweep",
    "phase-transition",
    "certificate-study",
    "rip1-study",
    "f-curves",
)

#: Success threshold for phase-transition runs (relative MSE).
PHASE_TRANSITION_SUCCESS = 1e-5


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    n: int = 32
    m: list[int] | None = None
    m_over_n: list[int] | None = None
    field: str = COMPLEX
    noise: str = "gaussian"
    snr_db: list[float] | None = None
    trials: int = 10
    seed: int = 0
    out: str = "results.csv"
    mc_samples: int = 100_000
    beta: float = 3.0
    max_iters: int = 5000

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.n < 1 or self.trials < 1 or self.mc_samples < 1000 or self.max_iters < 1:
            raise ConfigError("n, trials, mc_samples and max_iters must be positive")
        if self.field not in (REAL, COMPLEX):
            raise ConfigError(f"unknown field {self.field!r}")
        if self.noise not in NOISE_MODELS:
            raise ConfigError(f"unknown noise model {self.noise!r}")
        for name in ("m", "m_over_n", "snr_db"):
            grid = getattr(self, name)
            if grid is not None and len(grid) == 0:
                raise ConfigError(f"grid {name} must be nonempty")
        if self.m is not None and any(m < 1 for m in self.m):
            raise ConfigError("m grid entries must be positive")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        unknown = set(raw) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "experiment" not in raw:
            raise ConfigError("config must name an experiment")
        return cls(**raw)


def _child_seed(seed: int, *path: int) -> int:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _num_workers() -> int:
    return max(1, int(os.environ.get("PHASELIFT_THREADS", "1")))


def _map_trials(fn, args_list):
    workers = _num_workers()
    if workers == 1:
        return [fn(a) for a in args_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list))


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: str, cfg: ExperimentConfig, fieldnames: list[str], rows: list[dict]) -> None:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    buf.write(f"# config={json.dumps(asdict(cfg), sort_keys=True, default=str)}\n")
    buf.write(f"# config_sha256={cfg.digest()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_fmt(row.get(k, "")) for k in fieldnames])
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _write_timing(path: str, timings: list[dict]) -> None:
    with open(path + ".timing.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["experiment", "key", "trial", "wall_time_ms"])
        writer.writeheader()
        writer.writerows(timings)


def _gaussian_signal(n: int, field: str, rng: np.random.Generator) -> np.ndarray:
    if field == REAL:
        return rng.standard_normal(n)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _recovery_trial(cfg: ExperimentConfig, m: int, snr_db: float, gi: int, trial: int) -> dict:
    """One end-to-end trial: signal, ensemble, noise, solve, extract."""
    t0 = time.perf_counter()
    sig_seed = _child_seed(cfg.seed, gi, trial, 0)
    ens_seed = _child_seed(cfg.seed, gi, trial, 1)
    noise_seed = _child_seed(cfg.seed, gi, trial, 2)
    x = _gaussian_signal(cfg.n, cfg.field, substream(sig_seed, 6))
    ens = sample_ensemble(cfg.n, m, f"{cfg.field}-unit-sphere", ens_seed)
    b_clean = intensities(ens, x)
    noise = cfg.noise if np.isfinite(snr_db) else "none"
    data = add_noise(b_clean, noise, snr_db, noise_seed)
    opts = SolverOptions(max_iters=cfg.max_iters)
    rep = solve_constrained(ens, data, opts)
    res = recover(rep.X_hat, x_true=x)
    err_deb = rel_mse(x, res.x_hat_debiased)
    xxs = np.outer(x, x.conj())
    matrix_err = float(np.linalg.norm(rep.X_hat - xxs))
    return {
        "row_type": "trial",
        "snr_db": snr_db,
        "n": cfg.n,
        "m": m,
        "trial": trial,
        "seed": sig_seed,
        "noise": noise,
        "field": cfg.field,
        "rel_mse": res.rel_mse,
        "rel_rms": res.rel_rms,
        "rel_mse_debiased": err_deb,
        "rel_rms_debiased": float(np.sqrt(max(err_deb, 0.0))),
        "matrix_err_fro": matrix_err,
        "eps": data.eps,
        "residual": rep.residual,
        "lambda": rep.lambda_used,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "wall_time_ms": (time.perf_counter() - t0) * 1e3,
    }


_RECOVERY_FIELDS = [
    "experiment",
    "row_type",
    "snr_db",
    "n",
    "m",
    "trial",
    "seed",
    "noise",
    "field",
    "rel_mse",
    "rel_rms",
    "rel_mse_debiased",
    "rel_rms_debiased",
    "matrix_err_fro",
    "eps",
    "residual",
    "lambda",
    "iterations",
    "converged",
]


def _mean(rows, key):
    return float(np.mean([r[key] for r in rows]))


def _recovery_sweep(cfg: ExperimentConfig, grid: list[tuple[int, float]]) -> tuple[list, list]:
    """Shared driver for SNR and oversampling sweeps; grid is (m, snr_db) points."""
    args = [(m, snr, gi, t) for gi, (m, snr) in enumerate(grid) for t in range(cfg.trials)]
    results = _map_trials(lambda a: _recovery_trial(cfg, *a), args)
    rows, timings = [], []
    for gi, (m, snr) in enumerate(grid):
        block = results[gi * cfg.trials : (gi + 1) * cfg.trials]
        for r in block:
            r["experiment"] = cfg.experiment
            timings.append(
                {
                    "experiment": cfg.experiment,
                    "key": f"m={m},snr={snr}",
                    "trial": r["trial"],
                    "wall_time_ms": r.pop("wall_time_ms"),
                }
            )
            rows.append(r)
        rows.append(
            {
                "experiment": cfg.experiment,
                "row_type": "summary",
                "snr_db": snr,
                "n": cfg.n,
                "m": m,
                "noise": cfg.noise,
                "field": cfg.field,
                "rel_mse": _mean(block, "rel_mse"),
                "rel_rms": _mean(block, "rel_rms"),
                "rel_mse_debiased": _mean(block, "rel_mse_debiased"),
                "rel_rms_debiased": _mean(block, "rel_rms_debiased"),
            }
        )
    return rows, timings


def run_snr_sweep(cfg: ExperimentConfig):
    m = cfg.m[0] if cfg.m else 6 * cfg.n
    snr_grid = cfg.snr_db if cfg.snr_db else [5.0, 25.0, 50.0, 75.0, 100.0]
    rows, timings = _recovery_sweep(cfg, [(m, float(s)) for s in snr_grid])
    return _RECOVERY_FIELDS, rows, timings


def run_oversampling_sweep(cfg: ExperimentConfig):
    rates = cfg.m_over_n if cfg.m_over_n else [5, 6, 8, 10, 14, 18, 22]
    snr = float(cfg.snr_db[0]) if cfg.snr_db else 15.0
    rows, timings = _recovery_sweep(cfg, [(int(r * cfg.n), snr) for r in rates])
    return _RECOVERY_FIELDS, rows, timings


def run_phase_transition(cfg: ExperimentConfig):
    rates = cfg.m_over_n if cfg.m_over_n else [1, 2, 3, 4, 5, 6]
    grid = [(int(r * cfg.n), float("inf")) for r in rates]
    rows, timings = _recovery_sweep(cfg, grid)
    fields = _RECOVERY_FIELDS + ["success", "success_rate"]
    for row in rows:
        if row["row_type"] == "trial":
            row["success"] = row["rel_mse"] <= PHASE_TRANSITION_SUCCESS
    for row in rows:
        if row["row_type"] == "summary":
            block = [
                r
                for r in rows
                if r["row_type"] == "trial" and r["m"] == row["m"]
            ]
            row["success_rate"] = _mean(block, "success")
    return fields, rows, timings


def run_certificate_study(cfg: ExperimentConfig):
    ms = cfg.m if cfg.m else [2 * cfg.n, 8 * cfg.n, 32 * cfg.n]
    x = np.zeros(cfg.n, dtype=np.float64 if cfg.field == REAL else np.complex128)
    x[0] = 1.0

    def one(args):
        gi, m, trial = args
        t0 = time.perf_counter()
        ens_seed = _child_seed(cfg.seed, gi, trial, 1)
        ens = sample_ensemble(cfg.n, m, f"{cfg.field}-gaussian", ens_seed)
        Y, dropped = build_certificate(ens, x, beta=cfg.beta, truncate=True)
        rep = verify_certificate(Y, x, truncated_fraction=dropped)
        return {
            "experiment": cfg.experiment,
            "row_type": "trial",
            "n": cfg.n,
            "m": m,
            "trial": trial,
            "seed": ens_seed,
            "field": cfg.field,
            "beta": cfg.beta,
            "dist_tangent": rep.dist_tangent,
            "opnorm_complement": rep.opnorm_complement,
            "truncated_fraction": rep.truncated_fraction,
            "pass": rep.passed,
            "wall_time_ms": (time.perf_counter() - t0) * 1e3,
        }

    args = [(gi, m, t) for gi, m in enumerate(ms) for t in range(cfg.trials)]
    results = _map_trials(one, args)
    rows, timings = [], []
    for gi, m in enumerate(ms):
        block = results[gi * cfg.trials : (gi + 1) * cfg.trials]
        for r in block:
            timings.append(
                {
                    "experiment": cfg.experiment,
                    "key": f"m={m}",
                    "trial": r["trial"],
                    "wall_time_ms": r.pop("wall_time_ms"),
                }
            )
            rows.append(r)
        rows.append(
            {
                "experiment": cfg.experiment,
                "row_type": "summary",
                "n": cfg.n,
                "m": m,
                "field": cfg.field,
                "beta": cfg.beta,
                "dist_tangent": float(np.median([r["dist_tangent"] for r in block])),
                "opnorm_complement": float(np.median([r["opnorm_complement"] for r in block])),
                "pass_rate": _mean(block, "pass"),
            }
        )
    fields = [
        "experiment",
        "row_type",
        "n",
        "m",
        "trial",
        "seed",
        "field",
        "beta",
        "dist_tangent",
        "opnorm_complement",
        "truncated_fraction",
        "pass",
        "pass_rate",
    ]
    return fields, rows, timings


def run_rip1_study(cfg: ExperimentConfig):
    ms = sorted(cfg.m if cfg.m else [4 * cfg.n, 16 * cfg.n, 64 * cfg.n])

    def one(args):
        gi, m, trial = args
        t0 = time.perf_counter()
        seed = _child_seed(cfg.seed, gi, trial, 1)
        rep = l1_isometry_check(cfg.field, cfg.n, m, trials=100, seed=seed)
        return {
            "experiment": cfg.experiment,
            "row_type": "trial",
            "n": cfg.n,
            "m": m,
            "trial": trial,
            "seed": seed,
            "field": cfg.field,
            "delta_observed": rep.delta_observed,
            "rank2_min_ratio": rep.rank2_min_ratio,
            "wall_time_ms": (time.perf_counter() - t0) * 1e3,
        }

    args = [(gi, m, t) for gi, m in enumerate(ms) for t in range(cfg.trials)]
    results = _map_trials(one, args)
    rows, timings = [], []
    for gi, m in enumerate(ms):
        block = results[gi * cfg.trials : (gi + 1) * cfg.trials]
        for r in block:
            timings.append(
                {
                    "experiment": cfg.experiment,
                    "key": f"m={m}",
                    "trial": r["trial"],
                    "wall_time_ms": r.pop("wall_time_ms"),
                }
            )
            rows.append(r)
        rows.append(
            {
                "experiment": cfg.experiment,
                "row_type": "summary",
                "n": cfg.n,
                "m": m,
                "field": cfg.field,
                "delta_observed": float(np.median([r["delta_observed"] for r in block])),
                "rank2_min_ratio": float(np.min([r["rank2_min_ratio"] for r in block])),
            }
        )
    fields = [
        "experiment",
        "row_type",
        "n",
        "m",
        "trial",
        "seed",
        "field",
        "delta_observed",
        "rank2_min_ratio",
    ]
    return fields, rows, timings


def run_f_curves(cfg: ExperimentConfig):
    closed = rank2_l1_mean_real if cfg.field == REAL else rank2_l1_mean_complex
    ts = np.linspace(0.0, 1.0, 101)

    def one(args):
        ti, t = args
        t0 = time.perf_counter()
        seed = _child_seed(cfg.seed, ti, 0, 1)
        mean, stderr = rank2_l1_mc(float(t), cfg.field, cfg.mc_samples, seed)
        return {
            "experiment": cfg.experiment,
            "row_type": "trial",
            "field": cfg.field,
            "t": float(t),
            "f_closed": float(closed(t)),
            "mc_mean": mean,
            "mc_stderr": stderr,
            "wall_time_ms": (time.perf_counter() - t0) * 1e3,
        }

    results = _map_trials(one, list(enumerate(ts)))
    rows, timings = [], []
    for r in results:
        timings.append(
            {
                "experiment": cfg.experiment,
                "key": f"t={r['t']!r}",
                "trial": 0,
                "wall_time_ms": r.pop("wall_time_ms"),
            }
        )
        rows.append(r)
    fields = ["experiment", "row_type", "field", "t", "f_closed", "mc_mean", "mc_stderr"]
    return fields, rows, timings


RUNNERS = {
    "snr-sweep": run_snr_sweep,
    "oversampling-sweep": run_oversampling_sweep,
    "phase-transition": run_phase_transition,
    "certificate-study": run_certificate_study,
    "rip1-study": run_rip1_study,
    "f-curves": run_f_curves,
}


def run_experiment(cfg: ExperimentConfig) -> int:
    """Run an experiment, write its CSV (+ timing sidecar), return #failed trials."""
    cfg.validate()
    fields, rows, timings = RUNNERS[cfg.experiment](cfg)
    write_csv(cfg.out, cfg, fields, rows)
    _write_timing(cfg.out, timings)
    return sum(
        1 for r in rows if r.get("row_type") == "trial" and r.get("converged") is False
    )
