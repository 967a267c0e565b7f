"""Run orchestration: configuration, the sample -> embed -> diagonalize ->
analyze pipeline, and persistence of plot-ready tables.

Per k the run emits (paths relative to the output directory):

* moments.csv      one row per k: k, q_formula, q_mc_mean, lambda_c,
                   sigma_lambda, S, kappa, alpha, alpha_ergodic, mu1, mu2,
                   members (dimensionless throughout; energies in the unit
                   interaction-strength scale of the sampled matrices)
* hist_lowest_k{K}.csv   standardized lowest-eigenvalue histogram and the
                   three candidate densities at the bin centers
* fits_k{K}.json   residual-sum-of-squares reports (see schemas/fits.schema.json)
* spacing_k{K}.csv normalized lowest-spacing histogram with the Poisson and
                   Wigner-surmise reference curves
* raw_eigs_k{K}.csv      optional full spectra, one row per member
* manifest.json    config echo, file digests and the combined checksum

Outputs are byte-identical across reruns of the same config and independent
of worker_count: member i depends only on member_seed(master_seed, i), and
aggregation is in member-index order.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import yaml

from . import __version__
from .eigen import eigenvalues_selfadjoint
from .ensemble import embed_kbody, embedding_plan, member_seed, sample_kbody
from .fock import dimension
from .qnormal import q_from_eigenvalues, q_parameter, spectral_variance
from .stats import (
    EnsembleRecord,
    FitReport,
    HIST_RANGE,
    SPACING_RANGE,
    alpha_ergodic,
    alpha_from_centroid,
    fit_distribution,
    fit_spacing,
    histogram,
    moments,
    scale_lowest,
    spacing_sample,
    width_exponents,
)

DEFAULT_BINS = 40

# Default (N, m) grid for q sweeps.
DEFAULT_SWEEP_GRID = tuple(
    [(4, m) for m in range(4, 15)]
    + [(5, m) for m in range(5, 12)]
    + [(6, m) for m in range(6, 10)]
)


class ConfigError(ValueError):
    """Configuration validation failure, carrying the offending field."""

    def __init__(self, config_field: str, message: str):
        super().__init__(f"config field {config_field!r}: {message}")
        self.field = config_field


@dataclass(frozen=True)
class RunConfig:
    n_levels: int
    n_bosons: int
    k_list: tuple[int, ...]
    beta: int
    members: int
    master_seed: int
    bins: int = DEFAULT_BINS
    output_dir: str = "out"
    emit_raw_eigenvalues: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        _require(self.n_levels >= 1, "system.levels", "must be >= 1")
        _require(self.n_bosons >= 1, "system.bosons", "must be >= 1")
        _require(self.beta in (1, 2), "system.beta", "must be 1 or 2")
        _require(len(self.k_list) >= 1, "k", "must be non-empty")
        for k in self.k_list:
            _require(
                1 <= k <= self.n_bosons,
                "k",
                f"every k must satisfy 1 <= k <= {self.n_bosons}, got {k}",
            )
        _require(self.members >= 1, "ensemble.members", "must be >= 1")
        _require(self.bins >= 1, "histogram.bins", "must be >= 1")
        _require(self.workers >= 1, "workers", "must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


def _require(cond: bool, config_field: str, message: str) -> None:
    if not cond:
        raise ConfigError(config_field, message)


def _expect_int(value, config_field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(config_field, f"must be an integer, got {value!r}")
    return value


def config_from_dict(raw: dict) -> RunConfig:
    """Build a RunConfig from the nested mapping of a config file."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a mapping")
    known = {"system", "k", "ensemble", "histogram", "output_dir",
             "emit_raw_eigenvalues", "workers"}
    for key in raw:
        if key not in known:
            raise ConfigError(key, "unknown field")

    system = raw.get("system")
    if not isinstance(system, dict):
        raise ConfigError("system", "must be a mapping with levels/bosons/beta")
    n_levels = _expect_int(system.get("levels"), "system.levels")
    n_bosons = _expect_int(system.get("bosons"), "system.bosons")
    beta = _expect_int(system.get("beta", 1), "system.beta")

    k_raw = raw.get("k")
    if k_raw == "all":
        k_list = tuple(range(1, n_bosons + 1))
    elif isinstance(k_raw, int) and not isinstance(k_raw, bool):
        k_list = (k_raw,)
    elif isinstance(k_raw, (list, tuple)) and k_raw:
        k_list = tuple(_expect_int(k, "k") for k in k_raw)
    else:
        raise ConfigError("k", f"must be an int, a list of ints or 'all', got {k_raw!r}")

    ensemble = raw.get("ensemble")
    if not isinstance(ensemble, dict):
        raise ConfigError("ensemble", "must be a mapping with members/master_seed")
    members = _expect_int(ensemble.get("members"), "ensemble.members")
    master_seed = _expect_int(ensemble.get("master_seed", 0), "ensemble.master_seed")

    hist_cfg = raw.get("histogram", {})
    if not isinstance(hist_cfg, dict):
        raise ConfigError("histogram", "must be a mapping")
    bins = _expect_int(hist_cfg.get("bins", DEFAULT_BINS), "histogram.bins")

    output_dir = raw.get("output_dir", "out")
    if not isinstance(output_dir, str):
        raise ConfigError("output_dir", f"must be a string, got {output_dir!r}")
    emit_raw = raw.get("emit_raw_eigenvalues", False)
    if not isinstance(emit_raw, bool):
        raise ConfigError("emit_raw_eigenvalues", f"must be a boolean, got {emit_raw!r}")
    workers = _expect_int(raw.get("workers", 1), "workers")

    return RunConfig(
        n_levels=n_levels,
        n_bosons=n_bosons,
        k_list=k_list,
        beta=beta,
        members=members,
        master_seed=master_seed,
        bins=bins,
        output_dir=output_dir,
        emit_raw_eigenvalues=emit_raw,
        workers=workers,
    )


def config_from_yaml(path) -> RunConfig:
    with open(path) as fh:
        raw = yaml.safe_load(fh)
    return config_from_dict(raw)


@dataclass
class RunManifest:
    config: dict
    version: str
    wall_clock_s: float
    outputs: dict
    file_sha256: dict
    checksum: str
    failures: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "version": self.version,
            "wall_clock_s": self.wall_clock_s,
            "outputs": self.outputs,
            "file_sha256": self.file_sha256,
            "checksum": self.checksum,
            "failures": self.failures,
        }


def _compute_member(args) -> tuple:
    """One (k, member) task: sample, embed, diagonalize, summarize."""
    n_levels, n_bosons, rank, beta, seed, keep_spectrum = args
    plan = embedding_plan(n_levels, n_bosons, rank)
    v = sample_kbody(n_levels, rank, beta, seed)
    h = embed_kbody(v, plan)
    spec = eigenvalues_selfadjoint(h)
    e = spec.eigenvalues
    record = (
        float(e[0]),
        float(e[1]),
        float(e.mean()),
        float(e.var()),
        q_from_eigenvalues(e),
    )
    return record + ((e.copy() if keep_spectrum else None),)


def compute_records(
    n_levels: int,
    n_bosons: int,
    rank: int,
    beta: int,
    members: int,
    master_seed: int,
    workers: int = 1,
    keep_spectra: bool = False,
) -> tuple[list[EnsembleRecord], list[np.ndarray] | None]:
    """Ensemble records in member-index order, optionally with full spectra.

    The result is a pure function of the arguments; worker count only
    affects scheduling.
    """
    tasks = [
        (n_levels, n_bosons, rank, beta, member_seed(master_seed, i), keep_spectra)
        for i in range(members)
    ]
    if workers > 1:
        chunk = max(1, members // (8 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_compute_member, tasks, chunksize=chunk))
    else:
        raw = [_compute_member(t) for t in tasks]

    records = [
        EnsembleRecord(
            member_index=i,
            lambda0=r[0],
            lambda1=r[1],
            spectrum_mean=r[2],
            spectrum_variance=r[3],
            q_member=r[4],
        )
        for i, r in enumerate(raw)
    ]
    spectra = [r[5] for r in raw] if keep_spectra else None
    return records, spectra


def _fmt(x) -> str:
    return repr(float(x))


def _nan_guard(fn, *args) -> float:
    try:
        return fn(*args)
    except (ValueError, ZeroDivisionError):
        return math.nan


@dataclass(frozen=True)
class KAnalysis:
    """Everything derived from one ensemble's records."""

    rank: int
    records: list
    summary: object
    q_formula: float
    q_mc_mean: float
    alpha: float
    alpha_erg: float
    alpha_erg_excluded: int
    mu1: float
    mu2: float
    scaled_hist: object
    lowest_fits: list
    spacing_hist: object
    spacing_fits: list


def analyze_records(
    records: Sequence[EnsembleRecord],
    n_levels: int,
    n_bosons: int,
    rank: int,
    beta: int,
    bins: int = DEFAULT_BINS,
) -> KAnalysis:
    lam0 = [r.lambda0 for r in records]
    summary = moments(lam0)
    lam0_coeff = float(spectral_variance(n_levels, n_bosons, rank))
    q_formula = q_parameter(n_levels, n_bosons, rank)
    q_mc = float(np.mean([r.q_member for r in records]))

    alpha = _nan_guard(
        alpha_from_centroid, summary.centroid, q_formula, lam0_coeff, beta
    )
    try:
        a_erg, excluded = alpha_ergodic(records, lam0_coeff, beta)
    except ValueError:
        a_erg, excluded = math.nan, len(records)
    mu1, mu2 = width_exponents(
        summary.width, lam0_coeff, dimension(n_levels, rank)
    )

    scaled = [scale_lowest(x, summary.centroid, summary.width) for x in lam0]
    scaled_hist = histogram(scaled, bins=bins, hist_range=HIST_RANGE)
    lowest_fits = [
        fit_distribution(scaled_hist, kind, beta) for kind in ("gaussian", "gumbel", "tw")
    ]

    spacings = spacing_sample(records)
    spacing_hist = histogram(spacings, bins=bins, hist_range=SPACING_RANGE)
    wigner = "wigner_goe" if beta == 1 else "wigner_gue"
    spacing_fits = [fit_spacing(spacing_hist, kind) for kind in ("poisson", wigner)]

    return KAnalysis(
        rank=rank,
        records=list(records),
        summary=summary,
        q_formula=q_formula,
        q_mc_mean=q_mc,
        alpha=alpha,
        alpha_erg=a_erg,
        alpha_erg_excluded=excluded,
        mu1=mu1,
        mu2=mu2,
        scaled_hist=scaled_hist,
        lowest_fits=lowest_fits,
        spacing_hist=spacing_hist,
        spacing_fits=spacing_fits,
    )


def _write_moments_csv(path: Path, rows: list[dict]) -> None:
    cols = [
        "k", "q_formula", "q_mc_mean", "lambda_c", "sigma_lambda", "S", "kappa",
        "alpha", "alpha_ergodic", "mu1", "mu2", "members",
    ]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in rows:
            fh.write(",".join(str(row[c]) for c in cols) + "\n")


def _write_hist_csv(path: Path, analysis: KAnalysis, beta: int) -> None:
    from .distributions import gumbel_pdf, gumbel_standardize, tracy_widom_standardized

    hist = analysis.scaled_hist
    mu = next(f.mu for f in analysis.lowest_fits if f.kind == "gumbel")
    gauss = np.exp(-0.5 * hist.centers ** 2) / math.sqrt(2.0 * math.pi)
    gum = gumbel_pdf(hist.centers, gumbel_standardize(mu))
    tw = tracy_widom_standardized(beta, reflected=True).pdf_at(hist.centers)
    with open(path, "w") as fh:
        fh.write("center,density,pdf_gaussian,pdf_gumbel,pdf_tw\n")
        for c, d, g, m_, t in zip(hist.centers, hist.densities, gauss, gum, tw):
            fh.write(f"{_fmt(c)},{_fmt(d)},{_fmt(g)},{_fmt(m_)},{_fmt(t)}\n")


def _write_spacing_csv(path: Path, analysis: KAnalysis, beta: int) -> None:
    from .distributions import spacing_reference

    hist = analysis.spacing_hist
    wigner = "wigner_goe" if beta == 1 else "wigner_gue"
    poisson = spacing_reference("poisson", hist.centers)
    wig = spacing_reference(wigner, hist.centers)
    with open(path, "w") as fh:
        fh.write("center,density,pdf_poisson,pdf_wigner\n")
        for c, d, p, w in zip(hist.centers, hist.densities, poisson, wig):
            fh.write(f"{_fmt(c)},{_fmt(d)},{_fmt(p)},{_fmt(w)}\n")


def _write_fits_json(path: Path, analysis: KAnalysis) -> None:
    lowest = [f.to_dict() for f in analysis.lowest_fits]
    spacing = [f.to_dict() for f in analysis.spacing_fits]
    payload = {
        "k": analysis.rank,
        "n_samples": analysis.scaled_hist.n_samples,
        "bins": analysis.scaled_hist.bins,
        "lowest_eigenvalue": {
            "fits": lowest,
            "winner": min(lowest, key=lambda f: f["rss"])["kind"],
        },
        "spacing": {
            "fits": spacing,
            "winner": min(spacing, key=lambda f: f["rss"])["kind"],
        },
        "alpha_ergodic_excluded": analysis.alpha_erg_excluded,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_raw_eigs_csv(path: Path, spectra: list[np.ndarray]) -> None:
    d = spectra[0].size
    with open(path, "w") as fh:
        fh.write("member," + ",".join(f"e{j}" for j in range(d)) + "\n")
        for i, e in enumerate(spectra):
            fh.write(str(i) + "," + ",".join(_fmt(x) for x in e) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(config: RunConfig) -> RunManifest:
    """Execute the pipeline for every k in the config and persist results.

    Module failures abort the affected k only; the manifest records them and
    lists the completed outputs.
    """
    t0 = time.perf_counter()
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    moment_rows: list[dict] = []
    outputs: dict = {"per_k": {}}
    failures: dict = {}

    for k in config.k_list:
        try:
            records, spectra = compute_records(
                config.n_levels,
                config.n_bosons,
                k,
                config.beta,
                config.members,
                config.master_seed,
                workers=config.workers,
                keep_spectra=config.emit_raw_eigenvalues,
            )
            analysis = analyze_records(
                records, config.n_levels, config.n_bosons, k, config.beta,
                bins=config.bins,
            )
        except Exception as exc:  # recorded, run continues with other k
            failures[str(k)] = f"{type(exc).__name__}: {exc}"
            continue

        summary = analysis.summary
        moment_rows.append(
            {
                "k": k,
                "q_formula": _fmt(analysis.q_formula),
                "q_mc_mean": _fmt(analysis.q_mc_mean),
                "lambda_c": _fmt(summary.centroid),
                "sigma_lambda": _fmt(summary.width),
                "S": _fmt(summary.skewness),
                "kappa": _fmt(summary.kurtosis),
                "alpha": _fmt(analysis.alpha),
                "alpha_ergodic": _fmt(analysis.alpha_erg),
                "mu1": _fmt(analysis.mu1),
                "mu2": _fmt(analysis.mu2),
                "members": summary.count,
            }
        )

        hist_path = out_dir / f"hist_lowest_k{k}.csv"
        fits_path = out_dir / f"fits_k{k}.json"
        spacing_path = out_dir / f"spacing_k{k}.csv"
        _write_hist_csv(hist_path, analysis, config.beta)
        _write_fits_json(fits_path, analysis)
        _write_spacing_csv(spacing_path, analysis, config.beta)
        per_k = {
            "histogram": hist_path.name,
            "fits": fits_path.name,
            "spacing": spacing_path.name,
        }
        if config.emit_raw_eigenvalues and spectra is not None:
            raw_path = out_dir / f"raw_eigs_k{k}.csv"
            _write_raw_eigs_csv(raw_path, spectra)
            per_k["raw_eigenvalues"] = raw_path.name
        outputs["per_k"][str(k)] = per_k

    moments_path = out_dir / "moments.csv"
    _write_moments_csv(moments_path, moment_rows)
    outputs["moments"] = moments_path.name

    names = [moments_path.name]
    for per_k in outputs["per_k"].values():
        names.extend(per_k.values())
    digests = {name: _sha256(out_dir / name) for name in sorted(names)}

    payload = json.dumps(
        {"version": __version__, "config": config.to_dict(), "files": digests},
        sort_keys=True,
    )
    manifest = RunManifest(
        config=config.to_dict(),
        version=__version__,
        wall_clock_s=time.perf_counter() - t0,
        outputs=outputs,
        file_sha256=digests,
        checksum=hashlib.sha256(payload.encode()).hexdigest(),
        failures=failures,
    )
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def sweep_q(pairs: Iterable[tuple[int, int]], path) -> int:
    """Exact q(N, m, k) over k = 1..m for each (N, m) pair; returns row count."""
    rows = []
    for n_levels, n_bosons in pairs:
        for k in range(1, n_bosons + 1):
            rows.append(
                (
                    n_levels,
                    n_bosons,
                    k,
                    k / n_bosons,
                    q_parameter(n_levels, n_bosons, k),
                )
            )
    with open(path, "w") as fh:
        fh.write("N,m,k,k_over_m,q\n")
        for n, m, k, ratio, q in rows:
            fh.write(f"{n},{m},{k},{_fmt(ratio)},{_fmt(q)}\n")
    return len(rows)
