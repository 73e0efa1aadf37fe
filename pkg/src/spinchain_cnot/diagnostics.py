"""Scenario runs, Markov/quasi comparison and data export."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, scenario_horizon
from .dissipators import DissipatorMode
from .integrator import TRACKED_COHERENCES, TrajectoryRecord, ground_excited_state, run
from .metrics import cnot_state_error, purity
from .model import RateTable, SystemParams, build_rate_table
from .pulses import Sequence, cnot_sequence

__all__ = ["ScenarioResult", "ComparisonSummary", "run_scenario", "compare_regimes",
           "compare_records", "record_columns", "export_csv", "read_csv", "emit_plot",
           "thermal_profile", "purity", "cnot_state_error"]

SUMMARY_COLUMNS = ["t_us", "max_diag_diff", "max_coh_diff", "purity_diff"]


def record_columns(n_spins: int = 3) -> list[str]:
    d = 2**n_spins
    return (["t_us"] + [f"rho_{i}{i}" for i in range(1, d + 1)]
            + [f"abs_rho_{i}{j}" for i, j in TRACKED_COHERENCES]
            + ["purity", "trace_dev", "herm_dev", "min_eig"])


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    sequence: Sequence
    horizon: float
    rates: RateTable
    record: TrajectoryRecord


@dataclass
class ComparisonSummary:
    """Markov minus quasi, sample by sample (absolute values)."""

    times: np.ndarray
    diag_diff: np.ndarray
    coh_diff: np.ndarray
    purity_diff: np.ndarray
    markov: TrajectoryRecord | None = field(default=None, repr=False)
    quasi: TrajectoryRecord | None = field(default=None, repr=False)

    @property
    def max_diag_diff(self) -> float:
        return float(self.diag_diff.max(initial=0.0))

    @property
    def max_coh_diff(self) -> float:
        return float(self.coh_diff.max(initial=0.0))

    @property
    def max_purity_diff(self) -> float:
        return float(self.purity_diff.max(initial=0.0))

    def rows(self):
        for row in zip(self.times, self.diag_diff, self.coh_diff, self.purity_diff):
            yield [float(v) for v in row]


def run_scenario(cfg: ScenarioConfig, *, mode: DissipatorMode | None = None,
                 rho0: np.ndarray | None = None, check_limits: bool = True) -> ScenarioResult:
    p = cfg.system
    seq = cnot_sequence(p, cfg.trailing_pulses)
    horizon = scenario_horizon(cfg, seq.total_duration)
    rates = build_rate_table(p, cfg.bath)
    rho0 = ground_excited_state(p.dim) if rho0 is None else rho0
    rec = run(rho0, seq, horizon, mode or cfg.mode, cfg.integrator, p, rates,
              check_limits=check_limits)
    return ScenarioResult(cfg, seq, horizon, rates, rec)


def compare_records(markov: TrajectoryRecord, quasi: TrajectoryRecord) -> ComparisonSummary:
    a, b = markov.as_arrays(), quasi.as_arrays()
    if a["t"].shape != b["t"].shape or np.max(np.abs(a["t"] - b["t"]), initial=0.0) > 1e-9:
        raise ValueError("records are not sampled at the same times")
    return ComparisonSummary(
        times=a["t"],
        diag_diff=np.max(np.abs(a["populations"] - b["populations"]), axis=1, initial=0.0),
        coh_diff=np.max(np.abs(a["coherences"] - b["coherences"]), axis=1, initial=0.0),
        purity_diff=np.abs(a["purity"] - b["purity"]),
        markov=markov, quasi=quasi,
    )


def compare_regimes(cfg: ScenarioConfig) -> ComparisonSummary:
    """Run both dissipator modes with everything else identical."""
    m = run_scenario(cfg, mode=DissipatorMode.MARKOVIAN)
    q = run_scenario(cfg, mode=DissipatorMode.QUASI)
    return compare_records(m.record, q.record)


def thermal_profile(p: SystemParams, rates: RateTable) -> np.ndarray:
    """Diagonal stationary state of the Markovian rate equations.

    Each spin relaxes independently: bit 1 is fed at gamma, bit 0 at
    gamma-dagger, so P(bit 1) = gamma / (gamma + gamma-dagger).
    """
    g, gd = np.asarray(rates.markov_emit), np.asarray(rates.markov_absorb)
    if np.any(g + gd <= 0):
        raise ValueError("stationary profile undefined for zero rates")
    up = g / (g + gd)
    prof = np.ones(p.dim)
    for i in range(p.dim):
        for k in range(p.n_spins):
            bit = (i >> (p.n_spins - 1 - k)) & 1
            prof[i] *= up[k] if bit else 1.0 - up[k]
    return prof


def _fmt(x: float) -> str:
    return repr(float(x))


def _open_for_write(path: Path):
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from None


def export_csv(data: TrajectoryRecord | ComparisonSummary, path) -> None:
    """Full-precision CSV of a trajectory record or a comparison summary."""
    with _open_for_write(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        if isinstance(data, ComparisonSummary):
            w.writerow(SUMMARY_COLUMNS)
            for row in data.rows():
                w.writerow([_fmt(v) for v in row])
            return
        w.writerow(record_columns(data.n_spins))
        for i, t in enumerate(data.times):
            row = [t, *data.populations[i], *data.coherences[i], data.purity[i],
                   data.trace_dev[i], data.herm_dev[i], data.min_eig[i]]
            w.writerow([_fmt(v) for v in row])


def read_csv(path) -> dict[str, np.ndarray]:
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot read {path}: {exc.strerror}") from None
    header, body = rows[0], rows[1:]
    data = np.array(body, dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


DEFAULT_PLOT_COLUMNS = ("rho_11", "rho_44", "rho_88", "abs_rho_14", "purity")


def emit_plot(record: TrajectoryRecord, path, columns=DEFAULT_PLOT_COLUMNS,
              title: str | None = None) -> None:
    """Static SVG line chart of selected record columns against time (us)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = record_columns(record.n_spins)
    arr = np.array([[t, *record.populations[i], *record.coherences[i], record.purity[i],
                     record.trace_dev[i], record.herm_dev[i], record.min_eig[i]]
                    for i, t in enumerate(record.times)]).reshape(-1, len(names))
    unknown = [c for c in columns if c not in names]
    if unknown:
        raise ValueError(f"unknown plot columns: {unknown}")
    fig, ax = plt.subplots(figsize=(7, 4))
    for c in columns:
        ax.plot(arr[:, 0], arr[:, names.index(c)], label=c, lw=1.2)
    ax.set_xlabel("t (us)")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        matplotlib.rcParams["svg.hashsalt"] = "spinchain"
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from None
    finally:
        plt.close(fig)
