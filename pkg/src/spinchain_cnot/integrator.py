"""Fixed-step fourth-order integration of the master equation with invariant monitors.

Two explicit RK4 variants are available.  ``lawson`` (the default) treats the
diagonal free precession -i[H0, rho] exactly, as an element-wise phase, and
applies classical RK4 to the drive and dissipator in that rotating frame.
``rk4`` is classical RK4 on the full right-hand side; at the default step it
damps the fastest free coherences by ~(w dt)^6/144 per step.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .dissipators import DissipatorMode, master_rhs
from .errors import IntegrityError, NumericalFailure, StateError
from .jacobi import min_eigenvalue
from .metrics import purity
from .model import RateTable, SystemParams, h0_diagonal
from .pulses import Pulse, Sequence

log = logging.getLogger(__name__)

TRACKED_COHERENCES = ((1, 3), (1, 4), (3, 4))
TRACE_LIMIT = 1e-6
MIN_EIG_LIMIT = -1e-4
METHODS = ("lawson", "rk4")


def default_dt(p: SystemParams) -> float:
    """Period of the fastest coherence (sum of Larmor frequencies) / 50."""
    return 2.0 * math.pi / sum(p.omega) / 50.0


def max_frequency(p: SystemParams) -> float:
    energy = h0_diagonal(p)
    return float(max(energy.max() - energy.min(), sum(p.omega)))


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float | None = None
    sample_stride: int = 1000
    monitor_stride: int = 1000
    method: str = "lawson"

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.sample_stride < 1 or self.monitor_stride < 1:
            raise ValueError("strides must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"unsupported method {self.method!r}; use one of {METHODS}")

    def resolve_dt(self, p: SystemParams) -> float:
        dt = default_dt(p) if self.dt is None else self.dt
        cap = 2.0 * math.pi / 20.0 / max_frequency(p)
        if dt > cap * (1 + 1e-12):
            raise ValueError(f"dt={dt:.3g} us exceeds the stability cap {cap:.3g} us")
        return dt


@dataclass
class TrajectoryRecord:
    n_spins: int
    times: list = field(default_factory=list)
    populations: list = field(default_factory=list)
    coherences: list = field(default_factory=list)   # |rho_13|, |rho_14|, |rho_34|
    purity: list = field(default_factory=list)
    trace_dev: list = field(default_factory=list)
    herm_dev: list = field(default_factory=list)
    min_eig: list = field(default_factory=list)
    states: list = field(default_factory=list)
    peak_trace_dev: float = 0.0
    peak_herm_dev: float = 0.0
    min_min_eig: float = math.inf
    steps: int = 0
    dt: float = 0.0

    def __len__(self):
        return len(self.times)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def as_arrays(self) -> dict[str, np.ndarray]:
        d = 2**self.n_spins
        return {
            "t": np.asarray(self.times, dtype=float),
            "populations": np.asarray(self.populations, dtype=float).reshape(-1, d),
            "coherences": np.asarray(self.coherences, dtype=float).reshape(-1, 3),
            "purity": np.asarray(self.purity, dtype=float),
            "trace_dev": np.asarray(self.trace_dev, dtype=float),
            "herm_dev": np.asarray(self.herm_dev, dtype=float),
            "min_eig": np.asarray(self.min_eig, dtype=float),
        }


def _check_finite(rho: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(rho)):
        raise NumericalFailure("non-finite density matrix", t)


def step(rho, t, dt, mode, pulse, p: SystemParams, rates: RateTable,
         method: str = "lawson") -> np.ndarray:
    """One fourth-order step of ``master_rhs`` (reference path, numpy)."""
    # intermediate stages are only approximately Hermitian; symmetrize for the
    # Hermiticity precondition of the dissipators
    def herm(y):
        return 0.5 * (y + y.conj().T)

    if method == "rk4":
        def f(tt, y):
            return master_rhs(y, tt, mode, pulse, p, rates)

        k1 = f(t, rho)
        k2 = f(t + dt / 2, herm(rho + dt / 2 * k1))
        k3 = f(t + dt / 2, herm(rho + dt / 2 * k2))
        k4 = f(t + dt, herm(rho + dt * k3))
        out = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    elif method == "lawson":
        energy = h0_diagonal(p)
        w = energy[:, None] - energy[None, :]
        half = np.exp(-0.5j * w * dt)
        full = half * half

        def f(tt, y):
            free = -1j * w * y
            return master_rhs(y, tt, mode, pulse, p, rates) - free

        k1 = f(t, rho)
        k2 = f(t + dt / 2, herm(half * (rho + dt / 2 * k1)))
        k3 = f(t + dt / 2, herm(half * rho + dt / 2 * k2))
        k4 = f(t + dt, herm(full * rho + dt * half * k3))
        out = full * (rho + dt / 6 * k1) + dt / 6 * (2 * half * (k2 + k3) + k4)
    else:
        raise ValueError(f"unsupported method {method!r}; use one of {METHODS}")
    _check_finite(out, t + dt)
    return out


class _Stepper:
    """Holds the flattened model arrays the compiled kernel works on."""

    def __init__(self, mode, p: SystemParams, rates: RateTable, method: str = "lawson"):
        mode = DissipatorMode.parse(mode)
        if method not in METHODS:
            raise ValueError(f"unsupported method {method!r}; use one of {METHODS}")
        self._advance = _kernel.advance_lawson if method == "lawson" else _kernel.advance
        n, d = p.n_spins, p.dim
        self.energy = np.ascontiguousarray(h0_diagonal(p), dtype=np.float64)
        idx = np.arange(d)
        shifts = [n - k for k in range(1, n + 1)]
        self.bits = np.array([(idx >> s) & 1 for s in shifts], dtype=np.int64)
        self.flip = np.array([idx ^ (1 << s) for s in shifts], dtype=np.int64)
        self.use_phase = mode is DissipatorMode.QUASI
        table = rates if self.use_phase else rates.markovian()
        self.g_emit = np.ascontiguousarray(table.emit, dtype=np.float64)
        self.g_abs = np.ascontiguousarray(table.absorb, dtype=np.float64)
        self.omega_eig = np.ascontiguousarray(rates.omega_eig, dtype=np.float64)

    def advance(self, rho, t0, dt, nsteps, pulse: Pulse | None):
        if pulse is None:
            drive = (False, 0.0, 0.0, 0.0)
        else:
            drive = (True, pulse.frequency, pulse.phase, pulse.amplitude)
        return self._advance(
            np.ascontiguousarray(rho, dtype=np.complex128), float(t0), float(dt), int(nsteps),
            self.energy, self.bits, self.flip, self.g_emit, self.g_abs, self.omega_eig,
            self.use_phase, *drive,
        )

    def rhs(self, rho, t, pulse: Pulse | None):
        out = np.empty_like(rho, dtype=np.complex128)
        drive = (False, 0.0, 0.0, 0.0) if pulse is None else (
            True, pulse.frequency, pulse.phase, pulse.amplitude)
        _kernel.rhs(np.ascontiguousarray(rho, dtype=np.complex128), float(t), out,
                    self.energy, self.bits, self.flip, self.g_emit, self.g_abs,
                    self.omega_eig, self.use_phase, *drive)
        return out


def fast_rhs(rho, t, mode, pulse, p: SystemParams, rates: RateTable) -> np.ndarray:
    """Compiled equivalent of ``master_rhs``."""
    return _Stepper(mode, p, rates).rhs(rho, t, pulse)


def _segments(sequence: Sequence | None, horizon: float, dt_nominal: float):
    """Split [0, horizon] into (start, dt, nsteps, pulse) pieces aligned to pulse edges."""
    edges = []
    t = 0.0
    if sequence is not None:
        for pl in sequence.pulses:
            if pl.start_time >= horizon:
                break
            if pl.start_time > t + 1e-12:
                edges.append((t, pl.start_time, None))
            end = min(pl.end_time, horizon)
            edges.append((pl.start_time, end, pl))
            t = end
    if horizon > t + 1e-12:
        edges.append((t, horizon, None))
    out = []
    for start, end, pl in edges:
        nsteps = max(1, math.ceil((end - start) / dt_nominal - 1e-9))
        out.append((start, (end - start) / nsteps, nsteps, pl))
    return out


def validate_initial_state(rho0: np.ndarray, dim: int) -> np.ndarray:
    rho0 = np.array(rho0, dtype=np.complex128)
    if rho0.shape != (dim, dim):
        raise StateError(f"initial state has shape {rho0.shape}, expected {(dim, dim)}")
    if np.max(np.abs(rho0 - rho0.conj().T)) > 1e-10:
        raise StateError("initial state is not Hermitian")
    if abs(np.trace(rho0) - 1.0) > 1e-10:
        raise StateError("initial state does not have unit trace")
    if min_eigenvalue(rho0) < -1e-10:
        raise StateError("initial state is not positive semidefinite")
    return rho0


def ground_excited_state(dim: int) -> np.ndarray:
    """|1> = |00...0><00...0|."""
    rho = np.zeros((dim, dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    return rho


def run(rho0, sequence: Sequence | None, horizon: float, mode, config: IntegratorConfig,
        p: SystemParams, rates: RateTable, *, check_limits: bool = True) -> TrajectoryRecord:
    """Integrate from t = 0 to ``horizon`` through the pulse sequence."""
    d = p.dim
    rho = validate_initial_state(rho0, d)
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    dt_nominal = config.resolve_dt(p)
    stepper = _Stepper(mode, p, rates, config.method)
    rec = TrajectoryRecord(n_spins=p.n_spins, dt=dt_nominal)

    def monitor(rho, t, sample: bool):
        herm = float(np.max(np.abs(rho - rho.conj().T)))
        rho = 0.5 * (rho + rho.conj().T)
        tr_dev = abs(complex(np.trace(rho)) - 1.0)
        emin = min_eigenvalue(rho)
        rec.peak_herm_dev = max(rec.peak_herm_dev, herm)
        rec.peak_trace_dev = max(rec.peak_trace_dev, tr_dev)
        rec.min_min_eig = min(rec.min_min_eig, emin)
        if check_limits and (tr_dev > TRACE_LIMIT or emin < MIN_EIG_LIMIT):
            raise IntegrityError(
                f"invariant breach at t={t:.6g} us: trace drift {tr_dev:.3g}, "
                f"min eigenvalue {emin:.3g}")
        if sample:
            _record(rec, rho, t, tr_dev, herm, emin)
        return rho

    rho = monitor(rho, 0.0, True)
    total = 0
    for start, dt, nsteps, pulse in _segments(sequence, horizon, dt_nominal):
        done = 0
        while done < nsteps:
            to_sample = config.sample_stride - total % config.sample_stride
            to_monitor = config.monitor_stride - total % config.monitor_stride
            chunk = min(to_sample, to_monitor, nsteps - done)
            rho = stepper.advance(rho, start + done * dt, dt, chunk, pulse)
            done += chunk
            total += chunk
            t = start + done * dt
            _check_finite(rho, t)
            sample = total % config.sample_stride == 0
            if sample or total % config.monitor_stride == 0:
                rho = monitor(rho, t, sample)
    if total % config.sample_stride != 0:
        rho = monitor(rho, horizon, True)
    rec.steps = total
    log.debug("run finished: %d steps, peak trace dev %.3g, herm dev %.3g, min eig %.3g",
              total, rec.peak_trace_dev, rec.peak_herm_dev, rec.min_min_eig)
    return rec


def _record(rec: TrajectoryRecord, rho, t, tr_dev, herm, emin) -> None:
    rec.times.append(float(t))
    rec.populations.append(np.real(np.diag(rho)).copy())
    rec.coherences.append([abs(rho[i - 1, j - 1]) for i, j in TRACKED_COHERENCES])
    rec.purity.append(purity(rho))
    rec.trace_dev.append(tr_dev)
    rec.herm_dev.append(herm)
    rec.min_eig.append(emin)
    rec.states.append(rho.copy())
