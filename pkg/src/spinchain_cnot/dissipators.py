"""Markovian and quasi-non-Markovian dissipators and the master-equation RHS.

These are the reference (matrix in, matrix out) implementations; the
integrator's compiled kernel is tested against them.
"""
from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np

from .errors import StateError
from .model import RateTable, SystemParams, build_hrf, h0_diagonal
from .spin_algebra import spin_operator

HERMITIAN_TOL = 1e-8


class DissipatorMode(enum.Enum):
    MARKOVIAN = "markov"
    QUASI = "quasi"

    @classmethod
    def parse(cls, value) -> "DissipatorMode":
        if isinstance(value, cls):
            return value
        for mode in cls:
            if value in (mode.value, mode.name.lower()):
                return mode
        raise ValueError(f"unknown dissipator mode {value!r} (use 'markov' or 'quasi')")


@lru_cache(maxsize=None)
def _ladder(n_spins: int):
    plus = [spin_operator("plus", k, n_spins) for k in range(1, n_spins + 1)]
    minus = [spin_operator("minus", k, n_spins) for k in range(1, n_spins + 1)]
    for m in plus + minus:
        m.setflags(write=False)
    return plus, minus


def _check_hermitian(rho: np.ndarray) -> None:
    dev = np.max(np.abs(rho - rho.conj().T), initial=0.0)
    if dev > HERMITIAN_TOL:
        raise StateError(f"density matrix not Hermitian (max |rho - rho^dag| = {dev:.3g})")


def phase_factors(omega_k: np.ndarray, t: float) -> np.ndarray:
    """Matrix G[m, n] = exp(i (Omega^(m) - Omega^(n)) t) for one spin."""
    diff = omega_k[:, None] - omega_k[None, :]
    return np.exp(1j * diff * t)


def phase_modulated_state(rho: np.ndarray, k: int, t: float, direction: str,
                          rates: RateTable) -> np.ndarray:
    """Element-wise phase-dressed copy of rho for spin ``k`` (1-based).

    emit:   D[n, m]  = exp(i(Omega^(m) - Omega^(n)) t) rho[n, m]
    absorb: D'[n, m] = exp(i(Omega^(n) - Omega^(m)) t) rho[n, m]
    """
    g = phase_factors(rates.omega_eig[k - 1], t)
    if direction == "emit":
        return g.T * rho
    if direction == "absorb":
        return g * rho
    raise ValueError(f"direction must be 'emit' or 'absorb', got {direction!r}")


def apply_quasi(rho: np.ndarray, t: float, rates: RateTable, p: SystemParams) -> np.ndarray:
    _check_hermitian(rho)
    plus, minus = _ladder(p.n_spins)
    out = np.zeros_like(rho, dtype=complex)
    for k in range(p.n_spins):
        sp, sm = plus[k], minus[k]
        g_emit = np.diag(rates.emit[k]).astype(complex)
        g_abs = np.diag(rates.absorb[k]).astype(complex)
        d_emit = phase_modulated_state(rho, k + 1, t, "emit", rates)
        d_abs = phase_modulated_state(rho, k + 1, t, "absorb", rates)
        gain_emit = sm @ d_emit @ sp
        gain_abs = sp @ d_abs @ sm
        pm = sp @ sm
        mp = sm @ sp
        out -= 0.5 * (g_emit @ (pm @ rho - gain_emit) + (rho @ pm - gain_emit) @ g_emit)
        out -= 0.5 * (g_abs @ (mp @ rho - gain_abs) + (rho @ mp - gain_abs) @ g_abs)
    return out


def apply_markovian(rho: np.ndarray, rates: RateTable, p: SystemParams) -> np.ndarray:
    _check_hermitian(rho)
    plus, minus = _ladder(p.n_spins)
    out = np.zeros_like(rho, dtype=complex)
    for k in range(p.n_spins):
        sp, sm = plus[k], minus[k]
        pm = sp @ sm
        mp = sm @ sp
        g, gd = rates.markov_emit[k], rates.markov_absorb[k]
        out -= 0.5 * g * (pm @ rho - 2.0 * sm @ rho @ sp + rho @ pm)
        out -= 0.5 * gd * (mp @ rho - 2.0 * sp @ rho @ sm + rho @ mp)
    return out


def von_neumann(rho: np.ndarray, t: float, pulse, p: SystemParams) -> np.ndarray:
    """-i [H0 + H_rf(t), rho]; ``pulse`` may be None (drive off)."""
    energy = h0_diagonal(p)
    out = -1j * (energy[:, None] - energy[None, :]) * rho
    if pulse is not None:
        h = build_hrf(p, t, pulse.frequency, pulse.phase, pulse.amplitude)
        out += -1j * (h @ rho - rho @ h)
    return out


def master_rhs(rho: np.ndarray, t: float, mode, pulse, p: SystemParams,
               rates: RateTable) -> np.ndarray:
    mode = DissipatorMode.parse(mode)
    if mode is DissipatorMode.QUASI:
        diss = apply_quasi(rho, t, rates, p)
    else:
        diss = apply_markovian(rho, rates, p)
    return von_neumann(rho, t, pulse, p) + diss
