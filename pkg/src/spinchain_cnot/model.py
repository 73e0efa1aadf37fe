"""System Hamiltonians, the Omega_k transition-frequency operators and bath rates.

Units: time in microseconds, angular frequency in rad/us (hbar = 1).
Values quoted in "2 pi MHz" are multiplied by 2 pi on input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .spin_algebra import bit_of, spin_operator

TWO_PI = 2.0 * math.pi

# hbar / k_B in K*us; x = HBAR_OVER_KB * omega[rad/us] / T[K]
HBAR_OVER_KB = constants.hbar / constants.k * 1e6


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SystemParams:
    """Ising spin chain parameters, all angular frequencies in rad/us."""

    omega: tuple[float, ...] = (TWO_PI * 400.0, TWO_PI * 200.0, TWO_PI * 100.0)
    j1: float = TWO_PI * 25.0
    j2: float = TWO_PI * 1.0
    rabi: float = TWO_PI * 0.1

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega)
        object.__setattr__(self, "omega", omega)
        if len(omega) < 1:
            raise ValueError("need at least one spin")
        if any(w <= 0 for w in omega):
            raise ValueError(f"Larmor frequencies must be positive: {omega}")
        if len(set(omega)) != len(omega):
            raise ValueError(f"Larmor frequencies must be distinct: {omega}")
        if not self.rabi > 0:
            raise ValueError(f"Rabi frequency must be positive, got {self.rabi}")

    @classmethod
    def from_mhz(cls, omega=(400.0, 200.0, 100.0), j1=25.0, j2=1.0, rabi=0.1):
        """Build from values in units of 2 pi MHz."""
        return cls(
            omega=tuple(TWO_PI * w for w in omega),
            j1=TWO_PI * j1,
            j2=TWO_PI * j2,
            rabi=TWO_PI * rabi,
        )

    @property
    def n_spins(self) -> int:
        return len(self.omega)

    @property
    def dim(self) -> int:
        return 2**self.n_spins


@dataclass(frozen=True)
class BathParams:
    temperature: float = 0.0
    gamma_target: float = 0.0
    hbar_over_kb: float = HBAR_OVER_KB

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.gamma_target < 0:
            raise ValueError(f"gamma_target must be >= 0, got {self.gamma_target}")

    def x(self, omega: float) -> float:
        """hbar*omega / (k_B T); infinite at T = 0."""
        if self.temperature == 0:
            return math.inf
        return self.hbar_over_kb * omega / self.temperature


@dataclass(frozen=True)
class RateTable:
    """Emission/absorption rates per spin (rows) and basis state (columns).

    ``emit[k, i]`` is gamma_k^(i), ``absorb[k, i]`` its thermal partner;
    ``markov_emit[k]``/``markov_absorb[k]`` are evaluated at the bare Larmor
    frequency.  ``omega_eig`` keeps the Omega_k^(i) table the rates came from.
    """

    emit: np.ndarray
    absorb: np.ndarray
    markov_emit: np.ndarray
    markov_absorb: np.ndarray
    omega_eig: np.ndarray
    coupling: np.ndarray = field(repr=False)

    @classmethod
    def zeros(cls, p: SystemParams) -> "RateTable":
        n, d = p.n_spins, p.dim
        return cls(
            emit=_readonly(np.zeros((n, d))),
            absorb=_readonly(np.zeros((n, d))),
            markov_emit=_readonly(np.zeros(n)),
            markov_absorb=_readonly(np.zeros(n)),
            omega_eig=_readonly([omega_eigenvalues(p, k) for k in range(1, n + 1)]),
            coupling=_readonly(np.zeros(n)),
        )

    def markovian(self) -> "RateTable":
        """Same scalars broadcast over states (the |Omega_k^(i)| ~ omega_k limit)."""
        n, d = self.emit.shape
        return RateTable(
            emit=_readonly(np.repeat(self.markov_emit[:, None], d, axis=1)),
            absorb=_readonly(np.repeat(self.markov_absorb[:, None], d, axis=1)),
            markov_emit=self.markov_emit,
            markov_absorb=self.markov_absorb,
            omega_eig=self.omega_eig,
            coupling=self.coupling,
        )


def _check_site(p: SystemParams, k: int) -> None:
    if not 1 <= k <= p.n_spins:
        raise ValueError(f"spin index {k} outside 1..{p.n_spins}")


def h0_diagonal(p: SystemParams) -> np.ndarray:
    """Diagonal of H0 in basis order (real)."""
    n = p.n_spins
    sz = np.array(
        [[0.5 - bit_of(i, k, n) for k in range(1, n + 1)] for i in range(p.dim)]
    )
    energy = -sz @ np.asarray(p.omega)
    if n >= 2:
        energy += p.j1 * np.sum(sz[:, :-1] * sz[:, 1:], axis=1)
    if n >= 3:
        energy += p.j2 * np.sum(sz[:, :-2] * sz[:, 2:], axis=1)
    return energy


def build_h0(p: SystemParams) -> np.ndarray:
    """H0 = -sum w_k Sz_k + J sum Sz_k Sz_k+1 + J' sum Sz_k Sz_k+2, built from operators."""
    n = p.n_spins
    sz = [spin_operator("z", k, n) for k in range(1, n + 1)]
    h = np.zeros((p.dim, p.dim), dtype=complex)
    for k in range(n):
        h -= p.omega[k] * sz[k]
    for k in range(n - 1):
        h += p.j1 * sz[k] @ sz[k + 1]
    for k in range(n - 2):
        h += p.j2 * sz[k] @ sz[k + 2]
    return h


def build_hrf(p: SystemParams, t: float, frequency: float, phase: float = 0.0,
              amplitude: float | None = None) -> np.ndarray:
    """Circularly polarised RF drive -(Omega/2) sum_k (e^{i(wt+phi)} S+_k + h.c.)."""
    rabi = p.rabi if amplitude is None else amplitude
    n = p.n_spins
    splus = sum(spin_operator("plus", k, n) for k in range(1, n + 1))
    z = np.exp(1j * (frequency * t + phase))
    return -0.5 * rabi * (z * splus + np.conj(z) * splus.conj().T)


def omega_operator(p: SystemParams, k: int) -> np.ndarray:
    """Omega_k = w_k - J(Sz_{k+1} + Sz_{k-1}) - J'(Sz_{k+2} + Sz_{k-2}), ends truncated."""
    _check_site(p, k)
    n = p.n_spins
    op = p.omega[k - 1] * np.eye(p.dim, dtype=complex)
    for offset, coupling in ((1, p.j1), (2, p.j2)):
        for site in (k - offset, k + offset):
            if 1 <= site <= n:
                op -= coupling * spin_operator("z", site, n)
    return op


def omega_eigenvalues(p: SystemParams, k: int) -> np.ndarray:
    return np.real(np.diag(omega_operator(p, k))).copy()


def planck_n(omega: float, bath: BathParams) -> float:
    """Bose occupation 1/(e^x - 1); exactly 0 at T = 0."""
    if not omega > 0:
        raise ValueError(f"frequency must be positive, got {omega}")
    if bath.temperature == 0:
        return 0.0
    x = bath.x(omega)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def spectral_emit(omega: float, bath: BathParams) -> float:
    """j(w) = w^3 (N(w) + 1)."""
    return omega**3 * (planck_n(omega, bath) + 1.0)


def spectral_absorb(omega: float, bath: BathParams) -> float:
    """j^dag(w) = w^3 N(w)."""
    return omega**3 * planck_n(omega, bath)


def _absorb_ratio(omega: float, bath: BathParams) -> float:
    """N/(N+1) = exp(-x)."""
    if bath.temperature == 0:
        return 0.0
    return math.exp(-bath.x(omega))


def build_rate_table(p: SystemParams, bath: BathParams) -> RateTable:
    """Rates gamma_k^(i) = c_k j(Omega_k^(i)), with c_k fixed by j at w_k giving gamma_target."""
    n, d = p.n_spins, p.dim
    eig = np.array([omega_eigenvalues(p, k) for k in range(1, n + 1)])
    if np.any(eig <= 0):
        raise ValueError("Omega_k eigenvalues must be positive (Ising couplings too large)")
    coupling = np.array(
        [bath.gamma_target / spectral_emit(p.omega[k], bath) for k in range(n)]
    )
    emit = np.empty((n, d))
    absorb = np.empty((n, d))
    for k in range(n):
        for i in range(d):
            emit[k, i] = coupling[k] * spectral_emit(eig[k, i], bath)
            absorb[k, i] = coupling[k] * spectral_absorb(eig[k, i], bath)
    # at the calibration frequency the emission rate is the target by definition
    markov_emit = np.full(n, bath.gamma_target)
    markov_absorb = np.array(
        [bath.gamma_target * _absorb_ratio(p.omega[k], bath) for k in range(n)]
    )
    return RateTable(
        emit=_readonly(emit),
        absorb=_readonly(absorb),
        markov_emit=_readonly(markov_emit),
        markov_absorb=_readonly(markov_absorb),
        omega_eig=_readonly(eig),
        coupling=_readonly(coupling),
    )
