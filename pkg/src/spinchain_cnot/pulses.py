"""RF pulse schedules, in particular the CNOT protocol on the three-spin chain."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import SystemParams, h0_diagonal


@dataclass(frozen=True)
class Pulse:
    frequency: float   # rad/us
    phase: float       # rad
    angle: float       # rotation angle, rad
    amplitude: float   # Rabi frequency, rad/us
    start_time: float  # us

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("pulse amplitude must be positive")
        if not self.angle > 0:
            raise ValueError("pulse angle must be positive")

    @property
    def duration(self) -> float:
        return self.angle / self.amplitude

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    def active(self, t: float) -> bool:
        return self.start_time <= t < self.end_time


@dataclass(frozen=True)
class Sequence:
    pulses: tuple[Pulse, ...]

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        for prev, nxt in zip(self.pulses, self.pulses[1:]):
            if not nxt.start_time > prev.start_time:
                raise ValueError("pulse start times must increase")
            if not math.isclose(nxt.start_time, prev.end_time, rel_tol=1e-12, abs_tol=1e-12):
                raise ValueError("pulses must be contiguous")

    @property
    def total_duration(self) -> float:
        return sum(pl.duration for pl in self.pulses)

    def pulse_at(self, t: float) -> Pulse | None:
        for pl in self.pulses:
            if pl.active(t):
                return pl
        return None

    @classmethod
    def contiguous(cls, specs, amplitude: float, start: float = 0.0) -> "Sequence":
        """Build back-to-back pulses from ``(frequency, phase, angle)`` triples."""
        pulses = []
        t = start
        for frequency, phase, angle in specs:
            pl = Pulse(frequency, phase, angle, amplitude, t)
            pulses.append(pl)
            t = pl.end_time
        return cls(tuple(pulses))


def resonance_frequency(p: SystemParams, i: int, j: int) -> float:
    """|E_i - E_j| for 1-based state labels differing in exactly one spin."""
    for label in (i, j):
        if not 1 <= label <= p.dim:
            raise ValueError(f"state label {label} outside 1..{p.dim}")
    if bin((i - 1) ^ (j - 1)).count("1") != 1:
        raise ValueError(f"states {i} and {j} must differ in exactly one spin")
    energy = h0_diagonal(p)
    return abs(energy[i - 1] - energy[j - 1])


def cnot_sequence(p: SystemParams, trailing_half_pi_pulses: float = 2.5) -> Sequence:
    """pi/2 on 1<->3, pi on 3<->4, then extra pi pulses at the 3<->4 line.

    A fractional trailing count shortens the final pulse proportionally.
    """
    if trailing_half_pi_pulses < 0:
        raise ValueError("trailing pulse count must be >= 0")
    if p.n_spins != 3:
        raise ValueError("the CNOT protocol is defined for three spins")
    w13 = resonance_frequency(p, 1, 3)
    w34 = resonance_frequency(p, 3, 4)
    specs = [(w13, 0.0, math.pi / 2), (w34, 0.0, math.pi)]
    whole = int(math.floor(trailing_half_pi_pulses))
    specs += [(w34, 0.0, math.pi)] * whole
    rest = trailing_half_pi_pulses - whole
    if rest > 1e-12:
        specs.append((w34, 0.0, math.pi * rest))
    return Sequence.contiguous(specs, p.rabi)


def two_pi_k_rabi(detuning: float, k: int) -> float:
    """Rabi amplitude making a transition detuned by ``detuning`` complete k full
    cycles during a resonant pi pulse: Omega = detuning / sqrt(4k^2 - 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return abs(detuning) / math.sqrt(4 * k * k - 1)
