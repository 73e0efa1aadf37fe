"""Hand-transcribed element-wise equations for the three-spin chain.

Two tables are transcribed entry by entry, upper triangle only:

* ``VN`` gives ``[H, rho]_ab`` for H = H0 + H_rf (the drive enters through
  ``e = exp(i(w t + phi))``); ``d rho/dt`` gets ``-i`` times it.
* ``DISSIPATION`` gives the dissipator ``L(rho)_ab`` in terms of the
  state-indexed rates ``g(k, i)``, ``gd(k, i)`` and the coherence-transfer
  phases ``ph(k, a, b)``.

Entries are written exactly as published, slips included.  Entries known to
be wrong are listed in ``CORRECTIONS`` with a corrected expression, so the
report can show both.  Nothing here is derived from the operator code, which
is what makes the comparison meaningful.

Phase labels: the published table writes the phase multiplying ``rho_nm`` as
``gamma^(mn)`` for absorption and ``gamma^(nm)`` for emission, which is the
complex conjugate of ``exp(i(Omega^(m) - Omega^(n)) t)`` as defined for the
master equation.  ``PHASE_CONVENTIONS`` makes the reading explicit.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedError
from .model import RateTable, SystemParams

A, B, C = 0, 1, 2

PHASE_CONVENTIONS = {
    # table label (a, b) -> exp(sign * i (Omega_k^(a) - Omega_k^(b)) t)
    "table": -1.0,
    "literal": +1.0,
}


class _Ctx:
    """Lookup helpers with the 1-based labels used by the tables."""

    def __init__(self, rho, t, p: SystemParams, drive, rates: RateTable | None,
                 phase_sign: float, markovian: bool):
        self.rho = rho
        self.t = t
        self.wA, self.wB, self.wC = p.omega
        self.J, self.Jp = p.j1, p.j2
        freq, phase, amp = drive
        self.W = 0.5 * amp
        self.e = complex(np.exp(1j * (freq * t + phase)))
        self.ec = self.e.conjugate()
        self.rates = rates
        self.phase_sign = phase_sign
        self.markovian = markovian

    def r(self, i, j):
        return self.rho[i - 1, j - 1]

    def g(self, k, i):
        if self.markovian:
            return self.rates.markov_emit[k]
        return self.rates.emit[k, i - 1]

    def gd(self, k, i):
        if self.markovian:
            return self.rates.markov_absorb[k]
        return self.rates.absorb[k, i - 1]

    def ph(self, k, a, b):
        if self.markovian:
            return 1.0
        om = self.rates.omega_eig[k]
        return complex(np.exp(self.phase_sign * 1j * (om[a - 1] - om[b - 1]) * self.t))


# ---------------------------------------------------------------- (vN) table
# key: (alpha, beta) -> (equation tag, expression)

VN = {
    (1, 1): ("V1", lambda c: -c.W * c.e * (c.r(2, 1) + c.r(3, 1) + c.r(5, 1))
             + c.W * c.ec * (c.r(1, 2) + c.r(1, 3) + c.r(1, 5))),
    (1, 2): ("V2", lambda c: -(c.wC - c.J / 2 - c.Jp / 2) * c.r(1, 2)
             - c.W * c.e * (c.r(2, 2) + c.r(3, 2) + c.r(5, 2) - c.r(1, 1))
             + c.W * c.ec * (c.r(1, 4) + c.r(1, 6))),
    (1, 3): ("V3", lambda c: -(c.wB - c.J) * c.r(1, 3)
             - c.W * c.e * (c.r(2, 3) + c.r(3, 3) + c.r(5, 3) - c.r(1, 1))
             + c.W * c.ec * (c.r(1, 4) + c.r(1, 7))),
    (1, 4): ("V4", lambda c: -(c.wB + c.wC - c.J / 2 - c.Jp / 2) * c.r(1, 4)
             - c.W * c.e * (c.r(2, 4) + c.r(3, 4) + c.r(5, 4) - c.r(1, 2) - c.r(1, 3))
             + c.W * c.ec * c.r(1, 8)),
    (1, 5): ("V5", lambda c: -(c.wA - c.J / 2 - c.Jp / 2) * c.r(1, 5)
             - c.W * c.e * (c.r(2, 5) + c.r(3, 5) + c.r(5, 5) - c.r(1, 1))
             + c.W * c.ec * (c.r(1, 7) + c.r(1, 6))),
    (1, 6): ("V6", lambda c: -(c.wA + c.wC - c.J) * c.r(1, 6)
             - c.W * c.e * (c.r(2, 6) + c.r(3, 6) + c.r(5, 6) - c.r(1, 2) - c.r(1, 5))
             + c.W * c.ec * c.r(1, 8)),
    (1, 7): ("V7", lambda c: -(c.wA + c.wB - c.J / 2 - c.Jp / 2) * c.r(1, 7)
             - c.W * c.e * (c.r(2, 7) + c.r(3, 7) + c.r(5, 7) - c.r(1, 3) - c.r(1, 5))
             + c.W * c.ec * c.r(1, 8)),
    (1, 8): ("V8", lambda c: -(c.wA + c.wB + c.wC) * c.r(1, 8)
             - c.W * c.e * (c.r(2, 8) + c.r(3, 8) + c.r(5, 8)
                            - c.r(1, 4) - c.r(1, 6) - c.r(1, 7))),
    (2, 2): ("V9", lambda c: -c.W * c.e * (c.r(4, 2) + c.r(6, 2) - c.r(2, 1))
             + c.W * c.ec * (-c.r(1, 2) + c.r(2, 6) + c.r(2, 4))),
    (2, 3): ("V10", lambda c: -(c.wB - c.wC - c.J / 2 + c.Jp / 2) * c.r(2, 3)
             - c.W * c.e * (c.r(4, 3) + c.r(6, 3) - c.r(2, 1))
             + c.W * c.ec * (-c.r(1, 3) + c.r(2, 4) + c.r(2, 7))),
    (2, 4): ("V11", lambda c: -c.wB * c.r(2, 4)
             - c.W * c.e * (c.r(4, 4) + c.r(6, 4) - c.r(2, 2) - c.r(2, 3))
             + c.W * c.ec * (-c.r(1, 4) + c.r(2, 8))),
    (2, 5): ("V12", lambda c: -(c.wA - c.wC) * c.r(2, 5)
             - c.W * c.e * (c.r(4, 5) + c.r(6, 5) - c.r(2, 1))
             + c.W * c.ec * (-c.r(1, 5) + c.r(2, 7) + c.r(2, 6))),
    (2, 6): ("V13", lambda c: -(c.wA - c.J / 2 + c.Jp / 2) * c.r(2, 6)
             - c.W * c.e * (c.r(4, 6) + c.r(6, 6) - c.r(2, 2) - c.r(2, 5))
             + c.W * c.ec * (-c.r(1, 6) + c.r(2, 8))),
    (2, 7): ("V14", lambda c: -(c.wA + c.wB - c.wC) * c.r(2, 7)
             - c.W * c.e * (c.r(4, 7) + c.r(6, 7) - c.r(2, 3) - c.r(2, 5))
             + c.W * c.ec * (-c.r(1, 7) + c.r(2, 8))),
    (2, 8): ("V15", lambda c: -(c.wA + c.wB + c.J / 2 + c.Jp / 2) * c.r(2, 8)
             - c.W * c.e * (c.r(4, 8) + c.r(6, 8) - c.r(2, 4) - c.r(2, 6) - c.r(2, 7))
             + c.W * c.ec * (-c.r(1, 8))),
    (3, 3): ("V16", lambda c: -c.W * c.e * (c.r(4, 3) + c.r(7, 3) - c.r(3, 1))
             + c.W * c.ec * (-c.r(1, 3) + c.r(3, 4) + c.r(3, 7))),
    (3, 4): ("V17", lambda c: -(c.wC + c.J / 2 - c.Jp / 2) * c.r(3, 4)
             - c.W * c.e * (c.r(4, 4) + c.r(7, 4) - c.r(3, 2) - c.r(3, 3))
             + c.W * c.ec * (-c.r(1, 4) + c.r(3, 8))),
    (3, 5): ("V18", lambda c: -(c.wA - c.wB + c.J / 2 - c.Jp / 2) * c.r(3, 5)
             - c.W * c.e * (c.r(4, 5) + c.r(7, 5) - c.r(3, 1))
             + c.W * c.ec * (-c.r(1, 5) + c.r(3, 7) + c.r(3, 6))),
    (3, 6): ("V19", lambda c: -(c.wA - c.wB + c.wC) * c.r(3, 6)
             - c.W * c.e * (c.r(4, 6) + c.r(7, 6) - c.r(3, 2) - c.r(3, 5))
             + c.W * c.ec * (-c.r(1, 6) + c.r(3, 8))),
    (3, 7): ("V20", lambda c: -(c.wA + c.J / 2 - c.Jp / 2) * c.r(3, 7)
             - c.W * c.e * (c.r(4, 7) + c.r(7, 7) - c.r(3, 3) - c.r(3, 5))
             + c.W * c.ec * (-c.r(1, 7) + c.r(3, 8))),
    (3, 8): ("V21", lambda c: -(c.wA + c.wC + c.J) * c.r(3, 8)
             - c.W * c.e * (c.r(4, 8) + c.r(7, 8) - c.r(3, 4) - c.r(3, 6) - c.r(3, 7))
             + c.W * c.ec * (-c.r(1, 8))),
    (4, 4): ("V23", lambda c: -c.W * c.e * (c.r(8, 4) - c.r(4, 2) - c.r(4, 3))
             + c.W * c.ec * (-c.r(2, 4) - c.r(3, 4) + c.r(4, 8))),
    (4, 5): ("V24", lambda c: -(c.wA - c.wB - c.wC) * c.r(4, 5)
             - c.W * c.e * (c.r(8, 5) - c.r(4, 1))
             + c.W * c.ec * (-c.r(2, 5) - c.r(3, 5) + c.r(4, 7) + c.r(4, 6))),
    (4, 6): ("V25", lambda c: -(c.wA - c.wB - c.J / 2 + c.Jp / 2) * c.r(4, 6)
             - c.W * c.e * (c.r(8, 6) - c.r(4, 2) - c.r(4, 5))
             + c.W * c.ec * (-c.r(2, 6) - c.r(3, 6) + c.r(4, 8))),
    (4, 7): ("V26", lambda c: -(c.wA - c.wC) * c.r(4, 7)
             - c.W * c.e * (c.r(8, 7) - c.r(4, 3) - c.r(4, 5))
             + c.W * c.ec * (-c.r(2, 7) - c.r(3, 7) + c.r(4, 8))),
    (4, 8): ("V27", lambda c: -(c.wA + c.J / 2 + c.Jp / 2) * c.r(4, 8)
             - c.W * c.e * (c.r(8, 8) - c.r(4, 4) - c.r(4, 6) - c.r(4, 7))
             + c.W * c.ec * (-c.r(2, 8) - c.r(3, 8))),
    (5, 5): ("V28", lambda c: -c.W * c.e * (c.r(6, 5) + c.r(7, 5) - c.r(5, 1))
             + c.W * c.ec * (-c.r(1, 5) + c.r(5, 7) + c.r(5, 6))),
    (5, 6): ("V29", lambda c: -(c.wC - c.J / 2 + c.Jp / 2) * c.r(5, 6)
             - c.W * c.e * (c.r(6, 6) + c.r(7, 6) - c.r(5, 2) - c.r(5, 5))
             + c.W * c.ec * (-c.r(1, 6) + c.r(5, 8))),
    (5, 7): ("V30", lambda c: -c.wB * c.r(5, 7)
             - c.W * c.e * (c.r(6, 7) + c.r(7, 7) - c.r(5, 3) - c.r(5, 5))
             + c.W * c.ec * (-c.r(1, 7) + c.r(5, 8))),
    (5, 8): ("V31", lambda c: -(c.wB + c.wC + c.J / 2 + c.Jp / 2) * c.r(5, 8)
             - c.W * c.e * (c.r(6, 8) + c.r(7, 8) - c.r(5, 4) - c.r(5, 6) - c.r(5, 7))
             + c.W * c.ec * (-c.r(1, 8))),
    (6, 6): ("V32", lambda c: -c.W * c.e * (c.r(8, 6) - c.r(6, 2) - c.r(6, 5))
             + c.W * c.ec * (-c.r(2, 6) - c.r(5, 6) + c.r(6, 8))),
    (6, 7): ("V33", lambda c: -(c.wB - c.wC + c.J / 2 - c.Jp / 2) * c.r(6, 7)
             - c.W * c.e * (c.r(8, 7) - c.r(6, 3) - c.r(6, 5))
             + c.W * c.ec * (-c.r(2, 7) - c.r(5, 7) + c.r(6, 8))),
    (6, 8): ("V34", lambda c: -(c.wB + c.J) * c.r(6, 8)
             - c.W * c.e * (c.r(8, 8) - c.r(6, 4) - c.r(6, 6) - c.r(6, 7))
             + c.W * c.ec * (-c.r(2, 8) - c.r(5, 8))),
    (7, 7): ("V35", lambda c: -c.W * c.e * (c.r(8, 7) - c.r(7, 3) - c.r(7, 5))
             + c.W * c.ec * (-c.r(3, 7) - c.r(5, 7) + c.r(7, 8))),
    (7, 8): ("V36", lambda c: -(c.wC + c.J / 2 + c.Jp / 2) * c.r(7, 8)
             - c.W * c.e * (c.r(8, 8) - c.r(7, 4) - c.r(7, 6) - c.r(7, 7))
             + c.W * c.ec * (-c.r(3, 8) - c.r(5, 8))),
    (8, 8): ("V37", lambda c: -c.W * c.e * (-c.r(8, 4) - c.r(8, 6) - c.r(8, 7))
             + c.W * c.ec * (-c.r(4, 8) - c.r(6, 8) - c.r(7, 8))),
}


# -------------------------------------------------------- dissipation table

def _h(x, y):
    return 0.5 * (x + y)


DISSIPATION = {
    (1, 1): lambda c: -(c.g(A, 1) + c.g(B, 1) + c.g(C, 1)) * c.r(1, 1)
    + c.gd(A, 1) * c.r(5, 5) + c.gd(B, 1) * c.r(3, 3) + c.gd(C, 1) * c.r(2, 2),
    (1, 2): lambda c: -(_h(c.g(A, 1), c.g(A, 2)) + _h(c.g(B, 1), c.g(B, 2))
                        + _h(c.g(C, 1), c.gd(C, 2))) * c.r(1, 2)
    + _h(c.gd(A, 1), c.gd(A, 2)) * c.ph(A, 6, 5) * c.r(5, 6)
    + _h(c.gd(B, 1), c.gd(B, 2)) * c.ph(B, 4, 3) * c.r(3, 4),
    (1, 3): lambda c: -(_h(c.g(A, 1), c.g(A, 3)) + _h(c.g(B, 1), c.gd(B, 3))
                        + _h(c.g(C, 1), c.g(C, 3))) * c.r(1, 3)
    + _h(c.gd(A, 1), c.gd(A, 3)) * c.ph(A, 7, 5) * c.r(5, 7)
    + _h(c.gd(C, 1), c.gd(C, 3)) * c.ph(C, 4, 2) * c.r(2, 4),
    (1, 4): lambda c: -(_h(c.g(A, 1), c.g(A, 4)) + _h(c.g(B, 1), c.gd(B, 4))
                        + _h(c.g(C, 1), c.gd(C, 4))) * c.r(1, 4)
    + _h(c.gd(A, 1), c.gd(A, 4)) * c.ph(A, 8, 5) * c.r(5, 8),
    (1, 5): lambda c: -(_h(c.g(A, 1), c.gd(A, 5)) + _h(c.g(B, 1), c.g(B, 5))
                        + _h(c.g(C, 1), c.g(C, 5))) * c.r(1, 5)
    + _h(c.gd(B, 1), c.gd(B, 5)) * c.ph(B, 7, 3) * c.r(3, 7)
    + _h(c.gd(C, 1), c.gd(C, 6)) * c.ph(C, 6, 2) * c.r(2, 6),
    (1, 6): lambda c: -(_h(c.g(A, 1), c.gd(A, 6)) + _h(c.g(B, 1), c.g(B, 6))
                        + _h(c.g(C, 1), c.gd(C, 6))) * c.r(1, 6)
    + _h(c.gd(B, 1), c.gd(B, 6)) * c.ph(B, 8, 3) * c.r(3, 8),
    (1, 7): lambda c: -(_h(c.g(A, 1), c.gd(A, 7)) + _h(c.g(B, 1), c.gd(B, 7))
                        + _h(c.g(C, 1), c.g(C, 7))) * c.r(1, 7)
    + _h(c.gd(C, 1), c.gd(C, 7)) * c.ph(C, 8, 2) * c.r(2, 8),
    (1, 8): lambda c: -(_h(c.g(A, 1), c.gd(A, 8)) + _h(c.g(B, 1), c.gd(B, 8))
                        + _h(c.g(C, 1), c.gd(C, 8))) * c.r(1, 8),
    (2, 2): lambda c: -(c.g(A, 2) + c.g(B, 2) + c.gd(C, 2)) * c.r(2, 2)
    + c.gd(A, 2) * c.r(6, 6) + c.gd(B, 2) * c.r(4, 4) + c.g(C, 2) * c.r(1, 1),
    (2, 3): lambda c: -(_h(c.g(A, 2), c.g(A, 3)) + _h(c.g(B, 2), c.gd(B, 3))
                        + _h(c.g(C, 2), c.gd(C, 3))) * c.r(2, 3)
    + _h(c.gd(A, 2), c.gd(A, 3)) * c.ph(A, 7, 6) * c.r(6, 7),
    (2, 4): lambda c: -(_h(c.g(A, 2), c.g(A, 4)) + _h(c.g(B, 2), c.gd(B, 4))
                        + _h(c.gd(C, 2), c.gd(C, 4))) * c.r(2, 4)
    + _h(c.gd(A, 2), c.gd(A, 4)) * c.ph(A, 8, 6) * c.r(6, 8)
    + _h(c.gd(C, 2), c.g(C, 4)) * c.ph(C, 1, 3) * c.r(1, 3),
    (2, 5): lambda c: -(_h(c.g(A, 2), c.gd(A, 5)) + _h(c.g(B, 2), c.g(B, 5))
                        + _h(c.gd(C, 2), c.g(C, 5))) * c.r(2, 5)
    + _h(c.gd(B, 2), c.gd(B, 5)) * c.ph(B, 7, 4) * c.r(4, 7),
    (2, 6): lambda c: -(_h(c.g(A, 2), c.gd(A, 6)) + _h(c.g(B, 2), c.g(B, 6))
                        + _h(c.gd(C, 2), c.gd(C, 6))) * c.r(2, 6)
    + _h(c.gd(B, 2), c.gd(B, 6)) * c.ph(B, 8, 4) * c.r(4, 8)
    + _h(c.g(C, 2), c.g(C, 6)) * c.ph(C, 1, 5) * c.r(1, 5),
    (2, 7): lambda c: -(_h(c.g(A, 2), c.gd(A, 7)) + _h(c.g(B, 2), c.gd(B, 7))
                        + _h(c.gd(C, 2), c.g(C, 7))) * c.r(2, 7),
    (2, 8): lambda c: -(_h(c.g(A, 2), c.gd(A, 8)) + _h(c.g(B, 2), c.gd(B, 8))
                        + _h(c.gd(C, 2), c.gd(C, 8))) * c.r(2, 8)
    + _h(c.g(C, 2), c.g(C, 8)) * c.ph(A, 1, 7) * c.r(1, 7),
    (3, 3): lambda c: -(c.g(A, 3) + c.gd(B, 3) + c.g(C, 3)) * c.r(3, 3)
    + c.gd(A, 3) * c.r(7, 7) + c.g(B, 3) * c.r(1, 1) + c.gd(C, 3) * c.r(4, 4),
    (3, 4): lambda c: -(_h(c.g(A, 3), c.g(A, 4)) + _h(c.gd(B, 3), c.gd(B, 4))
                        + _h(c.g(C, 3), c.gd(C, 4))) * c.r(3, 4)
    + _h(c.gd(A, 3), c.gd(A, 4)) * c.ph(A, 8, 7) * c.r(7, 8)
    + _h(c.gd(B, 3), c.gd(A, 4)) * c.ph(B, 1, 2) * c.r(1, 2),
    (3, 5): lambda c: -(_h(c.g(A, 3), c.gd(A, 5)) + _h(c.gd(B, 3), c.g(B, 5))
                        + _h(c.g(C, 3), c.g(C, 5))) * c.r(3, 5)
    + _h(c.gd(C, 3), c.gd(C, 5)) * c.ph(A, 6, 4) * c.r(4, 6),
    (3, 6): lambda c: -(_h(c.g(A, 3), c.gd(A, 6)) + _h(c.gd(B, 3), c.g(B, 6))
                        + _h(c.g(C, 3), c.gd(C, 6))) * c.r(3, 6),
    (3, 7): lambda c: -(_h(c.g(A, 3), c.gd(A, 7)) + _h(c.gd(B, 3), c.gd(B, 7))
                        + _h(c.g(C, 3), c.g(C, 7))) * c.r(3, 7)
    + _h(c.g(B, 3), c.g(B, 7)) * c.ph(B, 1, 5) * c.r(1, 5)
    + _h(c.gd(C, 3), c.gd(C, 7)) * c.ph(C, 8, 4) * c.r(4, 8),
    (3, 8): lambda c: -(_h(c.g(A, 3), c.gd(A, 8)) + _h(c.gd(B, 3), c.gd(B, 8))
                        + _h(c.g(C, 3), c.gd(C, 8))) * c.r(3, 8)
    + _h(c.gd(B, 3), c.gd(B, 8)) * c.ph(B, 1, 6) * c.r(1, 6),
    (4, 4): lambda c: -(c.g(A, 4) + c.gd(B, 4) + c.gd(C, 4)) * c.r(4, 4)
    + c.gd(A, 4) * c.r(8, 8) + c.g(B, 4) * c.r(2, 2) + c.g(C, 4) * c.r(3, 3),
    (4, 5): lambda c: -(_h(c.g(A, 4), c.gd(A, 5)) + _h(c.gd(B, 4), c.g(B, 5))
                        + _h(c.gd(C, 4), c.g(C, 5))) * c.r(4, 5),
    (4, 6): lambda c: -(_h(c.g(A, 4), c.gd(A, 6)) + _h(c.gd(B, 4), c.g(B, 6))
                        + _h(c.gd(C, 4), c.gd(C, 6))) * c.r(4, 6)
    + _h(c.g(C, 4), c.g(C, 6)) * c.ph(C, 3, 5) * c.r(3, 5),
    (4, 7): lambda c: -(_h(c.g(A, 4), c.gd(A, 7)) + _h(c.gd(B, 4), c.gd(B, 7))
                        + _h(c.gd(C, 4), c.g(C, 7))) * c.r(4, 7)
    + _h(c.g(B, 4), c.g(B, 7)) * c.ph(B, 2, 5) * c.r(2, 5),
    (4, 8): lambda c: -(_h(c.g(A, 4), c.gd(A, 8)) + _h(c.gd(B, 4), c.gd(B, 8))
                        + _h(c.gd(C, 4), c.gd(C, 8))) * c.r(4, 8)
    + _h(c.g(B, 4), c.g(B, 8)) * c.ph(B, 2, 6) * c.r(2, 6)
    + _h(c.g(C, 4), c.g(C, 8)) * c.ph(C, 3, 7) * c.r(3, 7),
    (5, 5): lambda c: -(c.gd(A, 5) + c.g(B, 5) + c.g(C, 5)) * c.r(5, 5)
    + c.g(A, 5) * c.r(1, 1) + c.gd(B, 5) * c.r(7, 7) + c.gd(C, 5) * c.r(6, 6),
    (5, 6): lambda c: -(_h(c.gd(A, 5), c.gd(A, 6)) + _h(c.g(B, 5), c.g(B, 6))
                        + _h(c.g(C, 5), c.gd(C, 6))) * c.r(5, 6)
    + _h(c.g(A, 5), c.g(A, 6)) * c.ph(A, 1, 2) * c.r(1, 2)
    + _h(c.gd(B, 5), c.gd(B, 6)) * c.ph(B, 8, 7) * c.r(7, 8),
    (5, 7): lambda c: -(_h(c.gd(A, 5), c.gd(A, 7)) + _h(c.gd(B, 5), c.gd(B, 7))
                        + _h(c.g(C, 5), c.g(C, 7))) * c.r(5, 7)
    + _h(c.g(A, 5), c.g(A, 7)) * c.ph(A, 1, 3) * c.r(1, 3)
    + _h(c.gd(C, 5), c.gd(C, 7)) * c.ph(C, 8, 6) * c.r(6, 8),
    (5, 8): lambda c: -(_h(c.gd(A, 5), c.gd(A, 8)) + _h(c.g(B, 5), c.gd(B, 8))
                        + _h(c.g(C, 5), c.gd(C, 8))) * c.r(5, 8)
    + _h(c.g(A, 5), c.g(A, 8)) * c.ph(A, 1, 4) * c.r(1, 4),
    (6, 6): lambda c: -(c.gd(A, 6) + c.g(B, 6) + c.gd(C, 6)) * c.r(6, 6)
    + c.g(A, 6) * c.r(2, 2) + c.gd(B, 6) * c.r(8, 8) + c.g(C, 6) * c.r(5, 5),
    (6, 7): lambda c: -(_h(c.gd(A, 6), c.gd(A, 7)) + _h(c.g(B, 6), c.gd(B, 7))
                        + _h(c.g(C, 6), c.gd(C, 7))) * c.r(6, 7)
    + _h(c.g(A, 6), c.g(A, 7)) * c.ph(A, 2, 3) * c.r(2, 3),
    (6, 8): lambda c: -(_h(c.gd(A, 6), c.gd(A, 8)) + _h(c.gd(B, 6), c.gd(B, 8))
                        + _h(c.gd(C, 6), c.gd(C, 8))) * c.r(6, 8)
    + _h(c.g(A, 6), c.g(A, 8)) * c.ph(A, 2, 4) * c.r(2, 4)
    + _h(c.g(C, 6), c.g(C, 8)) * c.ph(C, 5, 7) * c.r(5, 7),
    (7, 7): lambda c: -(c.gd(A, 7) + c.gd(B, 7) + c.g(C, 7)) * c.r(7, 7)
    + c.g(A, 7) * c.r(3, 3) + c.g(B, 7) * c.r(5, 5) + c.gd(C, 7) * c.r(8, 8),
    (7, 8): lambda c: -(_h(c.gd(A, 7), c.gd(A, 8)) + _h(c.gd(B, 7), c.gd(B, 8))
                        + _h(c.g(C, 3), c.gd(C, 8))) * c.r(7, 8)
    + _h(c.g(A, 7), c.g(A, 8)) * c.ph(A, 3, 4) * c.r(3, 4)
    + _h(c.g(B, 7), c.g(B, 8)) * c.ph(B, 5, 6) * c.r(5, 6),
    (8, 8): lambda c: -(c.gd(A, 8) + c.gd(B, 8) + c.gd(C, 8)) * c.r(8, 8)
    + c.g(A, 8) * c.r(4, 4) + c.g(B, 8) * c.r(6, 6) + c.g(C, 8) * c.r(7, 7),
}



@dataclass(frozen=True)
class Correction:
    citation: str
    issue: str
    expr: object = field(repr=False)
    benign: bool = False


CORRECTIONS = {
    (1, 5): Correction(
        "dissipation table, L rho_15, spin-C gain term",
        "rate label gamma^dag(6)_C where gamma^dag(5)_C is expected; equal values "
        "since Omega_C^(5) = Omega_C^(6)",
        lambda c: -(_h(c.g(A, 1), c.gd(A, 5)) + _h(c.g(B, 1), c.g(B, 5))
                    + _h(c.g(C, 1), c.g(C, 5))) * c.r(1, 5)
        + _h(c.gd(B, 1), c.gd(B, 5)) * c.ph(B, 7, 3) * c.r(3, 7)
        + _h(c.gd(C, 1), c.gd(C, 5)) * c.ph(C, 6, 2) * c.r(2, 6),
        benign=True),
    (2, 3): Correction(
        "dissipation table, L rho_23, decay bracket",
        "spin-C loss written (gamma^(2)_C + gamma^dag(3)_C)/2; state 2 has C=1 and "
        "state 3 has C=0, so (gamma^dag(2)_C + gamma^(3)_C)/2",
        lambda c: -(_h(c.g(A, 2), c.g(A, 3)) + _h(c.g(B, 2), c.gd(B, 3))
                    + _h(c.gd(C, 2), c.g(C, 3))) * c.r(2, 3)
        + _h(c.gd(A, 2), c.gd(A, 3)) * c.ph(A, 7, 6) * c.r(6, 7)),
    (2, 4): Correction(
        "dissipation table, L rho_24, spin-C gain term",
        "emission gain from rho_13 weighted by (gamma^dag(2)_C + gamma^(4)_C)/2; "
        "expected (gamma^(2)_C + gamma^(4)_C)/2",
        lambda c: -(_h(c.g(A, 2), c.g(A, 4)) + _h(c.g(B, 2), c.gd(B, 4))
                    + _h(c.gd(C, 2), c.gd(C, 4))) * c.r(2, 4)
        + _h(c.gd(A, 2), c.gd(A, 4)) * c.ph(A, 8, 6) * c.r(6, 8)
        + _h(c.g(C, 2), c.g(C, 4)) * c.ph(C, 1, 3) * c.r(1, 3)),
    (2, 8): Correction(
        "dissipation table, L rho_28, spin-C gain term",
        "phase written gamma^(17)_A(t) for a spin-C transfer; expected gamma^(17)_C(t)",
        lambda c: -(_h(c.g(A, 2), c.gd(A, 8)) + _h(c.g(B, 2), c.gd(B, 8))
                    + _h(c.gd(C, 2), c.gd(C, 8))) * c.r(2, 8)
        + _h(c.g(C, 2), c.g(C, 8)) * c.ph(C, 1, 7) * c.r(1, 7)),
    (3, 4): Correction(
        "dissipation table, L rho_34, spin-B gain term",
        "emission gain from rho_12 weighted by (gamma^dag(3)_B + gamma^dag(4)_A)/2; "
        "expected (gamma^(3)_B + gamma^(4)_B)/2 (spin label and dagger)",
        lambda c: -(_h(c.g(A, 3), c.g(A, 4)) + _h(c.gd(B, 3), c.gd(B, 4))
                    + _h(c.g(C, 3), c.gd(C, 4))) * c.r(3, 4)
        + _h(c.gd(A, 3), c.gd(A, 4)) * c.ph(A, 8, 7) * c.r(7, 8)
        + _h(c.g(B, 3), c.g(B, 4)) * c.ph(B, 1, 2) * c.r(1, 2)),
    (3, 5): Correction(
        "dissipation table, L rho_35, spin-C gain term",
        "phase written gamma^(64)_A(t) for a spin-C transfer; expected gamma^(64)_C(t)",
        lambda c: -(_h(c.g(A, 3), c.gd(A, 5)) + _h(c.gd(B, 3), c.g(B, 5))
                    + _h(c.g(C, 3), c.g(C, 5))) * c.r(3, 5)
        + _h(c.gd(C, 3), c.gd(C, 5)) * c.ph(C, 6, 4) * c.r(4, 6)),
    (3, 8): Correction(
        "dissipation table, L rho_38, spin-B gain term",
        "emission gain from rho_16 weighted by (gamma^dag(3)_B + gamma^dag(8)_B)/2; "
        "expected (gamma^(3)_B + gamma^(8)_B)/2",
        lambda c: -(_h(c.g(A, 3), c.gd(A, 8)) + _h(c.gd(B, 3), c.gd(B, 8))
                    + _h(c.g(C, 3), c.gd(C, 8))) * c.r(3, 8)
        + _h(c.g(B, 3), c.g(B, 8)) * c.ph(B, 1, 6) * c.r(1, 6)),
    (5, 7): Correction(
        "dissipation table, L rho_57, decay bracket",
        "spin-B loss written (gamma^dag(5)_B + gamma^dag(7)_B)/2; state 5 has B=0, "
        "so (gamma^(5)_B + gamma^dag(7)_B)/2",
        lambda c: -(_h(c.gd(A, 5), c.gd(A, 7)) + _h(c.g(B, 5), c.gd(B, 7))
                    + _h(c.g(C, 5), c.g(C, 7))) * c.r(5, 7)
        + _h(c.g(A, 5), c.g(A, 7)) * c.ph(A, 1, 3) * c.r(1, 3)
        + _h(c.gd(C, 5), c.gd(C, 7)) * c.ph(C, 8, 6) * c.r(6, 8)),
    (6, 7): Correction(
        "dissipation table, L rho_67, decay bracket",
        "spin-C loss written (gamma^(6)_C + gamma^dag(7)_C)/2; state 6 has C=1 and "
        "state 7 has C=0, so (gamma^dag(6)_C + gamma^(7)_C)/2",
        lambda c: -(_h(c.gd(A, 6), c.gd(A, 7)) + _h(c.g(B, 6), c.gd(B, 7))
                    + _h(c.gd(C, 6), c.g(C, 7))) * c.r(6, 7)
        + _h(c.g(A, 6), c.g(A, 7)) * c.ph(A, 2, 3) * c.r(2, 3)),
    (6, 8): Correction(
        "dissipation table, L rho_68, decay bracket",
        "spin-B loss written (gamma^dag(6)_B + gamma^dag(8)_B)/2; state 6 has B=0, "
        "so (gamma^(6)_B + gamma^dag(8)_B)/2",
        lambda c: -(_h(c.gd(A, 6), c.gd(A, 8)) + _h(c.g(B, 6), c.gd(B, 8))
                    + _h(c.gd(C, 6), c.gd(C, 8))) * c.r(6, 8)
        + _h(c.g(A, 6), c.g(A, 8)) * c.ph(A, 2, 4) * c.r(2, 4)
        + _h(c.g(C, 6), c.g(C, 8)) * c.ph(C, 5, 7) * c.r(5, 7)),
    (7, 8): Correction(
        "dissipation table, L rho_78, decay bracket",
        "spin-C loss written with gamma^(3)_C; the element involves state 7, so "
        "gamma^(7)_C (Omega_C^(3) differs from Omega_C^(7) by J')",
        lambda c: -(_h(c.gd(A, 7), c.gd(A, 8)) + _h(c.gd(B, 7), c.gd(B, 8))
                    + _h(c.g(C, 7), c.gd(C, 8))) * c.r(7, 8)
        + _h(c.g(A, 7), c.g(A, 8)) * c.ph(A, 3, 4) * c.r(3, 4)
        + _h(c.g(B, 7), c.g(B, 8)) * c.ph(B, 5, 6) * c.r(5, 6)),
}


def _fill(table_values: dict, dim: int = 8) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    for (i, j), value in table_values.items():
        out[i - 1, j - 1] = value
        if i != j:
            out[j - 1, i - 1] = np.conj(value)
    return out


def _require_three(p: SystemParams) -> None:
    if p.n_spins != 3:
        raise UnsupportedError("the transcribed tables exist for three spins only")


def _drive(pulse):
    if pulse is None:
        return (0.0, 0.0, 0.0)
    return (pulse.frequency, pulse.phase, pulse.amplitude)


def vn_table(rho, t, pulse, p: SystemParams) -> dict:
    """The (vN) entries ``[H, rho]_ab`` as transcribed, upper triangle."""
    _require_three(p)
    ctx = _Ctx(np.asarray(rho), t, p, _drive(pulse), None, 1.0, False)
    return {key: complex(expr(ctx)) for key, (_, expr) in VN.items()}


def oracle_vn_rhs(rho, t, pulse, p: SystemParams) -> np.ndarray:
    """Unitary part of d rho/dt: -i times the (vN) table, conjugate-closed.

    The table itself is anti-Hermitian, so the closure is applied after the
    factor -i, on the Hermitian d rho/dt.
    """
    upper = {key: -1j * value for key, value in vn_table(rho, t, pulse, p).items()}
    return _fill(upper)


def dissipation_table(rho, t, rates: RateTable, p: SystemParams, *,
                      phase_convention: str = "table", markovian: bool = False,
                      corrected: bool = False) -> dict:
    _require_three(p)
    sign = PHASE_CONVENTIONS[phase_convention]
    ctx = _Ctx(np.asarray(rho), t, p, (0.0, 0.0, 0.0), rates, sign, markovian)
    out = {}
    for key, expr in DISSIPATION.items():
        if corrected and key in CORRECTIONS:
            expr = CORRECTIONS[key].expr
        out[key] = complex(expr(ctx))
    return out


def oracle_dissipator_rhs(rho, t, rates: RateTable, p: SystemParams, *,
                          phase_convention: str = "table", markovian: bool = False,
                          corrected: bool = False) -> np.ndarray:
    """Dissipative part of d rho/dt from the transcribed table.

    With ``markovian`` all phases are 1 and the state-indexed rates are
    replaced by the bare-Larmor scalars.  With ``corrected`` the entries in
    ``CORRECTIONS`` use their repaired expressions.
    """
    return _fill(dissipation_table(rho, t, rates, p, phase_convention=phase_convention,
                                   markovian=markovian, corrected=corrected))


def oracle_rhs(rho, t, pulse, rates, p, *, markovian=False, corrected=True,
               phase_convention="table") -> np.ndarray:
    return oracle_vn_rhs(rho, t, pulse, p) + oracle_dissipator_rhs(
        rho, t, rates, p, phase_convention=phase_convention, markovian=markovian,
        corrected=corrected)


# ------------------------------------------------------------------ report

REPORT_TOL = 1e-10
REPORT_BATHS = ((0.0, "T=0 K"), (300.0, "T=300 K"), (0.01, "T=0.01 K"))
REPORT_FIELDS = ("element", "term", "max_dev_as_written", "flagged", "max_dev_corrected",
                 "citation", "issue")


@dataclass
class OracleReport:
    n_samples: int
    seed: int
    rows: list = field(default_factory=list)
    literal_phase_max_dev: float = 0.0
    tolerance: float = REPORT_TOL

    def failures(self) -> list:
        bad = []
        for row in self.rows:
            dev = row["max_dev_corrected"] if row["flagged"] else row["max_dev_as_written"]
            if dev > self.tolerance:
                bad.append(row)
        return bad

    @property
    def passed(self) -> bool:
        return not self.failures()

    def flagged_rows(self) -> list:
        return [row for row in self.rows if row["flagged"]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            "Appendix oracle vs operator master equation",
            f"samples: {self.n_samples}  seed: {self.seed}  tolerance: {self.tolerance:g}",
            "phase labels read as the conjugate of exp(i(Omega^(a)-Omega^(b))t); "
            f"literal reading max deviation: {self.literal_phase_max_dev:.3e}",
            "",
        ]
        worst = {}
        for row in self.rows:
            if not row["flagged"]:
                worst[row["term"]] = max(worst.get(row["term"], 0.0), row["max_dev_as_written"])
        for term, dev in worst.items():
            lines.append(f"  {term:<7} unflagged max deviation {dev:.3e}")
        lines.append("")
        lines.append("flagged entries (as written -> corrected):")
        for row in self.flagged_rows():
            lines.append(f"  {row['element']} [{row['term']}] {row['max_dev_as_written']:.3e}"
                         f" -> {row['max_dev_corrected']:.3e}  {row['citation']}: {row['issue']}")
        lines.append("")
        lines.append("RESULT: " + ("PASS" if self.passed else
                                   f"FAIL ({len(self.failures())} entries above tolerance)"))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"n_samples": self.n_samples, "seed": self.seed,
                           "tolerance": self.tolerance, "passed": self.passed,
                           "literal_phase_max_dev": self.literal_phase_max_dev,
                           "rows": self.rows}, indent=1, sort_keys=True)

    def write(self, directory, stem: str = "oracle_report") -> tuple:
        from pathlib import Path
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        text_path = directory / f"{stem}.txt"
        csv_path = directory / f"{stem}.csv"
        text_path.write_text(self.to_text(), encoding="utf-8")
        csv_path.write_text(self.to_csv(), encoding="utf-8")
        return text_path, csv_path


def random_density_matrix(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    """Hermitian, positive, unit-trace matrix from a complex Ginibre draw."""
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def run_discrepancy_report(n_samples: int = 100, seed: int = 0,
                           p: SystemParams | None = None,
                           gamma: float = 2 * math.pi * 0.1) -> OracleReport:
    """Compare operator and transcribed right-hand sides on random states."""
    from .dissipators import master_rhs, von_neumann
    from .model import BathParams, build_rate_table
    from .pulses import cnot_sequence

    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    p = SystemParams() if p is None else p
    _require_three(p)
    rng = np.random.default_rng(seed)
    tables = [build_rate_table(p, BathParams(temp, gamma)) for temp, _ in REPORT_BATHS]
    seq = cnot_sequence(p)
    pulses = (None,) + seq.pulses[:2]

    terms = ("vn", "quasi", "markov")
    raw = {term: np.zeros((8, 8)) for term in terms}
    fixed = {term: np.zeros((8, 8)) for term in terms}
    literal = 0.0
    for s in range(n_samples):
        rho = random_density_matrix(rng)
        t = float(rng.uniform(0.0, seq.total_duration))
        pulse = pulses[s % len(pulses)]
        rates = tables[s % len(tables)]
        vn_op = von_neumann(rho, t, pulse, p)
        vn_or = oracle_vn_rhs(rho, t, pulse, p)
        raw["vn"] = np.maximum(raw["vn"], np.abs(vn_or - vn_op))
        fixed["vn"] = raw["vn"].copy()
        op = {"quasi": master_rhs(rho, t, "quasi", pulse, p, rates),
              "markov": master_rhs(rho, t, "markov", pulse, p, rates)}
        for term in ("quasi", "markov"):
            mk = term == "markov"
            for corrected, store in ((False, raw), (True, fixed)):
                orc = vn_or + oracle_dissipator_rhs(rho, t, rates, p, markovian=mk,
                                                    corrected=corrected)
                store[term] = np.maximum(store[term], np.abs(orc - op[term]))
        lit = vn_or + oracle_dissipator_rhs(rho, t, rates, p, corrected=True,
                                            phase_convention="literal")
        literal = max(literal, float(np.max(np.abs(lit - op["quasi"]))))

    report = OracleReport(n_samples=n_samples, seed=seed, literal_phase_max_dev=literal)
    for store in (raw, fixed):
        for term in terms:
            # fold the lower triangle onto its upper partner
            store[term] = np.maximum(store[term], store[term].T)
    for term in terms:
        for (i, j) in sorted(VN):
            corr = CORRECTIONS.get((i, j)) if term != "vn" else None
            report.rows.append({
                "element": f"rho_{i}{j}",
                "term": term,
                "max_dev_as_written": float(raw[term][i - 1, j - 1]),
                "flagged": corr is not None,
                "max_dev_corrected": float(fixed[term][i - 1, j - 1]),
                "citation": corr.citation if corr else (VN[(i, j)][0] if term == "vn"
                                                        else f"dissipation table, L rho_{i}{j}"),
                "issue": corr.issue if corr else "",
            })
    return report
