"""Scalar figures of merit for a density matrix."""
from __future__ import annotations

import numpy as np


def purity(rho: np.ndarray) -> float:
    """tr(rho^2)."""
    value = np.einsum("ij,ji->", rho, rho)
    if abs(value.imag) > 1e-12:
        raise ValueError(f"purity has imaginary residue {value.imag:.3g}; rho not Hermitian")
    return float(value.real)


def cnot_state_error(rho: np.ndarray) -> float:
    """Phase-insensitive distance to rho_11 = rho_44 = |rho_14| = 1/2."""
    return float(max(abs(rho[0, 0].real - 0.5), abs(rho[3, 3].real - 0.5),
                     abs(abs(rho[0, 3]) - 0.5)))
