"""Dense operator algebra on the 2**N dimensional spin register.

Basis convention: spin A (site 1) is the most significant bit, so the
register state ``|a b c>`` has index ``4a + 2b + c`` and display label
``index + 1``.  Bit value 0 has ``S^z = +1/2``.
"""
from __future__ import annotations

from functools import reduce

import numpy as np

_SINGLE = {
    "z": np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex),
    # S^+ |1> = |0>,  S^- |0> = |1>
    "plus": np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex),
    "minus": np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex),
}


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_shape(a, b)
    return a @ b - b @ a


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conjugate(np.transpose(a))


def trace(a: np.ndarray) -> complex:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))


def allclose(a: np.ndarray, b: np.ndarray, atol: float) -> bool:
    """Entry-wise equality within an absolute tolerance (no relative part)."""
    _check_same_shape(a, b)
    return bool(np.max(np.abs(a - b), initial=0.0) <= atol)


def spin_operator(kind: str, k: int, n_spins: int) -> np.ndarray:
    """Embed a single-spin operator at site ``k`` (1-based) of an N-spin chain.

    ``kind`` is one of ``"z"``, ``"plus"``, ``"minus"``.
    """
    if kind not in _SINGLE:
        raise ValueError(f"unknown spin operator kind {kind!r}")
    if n_spins < 1:
        raise ValueError("n_spins must be positive")
    if not 1 <= k <= n_spins:
        raise ValueError(f"site index {k} outside 1..{n_spins}")
    eye = np.eye(2, dtype=complex)
    factors = [_SINGLE[kind] if site == k else eye for site in range(1, n_spins + 1)]
    return reduce(np.kron, factors)


def bit_of(index: int, k: int, n_spins: int) -> int:
    """Bit value of spin ``k`` (1-based, A = 1) in basis state ``index``."""
    return (index >> (n_spins - k)) & 1


def flip_bit(index: int, k: int, n_spins: int) -> int:
    return index ^ (1 << (n_spins - k))


def basis_bits(index: int, n_spins: int) -> tuple[int, ...]:
    if not 0 <= index < 2**n_spins:
        raise ValueError(f"basis index {index} out of range for {n_spins} spins")
    return tuple(bit_of(index, k, n_spins) for k in range(1, n_spins + 1))


def basis_index(bits) -> int:
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bits must be 0/1, got {bits!r}")
        idx = (idx << 1) | b
    return idx


def basis_label(index: int, n_spins: int) -> str:
    """Ket label such as ``|010>`` for index 2."""
    return "|" + "".join(str(b) for b in basis_bits(index, n_spins)) + ">"


def projector(index: int, dim: int) -> np.ndarray:
    out = np.zeros((dim, dim), dtype=complex)
    out[index, index] = 1.0
    return out
