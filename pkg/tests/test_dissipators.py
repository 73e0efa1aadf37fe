import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinchain_cnot.appendix_oracle import random_density_matrix
from spinchain_cnot.dissipators import (DissipatorMode, apply_markovian, apply_quasi,
                                        master_rhs, phase_modulated_state)
from spinchain_cnot.errors import StateError
from spinchain_cnot.model import (TWO_PI, BathParams, RateTable, SystemParams,
                                  build_rate_table, h0_diagonal)
from spinchain_cnot.pulses import cnot_sequence

P = SystemParams()
FREE = SystemParams(j1=0.0, j2=0.0)
TABLES = {temp: build_rate_table(P, BathParams(temp, TWO_PI * 0.1)) for temp in (0.0, 300.0, 0.01)}

seeds = st.integers(0, 2**32 - 1)
times = st.floats(0.0, 50.0, allow_nan=False)
temps = st.sampled_from(sorted(TABLES))


def state(seed):
    return random_density_matrix(np.random.default_rng(seed))


def basis(i):
    rho = np.zeros((8, 8), complex)
    rho[i, i] = 1
    return rho


def test_mode_parse():
    assert DissipatorMode.parse("markov") is DissipatorMode.MARKOVIAN
    assert DissipatorMode.parse(DissipatorMode.QUASI) is DissipatorMode.QUASI
    with pytest.raises(ValueError):
        DissipatorMode.parse("lindblad")


@given(seeds, times)
def test_phase_modulation_t0_and_diagonal(seed, t):
    rho = state(seed)
    r = TABLES[300.0]
    for k in (1, 2, 3):
        assert np.array_equal(phase_modulated_state(rho, k, 0.0, "emit", r), rho)
        d = phase_modulated_state(rho, k, t, "absorb", r)
        assert np.allclose(np.diag(d), np.diag(rho), atol=0)


@given(seeds, times)
def test_phase_modulation_trivial_without_coupling(seed, t):
    r = build_rate_table(FREE, BathParams(300.0, 1.0))
    rho = state(seed)
    for direction in ("emit", "absorb"):
        assert np.allclose(phase_modulated_state(rho, 2, t, direction, r), rho, atol=1e-15)


def test_phase_modulation_entry_convention():
    r = TABLES[0.0]
    rho = np.ones((8, 8), complex)
    t = 0.3
    w = r.omega_eig[2]
    d = phase_modulated_state(rho, 3, t, "emit", r)
    assert d[0, 2] == pytest.approx(np.exp(1j * (w[2] - w[0]) * t))
    d = phase_modulated_state(rho, 3, t, "absorb", r)
    assert d[0, 2] == pytest.approx(np.exp(1j * (w[0] - w[2]) * t))
    with pytest.raises(ValueError):
        phase_modulated_state(rho, 3, t, "sideways", r)


@settings(max_examples=60)
@given(seeds, times, temps)
def test_quasi_trace_preserving_and_hermitian(seed, t, temp):
    out = apply_quasi(state(seed), t, TABLES[temp], P)
    assert abs(np.trace(out)) <= 1e-12
    assert np.allclose(out, out.conj().T, atol=1e-12)


@settings(max_examples=60)
@given(seeds, temps)
def test_markovian_trace_preserving(seed, temp):
    out = apply_markovian(state(seed), TABLES[temp], P)
    assert abs(np.trace(out)) <= 1e-12
    assert np.allclose(out, out.conj().T, atol=1e-12)


@given(seeds, times, st.sampled_from([0.0, 300.0, 0.01]))
def test_quasi_equals_markovian_without_coupling(seed, t, temp):
    r = build_rate_table(FREE, BathParams(temp, TWO_PI * 0.1))
    rho = state(seed)
    assert np.allclose(apply_quasi(rho, t, r, FREE), apply_markovian(rho, r, FREE),
                       atol=1e-12, rtol=0)


def test_quasi_examples_at_zero_temperature():
    r = TABLES[0.0]
    out = apply_quasi(np.eye(8) / 8, 1.7, r, P)
    assert abs(np.trace(out)) < 1e-14 and out[7, 7].real > 0
    out = apply_quasi(basis(0), 0.4, r, P)
    assert out[0, 0].real == pytest.approx(-(r.emit[0, 0] + r.emit[1, 0] + r.emit[2, 0]))
    zero = RateTable.zeros(P)
    assert np.array_equal(apply_quasi(state(3), 2.0, zero, P), np.zeros((8, 8)))


def test_ground_is_dark_at_zero_temperature():
    assert np.array_equal(apply_markovian(basis(7), TABLES[0.0], P), np.zeros((8, 8)))
    assert np.allclose(apply_quasi(basis(7), 3.0, TABLES[0.0], P), 0)


def test_non_hermitian_input_rejected():
    rho = state(0)
    rho[0, 1] += 1e-3
    with pytest.raises(StateError):
        apply_quasi(rho, 0.0, TABLES[0.0], P)
    with pytest.raises(StateError):
        apply_markovian(rho, TABLES[0.0], P)


def test_master_rhs_closed_system():
    zero = RateTable.zeros(P)
    diag = np.diag(np.arange(1, 9) / 36).astype(complex)
    for mode in DissipatorMode:
        assert np.allclose(master_rhs(diag, 0.7, mode, None, P, zero), 0)
    rho = np.zeros((8, 8), complex)
    rho[0, 0] = rho[2, 2] = rho[0, 2] = rho[2, 0] = 0.5
    out = master_rhs(rho, 0.0, "quasi", None, P, zero)
    assert out[0, 2] == pytest.approx(1j * (P.omega[1] - P.j1) * 0.5, rel=1e-12)
    e = h0_diagonal(P)
    assert e[0] - e[2] == pytest.approx(-(P.omega[1] - P.j1))


def test_master_rhs_pulse_matches_commutator():
    from spinchain_cnot.model import build_h0, build_hrf
    rho = state(5)
    pulse = cnot_sequence(P).pulses[1]
    t = 3.3
    h = build_h0(P) + build_hrf(P, t, pulse.frequency, pulse.phase, pulse.amplitude)
    expected = -1j * (h @ rho - rho @ h) + apply_markovian(rho, TABLES[300.0], P)
    got = master_rhs(rho, t, DissipatorMode.MARKOVIAN, pulse, P, TABLES[300.0])
    assert np.allclose(got, expected, atol=1e-9, rtol=0)
