import numpy as np
import pytest

from spinchain_cnot.appendix_oracle import (CORRECTIONS, DISSIPATION, VN, oracle_dissipator_rhs,
                                            oracle_rhs, oracle_vn_rhs, random_density_matrix,
                                            run_discrepancy_report)
from spinchain_cnot.dissipators import von_neumann
from spinchain_cnot.errors import UnsupportedError
from spinchain_cnot.model import TWO_PI, BathParams, RateTable, SystemParams, build_rate_table
from spinchain_cnot.pulses import cnot_sequence

P = SystemParams()


def test_tables_cover_upper_triangle():
    upper = {(i, j) for i in range(1, 9) for j in range(i, 9)}
    assert set(DISSIPATION) == upper
    assert set(VN) == upper
    assert set(CORRECTIONS) <= upper


def test_vn_coherence_example():
    rho = np.zeros((8, 8), complex)
    rho[0, 2] = 1.0
    out = oracle_vn_rhs(rho, 0.0, None, P)
    assert out[0, 2] == pytest.approx(1j * (P.omega[1] - P.j1))
    assert out[0, 2] == pytest.approx(von_neumann(rho, 0.0, None, P)[0, 2])


def test_vn_diagonal_state_is_stationary():
    rho = np.diag(np.linspace(0.05, 0.2, 8)).astype(complex)
    assert np.allclose(oracle_vn_rhs(rho, 1.3, None, P), 0)


def test_vn_with_pulse_matches_operator():
    rng = np.random.default_rng(3)
    pulse = cnot_sequence(P).pulses[0]
    for _ in range(5):
        rho = random_density_matrix(rng)
        t = float(rng.uniform(0, 2.5))
        assert np.max(np.abs(oracle_vn_rhs(rho, t, pulse, P)
                             - von_neumann(rho, t, pulse, P))) <= 1e-10


def test_dissipation_examples():
    r300 = build_rate_table(P, BathParams(300.0, 1.0))
    rho = np.diag(np.arange(1, 9) / 36).astype(complex)
    out = oracle_dissipator_rhs(rho, 0.0, r300, P)
    e, a = r300.emit, r300.absorb
    expected = (-(e[0, 0] + e[1, 0] + e[2, 0]) * rho[0, 0] + a[0, 0] * rho[4, 4]
                + a[1, 0] * rho[2, 2] + a[2, 0] * rho[1, 1])
    assert out[0, 0] == pytest.approx(expected, rel=1e-12)
    r0 = build_rate_table(P, BathParams(0.0, 1.0))
    out = oracle_dissipator_rhs(rho, 0.0, r0, P)
    e = r0.emit
    gain = e[0, 7] * rho[3, 3] + e[1, 7] * rho[5, 5] + e[2, 7] * rho[6, 6]
    assert out[7, 7] == pytest.approx(gain) and gain.real > 0
    assert np.array_equal(oracle_dissipator_rhs(rho, 0.0, RateTable.zeros(P), P),
                          np.zeros((8, 8)))


def test_flagged_entry_differs_then_matches():
    rates = build_rate_table(P, BathParams(0.01, TWO_PI * 0.1))
    rho = random_density_matrix(np.random.default_rng(9))
    as_written = oracle_dissipator_rhs(rho, 0.8, rates, P)
    fixed = oracle_dissipator_rhs(rho, 0.8, rates, P, corrected=True)
    assert abs(as_written[1, 7] - fixed[1, 7]) > 1e-6


def test_two_spin_chain_unsupported():
    p2 = SystemParams(omega=(1.0, 2.0), j1=0.1, j2=0.0)
    with pytest.raises(UnsupportedError):
        oracle_vn_rhs(np.eye(4) / 4, 0.0, None, p2)
    with pytest.raises(UnsupportedError):
        oracle_rhs(np.eye(4) / 4, 0.0, None, RateTable.zeros(p2), p2)


def test_report_small_run_passes_and_is_deterministic(tmp_path):
    a = run_discrepancy_report(n_samples=12, seed=4)
    b = run_discrepancy_report(n_samples=12, seed=4)
    assert a.passed
    assert a.to_text() == b.to_text() and a.to_csv() == b.to_csv()
    assert a.literal_phase_max_dev > 1e-3
    flagged = {row["element"] for row in a.flagged_rows()}
    assert "rho_28" in flagged
    txt, tab = a.write(tmp_path)
    assert txt.read_text().rstrip().endswith("PASS")
    assert tab.read_text().startswith("element,term")
