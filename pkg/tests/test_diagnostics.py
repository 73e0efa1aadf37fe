import numpy as np
import pytest

from spinchain_cnot.config import ScenarioConfig
from spinchain_cnot.diagnostics import (ComparisonSummary, compare_regimes, emit_plot,
                                        export_csv, read_csv, record_columns, run_scenario,
                                        thermal_profile)
from spinchain_cnot.integrator import TrajectoryRecord
from spinchain_cnot.metrics import cnot_state_error, purity
from spinchain_cnot.model import TWO_PI, BathParams, SystemParams, build_rate_table

SHORT = ScenarioConfig(horizon=0.5)


def test_purity_examples():
    pure = np.zeros((8, 8), complex)
    pure[0, 0] = pure[3, 3] = pure[0, 3] = pure[3, 0] = 0.5
    assert purity(pure) == pytest.approx(1.0)
    assert purity(np.eye(8) / 8) == pytest.approx(0.125)
    with pytest.raises(ValueError):
        purity(np.array([[0.5, 1.0], [1j, 0.5]]))


def test_cnot_state_error_examples():
    target = np.zeros((8, 8), complex)
    target[0, 0] = target[3, 3] = 0.5
    target[0, 3] = 0.5 * np.exp(0.7j)
    target[3, 0] = np.conj(target[0, 3])
    assert cnot_state_error(target) == pytest.approx(0, abs=1e-15)
    ground = np.zeros((8, 8))
    ground[0, 0] = 1
    assert cnot_state_error(ground) == 0.5
    # terms 0.375, 0.375 and 0.5 (no coherence): the max is 0.5
    assert cnot_state_error(np.eye(8) / 8) == pytest.approx(0.5)


def test_columns():
    cols = record_columns()
    assert cols[0] == "t_us" and cols[1] == "rho_11" and cols[8] == "rho_88"
    assert cols[9:] == ["abs_rho_13", "abs_rho_14", "abs_rho_34", "purity", "trace_dev",
                        "herm_dev", "min_eig"]


def test_empty_record_writes_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    export_csv(TrajectoryRecord(n_spins=3), path)
    assert path.read_text() == ",".join(record_columns()) + "\n"


def test_csv_roundtrip_and_determinism(tmp_path):
    cfg = SHORT.with_(bath=BathParams(300.0, TWO_PI * 0.1))
    rec = run_scenario(cfg).record
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    export_csv(rec, a)
    export_csv(run_scenario(cfg).record, b)
    assert a.read_bytes() == b.read_bytes()
    data = read_csv(a)
    arr = rec.as_arrays()
    assert np.max(np.abs(data["rho_11"] - arr["populations"][:, 0])) <= 1e-12
    assert np.max(np.abs(data["abs_rho_14"] - arr["coherences"][:, 1])) <= 1e-12
    assert np.max(np.abs(data["purity"] - arr["purity"])) <= 1e-12


def test_closed_system_purity_column_constant(tmp_path):
    rec = run_scenario(ScenarioConfig(horizon=3.0)).record
    path = tmp_path / "closed.csv"
    export_csv(rec, path)
    assert np.max(np.abs(read_csv(path)["purity"] - 1.0)) <= 1e-8


def test_export_error_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        export_csv(TrajectoryRecord(n_spins=3), blocker / "sub" / "out.csv")


def test_compare_zero_rates_identical():
    s = compare_regimes(SHORT)
    assert isinstance(s, ComparisonSummary)
    assert s.max_diag_diff <= 1e-10 and s.max_coh_diff <= 1e-10 and s.max_purity_diff <= 1e-10


def test_compare_without_coupling_identical():
    p = SystemParams(j1=0.0, j2=0.0)
    s = compare_regimes(SHORT.with_(system=p, bath=BathParams(300.0, TWO_PI * 0.1), horizon=0.3))
    assert s.max_diag_diff <= 1e-10 and s.max_coh_diff <= 1e-10


def test_summary_csv(tmp_path):
    s = compare_regimes(SHORT.with_(bath=BathParams(0.0, TWO_PI * 0.1), horizon=0.2))
    assert np.all(s.diag_diff >= 0) and np.all(s.coh_diff >= 0)
    path = tmp_path / "cmp.csv"
    export_csv(s, path)
    data = read_csv(path)
    assert list(data) == ["t_us", "max_diag_diff", "max_coh_diff", "purity_diff"]
    assert np.allclose(data["max_coh_diff"], s.coh_diff, atol=1e-15)


def test_thermal_profile():
    p = SystemParams()
    prof = thermal_profile(p, build_rate_table(p, BathParams(0.0, 1.0)))
    assert prof[7] == 1 and prof.sum() == pytest.approx(1)
    prof = thermal_profile(p, build_rate_table(p, BathParams(300.0, 1.0)))
    assert np.allclose(prof, 1 / 8, atol=1e-4) and prof.sum() == pytest.approx(1)
    assert prof[7] > prof[0]
    with pytest.raises(ValueError):
        thermal_profile(p, build_rate_table(p, BathParams(300.0, 0.0)))


def test_emit_plot_svg(tmp_path):
    rec = run_scenario(ScenarioConfig(horizon=0.3)).record
    path = tmp_path / "plot.svg"
    emit_plot(rec, path, title="closed")
    assert path.read_text().lstrip().startswith("<?xml")
    assert "<svg" in path.read_text()
    with pytest.raises(ValueError):
        emit_plot(rec, tmp_path / "bad.svg", columns=("rho_99",))
