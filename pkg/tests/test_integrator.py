import math

import numpy as np
import pytest

from spinchain_cnot import integrator
from spinchain_cnot.appendix_oracle import random_density_matrix
from spinchain_cnot.dissipators import DissipatorMode
from spinchain_cnot.errors import IntegrityError, NumericalFailure, StateError
from spinchain_cnot.integrator import (IntegratorConfig, _segments, default_dt,
                                       ground_excited_state, run, step)
from spinchain_cnot.model import TWO_PI, BathParams, RateTable, SystemParams, build_rate_table
from spinchain_cnot.pulses import Pulse, Sequence, cnot_sequence

P = SystemParams()
ZERO = RateTable.zeros(P)


def coherent_13():
    rho = np.zeros((8, 8), complex)
    rho[0, 0] = rho[2, 2] = rho[0, 2] = rho[2, 0] = 0.5
    return rho


def test_default_dt_and_cap():
    assert default_dt(P) == pytest.approx(TWO_PI / (TWO_PI * 700) / 50)
    assert IntegratorConfig().resolve_dt(P) == default_dt(P)
    with pytest.raises(ValueError):
        IntegratorConfig(dt=1e-3).resolve_dt(P)
    for bad in (dict(dt=-1.0), dict(sample_stride=0), dict(method="euler")):
        with pytest.raises(ValueError):
            IntegratorConfig(**bad)


@pytest.mark.parametrize("method", ["lawson", "rk4"])
def test_step_keeps_diagonal_state(method):
    rho = np.diag(np.arange(1, 9) / 36).astype(complex)
    out = step(rho, 0.0, default_dt(P), "quasi", None, P, ZERO, method)
    assert np.max(np.abs(out - rho)) <= 1e-14
    with pytest.raises(ValueError):
        step(rho, 0.0, default_dt(P), "quasi", None, P, ZERO, "euler")


def test_step_non_finite_raises_with_time():
    rho = coherent_13()
    rho[1, 1] = np.nan
    with pytest.raises(NumericalFailure) as info:
        step(rho, 0.5, 1e-5, "markov", None, P, ZERO)
    assert info.value.t == pytest.approx(0.5 + 1e-5)


def test_free_coherence_rotates_at_transition_frequency():
    tau = 2.0
    rec = run(coherent_13(), None, tau, "quasi", IntegratorConfig(), P, ZERO)
    rho13 = rec.final_state[0, 2]
    assert abs(abs(rho13) - 0.5) / tau <= 1e-9
    assert rho13 == pytest.approx(0.5 * np.exp(1j * (P.omega[1] - P.j1) * tau), abs=1e-9)


def test_classical_rk4_needs_small_step_for_free_coherence():
    # classical RK4 damps this line by ~(w dt)^6/144 per step: about 2e-7 per us
    # at the default step, within budget only once the step is much smaller
    tau = 0.2
    coarse = run(coherent_13(), None, tau, "quasi", IntegratorConfig(method="rk4"), P, ZERO)
    assert abs(abs(coarse.final_state[0, 2]) - 0.5) / tau > 1e-9
    fine = run(coherent_13(), None, tau, "quasi", IntegratorConfig(dt=5e-6, method="rk4"),
               P, ZERO)
    assert abs(abs(fine.final_state[0, 2]) - 0.5) / tau <= 1e-9


def observed_order(method, rabi, base):
    """Richardson estimate log2(|y_h - y_h/2| / |y_h/2 - y_h/4|) on a driven closed run."""
    p = SystemParams(rabi=rabi)
    rho0 = random_density_matrix(np.random.default_rng(5))
    pulse = Pulse(TWO_PI * 175, 0.0, 1.0 * rabi, rabi, 0.0)   # 1 us drive window
    seq = Sequence((pulse,))
    finals = [run(rho0, seq, 1.0, "quasi", IntegratorConfig(dt=base / 2**i, method=method),
                  p, RateTable.zeros(p), check_limits=False).final_state for i in range(3)]
    e1 = np.max(np.abs(finals[0] - finals[1]))
    e2 = np.max(np.abs(finals[1] - finals[2]))
    return math.log2(e1 / e2)


def test_richardson_order_classical():
    assert observed_order("rk4", P.rabi, 2 * default_dt(P)) >= 3.5


def test_richardson_order_lawson():
    # free precession is exact here, so the error comes from the drive alone;
    # a strong drive and the largest allowed step keep it above round-off
    assert observed_order("lawson", TWO_PI * 5, 2.5 * default_dt(P)) >= 3.5


def test_segments_align_with_pulse_edges():
    seq = cnot_sequence(P)
    segs = _segments(seq, 25.0, 0.3)
    starts = [s for s, _, _, _ in segs]
    assert starts == pytest.approx([0, 2.5, 7.5, 12.5, 17.5, 20.0])
    for (start, dt, n, _), nxt in zip(segs, starts[1:] + [25.0]):
        assert start + n * dt == pytest.approx(nxt)
        assert dt <= 0.3
    assert [pl is None for *_, pl in segs] == [False] * 5 + [True]
    # horizon inside a pulse truncates it
    segs = _segments(seq, 5.0, 0.3)
    assert segs[-1][0] + segs[-1][1] * segs[-1][2] == pytest.approx(5.0)


def test_initial_state_validation():
    with pytest.raises(StateError):
        run(np.eye(4) / 4, None, 1.0, "quasi", IntegratorConfig(), P, ZERO)
    bad = ground_excited_state(8) * 2
    with pytest.raises(StateError):
        run(bad, None, 1.0, "quasi", IntegratorConfig(), P, ZERO)
    neg = np.diag([1.2, -0.2, 0, 0, 0, 0, 0, 0]).astype(complex)
    with pytest.raises(StateError):
        run(neg, None, 1.0, "quasi", IntegratorConfig(), P, ZERO)
    with pytest.raises(ValueError):
        run(ground_excited_state(8), None, 0.0, "quasi", IntegratorConfig(), P, ZERO)


def test_record_sampling_and_monitors():
    rates = build_rate_table(P, BathParams(300.0, TWO_PI * 0.1))
    cfg = IntegratorConfig(sample_stride=500, monitor_stride=100)
    rec = run(ground_excited_state(8), cnot_sequence(P), 1.0, DissipatorMode.QUASI, cfg, P, rates)
    n = rec.steps
    assert len(rec) == 1 + math.ceil(n / 500)
    assert rec.times[0] == 0 and rec.times[-1] == pytest.approx(1.0)
    arr = rec.as_arrays()
    assert arr["populations"].shape == (len(rec), 8)
    assert np.allclose(arr["populations"].sum(axis=1), 1, atol=1e-10)
    assert rec.peak_trace_dev < 1e-10 and rec.min_min_eig > -1e-10


def test_integrity_limit_breach_raises(monkeypatch):
    monkeypatch.setattr(integrator, "TRACE_LIMIT", -1.0)
    with pytest.raises(IntegrityError):
        run(ground_excited_state(8), None, 0.01, "quasi", IntegratorConfig(), P, ZERO)
    run(ground_excited_state(8), None, 0.01, "quasi", IntegratorConfig(), P, ZERO,
        check_limits=False)


def test_run_is_deterministic():
    rates = build_rate_table(P, BathParams(300.0, TWO_PI * 0.1))
    a = run(ground_excited_state(8), cnot_sequence(P), 0.5, "quasi", IntegratorConfig(), P, rates)
    b = run(ground_excited_state(8), cnot_sequence(P), 0.5, "quasi", IntegratorConfig(), P, rates)
    assert np.array_equal(a.final_state, b.final_state)
