import math

import pytest

from spinchain_cnot.model import TWO_PI, SystemParams
from spinchain_cnot.pulses import (Pulse, Sequence, cnot_sequence, resonance_frequency,
                                   two_pi_k_rabi)


def test_resonance_examples(params):
    assert resonance_frequency(params, 1, 3) == pytest.approx(TWO_PI * 175)
    assert resonance_frequency(params, 3, 4) == pytest.approx(TWO_PI * 112.0)
    free = SystemParams(j1=0.0, j2=0.0)
    assert resonance_frequency(free, 1, 5) == pytest.approx(free.omega[0])
    assert resonance_frequency(free, 6, 8) == pytest.approx(free.omega[1])
    assert resonance_frequency(free, 7, 8) == pytest.approx(free.omega[2])


@pytest.mark.parametrize("i,j", [(1, 4), (1, 1), (0, 1), (8, 9)])
def test_resonance_rejects(params, i, j):
    with pytest.raises(ValueError):
        resonance_frequency(params, i, j)


def test_cnot_sequence_defaults(params):
    seq = cnot_sequence(params)
    durations = [pl.duration for pl in seq.pulses]
    assert durations == pytest.approx([2.5, 5, 5, 5, 2.5])
    assert seq.total_duration == pytest.approx(20.0)
    assert seq.pulses[0].frequency == pytest.approx(TWO_PI * 175)
    assert all(pl.frequency == pytest.approx(TWO_PI * 112) for pl in seq.pulses[1:])
    assert all(pl.phase == 0 and pl.amplitude == params.rabi for pl in seq.pulses)
    assert seq.pulses[0].angle == pytest.approx(math.pi / 2)


def test_cnot_sequence_variants(params):
    assert len(cnot_sequence(params, 0).pulses) == 2
    assert len(cnot_sequence(params, 3).pulses) == 5
    with pytest.raises(ValueError):
        cnot_sequence(params, -1)
    with pytest.raises(ValueError):
        cnot_sequence(SystemParams(omega=(1.0, 2.0), j1=0.1, j2=0.0))


def test_sequence_lookup_and_validation(params):
    seq = cnot_sequence(params)
    assert seq.pulse_at(0.0) is seq.pulses[0]
    assert seq.pulse_at(2.5) is seq.pulses[1]
    assert seq.pulse_at(20.0) is None
    a = Pulse(1.0, 0.0, math.pi, 1.0, 0.0)
    with pytest.raises(ValueError):
        Sequence((a, Pulse(1.0, 0.0, math.pi, 1.0, 5.0)))
    with pytest.raises(ValueError):
        Pulse(1.0, 0.0, math.pi, 0.0, 0.0)


def test_two_pi_k_rabi():
    assert two_pi_k_rabi(10.0, 1) == pytest.approx(10 / math.sqrt(3))
    with pytest.raises(ValueError):
        two_pi_k_rabi(1.0, 0)
