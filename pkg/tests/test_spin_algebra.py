import numpy as np
import pytest

from spinchain_cnot import spin_algebra as sa


def test_single_spin_sz():
    assert np.array_equal(sa.spin_operator("z", 1, 1), np.diag([0.5, -0.5]))


def test_lowering_on_last_spin_maps_000_to_001():
    ket = np.zeros(8)
    ket[0] = 1
    out = sa.spin_operator("minus", 3, 3) @ ket
    expected = np.zeros(8)
    expected[1] = 1
    assert np.array_equal(out, expected)


def test_raising_is_adjoint_of_lowering():
    for k in (1, 2, 3):
        assert np.array_equal(sa.spin_operator("plus", k, 3),
                              sa.adjoint(sa.spin_operator("minus", k, 3)))


def test_spin_commutation_relation():
    # [S+, S-] = 2 Sz on the same site, zero across sites
    for k in (1, 2, 3):
        sp, sm = sa.spin_operator("plus", k, 3), sa.spin_operator("minus", k, 3)
        assert np.allclose(sa.commutator(sp, sm), 2 * sa.spin_operator("z", k, 3))
    assert np.allclose(sa.commutator(sa.spin_operator("plus", 1, 3),
                                     sa.spin_operator("minus", 2, 3)), 0)


@pytest.mark.parametrize("kind,k", [("z", 0), ("z", 4), ("x", 1)])
def test_spin_operator_rejects_bad_arguments(kind, k):
    with pytest.raises(ValueError):
        sa.spin_operator(kind, k, 3)


def test_kron_examples():
    assert np.array_equal(sa.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(sa.kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))


def test_commutator_trace_adjoint():
    a = np.arange(16).reshape(4, 4) + 1j
    assert np.array_equal(sa.commutator(a, a), np.zeros((4, 4)))
    assert sa.trace(np.eye(8)) == 8
    assert np.array_equal(sa.adjoint(a), a.conj().T)


def test_commutator_dimension_mismatch():
    with pytest.raises(ValueError):
        sa.commutator(np.eye(2), np.eye(4))


def test_basis_helpers_roundtrip():
    for i in range(8):
        bits = sa.basis_bits(i, 3)
        assert sa.basis_index(bits) == i
        for k in (1, 2, 3):
            assert sa.bit_of(i, k, 3) == bits[k - 1]
            assert sa.flip_bit(sa.flip_bit(i, k, 3), k, 3) == i
    assert sa.basis_label(2, 3) == "|010>"
    assert sa.basis_bits(4, 3) == (1, 0, 0)


def test_projector():
    pr = sa.projector(3, 8)
    assert pr[3, 3] == 1 and np.trace(pr) == 1
