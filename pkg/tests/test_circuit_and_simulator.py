import numpy as np
import pytest

from permlcu.circuit import (
    Circuit,
    ControlledBlock,
    ControlTerm,
    MCXGate,
    RyGate,
    circuit_from_dict,
    circuit_to_dict,
    diagnose,
    flatten,
    inverse,
    validate,
)
from permlcu.errors import DimensionError, ResourceError, StructureError
from permlcu.permutation import matrix_of
from permlcu.simulator import MAX_QUBITS, encoded_block, unitary_of

from .conftest import WORKED_P4
from .helpers import corpus, oracle_unitary, random_circuit

NEG, POS = False, True

# P4 = C^0_{|0>} X_1  x  C^1_{|0>} X_0, in time order
P4_CIRCUIT = Circuit(2, [MCXGate(1, [(0, NEG)]), MCXGate(0, [(1, NEG)])])


class TestValidate:
    def test_empty(self):
        assert validate(Circuit(3))

    def test_target_is_control(self):
        c = Circuit(2, [MCXGate(0, [(0, POS)])])
        assert not validate(c)
        assert any("also a control" in msg for msg in diagnose(c))

    def test_worked_p4(self):
        assert validate(P4_CIRCUIT)

    def test_out_of_range(self):
        assert not validate(Circuit(2, [MCXGate(2)]))
        assert not validate(Circuit(2, [MCXGate(0, [(5, POS)])]))

    def test_block_body_targets_control(self):
        c = Circuit(3, [ControlledBlock([(2, POS)], [MCXGate(2, [(0, POS)])])])
        assert not validate(c)

    def test_repeated_control(self):
        c = Circuit(3, [MCXGate(0, [(1, POS), (1, NEG)])])
        assert not validate(c)


class TestFlatten:
    def test_no_blocks_identity(self):
        c = Circuit(3, [MCXGate(0, [(1, POS)]), RyGate(2, 0.3)])
        assert flatten(c) == c

    def test_ungroup_worked_grouping(self):
        # two gates sharing control (0,+), grouped
        grouped = Circuit(3, [ControlledBlock([(0, POS)], [MCXGate(2, [(1, POS)]), MCXGate(1, [(2, POS)])])])
        flat = flatten(grouped)
        assert flat.gates == (MCXGate(2, [(0, POS), (1, POS)]), MCXGate(1, [(0, POS), (2, POS)]))

    def test_nested_depth_two(self):
        inner = ControlledBlock([(2, NEG)], [MCXGate(0), RyGate(1, 0.7, [(0, POS)])])
        c = Circuit(4, [ControlledBlock([(3, POS)], [inner, MCXGate(1)])])
        flat = flatten(c)
        assert not flat.has_blocks()
        assert flat.gates[0] == MCXGate(0, [(3, POS), (2, NEG)])
        assert flat.gates[1] == RyGate(1, 0.7, [(0, POS), (2, NEG), (3, POS)])
        assert flat.gates[2] == MCXGate(1, [(3, POS)])
        np.testing.assert_allclose(unitary_of(flat), oracle_unitary(c), atol=1e-12)

    def test_idempotent_and_unitary_preserving(self, rng):
        for c in corpus(rng):
            f = flatten(c)
            assert flatten(f) == f
            np.testing.assert_allclose(unitary_of(f), oracle_unitary(c), atol=1e-12)


class TestUnitaryOf:
    def test_empty(self):
        np.testing.assert_array_equal(unitary_of(Circuit(2)), np.eye(4))

    def test_single_x(self):
        np.testing.assert_array_equal(unitary_of(Circuit(1, [MCXGate(0)])), [[0, 1], [1, 0]])

    def test_worked_p4(self):
        U = unitary_of(P4_CIRCUIT)
        expected = np.zeros((4, 4))
        for r, c in [(0, 1), (1, 2), (2, 0), (3, 3)]:
            expected[r, c] = 1
        np.testing.assert_array_equal(U, expected)
        np.testing.assert_array_equal(U, matrix_of(WORKED_P4))

    def test_ry_convention(self):
        U = unitary_of(Circuit(1, [RyGate(0, np.pi / 3)]))
        c, s = np.cos(np.pi / 6), np.sin(np.pi / 6)
        np.testing.assert_allclose(U, [[c, -s], [s, c]], atol=1e-15)

    def test_matches_oracle_and_orthogonal(self, rng, backend):
        for c in corpus(rng):
            U = unitary_of(c, backend=backend)
            np.testing.assert_allclose(U, oracle_unitary(c), atol=1e-12)
            assert np.abs(U.T @ U - np.eye(U.shape[0])).max() <= 1e-12

    def test_compositionality(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 6))
            c1 = random_circuit(rng, n, 8)
            c2 = random_circuit(rng, n, 8)
            np.testing.assert_allclose(unitary_of(c1 + c2), unitary_of(c2) @ unitary_of(c1), atol=1e-12)

    def test_inverse_circuit(self, rng):
        for c in corpus(rng, 20):
            U = unitary_of(c)
            np.testing.assert_allclose(unitary_of(inverse(c)), U.T, atol=1e-12)

    def test_width_cap(self):
        with pytest.raises(ResourceError):
            unitary_of(Circuit(MAX_QUBITS + 1))

    def test_invalid_circuit(self):
        with pytest.raises(StructureError):
            unitary_of(Circuit(2, [MCXGate(0, [(0, POS)])]))

    def test_backends_agree(self, rng):
        from permlcu import kernels

        if "numba" not in kernels.available_backends():
            pytest.skip("numba not installed")
        c = random_circuit(rng, 7, 40)
        np.testing.assert_allclose(unitary_of(c, "numpy"), unitary_of(c, "numba"), atol=1e-14)


class TestEncodedBlock:
    def test_identity(self):
        np.testing.assert_array_equal(encoded_block(np.eye(4), 1), np.eye(2))

    def test_no_ancilla(self):
        U = unitary_of(P4_CIRCUIT)
        np.testing.assert_array_equal(encoded_block(U, 2), U)

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            encoded_block(np.eye(3), 1)
        with pytest.raises(DimensionError):
            encoded_block(np.eye(2), 2)


def test_json_round_trip(rng):
    for c in corpus(rng, 30):
        d = circuit_to_dict(c)
        assert circuit_from_dict(d) == c
    d = circuit_to_dict(Circuit(2, [ControlledBlock([(1, NEG)], [RyGate(0, 0.5)])]))
    assert d == {
        "n_qubits": 2,
        "gates": [
            {
                "kind": "block",
                "controls": [{"q": 1, "pol": "-"}],
                "body": [{"kind": "ry", "target": 0, "angle": 0.5, "controls": []}],
            }
        ],
    }


def test_json_rejects_bad_polarity():
    with pytest.raises(StructureError):
        circuit_from_dict({"n_qubits": 1, "gates": [{"kind": "mcx", "target": 0, "controls": [{"q": 0, "pol": "?"}]}]})


def test_control_terms_are_canonical():
    assert MCXGate(0, [(2, POS), (1, NEG)]) == MCXGate(0, [ControlTerm(1, NEG), ControlTerm(2, POS)])
