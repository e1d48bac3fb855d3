"""Qubit mapping tests: one-hot encoding, XY Hamiltonian, generator family,
commutator table (including the full five-qubit table) and Jacobi closure."""
import numpy as np
import pytest

from parasim.algebra import ParaSpec, build_fock_ops
from parasim.mapping import (
    GeneratorBasis,
    PauliString,
    PauliSum,
    build_xy_hamiltonian,
    check_jacobi,
    commutator_table,
    encode_fock,
    generator_family,
    number_operator_pauli,
    onehot_index,
    pauli_sum_to_matrix,
    restrict_to_onehot,
)

from reference_tables import FIVE_QUBIT_TABLE


class TestEncodeFock:
    def test_level_zero(self):
        assert encode_fock(0, 3) == "100"

    def test_level_two(self):
        assert encode_fock(2, 3) == "001"

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            encode_fock(3, 3)

    def test_index_matches_string(self):
        for q in (2, 4, 5):
            for n in range(q):
                assert onehot_index(n, q) == int(encode_fock(n, q), 2)


class TestPauliTypes:
    def test_mixed_widths_rejected(self):
        with pytest.raises(ValueError):
            PauliSum((PauliString(1.0, "XX"), PauliString(1.0, "XXX")))

    def test_bad_letters_rejected(self):
        with pytest.raises(ValueError):
            PauliString(1.0, "XQ")


class TestXYHamiltonian:
    def test_pb1_bond_coefficients(self):
        ham = build_xy_hamiltonian(ParaSpec("pb", 1, np=2), g=1.0)
        got = {(t.letters, round(t.coeff, 12)) for t in ham.terms}
        expected = {
            ("XXI", 0.5), ("YYI", 0.5),
            ("IXX", round(np.sqrt(2) / 2, 12)), ("IYY", round(np.sqrt(2) / 2, 12)),
        }
        assert got == expected

    def test_pf2_bond_coefficients(self):
        ham = build_xy_hamiltonian(ParaSpec("pf", 2), g=0.02)
        for term in ham.terms:
            assert term.coeff == pytest.approx(0.02 * np.sqrt(2) / 2)

    def test_zero_coupling(self):
        ham = build_xy_hamiltonian(ParaSpec("pb", 3, np=3), g=0.0)
        assert all(t.coeff == 0.0 for t in ham.terms)


class TestGeneratorFamily:
    def test_three_qubits(self):
        basis = generator_family(3)
        assert basis.labels == ("u0", "u1", "v0")

    def test_five_qubits_table_order(self):
        basis = generator_family(5)
        assert basis.labels == ("u0", "u1", "v0", "u2", "v1", "w0",
                                "u3", "v2", "w1", "a0")

    def test_two_qubits_single_bond(self):
        assert generator_family(2).labels == ("u0",)

    @pytest.mark.parametrize("q", range(2, 9))
    def test_generator_count(self, q):
        basis = generator_family(q)
        assert len(basis) == q * (q - 1) // 2
        # each generator splits into two commuting exponential factors
        assert 2 * len(basis) == q * (q - 1)

    def test_too_few_qubits(self):
        with pytest.raises(ValueError):
            generator_family(1)

    @pytest.mark.parametrize("q", [3, 4, 5, 6])
    def test_two_term_split_commutes(self, q):
        for gen in generator_family(q).generators:
            first, second = (t.matrix() for t in gen.terms)
            assert np.max(np.abs(first @ second - second @ first)) < 1e-14


class TestDenseMatrices:
    def test_single_z(self):
        mat = pauli_sum_to_matrix(PauliSum((PauliString(1.0, "Z"),)))
        assert np.allclose(mat, np.diag([1.0, -1.0]))

    def test_xx_antidiagonal(self):
        mat = pauli_sum_to_matrix(PauliSum((PauliString(1.0, "XX"),)))
        assert np.allclose(mat, np.fliplr(np.eye(4)))

    def test_u0_hops_between_onehot_states(self):
        basis = generator_family(3)
        u0 = pauli_sum_to_matrix(basis.generators[0])
        state = np.zeros(8)
        state[int("100", 2)] = 1.0
        out = u0 @ state
        expected = np.zeros(8)
        expected[int("010", 2)] = 2.0
        assert np.allclose(out, expected)

    def test_width_limit(self):
        with pytest.raises(ValueError):
            pauli_sum_to_matrix(PauliSum((PauliString(1.0, "X" * 13),)))


class TestOnehotRestriction:
    def test_u0_restriction(self):
        basis = generator_family(3)
        block = restrict_to_onehot(pauli_sum_to_matrix(basis.generators[0]), 3)
        expected = np.zeros((3, 3))
        expected[0, 1] = expected[1, 0] = 2.0
        assert np.allclose(block, expected)

    def test_v0_restriction(self):
        basis = generator_family(3)
        block = restrict_to_onehot(pauli_sum_to_matrix(basis.generators[2]), 3)
        assert block[0, 2] == pytest.approx(-2j)
        assert block[2, 0] == pytest.approx(2j)
        block[0, 2] = block[2, 0] = 0.0
        assert np.max(np.abs(block)) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            restrict_to_onehot(np.eye(7), 3)

    @pytest.mark.parametrize("spec", [
        ParaSpec("pf", 2), ParaSpec("pf", 4), ParaSpec("pf", 6),
        ParaSpec("pb", 1, np=2), ParaSpec("pb", 2, np=3),
        ParaSpec("pb", 3, np=5), ParaSpec("pb", 7, np=7),
    ])
    @pytest.mark.parametrize("g", [1.0, 0.02])
    def test_xy_restriction_equals_fock_hamiltonian(self, spec, g):
        ham = pauli_sum_to_matrix(build_xy_hamiltonian(spec, g))
        block = restrict_to_onehot(ham, spec.num_qubits)
        ops = build_fock_ops(spec)
        assert np.max(np.abs(block - g * (ops.a + ops.adag))) < 1e-12

    def test_number_operator_restricts_to_level_index(self):
        for q in (2, 3, 5):
            mat = pauli_sum_to_matrix(number_operator_pauli(q))
            block = restrict_to_onehot(mat, q)
            assert np.allclose(block, np.diag(np.arange(q)), atol=1e-12)

    @pytest.mark.parametrize("q", [3, 4, 5, 6])
    def test_generators_preserve_onehot_subspace(self, q):
        idx = [onehot_index(n, q) for n in range(q)]
        outside = np.setdiff1d(np.arange(2 ** q), idx)
        for gen in generator_family(q).generators:
            mat = pauli_sum_to_matrix(gen)
            for i in idx:
                column = mat[:, i]
                assert np.max(np.abs(column[outside])) <= 1e-14


class TestCommutatorTable:
    def test_three_qubit_relations(self):
        table = commutator_table(generator_family(3))
        assert table[("u0", "u1")] == (1, "v0")
        assert table[("u1", "v0")] == (1, "u0")
        assert table[("v0", "u0")] == (1, "u1")

    def test_five_qubit_table_matches_reference(self):
        table = commutator_table(generator_family(5))
        for (row, col), expected in FIVE_QUBIT_TABLE.items():
            got = table[(row, col)]
            if expected == "0":
                assert got is None, (row, col, got)
            else:
                sign = 1 if expected[0] == "+" else -1
                assert got == (sign, expected[1:]), (row, col, got, expected)

    def test_antisymmetry(self):
        table = commutator_table(generator_family(5))
        for (row, col), value in table.items():
            mirrored = table[(col, row)]
            if value is None:
                assert mirrored is None
            else:
                assert mirrored == (-value[0], value[1])

    def test_diagonal_vanishes(self):
        table = commutator_table(generator_family(4))
        for label in generator_family(4).labels:
            assert table[(label, label)] is None

    def test_malformed_basis_detected(self):
        # breaking the odd-span sign pushes commutators out of the span
        good = generator_family(5)
        broken_v0 = PauliSum((PauliString(1.0, "XZYII"), PauliString(1.0, "YZXII")))
        gens = list(good.generators)
        gens[2] = broken_v0
        with pytest.raises(ValueError):
            commutator_table(GeneratorBasis(tuple(gens), good.labels))


class TestJacobi:
    def test_three_qubits(self):
        assert check_jacobi(generator_family(3))

    def test_five_qubits_all_triples(self):
        assert check_jacobi(generator_family(5))

    def test_two_qubits_vacuous(self):
        assert check_jacobi(generator_family(2))
