"""Displacement factorization tests: target coefficients, the analytic
three-qubit solve, the numeric solver and product unitaries, all checked
against dense matrix-exponential oracles built in the tests."""
import numpy as np
import pytest
from scipy.linalg import expm

from parasim.algebra import ParaSpec, displaced_vacuum_exact
from parasim.factorize import (
    FactorizationError,
    FactorizationProblem,
    product_unitary,
    read_gamma_document,
    restricted_target,
    solve_displacement,
    solve_numeric,
    solve_three_qubit_analytic,
    target_coefficients,
    wrap_angle,
)
from parasim.mapping import generator_family, onehot_index

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def surrogate_product(gammas):
    return expm(1j * gammas[0] * SX) @ expm(1j * gammas[1] * SY) \
        @ expm(1j * gammas[2] * SZ)


class TestTargetCoefficients:
    def test_pf2(self):
        coefs = target_coefficients(ParaSpec("pf", 2), 0.5)
        assert coefs == pytest.approx([0.5 * np.sqrt(2), 0.5 * np.sqrt(2)])

    def test_pb3(self):
        coefs = target_coefficients(ParaSpec("pb", 3, np=2), 1.0)
        assert coefs == pytest.approx([np.sqrt(3), np.sqrt(2)])

    def test_zero_alpha(self):
        assert target_coefficients(ParaSpec("pb", 5, np=4), 0.0) == [0.0] * 4


class TestThreeQubitAnalytic:
    def test_single_generator_targets(self):
        for theta in (0.4, -1.2):
            gv = solve_three_qubit_analytic(theta, 0.0)
            assert gv.gammas == pytest.approx((theta, 0.0, 0.0), abs=1e-12)
            gv = solve_three_qubit_analytic(0.0, theta)
            assert gv.gammas == pytest.approx((0.0, theta, 0.0), abs=1e-12)

    def test_generic_target_against_expm_oracle(self):
        gv = solve_three_qubit_analytic(0.3, 0.7)
        target = expm(1j * (0.3 * SX + 0.7 * SY))
        assert np.linalg.norm(surrogate_product(gv.gammas) - target) <= 1e-10
        assert gv.residual <= 1e-10
        assert gv.converged

    @pytest.mark.parametrize("a,b", [
        (0.0, 0.0), (np.pi, 0.0), (np.pi / 2, np.pi / 2),
        (2.2, -3.9), (-1.7, 0.4), (5.0, 5.0),
    ])
    def test_hard_targets_still_exact(self, a, b):
        gv = solve_three_qubit_analytic(a, b)
        target = expm(1j * (a * SX + b * SY))
        assert np.linalg.norm(surrogate_product(gv.gammas) - target) <= 1e-10

    def test_random_targets_exact(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            a, b = rng.uniform(-6, 6, size=2)
            gv = solve_three_qubit_analytic(a, b)
            assert gv.residual <= 1e-10, (a, b, gv.residual)

    def test_su2_relations_validate_the_surrogate(self):
        # the isomorphism u0 -> X, u1 -> Y, v0 -> Z is sound because the
        # structure constants match: [u0,u1]=2i v0, [u1,v0]=2i u0, [v0,u0]=2i u1
        basis = generator_family(3)
        from parasim.mapping import pauli_sum_to_matrix
        u0, u1, v0 = (pauli_sum_to_matrix(g) for g in basis.generators)
        assert np.max(np.abs(u0 @ u1 - u1 @ u0 - 2j * v0)) < 1e-13
        assert np.max(np.abs(u1 @ v0 - v0 @ u1 - 2j * u0)) < 1e-13
        assert np.max(np.abs(v0 @ u0 - u0 @ v0 - 2j * u1)) < 1e-13
        assert np.max(np.abs(SX @ SY - SY @ SX - 2j * SZ)) == 0.0


class TestNumericSolver:
    def test_agrees_with_analytic_on_three_qubits(self):
        spec = ParaSpec("pf", 2)
        basis = generator_family(3)
        for alpha in (0.1, 0.3, 0.5, 0.785398, 1.0):
            coefs = target_coefficients(spec, alpha)
            analytic = solve_three_qubit_analytic(coefs[0] / 2, coefs[1] / 2)
            numeric = solve_numeric(
                FactorizationProblem(spec=spec, alpha=alpha, basis=basis),
                tol=1e-9, seed=0)
            for ga, gn in zip(analytic.gammas, numeric.gammas):
                assert abs(wrap_angle(ga - gn)) < 1e-8

    def test_zero_alpha_gives_zero_gammas(self):
        spec = ParaSpec("pb", 3, np=3)
        basis = generator_family(4)
        gv = solve_numeric(FactorizationProblem(spec=spec, alpha=0.0, basis=basis))
        assert np.allclose(gv.gammas, 0.0, atol=1e-12)
        assert gv.residual <= 1e-12

    def test_five_qubit_convergence(self):
        spec = ParaSpec("pf", 4)
        basis = generator_family(5)
        gv = solve_numeric(
            FactorizationProblem(spec=spec, alpha=0.5, basis=basis),
            tol=1e-8, seed=0)
        assert gv.converged and gv.residual <= 1e-8
        assert np.isfinite(gv.residual_full)

    def test_determinism(self):
        spec = ParaSpec("pf", 4)
        basis = generator_family(5)
        problem = FactorizationProblem(spec=spec, alpha=0.7, basis=basis)
        first = solve_numeric(problem, seed=42)
        second = solve_numeric(problem, seed=42)
        assert first.gammas == second.gammas

    def test_custom_product_ordering(self):
        # reversed factor order also converges; the product evaluated in that
        # ordering reproduces the target
        spec = ParaSpec("pb", 2, np=3)
        basis = generator_family(4)
        order = tuple(reversed(range(len(basis))))
        problem = FactorizationProblem(spec=spec, alpha=0.6, basis=basis,
                                       ordering=order)
        gv = solve_numeric(problem, tol=1e-9, seed=0)
        block = product_unitary(gv, basis, space="onehot", ordering=order)
        assert np.linalg.norm(block - restricted_target(spec, 0.6)) <= 1e-9

    def test_invalid_ordering_rejected(self):
        basis = generator_family(3)
        with pytest.raises(ValueError):
            FactorizationProblem(spec=ParaSpec("pf", 2), alpha=0.1,
                                 basis=basis, ordering=(0, 0, 1))

    def test_nonconvergence_raises_with_best_residual(self):
        spec = ParaSpec("pf", 4)
        basis = generator_family(5)
        problem = FactorizationProblem(spec=spec, alpha=0.5, basis=basis)
        with pytest.raises(FactorizationError, match="best residual"):
            solve_numeric(problem, tol=1e-300, max_restarts=0)

    def test_gradient_matches_finite_differences(self):
        # finite-difference oracle for the analytic product-rule gradient
        spec = ParaSpec("pb", 2, np=3)
        basis = generator_family(4)
        from parasim.factorize import restricted_generators
        gens = restricted_generators(basis)
        target = restricted_target(spec, 0.8)
        eig = [np.linalg.eigh(g) for g in gens]

        def value(gam):
            prod = np.eye(4, dtype=complex)
            for g, (w, v) in zip(gam, eig):
                prod = prod @ ((v * np.exp(1j * g * w)) @ v.conj().T)
            diff = prod - target
            return float(np.real(np.vdot(diff, diff)))

        def grad(gam):
            exps = [(v * np.exp(1j * g * w)) @ v.conj().T for g, (w, v) in zip(gam, eig)]
            out = np.empty(len(gens))
            for j in range(len(gens)):
                left = np.eye(4, dtype=complex)
                for e in exps[:j]:
                    left = left @ e
                right = np.eye(4, dtype=complex)
                for e in exps[j + 1:]:
                    right = right @ e
                deriv = left @ (1j * gens[j] @ exps[j]) @ right
                prod = left @ exps[j] @ right
                out[j] = 2 * np.real(np.vdot(deriv, prod - target))
            return out

        rng = np.random.default_rng(3)
        gam = rng.normal(scale=0.4, size=len(gens))
        numeric_grad = np.empty_like(gam)
        h = 1e-6
        for j in range(len(gam)):
            up, down = gam.copy(), gam.copy()
            up[j] += h
            down[j] -= h
            numeric_grad[j] = (value(up) - value(down)) / (2 * h)
        assert np.max(np.abs(grad(gam) - numeric_grad)) < 1e-6


class TestProductUnitary:
    def test_zero_gammas_identity(self):
        basis = generator_family(4)
        prod = product_unitary([0.0] * len(basis), basis, space="onehot")
        assert np.allclose(prod, np.eye(4))
        prod = product_unitary([0.0] * len(basis), basis, space="full")
        assert np.allclose(prod, np.eye(16))

    def test_analytic_gammas_reproduce_restricted_target(self):
        spec = ParaSpec("pb", 2, np=2)
        basis = generator_family(3)
        coefs = target_coefficients(spec, 0.6)
        gv = solve_three_qubit_analytic(coefs[0] / 2, coefs[1] / 2)
        block = product_unitary(gv, basis, space="onehot")
        assert np.linalg.norm(block - restricted_target(spec, 0.6)) <= 1e-10

    def test_full_space_product_displaces_the_vacuum(self):
        spec = ParaSpec("pf", 2)
        basis = generator_family(3)
        gv = solve_displacement(spec, 0.9)
        full = product_unitary(gv, basis, space="full")
        state = np.zeros(8, dtype=complex)
        state[onehot_index(0, 3)] = 1.0
        out = full @ state
        psi = displaced_vacuum_exact(spec, 0.9)
        embedded = np.zeros(8, dtype=complex)
        for n in range(3):
            embedded[onehot_index(n, 3)] = psi[n]
        assert np.max(np.abs(out - embedded)) <= 1e-10

    @pytest.mark.parametrize("spec,alphas", [
        (ParaSpec("pf", 2), (0.1, 0.3, 0.5, 1.0, 2.0)),
        (ParaSpec("pb", 4, np=2), (0.1, 0.3, 0.5, 1.0, 2.0)),
    ])
    def test_exactness_does_not_degrade_with_alpha(self, spec, alphas):
        # no Trotter-style error growth: residual stays at solver tolerance
        residuals = []
        for alpha in alphas:
            gv = solve_displacement(spec, alpha)
            block = product_unitary(gv, generator_family(spec.num_qubits), "onehot")
            residuals.append(np.linalg.norm(block - restricted_target(spec, alpha)))
        assert max(residuals) <= 1e-8

    @pytest.mark.parametrize("q", [3, 4, 5])
    def test_unitarity(self, q):
        basis = generator_family(q)
        rng = np.random.default_rng(1)
        gam = rng.normal(size=len(basis))
        for space, dim in (("onehot", q), ("full", 2 ** q)):
            prod = product_unitary(gam, basis, space=space)
            assert np.max(np.abs(prod @ prod.conj().T - np.eye(dim))) < 1e-12

    def test_length_mismatch_rejected(self):
        basis = generator_family(3)
        with pytest.raises(ValueError):
            product_unitary([0.1], basis)


class TestGammaDocument:
    def test_round_trip(self, tmp_path):
        from parasim.factorize import write_gamma_document
        spec = ParaSpec("pf", 4)
        gv = solve_displacement(spec, 0.5, seed=0)
        path = tmp_path / "gammas.txt"
        write_gamma_document(path, gv, spec, 0.5)
        loaded, spec2, alpha2 = read_gamma_document(path)
        assert spec2 == spec
        assert alpha2 == 0.5
        assert loaded.gammas == gv.gammas
        assert loaded.labels == gv.labels
        assert loaded.residual == gv.residual
        text = path.read_text()
        assert "factors 20" in text
