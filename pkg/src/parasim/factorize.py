"""Factorization of the displacement propagator exp(i alpha (adag + a))
into an ordered product of single-generator exponentials.

The three-qubit case is solved in closed form through the su(2)-isomorphic
2x2 surrogate (u0 -> sigma_x, u1 -> sigma_y, v0 -> sigma_z); larger
registers are solved numerically on the one-hot block, where the restricted
generators are linearly independent, so block equality lifts to the full
register when applied to one-hot states.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from .algebra import ParaSpec, expm_i_hermitian, ladder_amplitude
from .mapping import (
    GeneratorBasis,
    generator_family,
    pauli_sum_to_matrix,
    restrict_to_onehot,
)

_SIGMA = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class FactorizationError(RuntimeError):
    """Raised when the numeric solver cannot reach the requested residual."""


@dataclass(frozen=True)
class FactorizationProblem:
    spec: ParaSpec
    alpha: float
    basis: GeneratorBasis
    ordering: tuple[int, ...] = ()

    def __post_init__(self):
        if self.basis.num_qubits != self.spec.dim:
            raise ValueError("basis width does not match the spec dimension")
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        if not self.ordering:
            object.__setattr__(self, "ordering", tuple(range(len(self.basis))))
        elif sorted(self.ordering) != list(range(len(self.basis))):
            raise ValueError("ordering must be a permutation of the basis indices")


@dataclass(frozen=True)
class GammaVector:
    """Solved product angles plus the achieved residuals."""

    gammas: tuple[float, ...]
    residual: float
    converged: bool
    labels: tuple[str, ...]
    residual_full: float = float("nan")

    def __post_init__(self):
        if len(self.gammas) != len(self.labels):
            raise ValueError("one gamma per product factor required")
        if self.residual < 0:
            raise ValueError("residual must be nonnegative")


def wrap_angle(theta: float) -> float:
    """Reduce to (-pi, pi]; exact for these generators since every
    restricted eigenvalue is an even integer."""
    out = float((-theta + np.pi) % (2 * np.pi))
    return -(out - np.pi)


def target_coefficients(spec: ParaSpec, alpha: float) -> list[float]:
    """Per-bond weights c(m) = alpha * ladder_amplitude(spec, m+1), so that
    exp(i sum_m c(m)/2 (XX + YY)_m) matches exp(i alpha (a + adag)) on the
    one-hot block."""
    return [alpha * ladder_amplitude(spec, m + 1) for m in range(spec.dim - 1)]


def restricted_generators(basis: GeneratorBasis) -> list[np.ndarray]:
    q = basis.num_qubits
    return [restrict_to_onehot(pauli_sum_to_matrix(g), q) for g in basis.generators]


def restricted_target(spec: ParaSpec, alpha: float) -> np.ndarray:
    """exp(i alpha (a + adag)) as a dense dim x dim unitary."""
    dim = spec.dim
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(1, dim):
        a[n - 1, n] = ladder_amplitude(spec, n)
    return expm_i_hermitian(a + a.conj().T, alpha)


def _su2_components(u: np.ndarray):
    """Write a 2x2 special unitary as w + i(x X + y Y + z Z)."""
    w = float(np.real(np.trace(u)) / 2)
    x = float(np.real(np.trace(_SIGMA["X"] @ u) / 2j))
    y = float(np.real(np.trace(_SIGMA["Y"] @ u) / 2j))
    z = float(np.real(np.trace(_SIGMA["Z"] @ u) / 2j))
    return w, x, y, z


def solve_three_qubit_analytic(a_coef: float, b_coef: float) -> GammaVector:
    """Angles (g0, g1, g2) with exp(i(a u0 + b u1)) = e^{i g0 u0} e^{i g1 u1} e^{i g2 v0}.

    Solved in the 2x2 surrogate exp(i(a X + b Y)) = e^{i g0 X} e^{i g1 Y} e^{i g2 Z};
    the candidate branches of the closed form are checked against the exact
    surrogate matrix and the best one is returned.
    """
    if b_coef == 0.0:
        return GammaVector(gammas=(wrap_angle(a_coef), 0.0, 0.0), residual=0.0,
                           converged=True, labels=("u0", "u1", "v0"))
    if a_coef == 0.0:
        return GammaVector(gammas=(0.0, wrap_angle(b_coef), 0.0), residual=0.0,
                           converged=True, labels=("u0", "u1", "v0"))
    target = expm_i_hermitian(a_coef * _SIGMA["X"] + b_coef * _SIGMA["Y"])
    w, x, y, z = _su2_components(target)
    sin2g1 = float(np.clip(2 * (w * y - x * z), -1.0, 1.0))
    cos2g1_mag = np.sqrt(max(0.0, 1.0 - sin2g1 ** 2))
    if cos2g1_mag < 1e-12:
        # gimbal lock: only g0 -+ g2 is determined; put everything in g0
        candidates = [(np.arctan2(x, w), np.arcsin(sin2g1) / 2, 0.0)]
    else:
        candidates = []
        for branch in (1.0, -1.0):
            g1 = np.arcsin(sin2g1) / 2 if branch > 0 else (np.pi - np.arcsin(sin2g1)) / 2
            g0 = np.arctan2(2 * (w * x + y * z) * branch,
                            (1 - 2 * (x * x + y * y)) * branch) / 2
            g2 = np.arctan2(2 * (w * z + x * y) * branch,
                            (1 - 2 * (y * y + z * z)) * branch) / 2
            candidates.append((g0, g1, g2))
    best = None
    for g0, g1, g2 in candidates:
        for shift in (0.0, np.pi):  # e^{i pi X} = -1 fixes the SU(2) sign
            gam = (wrap_angle(g0 + shift), wrap_angle(g1), wrap_angle(g2))
            prod = expm_i_hermitian(_SIGMA["X"], gam[0]) \
                @ expm_i_hermitian(_SIGMA["Y"], gam[1]) \
                @ expm_i_hermitian(_SIGMA["Z"], gam[2])
            res = float(np.linalg.norm(prod - target))
            if best is None or res < best[0]:
                best = (res, gam)
            if res <= 1e-12:  # principal branch preferred on exact ties
                best = (res, gam)
                break
        else:
            continue
        break
    res, gam = best
    return GammaVector(gammas=gam, residual=res, converged=res <= 1e-10,
                       labels=("u0", "u1", "v0"))


def product_unitary(gammas, basis: GeneratorBasis, space: str = "onehot",
                    ordering=None) -> np.ndarray:
    """Ordered product prod_j exp(i gamma_j G_j) on the one-hot block or the
    full register (leftmost factor applied last)."""
    gam = np.asarray([g for g in (gammas.gammas if isinstance(gammas, GammaVector) else gammas)],
                     dtype=float)
    if len(gam) != len(basis):
        raise ValueError("gamma count does not match the basis")
    if space not in ("onehot", "full"):
        raise ValueError(f"unknown space {space!r}")
    order = tuple(ordering) if ordering is not None else tuple(range(len(basis)))
    q = basis.num_qubits
    if space == "onehot":
        mats = restricted_generators(basis)
        out = np.eye(q, dtype=complex)
    else:
        mats = [pauli_sum_to_matrix(g) for g in basis.generators]
        out = np.eye(2 ** q, dtype=complex)
    for j in order:
        out = out @ expm_i_hermitian(mats[j], gam[j])
    return out


def _full_space_residual(gammas, problem: FactorizationProblem) -> float:
    """Frobenius mismatch of the same product against the full-register
    exponential of the XY target; reported for transparency, not enforced."""
    basis = problem.basis
    q = basis.num_qubits
    coefs = target_coefficients(problem.spec, problem.alpha)
    target = np.zeros((2 ** q, 2 ** q), dtype=complex)
    for m, c in enumerate(coefs):
        target += c / 2 * pauli_sum_to_matrix(basis.generators[_u_index(basis, m)])
    target = expm_i_hermitian(target)
    prod = product_unitary(gammas, basis, space="full", ordering=problem.ordering)
    return float(np.linalg.norm(prod - target))


def _u_index(basis: GeneratorBasis, m: int) -> int:
    return basis.labels.index(f"u{m}")


def solve_numeric(problem: FactorizationProblem, tol: float = 1e-9,
                  seed: int = 0, max_restarts: int = 8) -> GammaVector:
    """Minimize ||prod_j exp(i gamma_j R_j) - T||_F on the one-hot block.

    BFGS with analytic gradients from the product rule, starting from the
    bond coefficients padded with zeros, plus seeded random restarts on
    stagnation.  Raises FactorizationError if the residual never reaches tol.
    """
    basis = problem.basis
    q = basis.num_qubits
    if q < 3:
        raise ValueError("numeric factorization expects at least 3 qubits")
    order = list(problem.ordering)
    all_mats = restricted_generators(basis)
    mats = [all_mats[j] for j in order]
    count = len(mats)
    target = restricted_target(problem.spec, problem.alpha)
    eig = [np.linalg.eigh(m) for m in mats]

    def objective(gam):
        exps = [(v * np.exp(1j * g * w)) @ v.conj().T
                for g, (w, v) in zip(gam, eig)]
        prefix = [np.eye(q, dtype=complex)]
        for e in exps[:-1]:
            prefix.append(prefix[-1] @ e)
        suffix = [np.eye(q, dtype=complex)]
        for e in reversed(exps[1:]):
            suffix.insert(0, e @ suffix[0])
        diff = prefix[-1] @ exps[-1] - target
        value = float(np.real(np.vdot(diff, diff)))
        grad = np.empty(count)
        for j in range(count):
            deriv = prefix[j] @ (1j * mats[j] @ exps[j]) @ suffix[j]
            grad[j] = 2 * np.real(np.vdot(deriv, diff))
        return value, grad

    init = np.zeros(count)
    coefs = target_coefficients(problem.spec, problem.alpha)
    for pos, j in enumerate(order):
        label = basis.labels[j]
        if label.startswith("u"):
            init[pos] = coefs[int(label[1:])] / 2
    rng = np.random.default_rng(seed)
    guess = init
    best_res, best_gam = np.inf, init
    for _ in range(max_restarts + 1):
        fit = minimize(objective, guess, jac=True, method="BFGS",
                       options={"gtol": 1e-15, "maxiter": 5000})
        res = float(np.sqrt(max(fit.fun, 0.0)))
        if res < best_res:
            best_res, best_gam = res, fit.x
        if best_res <= tol:
            break
        guess = init + rng.normal(scale=0.5, size=count)
    if best_res > tol:
        raise FactorizationError(
            f"factorization did not converge: best residual {best_res:.3e} > tol {tol:.1e}")
    # angles are reported in basis order regardless of the product ordering
    gam_by_basis = np.empty(count)
    for pos, j in enumerate(order):
        gam_by_basis[j] = wrap_angle(best_gam[pos])
    full_res = _full_space_residual(gam_by_basis, problem)
    return GammaVector(gammas=tuple(float(g) for g in gam_by_basis),
                       residual=best_res, converged=True,
                       labels=basis.labels, residual_full=full_res)


def solve_displacement(spec: ParaSpec, alpha: float, tol: float = 1e-9,
                       seed: int = 0) -> GammaVector:
    """Factor exp(i alpha (a + adag)) for the given spec: closed form on
    three qubits, numeric elsewhere.  Full-register residual is attached in
    both cases."""
    basis = generator_family(spec.num_qubits)
    problem = FactorizationProblem(spec=spec, alpha=alpha, basis=basis)
    if spec.num_qubits == 3:
        coefs = target_coefficients(spec, alpha)
        gv = solve_three_qubit_analytic(coefs[0] / 2, coefs[1] / 2)
        block = product_unitary(gv, basis, space="onehot")
        res = float(np.linalg.norm(block - restricted_target(spec, alpha)))
        full = _full_space_residual(gv.gammas, problem)
        return GammaVector(gammas=gv.gammas, residual=res,
                           converged=res <= max(tol, 1e-10),
                           labels=gv.labels, residual_full=full)
    return solve_numeric(problem, tol=tol, seed=seed)


def write_gamma_document(path, gv: GammaVector, spec: ParaSpec, alpha: float) -> None:
    """Structured-text dump of a factorization (lossless float round-trip)."""
    lines = [
        "# parasim displacement factorization",
        f"kind {spec.kind}",
        f"p {spec.p}",
        f"np {spec.np}",
        f"alpha {alpha:.17g}",
        f"labels {' '.join(gv.labels)}",
        f"gammas {' '.join(f'{g:.17g}' for g in gv.gammas)}",
        f"factors {2 * len(gv.labels)}",
        f"residual_onehot {gv.residual:.17g}",
        f"residual_full {gv.residual_full:.17g}",
        f"converged {str(gv.converged).lower()}",
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_gamma_document(path):
    """Inverse of write_gamma_document; returns (GammaVector, ParaSpec, alpha)."""
    fields = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(" ")
        fields[key] = value
    spec = ParaSpec(kind=fields["kind"], p=int(fields["p"]), np=int(fields["np"]))
    gv = GammaVector(
        gammas=tuple(float(x) for x in fields["gammas"].split()),
        residual=float(fields["residual_onehot"]),
        converged=fields["converged"] == "true",
        labels=tuple(fields["labels"].split()),
        residual_full=float(fields["residual_full"]),
    )
    return gv, spec, float(fields["alpha"])
