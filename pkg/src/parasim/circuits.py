"""Lowering of factorized displacement products to the native trapped-ion
gate set: single-qubit rotations plus two-qubit XX entanglers.

Conventions (pinned once): RX/RY/RZ(theta) = exp(-i theta P / 2) and
XX(chi) = exp(-i chi X.X / 2), so exp(i gamma X.X) compiles to a single
XX(-2 gamma).  CNOT and CZ exist internally as macros over that set.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .mapping import MAX_DENSE_QUBITS, GeneratorBasis, PauliString

_RX = "RX"
_RY = "RY"
_RZ = "RZ"
_XP = "X"
_XX = "XX"
_ROTATIONS = (_RX, _RY, _RZ)


@dataclass(frozen=True)
class Gate:
    """One native gate: RX/RY/RZ(theta, q), X(q) or XX(chi, q1, q2)."""

    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if self.kind in _ROTATIONS or self.kind == _XP:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} acts on exactly one qubit")
        elif self.kind == _XX:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("XX needs two distinct qubits")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")


def rx(theta: float, q: int) -> Gate:
    return Gate(_RX, (q,), theta)


def ry(theta: float, q: int) -> Gate:
    return Gate(_RY, (q,), theta)


def rz(theta: float, q: int) -> Gate:
    return Gate(_RZ, (q,), theta)


def xpauli(q: int) -> Gate:
    return Gate(_XP, (q,))


def xx(chi: float, q1: int, q2: int) -> Gate:
    return Gate(_XX, (q1, q2), chi)


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q < 0 or q >= self.num_qubits for q in g.qubits):
                raise ValueError(f"gate {g} outside {self.num_qubits}-qubit register")

    def __len__(self) -> int:
        return len(self.gates)


def _inverse(gate: Gate) -> Gate:
    if gate.kind == _XP:
        return gate
    return Gate(gate.kind, gate.qubits, -gate.angle)


def _cnot(control: int, target: int) -> list[Gate]:
    """CNOT from one XX(pi/2) plus four rotations (exact up to global phase)."""
    return [
        ry(-np.pi / 2, control),
        rx(np.pi / 2, target),
        rx(-np.pi / 2, control),
        xx(np.pi / 2, control, target),
        ry(np.pi / 2, control),
    ]


def _hadamard(q: int) -> list[Gate]:
    return [rz(np.pi, q), ry(np.pi / 2, q)]


def _cz(a: int, b: int) -> list[Gate]:
    return _hadamard(b) + _cnot(a, b) + _hadamard(b)


def compile_pauli_exp(gamma: float, string: PauliString) -> Circuit:
    """Circuit for exp(i gamma * string), exact up to global phase.

    Plain XX is one native entangler; YY conjugates it with z rotations;
    longer words (X/Y ends, contiguous interior Z) rotate Y ends onto X,
    fold the X Z..Z X core onto the anchor qubit with CNOT/CZ macros, apply
    the central RX(-2 gamma) and uncompute.
    """
    q = string.num_qubits
    support = [i for i, c in enumerate(string.letters) if c != "I"]
    if len(support) < 2:
        raise ValueError("need at least two non-identity letters")
    if support != list(range(support[0], support[-1] + 1)):
        raise ValueError("support must be contiguous")
    first, last = support[0], support[-1]
    interior = support[1:-1]
    if any(string.letters[i] != "Z" for i in interior):
        raise ValueError("interior letters must be Z")
    ends = (string.letters[first], string.letters[last])
    if any(e not in "XY" for e in ends):
        raise ValueError("end letters must be X or Y")
    angle = gamma * string.coeff

    if len(support) == 2 and ends == ("X", "X"):
        return Circuit(q, [xx(-2 * angle, first, last)])
    if len(support) == 2 and ends == ("Y", "Y"):
        gates = [rz(-np.pi / 2, first), rz(-np.pi / 2, last),
                 xx(-2 * angle, first, last),
                 rz(np.pi / 2, first), rz(np.pi / 2, last)]
        return Circuit(q, gates)

    pre: list[Gate] = []
    for i in (first, last):
        if string.letters[i] == "Y":
            pre.append(rz(-np.pi / 2, i))
    fold = _cnot(first, last)
    for j in interior:
        fold += _cz(first, j)
    unfold = [_inverse(g) for g in reversed(fold)]
    post = [_inverse(g) for g in reversed(pre)]
    gates = pre + fold + [rx(-2 * angle, first)] + unfold + post
    return Circuit(q, gates)


def compile_displacement(gammas, basis: GeneratorBasis, optimize: bool = True) -> Circuit:
    """Lower a factored displacement to native gates.

    Each generator contributes its two commuting Pauli words as separate
    exponential factors (2 * Q(Q-1)/2 factors in total); the factor for the
    leftmost matrix in the product is emitted last.  Runs the cancellation
    pass unless a fixed circuit template is wanted (e.g. constant gate
    counts across evolution times).
    """
    gam = list(gammas.gammas) if hasattr(gammas, "gammas") else list(gammas)
    if len(gam) != len(basis):
        raise ValueError("gamma count does not match the basis")
    q = basis.num_qubits
    gates: list[Gate] = []
    for g, term_sum in reversed(list(zip(gam, basis.generators))):
        for term in term_sum.terms:
            gates.extend(compile_pauli_exp(g, term).gates)
    circuit = Circuit(q, gates)
    return optimize_cancel(circuit) if optimize else circuit


def _same_axis(a: Gate, b: Gate) -> bool:
    if a.kind != b.kind:
        return False
    if a.kind == _XX:
        return set(a.qubits) == set(b.qubits)
    return a.qubits == b.qubits


def _is_zero_angle(g: Gate, tol: float = 1e-12) -> bool:
    """Zero mod 2 pi; dropping such a gate changes at most the global phase."""
    if g.kind == _XP:
        return False
    r = abs(g.angle) % (2 * np.pi)
    return min(r, 2 * np.pi - r) < tol


def optimize_cancel(circuit: Circuit) -> Circuit:
    """Merge same-axis same-qubit rotations (summing angles), cancel X pairs
    and drop zero-angle gates (mod 2 pi, valid up to global phase), iterated
    to a fixed point.  A merge partner may sit behind gates with disjoint
    support, which commute trivially, so conjugation scaffolding around
    zero-angle centers telescopes away completely."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        out: list[Gate] = []
        for g in gates:
            if _is_zero_angle(g):
                changed = True
                continue
            support = set(g.qubits)
            partner = None
            for k in range(len(out) - 1, -1, -1):
                prev = out[k]
                if _same_axis(prev, g):
                    partner = k
                    break
                if support & set(prev.qubits):
                    break
            if partner is not None:
                prev = out.pop(partner)
                changed = True
                if g.kind == _XP:
                    continue  # X X = identity
                merged = Gate(g.kind, prev.qubits, prev.angle + g.angle)
                if not _is_zero_angle(merged):
                    out.insert(partner, merged)
                continue
            out.append(g)
        gates = out
    return Circuit(circuit.num_qubits, gates)


def gate_counts(circuit: Circuit) -> dict:
    one = sum(1 for g in circuit.gates if len(g.qubits) == 1)
    two = sum(1 for g in circuit.gates if len(g.qubits) == 2)
    return {"one_qubit": one, "two_qubit": two}


# --- dense execution of small circuits -------------------------------------

def _gate_kernel(gate: Gate) -> np.ndarray:
    half = gate.angle / 2
    c, s = np.cos(half), np.sin(half)
    if gate.kind == _RX:
        return np.array([[c, -1j * s], [-1j * s, c]])
    if gate.kind == _RY:
        return np.array([[c, -s], [s, c]])
    if gate.kind == _RZ:
        return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]])
    if gate.kind == _XP:
        return np.array([[0, 1], [1, 0]], dtype=complex)
    # XX(chi) = cos(chi/2) - i sin(chi/2) X.X on the pair
    eye4 = np.eye(4, dtype=complex)
    xxop = np.fliplr(np.eye(4)).astype(complex)
    return c * eye4 - 1j * s * xxop


def apply_gate_batch(amps: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    """Apply one gate to amplitudes of shape (2**Q,) or (2**Q, batch)."""
    single = amps.ndim == 1
    block = amps[:, None] if single else amps
    batch = block.shape[1]
    tensor = block.reshape([2] * num_qubits + [batch])
    kernel = _gate_kernel(gate)
    if len(gate.qubits) == 1:
        qn = gate.qubits[0]
        tensor = np.moveaxis(tensor, qn, 0)
        tensor = np.tensordot(kernel, tensor, axes=([1], [0]))
        tensor = np.moveaxis(tensor, 0, qn)
    else:
        q1, q2 = gate.qubits
        tensor = np.moveaxis(tensor, (q1, q2), (0, 1))
        shape = tensor.shape
        tensor = np.tensordot(kernel.reshape(2, 2, 2, 2), tensor, axes=([2, 3], [0, 1]))
        tensor = tensor.reshape(shape)
        tensor = np.moveaxis(tensor, (0, 1), (q1, q2))
    flat = tensor.reshape(2 ** num_qubits, batch)
    return flat[:, 0] if single else flat


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Full 2^Q unitary of the circuit (gates applied in list order)."""
    q = circuit.num_qubits
    if q > MAX_DENSE_QUBITS:
        raise ValueError(f"refusing dense unitary for {q} > {MAX_DENSE_QUBITS} qubits")
    u = np.eye(2 ** q, dtype=complex)
    for gate in circuit.gates:
        u = apply_gate_batch(u, gate, q)
    return u


# --- plain-text circuit format ----------------------------------------------

def circuit_to_text(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.num_qubits}"]
    for g in circuit.gates:
        if g.kind == _XP:
            lines.append(f"X {g.qubits[0]}")
        elif g.kind == _XX:
            lines.append(f"XX {g.qubits[0]} {g.qubits[1]} {g.angle:.17g}")
        else:
            lines.append(f"{g.kind} {g.qubits[0]} {g.angle:.17g}")
    return "\n".join(lines) + "\n"


def circuit_from_text(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("qubits "):
        raise ValueError("circuit text must start with a 'qubits Q' header")
    q = int(lines[0].split()[1])
    gates = []
    for ln in lines[1:]:
        parts = ln.split()
        kind = parts[0]
        if kind == "X":
            gates.append(xpauli(int(parts[1])))
        elif kind == "XX":
            gates.append(xx(float(parts[3]), int(parts[1]), int(parts[2])))
        elif kind in _ROTATIONS:
            gates.append(Gate(kind, (int(parts[1]),), float(parts[2])))
        else:
            raise ValueError(f"unknown gate line {ln!r}")
    return Circuit(q, gates)


def write_circuit(path, circuit: Circuit) -> None:
    Path(path).write_text(circuit_to_text(circuit))


def read_circuit(path) -> Circuit:
    return circuit_from_text(Path(path).read_text())
