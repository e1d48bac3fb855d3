"""One-hot qubit encoding of Fock levels and the XY-model image of the
driven para-particle oscillator.

Level n maps to the register basis state with qubit n flipped (qubit 0
is the leftmost / most significant position).  The hopping Hamiltonian
and the whole u/v/w/a generator family preserve that single-excitation
subspace; `restrict_to_onehot` extracts the block that carries the Fock
dynamics.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import ParaSpec, ladder_amplitude

MAX_DENSE_QUBITS = 12

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# span-k generators are labeled u (2 qubits), v (3), w (4), a (5); wider
# spans continue alphabetically from b.
_SPAN_LETTER = {2: "u", 3: "v", 4: "w", 5: "a"}


def _span_letter(k: int) -> str:
    return _SPAN_LETTER.get(k) or chr(ord("b") + k - 6)


@dataclass(frozen=True)
class PauliString:
    """One real-weighted Pauli word over Q qubits, e.g. 0.5 * 'XZY'."""

    coeff: float
    letters: str

    def __post_init__(self):
        if len(self.letters) < 1:
            raise ValueError("empty Pauli string")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise ValueError(f"invalid Pauli letters {bad}")
        if not np.isfinite(self.coeff):
            raise ValueError("non-finite coefficient")

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    def matrix(self) -> np.ndarray:
        m = np.array([[1.0 + 0j]])
        for c in self.letters:
            m = np.kron(m, _PAULI[c])
        return self.coeff * m


@dataclass(frozen=True)
class PauliSum:
    """Sum of PauliStrings over a common register; Hermitian by construction."""

    terms: tuple[PauliString, ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("PauliSum needs at least one term")
        widths = {t.num_qubits for t in self.terms}
        if len(widths) != 1:
            raise ValueError(f"mixed register widths {widths}")
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def num_qubits(self) -> int:
        return self.terms[0].num_qubits


@dataclass(frozen=True)
class GeneratorBasis:
    """The ordered multi-qubit generator family used to factor displacements."""

    generators: tuple[PauliSum, ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.generators) != len(self.labels):
            raise ValueError("labels do not match generators")

    @property
    def num_qubits(self) -> int:
        return self.generators[0].num_qubits

    def __len__(self) -> int:
        return len(self.generators)


def encode_fock(n: int, num_qubits: int) -> str:
    """Bitstring for level n: the nth qubit flipped, e.g. (0, 3) -> '100'."""
    if not 0 <= n < num_qubits:
        raise ValueError(f"level {n} does not fit in {num_qubits} qubits")
    return "".join("1" if q == n else "0" for q in range(num_qubits))


def onehot_index(n: int, num_qubits: int) -> int:
    """Position of the one-hot level-n state in the 2^Q amplitude vector."""
    if not 0 <= n < num_qubits:
        raise ValueError(f"level {n} does not fit in {num_qubits} qubits")
    return 1 << (num_qubits - 1 - n)


def build_xy_hamiltonian(spec: ParaSpec, g: float) -> PauliSum:
    """H = g sum_m c(m)/2 (X_m X_m+1 + Y_m Y_m+1), with bond weights
    c(m) = ladder_amplitude(spec, m+1); restricts to g(a + adag) on the
    one-hot subspace with no rescaling."""
    q = spec.num_qubits
    terms = []
    for m in range(q - 1):
        c = g * ladder_amplitude(spec, m + 1) / 2
        for xy in "XY":
            letters = "I" * m + xy + xy + "I" * (q - m - 2)
            terms.append(PauliString(c, letters))
    return PauliSum(tuple(terms))


def number_operator_pauli(num_qubits: int) -> PauliSum:
    """Diagonal number observable sum_m m/2 (1 - Z_m), under the convention
    that a flipped qubit reads 1; restricts to diag(0..Q-1) on one-hot states."""
    q = num_qubits
    total = sum(m / 2 for m in range(q))
    terms = [PauliString(total, "I" * q)]
    for m in range(1, q):
        terms.append(PauliString(-m / 2, "I" * m + "Z" + "I" * (q - m - 1)))
    return PauliSum(tuple(terms))


def _generator(num_qubits: int, anchor: int, span: int) -> PauliSum:
    """Two-term generator with X/Y ends and interior Z letters.

    Even spans pair XZ..ZX + YZ..ZY; odd spans pair XZ..ZY - YZ..ZX (the
    relative minus is forced by the five-qubit commutator table and matches
    the printed three-qubit v generator).
    """
    inner = "Z" * (span - 2)
    pre = "I" * anchor
    post = "I" * (num_qubits - anchor - span)
    if span % 2 == 0:
        first = PauliString(1.0, pre + "X" + inner + "X" + post)
        second = PauliString(1.0, pre + "Y" + inner + "Y" + post)
    else:
        first = PauliString(1.0, pre + "X" + inner + "Y" + post)
        second = PauliString(-1.0, pre + "Y" + inner + "X" + post)
    return PauliSum((first, second))


def generator_family(num_qubits: int) -> GeneratorBasis:
    """All Q(Q-1)/2 span-k generators, ordered by their rightmost qubit and
    then by growing span (u0, u1, v0, u2, v1, w0, ...)."""
    if num_qubits < 2:
        raise ValueError("generator family needs at least 2 qubits")
    gens, labels = [], []
    for right in range(1, num_qubits):
        for span in range(2, right + 2):
            anchor = right - span + 1
            gens.append(_generator(num_qubits, anchor, span))
            labels.append(f"{_span_letter(span)}{anchor}")
    return GeneratorBasis(tuple(gens), tuple(labels))


def pauli_sum_to_matrix(h: PauliSum) -> np.ndarray:
    """Dense 2^Q x 2^Q matrix of a PauliSum (qubit 0 most significant)."""
    q = h.num_qubits
    if q > MAX_DENSE_QUBITS:
        raise ValueError(f"refusing dense matrix for {q} > {MAX_DENSE_QUBITS} qubits")
    out = np.zeros((2 ** q, 2 ** q), dtype=complex)
    for term in h.terms:
        out += term.matrix()
    return out


def restrict_to_onehot(op: np.ndarray, num_qubits: int) -> np.ndarray:
    """Q x Q block <onehot(i)| op |onehot(j)> with levels ordered 0..Q-1."""
    if op.shape != (2 ** num_qubits, 2 ** num_qubits):
        raise ValueError(f"operator shape {op.shape} does not match {num_qubits} qubits")
    idx = [onehot_index(i, num_qubits) for i in range(num_qubits)]
    return op[np.ix_(idx, idx)]


def commutator_table(basis: GeneratorBasis, tol: float = 1e-12):
    """Structure constants of the generator family.

    Returns {(label_i, label_j): None | (sign, label_k)} meaning
    [G_i, G_j] = 0 or sign * 2i * G_k.  Any commutator outside that span
    signals a generator-construction bug and raises.
    """
    mats = [pauli_sum_to_matrix(g) for g in basis.generators]
    labels = basis.labels
    table = {}
    for i, gi in enumerate(mats):
        for j, gj in enumerate(mats):
            comm = gi @ gj - gj @ gi
            if np.max(np.abs(comm)) <= tol:
                table[(labels[i], labels[j])] = None
                continue
            hit = None
            for k, gk in enumerate(mats):
                for sign in (1, -1):
                    if np.max(np.abs(comm - sign * 2j * gk)) <= tol:
                        hit = (sign, labels[k])
                        break
                if hit:
                    break
            if hit is None:
                raise ValueError(
                    f"[{labels[i]}, {labels[j]}] is not 0 or +-2i times a basis element"
                )
            table[(labels[i], labels[j])] = hit
    return table


def check_jacobi(basis: GeneratorBasis, tol: float = 1e-12) -> bool:
    """True iff [A,[B,C]] + [B,[C,A]] + [C,[A,B]] vanishes for all triples."""
    mats = [pauli_sum_to_matrix(g) for g in basis.generators]

    def comm(a, b):
        return a @ b - b @ a

    n = len(mats)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total = comm(mats[i], comm(mats[j], mats[k])) \
                    + comm(mats[j], comm(mats[k], mats[i])) \
                    + comm(mats[k], comm(mats[i], mats[j]))
                if np.max(np.abs(total)) > tol:
                    return False
    return True
