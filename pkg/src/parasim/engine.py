"""Dense state-vector execution with trajectory noise, seeded shot sampling,
confusion-matrix SPAM correction and one-hot post-selection.

Noise is stochastic (quantum-jump style): preparation bit flips, a uniform
non-identity Pauli after each gate with the depolarizing probability, and
classical readout bit flips.  Memory stays at one 2^Q vector; ensemble
statistics come from re-running trajectories per shot.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuits import Circuit, apply_gate_batch


class EmptyShotSetError(ValueError):
    """Raised when an observable is requested from zero retained shots."""


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.amps.shape != (2 ** self.num_qubits,):
            raise ValueError("amplitude length does not match the qubit count")


@dataclass(frozen=True)
class NoiseModel:
    """Preparation flips, readout confusion and per-gate depolarizing rates."""

    p_prep_flip: float = 0.0
    eps01: float = 0.0  # P(read 1 | true 0)
    eps10: float = 0.0  # P(read 0 | true 1)
    p_depol_1q: float = 0.0
    p_depol_2q: float = 0.0

    def __post_init__(self):
        for name in ("p_prep_flip", "eps01", "eps10", "p_depol_1q", "p_depol_2q"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise ValueError(f"{name}={v} outside [0, 1)")
        if self.eps01 + self.eps10 >= 1.0:
            raise ValueError("confusion matrix is singular (eps01 + eps10 >= 1)")

    @property
    def has_prep_noise(self) -> bool:
        return self.p_prep_flip > 0.0

    @property
    def has_gate_noise(self) -> bool:
        return self.p_depol_1q > 0.0 or self.p_depol_2q > 0.0

    @property
    def has_readout_noise(self) -> bool:
        return self.eps01 > 0.0 or self.eps10 > 0.0


@dataclass(frozen=True)
class ShotSet:
    """Seeded measurement outcomes as bitstring counts."""

    counts: dict
    shots: int
    seed: int
    retained_fraction: float = 1.0

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts must sum to the shot total")
        if not 0.0 <= self.retained_fraction <= 1.0:
            raise ValueError("retained_fraction outside [0, 1]")


@dataclass(frozen=True)
class Marginals:
    """Per-qubit P(read 1) plus a (possibly quasi-) histogram.

    After confusion-matrix inversion the values may leave [0, 1]; they are
    flagged, never clamped, since the number observables stay well-defined
    linear functionals.
    """

    p1: np.ndarray
    histogram: dict
    shots: int
    stderr_p1: np.ndarray
    out_of_range: bool
    retained_fraction: float = 1.0

    @property
    def num_qubits(self) -> int:
        return len(self.p1)


def is_onehot(bitstring: str) -> bool:
    return bitstring.count("1") == 1


def prepare_initial(num_qubits: int, noise: NoiseModel | None = None,
                    rng: np.random.Generator | None = None) -> StateVector:
    """|0..0> with optional per-qubit preparation flips, then X on qubit 0,
    which ideally lands the register on the vacuum one-hot state |10..0>."""
    if num_qubits < 1:
        raise ValueError("need at least one qubit")
    bits = np.zeros(num_qubits, dtype=int)
    if noise is not None and noise.has_prep_noise:
        if rng is None:
            rng = np.random.default_rng(0)
        bits ^= (rng.random(num_qubits) < noise.p_prep_flip).astype(int)
    bits[0] ^= 1
    amps = np.zeros(2 ** num_qubits, dtype=complex)
    index = 0
    for b in bits:
        index = (index << 1) | int(b)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


_PAULI_1Q = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def _apply_pauli(amps: np.ndarray, which: int, qubit: int, num_qubits: int) -> np.ndarray:
    tensor = amps.reshape([2] * num_qubits)
    tensor = np.moveaxis(tensor, qubit, 0)
    tensor = np.tensordot(_PAULI_1Q[which], tensor, axes=([1], [0]))
    tensor = np.moveaxis(tensor, 0, qubit)
    return tensor.reshape(-1)


def apply_circuit(state: StateVector, circuit: Circuit,
                  noise: NoiseModel | None = None,
                  rng: np.random.Generator | None = None) -> StateVector:
    """Run the circuit gate by gate; with noise, each gate is followed by a
    uniform non-identity Pauli on its support with the model's probability."""
    if state.num_qubits != circuit.num_qubits:
        raise ValueError("state and circuit widths differ")
    q = state.num_qubits
    amps = state.amps.copy()
    noisy = noise is not None and noise.has_gate_noise
    if noisy and rng is None:
        rng = np.random.default_rng(0)
    for gate in circuit.gates:
        amps = apply_gate_batch(amps, gate, q)
        if not noisy:
            continue
        prob = noise.p_depol_1q if len(gate.qubits) == 1 else noise.p_depol_2q
        if prob <= 0.0 or rng.random() >= prob:
            continue
        if len(gate.qubits) == 1:
            amps = _apply_pauli(amps, rng.integers(3), gate.qubits[0], q)
        else:
            choice = 1 + rng.integers(15)  # uniform over 15 non-identity pairs
            first, second = divmod(choice, 4)
            if first:
                amps = _apply_pauli(amps, first - 1, gate.qubits[0], q)
            if second:
                amps = _apply_pauli(amps, second - 1, gate.qubits[1], q)
        norm = np.linalg.norm(amps)
        amps = amps / norm
    return StateVector(q, amps)


def _bits_to_strings(bits: np.ndarray) -> list[str]:
    return ["".join("1" if b else "0" for b in row) for row in bits]


def _counts_from_strings(strings) -> dict:
    counts: dict = {}
    for s in strings:
        counts[s] = counts.get(s, 0) + 1
    return counts


def sample_shots(state: StateVector, shots: int, noise: NoiseModel | None = None,
                 seed: int = 0) -> ShotSet:
    """Sample bitstrings from |amps|^2, flipping each read bit with the
    confusion rates when a noise model is given.  Fixed-state sampling; use
    run_and_sample for per-shot trajectory resampling under gate noise."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    q = state.num_qubits
    rng = np.random.default_rng(seed)
    probs = np.abs(state.amps) ** 2
    probs = probs / probs.sum()
    levels = rng.choice(2 ** q, size=shots, p=probs)
    bits = (levels[:, None] >> np.arange(q - 1, -1, -1)) & 1
    if noise is not None and noise.has_readout_noise:
        bits = _readout_flip(bits, noise, rng)
    return ShotSet(counts=_counts_from_strings(_bits_to_strings(bits)),
                   shots=shots, seed=seed)


def _readout_flip(bits: np.ndarray, noise: NoiseModel, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(bits.shape)
    flip = np.where(bits == 0, u < noise.eps01, u < noise.eps10)
    return bits ^ flip.astype(int)


_PREFIX_QUBIT_LIMIT = 6  # prefix-product fast path memory cap


def _prefix_unitaries(circuit: Circuit) -> list[np.ndarray]:
    """prefix[j] = product of the first j gates as a dense matrix."""
    q = circuit.num_qubits
    prefixes = [np.eye(2 ** q, dtype=complex)]
    for gate in circuit.gates:
        prefixes.append(apply_gate_batch(prefixes[-1], gate, q))
    return prefixes


def _trajectory_amps(circuit: Circuit, init_index: int, events,
                     prefixes) -> np.ndarray:
    """Final state for one noisy trajectory.

    events: list of (gate_position_1based, pauli_recipe); with prefix
    matrices available only O(#events) matvecs are needed, otherwise the
    gates are replayed one by one.
    """
    q = circuit.num_qubits
    dim = 2 ** q
    if prefixes is not None:
        vec = np.zeros(dim, dtype=complex)
        vec[init_index] = 1.0
        applied = 0
        for position, recipe in events:
            vec = prefixes[position] @ (prefixes[applied].conj().T @ vec)
            for which, qubit in recipe:
                vec = _apply_pauli(vec, which, qubit, q)
            applied = position
        return prefixes[len(circuit.gates)] @ (prefixes[applied].conj().T @ vec)
    amps = np.zeros(dim, dtype=complex)
    amps[init_index] = 1.0
    pending = dict(events)
    for j, gate in enumerate(circuit.gates, start=1):
        amps = apply_gate_batch(amps, gate, q)
        if j in pending:
            for which, qubit in pending[j]:
                amps = _apply_pauli(amps, which, qubit, q)
    return amps


def _pauli_recipe(gate, u: float):
    """Map one uniform draw to a non-identity Pauli on the gate's support."""
    if len(gate.qubits) == 1:
        return [(min(int(u * 3), 2), gate.qubits[0])]
    choice = 1 + min(int(u * 15), 14)
    first, second = divmod(choice, 4)
    recipe = []
    if first:
        recipe.append((first - 1, gate.qubits[0]))
    if second:
        recipe.append((second - 1, gate.qubits[1]))
    return recipe


def run_and_sample(circuit: Circuit, shots: int, noise: NoiseModel | None = None,
                   seed: int = 0, resample: bool = True) -> ShotSet:
    """Prepare |10..0>, run the circuit and measure `shots` times.

    With stochastic preparation/gate noise and resample=True (the default),
    every shot gets its own trajectory; all stochastic decisions are drawn
    up front from one seeded generator, so results are reproducible.  Shots
    whose error coins all come up clean share the ideal state.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    q = circuit.num_qubits
    stochastic = noise is not None and (noise.has_prep_noise or noise.has_gate_noise)
    if not stochastic:
        ideal = apply_circuit(prepare_initial(q), circuit)
        return sample_shots(ideal, shots, noise, seed)
    if not resample:
        rng = np.random.default_rng([seed, 0])
        state = apply_circuit(prepare_initial(q, noise, rng), circuit, noise, rng)
        return sample_shots(state, shots, noise, seed)

    master = np.random.default_rng(seed)
    n_gates = len(circuit.gates)
    gate_probs = np.array([noise.p_depol_1q if len(g.qubits) == 1 else noise.p_depol_2q
                           for g in circuit.gates])
    prep_coins = master.random((shots, q)) < noise.p_prep_flip
    gate_coins = master.random((shots, n_gates)) < gate_probs
    pauli_u = master.random((shots, n_gates))
    meas_u = master.random((shots, q))
    shot_u = master.random(shots)

    prefixes = _prefix_unitaries(circuit) if q <= _PREFIX_QUBIT_LIMIT else None
    ideal = apply_circuit(prepare_initial(q), circuit)
    ideal_cdf = np.cumsum(np.abs(ideal.amps) ** 2)
    bit_shift = np.arange(q - 1, -1, -1)
    bits_out = np.empty((shots, q), dtype=int)
    for s in range(shots):
        dirty = prep_coins[s].any() or gate_coins[s].any()
        if dirty:
            init_bits = prep_coins[s].astype(int)
            init_bits[0] ^= 1
            init_index = int(init_bits @ (1 << bit_shift))
            events = [(j + 1, _pauli_recipe(circuit.gates[j], pauli_u[s, j]))
                      for j in np.flatnonzero(gate_coins[s])]
            amps = _trajectory_amps(circuit, init_index, events, prefixes)
            cdf = np.cumsum(np.abs(amps) ** 2)
        else:
            cdf = ideal_cdf
        level = int(np.searchsorted(cdf, shot_u[s] * cdf[-1], side="right"))
        level = min(level, 2 ** q - 1)
        bits_out[s] = (level >> bit_shift) & 1
    if noise.has_readout_noise:
        flip = np.where(bits_out == 0, meas_u < noise.eps01, meas_u < noise.eps10)
        bits_out ^= flip.astype(int)
    return ShotSet(counts=_counts_from_strings(_bits_to_strings(bits_out)),
                   shots=shots, seed=seed)


def _confusion(noise: NoiseModel) -> np.ndarray:
    return np.array([[1 - noise.eps01, noise.eps10],
                     [noise.eps01, 1 - noise.eps10]])


def spam_correct(shotset: ShotSet, noise: NoiseModel) -> Marginals:
    """Invert the tensor product of per-qubit confusion matrices on the
    empirical distribution.  Out-of-range values are flagged, not clamped."""
    if not shotset.counts:
        raise EmptyShotSetError("cannot correct an empty shot set")
    q = len(next(iter(shotset.counts)))
    conf = _confusion(noise)
    if abs(np.linalg.det(conf)) < 1e-12:
        raise ValueError("confusion matrix is singular")
    inv = np.linalg.inv(conf)
    probs = np.zeros(2 ** q)
    for bstr, count in shotset.counts.items():
        probs[int(bstr, 2)] = count / shotset.shots
    tensor = probs.reshape([2] * q)
    for axis in range(q):
        tensor = np.tensordot(inv, np.moveaxis(tensor, axis, 0), axes=([1], [0]))
        tensor = np.moveaxis(tensor, 0, axis)
    corrected = tensor.reshape(-1)
    hist = {format(i, f"0{q}b"): float(w) for i, w in enumerate(corrected)
            if abs(w) > 1e-15}
    masks = (np.arange(2 ** q)[:, None] >> np.arange(q - 1, -1, -1)) & 1
    p1 = corrected @ masks
    # raw marginal error, scaled by the per-qubit inversion factor
    raw_p1 = probs @ masks
    denom = 1.0 - noise.eps01 - noise.eps10
    stderr = np.sqrt(np.clip(raw_p1 * (1 - raw_p1), 0.0, None) / shotset.shots) / abs(denom)
    flagged = bool(np.any(p1 < -1e-12) or np.any(p1 > 1 + 1e-12))
    return Marginals(p1=p1, histogram=hist, shots=shotset.shots,
                     stderr_p1=stderr, out_of_range=flagged,
                     retained_fraction=shotset.retained_fraction)


def postselect(shotset: ShotSet) -> ShotSet:
    """Keep only one-hot bitstrings; retained counts stay raw and the kept
    fraction is recorded.  Zero retained shots yield an explicitly empty set."""
    kept = {b: c for b, c in shotset.counts.items() if is_onehot(b)}
    total = sum(kept.values())
    fraction = total / shotset.shots if shotset.shots else 0.0
    return ShotSet(counts=kept, shots=total, seed=shotset.seed,
                   retained_fraction=fraction)


# --- plain-text shot set format ----------------------------------------------

def shotset_to_text(shotset: ShotSet, noise: NoiseModel | None = None) -> str:
    lines = [
        "# parasim shot set",
        f"# seed {shotset.seed}",
        f"# shots {shotset.shots}",
        f"# retained_fraction {shotset.retained_fraction:.17g}",
    ]
    if noise is not None:
        lines.append(
            "# noise p_prep_flip=%.17g eps01=%.17g eps10=%.17g p_depol_1q=%.17g p_depol_2q=%.17g"
            % (noise.p_prep_flip, noise.eps01, noise.eps10,
               noise.p_depol_1q, noise.p_depol_2q))
    for bstr in sorted(shotset.counts):
        lines.append(f"{bstr} {shotset.counts[bstr]}")
    return "\n".join(lines) + "\n"


def write_shotset(path, shotset: ShotSet, noise: NoiseModel | None = None) -> None:
    Path(path).write_text(shotset_to_text(shotset, noise))


def read_shotset(path) -> ShotSet:
    seed, retained = 0, 1.0
    counts: dict = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "seed":
                seed = int(parts[1])
            elif len(parts) == 2 and parts[0] == "retained_fraction":
                retained = float(parts[1])
            continue
        bstr, count = line.split()
        counts[bstr] = int(count)
    return ShotSet(counts=counts, shots=sum(counts.values()), seed=seed,
                   retained_fraction=retained)
