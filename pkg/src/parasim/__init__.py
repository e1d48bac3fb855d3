"""parasim: digital simulation of driven para-fermion and para-boson
oscillators on a one-hot qubit register."""

from .algebra import (
    ParaSpec,
    FockOperatorSet,
    TruncationReport,
    beta_constant,
    build_fock_ops,
    displaced_vacuum_exact,
    ladder_amplitude,
    verify_truncation_identity,
)
from .mapping import (
    GeneratorBasis,
    PauliString,
    PauliSum,
    build_xy_hamiltonian,
    check_jacobi,
    commutator_table,
    encode_fock,
    generator_family,
    pauli_sum_to_matrix,
    restrict_to_onehot,
)
from .factorize import (
    FactorizationError,
    FactorizationProblem,
    GammaVector,
    product_unitary,
    solve_displacement,
    solve_numeric,
    solve_three_qubit_analytic,
    target_coefficients,
)
from .circuits import (
    Circuit,
    Gate,
    circuit_unitary,
    compile_displacement,
    compile_pauli_exp,
    gate_counts,
    optimize_cancel,
)
from .engine import (
    Marginals,
    NoiseModel,
    ShotSet,
    StateVector,
    apply_circuit,
    postselect,
    prepare_initial,
    run_and_sample,
    sample_shots,
    spam_correct,
)
from .experiments import (
    NumberStats,
    SeriesPoint,
    cutoff_study,
    exact_number_stats,
    mandel_q,
    number_stats,
    run_pb_mandel_sweep,
    run_pf_evolution,
    uncertainty,
)

__version__ = "0.1.0"
