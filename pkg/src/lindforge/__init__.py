"""lindforge: synthesize, twirl, and fit gate noise channels from Lindblad models."""

from .errors import (
    BranchCutError,
    ConvergenceError,
    SingularChannelError,
    ValidationError,
)
from .frame import FramedLindbladian, exact_noise
from .magnus import MagnusTerms, dyson_channel, dyson_terms, magnus, magnus_channel
from .model import (
    GatePreset,
    LindbladModel,
    amplitude_damping_beta,
    assemble,
    build_model,
    crosstalk_hamiltonian,
    gate_preset,
    merge_models,
    phase_noise_hamiltonian,
    pure_dephasing_beta,
    random_dense_beta,
)
from .pauli import PauliString, anticommutes, pauli_basis, pauli_mul, to_matrix
from .plfit import (
    PLModel,
    average_gate_fidelity,
    fidelities,
    fit_pl,
    generator_twirl,
    pauli_twirl,
    pl_channel,
    pl_fidelities,
    pl_generator,
)
from .scenarios import (
    Scenario,
    SweepSpec,
    angle_sweep,
    compare_methods,
    config_hash,
    convergence_study,
    four_qubit_mirror_config,
    model_from_config,
    normalize_config,
    amplitude_damping_sweep_config,
    precision_sweep,
    run_scenario,
    scenario_from_config,
    three_qubit_spectator_config,
    two_qubit_reference_config,
)
from .superop import (
    channel_from_unitary,
    choi_matrix,
    expm_channel,
    frobenius_distance,
    from_ptm,
    hamiltonian_generator,
    logm_channel,
    to_ptm,
    unvec,
    vec,
)

__version__ = "0.1.0"

__all__ = [
    "BranchCutError",
    "ConvergenceError",
    "SingularChannelError",
    "ValidationError",
    "FramedLindbladian",
    "exact_noise",
    "MagnusTerms",
    "dyson_channel",
    "dyson_terms",
    "magnus",
    "magnus_channel",
    "GatePreset",
    "LindbladModel",
    "amplitude_damping_beta",
    "assemble",
    "build_model",
    "crosstalk_hamiltonian",
    "gate_preset",
    "merge_models",
    "phase_noise_hamiltonian",
    "pure_dephasing_beta",
    "random_dense_beta",
    "PauliString",
    "anticommutes",
    "pauli_basis",
    "pauli_mul",
    "to_matrix",
    "PLModel",
    "average_gate_fidelity",
    "fidelities",
    "fit_pl",
    "generator_twirl",
    "pauli_twirl",
    "pl_channel",
    "pl_fidelities",
    "pl_generator",
    "Scenario",
    "SweepSpec",
    "angle_sweep",
    "compare_methods",
    "config_hash",
    "convergence_study",
    "four_qubit_mirror_config",
    "model_from_config",
    "normalize_config",
    "amplitude_damping_sweep_config",
    "precision_sweep",
    "run_scenario",
    "scenario_from_config",
    "three_qubit_spectator_config",
    "two_qubit_reference_config",
    "channel_from_unitary",
    "choi_matrix",
    "expm_channel",
    "frobenius_distance",
    "from_ptm",
    "hamiltonian_generator",
    "logm_channel",
    "to_ptm",
    "unvec",
    "vec",
]
