"""Discrete-time quantum walks on N-cycle graphs: exact dynamics, circuits,
transpilation, noisy simulation and experiment tooling."""

__version__ = "0.1.0"

from .walk import (
    CoinParams,
    CoinSchedule,
    coin_operator,
    hadamard_coin,
    shift_operator,
    step_operator,
    circulant_step_operator,
    initial_state,
    evolve,
    return_probability,
    parrondo_schedule,
)
from .period import PeriodResult, find_period_power, find_period_eigen
from .gates import Gate
from .circuit import Circuit, lower_to_unitary, depth_report, to_text, from_text
from .builders import (
    build_qft_even,
    build_qft_3cycle,
    build_walk_circuit_4cycle,
    build_walk_circuit_3cycle,
    build_walk_circuit_even,
    fourier_matrix,
    fourier_3cycle_matrix,
)
from .noise import NoiseModel
from .simulate import (
    Distribution,
    run_exact,
    measure_positions,
    run_noisy,
    readout_distribution,
    state_to_density,
    validate_density,
)
from .transpile import (
    OptLevel,
    transpile,
    decompose_1q,
    decompose_cp,
    schedule,
    insert_dd,
    ScheduledCircuit,
)
from .metrics import (
    hellinger_distance,
    hellinger_fidelity,
    classify_fidelity,
    state_distance_phase_aligned,
    trace_distance,
    FidelitySeries,
)
from .experiments import (
    ExperimentConfig,
    ConfigError,
    default_coins,
    run_experiment,
    run_period_scan,
    run_depth_report,
    dump_circuit,
    config_from_text,
    config_to_text,
)

__all__ = [
    "CoinParams",
    "CoinSchedule",
    "coin_operator",
    "hadamard_coin",
    "shift_operator",
    "step_operator",
    "circulant_step_operator",
    "initial_state",
    "evolve",
    "return_probability",
    "parrondo_schedule",
    "PeriodResult",
    "find_period_power",
    "find_period_eigen",
    "Gate",
    "Circuit",
    "lower_to_unitary",
    "depth_report",
    "to_text",
    "from_text",
    "build_qft_even",
    "build_qft_3cycle",
    "build_walk_circuit_4cycle",
    "build_walk_circuit_3cycle",
    "build_walk_circuit_even",
    "fourier_matrix",
    "fourier_3cycle_matrix",
    "NoiseModel",
    "Distribution",
    "run_exact",
    "measure_positions",
    "run_noisy",
    "readout_distribution",
    "state_to_density",
    "validate_density",
    "OptLevel",
    "transpile",
    "decompose_1q",
    "decompose_cp",
    "schedule",
    "insert_dd",
    "ScheduledCircuit",
    "hellinger_distance",
    "hellinger_fidelity",
    "classify_fidelity",
    "state_distance_phase_aligned",
    "trace_distance",
    "FidelitySeries",
    "ExperimentConfig",
    "ConfigError",
    "default_coins",
    "run_experiment",
    "run_period_scan",
    "run_depth_report",
    "dump_circuit",
    "config_from_text",
    "config_to_text",
    "__version__",
]
