"""Finite-run certification of teleportation fidelity.

Given an ensemble of states to teleport and a measurement strategy that
uses no shared entanglement, this package computes the protocol's average
fidelity, bounds the probability that N finite runs of such a strategy
reach a higher target fidelity anyway, and validates that bound against an
exact enumeration oracle and a Monte Carlo simulation of the protocol.
"""

from ._version import __version__
from .discrimination import Povm, error_probability, helstrom_povm, square_root_povm
from .ensembles import (
    Ensemble,
    four_asymmetric,
    helstrom_pair,
    load_ensemble,
    qubit_mubs,
    qutrit_mubs,
    to_document,
    trine,
)
from .errors import (
    BudgetExceededError,
    EnsembleFormatError,
    PreconditionError,
    PriorSumError,
    StateNormalizationError,
    TelecertError,
    ValidationError,
)
from .scenarios import Scenario, builtin_scenarios, custom_scenario
from .simulator import (
    LlnRow,
    SimConfig,
    SimReport,
    TrialTally,
    exact_exceedance,
    lln_sweep,
    pass_count_distribution,
    run_experiment,
    run_trial,
    stream,
)
from .stats import (
    BoundInput,
    BoundReport,
    HypothesisConfig,
    bound_report,
    classical_fidelity,
    hoeffding_generic,
    hoeffding_log10_bound,
    mu_of,
    scenario_bound_report,
    t_of,
    type_one_error,
    type_two_error,
)

__all__ = [
    "__version__",
    "BoundInput",
    "BoundReport",
    "BudgetExceededError",
    "Ensemble",
    "EnsembleFormatError",
    "HypothesisConfig",
    "LlnRow",
    "Povm",
    "PreconditionError",
    "PriorSumError",
    "Scenario",
    "SimConfig",
    "SimReport",
    "StateNormalizationError",
    "TelecertError",
    "TrialTally",
    "ValidationError",
    "bound_report",
    "builtin_scenarios",
    "classical_fidelity",
    "custom_scenario",
    "error_probability",
    "exact_exceedance",
    "four_asymmetric",
    "helstrom_pair",
    "helstrom_povm",
    "hoeffding_generic",
    "hoeffding_log10_bound",
    "lln_sweep",
    "load_ensemble",
    "mu_of",
    "pass_count_distribution",
    "qubit_mubs",
    "qutrit_mubs",
    "run_experiment",
    "run_trial",
    "scenario_bound_report",
    "square_root_povm",
    "stream",
    "t_of",
    "to_document",
    "trine",
    "type_one_error",
    "type_two_error",
]
