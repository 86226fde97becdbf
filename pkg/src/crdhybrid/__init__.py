"""Evolutionary dynamics of the collective risk dilemma in hybrid groups.

Adaptive social learners share groups with fixed agents that cooperate with
a given probability.  The package computes the exact stationary behaviour of
the learners' birth-death chain and offers Monte Carlo simulators to check it.
"""

__version__ = "0.1.0"

from .dynamics import (
    PopulationModel,
    fitness_cooperator,
    fitness_defector,
    imitation_probability,
    log_binomial,
    transition_down,
    transition_up,
)
from .errors import ConfigurationError, ConvergenceError, DomainError, ReducibleChainError
from .game import (
    GameParams,
    HybridPolicy,
    expected_payoff,
    heaviside,
    payoff_cooperator,
    payoff_defector,
)
from .markov import (
    StationaryDistribution,
    TransitionMatrix,
    average_cooperation,
    average_group_success,
    build_transition_matrix,
    group_success_at_state,
    stationary_eigen,
    stationary_product_form,
)
from .simulate import (
    EmpiricalDistribution,
    SimulationConfig,
    estimate_fitness_sampled,
    simulate_agents,
    simulate_chain,
)
from .sweep import SweepResult, SweepSpec, figure_preset, run_sweep, write_csv, write_json
