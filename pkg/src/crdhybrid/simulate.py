"""Monte Carlo counterparts of the analytic pipeline.

``simulate_chain`` samples the birth-death chain directly from its
transition probabilities.  ``simulate_agents`` instead tracks ``Z`` explicit
players who draw groups, see the fixed agents flip their joint coin, and
imitate each other based on sampled payoffs.  Both are seeded with numpy's
PCG64 generator and are bit-reproducible for a given seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import PopulationModel, imitation_probability, transition_table
from .errors import ConfigurationError, DomainError
from .game import COOPERATE, DEFECT, STRATEGIES, payoff_cooperator, payoff_defector

GENERATOR = "numpy.random.PCG64"


@dataclass(frozen=True)
class SimulationConfig:
    """Run length, seed and fitness sampling effort for one replicate.

    ``group_samples`` is the number of groups averaged into each fitness
    estimate in agent mode.  Large values approach the expected fitness used
    by the analytic model; ``1`` means a single interaction.
    """

    model: PopulationModel
    steps: int
    burn_in: int = None
    seed: int = 0
    group_samples: int = 50

    def __post_init__(self):
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", self.steps // 100)
        if int(self.steps) != self.steps or self.steps < 1:
            raise ConfigurationError(f"steps must be a positive integer, got {self.steps}")
        if not 0 <= self.burn_in < self.steps:
            raise ConfigurationError(f"burn_in must satisfy 0 <= burn_in < steps, got {self.burn_in}")
        if not 0 <= self.seed < 2**64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.group_samples < 1:
            raise ConfigurationError(f"group_samples must be >= 1, got {self.group_samples}")


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Visit frequencies of states ``0..Z`` after burn-in."""

    occupancy: np.ndarray
    steps_counted: int
    seed: int
    generator: str = GENERATOR

    def total_variation(self, probabilities):
        return 0.5 * float(np.abs(self.occupancy - np.asarray(probabilities)).sum())


def _empirical(counts, seed):
    total = int(counts.sum())
    return EmpiricalDistribution(occupancy=counts / total, steps_counted=total, seed=seed)


def simulate_chain(cfg):
    """Sample a trajectory of the birth-death chain and record its occupancy."""
    model = cfg.model
    if model.mu <= 0:
        raise ConfigurationError("chain reducible; stationary distribution not unique")
    up, down = transition_table(model)
    up, down = up.tolist(), down.tolist()
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    counts = np.zeros(model.Z + 1, dtype=np.int64)
    k = model.Z // 2
    burn_in = cfg.burn_in
    for start in range(0, cfg.steps, 1 << 16):
        draws = rng.random(min(1 << 16, cfg.steps - start)).tolist()
        visits = [0] * (model.Z + 1)
        for t, u in enumerate(draws, start):
            t_up = up[k]
            if u < t_up:
                k += 1
            elif u < t_up + down[k]:
                k -= 1
            if t >= burn_in:
                visits[k] += 1
        counts += visits
    return _empirical(counts, cfg.seed)


class _GroupSampler:
    """Draws groups around a focal player and returns its payoffs."""

    def __init__(self, model):
        g = model.game
        self.Z = model.Z
        self.draws = model.adaptive_group_size - 1
        self.a, self.p = model.hybrid.a, model.hybrid.p
        # payoff by total cooperators j in the group; a cooperator always has j >= 1
        self.table = {
            True: np.array([payoff_cooperator(max(j, 1), g) for j in range(g.N + 1)]),
            False: np.array([payoff_defector(j, g) for j in range(g.N + 1)]),
        }

    def payoffs(self, rng, k, focal_c, samples):
        others_c = k - 1 if focal_c else k
        others_d = self.Z - 1 - others_c
        if self.draws == 0 or others_c == 0:
            coop = np.zeros(samples, dtype=np.int64)
        elif others_d == 0:
            coop = np.full(samples, self.draws, dtype=np.int64)
        else:
            coop = rng.hypergeometric(others_c, others_d, self.draws, size=samples)
        # one joint coin per group for all fixed agents
        agents_on = rng.random(samples) < self.p
        j = coop + int(focal_c) + self.a * agents_on
        return self.table[focal_c][j]


def _check_strategy_state(k, strategy, model):
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    lo, hi = (1, model.Z) if strategy == COOPERATE else (0, model.Z - 1)
    if int(k) != k or not lo <= k <= hi:
        raise DomainError(f"state k={k} has no {strategy} player (valid range [{lo}, {hi}])")


def estimate_fitness_sampled(k, strategy, model, samples, seed):
    """Monte Carlo estimate of a strategy's fitness at state ``k``.

    Returns
    -------
    estimate : float
        Mean payoff over ``samples`` sampled groups.
    standard_error : float
        Sample standard deviation over ``sqrt(samples)``; exactly 0 when every
        sampled payoff is the same.
    """
    _check_strategy_state(k, strategy, model)
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    rng = np.random.Generator(np.random.PCG64(seed))
    x = _GroupSampler(model).payoffs(rng, int(k), strategy == COOPERATE, samples)
    if samples == 1 or np.ptp(x) == 0:
        return float(x[0]), 0.0
    se = float(x.std(ddof=1) / np.sqrt(samples))
    return float(x.mean()), se


def simulate_agents(cfg):
    """Agent-based simulation with explicit strategies and sampled groups.

    Each step picks a focal player.  With probability ``mu`` it switches
    strategy; otherwise it meets a random other player and, if their
    strategies differ, copies it with the Fermi probability of their
    estimated fitness difference.
    """
    model = cfg.model
    Z, mu, beta = model.Z, model.mu, model.beta
    sampler = _GroupSampler(model)
    G = cfg.group_samples
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    k = Z // 2
    # players 0..k-1 start as cooperators; labels are exchangeable
    coop = [True] * k + [False] * (Z - k)
    counts = [0] * (Z + 1)
    chunk = 1 << 14
    for start in range(0, cfg.steps, chunk):
        size = min(chunk, cfg.steps - start)
        focals = rng.integers(Z, size=size).tolist()
        partners = rng.integers(Z - 1, size=size).tolist()
        u_mutate = rng.random(size).tolist()
        u_imitate = rng.random(size).tolist()
        for t in range(size):
            focal = focals[t]
            me = coop[focal]
            if u_mutate[t] < mu:
                coop[focal] = not me
                k += -1 if me else 1
            else:
                partner = partners[t]
                partner += partner >= focal
                if coop[partner] != me:
                    f_self = sampler.payoffs(rng, k, me, G).mean()
                    f_other = sampler.payoffs(rng, k, not me, G).mean()
                    if u_imitate[t] < imitation_probability(f_other - f_self, beta):
                        coop[focal] = not me
                        k += -1 if me else 1
            if start + t >= cfg.burn_in:
                counts[k] += 1
    return _empirical(np.array(counts, dtype=np.int64), cfg.seed)
