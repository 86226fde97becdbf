"""Social-learning dynamics of the adaptive population.

The population holds ``Z`` adaptive players, ``k`` of whom cooperate.  Each
plays in groups of ``N - a`` adaptive members sampled without replacement,
topped up with ``a`` fixed agents.  Strategies spread by pairwise imitation
under the Fermi rule, plus mutation to the opposite strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
from scipy.special import expit, gammaln

from .errors import ConfigurationError, DomainError
from .game import COOPERATE, DEFECT, GameParams, HybridPolicy, expected_payoff

# Flat parameter names, in the column order used by every output file.
PARAM_NAMES = ("Z", "mu", "beta", "b", "c", "N", "M", "a", "p", "r")
INTEGER_PARAMS = frozenset({"Z", "N", "M", "a"})

DEFAULTS = dict(Z=100, mu=0.01, beta=2.0, b=1.0, c=0.1, N=6, M=3, a=0, p=0.0, r=0.5)


@dataclass(frozen=True)
class PopulationModel:
    """Adaptive population bound to a game and a hybrid policy.

    ``literal_transitions`` drops the mutation term from the transition
    probabilities, which makes the all-C and all-D states absorbing.  It only
    exists to inspect that form; leave it off for any real analysis.
    """

    Z: int
    mu: float
    beta: float
    game: GameParams
    hybrid: HybridPolicy = field(default_factory=HybridPolicy)
    literal_transitions: bool = False

    def __post_init__(self):
        if int(self.Z) != self.Z or self.Z < 2:
            raise ConfigurationError(f"population size Z must be an integer >= 2, got {self.Z}")
        object.__setattr__(self, "Z", int(self.Z))
        if not 0.0 <= self.mu <= 1.0:
            raise ConfigurationError(f"mutation rate mu must lie in [0, 1], got {self.mu}")
        if not self.beta >= 0:
            raise ConfigurationError(f"selection strength beta must be >= 0, got {self.beta}")
        self.hybrid.check_fits(self.game)
        if self.Z < self.adaptive_group_size:
            raise ConfigurationError(
                f"Z={self.Z} too small to sample N-a={self.adaptive_group_size} adaptive players"
            )

    @classmethod
    def create(cls, literal_transitions=False, **params):
        """Build a model from flat parameters; missing ones take the defaults.

        >>> PopulationModel.create(a=2, p=0.5).params["N"]
        6
        """
        unknown = set(params) - set(PARAM_NAMES)
        if unknown:
            raise ConfigurationError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        v = {**DEFAULTS, **params}
        for name in INTEGER_PARAMS:
            if int(v[name]) != v[name]:
                raise ConfigurationError(f"{name} must be an integer, got {v[name]}")
            v[name] = int(v[name])
        game = GameParams(N=v["N"], M=v["M"], r=float(v["r"]), b=float(v["b"]), c=float(v["c"]))
        hybrid = HybridPolicy(a=v["a"], p=float(v["p"]))
        return cls(Z=v["Z"], mu=float(v["mu"]), beta=float(v["beta"]), game=game,
                   hybrid=hybrid, literal_transitions=literal_transitions)

    @property
    def params(self):
        """Flat parameter dict in canonical column order."""
        g, h = self.game, self.hybrid
        return dict(Z=self.Z, mu=self.mu, beta=self.beta, b=g.b, c=g.c,
                    N=g.N, M=g.M, a=h.a, p=h.p, r=g.r)

    def replace(self, **params):
        """Return a copy with some flat parameters changed."""
        return PopulationModel.create(literal_transitions=self.literal_transitions,
                                      **{**self.params, **params})

    @property
    def adaptive_group_size(self):
        return self.game.N - self.hybrid.a


def log_binomial(n, r):
    """Natural log of the binomial coefficient, ``-inf`` where it is zero.

    Works elementwise on arrays.  ``C(n, r)`` is taken as zero whenever
    ``r < 0``, ``r > n`` or ``n < 0``.
    """
    n = np.asarray(n, dtype=float)
    r = np.asarray(r, dtype=float)
    valid = (r >= 0) & (r <= n) & (n >= 0)
    n_ = np.where(valid, n, 0.0)
    r_ = np.where(valid, r, 0.0)
    out = np.where(valid, gammaln(n_ + 1) - gammaln(r_ + 1) - gammaln(n_ - r_ + 1), -np.inf)
    return out[()] if out.ndim == 0 else out


def hypergeometric_weights(pool, good, draws):
    """Probabilities of drawing ``0..draws`` good items from a pool.

    ``good`` may be an array of good-item counts; the result then has one row
    per entry.  The weights are normalized by their own sum, which equals
    ``C(pool, draws)`` by Vandermonde's identity and cancels log-gamma
    rounding.
    """
    good = np.asarray(good, dtype=float)[..., None]
    i = np.arange(draws + 1)
    log_w = log_binomial(good, i) + log_binomial(pool - good, draws - i)
    w = np.exp(log_w - log_binomial(pool, draws))
    total = w.sum(axis=-1, keepdims=True)
    return np.divide(w, total, out=np.zeros_like(w), where=total > 0)


@lru_cache(maxsize=256)
def fitness_table(model):
    """Fitness of cooperators and defectors at every state ``k = 0..Z``.

    Returns read-only arrays ``(f_C, f_D)``.  ``f_C[0]`` and ``f_D[Z]`` are
    set to zero; those states have no player of that strategy.  Results are
    cached per model, so any parameter change yields a fresh table.
    """
    Z, n = model.Z, model.adaptive_group_size
    g, h = model.game, model.hybrid
    pi_c = np.array([expected_payoff(COOPERATE, i + 1, h, g) for i in range(n)])
    pi_d = np.array([expected_payoff(DEFECT, i, h, g) for i in range(n)])
    k = np.arange(Z + 1)

    # co-players: n-1 draws from the other Z-1 adaptive players
    f_c = hypergeometric_weights(Z - 1, k - 1, n - 1) @ pi_c
    f_d = hypergeometric_weights(Z - 1, k, n - 1) @ pi_d
    f_c[0] = 0.0
    f_d[Z] = 0.0
    f_c.flags.writeable = False
    f_d.flags.writeable = False
    return f_c, f_d


def _check_state(k, model):
    if int(k) != k or not 0 <= k <= model.Z:
        raise DomainError(f"state k={k} outside [0, {model.Z}]")
    return int(k)


def fitness_cooperator(k, model):
    """Expected payoff of a cooperator when ``k`` players cooperate (0 at ``k=0``)."""
    return float(fitness_table(model)[0][_check_state(k, model)])


def fitness_defector(k, model):
    """Expected payoff of a defector when ``k`` players cooperate (0 at ``k=Z``)."""
    return float(fitness_table(model)[1][_check_state(k, model)])


def imitation_probability(delta_f, beta):
    """Fermi rule: probability of adopting a strategy that is ``delta_f`` fitter."""
    if beta < 0:
        raise DomainError(f"selection strength must be >= 0, got {beta}")
    return expit(beta * np.asarray(delta_f, dtype=float))[()]


@lru_cache(maxsize=256)
def transition_table(model):
    """Probabilities ``(T+, T-)`` of gaining/losing one cooperator at every state."""
    Z, mu = model.Z, model.mu
    f_c, f_d = fitness_table(model)
    k = np.arange(Z + 1, dtype=float)
    d_to_c = imitation_probability(f_c - f_d, model.beta)
    c_to_d = imitation_probability(f_d - f_c, model.beta)
    mutation = 0.0 if model.literal_transitions else mu
    up = (Z - k) / Z * ((1 - mu) * k / (Z - 1) * d_to_c + mutation)
    down = k / Z * ((1 - mu) * (Z - k) / (Z - 1) * c_to_d + mutation)
    up.flags.writeable = False
    down.flags.writeable = False
    return up, down


def transition_up(k, model):
    """Probability that one step moves the population from ``k`` to ``k + 1``."""
    return float(transition_table(model)[0][_check_state(k, model)])


def transition_down(k, model):
    """Probability that one step moves the population from ``k`` to ``k - 1``."""
    return float(transition_table(model)[1][_check_state(k, model)])
