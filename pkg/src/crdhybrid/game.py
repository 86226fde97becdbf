"""Payoffs of the one-shot collective risk dilemma (CRD).

A group of ``N`` players each either cooperates (pays ``c * b``) or defects.
If fewer than ``M`` players cooperate, everybody loses their endowment with
probability ``r``.  Hybrid groups add ``a`` fixed agents that, with
probability ``p``, all cooperate together and otherwise all defect.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, DomainError

COOPERATE = "C"
DEFECT = "D"
STRATEGIES = (COOPERATE, DEFECT)


@dataclass(frozen=True)
class GameParams:
    """Parameters of a CRD instance.

    Attributes
    ----------
    N : int
        Group size.
    M : int
        Minimum number of cooperators needed to avoid the risk.
    r : float
        Probability of losing everything when the threshold is missed.
    b : float
        Endowment of every player.
    c : float
        Fraction of the endowment a cooperator contributes.
    """

    N: int
    M: int
    r: float
    b: float = 1.0
    c: float = 0.1

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ConfigurationError(f"group size N must be a positive integer, got {self.N}")
        if int(self.M) != self.M or not 1 <= self.M <= self.N:
            raise ConfigurationError(f"threshold must satisfy 1 <= M <= N, got M={self.M}, N={self.N}")
        if not 0.0 <= self.r <= 1.0:
            raise ConfigurationError(f"risk r must lie in [0, 1], got {self.r}")
        if not 0.0 <= self.c <= 1.0:
            raise ConfigurationError(f"cost fraction c must lie in [0, 1], got {self.c}")
        if not self.b > 0:
            raise ConfigurationError(f"endowment b must be positive, got {self.b}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "M", int(self.M))


@dataclass(frozen=True)
class HybridPolicy:
    """``a`` fixed agents per group that jointly cooperate with probability ``p``."""

    a: int = 0
    p: float = 0.0

    def __post_init__(self):
        if int(self.a) != self.a or self.a < 0:
            raise ConfigurationError(f"agent count a must be a non-negative integer, got {self.a}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigurationError(f"cooperation probability p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "a", int(self.a))

    def check_fits(self, game: GameParams):
        """Raise unless at least one adaptive slot remains in a group of ``game.N``."""
        if self.a > game.N - 1:
            raise ConfigurationError(
                f"no adaptive slot: a={self.a} requires a <= N-1 with N={game.N}"
            )


def heaviside(x):
    """Unit step with the convention ``heaviside(0) == 1``."""
    return 1 if x >= 0 else 0


def payoff_defector(j, game):
    """Payoff of a defector in a group with ``j`` cooperators."""
    if not 0 <= j <= game.N:
        raise DomainError(f"cooperator count j={j} outside [0, {game.N}]")
    return game.b * (1.0 - game.r + game.r * heaviside(j - game.M))


def payoff_cooperator(j, game):
    """Payoff of a cooperator in a group with ``j`` cooperators (itself included)."""
    if not 1 <= j <= game.N:
        raise DomainError(f"cooperator count j={j} outside [1, {game.N}] for a cooperator")
    return payoff_defector(j, game) - game.c * game.b


def expected_payoff(strategy, i, hybrid, game):
    """Payoff of ``strategy`` averaged over the fixed agents' joint coin flip.

    Parameters
    ----------
    strategy : {"C", "D"}
        Strategy of the focal adaptive player.
    i : int
        Adaptive cooperators in the group, focal player included when it
        cooperates.
    hybrid : HybridPolicy
    game : GameParams

    Returns
    -------
    float
        ``p * pi(i + a) + (1 - p) * pi(i)``.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    hybrid.check_fits(game)
    lo = 1 if strategy == COOPERATE else 0
    if not lo <= i <= game.N - hybrid.a:
        raise DomainError(
            f"adaptive cooperator count i={i} outside [{lo}, {game.N - hybrid.a}] for {strategy}"
        )
    payoff = payoff_cooperator if strategy == COOPERATE else payoff_defector
    return hybrid.p * payoff(i + hybrid.a, game) + (1.0 - hybrid.p) * payoff(i, game)
