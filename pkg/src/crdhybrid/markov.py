"""Birth-death chain over cooperator counts and its stationary statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .dynamics import hypergeometric_weights, transition_table
from .errors import ConvergenceError, DomainError, ReducibleChainError
from .game import heaviside

PRODUCT_FORM = "product_form"
EIGEN = "eigen"


@dataclass(frozen=True)
class TransitionMatrix:
    """Tridiagonal row-stochastic matrix stored by its three diagonals.

    ``lower[k]`` is ``p(k, k-1)``, ``diag[k]`` is ``p(k, k)`` and ``upper[k]``
    is ``p(k, k+1)``; ``lower[0]`` and ``upper[-1]`` are zero.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    @property
    def dimension(self):
        return len(self.diag)

    def to_dense(self):
        n = self.dimension
        S = np.diag(self.diag)
        S[np.arange(1, n), np.arange(n - 1)] = self.lower[1:]
        S[np.arange(n - 1), np.arange(1, n)] = self.upper[:-1]
        return S

    def left_multiply(self, v):
        """Row vector times matrix, ``v @ S``, in O(n)."""
        out = v * self.diag
        out[1:] += v[:-1] * self.upper[:-1]
        out[:-1] += v[1:] * self.lower[1:]
        return out

    def row_sums(self):
        return self.lower + self.diag + self.upper


def build_transition_matrix(model):
    """Transition matrix of the model's birth-death chain."""
    up, down = transition_table(model)
    upper = up.copy()
    lower = down.copy()
    diag = 1.0 - lower - upper
    return TransitionMatrix(lower=lower, diag=diag, upper=upper)


@dataclass(frozen=True)
class StationaryDistribution:
    """Stationary probabilities over ``k = 0..Z`` with solver diagnostics."""

    probabilities: np.ndarray
    method: str
    normalization_residual: float
    detailed_balance_residual: float

    @property
    def Z(self):
        return len(self.probabilities) - 1

    def stationarity_residual(self, matrix):
        """L1 norm of ``P S - P``."""
        return float(np.abs(matrix.left_multiply(self.probabilities) - self.probabilities).sum())


def _detailed_balance_residual(P, up, down):
    return float(np.max(np.abs(P[:-1] * up[:-1] - P[1:] * down[1:])))


def _finish(P, method, up, down):
    P = np.clip(P, 0.0, None)
    P = P / P.sum()
    P.flags.writeable = False
    return StationaryDistribution(
        probabilities=P,
        method=method,
        normalization_residual=float(abs(P.sum() - 1.0)),
        detailed_balance_residual=_detailed_balance_residual(P, up, down),
    )


def _require_irreducible(model, up, down):
    if model.mu <= 0 or np.any(up[:-1] <= 0) or np.any(down[1:] <= 0):
        raise ReducibleChainError()


def stationary_product_form(model):
    """Stationary distribution from the birth-death detailed-balance product.

    ``P(k)`` is proportional to the product of ``T+(j-1) / T-(j)`` for
    ``j = 1..k``; the product is accumulated in log space.
    """
    up, down = transition_table(model)
    _require_irreducible(model, up, down)
    log_ratio = np.log(up[:-1]) - np.log(down[1:])
    log_p = np.concatenate(([0.0], np.cumsum(log_ratio)))
    return _finish(np.exp(log_p - logsumexp(log_p)), PRODUCT_FORM, up, down)


def stationary_eigen(model, tol=1e-13, max_squarings=80):
    """Left eigenvector of eigenvalue 1 by power iteration with repeated squaring.

    Iterates ``v <- v A^(2^j)`` on the lazy chain ``A = (I + S) / 2``, squaring
    ``A`` after every step.  The lazy chain is aperiodic, and the growing
    step length means the L1 change ``|v A^(2^j) - v|`` bounds the distance
    to the fixed point once ``2^j`` exceeds the relaxation time, even for
    metastable chains where plain power iteration stalls.

    Raises
    ------
    ReducibleChainError
        If ``mu == 0``.
    ConvergenceError
        If the L1 change is still above ``tol`` after ``max_squarings``.
    """
    if model.mu <= 0:
        raise ReducibleChainError()
    up, down = transition_table(model)
    S = build_transition_matrix(model).to_dense()
    n = len(S)
    A = 0.5 * (np.eye(n) + S)
    v = np.full(n, 1.0 / n)
    change = np.inf
    for _ in range(max_squarings):
        w = v @ A
        w /= w.sum()
        change = float(np.abs(w - v).sum())
        v = w
        if change < tol:
            return _finish(v, EIGEN, up, down)
        A = A @ A
        # keep rows stochastic against rounding drift
        A /= A.sum(axis=1, keepdims=True)
    raise ConvergenceError("power iteration did not converge", change)


def stationary_distribution(model, method=PRODUCT_FORM):
    """Dispatch to one of the two stationary solvers."""
    if method == PRODUCT_FORM:
        return stationary_product_form(model)
    if method == EIGEN:
        return stationary_eigen(model)
    raise DomainError(f"unknown method {method!r}")


def average_cooperation(dist):
    """Expected fraction of cooperators under ``dist``."""
    P = dist.probabilities
    k = np.arange(len(P))
    return float(P @ k / (len(P) - 1))


def group_success_table(model):
    """Probability that a random group reaches the threshold, for every state."""
    Z, n = model.Z, model.adaptive_group_size
    a, p, M = model.hybrid.a, model.hybrid.p, model.game.M
    h = np.arange(n + 1)
    reached = np.array([p * heaviside(x + a - M) + (1 - p) * heaviside(x - M) for x in h])
    # adaptive group members: n draws from all Z players
    return hypergeometric_weights(Z, np.arange(Z + 1), n) @ reached


def group_success_at_state(k, model):
    """Fraction of groups that avoid the risk when ``k`` players cooperate."""
    if int(k) != k or not 0 <= k <= model.Z:
        raise DomainError(f"state k={k} outside [0, {model.Z}]")
    return float(group_success_table(model)[int(k)])


def average_group_success(dist, model):
    """Stationary average of the per-state group success."""
    if dist.Z != model.Z:
        raise DomainError(f"distribution has {dist.Z + 1} states, model has {model.Z + 1}")
    return float(dist.probabilities @ group_success_table(model))
