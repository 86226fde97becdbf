"""Self-checks of the analytic engine, shared by the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.stats import binom

from .dynamics import PopulationModel, transition_table
from .markov import (
    average_group_success,
    build_transition_matrix,
    stationary_eigen,
    stationary_product_form,
)

FIGURE_POINT = dict(Z=100, mu=0.01, beta=2.0, b=1.0, c=0.1, r=0.5)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<24} residual={self.residual:.3e}  {self.detail}".rstrip()


def random_models(count, seed=2024, literal_transitions=False):
    """Reproducible sample of valid models spread over the parameter space."""
    rng = np.random.default_rng(seed)
    models = []
    while len(models) < count:
        N = int(rng.integers(2, 11))
        a = int(rng.integers(0, N))
        Z = int(rng.integers(max(N - a, 2), 151))
        models.append(PopulationModel.create(
            literal_transitions=literal_transitions,
            Z=Z, N=N, M=int(rng.integers(1, N + 1)), a=a,
            p=float(rng.random()), r=float(rng.random()), c=float(rng.random()),
            b=float(rng.uniform(0.5, 2.0)), beta=float(rng.uniform(0.0, 10.0)),
            mu=float(10 ** rng.uniform(-3, 0)),
        ))
    return models


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def _dist(literal, **params):
    model = PopulationModel.create(literal_transitions=literal, **{**FIGURE_POINT, **params})
    return stationary_product_form(model).probabilities


def check_equivalence_p0(literal=False):
    ref = _dist(literal, N=5, a=0, M=2)
    res = max(np.abs(_dist(literal, N=5 + a, a=a, p=0.0, M=2) - ref).max() for a in (1, 2))
    return CheckResult("fig5A_p0_equivalence", res < 1e-10, float(res), "N-a=5, M=2, a in {1,2}")


def check_equivalence_p1(literal=False):
    res = np.abs(_dist(literal, N=6, a=2, M=4, p=1.0) - _dist(literal, N=4, a=0, M=2)).max()
    return CheckResult("fig5B_p1_equivalence", res < 1e-10, float(res), "(6,2,4,p=1) vs (4,0,2)")


def check_equal_effort_distinct(literal=False):
    dists = [_dist(literal, N=6, M=3, a=a, p=p) for a, p in ((1, 1.0), (2, 0.5), (4, 0.25))]
    tv = min(total_variation(x, y) for x, y in combinations(dists, 2))
    return CheckResult("fig5C_nonequivalence", tv > 0.01, tv, "min pairwise TV, must exceed 0.01")


def check_detailed_balance(literal=False, count=25):
    res = 0.0
    for m in random_models(count, literal_transitions=literal):
        res = max(res, stationary_product_form(m).detailed_balance_residual)
    return CheckResult("detailed_balance", res < 1e-12, res, f"{count} random models")


def check_method_agreement(literal=False, count=25):
    agree = station = 0.0
    for m in random_models(count, literal_transitions=literal):
        S = build_transition_matrix(m)
        prod, eig = stationary_product_form(m), stationary_eigen(m)
        agree = max(agree, float(np.abs(prod.probabilities - eig.probabilities).max()))
        station = max(station, prod.stationarity_residual(S), eig.stationarity_residual(S))
    ok = agree < 1e-10 and station < 1e-10
    return CheckResult("method_agreement", ok, max(agree, station),
                       f"Linf={agree:.1e}, |PS-P|_1={station:.1e}")


def check_full_support(literal=False):
    model = PopulationModel.create(literal_transitions=literal, **FIGURE_POINT)
    up, down = transition_table(model)
    gap = min(float(up[:-1].min()), float(down[1:].min()))
    if gap <= 0:
        return CheckResult("full_support", False, gap, "a boundary state is absorbing")
    P = stationary_product_form(model).probabilities
    return CheckResult("full_support", bool(np.all(P > 0)), float(P.min()),
                       "every state reachable and visited")


def check_forced_success(literal=False):
    res = 0.0
    for r in (0.0, 0.3, 0.9, 1.0):
        for M in (1, 3, 5):
            model = PopulationModel.create(literal_transitions=literal,
                                           **{**FIGURE_POINT, "r": r, "N": 6, "M": M, "a": M, "p": 1.0})
            res = max(res, abs(average_group_success(stationary_product_form(model), model) - 1.0))
    return CheckResult("forced_success", res < 1e-14, res, "a=M, p=1 gives success 1")


def check_pure_mutation(literal=False):
    model = PopulationModel.create(literal_transitions=literal, **{**FIGURE_POINT, "mu": 1.0})
    P = stationary_product_form(model).probabilities
    res = float(np.abs(P - binom.pmf(np.arange(model.Z + 1), model.Z, 0.5)).max())
    return CheckResult("pure_mutation_binomial", res < 1e-10, res, "mu=1 gives Binomial(Z, 1/2)")


CHECKS = {
    "fig5A_p0_equivalence": check_equivalence_p0,
    "fig5B_p1_equivalence": check_equivalence_p1,
    "fig5C_nonequivalence": check_equal_effort_distinct,
    "detailed_balance": check_detailed_balance,
    "method_agreement": check_method_agreement,
    "full_support": check_full_support,
    "forced_success": check_forced_success,
    "pure_mutation_binomial": check_pure_mutation,
}


def run_checks(literal_transitions=False):
    """Run every check; a check that raises counts as failed."""
    results = []
    for name, check in CHECKS.items():
        try:
            results.append(check(literal_transitions))
        except Exception as exc:  # a crash is a failed check, reported with its message
            results.append(CheckResult(name, False, float("nan"), f"{type(exc).__name__}: {exc}"))
    return results
