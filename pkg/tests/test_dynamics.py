import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crdhybrid.dynamics import (
    PopulationModel,
    fitness_cooperator,
    fitness_defector,
    fitness_table,
    hypergeometric_weights,
    imitation_probability,
    log_binomial,
    transition_down,
    transition_table,
    transition_up,
)
from crdhybrid.errors import ConfigurationError, DomainError
from crdhybrid.game import expected_payoff

import oracles


def test_log_binomial():
    assert log_binomial(5, 2) == pytest.approx(math.log(10), abs=1e-14)
    assert log_binomial(5, 7) == -np.inf
    assert log_binomial(5, -1) == -np.inf
    assert log_binomial(0, 0) == 0.0


def test_log_binomial_large_arguments_do_not_overflow():
    assert log_binomial(10_000, 5_000) == pytest.approx(math.lgamma(10_001) - 2 * math.lgamma(5_001))


def test_model_invariants():
    with pytest.raises(ConfigurationError):
        PopulationModel.create(Z=1, N=1, M=1)
    with pytest.raises(ConfigurationError):
        PopulationModel.create(Z=4, N=6, a=1)
    with pytest.raises(ConfigurationError):
        PopulationModel.create(beta=-1)
    with pytest.raises(ConfigurationError):
        PopulationModel.create(a=6)
    with pytest.raises(ConfigurationError):
        PopulationModel.create(mu=1.5)
    with pytest.raises(ConfigurationError):
        PopulationModel.create(q=3)
    assert PopulationModel.create(Z=5, N=6, a=1).Z == 5


def test_replace_keeps_other_parameters():
    m = PopulationModel.create(r=0.9, a=2, p=0.5)
    m2 = m.replace(p=0.25)
    assert m2.params == {**m.params, "p": 0.25}


def small(**kw):
    return PopulationModel.create(**{**dict(Z=10, mu=0.05, beta=1.0, N=4, M=2, a=1, p=0.5, r=0.5), **kw})


def test_fitness_boundary_examples():
    m = small()
    h, g = m.hybrid, m.game
    n = m.adaptive_group_size
    assert fitness_cooperator(m.Z, m) == pytest.approx(expected_payoff("C", n, h, g), abs=1e-13)
    assert fitness_defector(0, m) == pytest.approx(expected_payoff("D", 0, h, g), abs=1e-13)
    assert fitness_cooperator(0, m) == 0.0
    assert fitness_defector(m.Z, m) == 0.0

    pair = small(N=4, a=2)
    assert fitness_cooperator(1, pair) == pytest.approx(expected_payoff("C", 1, pair.hybrid, pair.game), abs=1e-13)
    assert fitness_defector(pair.Z - 1, pair) == pytest.approx(
        expected_payoff("D", 1, pair.hybrid, pair.game), abs=1e-13)


def test_fitness_small_instance_against_enumeration():
    # Z=5, N-a=2, k=2: four possible co-players, one of them a cooperator
    m = PopulationModel.create(Z=5, N=6, a=4, p=0.25, M=3, r=0.5, b=1.0, c=0.1)
    assert fitness_cooperator(2, m) == pytest.approx(0.525, abs=1e-12)
    assert fitness_defector(2, m) == pytest.approx(0.625, abs=1e-12)
    assert oracles.enumerated_fitness(2, True, 5, 6, 3, 4, 0.25, 0.5) == pytest.approx(0.525, abs=1e-12)
    assert oracles.enumerated_fitness(2, False, 5, 6, 3, 4, 0.25, 0.5) == pytest.approx(0.625, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.integers(1, 4), st.data())
def test_fitness_matches_enumeration(Z, n, data):
    n = min(n, Z)
    a = data.draw(st.integers(0, 3))
    N = n + a
    M = data.draw(st.integers(1, N))
    p, r = data.draw(st.floats(0, 1)), data.draw(st.floats(0, 1))
    m = PopulationModel.create(Z=Z, N=N, M=M, a=a, p=p, r=r)
    f_c, f_d = fitness_table(m)
    for k in range(1, Z + 1):
        assert abs(f_c[k] - oracles.enumerated_fitness(k, True, Z, N, M, a, p, r)) < 1e-12
    for k in range(0, Z):
        assert abs(f_d[k] - oracles.enumerated_fitness(k, False, Z, N, M, a, p, r)) < 1e-12


@given(st.integers(2, 300), st.integers(0, 20), st.data())
def test_hypergeometric_weights_sum_to_one(pool, draws, data):
    draws = min(draws, pool)
    good = data.draw(st.integers(0, pool))
    w = hypergeometric_weights(pool, good, draws)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(w >= 0)


def test_imitation_probability_examples():
    assert imitation_probability(0.0, 3.0) == 0.5
    assert imitation_probability(7.0, 0.0) == 0.5
    assert imitation_probability(0.5, 2.0) == pytest.approx(1 / (1 + math.exp(-1)), abs=1e-15)
    assert imitation_probability(1e6, 10.0) == 1.0
    assert imitation_probability(-1e6, 10.0) == 0.0
    with pytest.raises(DomainError):
        imitation_probability(0.1, -1.0)


@given(st.floats(-1e3, 1e3), st.floats(0, 1e3), st.floats(0.01, 100))
def test_fermi_complement_and_scaling(d, beta, s):
    assert imitation_probability(d, beta) + imitation_probability(-d, beta) == pytest.approx(1.0, abs=1e-15)
    assert imitation_probability(d / s, beta * s) == pytest.approx(imitation_probability(d, beta), abs=1e-12)


def test_transition_examples():
    m = PopulationModel.create(Z=100, mu=0.01, beta=2.0, N=6, M=3, a=0, r=0.5)
    assert transition_up(100, m) == 0.0
    assert transition_up(0, m) == pytest.approx(0.01, abs=1e-15)
    assert transition_down(0, m) == 0.0
    assert transition_down(100, m) == pytest.approx(0.01, abs=1e-15)
    # frozen from oracles.transitions(100, 0.01, 2.0, 6, 3, 0, 0.0, 0.5)
    assert transition_up(50, m) == pytest.approx(0.1364275541506572, abs=1e-13)
    assert transition_down(50, m) == pytest.approx(0.12357244584934282, abs=1e-13)
    with pytest.raises(DomainError):
        transition_up(101, m)


def test_neutral_transitions():
    m = PopulationModel.create(Z=30, beta=0.0, mu=0.05)
    for k in range(31):
        mix = 0.95 * 0.5 * k * (30 - k) / (30 * 29)
        assert transition_up(k, m) == pytest.approx(mix + 0.05 * (30 - k) / 30, abs=1e-15)
        assert transition_down(k, m) == pytest.approx(mix + 0.05 * k / 30, abs=1e-15)


def test_literal_transitions_make_boundaries_absorbing():
    m = PopulationModel.create(literal_transitions=True)
    up, down = transition_table(m)
    assert up[0] == 0.0 and down[-1] == 0.0
    assert np.all(up[1:-1] > 0)


def test_fitness_cache_tracks_parameters():
    m = PopulationModel.create(r=0.3)
    before = fitness_table(m)[0].copy()
    after = fitness_table(m.replace(r=0.9))[0]
    assert not np.allclose(before, after)
    assert np.array_equal(fitness_table(PopulationModel.create(r=0.3))[0], before)
    with pytest.raises(ValueError):
        fitness_table(m)[0][3] = 1.0


@st.composite
def models(draw, max_Z=150):
    N = draw(st.integers(2, 10))
    a = draw(st.integers(0, N - 1))
    Z = draw(st.integers(max(2, N - a), max_Z))
    return PopulationModel.create(
        Z=Z, N=N, a=a, M=draw(st.integers(1, N)), p=draw(st.floats(0, 1)), r=draw(st.floats(0, 1)),
        c=draw(st.floats(0, 1)), beta=draw(st.floats(0, 50)), mu=draw(st.floats(1e-4, 1)),
    )


@settings(max_examples=80, deadline=None)
@given(models())
def test_transition_invariants(m):
    up, down = transition_table(m)
    assert np.all((0 <= up) & (up <= 1)) and np.all((0 <= down) & (down <= 1))
    assert np.all(up + down <= 1 + 1e-15)
    assert up[-1] == 0.0 and down[0] == 0.0
    assert np.all(up[:-1] > 0) and np.all(down[1:] > 0)


@settings(max_examples=40, deadline=None)
@given(models(max_Z=40))
def test_transitions_match_independent_formula_chain(m):
    g, h = m.game, m.hybrid
    up, down = oracles.transitions(m.Z, m.mu, m.beta, g.N, g.M, h.a, h.p, g.r, g.b, g.c)
    got_up, got_down = transition_table(m)
    assert np.allclose(got_up, up, rtol=0, atol=1e-12)
    assert np.allclose(got_down, down, rtol=0, atol=1e-12)
