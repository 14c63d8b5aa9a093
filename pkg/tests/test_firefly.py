import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from swarmbench.benchfns import lookup, rastrigin, sphere
from swarmbench.core import (
    ConfigurationError,
    DimensionError,
    ObjectiveSpec,
    RangeError,
    RngStream,
    SearchSpace,
    random_point,
)
from swarmbench.firefly import (
    FaConfig,
    Firefly,
    attractiveness,
    distance,
    move_toward,
    random_walk,
    rank,
    run_fa,
)

BOX2 = SearchSpace.uniform(2)
BOX1 = SearchSpace.uniform(1)
vec3 = st.tuples(*[st.floats(-100, 100)] * 3)


def fly(position, objective=sphere):
    return Firefly(tuple(map(float, position)), objective(position))


@pytest.mark.parametrize("a, b, expected", [
    ((0, 0), (3, 4), 5.0),
    ((2.5, -1), (2.5, -1), 0.0),
    ((1, 0, 0), (0, 1, 0), math.sqrt(2)),
])
def test_distance_examples(a, b, expected):
    assert distance(a, b) == pytest.approx(expected, rel=1e-15)


def test_distance_length_mismatch():
    with pytest.raises(DimensionError):
        distance((0, 0), (0, 0, 0))


@given(vec3, vec3, vec3)
def test_distance_is_a_metric(a, b, c):
    assert distance(a, b) == distance(b, a) >= 0
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9
    assert (distance(a, b) == 0) == (a == b)


def test_attractiveness_examples():
    assert attractiveness(0.0, 0.7, 3.0) == 0.7
    assert attractiveness(12.0, 0.7, 0.0) == 0.7
    assert attractiveness(1.0, 1.0, math.log(2)) == pytest.approx(0.5, abs=1e-15)
    assert attractiveness(1.0, 1.0, math.log(2), power=1) == pytest.approx(0.5, abs=1e-15)
    assert attractiveness(2.0, 1.0, 1.0, power=1) == pytest.approx(math.exp(-2))
    assert attractiveness(2.0, 1.0, 1.0) == pytest.approx(math.exp(-4))
    with pytest.raises(RangeError):
        attractiveness(-1.0, 1.0, 1.0)


@given(st.floats(0, 50), st.floats(0, 50), st.floats(0, 1), st.floats(0, 10), st.sampled_from([1, 2]))
def test_attractiveness_monotone_and_bounded(r1, r2, beta0, gamma, power):
    lo, hi = sorted((r1, r2))
    b_lo = attractiveness(lo, beta0, gamma, power)
    b_hi = attractiveness(hi, beta0, gamma, power)
    assert 0 <= b_hi <= b_lo <= beta0


def test_config_validation():
    for bad in (dict(population=0), dict(alpha=-0.1), dict(beta0=1.5), dict(gamma=-1),
                dict(exponent_power=3)):
        with pytest.raises(ConfigurationError):
            FaConfig(**bad)


class TestMoveToward:
    def test_full_step_without_absorption_or_noise(self, scripted):
        cfg = FaConfig(alpha=0.0, beta0=1.0, gamma=0.0)
        moved = move_toward(fly((5, -7)), fly((1, 2)), cfg, scripted([0.3, 0.9]), BOX2, sphere)
        assert moved == Firefly((1.0, 2.0), 5.0)

    def test_no_attraction_no_noise(self, scripted):
        cfg = FaConfig(alpha=0.0, beta0=0.0)
        moved = move_toward(fly((5, -7)), fly((1, 2)), cfg, scripted([0.3, 0.9]), BOX2, sphere)
        assert moved.position == (5.0, -7.0)

    def test_coincident_points(self, scripted):
        cfg = FaConfig(alpha=0.0)
        moved = move_toward(fly((3, 3)), fly((3, 3)), cfg, scripted([0.1, 0.2]), BOX2, sphere)
        assert moved.position == (3.0, 3.0)

    def test_general_step_matches_formula(self, scripted):
        cfg = FaConfig(alpha=0.4, beta0=0.8, gamma=0.1)
        a, b = fly((1.0, 2.0)), fly((2.0, 0.0))
        beta = 0.8 * math.exp(-0.1 * 5.0)
        expected = (1.0 + beta * 1.0 + 0.4 * (0.75 - 0.5), 2.0 + beta * -2.0 + 0.4 * (0.1 - 0.5))
        moved = move_toward(a, b, cfg, scripted([0.75, 0.1]), BOX2, sphere)
        assert moved.position == pytest.approx(expected, rel=1e-15)
        assert moved.value == sphere(moved.position)

    def test_clamped_to_box(self, scripted):
        cfg = FaConfig(alpha=1.0, beta0=0.0)
        moved = move_toward(fly((29.9, -29.9)), fly((0, 0)), cfg, scripted([0.99, 0.0]), BOX2, sphere)
        assert moved.position == (30.0, -30.0)

    def test_huge_absorption_freezes_attraction(self):
        cfg = FaConfig(alpha=0.0, beta0=1.0, gamma=1e6)
        rng = RngStream(4)
        for _ in range(200):
            a, b = random_point(BOX2, rng), random_point(BOX2, rng)
            if distance(a, b) < 1:
                continue
            moved = move_toward(fly(a), fly(b), cfg, rng, BOX2, sphere)
            assert distance(moved.position, a) < 1e-12

    @given(st.tuples(st.floats(-30, 30), st.floats(-30, 30)),
           st.tuples(st.floats(-30, 30), st.floats(-30, 30)),
           st.integers(0, 2**32))
    def test_moved_firefly_is_feasible_and_fresh(self, a, b, seed):
        moved = move_toward(fly(a, rastrigin), fly(b, rastrigin), FaConfig(alpha=1.0),
                            RngStream(seed), BOX2, rastrigin)
        assert BOX2.contains(moved.position)
        assert moved.value == rastrigin(moved.position)


class TestRandomWalk:
    def test_zero_alpha(self, scripted):
        assert random_walk(fly((4, 5)), FaConfig(alpha=0.0), scripted([0.9, 0.1]), BOX2, sphere).position == (4.0, 5.0)

    def test_centred_draw(self, scripted):
        assert random_walk(fly((4, 5)), FaConfig(alpha=1.0), scripted([0.5, 0.5]), BOX2, sphere).position == (4.0, 5.0)

    def test_direct_substitution(self, scripted):
        moved = random_walk(fly((0,)), FaConfig(alpha=2.0), scripted([1.0]), BOX1, sphere)
        assert moved == Firefly((1.0,), 1.0)


def test_rank_is_stable_brightest_first():
    flies = [Firefly((0.0,), 3.0), Firefly((1.0,), 1.0), Firefly((2.0,), 3.0), Firefly((3.0,), 0.5)]
    assert [f.position[0] for f in rank(flies)] == [3.0, 1.0, 0.0, 2.0]
    assert Firefly((0.0,), 1.0).brighter_than(Firefly((0.0,), 2.0))
    assert not Firefly((0.0,), 1.0).brighter_than(Firefly((1.0,), 1.0))


class TestRunFa:
    def test_constant_objective_flat(self):
        obj = ObjectiveSpec("const", 2, lambda x: 3.25)
        result = run_fa(FaConfig(population=8, max_iterations=15), obj, BOX2, 2)
        assert result.trace.values() == [3.25] * 16
        # Equal brightness: nobody attracts anybody.
        assert result.info["moves"] == 0

    def test_single_firefly_is_a_random_walk(self):
        seed, iterations = 21, 30
        result = run_fa(FaConfig(population=1, max_iterations=iterations), lookup("sphere", 2), BOX2, seed)
        assert result.info["moves"] == 0
        assert result.evaluations == 1 + iterations
        # Oracle: replay the walk directly.
        rng = RngStream(seed)
        x = random_point(BOX2, rng)
        best = sphere(x)
        for _ in range(iterations):
            x = tuple(min(30.0, max(-30.0, xk + 0.5 * (rng.random() - 0.5))) for xk in x)
            best = min(best, sphere(x))
        assert result.best_value == best

    def test_determinism(self):
        cfg = FaConfig(population=12, max_iterations=20)
        a = run_fa(cfg, lookup("rastrigin", 2), BOX2, 77)
        b = run_fa(cfg, lookup("rastrigin", 2), BOX2, 77)
        assert a.to_dict(False) == b.to_dict(False)

    def test_evaluation_count(self):
        cfg = FaConfig(population=10, max_iterations=12)
        result = run_fa(cfg, lookup("rastrigin", 2), BOX2, 3)
        assert result.evaluations == 10 + result.info["moves"] + 12
        # Ranked population: at most i moves for the i-th firefly per sweep.
        assert result.info["moves"] <= 12 * 45

    def test_trace_non_increasing_and_best_consistent(self):
        result = run_fa(FaConfig(population=15, max_iterations=40), lookup("rastrigin", 3),
                        SearchSpace.uniform(3), 6)
        vals = result.trace.values()
        assert result.trace.iterations() == list(range(41))
        assert all(b <= a for a, b in zip(vals, vals[1:]))
        assert result.best_value == vals[-1] == rastrigin(result.best_point)

    def test_best_so_far_covers_transient_points(self):
        # Every evaluated point is logged; the reported best is their minimum.
        seen = []
        obj = ObjectiveSpec("logged", 2, lambda x: seen.append(rastrigin(x)) or seen[-1])
        result = run_fa(FaConfig(population=10, max_iterations=10), obj, BOX2, 12)
        assert result.best_value == min(seen)
        assert len(seen) == result.evaluations


def reference_fa(config, objective, space, seed):
    """Slow replay of a run built only from the public step functions."""
    rng = RngStream(seed)
    flies = []
    for _ in range(config.population):
        p = random_point(space, rng)
        flies.append(Firefly(p, objective(p)))
    best = min(f.value for f in flies)
    trace = [best]
    flies = rank(flies)
    for _ in range(config.max_iterations):
        for i in range(len(flies)):
            for j in range(i):
                if flies[j].value < flies[i].value:
                    flies[i] = move_toward(flies[i], flies[j], config, rng, space, objective)
                    best = min(best, flies[i].value)
        k = min(range(len(flies)), key=lambda m: flies[m].value)
        flies[k] = random_walk(flies[k], config, rng, space, objective)
        best = min(best, flies[k].value)
        flies = rank(flies)
        trace.append(best)
    return best, trace


@pytest.mark.parametrize("seed,power,gamma", [(0, 2, 1.0), (5, 1, 0.2), (9, 2, 0.0)])
def test_run_fa_matches_public_step_composition(seed, power, gamma):
    config = FaConfig(population=12, max_iterations=15, gamma=gamma, exponent_power=power)
    space = SearchSpace.uniform(3)
    objective = lookup("rastrigin", 3)
    best, trace = reference_fa(config, objective, space, seed)
    result = run_fa(config, objective, space, seed)
    assert result.best_value == best
    assert result.trace.values() == trace
    assert result.best_value == objective(result.best_point)
