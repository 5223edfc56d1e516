import warnings
from itertools import combinations

import numpy as np
import pytest

from divmax.core import Instance, ModularObjective, objective_value, scaled_marginal, validate_semimetric
from divmax.errors import IterationLimitExceeded, PTooLarge, RankTooSmall, WrongConstraintKind
from divmax.greedy import greedy_solve
from divmax.localsearch import best_seed_pair, find_improving_swap, local_search_solve
from divmax.matroid import PartitionMatroid, UniformMatroid, extend_to_basis, is_basis
from divmax.testkit import gen_instance

from helpers import equilateral, phi

GREEDY_DIST = [[0, 1, 1], [1, 0, 2], [1, 2, 0]]


def modular(dist, weights, lam=1.0, constraint=None):
    return Instance(
        metric=validate_semimetric(dist),
        objective=ModularObjective(weights),
        lam=lam,
        constraint=constraint or UniformMatroid(1),
    )


def brute_best(inst, weights, dist, size):
    return max(phi(weights, dist, inst.lam, s) for s in combinations(range(inst.n), size))


class TestGreedy:
    def test_p1_picks_best_weight(self):
        rep = greedy_solve(modular(GREEDY_DIST, [4, 1, 0]))
        assert rep.selected == (0,) and rep.objective_value == 4

    def test_worked_example(self):
        inst = modular(GREEDY_DIST, [4, 1, 0], constraint=UniformMatroid(2))
        rep = greedy_solve(inst)
        assert rep.selected == (0, 1)
        assert [t["score"] for t in rep.trace] == [2.0, 1.5]
        assert scaled_marginal(inst, 2, [0]) == 1.0
        assert rep.objective_value == 6
        assert brute_best(inst, [4, 1, 0], GREEDY_DIST, 2) == 6
        assert rep.iterations == 2
        assert rep.bound == 0.5

    def test_p_equals_n(self):
        inst = modular(GREEDY_DIST, [4, 1, 0], constraint=UniformMatroid(3))
        rep = greedy_solve(inst)
        assert sorted(rep.selected) == [0, 1, 2]
        assert rep.objective_value == 5 + 4

    def test_tie_break_lowest_index(self):
        inst = modular(equilateral(4), [1, 1, 1, 1], constraint=UniformMatroid(2))
        assert greedy_solve(inst).selected == (0, 1)

    def test_wrong_constraint(self):
        inst = modular(equilateral(4), [1] * 4, constraint=PartitionMatroid([[0, 1], [2, 3]], [1, 1]))
        with pytest.raises(WrongConstraintKind):
            greedy_solve(inst)

    def test_p_too_large(self):
        with pytest.raises(PTooLarge):
            modular(equilateral(3), [1] * 3, constraint=UniformMatroid(4))

    def test_trace_scores_dominate(self):
        for seed in range(30):
            inst = gen_instance(9, 2.0, ["modular", "coverage"][seed % 2], "uniform", 1.0, seed, rank=4)
            rep = greedy_solve(inst)
            assert len(rep.selected) == 4
            for k, step in enumerate(rep.trace):
                prefix = list(rep.selected[:k])
                for u in range(inst.n):
                    if u not in prefix:
                        assert step["score"] >= scaled_marginal(inst, u, prefix)

    def test_deterministic(self):
        inst = gen_instance(8, 1.5, "coverage", "uniform", 0.5, 11, rank=3)
        assert greedy_solve(inst) == greedy_solve(inst)


class TestSeedPair:
    def test_example(self):
        inst = modular(GREEDY_DIST, [4, 1, 0], constraint=UniformMatroid(2))
        assert best_seed_pair(inst) == (0, 1)
        assert [objective_value(inst, p) for p in [(0, 1), (0, 2), (1, 2)]] == [6, 5, 3]

    def test_lambda_zero(self):
        inst = modular(GREEDY_DIST, [1, 3, 2], lam=0.0, constraint=UniformMatroid(2))
        assert best_seed_pair(inst) == (1, 2)

    def test_partition_skips_dependent_pairs(self):
        dist = equilateral(4)
        dist[0][1] = dist[1][0] = 1.5  # the best pair overall sits inside one part
        inst = modular(dist, [5, 5, 0, 0], constraint=PartitionMatroid([[0, 1], [2, 3]], [1, 1]))
        assert best_seed_pair(inst) == (0, 2)

    def test_rank_one(self):
        with pytest.raises(RankTooSmall):
            best_seed_pair(modular(equilateral(3), [1, 1, 1]))


class TestLocalSearch:
    def test_rank_two_returns_seed(self):
        inst = modular(GREEDY_DIST, [4, 1, 0], constraint=UniformMatroid(2))
        rep = local_search_solve(inst)
        assert rep.selected == (0, 1) and rep.iterations == 0
        assert rep.objective_value == brute_best(inst, [4, 1, 0], GREEDY_DIST, 2)

    def test_far_pair_example(self):
        dist = equilateral(4)
        dist[0][1] = dist[1][0] = 1.0
        dist[2][3] = dist[3][2] = 10.0
        inst = modular(dist, [0, 0, 0, 0], constraint=UniformMatroid(2))
        rep = local_search_solve(inst)
        assert rep.selected == (2, 3)
        assert rep.objective_value == 10
        assert brute_best(inst, [0] * 4, dist, 2) == 10

    def test_modular_lambda_zero_finds_top_weights(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            n = int(rng.integers(4, 10))
            w = rng.random(n)
            p = int(rng.integers(1, n + 1))
            inst = modular(equilateral(n), w, lam=0.0, constraint=UniformMatroid(p))
            rep = local_search_solve(inst)
            assert set(rep.selected) == set(np.argsort(-w)[:p].tolist())

    def test_rank_one_best_singleton(self):
        inst = modular(GREEDY_DIST, [1, 3, 3])
        rep = local_search_solve(inst)
        assert rep.selected == (1,) and rep.iterations == 0

    def test_invariants(self):
        for seed in range(40):
            kind = ["uniform", "partition"][seed % 2]
            inst = gen_instance(10, 3.0, ["modular", "coverage"][seed % 3 % 2], kind, 1.0, seed, rank=4)
            rep = local_search_solve(inst)
            assert is_basis(inst.constraint, rep.selected, inst.n)
            values = [t["objective"] for t in rep.trace]
            assert all(b > a + 1e-9 for a, b in zip(values, values[1:]))
            assert values[-1] == pytest.approx(rep.objective_value, abs=1e-9)
            assert not rep.truncated
            # local optimality certificate
            s = set(rep.selected)
            for u in set(range(inst.n)) - s:
                for v in s:
                    cand = (s - {v}) | {u}
                    if inst.constraint.is_independent(cand):
                        assert objective_value(inst, sorted(cand)) <= rep.objective_value + 1e-9
            # every intermediate state is a basis
            cur = set(rep.selected)
            for step in reversed(rep.trace[1:]):
                assert is_basis(inst.constraint, cur, inst.n)
                cur = (cur - {step["swap_in"]}) | {step["swap_out"]}
            assert is_basis(inst.constraint, cur, inst.n)

    def test_best_improvement(self):
        for seed in range(20):
            inst = gen_instance(9, 2.0, "coverage", "uniform", 1.0, seed, rank=4)
            first = local_search_solve(inst, improve="first")
            best = local_search_solve(inst, improve="best")
            for rep in (first, best):
                assert find_improving_swap(inst, rep.selected) is None
            # the first best-improvement swap is the largest available one
            if best.iterations:
                start = extend_to_basis(inst.constraint, best_seed_pair(inst), inst.n)
                top = find_improving_swap(inst, start, improve="best")
                assert best.trace[1]["objective"] == top[2]

    def test_truncation_flagged(self):
        inst = gen_instance(10, 1.0, "modular", "uniform", 1.0, 3, rank=4)
        full = local_search_solve(inst, seed_strategy="random", seed=1)
        assert full.iterations >= 1
        with pytest.warns(IterationLimitExceeded):
            rep = local_search_solve(inst, seed_strategy="random", seed=1, max_iters=0)
        assert rep.truncated and rep.iterations == 0
        assert is_basis(inst.constraint, rep.selected, inst.n)

    def test_random_seed_strategy_deterministic(self):
        inst = gen_instance(9, 1.5, "modular", "partition", 1.0, 4, rank=4)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            a = local_search_solve(inst, seed_strategy="random", seed=2)
        assert a == local_search_solve(inst, seed_strategy="random", seed=2)

    def test_bad_mode(self):
        inst = modular(GREEDY_DIST, [1, 1, 1], constraint=UniformMatroid(2))
        with pytest.raises(ValueError):
            local_search_solve(inst, improve="worst")
