import random

import pytest
from hypothesis import given, strategies as st

from roleqe.ga import (
    Chromosome,
    GaConfig,
    boost_fitness,
    crossover,
    evaluate,
    init_population,
    mutate,
    optimize,
    select_roulette,
)
from roleqe.roles import RoleType


def cfg(**kwargs):
    defaults = dict(random_seed=42)
    defaults.update(kwargs)
    return GaConfig(**defaults)


class TestChromosome:
    def test_bounds_enforced(self):
        with pytest.raises(ValueError):
            Chromosome(1.2, 0.0, 0.0, 0.0, 0.0)
        with pytest.raises(ValueError):
            Chromosome(0.5, 0.0, 0.0, 0.3, 0.0)

    def test_from_genes_pins_sc(self):
        c = Chromosome.from_genes((0.1, 0.2, 0.3, 0.9, 0.5))
        assert c.w_sc == 0.0

    def test_weight_lookup(self):
        c = Chromosome(0.859, 0.157, 0.5, 0.0, 0.064)
        assert c.weight_for(RoleType.COI) == 0.859
        assert c.weight_for(RoleType.DC) == 0.157
        assert c.weight_for(RoleType.SC) == 0.0
        assert c.weight_for(RoleType.EC) == 0.064

    def test_worked_weight_shape_is_representable(self):
        Chromosome(0.859, 0.157, 0.0, 0.0, 0.064)


class TestInitPopulation:
    def test_size_bounds_and_sc(self):
        pop = init_population(cfg(population_size=80))
        assert len(pop) == 80
        for chrom in pop:
            assert all(0.0 <= g <= 1.0 for g in chrom.genes)
            assert chrom.w_sc == 0.0

    def test_same_seed_same_population(self):
        assert init_population(cfg()) == init_population(cfg())

    def test_different_seed_differs(self):
        assert init_population(cfg()) != init_population(cfg(random_seed=43))

    def test_rates_must_be_probabilities(self):
        with pytest.raises(ValueError, match="mutation_rate"):
            cfg(mutation_rate=10.0)
        with pytest.raises(ValueError, match="crossover_rate"):
            cfg(crossover_rate=1000.0)


class TestBoost:
    def test_zero_map(self):
        assert boost_fitness(0.0, cfg()) == 0.0

    def test_factors_by_bracket(self):
        c = cfg()
        assert boost_fitness(0.05, c) == pytest.approx(0.05)
        assert boost_fitness(0.15, c) == pytest.approx(0.15 * 1.2)
        assert boost_fitness(0.45, c) == pytest.approx(0.45 * 1.8)
        assert boost_fitness(0.55, c) == pytest.approx(0.55 * 2.0)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_monotone_in_map(self, a, b):
        c = cfg()
        if a > b:
            assert boost_fitness(a, c) >= boost_fitness(b, c)

    def test_oracle_failure_scores_zero(self):
        def broken(chrom):
            raise RuntimeError("retrieval blew up")

        fits, maps = evaluate(init_population(cfg(population_size=3)), broken, cfg())
        assert fits == [0.0, 0.0, 0.0] and maps == [0.0, 0.0, 0.0]

    def test_boost_preserves_map_ordering(self):
        c = cfg()
        maps = [i / 100 for i in range(101)]
        boosted = [boost_fitness(m, c) for m in maps]
        assert boosted == sorted(boosted)


class TestRoulette:
    def test_certain_winner(self):
        pop = init_population(cfg(population_size=3))
        rng = random.Random(1)
        pairs = select_roulette(pop, [1.0, 0.0, 0.0], rng, 50)
        for a, b in pairs:
            assert a == pop[0] and b == pop[0]

    def test_proportional_ratio(self):
        pop = init_population(cfg(population_size=2))
        rng = random.Random(7)
        pairs = select_roulette(pop, [3.0, 1.0], rng, 50_000)
        draws = [p for pair in pairs for p in pair]
        share = sum(1 for p in draws if p == pop[0]) / len(draws)
        assert abs(share - 0.75) < 0.02

    def test_zero_fitness_uniform(self):
        pop = init_population(cfg(population_size=4))
        rng = random.Random(3)
        pairs = select_roulette(pop, [0.0] * 4, rng, 20_000)
        draws = [p for pair in pairs for p in pair]
        for chrom in pop:
            share = sum(1 for p in draws if p == chrom) / len(draws)
            assert abs(share - 0.25) < 0.02


class TestCrossover:
    def test_identical_parents(self):
        a = Chromosome(0.1, 0.2, 0.3, 0.0, 0.5)
        c1, c2 = crossover(a, a, random.Random(0))
        assert c1 == a and c2 == a

    def test_cut_point_table(self):
        a = Chromosome(0.1, 0.2, 0.3, 0.0, 0.5)
        b = Chromosome(0.9, 0.8, 0.7, 0.0, 0.6)

        class FixedCut:
            def randint(self, lo, hi):
                return 2

        c1, c2 = crossover(a, b, FixedCut())
        assert c1.genes == (0.1, 0.2, 0.7, 0.0, 0.6)
        assert c2.genes == (0.9, 0.8, 0.3, 0.0, 0.5)

    def test_offspring_in_bounds(self):
        rng = random.Random(9)
        pop = init_population(cfg(population_size=20), rng)
        for a, b in zip(pop, pop[1:]):
            for child in crossover(a, b, rng):
                assert all(0.0 <= g <= 1.0 for g in child.genes)
                assert child.w_sc == 0.0


class TestMutate:
    def test_rate_zero_identity(self):
        c = Chromosome(0.1, 0.2, 0.3, 0.0, 0.5)
        assert mutate(c, 0.0, random.Random(4)) == c

    def test_rate_one_redraws_free_genes(self):
        c = Chromosome(0.1, 0.2, 0.3, 0.0, 0.5)
        rng = random.Random(4)
        mutated = mutate(c, 1.0, rng)
        assert mutated.w_sc == 0.0
        assert all(
            m != g for m, g in zip(mutated.genes, c.genes) if g != 0.0
        )

    def test_bounds_hold_over_many_mutations(self):
        rng = random.Random(12)
        c = Chromosome(0.5, 0.5, 0.5, 0.0, 0.5)
        for _ in range(10_000):
            c = mutate(c, 0.3, rng)
            assert all(0.0 <= g <= 1.0 for g in c.genes)
            assert c.w_sc == 0.0


def quadratic_oracle(target):
    def oracle(chrom):
        err = sum((g - t) ** 2 for g, t in zip(chrom.genes, target))
        return max(0.0, 1.0 - err)

    return oracle


class TestOptimize:
    def test_converges_to_hidden_target(self):
        target = (0.8, 0.2, 0.1, 0.0, 0.3)
        best, history = optimize(cfg(random_seed=7), quadratic_oracle(target))
        assert max(abs(g - t) for g, t in zip(best.genes, target)) <= 0.1
        assert len(history) == 100

    def test_history_non_decreasing(self):
        best, history = optimize(
            cfg(random_seed=5, max_generations=40), quadratic_oracle((0.5, 0.5, 0.5, 0.0, 0.5))
        )
        maps = [rec.best_map for rec in history]
        assert maps == sorted(maps)

    def test_deterministic(self):
        target = (0.6, 0.1, 0.4, 0.0, 0.9)
        r1 = optimize(cfg(random_seed=21, max_generations=30), quadratic_oracle(target))
        r2 = optimize(cfg(random_seed=21, max_generations=30), quadratic_oracle(target))
        assert r1[0] == r2[0]
        assert [(h.generation, h.best_map, h.best_chromosome) for h in r1[1]] == [
            (h.generation, h.best_map, h.best_chromosome) for h in r2[1]
        ]

    def test_every_chromosome_respects_constraints(self):
        seen = []

        def spying_oracle(chrom):
            seen.append(chrom)
            return 0.5

        optimize(cfg(random_seed=3, population_size=10, max_generations=20), spying_oracle)
        assert len(seen) == 200
        for chrom in seen:
            assert all(0.0 <= g <= 1.0 for g in chrom.genes)
            assert chrom.w_sc == 0.0
