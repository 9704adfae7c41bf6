"""Genetic algorithm over per-role query weights.

A chromosome carries five genes, one weight per role type (CoI, Dc,
Rc, Sc, Ec), each bounded to [0, 1]; the structural-concept gene is
pinned to 0 so stopword scaffolding never accrues weight.  Fitness is
the retrieval MAP a pluggable oracle reports for a chromosome, boosted
multiplicatively as MAP crosses fixed thresholds (the boost is strictly
monotone, so it never reorders chromosomes).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from .roles import RoleType

logger = logging.getLogger(__name__)

GENE_ORDER = (RoleType.COI, RoleType.DC, RoleType.RC, RoleType.SC, RoleType.EC)
_SC_INDEX = GENE_ORDER.index(RoleType.SC)


@dataclass(frozen=True)
class Chromosome:
    w_coi: float
    w_dc: float
    w_rc: float
    w_sc: float
    w_ec: float

    def __post_init__(self):
        for gene in self.genes:
            if not 0.0 <= gene <= 1.0:
                raise ValueError(f"gene out of bounds: {self.genes}")
        if self.w_sc != 0.0:
            raise ValueError("structural-concept gene must stay 0.0")

    @property
    def genes(self) -> tuple:
        return (self.w_coi, self.w_dc, self.w_rc, self.w_sc, self.w_ec)

    def weight_for(self, role: RoleType) -> float:
        return self.genes[GENE_ORDER.index(role)]

    @classmethod
    def from_genes(cls, genes) -> "Chromosome":
        genes = list(genes)
        genes[_SC_INDEX] = 0.0
        return cls(*genes)


@dataclass(frozen=True)
class GaConfig:
    random_seed: int
    population_size: int = 80
    max_generations: int = 100
    mutation_rate: float = 0.10
    crossover_rate: float = 0.90
    boost_thresholds: tuple = (0.1, 0.2, 0.3, 0.4, 0.5)
    boost_factors: tuple = (1.2, 1.4, 1.6, 1.8, 2.0)
    scope: str = "set"  # "set": one weight vector per query set; "query": per query

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be a probability")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ValueError("crossover_rate must be a probability")
        if len(self.boost_thresholds) != len(self.boost_factors):
            raise ValueError("boost thresholds and factors must pair up")
        if self.scope not in ("set", "query"):
            raise ValueError("scope must be 'set' or 'query'")


@dataclass
class GenerationRecord:
    generation: int
    best_map: float
    best_chromosome: Chromosome


def init_population(cfg: GaConfig, rng: random.Random | None = None) -> list[Chromosome]:
    """Uniform random chromosomes with the Sc gene forced to zero."""
    rng = rng or random.Random(cfg.random_seed)
    population = []
    for _ in range(cfg.population_size):
        genes = [
            0.0 if i == _SC_INDEX else rng.random() for i in range(len(GENE_ORDER))
        ]
        population.append(Chromosome(*genes))
    return population


def boost_fitness(map_value: float, cfg: GaConfig) -> float:
    """MAP times the factor of the highest threshold it exceeds."""
    factor = 1.0
    for threshold, boost in zip(cfg.boost_thresholds, cfg.boost_factors):
        if map_value > threshold:
            factor = boost
    return map_value * factor


def evaluate(population, oracle, cfg: GaConfig):
    """Score each chromosome; a failing oracle scores 0 and is logged.

    Returns (fitness values, raw MAP values).
    """
    fitnesses = []
    maps = []
    for chrom in population:
        try:
            map_value = float(oracle(chrom))
        except Exception:
            logger.exception("fitness oracle failed for %s", chrom)
            map_value = 0.0
        maps.append(map_value)
        fitnesses.append(boost_fitness(map_value, cfg))
    return fitnesses, maps


def select_roulette(population, fitnesses, rng: random.Random, n_pairs: int):
    """Fitness-proportionate parent pairs; uniform when all fitness is zero."""
    total = sum(fitnesses)
    if total <= 0.0:
        return [
            (rng.choice(population), rng.choice(population)) for _ in range(n_pairs)
        ]
    cumulative = []
    acc = 0.0
    for f in fitnesses:
        acc += f
        cumulative.append(acc)

    def spin():
        pick = rng.random() * total
        for i, bound in enumerate(cumulative):
            if pick < bound:
                return population[i]
        return population[-1]

    return [(spin(), spin()) for _ in range(n_pairs)]


def crossover(a: Chromosome, b: Chromosome, rng: random.Random):
    """Single-point gene exchange; the Sc gene stays pinned to zero."""
    cut = rng.randint(1, len(GENE_ORDER) - 1)
    child1 = Chromosome.from_genes(a.genes[:cut] + b.genes[cut:])
    child2 = Chromosome.from_genes(b.genes[:cut] + a.genes[cut:])
    return child1, child2


def mutate(chrom: Chromosome, rate: float, rng: random.Random) -> Chromosome:
    """Redraw each free gene with probability ``rate``; Sc is untouched."""
    genes = list(chrom.genes)
    for i in range(len(genes)):
        if i == _SC_INDEX:
            continue
        if rng.random() < rate:
            genes[i] = rng.random()
    return Chromosome.from_genes(genes)


def optimize(cfg: GaConfig, oracle):
    """Run the evaluate/select/crossover/mutate loop for max_generations.

    Returns (best chromosome ever seen, per-generation history of the
    best-so-far MAP).  The fittest individual of each generation is
    copied unchanged into the next (single-elitism), so the history is
    non-decreasing.
    """
    rng = random.Random(cfg.random_seed)
    population = init_population(cfg, rng)
    best_chrom: Chromosome | None = None
    best_map = -1.0
    history: list[GenerationRecord] = []

    for generation in range(cfg.max_generations):
        fitnesses, maps = evaluate(population, oracle, cfg)
        top = max(range(len(population)), key=lambda i: (fitnesses[i], -i))
        if maps[top] > best_map:
            best_map = maps[top]
            best_chrom = population[top]
        history.append(GenerationRecord(generation, best_map, best_chrom))

        if generation == cfg.max_generations - 1:
            break
        next_gen = [population[top]]  # elitism
        while len(next_gen) < cfg.population_size:
            (pa, pb) = select_roulette(population, fitnesses, rng, 1)[0]
            if rng.random() < cfg.crossover_rate:
                c1, c2 = crossover(pa, pb, rng)
            else:
                c1, c2 = pa, pb
            next_gen.append(mutate(c1, cfg.mutation_rate, rng))
            if len(next_gen) < cfg.population_size:
                next_gen.append(mutate(c2, cfg.mutation_rate, rng))
        population = next_gen

    return best_chrom, history


def history_report(history) -> str:
    """Optimization report: generation, best MAP, best chromosome per line."""
    lines = ["generation\tbest_map\tw_coi\tw_dc\tw_rc\tw_sc\tw_ec"]
    for rec in history:
        genes = "\t".join(f"{g:.6f}" for g in rec.best_chromosome.genes)
        lines.append(f"{rec.generation}\t{rec.best_map:.6f}\t{genes}")
    return "\n".join(lines) + "\n"
