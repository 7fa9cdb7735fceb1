"""Genetic search over planar element coordinates.

A genome is the flat vector ``[x_1..x_N, y_1..y_N]``; heights follow from
the element plane, so every individual is a valid on-plane layout and the
fitness is the pair objective ``G`` (lower is better).

Three stopping rules share one engine:

``base``      fixed generation budget, random initial population
``marginal``  stop once the directivity beats a grid reference, seeded near it
``stall``     stop after a run of generations without improvement, seeded likewise

Randomness comes from a counter-based generator (Philox) keyed by the run
seed and the generation index, so a run is reproducible and independent of
how fitness evaluation is scheduled.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from .errors import SafetyCapReached
from .geometry import DirectionSpec
from .objective import PlanarSolution, directivity_from_g, objective_values
from .oupa import OupaResult

VARIANTS = ("base", "marginal", "stall")
MUTATIONS = ("gaussian", "uniform")

# Tuned (crossover fraction, mutation rate) per element count.
TUNED_RATES = {
    4: (0.8, 1.0),
    6: (0.4, 0.2),
    9: (0.1, 0.1),
    12: (0.9, 0.1),
    16: (0.4, 0.1),
    20: (0.8, 0.7),
    25: (0.8, 0.1),
    30: (0.6, 0.1),
    36: (0.8, 0.2),
}

DEFAULT_SEED = 20240611
STALL_GENERATIONS = 100
SAFETY_CAP = 5000
IMPROVEMENT_EPS = 1e-12


def default_rates(n: int) -> tuple[float, float]:
    """Tuned rates for ``n`` elements, taken from the nearest tabulated count."""
    key = min(TUNED_RATES, key=lambda m: (abs(m - n), -m))
    return TUNED_RATES[key]


@dataclass(frozen=True)
class GaConfig:
    n_vars: int
    crossover_fraction: float = 0.7
    max_generations: int | None = 40
    population_size: int = 200
    mutation: str = "gaussian"
    mutation_rate: float = 0.1
    bounds: tuple = (0.0, 5.0)
    seed: int = DEFAULT_SEED
    variant: str = "base"
    elite: int = 2
    stall_generations: int = STALL_GENERATIONS
    safety_cap: int = SAFETY_CAP
    seeded_fraction: float = 0.5
    perturbation: float = 0.05

    def __post_init__(self):
        if self.n_vars < 2 or self.n_vars % 2:
            raise ValueError("n_vars must be an even number >= 2")
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2")
        if not 0.0 <= self.crossover_fraction <= 1.0 or not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("crossover_fraction and mutation_rate must lie in [0, 1]")
        if self.mutation not in MUTATIONS:
            raise ValueError(f"mutation must be one of {MUTATIONS}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.max_generations is not None and self.max_generations < 0:
            raise ValueError("max_generations must be nonnegative")
        low, high = self.bound_arrays()
        if np.any(low >= high):
            raise ValueError("every bound needs low < high")

    def bound_arrays(self):
        low, high = self.bounds
        low = np.broadcast_to(np.asarray(low, dtype=float), (self.n_vars,))
        high = np.broadcast_to(np.asarray(high, dtype=float), (self.n_vars,))
        return low, high

    @classmethod
    def base(cls, n: int, k: float = 1.0, seed: int = DEFAULT_SEED, **overrides) -> "GaConfig":
        """Reference settings: population 200 N, 40 generations, box of 5 phase units."""
        params = dict(n_vars=2 * n, population_size=200 * n, bounds=(0.0, 5.0 / k), seed=seed)
        params.update(overrides)
        return cls(**params)

    @classmethod
    def seeded(cls, variant: str, oupa_result: OupaResult, seed: int = DEFAULT_SEED,
               **overrides) -> "GaConfig":
        """Settings for the runs seeded near a grid solution: population 8 N^2, uniform mutation."""
        n = oupa_result.spec.n
        cf, mr = default_rates(n)
        xy = _grid_genome(oupa_result)
        params = dict(
            n_vars=2 * n,
            crossover_fraction=cf,
            mutation_rate=mr,
            population_size=8 * n * n,
            mutation="uniform",
            max_generations=None,
            bounds=(0.0, 2.0 * float(xy.max())),
            seed=seed,
            variant=variant,
        )
        params.update(overrides)
        return cls(**params)


@dataclass(frozen=True)
class GaRunReport:
    best_solution: PlanarSolution
    best_g: float
    best_directivity_dbi: float
    generations_run: int
    history: tuple
    stop_reason: str
    seed: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def safety_cap_reached(self) -> bool:
        return self.stop_reason == "safety_cap"

    def raise_on_cap(self) -> "GaRunReport":
        if self.safety_cap_reached:
            raise SafetyCapReached(f"no improvement on the reference within {self.generations_run} generations")
        return self


def generation_rng(seed: int, generation: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & (2**64 - 1), generation])))


def _sigma(cfg: GaConfig, generation: int) -> np.ndarray:
    low, high = cfg.bound_arrays()
    horizon = cfg.max_generations or cfg.safety_cap
    frac = min(generation / horizon, 1.0) if horizon else 1.0
    return (high - low) * (0.1 - 0.09 * frac)


def variation_operators(parents, cfg: GaConfig, rng: np.random.Generator, generation: int = 0):
    """Blend crossover on a ``crossover_fraction`` share of pairs, then per-gene mutation.

    Parents are paired in order (0, 1), (2, 3), ...; children are clamped to
    the bounds.
    """
    parents = np.asarray(parents, dtype=float)
    if parents.shape[0] % 2:
        raise ValueError("variation needs an even number of parents")
    low, high = cfg.bound_arrays()
    a, b = parents[0::2], parents[1::2]
    cross = rng.random(a.shape[0]) < cfg.crossover_fraction
    w = rng.random(a.shape[0])[:, None]
    w = np.where(cross[:, None], w, 1.0)
    children = np.empty_like(parents)
    # Offset form keeps identical parents bit-exact.
    children[0::2] = a + (1.0 - w) * (b - a)
    children[1::2] = b + (1.0 - w) * (a - b)
    mask = rng.random(children.shape) < cfg.mutation_rate
    if cfg.mutation == "gaussian":
        noise = rng.standard_normal(children.shape) * _sigma(cfg, generation)
        children = children + np.where(mask, noise, 0.0)
    else:
        fresh = low + (high - low) * rng.random(children.shape)
        children = np.where(mask, fresh, children)
    return np.clip(children, low, high)


def _tournament(g: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    i = rng.integers(0, g.size, count)
    j = rng.integers(0, g.size, count)
    return np.where(g[i] <= g[j], i, j)


def _grid_genome(oupa_result: OupaResult) -> np.ndarray:
    xy = np.asarray(oupa_result.positions)[:, :2]
    xy = xy - xy.min(axis=0)
    return np.concatenate([xy[:, 0], xy[:, 1]])


def _initial_population(cfg: GaConfig, rng: np.random.Generator, anchor=None, spread=0.0):
    low, high = cfg.bound_arrays()
    pop = low + (high - low) * rng.random((cfg.population_size, cfg.n_vars))
    if anchor is not None:
        n_seeded = int(round(cfg.seeded_fraction * cfg.population_size))
        noise = rng.uniform(-spread, spread, (n_seeded, cfg.n_vars))
        pop[:n_seeded] = np.clip(anchor[None, :] + noise, low, high)
    return pop


def _solution(genome, direction, amps) -> PlanarSolution:
    n = amps.size
    return PlanarSolution(genome[:n].copy(), genome[n:].copy(), direction, amps)


def _dbi(g: float, amps, direction) -> float:
    return 10.0 * math.log10(directivity_from_g(g, amps, direction))


def _run(direction: DirectionSpec, amps: np.ndarray, cfg: GaConfig, anchor=None, spread=0.0,
         target_dbi: float | None = None) -> GaRunReport:
    start = time.perf_counter()
    rng = generation_rng(cfg.seed, 0)
    pop = _initial_population(cfg, rng, anchor, spread)
    g = objective_values(pop, amps, direction)
    best_i = int(np.argmin(g))
    best, best_g = pop[best_i].copy(), float(g[best_i])
    best_dbi = _dbi(best_g, amps, direction)
    history = [(best_g, best_dbi)]
    elite = min(cfg.elite, cfg.population_size)
    n_children = cfg.population_size - elite
    stall = 0
    gen = 0
    reason = None

    while True:
        if cfg.variant == "base" and gen >= cfg.max_generations:
            reason = "max_generations"
        elif cfg.variant == "marginal" and target_dbi is not None and best_dbi > target_dbi:
            reason = "outperformed"
        elif cfg.variant == "stall" and stall >= cfg.stall_generations:
            reason = "stalled"
        elif cfg.max_generations is not None and gen >= cfg.max_generations:
            reason = "max_generations"
        elif cfg.variant != "base" and gen >= cfg.safety_cap:
            reason = "safety_cap"
        if reason:
            break
        gen += 1
        rng = generation_rng(cfg.seed, gen)
        order = np.argsort(g, kind="stable")
        elites = pop[order[:elite]]
        n_parents = n_children + (n_children % 2)
        parents = pop[_tournament(g, n_parents, rng)]
        children = variation_operators(parents, cfg, rng, gen)[:n_children]
        pop = np.concatenate([elites, children])
        g = objective_values(pop, amps, direction)
        cand = int(np.argmin(g))
        if g[cand] < best_g - IMPROVEMENT_EPS:
            stall = 0
        else:
            stall += 1
        if g[cand] < best_g:
            best, best_g = pop[cand].copy(), float(g[cand])
            best_dbi = _dbi(best_g, amps, direction)
        history.append((best_g, best_dbi))

    return GaRunReport(
        best_solution=_solution(best, direction, amps),
        best_g=best_g,
        best_directivity_dbi=best_dbi,
        generations_run=gen,
        history=tuple(history),
        stop_reason=reason,
        seed=cfg.seed,
        wall_time=time.perf_counter() - start,
    )


def _amplitudes(n, amplitudes):
    return np.ones(n) if amplitudes is None else np.asarray(amplitudes, dtype=float)


def ga_optimize(problem, cfg: GaConfig) -> GaRunReport:
    """Minimize the pair objective from a random start; ``problem = (direction, N[, amplitudes])``."""
    direction, n, *rest = problem
    if cfg.n_vars != 2 * n:
        raise ValueError("n_vars must equal 2 N")
    amps = _amplitudes(n, rest[0] if rest else None)
    return _run(direction, amps, replace(cfg, variant="base") if cfg.variant != "base" else cfg)


def _seeded_run(oupa_result: OupaResult, cfg: GaConfig, variant: str) -> GaRunReport:
    if cfg.n_vars != 2 * oupa_result.spec.n:
        raise ValueError("configuration size does not match the grid solution")
    if cfg.variant != variant:
        cfg = replace(cfg, variant=variant)
    amps = np.ones(oupa_result.spec.n)
    anchor = _grid_genome(oupa_result)
    spread = cfg.perturbation * oupa_result.d_min_star
    target = oupa_result.directivity.dbi if variant == "marginal" else None
    return _run(oupa_result.direction, amps, cfg, anchor, spread, target)


def ga_marginal(oupa_result: OupaResult, cfg: GaConfig) -> GaRunReport:
    """Run until the directivity strictly exceeds the grid solution's (or the safety cap)."""
    return _seeded_run(oupa_result, cfg, "marginal")


def ga_stall(oupa_result: OupaResult, cfg: GaConfig) -> GaRunReport:
    """Run until ``stall_generations`` consecutive generations bring no improvement."""
    return _seeded_run(oupa_result, cfg, "stall")


def rate_grid(step: float = 0.1):
    levels = [round(step * i, 10) for i in range(1, int(round(1.0 / step)) + 1)]
    return list(product(levels, levels))


def hyperparameter_select(n: int, direction: DirectionSpec, grid=None, seed: int = DEFAULT_SEED,
                          generations: int = 100, oupa_result: OupaResult | None = None,
                          population_size: int | None = None):
    """Pick the (crossover fraction, mutation rate) cell with the best directivity.

    Each cell gets one run of ``generations`` generations with a seed derived
    from ``seed`` and the cell index.  With ``oupa_result`` the runs are seeded
    near that grid solution, otherwise they start at random.  Ties go to the
    smaller mutation rate, then the smaller crossover fraction.
    """
    cells = rate_grid() if grid is None else list(grid)
    if not cells:
        raise ValueError("grid must contain at least one cell")
    scores = []
    for idx, (cf, mr) in enumerate(cells):
        cell_seed = int(np.random.SeedSequence([int(seed), idx]).generate_state(1, np.uint64)[0])
        if oupa_result is not None:
            cfg = GaConfig.seeded("stall", oupa_result, seed=cell_seed, crossover_fraction=cf,
                                  mutation_rate=mr, max_generations=generations,
                                  stall_generations=generations + 1)
            if population_size:
                cfg = replace(cfg, population_size=population_size)
            report = ga_stall(oupa_result, cfg)
        else:
            cfg = GaConfig.base(n, direction.k, seed=cell_seed, crossover_fraction=cf,
                                mutation_rate=mr, max_generations=generations)
            if population_size:
                cfg = replace(cfg, population_size=population_size)
            report = ga_optimize((direction, n), cfg)
        scores.append((report.best_directivity_dbi, cf, mr))
    best = max(scores, key=lambda s: (s[0], -s[2], -s[1]))
    return best[1], best[2]
