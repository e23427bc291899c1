"""
Monte Carlo estimators of Banzhaf, Shapley-Shubik and satisfaction values
for games too large to enumerate.

Samples are drawn in batches of fixed size. Batch k always uses the k-th
child of np.random.SeedSequence(rng_seed), so a report only depends on the
game, the sample count, the seed and the batch size, never on the number of
workers.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from influence_games.core.game import InfluenceGame
from influence_games.core.spread import BatchSpread

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 4096


@dataclass
class EstimateReport:
    estimates: np.ndarray
    standard_errors: np.ndarray
    hits: np.ndarray  # per player count of successful samples
    samples: int
    rng_seed: int

    @classmethod
    def from_hits(cls, hits: np.ndarray, samples: int, rng_seed: int):
        p = hits / samples
        # binomial standard error of a sample mean
        stderr = np.sqrt(p * (1 - p) / samples)
        return cls(
            estimates=p,
            standard_errors=stderr,
            hits=hits,
            samples=samples,
            rng_seed=rng_seed
        )

    def within(self, exact, k=4.0) -> np.ndarray:
        """
        Players whose estimate lies within k standard errors of exact, with
        a slack of one sample for events too rare to have been hit
        """
        exact = np.asarray(exact, dtype=np.float64)
        deviation = np.abs(self.estimates - exact)
        return deviation <= k * self.standard_errors + 1 / self.samples


class _BatchSampler:
    """
    Splits a sample count into seeded batches and sums the per-batch hit
    counts produced by a batch function
    """

    def __init__(
        self,
        game: InfluenceGame,
        samples: int,
        rng_seed: int,
        batch_size=DEFAULT_BATCH_SIZE,
        workers=1,
        progress=False
    ):
        if samples < 1:
            raise ValueError(f"Sample count must be >= 1, got {samples}")
        if batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {batch_size}")
        if rng_seed < 0 or rng_seed >= 2**64:
            raise ValueError(
                f"Seed must be an unsigned 64-bit integer, got {rng_seed}"
            )
        self.game = game
        self.n = game.n
        self.samples = int(samples)
        self.rng_seed = int(rng_seed)
        self.batch_size = int(batch_size)
        self.workers = max(1, int(workers))
        self.progress = progress
        self.spreader = BatchSpread(game.graph)
        self.counted = game.counted_nodes()

    def batches(self):
        num_batches = -(-self.samples // self.batch_size)
        seeds = np.random.SeedSequence(self.rng_seed).spawn(num_batches)
        sizes = [self.batch_size] * (num_batches - 1)
        sizes.append(self.samples - self.batch_size * (num_batches - 1))
        return list(zip(seeds, sizes))

    def wins(self, members: np.ndarray) -> np.ndarray:
        return self.spreader.sizes(members, self.counted) >= self.game.quota

    def run(self, batch_func, desc) -> EstimateReport:
        batches = self.batches()
        hits = np.zeros(self.n, dtype=np.int64)
        bar = tqdm(total=len(batches), desc=desc, disable=not self.progress)

        def work(batch):
            seed, size = batch
            return batch_func(np.random.default_rng(seed), size)

        if self.workers == 1:
            for result in map(work, batches):
                hits += result
                bar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                for result in executor.map(work, batches):
                    hits += result
                    bar.update(1)
        bar.close()
        logger.debug(
            f"{desc}: {self.samples} samples in {len(batches)} batches"
        )
        return EstimateReport.from_hits(hits, self.samples, self.rng_seed)

    def uniform_coalitions(self, rng, size) -> np.ndarray:
        return rng.integers(0, 2, size=(size, self.n), dtype=np.int8) == 1


def estimate_banzhaf_raw(
    game: InfluenceGame, samples: int, rng_seed: int, **kwargs
) -> EstimateReport:
    """
    Estimate eta(i) / 2^(n-1): the share of uniform coalitions S of the
    other players with S + i winning and S losing
    """
    sampler = _BatchSampler(game, samples, rng_seed, **kwargs)

    def batch(rng, size):
        members = sampler.uniform_coalitions(rng, size)
        hits = np.zeros(sampler.n, dtype=np.int64)
        for i in range(sampler.n):
            # the sampled bit of i is ignored, both sides of i are evaluated
            with_i = members.copy()
            with_i[:, i] = True
            without_i = members.copy()
            without_i[:, i] = False
            hits[i] = np.count_nonzero(
                sampler.wins(with_i) & ~sampler.wins(without_i)
            )
        return hits

    return sampler.run(batch, "banzhaf samples")


def estimate_shapley(
    game: InfluenceGame, permutations: int, rng_seed: int, **kwargs
) -> EstimateReport:
    """
    Estimate SS(i) as the share of uniform player orderings in which i is
    pivotal, i.e. the first player whose arrival makes the prefix win.
    Orderings without a pivot (empty set wins or grand coalition loses)
    credit nobody.
    """
    sampler = _BatchSampler(game, permutations, rng_seed, **kwargs)
    n = sampler.n

    def batch(rng, size):
        hits = np.zeros(n, dtype=np.int64)
        if n == 0:
            return hits
        orders = rng.permuted(np.tile(np.arange(n), (size, 1)), axis=1)
        rows = np.arange(size)
        prefix = np.zeros((size, n), dtype=bool)
        pivot = np.full(size, -1, dtype=np.int64)
        undecided = ~sampler.wins(prefix)
        for k in range(n):
            prefix[rows, orders[:, k]] = True
            if not undecided.any():
                break
            newly = undecided & sampler.wins(prefix)
            pivot[newly] = orders[newly, k]
            undecided &= ~newly
        np.add.at(hits, pivot[pivot >= 0], 1)
        return hits

    return sampler.run(batch, "shapley permutations")


def estimate_satisfaction(
    game: InfluenceGame, samples: int, rng_seed: int, **kwargs
) -> EstimateReport:
    """
    Estimate C_S(i): the share of uniform coalitions X with i in X and X
    winning, or i outside X and X losing
    """
    sampler = _BatchSampler(game, samples, rng_seed, **kwargs)

    def batch(rng, size):
        members = sampler.uniform_coalitions(rng, size)
        win = sampler.wins(members)
        return np.count_nonzero(members == win[:, None], axis=0)

    return sampler.run(batch, "satisfaction samples")
