"""Monte Carlo structure-function oracle.

Each trial draws one time-to-failure per component and folds them through
the block diagram (series -> min, parallel -> max). The result is an
estimate of mean TTTF and an empirical survival curve that is independent
of the analytic product formulas in :mod:`linkrel.rbd`.

Random stream contract
----------------------
The uniform variate for component ``c`` (0-based declaration index) in
trial ``i`` (0-based, global across the run) is::

    raw = Philox4x64-10(key=(seed, c)).random_raw()[i]
    u   = (raw >> 11) * 2**-53            # in [0, 1)

and the component TTTF is ``dist.ppf(u)``. A chunk covering trials
``[s, s + m)`` jumps the counter to ``s // 4`` and discards ``s % 4``
words, so the draws depend only on ``(seed, c, i)``: chunk size, chunk
order and the number of worker threads never change the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from linkrel.metrics import SurvivalCurve
from linkrel.numerics import Grid
from linkrel.rbd import Leaf, RbdNode, Series, SystemModel, validate

__all__ = [
    "McConfig",
    "McResult",
    "uniform_stream",
    "fold_times",
    "sample_system_tttf",
    "simulate_tttf",
    "run",
]

_U64 = 2**64
_WORDS_PER_BLOCK = 4


@dataclass(frozen=True)
class McConfig:
    n_samples: int
    seed: int
    chunk_size: int = 65536
    workers: int = 1

    def __post_init__(self):
        for name in ("n_samples", "chunk_size", "workers"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < _U64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")


@dataclass(frozen=True)
class McResult:
    mean_tttf: float
    std_error: float
    empirical_survival: SurvivalCurve
    n_samples: int
    degenerate: bool = False  # std_error is meaningless for a single sample


def uniform_stream(seed: int, component_index: int, start: int, count: int) -> np.ndarray:
    """Uniforms ``u[start:start+count]`` of one component's stream."""
    gen = np.random.Philox(key=np.array([seed, component_index], dtype=np.uint64))
    skip = start % _WORDS_PER_BLOCK
    if start >= _WORDS_PER_BLOCK:
        gen.advance(start // _WORDS_PER_BLOCK)
    raw = gen.random_raw(count + skip)[skip:]
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def fold_times(node: RbdNode, times: Mapping[str, np.ndarray]):
    """System failure time from component failure times (min/max folding)."""
    if isinstance(node, Leaf):
        return times[node.name]
    parts = [fold_times(c, times) for c in node.children]
    op = np.minimum if isinstance(node, Series) else np.maximum
    out = parts[0]
    for p in parts[1:]:
        out = op(out, p)
    return out


def sample_system_tttf(model: SystemModel, rng: np.random.Generator) -> float:
    """One system TTTF: one draw per component, in declaration order."""
    times = {c.name: float(c.dist.sample(rng)) for c in model.components}
    return float(fold_times(model.structure, times))


def _chunk(model: SystemModel, seed: int, start: int, count: int) -> np.ndarray:
    times = {
        c.name: np.asarray(c.dist.ppf(uniform_stream(seed, idx, start, count)))
        for idx, c in enumerate(model.components)
    }
    return np.asarray(fold_times(model.structure, times), dtype=float)


def simulate_tttf(model: SystemModel, cfg: McConfig) -> np.ndarray:
    """All ``cfg.n_samples`` system TTTFs in trial order."""
    validate(model)
    starts = range(0, cfg.n_samples, cfg.chunk_size)

    def job(start: int) -> np.ndarray:
        return _chunk(model, cfg.seed, start, min(cfg.chunk_size, cfg.n_samples - start))

    if cfg.workers == 1:
        parts = [job(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(job, starts))
    return np.concatenate(parts)


def run(model: SystemModel, cfg: McConfig, grid: Grid) -> McResult:
    samples = simulate_tttf(model, cfg)
    n = samples.size
    mean = math.fsum(samples) / n
    if n > 1:
        var = math.fsum((samples - mean) ** 2) / (n - 1)
        std_error = math.sqrt(var / n)
    else:
        std_error = 0.0
    ordered = np.sort(samples)
    survivors = n - np.searchsorted(ordered, grid.points, side="right")
    curve = SurvivalCurve("survival", grid, survivors / n)
    return McResult(mean, std_error, curve, n, degenerate=n == 1)
