"""Counter-based random streams and the deterministic Monte Carlo driver.

Trials are grouped into fixed-size chunks. Chunk ``k`` of a run with seed
``s`` draws from a Philox generator whose 128-bit key is ``(s, k)``, and the
draw index is Philox's own counter. Every trial therefore sees the same
numbers whatever the number of worker threads, and per-trial results are
reduced in trial order.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = ["CHUNK_SIZE", "stream", "per_trial", "MonteCarloSummary", "summarize"]

CHUNK_SIZE = 8192
_MASK64 = (1 << 64) - 1


def stream(seed, chunk=0):
    """Generator for chunk ``chunk`` of the run seeded with ``seed``."""
    if chunk < 0:
        raise ValueError("chunk index must be non-negative")
    key = (int(seed) & _MASK64) | (int(chunk) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def per_trial(trial_fn, trials, seed, threads=1):
    """Evaluate ``trial_fn(rng, count) -> array(count)`` over all chunks.

    Returns the per-trial values concatenated in trial order.
    """
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_chunks = -(-trials // CHUNK_SIZE)
    sizes = [min(CHUNK_SIZE, trials - k * CHUNK_SIZE) for k in range(n_chunks)]

    def run(k):
        out = np.asarray(trial_fn(stream(seed, k), sizes[k]), dtype=float)
        if out.shape != (sizes[k],):
            raise ValueError(f"trial function returned shape {out.shape}, expected ({sizes[k]},)")
        return out

    if threads is None or threads <= 1 or n_chunks == 1:
        parts = [run(k) for k in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    return np.concatenate(parts)


@dataclass(frozen=True)
class MonteCarloSummary:
    mean: float
    std_error: float
    trials: int


def summarize(values):
    values = np.asarray(values, dtype=float)
    n = values.size
    mean = float(np.mean(values))
    if n > 1:
        std_error = float(np.std(values, ddof=1) / np.sqrt(n))
    else:
        std_error = 0.0
    return MonteCarloSummary(mean, std_error, n)
