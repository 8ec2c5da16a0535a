"""Seeded random-walk simulation for empirical validation of the analytic routes."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import RunawayError, ValidationError
from .graph import Distribution, TransitionMatrix

STEP_CAP = 10**9
_MASK64 = (1 << 64) - 1
_BUFFER = 128


@dataclass(frozen=True)
class SimStats:
    """Trial count, sample mean, and standard error of a simulation."""

    trials: int
    mean: float
    stderr: float
    seed: int


class _TrialStreams:
    """Per-trial Philox substreams keyed by (seed, trial index).

    Each trial gets the stream of a fresh Philox with that key, so results
    do not depend on execution order; the state is reset in place instead
    of constructing a generator per trial.
    """

    def __init__(self, seed: int):
        self._bg = np.random.Philox(key=np.array([seed & _MASK64, 0], dtype=np.uint64))
        self._gen = np.random.Generator(self._bg)
        self._template = self._bg.state

    def trial(self, t: int) -> np.random.Generator:
        state = self._template
        state["state"]["key"][1] = t & _MASK64
        state["state"]["counter"][:] = 0
        self._bg.state = state
        return self._gen


def _substream(seed: int, trial: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, trial & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _cumulative_rows(P: TransitionMatrix) -> list[list[float]]:
    cum = np.cumsum(P.probs, axis=1)
    cum[:, -1] = 1.0
    return [row.tolist() for row in cum]


def _walk(cum_rows, start: int, stop: int, rng: np.random.Generator, max_steps: int) -> int:
    if start == stop:
        return 0
    v = start
    steps = 0
    buf: list[float] = []
    ptr = 0
    while True:
        if ptr >= len(buf):
            buf = rng.random(_BUFFER).tolist()
            ptr = 0
        v = bisect_right(cum_rows[v], buf[ptr])
        ptr += 1
        steps += 1
        if v == stop:
            return steps
        if steps >= max_steps:
            raise RunawayError(f"walk exceeded {max_steps} steps without reaching {stop}")


def _stats(counts: np.ndarray, seed: int) -> SimStats:
    trials = counts.size
    mean = float(counts.mean())
    stderr = float(counts.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return SimStats(trials=trials, mean=mean, stderr=stderr, seed=seed)


def simulate_walk(
    P: TransitionMatrix, start: int, stop: int, seed: int, max_steps: int = STEP_CAP
) -> int:
    """Steps taken by one seeded walk from ``start`` until it first sits at ``stop``."""
    n = P.n
    if not (0 <= start < n and 0 <= stop < n):
        raise ValidationError("start and stop must be vertices")
    return _walk(_cumulative_rows(P), start, stop, _substream(seed, 0), max_steps)


def empirical_hitting(
    P: TransitionMatrix, i: int, j: int, trials: int, seed: int, max_steps: int = STEP_CAP
) -> SimStats:
    """Sample mean of the first-arrival time from i to j over seeded trials."""
    if trials < 1:
        raise ValidationError("need at least one trial")
    cum = _cumulative_rows(P)
    streams = _TrialStreams(seed)
    counts = np.fromiter(
        (_walk(cum, i, j, streams.trial(t), max_steps) for t in range(trials)),
        dtype=np.int64,
        count=trials,
    )
    return _stats(counts, seed)


def empirical_random_target(
    P: TransitionMatrix,
    pi: Distribution,
    i: int,
    trials: int,
    seed: int,
    max_steps: int = STEP_CAP,
) -> SimStats:
    """Mean length of the naive rule: draw a target from pi, walk until reaching it.

    The mean is the stationary-pair hitting time regardless of the start
    vertex i, which is what the callers assert statistically.
    """
    if trials < 1:
        raise ValidationError("need at least one trial")
    cum = _cumulative_rows(P)
    cum_pi = np.cumsum(pi.probs)
    cum_pi[-1] = 1.0
    cum_pi_list = cum_pi.tolist()
    streams = _TrialStreams(seed)

    def one(trial: int) -> int:
        rng = streams.trial(trial)
        target = bisect_right(cum_pi_list, float(rng.random()))
        return _walk(cum, i, target, rng, max_steps)

    counts = np.fromiter((one(t) for t in range(trials)), dtype=np.int64, count=trials)
    return _stats(counts, seed)
