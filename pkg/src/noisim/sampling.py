"""Monte Carlo sampling of Pauli channels with reproducible threading.

Every trial owns the generator np.random.default_rng([seed, trial]), so
results are a pure function of (seed, n_trials, steps_per_trial): the
thread count, scheduling order and rerun count cannot change a single
draw. Trial counts are combined in trial order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import PauliChannel
from .pauli import PauliString

__all__ = ["SampleReport", "run_trials", "sample_indices", "sample_strings"]


@dataclass(frozen=True)
class SampleReport:
    channel: PauliChannel
    seed: int
    n_trials: int
    steps_per_trial: int
    counts: tuple[int, ...]

    @property
    def n_samples(self) -> int:
        return self.n_trials * self.steps_per_trial

    @property
    def frequencies(self) -> tuple[float, ...]:
        total = self.n_samples
        return tuple(c / total for c in self.counts)

    @property
    def l1_gap(self) -> float:
        # total variation distance times two, against the exact weights
        return math.fsum(
            abs(f - w) for f, (w, _) in zip(self.frequencies, self.channel.terms)
        )


def _cumulative(channel: PauliChannel) -> np.ndarray:
    cum = np.cumsum([w for w, _ in channel.terms])
    cum[-1] = 1.0
    return cum


def sample_indices(
    channel: PauliChannel, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Indices into channel.terms, drawn by inverse transform sampling."""
    if n_samples < 0:
        raise ValueError(f"need n_samples >= 0, got {n_samples}")
    cum = _cumulative(channel)
    draws = rng.random(n_samples)
    idx = np.searchsorted(cum, draws, side="right")
    return np.minimum(idx, len(channel.terms) - 1)


def sample_strings(
    channel: PauliChannel, n_samples: int, rng: np.random.Generator
) -> list[PauliString]:
    support = channel.support
    return [support[i] for i in sample_indices(channel, n_samples, rng)]


def run_trials(
    channel: PauliChannel,
    *,
    seed: int,
    n_trials: int,
    steps_per_trial: int,
    threads: int = 1,
) -> SampleReport:
    """Sample steps_per_trial strings per trial and tally per-term counts."""
    if n_trials < 1 or steps_per_trial < 1:
        raise ValueError("need at least one trial with at least one step")
    if threads < 1:
        raise ValueError(f"need threads >= 1, got {threads}")
    n_terms = len(channel.terms)

    def one_trial(trial: int) -> np.ndarray:
        rng = np.random.default_rng([seed, trial])
        idx = sample_indices(channel, steps_per_trial, rng)
        return np.bincount(idx, minlength=n_terms)

    if threads == 1:
        parts = [one_trial(t) for t in range(n_trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one_trial, range(n_trials)))
    totals = np.sum(parts, axis=0)
    return SampleReport(
        channel=channel,
        seed=seed,
        n_trials=n_trials,
        steps_per_trial=steps_per_trial,
        counts=tuple(int(c) for c in totals),
    )
