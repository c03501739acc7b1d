"""Seeded Monte Carlo of the stimulated-emission experiment, one atom per trial.

A trial survives post-selection with the exact success probability; a
surviving trial reads every beam's quadrature from the exact conditional
joint density. The photon excess of a beam is estimated per trial as
``q^2 - 1 - q0^2``.

Seeding: trials are cut into fixed blocks of ``block_size``; block ``b``
draws from ``default_rng(SeedSequence(seed, spawn_key=(b,)))``, the b-th
child of ``SeedSequence(seed)``. Inside a block, trials consume the stream
in index order. Per-trial results are gathered into one indexed buffer
before any reduction, so statistics are bit-identical for any worker
count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EnvelopeFailure, NoAcceptedTrials, RangeError
from .pointer import sample_product
from .stimulated import (
    StimulatedConfig,
    branch_arrays,
    excess_variance_exact,
    exact_marginal_moments,
    success_probability_exact,
)
from .tsvf import arm_weak_values

BLOCK_SIZE = 4096
DEFAULT_SEED = 42
DEFAULT_TRIALS = 100_000


@dataclass(frozen=True)
class TrialOutcome:
    accepted: bool
    q_samples: tuple | None = None


@dataclass(frozen=True)
class EnsembleStats:
    n_trials: int
    n_accepted: int
    mean_excess: tuple
    stderr: tuple
    excess_std: tuple
    acceptance_rate: float
    seed: int

    @property
    def acceptance_stderr(self) -> float:
        p = self.acceptance_rate
        return float(np.sqrt(p * (1 - p) / self.n_trials))


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def default_workers() -> int:
    env = os.environ.get("WVSIM_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise RangeError("WVSIM_THREADS must be a positive integer")
        return n
    return os.cpu_count() or 1


class _Sampler:
    """Exact post-selected joint state of the beams, precomputed once per ensemble."""

    def __init__(self, cfg: StimulatedConfig):
        self.cfg = cfg
        self.p_accept = success_probability_exact(cfg)
        amps, centers = branch_arrays(cfg)
        live = np.abs(amps) > 0
        self.amps = amps[live]
        self.centers = centers[live]
        self.momenta = np.zeros_like(self.centers)
        self.widths = np.ones(cfg.n_arms)
        self.q0sq = cfg.q0s**2

    def draw(self, rng, size, trial=None):
        return sample_product(self.amps, self.centers, self.momenta, self.widths, rng, size, trial=trial)

    def block(self, seed, block, n):
        rng = block_rng(seed, block)
        accepted = rng.random(n) < self.p_accept
        k = int(accepted.sum())
        if k == 0:
            return 0, np.empty((0, self.cfg.n_arms))
        try:
            q = self.draw(rng, k, trial=block * BLOCK_SIZE)
        except EnvelopeFailure as exc:
            exc.args = (f"block {block}: {exc.args[0]}",)
            raise
        return k, q * q - 1.0 - self.q0sq


def run_trial(cfg: StimulatedConfig, rng, *, _sampler=None) -> TrialOutcome:
    """Simulate one atom: post-select, then read every beam's quadrature."""
    s = _sampler or _Sampler(cfg)
    if rng.random() >= s.p_accept:
        return TrialOutcome(False)
    q = s.draw(rng, 1)[0]
    return TrialOutcome(True, tuple(float(v) for v in q))


def run_ensemble(
    cfg: StimulatedConfig,
    n_trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int | None = None,
    block_size: int = BLOCK_SIZE,
    return_samples: bool = False,
):
    """Run ``n_trials`` independent trials and estimate every beam's photon excess.

    With ``return_samples=True`` also returns the (n_accepted, n_arms)
    array of per-trial excesses, in trial order.

    Raises
    ------
    NoAcceptedTrials
        If no trial survives post-selection.
    """
    n_trials = int(n_trials)
    if n_trials < 1:
        raise RangeError("n_trials must be at least 1")
    workers = default_workers() if workers is None else int(workers)
    sampler = _Sampler(cfg)
    sizes = [min(block_size, n_trials - start) for start in range(0, n_trials, block_size)]
    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: sampler.block(seed, *j), jobs))
    else:
        parts = [sampler.block(seed, b, n) for b, n in jobs]

    n_acc = sum(k for k, _ in parts)
    if n_acc == 0:
        raise NoAcceptedTrials(f"none of {n_trials} trials survived post-selection (p = {sampler.p_accept:.3e})")
    excess = np.concatenate([e for _, e in parts], axis=0)
    mean = excess.mean(axis=0)
    if n_acc >= 2:
        std = excess.std(axis=0, ddof=1)
        err = std / np.sqrt(n_acc)
    else:
        std = err = np.full(cfg.n_arms, np.nan)
    stats = EnsembleStats(
        n_trials=n_trials,
        n_accepted=n_acc,
        mean_excess=tuple(float(v) for v in mean),
        stderr=tuple(float(v) for v in err),
        excess_std=tuple(float(v) for v in std),
        acceptance_rate=n_acc / n_trials,
        seed=seed,
    )
    return (stats, excess) if return_samples else stats


@dataclass(frozen=True)
class VarianceRow:
    arm: int
    signal: float
    excess_exact: float
    std_exact: float
    std_mc: float
    stderr: float
    acceptance_rate: float
    trials_for_5_sigma: float


def estimator_variance_report(cfg: StimulatedConfig, n: int = DEFAULT_TRIALS, seed: int = DEFAULT_SEED, workers=None):
    """Per-trial noise of the excess estimator next to the signal it must resolve.

    ``trials_for_5_sigma`` counts all trials (before post-selection) needed
    for the mean excess to sit five standard errors away from zero.
    """
    stats = run_ensemble(cfg, n, seed, workers)
    wv = arm_weak_values(cfg.tsv).real * cfg.sign
    rows = []
    for arm in range(cfg.n_arms):
        sd = float(np.sqrt(excess_variance_exact(cfg, arm)))
        exact = exact_marginal_moments(cfg, arm)[2]
        need = (5 * sd / abs(exact)) ** 2 / stats.acceptance_rate if exact else np.inf
        rows.append(VarianceRow(
            arm=arm,
            signal=float(wv[arm]),
            excess_exact=exact,
            std_exact=sd,
            std_mc=stats.excess_std[arm],
            stderr=stats.stderr[arm],
            acceptance_rate=stats.acceptance_rate,
            trials_for_5_sigma=float(need),
        ))
    return rows
