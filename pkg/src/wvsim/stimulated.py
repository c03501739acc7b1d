"""Stimulated emission by a pre- and post-selected atom inside an interferometer.

Every arm carries its own laser beam, described by a unit-width quadrature
pointer. An atom on arm ``i`` adds one photon to beam ``i`` only, so after
post-selection the beams are left in

    sum_i <post|Pi_i|pre> |P_i>,   |P_i> = prod_b g(q_b; c_b^(i))

with ``c_b^(i)`` the shifted center on ``b == i`` and ``q0_b`` elsewhere.
Reduced moments of one beam follow from the pairwise Gaussian closed forms
in :mod:`wvsim.pointer`; nothing here is expanded to first order except
:func:`single_beam_conditional`, the effective single-beam description kept for
comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RangeError, ZeroNorm
from .pointer import (
    ZERO_NORM,
    GaussianMixture,
    gaussian_raw_moments,
    pair_centers,
    pair_overlaps,
    photon_excess,
    shifted_center,
)
from .tsvf import TwoStateVector, arm_amplitudes, arm_weak_values, postselect_probability


@dataclass(frozen=True, eq=False)
class StimulatedConfig:
    """Two-state vector plus one beam amplitude ``q0`` per arm.

    ``sign=-1`` models a ground-state atom absorbing from the beams
    instead of emitting into them.
    """

    tsv: TwoStateVector
    q0: float | tuple = 40.0
    sign: int = 1

    def __post_init__(self):
        q = np.broadcast_to(np.asarray(self.q0, dtype=float), (self.tsv.dim,)).copy()
        if not np.all(q > 0) or not np.all(np.isfinite(q)):
            raise RangeError(f"every q0 must be positive and finite, got {q}")
        if self.sign not in (1, -1):
            raise RangeError("sign must be +1 (emission) or -1 (absorption)")
        q.setflags(write=False)
        object.__setattr__(self, "_q0s", q)

    @property
    def q0s(self) -> np.ndarray:
        return self._q0s

    @property
    def n_arms(self) -> int:
        return self.tsv.dim


@dataclass(frozen=True)
class JointBranch:
    arm: int
    amplitude: complex
    pointer_centers: tuple


@dataclass(frozen=True)
class ConditionalReport:
    arm: int
    excess_exact: float
    excess_weak: float
    excess_single_beam: float
    success_probability_exact: float
    success_probability_naive: float

    @property
    def error(self) -> float:
        """|exact - weak-value| photon excess."""
        return abs(self.excess_exact - self.excess_weak)


def build_branches(cfg: StimulatedConfig) -> list[JointBranch]:
    amps = arm_amplitudes(cfg.tsv)
    out = []
    for i in range(cfg.n_arms):
        centers = cfg.q0s.copy()
        centers[i] = shifted_center(centers[i], cfg.sign)
        out.append(JointBranch(i, complex(amps[i]), tuple(float(c) for c in centers)))
    return out


def branch_arrays(cfg: StimulatedConfig):
    """(amplitudes (T,), centers (T, N)) of the post-selected joint pointer state."""
    branches = build_branches(cfg)
    amps = np.array([b.amplitude for b in branches])
    centers = np.array([b.pointer_centers for b in branches])
    return amps, centers


def _pair_factors(centers):
    """Per-beam pairwise overlaps S[b, j, k] and complex product centers Z[b, j, k]."""
    n = centers.shape[1]
    zeros = np.zeros((centers.shape[0], centers.shape[0]))
    s = np.empty((n,) + zeros.shape, dtype=complex)
    z = np.empty_like(s)
    for b in range(n):
        mu_j, mu_k = np.meshgrid(centers[:, b], centers[:, b], indexing="ij")
        s[b] = pair_overlaps(mu_j, zeros, mu_k, zeros, 1.0)
        z[b] = pair_centers(mu_j, zeros, mu_k, zeros, 1.0)
    return s, z


def success_probability_exact(cfg: StimulatedConfig) -> float:
    """Squared norm of the post-selected joint state, beam back-action included."""
    amps, centers = branch_arrays(cfg)
    s, _ = _pair_factors(centers)
    w = np.conj(amps)[:, None] * amps[None, :] * np.prod(s, axis=0)
    return float(w.sum().real)


def marginal_raw_moments(cfg: StimulatedConfig, arm: int, order: int = 2) -> np.ndarray:
    """E[q_arm^n], n = 0..order, in the post-selected sub-ensemble.

    E[f(q_a)] = sum_jk conj(A_j) A_k (prod_{b != a} S_b^jk) <f>_a^jk / norm.
    """
    if not 0 <= arm < cfg.n_arms:
        raise RangeError(f"arm {arm} outside 0..{cfg.n_arms - 1}")
    amps, centers = branch_arrays(cfg)
    s, z = _pair_factors(centers)
    others = np.prod(np.delete(s, arm, axis=0), axis=0)
    w = np.conj(amps)[:, None] * amps[None, :] * others * s[arm]
    mom = gaussian_raw_moments(z[arm], 1.0, order)
    sums = np.einsum("jk,njk->n", w, mom).real
    if sums[0] <= ZERO_NORM:
        raise ZeroNorm("post-selected joint state has vanishing norm")
    return sums / sums[0]


def exact_marginal_moments(cfg: StimulatedConfig, arm: int) -> tuple[float, float, float]:
    """(<q>, <q^2>, photon excess) of one beam after post-selection, no approximation."""
    m = marginal_raw_moments(cfg, arm, 2)
    q0 = cfg.q0s[arm]
    return float(m[1]), float(m[2]), float(m[2] - 1.0 - q0 * q0)


def excess_variance_exact(cfg: StimulatedConfig, arm: int) -> float:
    """Per-trial variance of the estimator q_arm^2 - 1 - q0^2 in the sub-ensemble."""
    m = marginal_raw_moments(cfg, arm, 4)
    return float(m[4] - m[2] ** 2)


def single_beam_conditional(cfg: StimulatedConfig, arm: int) -> GaussianMixture:
    """Effective single-beam state w*g(shifted) + (1 - w)*g(q0), w the arm's weak value.

    Left unnormalized. It ignores the other beams' record of the atom,
    which :func:`exact_marginal_moments` keeps.
    """
    w = arm_weak_values(cfg.tsv)[arm]
    q0 = cfg.q0s[arm]
    return GaussianMixture([w, 1.0 - w], [shifted_center(q0, cfg.sign), q0], 1.0)


def which_path_overlap(cfg: StimulatedConfig) -> float:
    """Smallest |<P_i|P_j>| between branches with nonzero amplitude.

    Close to 1 means the beams carry almost no which-path record.
    """
    amps, centers = branch_arrays(cfg)
    s, _ = _pair_factors(centers)
    prod = np.abs(np.prod(s, axis=0))
    live = np.flatnonzero(np.abs(amps) > 0)
    return float(prod[np.ix_(live, live)].min())


def report(cfg: StimulatedConfig) -> list[ConditionalReport]:
    wv = arm_weak_values(cfg.tsv)
    p_exact = success_probability_exact(cfg)
    p_naive = postselect_probability(cfg.tsv)
    rows = []
    for arm in range(cfg.n_arms):
        _, _, exact = exact_marginal_moments(cfg, arm)
        single = photon_excess(single_beam_conditional(cfg, arm), cfg.q0s[arm])
        rows.append(ConditionalReport(
            arm=arm,
            excess_exact=exact,
            excess_weak=float(cfg.sign * wv[arm].real),
            excess_single_beam=single,
            success_probability_exact=p_exact,
            success_probability_naive=p_naive,
        ))
    return rows
