"""Spontaneous emission inside the interferometer and the phantom emitter.

The photon emitted from arm ``i`` leaves with a Gaussian profile
``phi(x - x_i)`` of width ``waist_factor * lambda``. Conditioned on the
atom's post-selection the photon amplitude on the plate is

    g(x) = sum_i <Pi_i>_w phi(x - x_i),

which, for a wavelength much longer than the arm spacing, is close to a
single profile centered at the weak value of position sum_i <Pi_i>_w x_i.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DimMismatch, RangeError, WindowTooSmall
from .pointer import GaussianMixture, amplitude, fourier, moments
from .qcore import PureState, make_state, uniform_state
from .tsvf import TwoStateVector, arm_weak_values, postselect_probability

log = logging.getLogger(__name__)

LONG_WAVELENGTH_RATIO = 10.0
MIN_GRID = 4097


@dataclass(frozen=True, eq=False)
class EmissionConfig:
    tsv: TwoStateVector
    arm_positions: tuple
    lam: float = 100.0
    waist_factor: float = 1.0

    def __post_init__(self):
        x = np.asarray(self.arm_positions, dtype=float).ravel()
        if x.size != self.tsv.dim:
            raise DimMismatch(f"{x.size} arm positions for a {self.tsv.dim}-arm state")
        if np.unique(x).size != x.size:
            raise RangeError("arm positions must be distinct")
        if not (self.lam > 0 and self.waist_factor > 0):
            raise RangeError("lambda and waist_factor must be positive")
        object.__setattr__(self, "arm_positions", tuple(float(v) for v in x))

    @property
    def width(self) -> float:
        return self.lam * self.waist_factor

    @property
    def positions(self) -> np.ndarray:
        return np.array(self.arm_positions)

    @property
    def span(self) -> float:
        """Largest length scale the profile must dwarf: arm spread or phantom distance."""
        x = self.positions
        return float(max(x.max() - x.min(), abs(phantom_prediction(self))))

    @property
    def long_wavelength(self) -> bool:
        return self.width >= LONG_WAVELENGTH_RATIO * self.span


def two_arm_config(tsv: TwoStateVector, d: float = 1.0, lam: float = 100.0, waist_factor: float = 1.0):
    """Arms R at +d and L at -d (arm index 0 is R)."""
    return EmissionConfig(tsv, (d, -d), lam, waist_factor)


@dataclass(frozen=True)
class PatternReport:
    peak_x: float
    mean_x: float
    phantom_prediction: float
    mean_p: float
    predicted_mean_p: float


def emission_pattern(cfg: EmissionConfig) -> GaussianMixture:
    """g(x) with one profile per arm, weighted by the arm's weak value (unnormalized)."""
    return GaussianMixture(arm_weak_values(cfg.tsv), cfg.positions, cfg.width)


def position_weak_value(cfg: EmissionConfig) -> complex:
    return complex(np.sum(arm_weak_values(cfg.tsv) * cfg.positions))


def phantom_prediction(cfg: EmissionConfig) -> float:
    """Apparent emitter location, Re sum_i <Pi_i>_w x_i.

    Gives (alpha + beta) d for the two-arm (alpha, beta) family.
    """
    return position_weak_value(cfg).real


def default_window(pattern: GaussianMixture, phantom: float = 0.0) -> tuple[float, float]:
    pad = max(10.0 * pattern.width, abs(phantom) + 5.0 * pattern.width)
    return float(pattern.centers.min() - pad), float(pattern.centers.max() + pad)


def peak_position(pattern: GaussianMixture, window=None, kind: str = "intensity", n_grid: int = 8193) -> float:
    """Global maximizer of the pattern inside ``window``.

    ``kind="intensity"`` maximizes |g|^2 (what a plate records);
    ``kind="amplitude"`` maximizes Re g. A grid scan locates the maximum,
    bounded scalar minimization refines it to width * 1e-7. Ties go to
    the largest x.

    Raises
    ------
    WindowTooSmall
        If the grid maximum sits on the window boundary.
    """
    if kind == "intensity":
        f = lambda x: np.abs(amplitude(pattern, x)) ** 2
    elif kind == "amplitude":
        f = lambda x: amplitude(pattern, x).real
    else:
        raise ValueError(f"unknown peak kind {kind!r}")
    lo, hi = default_window(pattern) if window is None else window
    x = np.linspace(lo, hi, max(n_grid, MIN_GRID))
    y = f(x)
    top = np.flatnonzero(y == y.max())
    if top.size > 1:
        log.warning("pattern maximum is tied at %d grid points; taking the largest x", top.size)
    i = int(top[-1])
    if i == 0 or i == x.size - 1:
        raise WindowTooSmall(f"maximum at window edge x={x[i]:.6g}; widen the window [{lo:.6g}, {hi:.6g}]")
    res = minimize_scalar(
        lambda t: -float(f(t)),
        bounds=(x[i - 1], x[i + 1]),
        method="bounded",
        options={"xatol": pattern.width * 1e-7},
    )
    return float(res.x) if -res.fun >= y[i] else float(x[i])


def predicted_mean_momentum(cfg: EmissionConfig) -> float:
    """Momentum shift from the imaginary part of the position weak value.

    To first order g(x) ~ phi(x - X) with complex X = sum_i <Pi_i>_w x_i; an
    imaginary shift Im X tilts the profile's phase, moving the momentum
    density to Im X / (2 width^2).
    """
    return position_weak_value(cfg).imag / (2.0 * cfg.width**2)


def momentum_report(cfg: EmissionConfig) -> tuple[float, float]:
    """(exact mean momentum of the emitted photon, first-order prediction)."""
    _, mean_p, _ = moments(fourier(emission_pattern(cfg)))
    return mean_p, predicted_mean_momentum(cfg)


def pattern_report(cfg: EmissionConfig) -> PatternReport:
    g = emission_pattern(cfg)
    phantom = phantom_prediction(cfg)
    _, mean_x, _ = moments(g)
    mean_p, pred_p = momentum_report(cfg)
    return PatternReport(
        peak_x=peak_position(g, default_window(g, phantom)),
        mean_x=mean_x,
        phantom_prediction=phantom,
        mean_p=mean_p,
        predicted_mean_p=pred_p,
    )


# -- N-arm tradeoff ----------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    n_arms: int
    phantom: float
    probability: float


def n_arm_sweep(pre_amps, positions, posts=None) -> list[SweepRow]:
    """Phantom distance and post-selection probability for a list of N-arm setups.

    ``posts`` defaults to the uniform state over each setup's arms.
    """
    pre_amps = list(pre_amps)
    positions = list(positions)
    if len(pre_amps) != len(positions):
        raise DimMismatch("need one position vector per amplitude vector")
    posts = [None] * len(pre_amps) if posts is None else list(posts)
    rows = []
    for amps, xs, post in zip(pre_amps, positions, posts):
        pre = make_state(amps)
        post = uniform_state(pre.dim) if post is None else post
        if not isinstance(post, PureState):
            post = make_state(post)
        tsv = TwoStateVector(pre, post)
        if pre.dim == 1:
            rows.append(SweepRow(1, float(np.asarray(xs, dtype=float).ravel()[0]), postselect_probability(tsv)))
            continue
        cfg = EmissionConfig(tsv, tuple(xs))
        rows.append(SweepRow(pre.dim, phantom_prediction(cfg), postselect_probability(tsv)))
    return rows


def ramp_family(n: int, d: float = 1.0, slope: float = 3.5):
    """Linear-ramp N-arm setup: arms every 2d, centered on 0, amplitudes 1/n + slope * x/d.

    Under uniform post-selection the weak values are the amplitudes
    themselves (they sum to 1), so the phantom sits at slope * sum(x^2)/d,
    which grows like n^3 while the success probability
    1 / (1 + n slope^2 sum((x/d)^2)) falls. ``n = 2`` with the default slope
    gives amplitudes (4, -3) on arms (+d, -d): phantom 7d, probability 1/50.
    """
    if n < 2:
        raise RangeError("the ramp family needs at least two arms")
    x = (n - 1 - 2.0 * np.arange(n)) * d
    amps = 1.0 / n + slope * x / d
    return amps, x
