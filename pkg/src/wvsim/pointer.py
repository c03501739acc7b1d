r"""Closed-form calculus for sums of equal-width Gaussian wavefunctions.

A mixture term with coefficient ``c``, center ``mu``, momentum ``k`` and
width ``sigma`` is

.. math::
    c\,(2\pi\sigma^2)^{-1/4}\exp\left[-\frac{(q-\mu)^2}{4\sigma^2} + ik(q-\mu)\right],

so ``sigma`` is the standard deviation of the probability density
``|psi|^2`` and a single term is normalized. A quadrature pointer (coherent
beam) is a term with ``sigma = 1``. Products of two terms are again
Gaussian, which gives every overlap and moment in closed form:

.. math::
    \langle a|b\rangle = \exp\left[-\frac{\Delta^2}{8\sigma^2}
        - \frac{\sigma^2\kappa^2}{2} + i\kappa\bar\mu - i(k_b\mu_b - k_a\mu_a)\right]

with ``Delta = mu_b - mu_a``, ``kappa = k_b - k_a``, ``mubar`` the midpoint.
Moments follow from a normal of variance ``sigma^2`` centered at the
complex point ``mubar + i sigma^2 kappa``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import EnvelopeFailure, RangeError, WidthMismatch, ZeroNorm

ZERO_NORM = 1e-300
_WIDTH_RTOL = 1e-12


@dataclass(frozen=True)
class Gaussian:
    center: float
    width: float = 1.0
    momentum: float = 0.0

    def __post_init__(self):
        if not self.width > 0:
            raise RangeError(f"width must be positive, got {self.width}")


def _ro(a, dtype):
    a = np.array(a, dtype=dtype).ravel()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianMixture:
    """Complex-weighted sum of Gaussians that share one width.

    Stored column-wise (``coeffs``, ``centers``, ``momenta``) for
    vectorized evaluation; :attr:`terms` gives the (coeff, Gaussian) view.
    """

    coeffs: np.ndarray
    centers: np.ndarray
    width: float = 1.0
    momenta: np.ndarray | None = None

    def __post_init__(self):
        c = _ro(self.coeffs, complex)
        mu = _ro(self.centers, float)
        k = _ro(np.zeros_like(mu) if self.momenta is None else self.momenta, float)
        if c.size == 0:
            raise RangeError("a mixture needs at least one term")
        if not (c.shape == mu.shape == k.shape):
            raise RangeError("coeffs, centers and momenta must have equal length")
        if not self.width > 0:
            raise RangeError(f"width must be positive, got {self.width}")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(mu)) and np.all(np.isfinite(k))):
            raise RangeError("mixture parameters must be finite")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "centers", mu)
        object.__setattr__(self, "momenta", k)
        object.__setattr__(self, "width", float(self.width))

    @classmethod
    def from_terms(cls, terms) -> "GaussianMixture":
        terms = list(terms)
        if not terms:
            raise RangeError("a mixture needs at least one term")
        width = terms[0][1].width
        for _, g in terms:
            if not np.isclose(g.width, width, rtol=_WIDTH_RTOL, atol=0):
                raise WidthMismatch(f"widths {width} and {g.width} differ within one mixture")
        return cls(
            [c for c, _ in terms],
            [g.center for _, g in terms],
            width,
            [g.momentum for _, g in terms],
        )

    @property
    def terms(self):
        return [
            (complex(c), Gaussian(float(mu), self.width, float(k)))
            for c, mu, k in zip(self.coeffs, self.centers, self.momenta)
        ]

    def __len__(self):
        return self.coeffs.size

    def __call__(self, q):
        return amplitude(self, q)

    def scaled(self, factor: complex) -> "GaussianMixture":
        return GaussianMixture(self.coeffs * factor, self.centers, self.width, self.momenta)

    def __add__(self, other):
        if not isinstance(other, GaussianMixture):
            return NotImplemented
        _check_widths(self, other)
        return GaussianMixture(
            np.concatenate([self.coeffs, other.coeffs]),
            np.concatenate([self.centers, other.centers]),
            self.width,
            np.concatenate([self.momenta, other.momenta]),
        )

    def drop(self, index: int) -> "GaussianMixture":
        """Copy with one term removed (e.g. a blocked arm)."""
        keep = np.ones(len(self), dtype=bool)
        keep[index] = False
        return GaussianMixture(self.coeffs[keep], self.centers[keep], self.width, self.momenta[keep])


def _check_widths(a: GaussianMixture, b: GaussianMixture):
    if not np.isclose(a.width, b.width, rtol=_WIDTH_RTOL, atol=0):
        raise WidthMismatch(f"mixture widths differ: {a.width} vs {b.width}")


# -- pointer constructors ----------------------------------------------------

def shifted_center(q0: float, sign: int = 1) -> float:
    """Pointer center after one photon is added (sign=+1) or removed (sign=-1).

    q0 -> q0 + 1/(2 q0), which changes q0^2 by 1 + 1/(4 q0^2).
    """
    return q0 + sign / (2.0 * q0)


def coherent_pointer(q0: float) -> GaussianMixture:
    """Unit-width coherent-beam quadrature wavefunction centered at ``q0``."""
    if not q0 > 0:
        raise RangeError(f"q0 must be positive, got {q0}")
    return GaussianMixture([1.0], [q0], 1.0)


def emitted_pointer(q0: float, sign: int = 1) -> GaussianMixture:
    """The beam after the atom added (or, with ``sign=-1``, absorbed) one photon."""
    if not q0 > 0:
        raise RangeError(f"q0 must be positive, got {q0}")
    return GaussianMixture([1.0], [shifted_center(q0, sign)], 1.0)


# -- pairwise closed forms ---------------------------------------------------

def pair_overlaps(mu_a, k_a, mu_b, k_b, width):
    """Elementwise <g_a|g_b> for unit-coefficient terms of common ``width``."""
    mu_a, k_a, mu_b, k_b = (np.asarray(x, dtype=float) for x in (mu_a, k_a, mu_b, k_b))
    d = mu_b - mu_a
    kap = k_b - k_a
    mbar = 0.5 * (mu_a + mu_b)
    s2 = width * width
    return np.exp(-d * d / (8 * s2) - 0.5 * s2 * kap * kap + 1j * (kap * mbar - (k_b * mu_b - k_a * mu_a)))


def pair_centers(mu_a, k_a, mu_b, k_b, width):
    """Complex center of the product conj(g_a) g_b seen as a normal of variance width^2."""
    return 0.5 * (np.asarray(mu_a) + np.asarray(mu_b)) + 1j * width * width * (np.asarray(k_b) - np.asarray(k_a))


def gaussian_raw_moments(z, var, order):
    """E[X^n], n = 0..order, for X ~ Normal(z, var) with z possibly complex.

    Returns an array whose leading axis indexes n.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty((order + 1,) + z.shape, dtype=complex)
    for n in range(order + 1):
        acc = np.zeros(z.shape, dtype=complex)
        dfact = 1.0
        for j in range(0, n // 2 + 1):
            if j:
                dfact *= 2 * j - 1
            acc = acc + comb(n, 2 * j) * dfact * var**j * z ** (n - 2 * j)
        out[n] = acc
    return out


def _pair_grid(m: GaussianMixture, other: GaussianMixture | None = None):
    b = m if other is None else other
    mu_a, mu_b = np.meshgrid(m.centers, b.centers, indexing="ij")
    k_a, k_b = np.meshgrid(m.momenta, b.momenta, indexing="ij")
    return mu_a, k_a, mu_b, k_b


def overlap(a: GaussianMixture, b: GaussianMixture) -> complex:
    """<a|b> = integral of conj(a(q)) b(q) dq, conjugate-linear in ``a``."""
    _check_widths(a, b)
    mu_a, k_a, mu_b, k_b = _pair_grid(a, b)
    s = pair_overlaps(mu_a, k_a, mu_b, k_b, a.width)
    return complex(np.conj(a.coeffs) @ s @ b.coeffs)


def norm2(m: GaussianMixture) -> float:
    return overlap(m, m).real


def raw_moments(m: GaussianMixture, order: int = 2) -> tuple[float, np.ndarray]:
    """Squared norm and normalized moments E[q^n], n = 0..order, of |m|^2."""
    mu_a, k_a, mu_b, k_b = _pair_grid(m)
    s = pair_overlaps(mu_a, k_a, mu_b, k_b, m.width)
    z = pair_centers(mu_a, k_a, mu_b, k_b, m.width)
    w = np.conj(m.coeffs)[:, None] * m.coeffs[None, :] * s
    mom = gaussian_raw_moments(z, m.width**2, order)
    sums = np.einsum("ij,nij->n", w, mom).real
    n2 = sums[0]
    if n2 <= ZERO_NORM:
        raise ZeroNorm(f"mixture squared norm {n2:.3e} is numerically zero")
    return float(n2), sums / n2


def moments(m: GaussianMixture) -> tuple[float, float, float]:
    """(norm^2, <q>, <q^2>) of the normalized density |m(q)|^2 / norm^2."""
    n2, mom = raw_moments(m, 2)
    return n2, float(mom[1]), float(mom[2])


def photon_excess(m: GaussianMixture, q0: float) -> float:
    """Mean photon number relative to an undisturbed beam centered at ``q0``.

    Photon number is read as q^2 less the vacuum variance (width^2, which
    is 1 for a quadrature pointer), so ``coherent_pointer(q0)`` gives 0.
    """
    _, _, mq2 = moments(m)
    return mq2 - m.width**2 - q0 * q0


def amplitude(m: GaussianMixture, q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    s2 = m.width**2
    pref = (2 * np.pi * s2) ** -0.25
    d = q[..., None] - m.centers
    terms = np.exp(-d * d / (4 * s2) + 1j * m.momenta * d)
    return pref * (terms @ m.coeffs)


def density(m: GaussianMixture, q) -> np.ndarray | float:
    """Normalized probability density |m(q)|^2 / norm^2."""
    n2 = norm2(m)
    if n2 <= ZERO_NORM:
        raise ZeroNorm(f"mixture squared norm {n2:.3e} is numerically zero")
    out = np.abs(amplitude(m, q)) ** 2 / n2
    return float(out) if np.ndim(out) == 0 else out


def fourier(m: GaussianMixture) -> GaussianMixture:
    """Momentum-space wavefunction, psi(p) = (2 pi)^(-1/2) integral psi(q) exp(-ipq) dq.

    A term (c, mu, k, sigma) maps to (c exp(-ik mu), k, -mu, 1/(2 sigma)):
    position centers become phase slopes and vice versa. Applying the
    transform twice gives psi(-q).
    """
    return GaussianMixture(
        m.coeffs * np.exp(-1j * m.momenta * m.centers),
        m.momenta,
        0.5 / m.width,
        -m.centers,
    )


def support(m: GaussianMixture, n_widths: float = 12.0) -> tuple[float, float]:
    """Interval holding all of |m|^2 that matters: extreme centers padded by ``n_widths``."""
    return float(m.centers.min() - n_widths * m.width), float(m.centers.max() + n_widths * m.width)


# -- sampling ----------------------------------------------------------------

MIN_ENVELOPE_ACCEPTANCE = 1e-4
MAX_PROPOSALS = 50_000_000
_MAX_BATCH = 1 << 18


def product_amplitude(q, coeffs, centers, momenta, widths):
    r"""Evaluate sum_t c_t prod_d g_{t,d}(q_d) at points ``q`` of shape (n, D).

    ``centers`` and ``momenta`` have shape (T, D); ``widths`` has shape (D,).
    """
    q = np.atleast_2d(q)
    s2 = widths**2
    pref = np.prod((2 * np.pi * s2) ** -0.25)
    d = q[:, None, :] - centers[None, :, :]
    expo = np.sum(-d * d / (4 * s2) + 1j * momenta[None] * d, axis=2)
    return pref * (np.exp(expo) @ coeffs)


def _envelope_amplitude(q, abs_coeffs, centers, widths):
    q = np.atleast_2d(q)
    s2 = widths**2
    pref = np.prod((2 * np.pi * s2) ** -0.25)
    d = q[:, None, :] - centers[None, :, :]
    return pref * (np.exp(np.sum(-d * d / (4 * s2), axis=2)) @ abs_coeffs)


@dataclass(frozen=True, eq=False)
class Envelope:
    """Positive Gaussian mixture (sum_t |c_t| prod_d |g_{t,d}|)^2 dominating |psi|^2.

    Expanding the square yields one normal component per term pair.
    ``acceptance`` is the expected rejection-sampling acceptance rate.
    """

    weights: np.ndarray
    means: np.ndarray
    widths: np.ndarray
    total: float
    acceptance: float


def product_envelope(coeffs, centers, momenta, widths) -> Envelope:
    coeffs = np.asarray(coeffs, dtype=complex)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    momenta = np.atleast_2d(np.asarray(momenta, dtype=float))
    widths = np.asarray(widths, dtype=float)
    a = np.abs(coeffs)
    d = centers[:, None, :] - centers[None, :, :]
    gauss = np.exp(-np.sum(d * d / (8 * widths**2), axis=2))
    w = (a[:, None] * a[None, :] * gauss).ravel()
    means = 0.5 * (centers[:, None, :] + centers[None, :, :]).reshape(-1, centers.shape[1])
    total = float(w.sum())
    # exact |psi|^2 mass, from the same pairwise closed forms
    ov = np.ones(gauss.shape, dtype=complex)
    for dim in range(centers.shape[1]):
        mu_a, mu_b = np.meshgrid(centers[:, dim], centers[:, dim], indexing="ij")
        k_a, k_b = np.meshgrid(momenta[:, dim], momenta[:, dim], indexing="ij")
        ov = ov * pair_overlaps(mu_a, k_a, mu_b, k_b, widths[dim])
    mass = float((np.conj(coeffs) @ ov @ coeffs).real)
    keep = w > 0
    return Envelope(w[keep] / total, means[keep], widths, total, mass / total if total > 0 else 0.0)


def sample_product(coeffs, centers, momenta, widths, rng, size: int, *, trial=None) -> np.ndarray:
    """Draw ``size`` points from |sum_t c_t prod_d g_{t,d}|^2 by envelope rejection.

    Proposals come from :func:`product_envelope`; a point is kept with
    probability |psi|^2 / envelope <= 1. Draw order is fixed, so the output
    depends only on the generator state.

    Raises
    ------
    EnvelopeFailure
        If the expected acceptance is below ``MIN_ENVELOPE_ACCEPTANCE`` or
        more than ``MAX_PROPOSALS`` proposals are spent.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    momenta = np.atleast_2d(np.asarray(momenta, dtype=float))
    widths = np.atleast_1d(np.asarray(widths, dtype=float))
    env = product_envelope(coeffs, centers, momenta, widths)
    if not env.acceptance > MIN_ENVELOPE_ACCEPTANCE:
        raise EnvelopeFailure(
            f"envelope acceptance {env.acceptance:.3e} below {MIN_ENVELOPE_ACCEPTANCE:g}: "
            "amplitudes cancel almost completely",
            acceptance=env.acceptance, attempts=0, trial=trial,
        )
    dim = centers.shape[1]
    out = np.empty((size, dim))
    filled = 0
    spent = 0
    while filled < size:
        need = size - filled
        batch = int(min(_MAX_BATCH, max(64, np.ceil(1.25 * need / env.acceptance))))
        comp = rng.choice(env.weights.size, size=batch, p=env.weights)
        q = env.means[comp] + rng.standard_normal((batch, dim)) * widths
        u = rng.random(batch)
        target = np.abs(product_amplitude(q, coeffs, centers, momenta, widths)) ** 2
        bound = _envelope_amplitude(q, np.abs(coeffs), centers, widths) ** 2
        ok = u * bound < target
        got = q[ok][:need]
        out[filled:filled + got.shape[0]] = got
        filled += got.shape[0]
        spent += batch
        if filled < size and spent >= MAX_PROPOSALS:
            raise EnvelopeFailure(
                f"rejection sampling stalled after {spent} proposals ({filled}/{size} accepted)",
                acceptance=filled / spent, attempts=spent, trial=trial,
            )
    return out


def _sample_grid(m: GaussianMixture, rng, size: int, n_grid: int = 1 << 16) -> np.ndarray:
    lo, hi = support(m)
    x = np.linspace(lo, hi, n_grid)
    pdf = np.abs(amplitude(m, x)) ** 2
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(x))])
    if cdf[-1] <= 0:
        raise ZeroNorm("mixture density vanishes on its support")
    return np.interp(rng.random(size) * cdf[-1], cdf, x)


def sample(m: GaussianMixture, rng, size: int | None = None):
    """Draw from ``density(m, .)``.

    Uses envelope rejection; if the amplitudes cancel so strongly that the
    expected acceptance falls below ``MIN_ENVELOPE_ACCEPTANCE``, falls back
    to inverse-CDF sampling on a fine grid.
    """
    n = 1 if size is None else int(size)
    try:
        out = sample_product(
            m.coeffs, m.centers[:, None], m.momenta[:, None], np.array([m.width]), rng, n
        )[:, 0]
    except EnvelopeFailure as exc:
        if exc.attempts != 0:
            raise
        out = _sample_grid(m, rng, n)
    return float(out[0]) if size is None else out
