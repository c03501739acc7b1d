import numpy as np
import pytest
from scipy import integrate, stats

import oracles as o
from wvsim import pointer as pt
from wvsim.errors import EnvelopeFailure, RangeError, WidthMismatch, ZeroNorm
from wvsim.pointer import Gaussian, GaussianMixture


def random_mixture(rng, width=None, max_terms=5, momenta=True):
    n = rng.integers(1, max_terms + 1)
    width = rng.uniform(0.3, 3.0) if width is None else width
    return GaussianMixture(
        rng.normal(size=n) + 1j * rng.normal(size=n),
        rng.uniform(-3, 3, n) * width,
        width,
        rng.uniform(-1, 1, n) / width if momenta else None,
    )


def fn(m):
    return o.mixture_fn(m.coeffs, m.centers, m.width, m.momenta)


def win(m):
    return o.window(m.centers, m.width)


# -- constructors --------------------------------------------------------------

def test_coherent_pointer():
    m = pt.coherent_pointer(100.0)
    assert len(m) == 1 and m.centers[0] == 100 and m.width == 1
    assert pt.norm2(m) == pytest.approx(1.0, abs=1e-15)
    assert pt.moments(m)[1] == pytest.approx(100.0, abs=1e-12)


def test_emitted_pointer_center():
    assert pt.emitted_pointer(10.0).centers[0] == pytest.approx(10.05, abs=1e-15)
    assert pt.emitted_pointer(10.0, sign=-1).centers[0] == pytest.approx(9.95, abs=1e-15)
    shifts = [pt.emitted_pointer(q).centers[0] - q for q in (1e2, 1e4, 1e6)]
    assert shifts == sorted(shifts, reverse=True) and shifts[-1] < 1e-6


@pytest.mark.parametrize("q0", [0.0, -1.0])
def test_pointer_requires_positive_q0(q0):
    with pytest.raises(RangeError):
        pt.coherent_pointer(q0)
    with pytest.raises(RangeError):
        pt.emitted_pointer(q0)


def test_mixture_validation():
    with pytest.raises(WidthMismatch):
        GaussianMixture.from_terms([(1, Gaussian(0, 1)), (1, Gaussian(1, 2))])
    with pytest.raises(WidthMismatch):
        pt.overlap(GaussianMixture([1], [0], 1.0), GaussianMixture([1], [0], 2.0))
    with pytest.raises(RangeError):
        GaussianMixture([], [], 1.0)
    with pytest.raises(RangeError):
        Gaussian(0.0, 0.0)
    m = GaussianMixture.from_terms([(2j, Gaussian(1.0, 0.5, 0.3))])
    assert m.terms == [(2j, Gaussian(1.0, 0.5, 0.3))]


# -- overlaps ------------------------------------------------------------------

def test_self_overlap(rng):
    assert pt.overlap(pt.coherent_pointer(7.0), pt.coherent_pointer(7.0)) == pytest.approx(1.0)
    m = random_mixture(rng)
    assert pt.overlap(m, m).imag == pytest.approx(0, abs=1e-12)


def test_coherent_emitted_overlap_vs_quadrature():
    a, b = pt.coherent_pointer(10.0), pt.emitted_pointer(10.0)
    got = pt.overlap(a, b)
    ref = o.quad_overlap(fn(a), fn(b), *o.window([10, 10.05], 1.0))
    assert 0 < got.real < 1 and got.imag == 0
    assert abs(got - ref) < 1e-10


def test_overlap_decays_with_separation():
    vals = []
    for delta in (0.1, 1.0, 5.0):
        a, b = GaussianMixture([1], [0.0]), GaussianMixture([1], [delta])
        ref = o.quad_overlap(fn(a), fn(b), *o.window([0, delta], 1.0))
        got = pt.overlap(a, b)
        assert abs(got - ref) < 1e-10
        vals.append(abs(got))
    assert vals[0] > vals[1] > vals[2]


# -- moments -------------------------------------------------------------------

def test_single_gaussian_moments():
    n2, mean, m2 = pt.moments(GaussianMixture([1], [3.5]))
    assert (n2, mean, m2) == pytest.approx((1, 3.5, 3.5**2 + 1), abs=1e-12)


def test_weak_value_mixture_mean():
    q0 = 100.0
    m = GaussianMixture([4, -3], [pt.shifted_center(q0), q0])
    _, mean, _ = pt.moments(m)
    # first-order prediction q0 + 2/q0; the neglected terms are O(1/q0^3)
    assert mean == pytest.approx(q0 + 2 / q0, abs=1e-5)


def test_two_term_moments_vs_quadrature():
    m = GaussianMixture([4, -3], [10.05, 10.0])
    n2, mom = o.quad_moments(fn(m), *win(m))
    got = pt.moments(m)
    assert got[0] == pytest.approx(n2, rel=1e-9)
    assert got[1] == pytest.approx(mom[1], rel=1e-9)
    assert got[2] == pytest.approx(mom[2], rel=1e-9)


def test_zero_norm():
    with pytest.raises(ZeroNorm):
        pt.moments(GaussianMixture([1, -1], [2.0, 2.0]))
    with pytest.raises(ZeroNorm):
        pt.density(GaussianMixture([1, -1], [2.0, 2.0]), 0.0)


def test_higher_moments_vs_quadrature(rng):
    for _ in range(5):
        m = random_mixture(rng, max_terms=3)
        n2, mom = o.quad_moments(fn(m), *win(m), order=4)
        _, got = pt.raw_moments(m, 4)
        scale = (np.abs(m.centers).max() + m.width)
        for k in range(5):
            assert got[k] == pytest.approx(mom[k], rel=1e-8, abs=1e-8 * scale**k)


# -- photon excess -------------------------------------------------------------

@pytest.mark.parametrize("q0", [3.0, 10.0, 40.0, 1e3])
def test_photon_excess_coherent_is_zero(q0):
    assert pt.photon_excess(pt.coherent_pointer(q0), q0) == 0.0


def test_photon_excess_emitted():
    assert pt.photon_excess(pt.emitted_pointer(10.0), 10.0) == pytest.approx(1 + 1 / 400, abs=1e-12)


def test_photon_excess_weak_mixture_shape():
    q0 = 10.0
    m = GaussianMixture([1], [q0 - 3 / (2 * q0)])
    # (q0 - 3/(2 q0))^2 - q0^2 = -3 + 9/(4 q0^2)
    n2, mom = o.quad_moments(fn(m), *win(m))
    assert pt.photon_excess(m, q0) == pytest.approx(-2.9775, abs=1e-12)
    assert mom[2] - 1 - q0**2 == pytest.approx(-2.9775, abs=1e-8)


# -- density -------------------------------------------------------------------

def test_density_peak_value():
    assert pt.density(GaussianMixture([1], [0.0]), 0.0) == pytest.approx(1 / np.sqrt(2 * np.pi))


def test_density_symmetric_mixture():
    m = GaussianMixture([1, 1], [-1.5, 1.5])
    x = np.linspace(0, 8, 50)
    np.testing.assert_allclose(pt.density(m, x), pt.density(m, -x), rtol=1e-13)


def test_density_integrates_to_one(rng):
    for _ in range(10):
        m = random_mixture(rng)
        x = np.linspace(*pt.support(m, 10.0), 20001)
        y = pt.density(m, x)
        assert np.all(y >= 0)
        assert integrate.trapezoid(y, x) == pytest.approx(1.0, abs=1e-6)


# -- Fourier transform ----------------------------------------------------------

def test_fourier_standard_pair():
    f = pt.fourier(GaussianMixture([1], [0.0], 2.0))
    assert f.centers[0] == 0 and f.width == pytest.approx(0.25) and f.coeffs[0] == 1


def test_fourier_pair_against_quadrature():
    m = GaussianMixture([1 - 0.5j, 2], [0.7, -1.2], 0.8, [0.4, -0.3])
    f = pt.fourier(m)
    for p in (-1.0, 0.0, 0.6, 1.7):
        ref = o.quad_complex(lambda x: fn(m)(x) * np.exp(-1j * p * x), *win(m)) / np.sqrt(2 * np.pi)
        assert pt.amplitude(f, p) == pytest.approx(ref, abs=1e-10)


def test_parseval(rng):
    for _ in range(20):
        m = random_mixture(rng, max_terms=3)
        f = pt.fourier(m)
        qn = integrate.quad(lambda x: abs(fn(m)(x)) ** 2, *win(m), epsrel=1e-12, limit=500)[0]
        pn = integrate.quad(lambda p: abs(fn(f)(p)) ** 2, *win(f), epsrel=1e-12, limit=500)[0]
        assert qn == pytest.approx(pn, rel=1e-10)
        assert pt.norm2(f) == pytest.approx(pt.norm2(m), rel=1e-12)


def test_real_symmetric_mixture_has_even_momentum_density():
    f = pt.fourier(GaussianMixture([-3, 4], [-1.0, 1.0], 2.0))
    p = np.linspace(0, 2, 30)
    np.testing.assert_allclose(pt.density(f, p), pt.density(f, -p), rtol=1e-12)


def test_double_fourier_reflects(rng):
    m = random_mixture(rng)
    ff = pt.fourier(pt.fourier(m))
    x = np.linspace(*pt.support(m, 6.0), 301)
    np.testing.assert_allclose(pt.density(ff, x), pt.density(m, -x), rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(pt.amplitude(ff, x), pt.amplitude(m, -x), atol=1e-12)


# -- sampling ------------------------------------------------------------------

def test_sample_single_gaussian_mean(rng):
    q0 = 40.0
    n = 10**6
    x = pt.sample(pt.coherent_pointer(q0), rng, size=n)
    assert abs(x.mean() - q0) < 5 / np.sqrt(n)


def _grid_cdf(m):
    lo, hi = win(m)
    x = np.linspace(lo, hi, 200001)
    y = np.abs(fn(m)(x)) ** 2
    c = np.concatenate([[0], np.cumsum((y[1:] + y[:-1]) / 2 * np.diff(x))])
    return lambda t: np.interp(t, x, c / c[-1])


@pytest.mark.parametrize("coeffs,centers", [([4, -3], [10.05, 10.0]), ([1, 1j], [-1.0, 1.5])])
def test_sample_ks_distance(rng, coeffs, centers):
    m = GaussianMixture(coeffs, centers)
    x = pt.sample(m, rng, size=10**5)
    d = stats.kstest(x, _grid_cdf(m)).statistic
    assert d < 0.005


def test_sample_near_total_cancellation_uses_grid(rng):
    m = GaussianMixture([1, -1], [0.0, 1e-3])
    assert pt.product_envelope(m.coeffs, m.centers[:, None], m.momenta[:, None], [1.0]).acceptance < 1e-4
    x = pt.sample(m, rng, size=20000)
    assert stats.kstest(x, _grid_cdf(m)).statistic < 0.02


def test_sample_deterministic():
    m = GaussianMixture([4, -3], [10.05, 10.0])
    a = pt.sample(m, np.random.default_rng(5), size=1000)
    b = pt.sample(m, np.random.default_rng(5), size=1000)
    np.testing.assert_array_equal(a, b)
    assert isinstance(pt.sample(m, np.random.default_rng(5)), float)


def test_sample_moments_converge(rng):
    m = GaussianMixture([2, -1 + 1j], [0.0, 0.8], 1.0, [0.0, 0.5])
    x = pt.sample(m, rng, size=200_000)
    _, mean, m2 = pt.moments(m)
    var = m2 - mean**2
    assert abs(x.mean() - mean) < 5 * np.sqrt(var / x.size)


def test_product_envelope_failure_reported():
    with pytest.raises(EnvelopeFailure) as exc:
        pt.sample_product([1, -1], [[0.0, 0.0], [1e-4, 0.0]], np.zeros((2, 2)), [1.0, 1.0],
                          np.random.default_rng(0), 10, trial=7)
    assert exc.value.trial == 7 and exc.value.acceptance < 1e-4


def test_closed_forms_vs_quadrature_random(rng):
    """200 random mixtures: overlaps and moments agree with adaptive quadrature."""
    for _ in range(200):
        a = random_mixture(rng)
        b = GaussianMixture(rng.normal(size=2) + 1j * rng.normal(size=2), rng.uniform(-3, 3, 2) * a.width, a.width)
        lo, hi = o.window(list(a.centers) + list(b.centers), a.width)
        ref = o.quad_overlap(fn(a), fn(b), lo, hi)
        got = pt.overlap(a, b)
        scale = np.sqrt(pt.norm2(a) * pt.norm2(b))
        assert abs(got - ref) <= 1e-8 * max(abs(ref), scale)
        n2, mom = o.quad_moments(fn(a), *win(a))
        gn2, gmean, gm2 = pt.moments(a)
        x = np.abs(a.centers).max() + a.width
        assert gn2 == pytest.approx(n2, rel=1e-8)
        assert gmean == pytest.approx(mom[1], rel=1e-8, abs=1e-8 * x)
        assert gm2 == pytest.approx(mom[2], rel=1e-8, abs=1e-8 * x * x)
