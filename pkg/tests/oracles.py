"""Independent numerical oracles.

Everything here works from the raw wavefunction formulas by brute-force
quadrature or plain loops; nothing calls the closed forms under test.
"""

import numpy as np
from scipy import integrate

SQRT2PI = np.sqrt(2 * np.pi)


def gauss_amp(q, mu, width=1.0, k=0.0):
    return (2 * np.pi * width**2) ** -0.25 * np.exp(-((q - mu) ** 2) / (4 * width**2) + 1j * k * (q - mu))


def mixture_fn(coeffs, centers, width=1.0, momenta=None):
    momenta = np.zeros(len(centers)) if momenta is None else momenta

    def f(q):
        return sum(c * gauss_amp(q, mu, width, k) for c, mu, k in zip(coeffs, centers, momenta))

    return f


def quad_complex(f, lo, hi, epsrel=1e-10):
    """Adaptive quadrature of a complex integrand on [lo, hi]."""
    pts = None
    re, _ = integrate.quad(lambda x: f(x).real, lo, hi, epsrel=epsrel, epsabs=0, limit=500, points=pts)
    im, _ = integrate.quad(lambda x: f(x).imag, lo, hi, epsrel=epsrel, epsabs=0, limit=500, points=pts)
    return re + 1j * im


def window(centers, width, pad=12.0):
    return min(centers) - pad * width, max(centers) + pad * width


def quad_overlap(fa, fb, lo, hi):
    return quad_complex(lambda x: np.conj(fa(x)) * fb(x), lo, hi)


def quad_moments(f, lo, hi, order=2):
    """Squared norm and normalized moments E[q^n] of |f|^2 by adaptive quadrature."""
    out = []
    for n in range(order + 1):
        val, _ = integrate.quad(lambda x: x**n * abs(f(x)) ** 2, lo, hi, epsrel=1e-11, epsabs=0, limit=500)
        out.append(val)
    return out[0], [v / out[0] for v in out]


def stimulated_quad(pre, post, q0, sign=1, order=2, n=1601):
    """Post-selected two-beam state integrated on a dense (q_R, q_L) grid.

    Returns (norm^2, [E q_R^n], [E q_L^n]). Trapezoid on a grid that covers
    +-12 widths is spectrally accurate for these Gaussian integrands.
    """
    pre = np.asarray(pre, dtype=complex) / np.linalg.norm(pre)
    post = np.asarray(post, dtype=complex) / np.linalg.norm(post)
    shifted = q0 + sign / (2 * q0)
    a_r = np.conj(post[0]) * pre[0]
    a_l = np.conj(post[1]) * pre[1]
    q = np.linspace(q0 - 12, q0 + 12, n)
    qr, ql = np.meshgrid(q, q, indexing="ij")
    psi = a_r * gauss_amp(qr, shifted) * gauss_amp(ql, q0) + a_l * gauss_amp(qr, q0) * gauss_amp(ql, shifted)
    dens = np.abs(psi) ** 2
    h = q[1] - q[0]
    w1 = np.full(n, h)
    w1[0] = w1[-1] = h / 2
    w = np.outer(w1, w1)
    norm = float(np.sum(w * dens))
    mr = [float(np.sum(w * dens * qr**k)) / norm for k in range(order + 1)]
    ml = [float(np.sum(w * dens * ql**k)) / norm for k in range(order + 1)]
    return norm, mr, ml


def stimulated_dblquad(pre, post, q0, arm=0, sign=1):
    """Same quantity as :func:`stimulated_quad`, by nested adaptive quadrature."""
    pre = np.asarray(pre, dtype=complex) / np.linalg.norm(pre)
    post = np.asarray(post, dtype=complex) / np.linalg.norm(post)
    shifted = q0 + sign / (2 * q0)
    a = np.conj(post) * pre

    def dens(ql, qr):
        psi = a[0] * gauss_amp(qr, shifted) * gauss_amp(ql, q0) + a[1] * gauss_amp(qr, q0) * gauss_amp(ql, shifted)
        return abs(psi) ** 2

    lo, hi = q0 - 12, q0 + 12
    kw = dict(epsabs=0, epsrel=1e-11)
    norm, _ = integrate.dblquad(dens, lo, hi, lo, hi, **kw)
    if arm == 0:
        m2, _ = integrate.dblquad(lambda ql, qr: qr**2 * dens(ql, qr), lo, hi, lo, hi, **kw)
    else:
        m2, _ = integrate.dblquad(lambda ql, qr: ql**2 * dens(ql, qr), lo, hi, lo, hi, **kw)
    return norm, m2 / norm


def brute_weak_value(pre, post, matrix):
    """Weak value from explicit loops over matrix elements."""
    pre = np.asarray(pre, dtype=complex)
    post = np.asarray(post, dtype=complex)
    num = 0j
    den = 0j
    for i in range(len(pre)):
        den += np.conj(post[i]) * pre[i]
        for j in range(len(pre)):
            num += np.conj(post[i]) * matrix[i][j] * pre[j]
    return num / den


def grid_peak(fn, lo, hi, n=2_000_001):
    """Brute-force maximizer of a real function on a very fine grid."""
    x = np.linspace(lo, hi, n)
    y = fn(x)
    i = int(np.argmax(y))
    return float(x[i]), float(x[1] - x[0])
