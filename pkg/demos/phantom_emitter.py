"""
The phantom emitter
-------------------

The atom emits a long-wavelength photon on its way through. Arm R sits at
+d and arm L at -d, but after post-selection the photon's profile on a
plate is centered near (alpha + beta) d, outside the interferometer.
"""

import numpy as np

from wvsim import alpha_beta_tsv
from wvsim import spontaneous as sp
from wvsim.pointer import density

tsv = alpha_beta_tsv(4, 3)
cfg = sp.two_arm_config(tsv, d=1.0, lam=100.0)
g = sp.emission_pattern(cfg)
print("phantom prediction:", sp.phantom_prediction(cfg))
print("intensity peak:    ", sp.peak_position(g, sp.default_window(g, 7.0)))

# Either arm alone puts the peak back on that arm.
for i, arm in enumerate("RL"):
    print(f"only arm {arm}: peak at {sp.peak_position(g.drop(1 - i)):+.4f}")

# The picture sharpens as the wavelength grows.
print(f"\n{'lambda':>7} {'peak':>9} {'error':>9}")
for lam in (10, 20, 50, 100, 200, 400):
    r = sp.pattern_report(sp.two_arm_config(tsv, 1.0, lam))
    print(f"{lam:7d} {r.peak_x:9.5f} {abs(r.peak_x - 7):9.2e}")

# The family alpha = beta + 1 pushes the phantom to (2 alpha - 1) d.
for alpha in (2, 4, 6, 10):
    c = sp.two_arm_config(alpha_beta_tsv(alpha, alpha - 1), 1.0, 400.0)
    gg = sp.emission_pattern(c)
    print(f"alpha = {alpha:2d}: phantom {sp.phantom_prediction(c):5.1f}, "
          f"peak {sp.peak_position(gg, sp.default_window(gg, 2 * alpha)):8.4f}")

x = np.linspace(-300, 300, 7)
print("\nplate density at", x, "\n", np.round(density(g, x), 6))
