"""
Imaginary weak values shift the momentum
----------------------------------------

With a phase between the arm amplitudes the position weak value becomes
complex. Its real part still moves the peak; its imaginary part leaves the
position alone and shifts the photon's momentum distribution instead.
"""

from wvsim import alpha_beta_tsv
from wvsim import spontaneous as sp

for alpha in (4, 4j, 4 * 1j**0.5):
    cfg = sp.two_arm_config(alpha_beta_tsv(alpha, 3), d=1.0, lam=100.0)
    X = sp.position_weak_value(cfg)
    exact, predicted = sp.momentum_report(cfg)
    print(f"alpha = {complex(alpha):.3f}: X = {X:.4f}, mean p exact {exact:+.4e}, first order {predicted:+.4e}")

# The shift grows linearly with the arm spacing.
for d in (0.5, 1.0, 2.0, 4.0):
    exact, _ = sp.momentum_report(sp.two_arm_config(alpha_beta_tsv(4j, 3), d, 100.0))
    print(f"d = {d}: mean p = {exact:+.4e}")
