"""
Weak values of the arm projectors
---------------------------------

An atom enters a two-arm interferometer in 0.8|R> - 0.6|L> and is found
in the dark port that retrodicts (|R> + |L>)/sqrt2. The weak values of the
arm projectors are 4 and -3, far outside the eigenvalue range [0, 1],
yet they still sum to one.
"""

import numpy as np

from wvsim import TwoStateVector, alpha_beta_tsv, arm_weak_values, make_state, postselect_probability
from wvsim.qcore import R, apply, basis_state, beam_splitter, retrodicted_state

tsv = alpha_beta_tsv(4, 3)
wv = arm_weak_values(tsv)
print("weak values (R, L):", wv.real)
print("sum:", wv.sum().real)
print("post-selection probability:", postselect_probability(tsv), "= 1/50")

# The same two states from beam splitters: a 64% splitter prepares the
# pre-selection, the dark port of a 50/50 splitter retrodicts the post-selection.
bs1 = beam_splitter(0.64)
print("\nBS(0.64)|R> =", np.round(apply(bs1, basis_state(2, R)).real, 12))
print("dark port retrodicts", np.round(retrodicted_state(beam_splitter(0.5), 1).amps.real, 6))

# Any two non-orthogonal selections give weak values that sum to one.
rng = np.random.default_rng(0)
for n in (3, 5, 8):
    pre = make_state(rng.normal(size=n) + 1j * rng.normal(size=n))
    post = make_state(rng.normal(size=n) + 1j * rng.normal(size=n))
    w = arm_weak_values(TwoStateVector(pre, post))
    print(f"n = {n}: max |w| = {np.abs(w).max():7.3f}, sum = {w.sum():.12f}")
