"""
More arms, farther phantom, rarer success
-----------------------------------------

With N arms spaced 2d apart and amplitudes rising linearly across them,
the phantom moves out like N^3 while the chance of the right post-selection
falls. N = 2 is the familiar (4, -3) case with a phantom at 7d.
"""

from wvsim.spontaneous import n_arm_sweep, ramp_family

ns = range(2, 9)
setups = [ramp_family(n) for n in ns]
rows = n_arm_sweep([a for a, _ in setups], [x for _, x in setups])
print(f"{'N':>3} {'phantom / d':>12} {'probability':>12}")
for row in rows:
    print(f"{row.n_arms:3d} {row.phantom:12.1f} {row.probability:12.3e}")
