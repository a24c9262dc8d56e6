"""Lifting obstruction: when does a projective representation lift?

Lift each generator of a genus-g surface group to a unimodular matrix; the
relator product is then a d-th root of unity times the identity, and its
phase is the obstruction.  Zero means a lift exists.
"""

import random

import numpy as np

from switchyard import obstruction as obs

# the clock-and-shift pair realizes a nonzero obstruction for every d
print("clock-and-shift representations:")
for d in range(2, 8):
    value = obs.ob(obs.clock_shift_rep(d))
    print(f"  d={d}: residue {value.residue}/{d}, residual {value.residual:.1e}")

# abelian images always lift
rng = random.Random(5)
print("\ndiagonal (abelian) representations:")
for d in (2, 3, 5):
    value = obs.ob(obs.diagonal_rep(d, 2, rng))
    print(f"  d={d}: residue {value.residue}")

# hyperbolic octagon generators satisfy the relator in SL_2 on the nose,
# so their symmetric powers lift at every depth the float precision allows
print("\nregular-octagon generators under symmetric powers:")
rep2 = obs.fuchsian_octagon(2)
closure = np.linalg.norm(rep2.product() - np.eye(2))
print(f"  relator closure in SL_2: {closure:.2e}")
for d in (2, 3, 4, 5):
    value = obs.ob(obs.fuchsian_octagon(d))
    print(f"  d={d}: residue {value.residue}, residual {value.residual:.1e}")

# the residue ignores the choice of lift and of relator starting point
print(f"\nlift and rotation independence (d=3): "
      f"{obs.lift_independence(obs.fuchsian_octagon(3), rng)}")
