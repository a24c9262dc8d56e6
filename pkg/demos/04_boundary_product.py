"""Boundary-product ledger: per-step log contributions and their total.

Walking the boundary of a neighborhood of the tree multiplies one
coefficient per step; the ledger records each step and the running total.
Three independent routes agree: the step-by-step total, a closed form over
the classification, and the negated torsion invariant.
"""

import random

from switchyard import algebra as al
from switchyard import cocyclic as cc
from switchyard import slither as sl
from switchyard import traintrack as tt

track = tt.generate_fixture(2, seed=1)
tree = cc.ensure_right_unorientable(tt.maximal_tree(track, seed=1))
rng = random.Random(11)

d = 3
point = cc.sample_y(tree, d, "cylinder", rng)
ledger = sl.build_ledger(tree, point)

print(f"d={d}, middle index m={ledger.m}, {len(ledger.entries)} steps")
for line in ledger.lines()[:12]:
    print(" ", line)
print("  ...")

total = ledger.total
closed = sl.closed_form_total(tree, point)
tor = cc.tor_prime(tree, point)
neg_total = sl.ob_from_product(total, d).value

print(f"\nledger total:    re={total.value[0]:+.3e} angle={total.value[1] % al.TWO_PI:.12g}")
print(f"closed form:     re={closed.value[0]:+.3e} angle={closed.value[1] % al.TWO_PI:.12g}")
print(f"-total vs tor':  match={al.elements_equal(neg_total, sl.to_cylinder(tor.value), 1e-9)}")

# the total does not depend on which cube root is used per plaque
roots_a = sl.plaque_roots(track, point)
roots_b = sl.plaque_roots(track, point, {pl.id: rng.randrange(3) for pl in track.plaques})
print(f"cube-root invariance: {sl.cube_root_invariance(tree, point, roots_a, roots_b)}")
