"""Flag invariants: triple ratios, double ratios, and the unipotent move.

A full flag is a nested chain of subspaces given by basis columns.  Triples
in general position carry one multiplicative invariant per triple index;
flags on a common rational normal curve have all invariants equal to one.
"""

import random

import numpy as np

from switchyard import algebra as al
from switchyard import flags as fl

rng = random.Random(3)
d = 4
tables = al.index_tables(d)

f1, f2, f3 = fl.random_flag_triple(d, rng)
print("random triple, all triple ratios:")
for j in tables.B:
    value = fl.triple_ratio((f1, f2, f3), j)
    print(f"  j={j}: {value:.6g}")

f4 = fl.random_flag(d, rng)
i = (1, d - 1)
print(f"\ndouble ratio at i={i}: {fl.double_ratio(f1, f2, f3, f4, i):.6g}")

# the unipotent fixing f2's full flag and moving f1's chain onto f3's
u = fl.unipotent_fixing(f2, f1, f3)
print(f"\nunipotent: det={np.linalg.det(u):.6f}, "
      f"nilpotency |(u-1)^{d}|={np.linalg.norm(np.linalg.matrix_power(u - np.eye(d), d)):.2e}")
for k in range(1, d):
    ok = np.linalg.matrix_rank(np.hstack([u @ f1.cols(k), f3.cols(k)]), tol=1e-8) == k
    print(f"  u F1^{k} == F3^{k}: {ok}")

# chained bases: a cube root of the ratio-log sum links the three bases
total = fl.log_ratio_sum((f1, f2, f3), d)
r = al.cylinder(total.value[0] / 3.0, total.value[1] / 3.0)
f, g, h = fl.compatible_triple((f1, f2, f3), r)
s2 = fl.exp_value(r) ** 2
gap = np.linalg.norm(s2 * h[:, 0] - f[:, d - 1]) / np.linalg.norm(f[:, d - 1])
print(f"\nrotation closure: |exp(2r) h_1 - f_{d}| / |f_{d}| = {gap:.2e}")
