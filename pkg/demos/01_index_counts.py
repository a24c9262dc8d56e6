"""Index bookkeeping: pair and triple index sets and the slot-count identity.

For each depth d the free coordinate slots on a genus-g surface add up to
(d^2 - 1)(2g - 2) once the constrained slots are removed.
"""

from switchyard import algebra as al

for d in (2, 3, 4, 5):
    t = al.index_tables(d)
    print(f"d={d}: |A|={len(t.A)} |B|={len(t.B)} |A'|={len(t.A_prime)} "
          f"|B''|={len(t.B_dprime)} |B*|={len(t.B_star)}")

print()
for g in (2, 3, 4):
    for d in (2, 3, 4, 5, 6, 7, 8):
        count = al.dimension_count(d, g)
        target = (d * d - 1) * (2 * g - 2)
        mark = "ok" if count == target else "MISMATCH"
        print(f"g={g} d={d}: slots={count} target={target} {mark}")
