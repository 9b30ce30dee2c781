# Composing one-sided approximations, and the degree/weight tradeoff.
#
# Positive one-sided approximations add: p = -1 + sum(1 + p_i) approximates
# the OR of the targets without any degree increase, paying only additive
# weight.  A mirrored sum handles AND from negative one-sided parts.  For
# conjunctions there is also a two-sided construction that trades degree
# against weight by splitting the input into blocks, and it lifts to DNFs
# clause by clause.

from onesided.certify import verify_onesided
from onesided.constructions import (and_compose, and_twosided_tradeoff,
                                    dnf_positive_onesided, halfspace_onesided, or_compose)
from onesided.cube import Dnf, Halfspace
from onesided.poly import expand

# OR of two majorities on disjoint blocks of three variables
ha = Halfspace(6, 0, (1, 1, 1, 0, 0, 0))
hb = Halfspace(6, 0, (0, 0, 0, 1, 1, 1))
parts = [halfspace_onesided(h, "positive", 0.125).poly for h in (ha, hb)]
or_poly = or_compose(parts)
or_target = lambda bits: 1 if (sum(bits[:3]) > 0 or sum(bits[3:]) > 0) else -1  # noqa: E731
print("OR of two MAJ_3 blocks:", verify_onesided(or_poly, or_target, 0.25, "positive").to_json())

expanded = [expand(p) for p in parts] + [expand(or_poly)]
print("degrees (parts, whole):", [e.degree for e in expanded])
print("weights (parts, whole): %.1f %.1f %.1f" % tuple(float(e.weight) for e in expanded))

# the AND mirror composes negative one-sided parts
neg_parts = [halfspace_onesided(h, "negative", 0.125).poly for h in (ha, hb)]
and_target = lambda bits: 1 if (sum(bits[:3]) > 0 and sum(bits[3:]) > 0) else -1  # noqa: E731
print("AND mirror certified:", verify_onesided(and_compose(neg_parts), and_target, 0.25, "negative").ok)

# two-sided tradeoff for AND_8 with a degree budget of 8: four blocks of two
tr = and_twosided_tradeoff(8, 8, 0.25)
print(f"AND_8 tradeoff: step degree k={tr.step_degree}, final degree {tr.claim.degree_bound}, "
      f"weight {tr.claim.weight_bound:.1f}, certified={tr.certified}")

# a DNF gets one clause approximation per term, then the OR composition
F = Dnf(6, ((1, -2, 3), (4, 5, -6)))
dn = dnf_positive_onesided(F, 3, 0.25)
print(f"2-term width-3 DNF: degree {dn.claim.degree_bound}, weight {dn.claim.weight_bound:.2f}, "
      f"certified={dn.certified} over {dn.certificate.points_checked} points")
