# One-sided approximations at any target error.
#
# Wrapping the step polynomial around a shifted copy of the halfspace's
# linear form gives a positive one-sided eps-approximation for any eps.  The
# degree budget k starts at the analytic value and doubles until the
# exhaustive certificate over all 2^n points comes back clean.  The negative
# side is the reflection -p(-x) of the construction for a reflected
# halfspace.

from onesided.constructions import halfspace_onesided
from onesided.cube import Majority, majority_as_halfspace
from onesided.poly import eval_exact

maj5 = majority_as_halfspace(Majority(5, (1, 2, 3, 4, 5)))

print(f"{'eps':>6} {'sign':>9} {'chosen k':>9} {'degree':>7} {'certified':>9} {'worst violations':>24}")
for eps in (0.25, 0.1, 0.01):
    for sign in ("positive", "negative"):
        res = halfspace_onesided(maj5, sign, eps)
        cert = res.certificate
        print(f"{eps:>6} {sign:>9} {res.step_degree:>9} {res.claim.degree_bound:>7} "
              f"{str(res.certified):>9} ({cert.worst_pos_violation:>10.3g}, {cert.worst_neg_violation:>10.3g})")

# A dictator (single relevant variable) shows the two-point behavior: the
# value at the true point clears 1 - eps with room, the false point lands
# exactly on -1.
res = halfspace_onesided(majority_as_halfspace(Majority(1, (1,))), "positive", 0.1)
print("dictator: p(+1) =", float(eval_exact(res.poly, (1,))), " p(-1) =", float(eval_exact(res.poly, (-1,))))
