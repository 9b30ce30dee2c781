# Constant-error one-sided approximation of majorities.
#
# The quartic Chebyshev construction turns any integer-weight halfspace into
# a polynomial that is >= 3 wherever the halfspace is true and pinned inside
# [-1, -3/4] wherever it is false -- a positive one-sided 1/4-approximation
# with degree only 4*ceil(sqrt(weight)).  Here we build it for MAJ_n and
# certify the claim by checking every point of the cube.

from onesided.certify import verify_onesided
from onesided.constructions import halfspace_quarter
from onesided.cube import Majority, cube_matrix, eval_concept_batch, majority_as_halfspace
from onesided.poly import eval_on_cube

print(f"{'n':>3} {'degree':>7} {'points':>7} {'certified':>9} {'min on true':>12} {'range on false':>22}")
for n in (1, 3, 5, 7, 9, 11):
    target = Majority(n, tuple(range(1, n + 1)))
    poly = halfspace_quarter(majority_as_halfspace(target))
    report = verify_onesided(poly, target, 0.25, "positive")

    values = eval_on_cube(poly)
    truth = eval_concept_batch(target, cube_matrix(n))
    on_true = [v for v, f in zip(values, truth) if f == 1]
    on_false = [v for v, f in zip(values, truth) if f == -1]
    fmt = lambda v: f"{float(v):.4f}"  # noqa: E731
    print(f"{n:>3} {poly.outer.degree:>7} {report.points_checked:>7} {str(report.ok):>9} "
          f"{fmt(min(on_true)):>12} {'[' + fmt(min(on_false)) + ', ' + fmt(max(on_false)) + ']':>22}")

# The false-side range sits inside [-1, -0.75]: the construction never
# undershoots -1, which is exactly what the one-sided definition needs.
