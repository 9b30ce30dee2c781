# Sample-size planning from weight and degree.
#
# Generalization of the LP learners is controlled by the weight cap W (via
# the Rademacher complexity of weight-bounded polynomials) and barely by the
# ambient dimension: the dependence on n is logarithmic, which is the
# attribute-efficiency property.  plan_samples reports the two competing
# terms and their max; the planned m always drives the combined deviation
# alpha below eps/2.

import math

from onesided.learn import plan_samples, rademacher_bound

print(f"{'n':>6} {'d':>3} {'W':>6} {'eps':>6} {'delta':>7} {'m planned':>14} {'alpha/eps':>10}")
for (n, d, W, eps, delta) in [
    (10, 2, 3.0, 0.2, 0.05),
    (100, 3, 10.0, 0.1, 0.01),
    (10_000, 3, 10.0, 0.1, 0.01),   # 100x more attributes, barely more samples
    (100, 6, 10.0, 0.1, 0.01),      # degree enters linearly
    (100, 3, 40.0, 0.1, 0.01),      # weight enters quadratically
]:
    plan = plan_samples(n, d, W, eps, delta)
    alpha = (4 / eps) * rademacher_bound(W, d, n, plan.m) \
        + 2 * (W + 1) * math.sqrt(math.log(1 / delta) / (2 * plan.m))
    print(f"{n:>6} {d:>3} {W:>6.1f} {eps:>6.2f} {delta:>7.3f} {plan.m:>14,} {alpha / eps:>10.3f}")

# The planner reports the formula's number verbatim; it is deliberately
# conservative.  Experiment manifests carry both this number and the
# practical sample sizes actually used.
