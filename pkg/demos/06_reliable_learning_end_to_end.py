# End-to-end reliable learning on a planted majority with one-sided noise.
#
# The distribution: uniform points, labels from MAJ_9, then 10% of the
# false-labeled points flipped to +1.  The planted concept therefore makes
# no false positives, and the best achievable false-negative rate among
# zero-false-positive majorities (opt+) is what the learner must approach.
#
# The learner solves a hinge-loss LP whose hard constraints pin every
# false-labeled training point below -1 + eps, then calibrates a threshold
# on fresh data so the empirical false-positive rate stays below eps.

from onesided.cube import Majority, empirical_metrics
from onesided.harness import NoiseModel, brute_opt, generate, majority_bank
from onesided.learn import learn_fully_reliable, learn_reliable
from onesided.poly import exact_multilinear

target = Majority(9, tuple(range(1, 10)))
W = float(exact_multilinear(target, 9).weight)  # exact weight of the multilinear form
print(f"planted MAJ_9, weight of exact representation: {W}")

noise = NoiseModel("one_sided_positive", 0.1)
seed = 0
train = generate(target, noise, 6000, seed, stream=1)
calib = generate(target, noise, 4000, seed, stream=2)  # enough for eps/4 calibration below
held = generate(target, noise, 6000, seed, stream=3)

hyp, report = learn_reliable(train, 9, W, 0.1, "positive", calib)
metrics = empirical_metrics(hyp, held)
opt_plus, argmin = brute_opt(held, majority_bank(9), "positive")
print(f"positive reliable: hinge objective {report.objective_value:.1f}, threshold {hyp.threshold:.3f}")
print(f"  held out: false_pos={metrics.false_pos:.4f} (target <= 0.1 + slack)")
print(f"            false_neg={metrics.false_neg:.4f} vs opt+ = {opt_plus:.4f}")

# The fully reliable combiner trains both one-sided learners at eps/4 and
# abstains where they disagree; under this noise the negative-side learner
# converges to the constant +1, so abstention concentrates on the planted
# concept's false region.
partial, _ = learn_fully_reliable(train, 9, W, 0.1, calib)
pm = empirical_metrics(partial, held)
opt_q, pair = brute_opt(held, majority_bank(9), "fully")
print(f"fully reliable:  err={pm.err:.4f} abstain={pm.unknown_rate:.4f} vs opt? = {opt_q:.4f}")
