# The step polynomial: the engine behind subconstant-error approximations.
#
# For a weight budget W and degree budget k, step_poly builds a univariate
# polynomial that equals 1 exactly at W, vanishes on prescribed integers near
# 0 and just below W, stays exponentially small on all of {0..W-1}, and is
# at least 1 everywhere at or beyond W.  All arithmetic is exact rational,
# so the identities below hold bit-for-bit, not just to rounding.

from fractions import Fraction

from onesided.constructions import default_step_params, step_poly

W = 20
print(f"window W = {W}")
print(f"{'k':>4} {'a':>3} {'b':>3} {'r':>3} {'deg':>4} {'max |S| on 0..W-1':>18} {'S(W)':>6} {'S(2W)':>12}")
for k in (8, 12, 16, 24, 32):
    params = default_step_params(W, k)
    S = step_poly(params)
    assert S(W) == Fraction(1)  # exact normalization
    decay = max(abs(S(t)) for t in range(W))
    print(f"{k:>4} {params.a:>3} {params.b:>3} {params.r:>3} {params.degree:>4} "
          f"{float(decay):>18.3e} {float(S(W)):>6.1f} {float(S(2 * W)):>12.4g}")

# Doubling k squares away the residual mass on {0..W-1}; the roots at
# {0..a} and {W-b..W-1} are exact zeros:
params = default_step_params(W, 16)
S = step_poly(params)
roots = list(range(params.a + 1)) + list(range(W - params.b, W))
print("prescribed roots:", roots, "->", [float(S(t)) for t in roots])
