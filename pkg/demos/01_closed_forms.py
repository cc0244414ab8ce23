"""
Closed forms for at most 1+1 contaminated windows
=================================================

A trial has three outcomes: success (probability p), a type-I failure
(+1, probability q1), a type-II failure (-1, probability q2).  A window
is "at most 1+1 contaminated" when it holds at most one failure of each
type.  This script walks through the exact formulas and checks them
against brute-force enumeration.
"""
from fractions import Fraction

from contamruns import (
    TrialDistribution,
    alpha_correction,
    cfk_bounds,
    conditional_survival,
    derive_constants,
    dp_longest_cdf,
    enumerate_conditional,
    window_probability,
    window_probability_by_enumeration,
)

# exact fractions keep every closed form exact end to end
thirds = TrialDistribution(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))

# the five constants everything else is written in
c = derive_constants(thirds)
print(f"C = ln(1/p) = {c.C:.6f}")
print(f"C0 = {c.C0}, C1 = {c.C1}, C2 = {c.C2}, K = {c.K:.6f}")

# probability that an m-window qualifies, exactly and by counting all
# 3^m sequences
for m in (2, 3, 6):
    closed = window_probability(thirds, m)
    counted = window_probability_by_enumeration(thirds, m)
    print(f"m={m}: P(A1) = {closed} (enumeration agrees: {closed == counted})")

# alpha is the conditional probability that a qualifying window does not
# recur among the next m-1 starts; it has an exact finite-m form and
# tends to q1 + q2
for m in (5, 10, 50, 1000):
    print(f"m={m:5d}: alpha = {float(alpha_correction(thirds, m).alpha):.6f}"
          f"  (limit C0 = {float(c.C0):.6f})")

# the closed-form conditional survival converges to alpha; enumeration
# over 3^(2m-1) sequences confirms the closed form exactly
for m in (4, 6):
    exact = conditional_survival(thirds, m)
    print(f"m={m}: conditional survival = {float(exact):.6f}, "
          f"enumeration agrees: {exact == enumerate_conditional(thirds, m)}")

# the sandwich: exp(-(alpha +- 10 eps) N P(A1) -+ 2m P(A1)) brackets the
# probability that no window among N qualifies; eps is measured as the
# gap between the largest enumerable conditional survival and alpha
m, N = 10, 10_000
alpha = float(alpha_correction(thirds, m).alpha)
eps = abs(float(enumerate_conditional(thirds, 7)) - alpha)
lo, hi = cfk_bounds(alpha, eps, N - m + 1, m, float(window_probability(thirds, m)))
truth = dp_longest_cdf(thirds, N, m, mode="float")
print(f"m={m}, N={N}: {lo:.3e} < P(no qualifying window) = {truth:.3e} < {hi:.3e}")
