"""Closed-form probabilities and the limit/accompanying distributions.

Everything here is a pure function of a TrialDistribution and scalar
parameters.  Conventions:

* `log` without qualification means logarithm to base 1/p; the single
  conversion point is :func:`log_recip_p` (avoids base drift).
* Exact Fraction inputs with integer window lengths propagate exactly
  through the polynomial formulas (window probability, the joint
  survival sums, alpha).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .model import (
    DerivedConstants,
    TrialDistribution,
    ValidationError,
    check_window_length,
    derive_constants,
)


def log_recip_p(x: float, dist: TrialDistribution) -> float:
    """log base 1/p of x; the natural-log constant is C = ln(1/p)."""
    C = math.log(1.0 / float(dist.p))
    return math.log(x) / C


def window_probability(dist: TrialDistribution, m):
    """P(A1): an m-window is at most 1+1 contaminated.

    p^m + m(1-p)p^(m-1) + m(m-1)p^(m-2) q1 q2.  Integer m keeps exact
    inputs exact; real-valued m drops to floats (needed when evaluating
    at the non-integer centering sequence).
    """
    if isinstance(m, int):
        check_window_length(m, 1)
        p, q1, q2 = dist.p, dist.q1, dist.q2
    else:
        if m < 1:
            raise ValidationError(f"window length must be >= 1, got {m}")
        p, q1, q2 = dist.as_floats()
    return p ** m + m * (1 - p) * p ** (m - 1) + m * (m - 1) * p ** (m - 2) * q1 * q2


@dataclass(frozen=True)
class AlphaBreakdown:
    """The alpha quotient with its numerator and denominator exposed."""

    numerator: float
    denominator: float
    alpha: float


def alpha_correction(dist: TrialDistribution, m: int) -> AlphaBreakdown:
    """Finite-m conditional no-recurrence rate; tends to C0 = q1+q2."""
    check_window_length(m, 2)
    p, q1, q2 = dist.p, dist.q1, dist.q2
    c = derive_constants(dist)
    num = c.C0 + c.C1 / m + c.C2 / (m * (m - 1))
    den = 1 + p * (1 - p) / ((m - 1) * q1 * q2) + p * p / (m * (m - 1) * q1 * q2)
    return AlphaBreakdown(numerator=num, denominator=den, alpha=num / den)


def joint_survival_casewise(dist: TrialDistribution, m: int):
    """P(A1 Abar_2 ... Abar_m) by direct summation of the case formulas.

    Sums every per-index case over its range (the single-contamination
    terms for 1 < i < m and i = m, the double-contamination terms for
    the (1,m), (1,j), (i,m) and interior (i,j) cases), then adds the
    copies with the two failure types interchanged.  The impossible
    cases (pure first window, contamination at position 1 of a
    one-type window) contribute zero.  O(m^2) terms; deliberately not
    simplified so it can cross-check the aggregated closed form.
    """
    check_window_length(m, 2)
    p = dist.p
    total = 0
    for a, b in ((dist.q1, dist.q2), (dist.q2, dist.q1)):
        # one contamination of type a at position i, forced repeat at m+1
        for i in range(2, m):
            total += a * a * p ** (m - 1) * (1 - p ** (i - 1) - (i - 1) * b * p ** (i - 2))
        total += a * a * p ** (m - 1)  # i = m
        # two contaminations: type a at i, type b at j, i < j
        total += a * b * p ** (m - 2) * b  # (i, j) = (1, m)
        for j in range(2, m):  # i = 1, 1 < j < m
            total += a * b * p ** (m - 2) * b * (1 - p ** (j - 1) - p ** (j - 2) * (j - 1) * a)
        for i in range(2, m):  # 1 < i, j = m
            total += a * b * p ** (m - 2) * (a * (1 - p ** (i - 1)) + b)
        for i in range(2, m - 1):  # interior pairs, split on the symbol at m+1
            for j in range(i + 1, m):
                total += a * b * p ** (m - 2) * a * (
                    1 - p ** (i - 1) - (i - 1) * p ** (i - 2) * b * p ** (j - i)
                )
                total += a * b * p ** (m - 2) * b * (
                    1 - p ** (j - 1) - (j - 1) * a * p ** (j - 2)
                )
    return total


def joint_survival_aggregated(dist: TrialDistribution, m: int):
    """Same quantity as :func:`joint_survival_casewise`, via the
    simplified aggregate expressions (a check on the long algebra).

    Requires m >= 4 so every aggregated index range is nonempty.
    """
    check_window_length(m, 4)
    p, q1, q2 = dist.p, dist.q1, dist.q2
    s2 = q1 * q1 + q2 * q2
    one_type = p ** (m - 1) * (
        s2 * ((m - 1) + p / (p - 1))
        + q1 * q2 / (p - 1)
        - s2 * p ** (m - 1) / (p - 1)
        + q1 * q2 * ((m - 2) * p ** (m - 2) - p ** (m - 2) / (p - 1))
    )
    two_type = q1 * q2 * p ** (m - 2) * (
        m * (m - 1) * (q1 + q2)
        - (m - 1)
        + 2 * (2 * p + 1) * q1 * q2 / (p - 1) ** 3
        + q1 * q2 * p ** (m - 2) / (p - 1) ** 3
        * (-3 * (p - 1) ** 2 * m * m + m * (p - 1) * (13 * p - 7) + (-14 * p * p + 12 * p - 4))
        + p ** (m - 1) * (m - 1)
    )
    return one_type + two_type


def conditional_survival(dist: TrialDistribution, m: int):
    """P(Abar_2 ... Abar_m | A1) = joint survival / window probability."""
    check_window_length(m, 2)
    return joint_survival_casewise(dist, m) / window_probability(dist, m)


@dataclass(frozen=True)
class CfkReport:
    """Checkable state of the three sandwich-lemma hypotheses."""

    m: int
    eps: float
    p_a1: float
    siii_holds: bool          # P(A1) < eps/m
    sii_sum: float            # sum_{i=m+1..2m} P(A_i|A1) = m P(A1)
    sii_holds: bool           # m P(A1) < eps
    si_discrepancy: float     # |conditional_survival - alpha|


def cfk_condition_check(dist: TrialDistribution, m: int, eps: float) -> CfkReport:
    check_window_length(m, 2)
    p = float(dist.p)
    if not (0 < eps < min(p / 10, 1 / 42)):
        raise ValidationError(
            f"eps must lie in (0, min(p/10, 1/42)) = (0, {min(p / 10, 1 / 42)}), got {eps}"
        )
    p_a1 = float(window_probability(dist, m))
    sii_sum = m * p_a1
    alpha = float(alpha_correction(dist, m).alpha)
    discrepancy = abs(float(conditional_survival(dist, m)) - alpha)
    return CfkReport(
        m=m,
        eps=eps,
        p_a1=p_a1,
        siii_holds=p_a1 < eps / m,
        sii_sum=sii_sum,
        sii_holds=sii_sum < eps,
        si_discrepancy=discrepancy,
    )


def cfk_bounds(alpha: float, eps: float, N: int, m: int, pA1: float) -> tuple[float, float]:
    """Exponential sandwich for P(Abar_1 ... Abar_N) over N windows."""
    if not (0 < alpha <= 1):
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha}")
    if eps < 0:
        raise ValidationError(f"eps must be >= 0, got {eps}")
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    lower = math.exp(-(alpha + 10 * eps) * N * pA1 - 2 * m * pA1)
    upper = math.exp(-(alpha - 10 * eps) * N * pA1 + 2 * m * pA1)
    return lower, upper


def theorem1_limit_cdf(x: float) -> float:
    """Limiting CDF of tau_m * alpha * P(A1): standard exponential."""
    if x < 0:
        return 0.0
    return -math.expm1(-x)


def _check_logs(dist: TrialDistribution, N: int) -> tuple[float, float, DerivedConstants]:
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    lN = log_recip_p(float(N), dist)
    if lN <= 1.0:
        raise ValidationError(
            f"need log_(1/p) N > 1 (i.e. N > 1/p) so that log log N is defined; "
            f"got N={N}, log N = {lN}"
        )
    llN = log_recip_p(lN, dist)
    return lN, llN, derive_constants(dist)


@dataclass(frozen=True)
class ExpansionTerms:
    """A sum decomposed into labeled summands (total = exact sum)."""

    terms: dict[str, float] = field(repr=False)
    total: float

    @property
    def integer_part(self) -> int:
        return math.floor(self.total)

    @property
    def fractional_part(self) -> float:
        return self.total - math.floor(self.total)


def m_of_n(dist: TrialDistribution, N: int) -> ExpansionTerms:
    """Centering sequence m(N) for the longest run, as ten labeled terms.

    All logs to base 1/p.  The three trailing correction summands of the
    printed expansion share denominators with earlier ones and are folded
    into the (loglog N)^2/(log N)^3 and loglog N/(log N)^3 terms.
    """
    lN, llN, c = _check_logs(dist, N)
    C, C0, C1, K = c.C, float(c.C0), float(c.C1), c.K
    r = (C1 - C0) / (C * C0)
    terms = {
        "log N": lN,
        "2 loglog N": 2 * llN,
        "4 loglog N / (C log N)": 4 * llN / (C * lN),
        "(C1-C0)/(C C0) / log N": r / lN,
        "-4/C (loglog N)^2/(log N)^2": -4 / C * llN ** 2 / lN ** 2,
        "(8/C^2 - 2(C1-C0)/(C C0)) loglog N/(log N)^2": (8 / C ** 2 - 2 * r) * llN / lN ** 2,
        "(2(C1-C0)/(C^2 C0) + K) / (log N)^2": (2 * r / C + K) / lN ** 2,
        "16/(3C) (loglog N)^3/(log N)^3": 16 / (3 * C) * llN ** 3 / lN ** 3,
        "(4(C1-C0)/(C C0) - 24/C^2) (loglog N)^2/(log N)^3":
            (4 * r - 24 / C ** 2) * llN ** 2 / lN ** 3,
        "(16/C^3 - 4K - 12(C1-C0)/(C^2 C0)) loglog N/(log N)^3":
            (16 / C ** 3 - 4 * K - 12 * r / C) * llN / lN ** 3,
    }
    return ExpansionTerms(terms=terms, total=math.fsum(terms.values()))


def h_function(dist: TrialDistribution, N: int, x: float) -> float:
    """Correction polynomial H(x) entering the accompanying CDF exponent."""
    return h_function_terms(dist, N, x).total


def h_function_terms(dist: TrialDistribution, N: int, x: float) -> ExpansionTerms:
    lN, llN, c = _check_logs(dist, N)
    C, C0, C1 = c.C, float(c.C0), float(c.C1)
    r = (C1 - C0) / (C * C0)
    terms = {
        "-x": -x,
        "2x/(C log N)": 2 * x / (C * lN),
        "-4/C loglog N/(log N)^2 x": -4 / C * llN / lN ** 2 * x,
        "-(C1-C0)/(C C0) x/(log N)^2": -r * x / lN ** 2,
        "(4(C1-C0)/(C C0) - 8/C^2) loglog N/(log N)^3 x": (4 * r - 8 / C ** 2) * llN / lN ** 3 * x,
        "8/C (loglog N)^2/(log N)^3 x": 8 / C * llN ** 2 / lN ** 3 * x,
        "-x^2/(C (log N)^2)": -x * x / (C * lN ** 2),
        "4/C loglog N/(log N)^3 x^2": 4 / C * llN / lN ** 3 * x * x,
    }
    return ExpansionTerms(terms=terms, total=math.fsum(terms.values()))


@dataclass(frozen=True)
class AccompanyingValue:
    cdf: float
    exponent: float  # the value l with cdf = exp(-l)
    clamped: bool    # l overflowed/underflowed double range


def accompanying_cdf_details(dist: TrialDistribution, N: int, k: int) -> AccompanyingValue:
    """P(mu(N) - [m(N)] < k) via the accompanying distribution.

    Computed through the exponent form: the exponent of the outer exp is
    (1/p)^(log(C0 p^-2 q1 q2) + H(k - {m(N)})), logs to base 1/p.
    """
    _, _, c = _check_logs(dist, N)
    p, q1, q2 = dist.as_floats()
    frac = m_of_n(dist, N).fractional_part
    x = k - frac
    L = log_recip_p(float(c.C0) * q1 * q2 / (p * p), dist) + h_function(dist, N, x)
    log_l = c.C * L  # natural log of the exponent l = (1/p)^L
    clamped = False
    if log_l > 700.0:
        l = math.inf
        clamped = True
    elif log_l < -745.0:
        l = 0.0
        clamped = True
    else:
        l = math.exp(log_l)
    return AccompanyingValue(cdf=math.exp(-l) if l != math.inf else 0.0,
                             exponent=l, clamped=clamped)


def accompanying_cdf(dist: TrialDistribution, N: int, k: int) -> float:
    return accompanying_cdf_details(dist, N, k).cdf


def exponent_l(dist: TrialDistribution, N: int, m: float) -> float:
    """Exact pre-expansion exponent l = N p^(m-2) q1 q2 (m^2 C0 + m(C1-C0) + C2-C1).

    Accepts real-valued m (the centering sequence is non-integer).
    Equals alpha(m) * N * P(A1) at integer m.
    """
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    p, q1, q2 = dist.as_floats()
    c = derive_constants(dist)
    C0, C1, C2 = float(c.C0), float(c.C1), float(c.C2)
    return N * p ** (m - 2) * q1 * q2 * (m * m * C0 + m * (C1 - C0) + C2 - C1)
