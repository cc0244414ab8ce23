"""Core domain types: outcomes, trial distributions, derived constants.

Outcomes are encoded as small integers (0 = success, 1 = failure of
type I, 2 = failure of type II) so that sequences can be stored one
byte per trial in numpy uint8 arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from numbers import Rational

SIMPLEX_TOL = 1e-12


class Outcome(IntEnum):
    SUCCESS = 0
    FAIL_PLUS = 1
    FAIL_MINUS = 2


class ValidationError(ValueError):
    """Raised when a domain object violates one of its invariants."""


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class TrialDistribution:
    """Probability triple (p, q1, q2) of a single trinary trial.

    Components may be floats or exact Fractions; exact inputs keep all
    downstream closed-form arithmetic exact (integer window lengths only).
    """

    p: float | Fraction
    q1: float | Fraction
    q2: float | Fraction

    def __post_init__(self):
        for name in ("p", "q1", "q2"):
            v = getattr(self, name)
            if not v > 0:
                raise ValidationError(f"{name} must be > 0, got {v}")
        if not self.p < 1:
            raise ValidationError(f"p must be < 1, got {self.p}")
        total = self.p + self.q1 + self.q2
        if abs(float(total) - 1.0) > SIMPLEX_TOL:
            raise ValidationError(
                f"p + q1 + q2 must equal 1 within {SIMPLEX_TOL}, got {float(total)!r}"
            )

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in (self.p, self.q1, self.q2))

    def as_floats(self) -> tuple[float, float, float]:
        return float(self.p), float(self.q1), float(self.q2)

    def as_fractions(self) -> "TrialDistribution":
        return TrialDistribution(Fraction(self.p), Fraction(self.q1), Fraction(self.q2))

    def swapped(self) -> "TrialDistribution":
        """Distribution with the two failure types interchanged."""
        return TrialDistribution(self.p, self.q2, self.q1)


@dataclass(frozen=True)
class DerivedConstants:
    """The five constants the closed forms are written in.

    C  = ln(1/p)                                (natural-log scale)
    C0 = q1 + q2
    C1 = p(q1^2+q2^2)/(q1 q2) - 1
    C2 = (q1^2+q2^2) p^2 / (q1 q2 (p-1)) + p/(p-1) + 2(2p+1) q1 q2/(p-1)^3
    K  = (2 C0 C2 - C1^2 - C0^2) / (2 C C0^2)
    """

    C: float
    C0: float | Fraction
    C1: float | Fraction
    C2: float | Fraction
    K: float


def derive_constants(dist: TrialDistribution) -> DerivedConstants:
    p, q1, q2 = dist.p, dist.q1, dist.q2
    C = math.log(1.0 / float(p))
    C0 = q1 + q2
    C1 = p * (q1 * q1 + q2 * q2) / (q1 * q2) - 1
    C2 = (
        (q1 * q1 + q2 * q2) * p * p / (q1 * q2 * (p - 1))
        + p / (p - 1)
        + 2 * (2 * p + 1) * q1 * q2 / (p - 1) ** 3
    )
    K = float(2 * C0 * C2 - C1 * C1 - C0 * C0) / (2 * C * float(C0) ** 2)
    return DerivedConstants(C=C, C0=C0, C1=C1, C2=C2, K=K)


def is_window_valid(window) -> bool:
    """True iff the window holds at most one FAIL_PLUS and one FAIL_MINUS.

    Covers pure, one-type contaminated, and two-type contaminated runs.
    Depends only on symbol counts, so any ordering of the same multiset
    gives the same answer.
    """
    n_plus = 0
    n_minus = 0
    n = 0
    for x in window:
        n += 1
        if x == Outcome.FAIL_PLUS:
            n_plus += 1
        elif x == Outcome.FAIL_MINUS:
            n_minus += 1
    if n == 0:
        raise ValidationError("window must be non-empty")
    return n_plus <= 1 and n_minus <= 1


def check_window_length(m: int, minimum: int = 1) -> int:
    if not isinstance(m, int) or isinstance(m, bool):
        raise ValidationError(f"window length must be an integer, got {m!r}")
    if m < minimum:
        raise ValidationError(f"window length must be >= {minimum}, got {m}")
    return m
