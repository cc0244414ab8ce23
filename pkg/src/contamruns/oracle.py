"""Ground-truth probabilities at small scale.

Two independent routes:

* full enumeration over all 3^n sequences (n <= 14), exact when the
  trial distribution is given as Fractions;
* an exact dynamic program over capped-gap suffix states, which reaches
  much larger N (float mode) while staying exact for small N
  (rational mode).

Enumeration never consults the closed forms: probabilities come from
counting sequences by their (#type-I, #type-II) failure counts.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .model import Outcome, TrialDistribution, ValidationError, check_window_length

ENUM_MAX_N = 14
DEFAULT_BUDGET = 10 ** 9


class SizeError(ValueError):
    """Raised when a query exceeds the enumeration size or DP work budget."""


def _weights(dist: TrialDistribution):
    """(p, q1, q2) in exact arithmetic when the distribution is exact."""
    if dist.is_exact:
        return Fraction(dist.p), Fraction(dist.q1), Fraction(dist.q2)
    return dist.as_floats()


def _prob_from_counts(dist: TrialDistribution, n: int, counts: np.ndarray):
    """Sum of sequence probabilities given counts[n1, n2] of sequences."""
    p, q1, q2 = _weights(dist)
    total = 0
    for n1, n2 in zip(*np.nonzero(counts)):
        c = int(counts[n1, n2])
        total += c * p ** (n - int(n1) - int(n2)) * q1 ** int(n1) * q2 ** int(n2)
    return total


def _check_enum_size(n: int) -> None:
    if n > ENUM_MAX_N:
        raise SizeError(f"enumeration limited to n <= {ENUM_MAX_N} (3^n sequences), got n={n}")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")


def enumerate_event(dist: TrialDistribution, n: int,
                    predicate: Callable[[tuple[int, ...]], bool]):
    """Probability of {predicate holds} over all 3^n outcome sequences."""
    _check_enum_size(n)
    counts = np.zeros((n + 1, n + 1), dtype=np.int64)
    for seq in itertools.product((0, 1, 2), repeat=n):
        if predicate(seq):
            counts[seq.count(1), seq.count(2)] += 1
    return _prob_from_counts(dist, n, counts)


def _all_sequences(n: int) -> np.ndarray:
    """All 3^n sequences as rows of a (3^n, n) uint8 array."""
    rows = 3 ** n
    idx = np.arange(rows, dtype=np.int64)
    out = np.empty((rows, n), dtype=np.uint8)
    for t in range(n - 1, -1, -1):
        out[:, t] = idx % 3
        idx //= 3
    return out


def _suffix_length_columns(codes: np.ndarray):
    """Yield (t, L_t) per position for every row of `codes` at once."""
    rows, n = codes.shape
    last_p = np.zeros(rows, dtype=np.int32)
    prev_p = np.zeros(rows, dtype=np.int32)
    last_m = np.zeros(rows, dtype=np.int32)
    prev_m = np.zeros(rows, dtype=np.int32)
    for t in range(1, n + 1):
        col = codes[:, t - 1]
        is_p = col == int(Outcome.FAIL_PLUS)
        is_m = col == int(Outcome.FAIL_MINUS)
        prev_p[is_p] = last_p[is_p]
        last_p[is_p] = t
        prev_m[is_m] = last_m[is_m]
        last_m[is_m] = t
        yield t, t - np.maximum(prev_p, prev_m)


def _tally(dist: TrialDistribution, codes: np.ndarray, mask: np.ndarray):
    n = codes.shape[1]
    sel = codes[mask]
    n1 = (sel == int(Outcome.FAIL_PLUS)).sum(axis=1).astype(np.int64)
    n2 = (sel == int(Outcome.FAIL_MINUS)).sum(axis=1).astype(np.int64)
    counts = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(counts, (n1, n2), 1)
    return _prob_from_counts(dist, n, counts)


def window_probability_by_enumeration(dist: TrialDistribution, m: int):
    """P(A1) by counting valid m-windows (independent of the closed form)."""
    check_window_length(m, 1)
    _check_enum_size(m)
    codes = _all_sequences(m)
    valid = ((codes == int(Outcome.FAIL_PLUS)).sum(axis=1) <= 1) \
        & ((codes == int(Outcome.FAIL_MINUS)).sum(axis=1) <= 1)
    return _tally(dist, codes, valid)


def joint_survival_by_enumeration(dist: TrialDistribution, m: int):
    """P(A1 Abar_2 ... Abar_m) by enumerating X_1..X_{2m-1}.

    Window j is valid iff the suffix length at position j+m-1 is >= m.
    """
    check_window_length(m, 2)
    n = 2 * m - 1
    _check_enum_size(n)
    codes = _all_sequences(n)
    first_valid = None
    later_valid = np.zeros(codes.shape[0], dtype=bool)
    for t, lengths in _suffix_length_columns(codes):
        if t == m:
            first_valid = lengths >= m
        elif t > m:
            later_valid |= lengths >= m
    return _tally(dist, codes, first_valid & ~later_valid)


def enumerate_conditional(dist: TrialDistribution, m: int):
    """P(Abar_2 ... Abar_m | A1), exactly, for m <= 7."""
    if 2 * m - 1 > ENUM_MAX_N:
        raise SizeError(f"conditional enumeration needs 3^(2m-1) sequences; m <= 7, got m={m}")
    return joint_survival_by_enumeration(dist, m) / window_probability_by_enumeration(dist, m)


def longest_run_distribution_by_enumeration(dist: TrialDistribution, n: int) -> dict:
    """Exact PMF of mu(n) as {length: probability} over all 3^n sequences."""
    _check_enum_size(n)
    codes = _all_sequences(n)
    best = np.zeros(codes.shape[0], dtype=np.int32)
    for _, lengths in _suffix_length_columns(codes):
        np.maximum(best, lengths, out=best)
    return {mu: _tally(dist, codes, best == mu) for mu in np.unique(best)}


def longest_cdf_by_enumeration(dist: TrialDistribution, N: int, m: int):
    """P(mu(N) < m) by full enumeration."""
    pmf = longest_run_distribution_by_enumeration(dist, N)
    return sum((prob for mu, prob in pmf.items() if mu < m),
               Fraction(0) if dist.is_exact else 0.0)


# --- dynamic program over capped suffix-gap states ---------------------

def _dp_states_and_transitions(m: int):
    """Reachable non-absorbed states and their 3-way transitions.

    A state is (gapLastPlus, gapPrevPlus, gapLastMinus, gapPrevMinus),
    gaps to the most recent / second most recent occurrence of each
    failure type, capped at m (sentinel "none yet" behaves as an
    occurrence at position 0, so its gap is the position, capped).
    The suffix length is min(gapPrevPlus, gapPrevMinus); a state with
    suffix length >= m is absorbed (a valid m-window has occurred).
    """
    cap = m
    absorbed = -1
    index: dict[tuple[int, int, int, int], int] = {}
    transitions: list[list[int]] = []
    queue = [(0, 0, 0, 0)]
    index[queue[0]] = 0
    transitions.append([0, 0, 0])
    head = 0
    while head < len(queue):
        glp, gpp, glm, gpm = queue[head]
        for sym in range(3):
            if sym == int(Outcome.SUCCESS):
                nxt = (min(glp + 1, cap), min(gpp + 1, cap),
                       min(glm + 1, cap), min(gpm + 1, cap))
            elif sym == int(Outcome.FAIL_PLUS):
                nxt = (0, min(glp + 1, cap), min(glm + 1, cap), min(gpm + 1, cap))
            else:
                nxt = (min(glp + 1, cap), min(gpp + 1, cap), 0, min(glm + 1, cap))
            if min(nxt[1], nxt[3]) >= m:
                transitions[head][sym] = absorbed
                continue
            if nxt not in index:
                index[nxt] = len(queue)
                queue.append(nxt)
                transitions.append([0, 0, 0])
            transitions[head][sym] = index[nxt]
        head += 1
    return queue, transitions


def dp_longest_cdf(dist: TrialDistribution, N: int, m: int, mode: str = "float",
                   budget: float = DEFAULT_BUDGET):
    """Exact P(mu(N) < m) by forward DP; float or rational arithmetic."""
    if N < 1:
        raise ValidationError(f"N must be >= 1, got {N}")
    check_window_length(m, 1)
    if m == 1:
        # every single symbol is a valid length-1 run
        return Fraction(0) if (mode == "exact" and dist.is_exact) else 0.0
    states, transitions = _dp_states_and_transitions(m)
    work = 3 * len(states) * N
    if budget is not None and work > budget:
        raise SizeError(
            f"DP needs ~{work:.2e} state-transitions (> budget {budget:.2e}); "
            f"raise `budget` to force the run"
        )
    if mode == "exact":
        return _dp_exact(dist, N, transitions)
    if mode != "float":
        raise ValidationError(f"mode must be 'float' or 'exact', got {mode!r}")
    return _dp_float(dist, N, transitions)


def _dp_exact(dist: TrialDistribution, N: int, transitions):
    p, q1, q2 = _weights(dist)
    probs = (p, q1, q2)
    one = Fraction(1) if dist.is_exact else 1.0
    v = {0: one}
    for _ in range(N):
        nv: dict[int, object] = {}
        for s, mass in v.items():
            for sym in range(3):
                t = transitions[s][sym]
                if t < 0:
                    continue
                nv[t] = nv.get(t, 0) + mass * probs[sym]
        v = nv
    return sum(v.values(), Fraction(0) if dist.is_exact else 0.0)


def _dp_float(dist: TrialDistribution, N: int, transitions):
    p, q1, q2 = dist.as_floats()
    probs = (p, q1, q2)
    S = len(transitions)
    rows, cols, data = [], [], []
    for s in range(S):
        for sym in range(3):
            t = transitions[s][sym]
            if t >= 0:
                rows.append(t)
                cols.append(s)
                data.append(probs[sym])
    M = sp.csr_matrix((data, (rows, cols)), shape=(S, S))
    v = np.zeros(S)
    v[0] = 1.0
    for _ in range(N):
        v = M.dot(v)
    return float(v.sum())


def dp_hitting_tail(dist: TrialDistribution, m: int, N: int, mode: str = "float",
                    budget: float = DEFAULT_BUDGET):
    """P(tau_m > N); coincides with P(mu(N) < m)."""
    check_window_length(m, 1)
    if N < m:
        return Fraction(1) if (mode == "exact" and dist.is_exact) else 1.0
    return dp_longest_cdf(dist, N, m, mode=mode, budget=budget)
