"""Exact references for small instances, plus a Monte-Carlo tail estimator.

Exhaustive enumeration over clone subsets, vectorized in chunks: a
chunk of index combinations becomes a (chunk, s) array, fancy indexing
pulls the clone rows, and one sum gives all degree vectors at once.
Enumeration is lexicographic and improvements must be strict, so the
reported witness is the lexicographically smallest optimal subset.

Everything here refuses to run past a configurable subset budget
(default 1e7) rather than silently grinding; the refusal carries the
offending count.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Instance, ObjectiveKind, objective_denominator
from .errors import BudgetExceededError, InputError

DEFAULT_BUDGET = 10_000_000

_CHUNK = 32768


@dataclass(frozen=True)
class ExactResult:
    """Optimal objective over subsets, in exact integer-over-denominator form.

    ``optimum_num / optimum_den`` is the optimum over subsets of size
    exactly s; ``witness`` is the lexicographically smallest optimal
    subset.  For the maximization objectives (cmin/cavg) the fields
    ``*_at_most`` additionally give the optimum when subsets of any
    size up to s are allowed; for the deviation objectives that
    relaxation is pointless (fewer clones only drift farther from s/2)
    and the fields stay None.
    """

    objective: ObjectiveKind
    s: int
    optimum_num: int
    optimum_den: int
    witness: tuple[int, ...]
    enumerated: int
    optimum_num_at_most: int | None = None
    witness_at_most: tuple[int, ...] | None = None
    enumerated_at_most: int | None = None

    @property
    def optimum(self) -> Fraction:
        return Fraction(self.optimum_num, self.optimum_den)

    @property
    def optimum_at_most(self) -> Fraction | None:
        if self.optimum_num_at_most is None:
            return None
        return Fraction(self.optimum_num_at_most, self.optimum_den)


def _check_enumeration(m: int, s: int, budget: int) -> int:
    count = math.comb(m, s)
    if count > budget:
        raise BudgetExceededError(
            f"enumerating C({m}, {s}) = {count} subsets exceeds the budget of {budget}",
            count=count,
        )
    return count


def _chunked_combinations(m: int, k: int):
    it = itertools.combinations(range(m), k)
    while True:
        chunk = list(itertools.islice(it, _CHUNK))
        if not chunk:
            return
        yield np.array(chunk, dtype=np.intp)


def _objective_scores(deg: np.ndarray, s: int, kind: ObjectiveKind) -> np.ndarray:
    # integer scores matching the doubled/numerator conventions
    if kind is ObjectiveKind.CMIN:
        return np.minimum(deg, s - deg).min(axis=1)
    if kind is ObjectiveKind.CAVG:
        return np.minimum(deg, s - deg).sum(axis=1)
    if kind is ObjectiveKind.DMAX:
        return np.abs(2 * deg - s).max(axis=1)
    return np.abs(2 * deg - s).sum(axis=1)


def _scan_size(instance: Instance, k: int, s: int, kind: ObjectiveKind):
    """Best (score, witness) over subsets of size exactly k; lex-first wins."""
    a = instance.adjacency.astype(np.int64)
    m = instance.num_clones
    best_score = None
    best_witness = None
    if k == 0:
        deg = np.zeros((1, instance.num_probes), dtype=np.int64)
        score = int(_objective_scores(deg, s, kind)[0])
        return score, ()
    for idx in _chunked_combinations(m, k):
        deg = a[idx, :].sum(axis=1)
        scores = _objective_scores(deg, s, kind)
        pos = int(np.argmax(scores)) if kind.maximize else int(np.argmin(scores))
        cand = int(scores[pos])
        better = (
            best_score is None
            or (kind.maximize and cand > best_score)
            or (not kind.maximize and cand < best_score)
        )
        if better:
            best_score = cand
            best_witness = tuple(int(i) for i in idx[pos])
    return best_score, best_witness


def exact_optimum(
    instance: Instance,
    s: int,
    objective: ObjectiveKind,
    *,
    budget: int = DEFAULT_BUDGET,
    include_at_most: bool | None = None,
) -> ExactResult:
    """Brute-force optimum at size exactly s (and optionally size <= s).

    Raises a budget error carrying the subset count when C(m, s), or
    the at-most-s total, exceeds ``budget``.
    """
    m = instance.num_clones
    s = int(s)
    if not 1 <= s <= m:
        raise InputError(f"budget s={s} must lie in [1, {m}]")
    count = _check_enumeration(m, s, budget)
    if include_at_most is None:
        include_at_most = objective.maximize
    score, witness = _scan_size(instance, s, s, objective)
    result = ExactResult(
        objective=objective,
        s=s,
        optimum_num=score,
        optimum_den=objective_denominator(objective, instance.num_probes),
        witness=witness,
        enumerated=count,
    )
    if not include_at_most:
        return result
    total = sum(math.comb(m, k) for k in range(s + 1))
    if total > budget:
        raise BudgetExceededError(
            f"enumerating all subsets of size <= {s} means {total} subsets, over the budget of {budget}",
            count=total,
        )
    best_score, best_witness = score, witness
    for k in range(s):
        cand_score, cand_witness = _scan_size(instance, k, s, objective)
        # across sizes, ties go to the lexicographically smaller tuple
        # (a proper prefix counts as smaller)
        if (objective.maximize and cand_score > best_score) or (
            not objective.maximize and cand_score < best_score
        ):
            best_score, best_witness = cand_score, cand_witness
        elif cand_score == best_score and cand_witness < best_witness:
            best_witness = cand_witness
    return ExactResult(
        objective=objective,
        s=s,
        optimum_num=score,
        optimum_den=result.optimum_den,
        witness=witness,
        enumerated=count,
        optimum_num_at_most=best_score,
        witness_at_most=best_witness,
        enumerated_at_most=total,
    )


def exact_all_objectives(
    instance: Instance, s: int, *, budget: int = DEFAULT_BUDGET
) -> dict[ObjectiveKind, ExactResult]:
    """One enumeration pass worth of exact optima for all four objectives."""
    return {
        kind: exact_optimum(instance, s, kind, budget=budget, include_at_most=False)
        for kind in ObjectiveKind
    }


def perfect_balance_exists(instance: Instance, s: int, *, budget: int = DEFAULT_BUDGET) -> bool:
    """Does some subset of size exactly s give every probe degree s/2?

    Requires even s; a probe degree equal to s/2 is impossible otherwise.
    """
    m = instance.num_clones
    s = int(s)
    if not 1 <= s <= m:
        raise InputError(f"budget s={s} must lie in [1, {m}]")
    if s % 2 != 0:
        raise InputError(f"perfect balance needs an even s, got {s}")
    _check_enumeration(m, s, budget)
    a = instance.adjacency.astype(np.int64)
    half = s // 2
    for idx in _chunked_combinations(m, s):
        deg = a[idx, :].sum(axis=1)
        if bool((deg == half).all(axis=1).any()):
            return True
    return False


def size_s_cover_exists(instance: Instance, s: int, *, budget: int = DEFAULT_BUDGET) -> bool:
    """Does some subset of size exactly s leave every probe with degree in [1, s-1]?"""
    m = instance.num_clones
    s = int(s)
    if not 1 <= s <= m:
        raise InputError(f"budget s={s} must lie in [1, {m}]")
    _check_enumeration(m, s, budget)
    a = instance.adjacency.astype(np.int64)
    for idx in _chunked_combinations(m, s):
        deg = a[idx, :].sum(axis=1)
        ok = (deg >= 1) & (deg <= s - 1)
        if bool(ok.all(axis=1).any()):
            return True
    return False


@dataclass(frozen=True)
class ExcessEstimate:
    """Monte-Carlo estimate of Exp[max(0, Y - (1+eps) mu)] with its standard error."""

    estimate: float
    std_error: float
    trials: int
    mu: float


def estimate_excess_expectation(
    probabilities,
    epsilon: float,
    trials: int,
    *,
    seed: int | None = None,
) -> ExcessEstimate:
    """Sample Y = sum of independent Bernoulli(p_i) and average the excess
    of Y over (1+eps)*mu, mu = sum p_i.

    mu = 0 is allowed and gives exactly 0 (Y is identically zero).
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InputError("probabilities must be a nonempty 1-d vector")
    if (p < 0).any() or (p > 1).any():
        raise InputError("probabilities must lie in [0, 1]")
    if not 0 < epsilon <= 1:
        raise InputError(f"epsilon must lie in (0, 1], got {epsilon}")
    trials = int(trials)
    if trials < 1:
        raise InputError(f"trials must be >= 1, got {trials}")
    mu = float(p.sum())
    threshold = (1.0 + epsilon) * mu
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    max_block = max(1, int(2e7) // p.size)
    while done < trials:
        block = min(max_block, trials - done)
        y = (rng.random((block, p.size)) < p).sum(axis=1)
        excess = np.maximum(y - threshold, 0.0)
        total += float(excess.sum())
        total_sq += float((excess * excess).sum())
        done += block
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    std_error = math.sqrt(var / trials)
    return ExcessEstimate(estimate=mean, std_error=std_error, trials=trials, mu=mu)
