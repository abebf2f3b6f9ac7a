"""Verifiable probability events built on the digit-count anomaly.

The primitive: draw a random prime from an agreed range and test whether
the binary d-sequence of 1/p has more 1s than 0s. Any party can recheck
the outcome from p alone, so transcripts of such trials are publicly
verifiable. AND/OR compositions of independent trials tune the event
probability toward a target; all probability arithmetic is exact.

Plan trees are nested tuples ("AND"|"OR", left, right) with integer leaf
indices; leaf i is the i-th trial in a transcript.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .core import Classification, DigitRule, analyze
from .errors import NoPrimesError, TargetUnreachableError
from .primes import PrimeRange, is_prime, primes_in_array
from .scan import ScanOptions, scan

DEFAULT_MAX_OPS = 256


@dataclass(frozen=True)
class AnomalyTrial:
    """One sampled prime and its anomaly outcome (1s exceed 0s in base 2)."""

    p: int
    outcome: bool
    range: PrimeRange


@dataclass(frozen=True)
class EventPlan:
    tree: object  # int leaf index or ("AND"|"OR", left, right)
    leaf_count: int
    q: Fraction
    predicted: Fraction
    range: PrimeRange


@dataclass(frozen=True)
class Transcript:
    trials: tuple[AnomalyTrial, ...]
    outcome: bool


class VerifyResult(NamedTuple):
    ok: bool
    reason: str | None

    def __bool__(self) -> bool:
        return self.ok


def trial_outcome(p: int) -> bool:
    """Recompute the anomaly predicate for p from scratch."""
    record = analyze(p, 2, DigitRule.DIVISION)
    return record.classification == Classification.ONES_EXCEED


def estimate_q(prime_range: PrimeRange) -> Fraction:
    """Exact anomaly frequency ones_exceed / population over the range."""
    report = scan(ScanOptions(lo=prime_range.lo, hi=prime_range.hi, base=2))
    if report.population == 0:
        raise NoPrimesError(f"no odd primes in {prime_range.lo}..{prime_range.hi}")
    return Fraction(report.totals.ones_exceed, report.population)


class AnomalySampler:
    """Uniform sampler over the primes of a range, with cached outcomes.

    Caching never changes a result: outcomes are pure functions of p.
    """

    def __init__(self, prime_range: PrimeRange):
        self.range = prime_range
        primes = primes_in_array(prime_range)
        primes = primes[primes != 2]  # p = 2 has no binary d-sequence
        if len(primes) == 0:
            raise NoPrimesError(f"no odd primes in {prime_range.lo}..{prime_range.hi}")
        self._primes = primes.tolist()
        self._outcomes: dict[int, bool] = {}

    def warm(self) -> None:
        """Precompute every outcome in one bulk scan."""
        report = scan(
            ScanOptions(lo=self.range.lo, hi=self.range.hi, base=2, keep_records=True)
        )
        self._outcomes = {
            r.p: r.classification == Classification.ONES_EXCEED for r in report.records
        }

    def sample(self, rng: random.Random) -> AnomalyTrial:
        p = self._primes[rng.randrange(len(self._primes))]
        outcome = self._outcomes.get(p)
        if outcome is None:
            outcome = trial_outcome(p)
            self._outcomes[p] = outcome
        return AnomalyTrial(p=p, outcome=outcome, range=self.range)


@lru_cache(maxsize=8)
def _shared_sampler(lo: int, hi: int) -> AnomalySampler:
    return AnomalySampler(PrimeRange(lo, hi))


def _as_rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def sample_trial(prime_range: PrimeRange, seed) -> AnomalyTrial:
    """Draw one trial; ``seed`` is an int seed or a random.Random instance."""
    sampler = _shared_sampler(prime_range.lo, prime_range.hi)
    return sampler.sample(_as_rng(seed))


def to_fraction(x) -> Fraction:
    """Exact conversion; floats are read by their shortest decimal form."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def leaf_count(tree) -> int:
    if isinstance(tree, int):
        return 1
    return leaf_count(tree[1]) + leaf_count(tree[2])


def tree_probability(tree, q: Fraction) -> Fraction:
    """Probability the tree evaluates true under independent Bernoulli(q) leaves."""
    if isinstance(tree, int):
        return q
    left = tree_probability(tree[1], q)
    right = tree_probability(tree[2], q)
    if tree[0] == "AND":
        return left * right
    return 1 - (1 - left) * (1 - right)


def evaluate_tree(tree, outcomes) -> bool:
    if isinstance(tree, int):
        return outcomes[tree]
    if tree[0] == "AND":
        return evaluate_tree(tree[1], outcomes) and evaluate_tree(tree[2], outcomes)
    return evaluate_tree(tree[1], outcomes) or evaluate_tree(tree[2], outcomes)


def build_plan(
    target,
    q,
    epsilon,
    max_ops: int = DEFAULT_MAX_OPS,
    prime_range: PrimeRange = PrimeRange(7, 65_535),
) -> EventPlan:
    """Greedy AND/OR composition driving the event probability to ``target``.

    Starting from one trial (P = q), each step ANDs a fresh trial when P
    overshoots the target (P <- P*q) and ORs one when it undershoots
    (P <- 1 - (1-P)(1-q)), until |P - target| <= epsilon. Raises
    TargetUnreachableError carrying the closest plan if max_ops steps are
    not enough.
    """
    target = to_fraction(target)
    q = to_fraction(q)
    epsilon = to_fraction(epsilon)
    if not 0 < target < 1:
        raise ValueError(f"target must be in (0, 1), got {target}")
    if not 0 < q < 1:
        raise ValueError(f"q must be in (0, 1), got {q}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_ops < 0:
        raise ValueError(f"max_ops must be >= 0, got {max_ops}")

    tree = 0
    leaves = 1
    prob = q
    best = (abs(prob - target), tree, leaves, prob)
    for _ in range(max_ops):
        if abs(prob - target) <= epsilon:
            break
        if prob > target:
            tree = ("AND", tree, leaves)
            prob = prob * q
        else:
            tree = ("OR", tree, leaves)
            prob = 1 - (1 - prob) * (1 - q)
        leaves += 1
        if abs(prob - target) < best[0]:
            best = (abs(prob - target), tree, leaves, prob)
    if abs(prob - target) > epsilon:
        best_plan = EventPlan(
            tree=best[1], leaf_count=best[2], q=q, predicted=best[3], range=prime_range
        )
        raise TargetUnreachableError(
            f"|P - target| = {float(best[0]):.6g} > epsilon after {max_ops} ops",
            best_plan=best_plan,
        )
    return EventPlan(tree=tree, leaf_count=leaves, q=q, predicted=prob, range=prime_range)


def derive_leaf_seed(seed: int, index: int) -> int:
    """Deterministic per-leaf RNG seed (stable across platforms and runs)."""
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def derive_run_seed(seed: int, run: int) -> int:
    """Deterministic per-run seed, disjoint from leaf-seed derivation."""
    digest = hashlib.sha256(f"{seed}/run/{run}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def run_event(plan: EventPlan, seed: int, sampler: AnomalySampler | None = None) -> Transcript:
    """Execute the plan with fresh independent trials at each leaf."""
    if sampler is None:
        sampler = _shared_sampler(plan.range.lo, plan.range.hi)
    trials = tuple(
        sampler.sample(random.Random(derive_leaf_seed(seed, i)))
        for i in range(plan.leaf_count)
    )
    outcome = evaluate_tree(plan.tree, [t.outcome for t in trials])
    return Transcript(trials=trials, outcome=outcome)


def verify_transcript(transcript: Transcript, plan: EventPlan) -> VerifyResult:
    """Recheck every trial from scratch and the claimed event outcome."""
    if len(transcript.trials) != plan.leaf_count:
        return VerifyResult(False, "leaf_count_mismatch")
    for trial in transcript.trials:
        if not is_prime(trial.p):
            return VerifyResult(False, "composite_prime")
        if not plan.range.lo <= trial.p <= plan.range.hi:
            return VerifyResult(False, "prime_out_of_range")
        if trial.p == 2:
            return VerifyResult(False, "prime_divides_base")
        if trial_outcome(trial.p) != trial.outcome:
            return VerifyResult(False, "outcome_mismatch")
    if evaluate_tree(plan.tree, [t.outcome for t in transcript.trials]) != transcript.outcome:
        return VerifyResult(False, "event_outcome_mismatch")
    return VerifyResult(True, None)


def _tree_to_json(tree):
    if isinstance(tree, int):
        return tree
    return [tree[0], _tree_to_json(tree[1]), _tree_to_json(tree[2])]


def _tree_from_json(node):
    if isinstance(node, int):
        return node
    tag, left, right = node
    if tag not in ("AND", "OR"):
        raise ValueError(f"unknown tree tag {tag!r}")
    return (tag, _tree_from_json(left), _tree_from_json(right))


def plan_to_dict(plan: EventPlan) -> dict:
    return {
        "tree": _tree_to_json(plan.tree),
        "leaf_count": plan.leaf_count,
        "q": str(plan.q),
        "predicted": str(plan.predicted),
        "range": {"lo": plan.range.lo, "hi": plan.range.hi},
    }


def _leaf_indices(tree, out):
    if isinstance(tree, int):
        out.append(tree)
    else:
        _leaf_indices(tree[1], out)
        _leaf_indices(tree[2], out)


def plan_from_dict(d: dict) -> EventPlan:
    tree = _tree_from_json(d["tree"])
    leaves: list[int] = []
    _leaf_indices(tree, leaves)
    if sorted(leaves) != list(range(len(leaves))) or len(leaves) != d["leaf_count"]:
        raise ValueError("plan tree leaves must be exactly 0..leaf_count-1")
    return EventPlan(
        tree=tree,
        leaf_count=d["leaf_count"],
        q=Fraction(d["q"]),
        predicted=Fraction(d["predicted"]),
        range=PrimeRange(d["range"]["lo"], d["range"]["hi"]),
    )


def transcript_to_dict(transcript: Transcript) -> dict:
    return {
        "trials": [{"p": t.p, "outcome": t.outcome} for t in transcript.trials],
        "outcome": transcript.outcome,
    }


def transcript_from_dict(d: dict, plan: EventPlan) -> Transcript:
    trials = tuple(
        AnomalyTrial(p=t["p"], outcome=t["outcome"], range=plan.range) for t in d["trials"]
    )
    return Transcript(trials=trials, outcome=d["outcome"])
