"""Network resilience: the minimal type budget that recovers from
bounded perturbations.

A type distribution q recovers (g, K) when every initial profile with
at most K nodes playing B converges to the all-W fixed point under the
strict type rule. The resilience measure is the minimum l1 norm of a
recovering q; candidate types can be restricted to the quantized grid
q_i in {0, 1/d_i, ..., d_i/d_i} without loss.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Sequence

from .dynamics import make_step_types
from .errors import (
    BadParameterError,
    GuardExceededError,
    InvariantViolationError,
    OutOfFormulaRangeError,
)
from .graph_core import Graph, validate_types


@dataclass(frozen=True)
class RecoveryProblem:
    """A graph, a perturbation budget, and the quantized search grid."""

    graph: Graph
    budget: int
    grid: tuple[tuple[Fraction, ...], ...]


def recovery_problem(g: Graph, K: int) -> RecoveryProblem:
    if K < 1:
        raise BadParameterError(f"budget K must be >= 1, got {K}")
    K = min(K, g.n)  # profiles cannot hold more than n deviations
    grid = tuple(
        tuple(Fraction(m, d) for m in range(d + 1)) if d else (Fraction(0),)
        for d in g.degrees
    )
    return RecoveryProblem(graph=g, budget=K, grid=grid)


def _seed_profiles(n: int, K: int) -> Iterator[int]:
    # Weight-ascending, then lexicographic by node set: deterministic, so
    # "first failing seed" is well defined.
    yield 0
    for size in range(1, K + 1):
        for nodes in combinations(range(n), size):
            yield sum(1 << i for i in nodes)


def check_recovery(
    g: Graph, q: Sequence, K: int, *, max_seeds: int = 2_000_000
) -> tuple[bool, int | None]:
    """Does q pull every profile with <= K B-nodes back to all-W?

    All-W is always a fixed point of the type rule (zero B-neighbors
    never strictly exceed q_i * d_i >= 0), so recovery from a seed means
    its trajectory reaches exactly the all-W limit set. Returns the
    first failing seed, if any, in weight-then-value order.
    """
    ok, failing, _ = _check_recovery_counted(g, q, K, max_seeds=max_seeds)
    return ok, failing


def _check_recovery_counted(
    g: Graph, q: Sequence, K: int, *, max_seeds: int
) -> tuple[bool, int | None, int]:
    q = validate_types(g, q)
    K = min(K, g.n)
    if K < 1:
        raise BadParameterError(f"budget K must be >= 1, got {K}")
    seed_count = _count_seeds(g.n, K)
    if seed_count > max_seeds:
        raise GuardExceededError(f"{seed_count} seed profiles exceed guard {max_seeds}")
    step = make_step_types(g, q)
    verdict: dict[int, bool] = {0: True}
    checked = 0
    for seed in _seed_profiles(g.n, K):
        checked += 1
        if seed not in verdict:
            path: list[int] = []
            on_path: set[int] = set()
            cur = seed
            while cur not in verdict and cur not in on_path:
                path.append(cur)
                on_path.add(cur)
                cur = step(cur)
            # Revisiting the walk means a new cycle; all-W is a fixed point,
            # so that cycle cannot contain it and the seed is lost.
            ok = verdict[cur] if cur in verdict else False
            for a in path:
                verdict[a] = ok
        if not verdict[seed]:
            return False, seed, checked
    return True, None, checked


def _count_seeds(n: int, K: int) -> int:
    import math

    return sum(math.comb(n, j) for j in range(K + 1))


@dataclass(frozen=True)
class ResilienceResult:
    """Exact resilience value with an optimal witness allocation.

    ``evaluations`` counts the (candidate q, seed) recovery checks
    performed during the search.
    """

    mu: Fraction
    witness_q: tuple[Fraction, ...]
    evaluations: int


def resilience_bruteforce(
    g: Graph, K: int, *, max_grid: int = 1 << 24, max_seeds: int = 2_000_000
) -> ResilienceResult:
    """Exact minimum of ||q||_1 over the quantized grid.

    Candidates are explored best-first by nondecreasing l1 norm (ties:
    lexicographically smallest digit vector), so the first recovering
    candidate is optimal. Branches whose partial sum already exceeds a
    known-feasible bound are pruned; the greedy allocation provides that
    bound up front. Monotonicity of recovery in q is never assumed.
    """
    prob = recovery_problem(g, K)
    K = prob.budget
    grid_size = 1
    for choices in prob.grid:
        grid_size *= len(choices)
        if grid_size > max_grid:
            raise GuardExceededError(f"type grid exceeds guard {max_grid}")
    evaluations = 0

    bound = Fraction(g.n)  # q == 1 everywhere always recovers
    greedy = greedy_upper_bound_q(g)
    ok, _, n_checked = _check_recovery_counted(g, greedy, K, max_seeds=max_seeds)
    evaluations += n_checked
    if ok:
        bound = min(bound, sum(greedy, Fraction(0)))

    # Best-first over partial digit vectors; extending never lowers the sum.
    heap: list[tuple[Fraction, tuple[int, ...]]] = [(Fraction(0), ())]
    while heap:
        total, digits = heapq.heappop(heap)
        if total > bound:
            continue
        i = len(digits)
        if i == g.n:
            q = tuple(prob.grid[j][m] for j, m in enumerate(digits))
            ok, _, n_checked = _check_recovery_counted(g, q, K, max_seeds=max_seeds)
            evaluations += n_checked
            if ok:
                return ResilienceResult(mu=total, witness_q=q, evaluations=evaluations)
            continue
        for m, val in enumerate(prob.grid[i]):
            s = total + val
            if s <= bound:
                heapq.heappush(heap, (s, digits + (m,)))
    raise InvariantViolationError("no recovering type distribution found on the grid")


def greedy_upper_bound_q(g: Graph) -> tuple[Fraction, ...]:
    """Degree-order allocation: each edge charges 1/d to its endpoint of
    larger degree (ties: larger node id).

    Always recovers for K = n and satisfies
    ||q||_1 = sum over edges of min(1/d_i, 1/d_j) <= n/2.
    """
    q = [Fraction(0)] * g.n
    for i, j in g.edges:
        hi = j if (g.degrees[i], i) < (g.degrees[j], j) else i
        q[hi] += Fraction(1, g.degrees[hi])
    return tuple(q)


@dataclass(frozen=True)
class BoundsReport:
    mu: Fraction
    lower: Fraction
    upper: Fraction
    lower_slack: Fraction
    upper_slack: Fraction


def verify_bounds(g: Graph, K: int, **kwargs) -> BoundsReport:
    """Compute mu by brute force and assert 1 <= mu <= n/2."""
    if g.n < 2:
        raise BadParameterError("resilience bounds are stated for n >= 2")
    result = resilience_bruteforce(g, K, **kwargs)
    lower, upper = Fraction(1), Fraction(g.n, 2)
    if not lower <= result.mu <= upper:
        raise InvariantViolationError(
            f"mu = {result.mu} violates the bounds [{lower}, {upper}]"
        )
    return BoundsReport(
        mu=result.mu,
        lower=lower,
        upper=upper,
        lower_slack=result.mu - lower,
        upper_slack=upper - result.mu,
    )


# ---------------------------------------------------------------------------
# Closed forms for named families

FAMILIES = ("star", "path", "cycle", "complete")


def resilience_closed_form(family: str, n: int, K: int) -> Fraction:
    """Exact resilience of the star, path, cycle, and complete families.

    star: 1 for every n >= 2 and K. path: (n-1-floor((n-1)/(2K+1)))/2,
    stated only for K < ceil(n/2). cycle: (n - floor(n/(2K+1)))/2 for
    K < ceil(n/2), and n/2 for K >= ceil(n/2) where the upper bound is
    tight (the formula coincides there). complete:
    (K(K-1)/2 + K(n-K))/(n-1) for every K, clamped at K = n.
    """
    if K < 1:
        raise BadParameterError(f"budget K must be >= 1, got {K}")
    if family == "star":
        if n < 2:
            raise BadParameterError("star needs n >= 2")
        return Fraction(1)
    if family == "path":
        if n < 2:
            raise BadParameterError("path needs n >= 2")
        if K >= (n + 1) // 2:
            raise OutOfFormulaRangeError(
                f"path formula holds only for K < ceil(n/2) = {(n + 1) // 2}"
            )
        return Fraction(n - 1 - (n - 1) // (2 * K + 1), 2)
    if family == "cycle":
        if n < 3:
            raise BadParameterError("cycle needs n >= 3")
        return Fraction(n - n // (2 * K + 1), 2)
    if family == "complete":
        if n < 2:
            raise BadParameterError("complete graph needs n >= 2")
        K = min(K, n)
        return Fraction(K * (K - 1) // 2 + K * (n - K), n - 1)
    raise BadParameterError(f"unknown family {family!r}; expected one of {FAMILIES}")
