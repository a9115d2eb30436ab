"""Exhaustive and backtracking enumeration of the limit structure.

The 2^n profile space is scanned in contiguous shards with numpy; each
shard yields a partial census (fixed-point and 2-cycle counts plus
capped witness lists) and the shards merge associatively, so results do
not depend on the shard size or worker count. Fixed-point counting also
has a depth-first backtracking path that scales past the scan limit on
gadget-shaped graphs.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadParameterError,
    GuardExceededError,
    IdentityViolatedError,
    InvariantViolationError,
    TimeoutExceededError,
)
from .graph_core import Graph, build_graph, two_partition, validate_profile, validate_thresholds

DEFAULT_GUARD_N = 24
_CHUNK = 1 << 18


@dataclass(frozen=True)
class LimitCensus:
    """Counts of fixed points and 2-cycles, with optional witnesses.

    cycle_classes == fixed_points + two_cycles. Witness lists are sorted
    by profile value (pairs by their smaller element) and truncated at
    the cap; they are None when collection was disabled.
    """

    fixed_points: int
    two_cycles: int
    cycle_classes: int
    fixed_witnesses: tuple[int, ...] | None = None
    two_cycle_witnesses: tuple[tuple[int, int], ...] | None = None


def census_to_dict(census: LimitCensus, n: int) -> dict:
    """JSON form: counts plus any witness lists as 'B'/'W' strings."""
    from .graph_core import format_profile

    d = {
        "fixed_points": census.fixed_points,
        "two_cycles": census.two_cycles,
        "cycle_classes": census.cycle_classes,
    }
    if census.fixed_witnesses is not None:
        d["fixed_point_witnesses"] = [format_profile(a, n) for a in census.fixed_witnesses]
    if census.two_cycle_witnesses is not None:
        d["two_cycle_witnesses"] = [
            [format_profile(a, n), format_profile(b, n)] for a, b in census.two_cycle_witnesses
        ]
    return d


def _step_array(g: Graph, k: Sequence[int], states: np.ndarray) -> np.ndarray:
    """Vectorized step map on an array of profile ints."""
    out = np.zeros(states.shape, dtype=np.uint32)
    for i in range(g.n):
        cnt = np.zeros(states.shape, dtype=np.uint8)
        for j in g.adjacency[i]:
            cnt += ((states >> np.uint32(j)) & np.uint32(1)).astype(np.uint8)
        np.bitwise_or(out, (cnt >= k[i]).astype(np.uint32) << np.uint32(i), out=out)
    return out


def _census_shard(args):
    g, k, lo, hi, cap = args
    vals = np.arange(lo, hi, dtype=np.uint32)
    s1 = _step_array(g, k, vals)
    fixed_mask = s1 == vals
    s2 = _step_array(g, k, s1)
    two_mask = (~fixed_mask) & (s2 == vals) & (vals < s1)
    fixed = int(fixed_mask.sum())
    two = int(two_mask.sum())
    fw = vals[fixed_mask][:cap].tolist() if cap else []
    tw = (
        list(zip(vals[two_mask][:cap].tolist(), s1[two_mask][:cap].tolist()))
        if cap
        else []
    )
    return fixed, two, fw, tw


def enumerate_limits(
    g: Graph,
    k: Sequence[int],
    *,
    guard_n: int = DEFAULT_GUARD_N,
    witnesses: bool = True,
    witness_cap: int = 1024,
    workers: int = 1,
    check_period: bool = True,
) -> LimitCensus:
    """Scan all 2^n profiles and classify the limit structure.

    A profile a is a fixed point iff step(a) == a; an unordered pair
    {a, b} is a 2-cycle iff step(a) == b != a and step(b) == a. With
    check_period (default), additionally verifies that no profile sits
    on a longer cycle, re-establishing the length-2 bound on this instance
    rather than assuming it.
    """
    k = validate_thresholds(g, k)
    n = g.n
    if n > guard_n:
        raise GuardExceededError(f"n = {n} exceeds enumeration guard {guard_n}")
    total = 1 << n
    cap = witness_cap if witnesses else 0
    bounds = list(range(0, total, _CHUNK)) + [total]
    shards = [(g, k, lo, hi, cap) for lo, hi in zip(bounds, bounds[1:])]
    if workers > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_shard, shards))
    else:
        parts = [_census_shard(s) for s in shards]
    fixed = sum(p[0] for p in parts)
    two = sum(p[1] for p in parts)
    fw: tuple[int, ...] | None = None
    tw: tuple[tuple[int, int], ...] | None = None
    if witnesses:
        fw = tuple([w for p in parts for w in p[2]][:witness_cap])
        tw = tuple(tuple(pair) for p in parts for pair in p[3])[:witness_cap]
    if check_period:
        _assert_no_long_cycles(g, k, fixed, two)
    return LimitCensus(
        fixed_points=fixed,
        two_cycles=two,
        cycle_classes=fixed + two,
        fixed_witnesses=fw,
        two_cycle_witnesses=tw,
    )


def _assert_no_long_cycles(g: Graph, k, fixed: int, two: int) -> None:
    # f^(2^n) lands on the limit cycle from any start; every such state
    # must have step-period 1 or 2.
    total = 1 << g.n
    table = np.empty(total, dtype=np.uint32)
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        table[lo:hi] = _step_array(g, k, np.arange(lo, hi, dtype=np.uint32))
    f2 = table[table]
    limit = table
    for _ in range(g.n):
        limit = limit[limit]
    if not np.array_equal(f2[limit], limit):
        raise InvariantViolationError(
            "a limit cycle longer than 2 exists; this contradicts the "
            "length-2 cycle bound and indicates an implementation bug"
        )
    periodic = int((f2 == np.arange(total, dtype=np.uint32)).sum())
    if periodic != fixed + 2 * two:
        raise InvariantViolationError("census does not account for every periodic profile")


def transition_table(g: Graph, k: Sequence[int], *, guard_n: int = DEFAULT_GUARD_N) -> np.ndarray:
    """Full successor table next[a] = step(a) for all 2^n profiles."""
    k = validate_thresholds(g, k)
    if g.n > guard_n:
        raise GuardExceededError(f"n = {g.n} exceeds enumeration guard {guard_n}")
    total = 1 << g.n
    table = np.empty(total, dtype=np.uint32)
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        table[lo:hi] = _step_array(g, k, np.arange(lo, hi, dtype=np.uint32))
    return table


# ---------------------------------------------------------------------------
# Backtracking fixed-point counter


def count_fixed_points_backtracking(
    g: Graph, k: Sequence[int], *, timeout: float | None = None
) -> int:
    """Exact fixed-point count by depth-first assignment with pruning.

    Fixed points are profiles where every node i satisfies
    a_i = [B-neighbor count >= k_i]. Assigning nodes in breadth-first
    order, a partial profile is pruned as soon as some assigned node can
    no longer meet (or already exceeds) its constraint, and nodes whose
    neighborhoods are fully decided get their value forced. Scales well
    past the 2^n scan on gadget-shaped graphs.
    """
    k = validate_thresholds(g, k)
    n = g.n
    order = _bfs_order(g)
    pos = [0] * n
    for idx, v in enumerate(order):
        pos[v] = idx
    deadline = time.monotonic() + timeout if timeout is not None else None

    value = [-1] * n  # -1 unassigned
    cnt_b = [0] * n  # assigned B neighbors
    rem = list(g.degrees)  # unassigned neighbors

    def violated(u: int) -> bool:
        if value[u] == 1:
            return cnt_b[u] + rem[u] < k[u]
        if value[u] == 0:
            return cnt_b[u] >= k[u]
        return False

    def assign(u: int, val: int, trail: list) -> bool:
        # Returns False on contradiction; the trail records assigned nodes
        # so undo can reverse their counter updates. Counter updates for a
        # node are applied atomically before any violation check, keeping
        # the trail consistent on failure.
        queue = [(u, val)]
        while queue:
            v, b = queue.pop()
            if value[v] != -1:
                if value[v] != b:
                    return False
                continue
            value[v] = b
            trail.append(v)
            for w_ in g.adjacency[v]:
                rem[w_] -= 1
                if b:
                    cnt_b[w_] += 1
            if violated(v):
                return False
            for w_ in g.adjacency[v]:
                if violated(w_):
                    return False
                if value[w_] == -1 and rem[w_] == 0:
                    queue.append((w_, 1 if cnt_b[w_] >= k[w_] else 0))
        return True

    def undo(trail: list) -> None:
        for v in reversed(trail):
            b = value[v]
            value[v] = -1
            for w_ in g.adjacency[v]:
                rem[w_] += 1
                if b:
                    cnt_b[w_] -= 1

    def first_unassigned() -> int:
        for v in order:
            if value[v] == -1:
                return v
        return -1

    def search() -> int:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutExceededError("backtracking fixed-point count timed out")
        u = first_unassigned()
        if u == -1:
            return 1
        total = 0
        for val in (0, 1):
            trail: list = []
            if assign(u, val, trail):
                total += search()
            undo(trail)
        return total

    return search()


def _bfs_order(g: Graph) -> list[int]:
    from collections import deque

    seen = [False] * g.n
    order = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            order.append(u)
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
    return order


# ---------------------------------------------------------------------------
# Predecessors and reachability


def predecessors(
    g: Graph, k: Sequence[int], a: int, *, guard_n: int = DEFAULT_GUARD_N
) -> tuple[int, ...]:
    """All profiles b with step(b) == a, by scanning the 2^n space."""
    k = validate_thresholds(g, k)
    a = validate_profile(a, g.n)
    if g.n > guard_n:
        raise GuardExceededError(f"n = {g.n} exceeds enumeration guard {guard_n}")
    total = 1 << g.n
    found: list[int] = []
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        vals = np.arange(lo, hi, dtype=np.uint32)
        hits = vals[_step_array(g, k, vals) == a]
        found.extend(int(x) for x in hits)
    return tuple(found)


def is_reachable(
    g: Graph, k: Sequence[int], a: int, *, guard_n: int = DEFAULT_GUARD_N
) -> bool:
    """True iff a has at least one predecessor under step."""
    k = validate_thresholds(g, k)
    a = validate_profile(a, g.n)
    if g.n > guard_n:
        raise GuardExceededError(f"n = {g.n} exceeds enumeration guard {guard_n}")
    total = 1 << g.n
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        vals = np.arange(lo, hi, dtype=np.uint32)
        if bool((_step_array(g, k, vals) == a).any()):
            return True
    return False


# ---------------------------------------------------------------------------
# The fixed-point / cycle-class identity on bipartite instances


@dataclass(frozen=True)
class BipartiteCycleCheck:
    fixed_points: int
    two_cycles: int
    cycle_classes: int
    predicted_classes: int
    pairing_verified: bool


def bipartite_cycle_identity(
    g: Graph, k: Sequence[int], *, guard_n: int = DEFAULT_GUARD_N
) -> BipartiteCycleCheck:
    """Check cycle_classes == F(F-1)/2 + F on a bipartite instance.

    F and the class count are computed independently by the census; the
    constructive pairing (splice two distinct fixed points along the
    2-partition) is then replayed to confirm it generates every 2-cycle.
    Raises IdentityViolatedError on mismatch, which would indicate an
    implementation bug rather than bad input.
    """
    k = validate_thresholds(g, k)
    part = two_partition(g)  # rejects non-bipartite inputs with a witness
    census = enumerate_limits(g, k, guard_n=guard_n, witnesses=True, witness_cap=1 << g.n)
    f = census.fixed_points
    predicted = f * (f - 1) // 2 + f
    if census.cycle_classes != predicted:
        raise IdentityViolatedError(
            f"cycle classes {census.cycle_classes} != F(F-1)/2 + F = {predicted}"
        )
    odd_mask = sum(1 << i for i in part.p_odd)
    even_mask = sum(1 << i for i in part.p_even)
    fixed = census.fixed_witnesses or ()
    spliced = set()
    for x, a1 in enumerate(fixed):
        for a2 in fixed[x + 1 :]:
            lo_hi = sorted(((a2 & odd_mask) | (a1 & even_mask), (a1 & odd_mask) | (a2 & even_mask)))
            spliced.add(tuple(lo_hi))
    actual = set(census.two_cycle_witnesses or ())
    pairing_ok = spliced == actual
    if not pairing_ok:
        raise IdentityViolatedError("fixed-point splicing did not generate the 2-cycles")
    return BipartiteCycleCheck(
        fixed_points=f,
        two_cycles=census.two_cycles,
        cycle_classes=census.cycle_classes,
        predicted_classes=predicted,
        pairing_verified=pairing_ok,
    )


# ---------------------------------------------------------------------------
# Extremal instances


def build_extremal_cycle_instance(n: int, kind: str) -> tuple[Graph, tuple[int, ...]]:
    """Cycle-graph instances meeting the counting bounds.

    kind="min": odd cycle with all thresholds 1 (exactly the two uniform
    fixed points, no 2-cycles). kind="max": n divisible by 3, n >= 6,
    thresholds repeating (1, 1, 2) so each threshold-1 node has exactly
    one threshold-1 neighbor; at least 2^(n/3) fixed points and
    2^(n/3) - 1 two-cycles.
    """
    if kind == "min":
        if n < 3 or n % 2 == 0:
            raise BadParameterError("kind='min' needs an odd n >= 3")
        g = build_graph(n, [(i, (i + 1) % n) for i in range(n)])
        return g, (1,) * n
    if kind == "max":
        if n % 3 != 0 or n < 6:
            raise BadParameterError("kind='max' needs n divisible by 3, n >= 6")
        g = build_graph(n, [(i, (i + 1) % n) for i in range(n)])
        k = tuple(2 if i % 3 == 2 else 1 for i in range(n))
        return g, k
    raise BadParameterError(f"unknown kind {kind!r}; expected 'min' or 'max'")
