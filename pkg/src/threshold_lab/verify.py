"""Machine-checked invariant suites behind `threshold-lab verify`.

Each suite re-verifies one family of structural claims on exhaustive
small instances plus seeded random ones, and reports a single pass/fail
line. These run at desk scale in well under a minute; the full-strength
versions live in the acceptance test suite.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from . import dynamics, enumeration, expansions, instances, reductions, resilience
from .errors import ThresholdLabError
from .graph_core import (
    is_bipartite,
    two_partition,
    types_to_thresholds,
)

Result = tuple[str, bool, str]


def run_all(seed: int = 0, guard_n: int = 24) -> list[Result]:
    checks = [
        _check_type_threshold_equivalence,
        _check_two_step_table,
        _check_cycle_length_bound,
        _check_inverted_and_weighted_cycles,
        _check_decoupling_identities,
        _check_conflict_potential,
        _check_fixed_point_coincidence,
        _check_expansion_commutation,
        _check_combined_expansion_isomorphism,
        _check_census_backtracking_agreement,
        _check_bipartite_cycle_identity,
        _check_extremal_instances,
        _check_fix_gadget,
        _check_pred_gadget,
        _check_reachable_pred_gadget,
        _check_convergence_time_bounds,
        _check_resilience_closed_forms,
        _check_greedy_recovery,
        _probe_bipartite_linear_time,
    ]
    results = []
    for check in checks:
        name = check.__name__.strip("_").removeprefix("check_").replace("_", "-")
        try:
            detail = check(random.Random(seed))
            results.append((name, True, detail or ""))
        except ThresholdLabError as exc:
            results.append((name, False, str(exc)))
        except AssertionError as exc:
            results.append((name, False, str(exc)))
    return results


def _random_instances(rng, count, max_n):
    for _ in range(count):
        g = instances.random_connected_graph(rng.randint(2, max_n), rng)
        yield g, instances.random_thresholds(g, rng)


def _check_type_threshold_equivalence(rng) -> str:
    cases = 0
    for _ in range(40):
        g = instances.random_connected_graph(rng.randint(2, 5), rng)
        q = instances.random_types(g, rng)
        k = types_to_thresholds(g, q)
        assert all(ki >= 1 for ki in k), "types produced a zero threshold"
        for a in range(1 << g.n):
            assert dynamics.step_types(g, q, a) == dynamics.step(g, k, a), (
                f"type/threshold rules disagree on {g.edges} q={q} a={a}"
            )
            cases += 1
    return f"{cases} profile updates compared"


def _check_two_step_table(rng) -> str:
    cases = 0
    for n in (4, 5, 6):
        g = instances.cycle_graph(n)
        for k in product((1, 2), repeat=n):
            for a in range(1 << n):
                b = dynamics.step(g, k, dynamics.step(g, k, a))
                for i in range(n):
                    assert dynamics.ring_two_step(g, k, a, i) == (b >> i) & 1, (
                        f"table row mismatch at n={n} k={k} a={a} i={i}"
                    )
                    cases += 1
    return f"{cases} table entries checked"


def _check_cycle_length_bound(rng) -> str:
    total = 0
    for n in (1, 2, 3, 4):
        for g in instances.connected_graphs(n):
            for k in instances.all_threshold_vectors(g):
                enumeration.enumerate_limits(g, k, witnesses=False)
                total += 1
    for g, k in _random_instances(rng, 25, 7):
        enumeration.enumerate_limits(g, k, witnesses=False)
        total += 1
    return f"{total} instances, every limit cycle has length <= 2"


def _check_inverted_and_weighted_cycles(rng) -> str:
    for g, k in _random_instances(rng, 20, 6):
        step = dynamics.make_step_inverted(g, k)
        for a in range(1 << g.n):
            report = dynamics.limit_cycle(step, a, dynamics.default_guard(g))
            assert len(report.cycle) <= 2, f"inverted cycle of length {len(report.cycle)}"
    for _ in range(20):
        w = instances.random_weighted_instance(rng.randint(2, 6), rng)
        step = dynamics.make_step_weighted(w)
        for a in range(1 << w.n):
            report = dynamics.limit_cycle(step, a, dynamics.default_guard(w))
            assert len(report.cycle) <= 2, f"weighted cycle of length {len(report.cycle)}"
    return "inverted and weighted limit cycles all have length <= 2"


def _bipartite_sample(rng, count, max_n):
    out = []
    while len(out) < count:
        g = instances.random_connected_graph(rng.randint(2, max_n), rng, extra_edge_prob=0.15)
        if is_bipartite(g):
            out.append((g, instances.random_thresholds(g, rng)))
    return out


def _check_decoupling_identities(rng) -> str:
    cases = 0
    for g, k in _bipartite_sample(rng, 25, 7):
        part = two_partition(g)
        odd_mask = sum(1 << i for i in part.p_odd)
        even_mask = sum(1 << i for i in part.p_even)
        for a in range(1 << g.n):
            s1 = dynamics.step(g, k, a)
            s2 = dynamics.step(g, k, s1)
            oe = dynamics.step_restricted(g, k, dynamics.step_restricted(g, k, a, part.p_odd), part.p_even)
            eo = dynamics.step_restricted(g, k, dynamics.step_restricted(g, k, a, part.p_even), part.p_odd)
            assert oe & odd_mask == s1 & odd_mask and oe & even_mask == s2 & even_mask
            assert eo & odd_mask == s2 & odd_mask and eo & even_mask == s1 & even_mask
            cases += 1
    return f"{cases} decoupling identities verified"


def _symmetric_bipartite_sample(rng, count):
    out = []
    while len(out) < count:
        g, k = _bipartite_sample(rng, 1, 4)[0]
        res = expansions.symmetric_expansion(g, k)
        if res.graph.n <= 16:
            out.append((res.graph, res.thresholds))
    return out


def _check_conflict_potential(rng) -> str:
    cases = 0
    for g, k in _symmetric_bipartite_sample(rng, 6):
        assert expansions.is_symmetric_model(g, k)
        part = two_partition(g)
        for _ in range(200):
            b = rng.randrange(1 << g.n)
            for p in (part.p_odd, part.p_even):
                after = dynamics.step_restricted(g, k, b, p)
                changed = after != b
                decreased = dynamics.conflict_links(g, after) < dynamics.conflict_links(g, b)
                assert changed == decreased, "one-side update without a conflict-link drop"
                cases += 1
    return f"{cases} sequential moves match the potential"


def _check_fixed_point_coincidence(rng) -> str:
    cases = 0
    for g, k in _bipartite_sample(rng, 15, 7):
        part = two_partition(g)
        for a in range(1 << g.n):
            fixed_parallel = dynamics.step(g, k, a) == a
            comp = dynamics.step_restricted(
                g, k, dynamics.step_restricted(g, k, a, part.p_odd), part.p_even
            )
            assert fixed_parallel == (comp == a)
            cases += 1
    return f"{cases} fixed-point equivalences checked"


def _check_expansion_commutation(rng) -> str:
    trials = 0
    for g, k in _random_instances(rng, 12, 5):
        profiles = range(1 << g.n)
        src = dynamics.make_step(g, k)
        for res, source in (
            (expansions.bipartite_expansion(g, k), src),
            (expansions.symmetric_expansion(g, k), src),
            (expansions.inverted_to_primary(g, k), dynamics.make_step_inverted(g, k)),
        ):
            ok, bad = expansions.commutation_check(source, res.target_step(), res.lift, profiles)
            assert ok, f"commutation failed at profile {bad}"
            trials += 1
        if not expansions.is_symmetric_model(g, k):
            res = expansions.one_step_symmetric_expansion(g, k)
            ok, bad = expansions.commutation_check(src, res.target_step(), res.lift, profiles)
            assert ok, f"one-step commutation failed at profile {bad}"
            trials += 1
    for _ in range(8):
        w = instances.random_signed_instance(rng.randint(2, 5), rng)
        res = expansions.signed_to_primary(w)
        ok, bad = expansions.commutation_check(
            dynamics.make_step_weighted(w), res.target_step(), res.lift, range(1 << w.n)
        )
        assert ok, f"signed commutation failed at profile {bad}"
        w2 = instances.random_small_blowup_instance(rng.randint(2, 4), rng)
        res2 = expansions.integer_weights_to_unit(w2)
        ok, bad = expansions.commutation_check(
            dynamics.make_step_weighted(w2), res2.target_step(), res2.lift, range(1 << w2.n)
        )
        assert ok, f"blowup commutation failed at profile {bad}"
        w3 = instances.random_weighted_instance(rng.randint(2, 5), rng)
        res3 = expansions.remove_self_loops(w3)
        ok, bad = expansions.commutation_check(
            dynamics.make_step_weighted(w3), res3.target_step(), res3.lift, range(1 << w3.n)
        )
        assert ok, f"self-loop doubling commutation failed at profile {bad}"
        trials += 3
    return f"{trials} expansion squares commute"


def _check_combined_expansion_isomorphism(rng) -> str:
    checked = 0
    for _ in range(6):
        g = instances.random_connected_graph(rng.randint(3, 5), rng, extra_edge_prob=0.5)
        k = instances.random_thresholds(g, rng)
        if is_bipartite(g) or expansions.is_symmetric_model(g, k):
            continue
        bip = expansions.bipartite_expansion(g, k)
        sym = expansions.symmetric_expansion(g, k)
        a = expansions.symmetric_expansion(bip.graph, bip.thresholds)
        b = expansions.bipartite_expansion(sym.graph, sym.thresholds)
        assert expansions.instances_isomorphic(
            a.graph, a.thresholds, b.graph, b.thresholds
        ), "bipartite-then-symmetric differs from symmetric-then-bipartite"
        checked += 1
    return f"{checked} composition pairs isomorphic"


def _check_census_backtracking_agreement(rng) -> str:
    for g, k in _random_instances(rng, 30, 9):
        census = enumeration.enumerate_limits(g, k, witnesses=False)
        assert (
            enumeration.count_fixed_points_backtracking(g, k) == census.fixed_points
        ), f"backtracking disagrees with the scan on {g.edges} k={k}"
    return "30 instances agree"


def _check_bipartite_cycle_identity(rng) -> str:
    for g, k in _bipartite_sample(rng, 20, 8):
        enumeration.bipartite_cycle_identity(g, k)
    return "F(F-1)/2 + F matched on 20 bipartite instances"


def _check_extremal_instances(rng) -> str:
    g, k = enumeration.build_extremal_cycle_instance(5, "min")
    census = enumeration.enumerate_limits(g, k)
    assert census.fixed_points == 2 and census.two_cycles == 0
    g, k = enumeration.build_extremal_cycle_instance(6, "max")
    census = enumeration.enumerate_limits(g, k)
    assert census.fixed_points >= 4 and census.two_cycles >= 3
    return "min/max counting instances behave as constructed"


def _check_fix_gadget(rng) -> str:
    f = reductions.Formula(reductions.MONOTONE_2DNF, 2, ((1, 2),))
    gadget = reductions.fix_reduction(f)
    count = enumeration.count_fixed_points_backtracking(gadget.graph, gadget.thresholds)
    assert count == 18, f"anchor gadget has {count} fixed points, expected 18"
    assert reductions.recover_sat_count(count, 2) == (1, 3)
    for _ in range(10):
        f = _random_2dnf(rng)
        gadget = reductions.fix_reduction(f)
        assert is_bipartite(gadget.graph)
        count = enumeration.count_fixed_points_backtracking(gadget.graph, gadget.thresholds)
        sat, _nsat = reductions.recover_sat_count(count, f.num_vars)
        assert sat == reductions.count_sat(f)
    return "fixed-point counts invert to #sat"


def _random_2dnf(rng) -> reductions.Formula:
    m = rng.randint(1, 2)
    n = rng.randint(1, 2 * m)
    while True:
        clauses = tuple(
            tuple(sorted(rng.sample(range(1, n + 1), rng.randint(1, min(2, n)))))
            for _ in range(m)
        )
        if {abs(l) for c in clauses for l in c} == set(range(1, n + 1)):
            return reductions.Formula(reductions.MONOTONE_2DNF, n, clauses)


def _check_pred_gadget(rng) -> str:
    for _ in range(15):
        n = rng.randint(1, 3)
        m = rng.randint(1, 2)
        clauses = []
        for _ in range(m):
            size = rng.randint(1, 3)
            lits = tuple(
                sorted(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), min(size, n)))
            )
            clauses.append(lits)
        f = reductions.Formula(reductions.THREE_CNF, n, tuple(clauses))
        gadget = reductions.pred_reduction(f)
        reachable = enumeration.is_reachable(gadget.graph, gadget.thresholds, gadget.target)
        assert reachable == (reductions.count_sat(f) > 0), f"PRED mismatch on {f.clauses}"
    return "reachability matches satisfiability on 15 formulas"


def _check_reachable_pred_gadget(rng) -> str:
    f = reductions.Formula(reductions.MONOTONE_2CNF, 2, ((1, 2),))
    gadget = reductions.reachable_pred_reduction(f)
    assert gadget.claimed_count == 3 and gadget.measured_count == 9, (
        f"expected the documented 9-vs-3 discrepancy, got "
        f"{gadget.measured_count} vs {gadget.claimed_count}"
    )
    return "documented 9-vs-3 discrepancy reproduced"


def _check_convergence_time_bounds(rng) -> str:
    for n in (4, 6):
        g = instances.cycle_graph(n)
        for _ in range(60):
            k = instances.random_thresholds(g, rng)
            a = rng.randrange(1 << n)
            report = dynamics.limit_cycle(dynamics.make_step(g, k), a, dynamics.default_guard(g))
            assert report.transient <= n, f"even cycle transient {report.transient} > {n}"
    for n in range(2, 7):
        for g in instances.trees(n):
            for _ in range(40):
                k = instances.random_thresholds(g, rng)
                a = rng.randrange(1 << n)
                report = dynamics.limit_cycle(dynamics.make_step(g, k), a, dynamics.default_guard(g))
                assert report.transient <= n, f"tree transient {report.transient} > {n}"
    for g, k in _random_instances(rng, 25, 7):
        bound = dynamics.convergence_time_bound(g)
        for _ in range(30):
            a = rng.randrange(1 << g.n)
            report = dynamics.limit_cycle(dynamics.make_step(g, k), a, dynamics.default_guard(g))
            assert report.transient <= bound
    return "linear and quadratic convergence-time bounds hold"


def _check_resilience_closed_forms(rng) -> str:
    pairs = []
    for n in (3, 4, 5):
        pairs.append((instances.star_graph(n), "star", range(1, n + 1)))
        pairs.append((instances.complete_graph(n), "complete", range(1, n + 1)))
    pairs.append((instances.path_graph(5), "path", (1, 2)))
    pairs.append((instances.cycle_graph(5), "cycle", (1, 2, 3)))
    for g, family, budgets in pairs:
        for K in budgets:
            mu = resilience.resilience_bruteforce(g, K).mu
            assert mu == resilience.resilience_closed_form(family, g.n, K), (
                f"{family} n={g.n} K={K}: brute force {mu}"
            )
    return "closed forms match brute force"


def _probe_bipartite_linear_time(rng) -> str:
    # Experimental probe only: a linear transient bound on general
    # bipartite graphs is conjectured, not established. The probe reports
    # the worst observed ratio and flags any violation as a finding
    # rather than asserting it away.
    worst = Fraction(0)
    violations = 0
    for g, k in _bipartite_sample(rng, 40, 8):
        for _ in range(30):
            a = rng.randrange(1 << g.n)
            report = dynamics.limit_cycle(dynamics.make_step(g, k), a, dynamics.default_guard(g))
            worst = max(worst, Fraction(report.transient, g.n))
            violations += report.transient > g.n
    note = f"worst transient/n = {worst} over 1200 bipartite trajectories"
    if violations:
        note += f"; {violations} exceeded n (conjecture counterexamples, please report)"
    return note


def _check_greedy_recovery(rng) -> str:
    for _ in range(15):
        g = instances.random_connected_graph(rng.randint(2, 6), rng)
        q = resilience.greedy_upper_bound_q(g)
        l1 = sum(q, Fraction(0))
        assert l1 <= Fraction(g.n, 2), f"greedy allocation costs {l1} > n/2"
        edge_sum = sum(
            min(Fraction(1, g.degrees[i]), Fraction(1, g.degrees[j])) for i, j in g.edges
        )
        assert l1 == edge_sum
        ok, seed = resilience.check_recovery(g, q, g.n)
        assert ok, f"greedy allocation failed to recover from seed {seed}"
    return "greedy allocation recovers within n/2 on 15 graphs"
