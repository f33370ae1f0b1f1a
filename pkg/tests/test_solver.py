"""Branch-and-bound solver: propagation, bounds, optimality, anytime contract."""

import random
import time
from dataclasses import replace

import pytest

from ipctp.generator import GenConfig, derive_seed, generate
from ipctp.instance import build_derived
from ipctp.oracle import brute_force
from ipctp.schedule import (
    Decisions,
    I_FIRST,
    J_FIRST,
    compute_schedule,
    solution_to_json,
    validate,
)
from ipctp.solver import (
    SearchNode,
    SolveParams,
    lower_bound,
    propagate,
    root_node,
    solve,
)

from conftest import (
    interference_pair_decisions,
    interference_pair_instance,
    single_inbound_instance,
    single_outbound_instance,
)


def _random_instance(shipments, ratio, bays, seed, ul=2):
    config = GenConfig(ul_ratio=ul, bays=bays, shipments=shipments, inbound_ratio=ratio)
    return generate(
        GenConfig(
            ul_ratio=ul,
            bays=bays,
            shipments=shipments,
            inbound_ratio=ratio,
            seed=derive_seed(seed, config, 0),
        )
    )


class TestPropagate:
    def test_inbound_transfer_chain(self):
        instance = single_inbound_instance(tt=5)
        derived = build_derived(instance)
        node = propagate(instance, derived, root_node(instance, derived))
        # yard crane task waits for quay handling plus the transfer
        assert node.est[1] >= 8 + 5

    def test_sequenced_pair_pushes_successor(self):
        instance = interference_pair_instance()
        derived = build_derived(instance)
        root = root_node(instance, derived)
        node = replace(
            root,
            yard={1: 1, 2: 2},
            qc_of={1: 1, 2: 1},  # both on crane 1
            qc_prefix={1: (1,), 2: ()},
        )
        tightened = propagate(instance, derived, node)
        # successor est >= predecessor end + empty travel between bays 5 and 4
        assert tightened.est[2] >= 0 + 4 + 3

    def test_decided_order_raises_successor(self):
        instance = interference_pair_instance()
        derived = build_derived(instance)
        root = root_node(instance, derived)
        node = replace(
            root,
            yard={1: 1, 2: 2},
            qc_of={1: 1, 2: 2},
            qc_prefix={1: (1,), 2: (2,)},
            yc_prefix={1: (1,), 2: (2,)},
            order={(1, 2, 1, 2): I_FIRST},
        )
        tightened = propagate(instance, derived, node)
        assert tightened.est[2] >= 4 + 9  # handling of the first plus separation
        schedule = compute_schedule(
            instance, derived, interference_pair_decisions(I_FIRST)
        )
        assert tightened.est[2] == schedule.qc_start[2]

    def test_one_sided_disjunction_is_forced(self):
        base = interference_pair_instance()
        slow_yard = replace(base.shipments[1], yc_time=20)
        instance = replace(base, shipments=(base.shipments[0], slow_yard))
        derived = build_derived(instance)
        node = replace(
            root_node(instance, derived),
            yard={1: 1, 2: 2},
            qc_of={1: 1, 2: 2},
            qc_prefix={1: (1,), 2: (2,)},
            yc_prefix={1: (1,), 2: (2,)},
        )
        # With this cap only the order that schedules shipment 2 first survives.
        tightened = propagate(instance, derived, node, incumbent=30)
        assert tightened is not None
        assert tightened.order == {(1, 2, 1, 2): J_FIRST}

    def test_impossible_windows_prune(self):
        instance = interference_pair_instance()
        derived = build_derived(instance)
        node = replace(
            root_node(instance, derived),
            yard={1: 1, 2: 2},
            qc_of={1: 1, 2: 2},
            qc_prefix={1: (1,), 2: (2,)},
            yc_prefix={1: (1,), 2: (2,)},
        )
        # Optimum of this instance is 27; a cap below it wipes both orders.
        assert propagate(instance, derived, node, incumbent=27) is None



    def test_same_crane_disjunction_forced_by_cap(self):
        base = interference_pair_instance()
        slow_yard = replace(base.shipments[1], yc_time=20)
        instance = replace(base, shipments=(base.shipments[0], slow_yard))
        derived = build_derived(instance)
        node = replace(
            root_node(instance, derived),
            yard={1: 1, 2: 2},
            qc_of={1: 1, 2: 1},  # both on the same quay crane
            yc_prefix={1: (1,), 2: (2,)},
        )
        relaxed = propagate(instance, derived, node)
        assert relaxed.est[0] == 0  # either order still open
        capped = propagate(instance, derived, node, incumbent=30)
        assert capped is not None
        # only "shipment 2 first" beats the cap: 6 handling + 3 empty travel
        assert capped.est[0] >= 9


class TestLowerBound:
    def test_root_of_single_chain_is_exact(self):
        instance = single_inbound_instance(tt=5)
        derived = build_derived(instance)
        assert lower_bound(instance, derived, root_node(instance, derived)) == 23

    def test_admissible_at_root(self):
        for seed in range(8):
            instance = _random_instance(3, 0.5, 4, seed=seed)
            derived = build_derived(instance)
            optimum = brute_force(instance, derived).best_objective
            root = propagate(instance, derived, root_node(instance, derived))
            assert lower_bound(instance, derived, root) <= optimum

    def test_fully_decided_node_equals_schedule_objective(self):
        instance = interference_pair_instance()
        derived = build_derived(instance)
        decisions = interference_pair_decisions(I_FIRST)
        node = replace(
            root_node(instance, derived),
            yard=dict(decisions.yard_assignment),
            qc_of=decisions.resolved_qc_assignment(),
            qc_prefix={q: tuple(s) for q, s in decisions.qc_sequences.items()},
            yc_prefix={c: tuple(s) for c, s in decisions.yc_sequences.items()},
            order=dict(decisions.interference_order),
        )
        tightened = propagate(instance, derived, node)
        schedule = compute_schedule(instance, derived, decisions)
        assert lower_bound(instance, derived, tightened) == schedule.objective


class TestSolve:
    def test_single_shipment_proven_fast(self):
        for instance in (single_inbound_instance(), single_outbound_instance()):
            derived = build_derived(instance)
            started = time.monotonic()
            report, solution = solve(instance, derived, SolveParams(time_limit=60))
            assert time.monotonic() - started < 1.0
            assert report.status == "optimal"
            assert report.best_objective == 23
            assert report.gap_percent == 0.0
            assert solution.status == "optimal"

    def test_matches_oracle_on_random_instances(self):
        for seed in range(12):
            instance = _random_instance(
                shipments=3 + seed % 3,
                ratio=(0.2, 0.5)[seed % 2],
                bays=(4, 6, 8)[seed % 3],
                seed=seed,
            )
            derived = build_derived(instance)
            oracle_best = brute_force(instance, derived, limit=3_000_000)
            report, solution = solve(instance, derived, SolveParams(time_limit=120))
            assert report.status == "optimal"
            assert report.best_objective == oracle_best.best_objective
            assert validate(instance, derived, solution) == []

    def test_incumbent_trace_strictly_decreases(self):
        instance = _random_instance(6, 0.5, 6, seed=40)
        derived = build_derived(instance)
        report, _ = solve(instance, derived, SolveParams(time_limit=20))
        objectives = [obj for _, obj in report.incumbent_trace]
        assert objectives, "no incumbent recorded"
        assert all(a > b for a, b in zip(objectives, objectives[1:]))
        assert objectives[-1] == report.best_objective

    def test_gap_zero_iff_optimal(self):
        instance = _random_instance(4, 0.5, 4, seed=41)
        derived = build_derived(instance)
        report, _ = solve(instance, derived, SolveParams(time_limit=60))
        assert report.status == "optimal"
        assert report.gap_percent == 0.0
        assert report.lower_bound == report.best_objective

    def test_timeout_keeps_best_incumbent_and_admissible_bound(self):
        instance = _random_instance(15, 0.5, 6, seed=42)
        derived = build_derived(instance)
        report, solution = solve(instance, derived, SolveParams(time_limit=2))
        assert report.status in ("feasible", "unknown")
        if report.best_objective is not None:
            assert solution is not None
            assert validate(instance, derived, solution) == []
            assert report.lower_bound <= report.best_objective
            assert report.gap_percent is not None and report.gap_percent > 0

    def test_workers_agree_with_single_worker(self):
        for seed in (50, 51, 52):
            instance = _random_instance(4, 0.5, 6, seed=seed)
            derived = build_derived(instance)
            solo, _ = solve(instance, derived, SolveParams(time_limit=60, workers=1))
            multi, _ = solve(instance, derived, SolveParams(time_limit=60, workers=3))
            assert solo.status == multi.status == "optimal"
            assert solo.best_objective == multi.best_objective

    def test_single_worker_runs_are_reproducible(self):
        instance = _random_instance(5, 0.5, 4, seed=60)
        derived = build_derived(instance)
        params = SolveParams(time_limit=60, seed=7)
        report_a, solution_a = solve(instance, derived, params)
        report_b, solution_b = solve(instance, derived, params)
        assert solution_to_json(solution_a) == solution_to_json(solution_b)
        assert report_a.best_objective == report_b.best_objective
        assert report_a.lower_bound == report_b.lower_bound
        assert report_a.status == report_b.status
        assert report_a.nodes == report_b.nodes
        assert report_a.propagations == report_b.propagations
        assert [obj for _, obj in report_a.incumbent_trace] == [
            obj for _, obj in report_b.incumbent_trace
        ]

    def test_smallest_grid_configuration_proves_quickly(self):
        # ul 2, 4 bays, 5 shipments: optimality well under a minute.
        config = GenConfig(ul_ratio=2, bays=4, shipments=5, inbound_ratio=0.2)
        instance = generate(
            GenConfig(
                ul_ratio=2, bays=4, shipments=5, inbound_ratio=0.2,
                seed=derive_seed(2026, config, 0),
            )
        )
        derived = build_derived(instance)
        started = time.monotonic()
        report, _ = solve(instance, derived, SolveParams(time_limit=60))
        assert time.monotonic() - started < 60
        assert report.status == "optimal"


class TestCraneChoice:
    """Overlapping eligibility windows: crane assignment is a real decision."""

    def test_matches_oracle_with_crane_choice(self):
        from conftest import wide_eligibility_instance

        rng = random.Random(909)
        exercised = 0
        for trial in range(25):
            instance = wide_eligibility_instance(rng, shipments=rng.choice((2, 3, 4)))
            derived = build_derived(instance)
            if any(len(e) > 1 for e in derived.eligible_qcs.values()):
                exercised += 1
            oracle_best = brute_force(instance, derived, limit=3_000_000)
            report, solution = solve(instance, derived, SolveParams(time_limit=120))
            assert report.status == "optimal"
            assert report.best_objective == oracle_best.best_objective
            assert validate(instance, derived, solution) == []
        assert exercised >= 10


class TestWeightedVessels:
    def test_matches_oracle_with_unequal_weights(self):
        from dataclasses import replace as dc_replace

        from ipctp.instance import Vessel

        for seed in range(6):
            config = GenConfig(ul_ratio=2, bays=6, shipments=4,
                               inbound_ratio=0.5, vessels=2)
            base = generate(
                GenConfig(ul_ratio=2, bays=6, shipments=4, inbound_ratio=0.5,
                          vessels=2, seed=derive_seed(33, config, seed))
            )
            weighted = dc_replace(
                base, vessels=(Vessel(1, 2), Vessel(2, 3))
            )
            derived = build_derived(weighted)
            oracle_best = brute_force(weighted, derived, limit=3_000_000)
            report, solution = solve(weighted, derived, SolveParams(time_limit=120))
            assert report.status == "optimal"
            assert report.best_objective == oracle_best.best_objective
            assert validate(weighted, derived, solution) == []

    def test_scaling_weights_preserves_the_optimal_decisions(self):
        from dataclasses import replace as dc_replace

        from ipctp.instance import Vessel

        config = GenConfig(ul_ratio=2, bays=4, shipments=3, inbound_ratio=0.5)
        base = generate(
            GenConfig(ul_ratio=2, bays=4, shipments=3, inbound_ratio=0.5,
                      seed=derive_seed(34, config, 0))
        )
        derived = build_derived(base)
        plain = brute_force(base, derived)
        scaled_instance = dc_replace(base, vessels=(Vessel(1, 5),))
        scaled = brute_force(scaled_instance, build_derived(scaled_instance))
        assert scaled.best_objective == 5 * plain.best_objective
        assert scaled.best_solution.yard_assignment == dict(
            plain.best_solution.yard_assignment
        )
        assert scaled.best_solution.qc_sequences == {
            q: tuple(s) for q, s in plain.best_solution.qc_sequences.items()
        }


class TestSafetyDistanceVariants:
    def test_matches_oracle_for_tight_and_wide_spacing(self):
        from conftest import wide_eligibility_instance
        from ipctp.errors import InstanceInvalid

        rng = random.Random(5150)
        checked = {0: 0, 2: 0}
        trial = 0
        while min(checked.values()) < 4 and trial < 60:
            trial += 1
            base = wide_eligibility_instance(rng, shipments=rng.choice((2, 3)))
            spacing = rng.choice((0, 2))
            try:
                instance = replace(base, safety_distance=spacing)
                derived = build_derived(instance)
            except InstanceInvalid:
                continue  # wide spacing can strand a bay with no crane
            oracle_best = brute_force(instance, derived, limit=3_000_000)
            report, solution = solve(instance, derived, SolveParams(time_limit=120))
            assert report.status == "optimal"
            assert report.best_objective == oracle_best.best_objective
            assert validate(instance, derived, solution) == []
            checked[spacing] += 1
        assert min(checked.values()) >= 4
