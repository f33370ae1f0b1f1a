"""Instance model: eligibility, distances, interference, derived tables, I/O."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ipctp.errors import InstanceInvalid, NoEligibleCrane
from ipctp.instance import (
    INBOUND,
    OUTBOUND_FIXED,
    Instance,
    Shipment,
    Vessel,
    YardLocation,
    bay_interference_time,
    build_derived,
    crane_min_distance,
    eligible_qcs,
    instance_from_json,
    instance_to_json,
    interference_time,
)

from conftest import mixed_instance, single_inbound_instance


class TestEligibleQcs:
    def test_leftmost_bays_single_crane(self):
        assert eligible_qcs(1, 9, 3, 1) == {1}
        assert eligible_qcs(2, 9, 3, 1) == {1}

    def test_rightmost_bays_single_crane(self):
        assert eligible_qcs(8, 9, 3, 1) == {3}
        assert eligible_qcs(9, 9, 3, 1) == {3}

    def test_shared_bays(self):
        assert eligible_qcs(3, 9, 3, 1) == {1, 2}
        assert eligible_qcs(4, 9, 3, 1) == {1, 2}

    def test_center_bay_all_cranes(self):
        assert eligible_qcs(5, 9, 3, 1) == {1, 2, 3}

    def test_no_crane_fits(self):
        # Three cranes spaced two bays apart cannot all fit along 4 bays.
        with pytest.raises(NoEligibleCrane):
            eligible_qcs(1, 4, 3, 1)

    def test_bay_out_of_range(self):
        with pytest.raises(InstanceInvalid):
            eligible_qcs(0, 9, 3, 1)

    @given(
        bays=st.integers(4, 30),
        extra=st.integers(1, 10),
        cranes=st.integers(1, 4),
        safety=st.integers(0, 2),
    )
    @settings(max_examples=200)
    def test_wider_vessel_never_shrinks_eligibility(self, bays, extra, cranes, safety):
        for bay in range(1, bays + 1):
            try:
                narrow = eligible_qcs(bay, bays, cranes, safety)
            except NoEligibleCrane:
                continue
            wide = eligible_qcs(bay, bays + extra, cranes, safety)
            assert narrow <= wide

    @given(bays=st.integers(4, 30), cranes=st.integers(1, 4), safety=st.integers(0, 2))
    @settings(max_examples=200)
    def test_every_crane_covers_its_own_block(self, bays, cranes, safety):
        if bays < cranes * (safety + 1):
            return
        covered = set()
        for bay in range(1, bays + 1):
            covered |= eligible_qcs(bay, bays, cranes, safety)
        assert covered == set(range(1, cranes + 1))


class TestCraneMinDistance:
    def test_adjacent(self):
        assert crane_min_distance(1, 2, 1) == 2

    def test_self(self):
        assert crane_min_distance(3, 3, 1) == 0

    def test_two_apart(self):
        assert crane_min_distance(1, 3, 1) == 4

    @given(v=st.integers(1, 6), w=st.integers(1, 6), safety=st.integers(0, 3))
    def test_symmetric(self, v, w, safety):
        assert crane_min_distance(v, w, safety) == crane_min_distance(w, v, safety)


class TestInterferenceTime:
    def test_adjacent_cranes_one_bay_apart(self):
        assert bay_interference_time(5, 4, 1, 2, 1, 3) == 9

    def test_far_bays_no_interference(self):
        assert bay_interference_time(1, 9, 1, 3, 1, 3) == 0

    def test_safe_side_is_zero(self):
        # First crane well left of the second: exactly at the minimum gap.
        assert bay_interference_time(2, 4, 1, 2, 1, 3) == 0

    def test_same_crane_never_interferes(self):
        for bay_i in range(1, 9):
            for bay_j in range(1, 9):
                assert bay_interference_time(bay_i, bay_j, 2, 2, 1, 3) == 0

    def test_same_shipment_is_zero(self):
        instance = single_inbound_instance()
        assert interference_time(instance, 1, 1, 1, 1) == 0

    @given(
        bay_i=st.integers(1, 12),
        bay_j=st.integers(1, 12),
        v=st.integers(1, 4),
        w=st.integers(1, 4),
        safety=st.integers(0, 2),
        unit=st.integers(1, 5),
    )
    @settings(max_examples=300)
    def test_swap_symmetry(self, bay_i, bay_j, v, w, safety, unit):
        assert bay_interference_time(
            bay_i, bay_j, v, w, safety, unit
        ) == bay_interference_time(bay_j, bay_i, w, v, safety, unit)

    @given(
        bay_i=st.integers(1, 12),
        bay_j=st.integers(1, 12),
        v=st.integers(1, 4),
        w=st.integers(1, 4),
    )
    def test_nonnegative(self, bay_i, bay_j, v, w):
        assert bay_interference_time(bay_i, bay_j, v, w, 1, 3) >= 0


class TestBuildDerived:
    def test_single_shipment_has_empty_interference_set(self):
        derived = build_derived(single_inbound_instance())
        assert derived.interference_set == ()

    def test_two_close_shipments_interfere_on_both_crane_orders(self):
        # Bays 4 and 5 with two eligible cranes produce both orientations.
        instance = mixed_instance()
        derived = build_derived(instance)
        tuples = {(i, j, v, w) for (i, j, v, w) in derived.interference_set}
        assert (1, 2, 1, 2) in tuples
        assert (1, 2, 2, 1) in tuples
        assert derived.interference_time[(1, 2, 1, 2)] == 3
        assert derived.interference_time[(1, 2, 2, 1)] == 9

    def test_maximally_separated_bays_do_not_interfere(self):
        instance = single_inbound_instance()
        wide = Instance(
            vessels=instance.vessels,
            shipments=(
                Shipment(id=1, vessel=1, direction=INBOUND, bay=1,
                         containers=2, qc_time=5, yc_time=5),
                Shipment(id=2, vessel=1, direction=INBOUND, bay=9,
                         containers=2, qc_time=5, yc_time=5),
            ),
            total_bays=9,
            qc_count=3,
            yc_count=1,
            yard_locations=instance.yard_locations,
            safety_distance=1,
            qc_unit_travel=3,
            yc_travel=instance.yc_travel,
            yt_inbound_transfer=instance.yt_inbound_transfer,
        )
        derived = build_derived(wide)
        assert derived.interference_set == ()

    def test_theta_is_ordered_and_positive(self, mixed):
        instance, derived = mixed
        for i, j, v, w in derived.interference_set:
            assert i < j
            assert derived.interference_time[(i, j, v, w)] > 0
            assert v in derived.eligible_qcs[i]
            assert w in derived.eligible_qcs[j]

    def test_crane_distance_table(self, mixed):
        _, derived = mixed
        assert derived.crane_min_distance[1][2] == 2
        assert derived.crane_min_distance[2][1] == 2
        assert derived.crane_min_distance[1][1] == 0

    def test_qc_empty_travel(self, mixed):
        instance, derived = mixed
        assert derived.qc_empty_travel[(1, 2)] == 3  # bays 4 -> 5
        assert derived.qc_empty_travel[(1, 3)] == 9  # bays 4 -> 1
        assert derived.qc_empty_travel[(1, 1)] == 0

    def test_yc_empty_travel_matches_matrix(self, mixed):
        instance, derived = mixed
        assert derived.yc_empty_travel[(1, 2)] == instance.tyc(1, 2)
        assert derived.yc_empty_travel[(5, 1)] == 0

    def test_deterministic_byte_for_byte(self):
        first = build_derived(mixed_instance()).canonical_json()
        second = build_derived(mixed_instance()).canonical_json()
        assert first == second


class TestInstanceValidation:
    def test_bay_outside_vessel(self):
        base = single_inbound_instance()
        with pytest.raises(InstanceInvalid):
            Instance(
                vessels=base.vessels,
                shipments=(
                    Shipment(id=1, vessel=1, direction=INBOUND, bay=7,
                             containers=2, qc_time=8, yc_time=10),
                ),
                total_bays=2,
                qc_count=1,
                yc_count=1,
                yard_locations=base.yard_locations,
                safety_distance=1,
                qc_unit_travel=3,
                yc_travel=base.yc_travel,
                yt_inbound_transfer=base.yt_inbound_transfer,
            )

    def test_asymmetric_travel_rejected(self):
        base = mixed_instance()
        bad = [list(row) for row in base.yc_travel]
        bad[0][1] = 7
        with pytest.raises(InstanceInvalid):
            Instance(
                vessels=base.vessels,
                shipments=base.shipments,
                total_bays=base.total_bays,
                qc_count=base.qc_count,
                yc_count=base.yc_count,
                yard_locations=base.yard_locations,
                safety_distance=base.safety_distance,
                qc_unit_travel=base.qc_unit_travel,
                yc_travel=tuple(tuple(row) for row in bad),
                yt_inbound_transfer=base.yt_inbound_transfer,
            )

    def test_nonpositive_weight_rejected(self):
        base = single_inbound_instance()
        with pytest.raises(InstanceInvalid):
            Instance(
                vessels=(Vessel(1, 0),),
                shipments=base.shipments,
                total_bays=base.total_bays,
                qc_count=base.qc_count,
                yc_count=base.yc_count,
                yard_locations=base.yard_locations,
                safety_distance=base.safety_distance,
                qc_unit_travel=base.qc_unit_travel,
                yc_travel=base.yc_travel,
                yt_inbound_transfer=base.yt_inbound_transfer,
            )

    def test_inbound_with_fixed_location_rejected(self):
        base = single_inbound_instance()
        with pytest.raises(InstanceInvalid):
            Instance(
                vessels=base.vessels,
                shipments=(
                    Shipment(id=1, vessel=1, direction=INBOUND, bay=1,
                             containers=2, qc_time=8, yc_time=10,
                             fixed_location=1, yt_outbound_time=2),
                ),
                total_bays=base.total_bays,
                qc_count=base.qc_count,
                yc_count=base.yc_count,
                yard_locations=base.yard_locations,
                safety_distance=base.safety_distance,
                qc_unit_travel=base.qc_unit_travel,
                yc_travel=base.yc_travel,
                yt_inbound_transfer=base.yt_inbound_transfer,
            )

    def test_unreferenced_outbound_location_rejected(self):
        base = single_inbound_instance()
        with pytest.raises(InstanceInvalid):
            Instance(
                vessels=base.vessels,
                shipments=base.shipments,
                total_bays=base.total_bays,
                qc_count=base.qc_count,
                yc_count=base.yc_count,
                yard_locations=base.yard_locations
                + (YardLocation(9, 1, 1, "C", OUTBOUND_FIXED),),
                safety_distance=base.safety_distance,
                qc_unit_travel=base.qc_unit_travel,
                yc_travel=tuple(
                    tuple(list(row) + [1]) for row in base.yc_travel
                ) + ((1, 0),),
                yt_inbound_transfer=base.yt_inbound_transfer,
            )


class TestInstanceJson:
    def test_round_trip_is_identity(self):
        instance = mixed_instance()
        text = instance_to_json(instance)
        again = instance_from_json(text)
        assert again == instance
        assert instance_to_json(again) == text

    def test_geometry_keys(self):
        import json

        payload = json.loads(instance_to_json(mixed_instance()))
        assert set(payload) == {
            "vessels", "shipments", "yard_locations", "geometry", "travel",
        }
        assert set(payload["geometry"]) == {"B_T", "QC_T", "yc_count", "delta", "s_qc"}
        assert set(payload["travel"]) == {"tyc", "tt"}
