"""Problem data model: vessels, shipments, quay geometry, yard side.

An :class:`Instance` is immutable after construction and safe to share across
threads.  All times are nonnegative integers so that every downstream
computation (schedules, bounds, the exported MIP) is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .errors import InstanceInvalid, NoEligibleCrane

INBOUND = "inbound"
OUTBOUND = "outbound"
INBOUND_AVAILABLE = "inbound-available"
OUTBOUND_FIXED = "outbound-fixed"
YARD_FIELDS = ("A", "B", "C")


def canonical_dumps(payload) -> str:
    """Serialize JSON with a stable key order so equal objects give equal bytes."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class Vessel:
    id: int
    weight: int = 1


@dataclass(frozen=True)
class Shipment:
    """A batch of containers stored in one yard block and one vessel bay."""

    id: int
    vessel: int
    direction: str
    bay: int
    containers: int
    qc_time: int
    yc_time: int
    fixed_location: int | None = None
    yt_outbound_time: int | None = None

    @property
    def is_inbound(self) -> bool:
        return self.direction == INBOUND

    @property
    def is_outbound(self) -> bool:
        return self.direction == OUTBOUND


@dataclass(frozen=True)
class YardLocation:
    id: int
    yc: int
    block_group: int
    field: str
    reserved_for: str


@dataclass(frozen=True)
class Instance:
    """Immutable problem data; construction raises InstanceInvalid on bad data."""

    vessels: tuple[Vessel, ...]
    shipments: tuple[Shipment, ...]
    total_bays: int
    qc_count: int
    yc_count: int
    yard_locations: tuple[YardLocation, ...]
    safety_distance: int
    qc_unit_travel: int
    yc_travel: tuple[tuple[int, ...], ...]
    yt_inbound_transfer: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vessels", tuple(self.vessels))
        object.__setattr__(self, "shipments", tuple(self.shipments))
        object.__setattr__(self, "yard_locations", tuple(self.yard_locations))
        object.__setattr__(
            self, "yc_travel", tuple(tuple(row) for row in self.yc_travel)
        )
        object.__setattr__(
            self, "yt_inbound_transfer", dict(self.yt_inbound_transfer)
        )
        object.__setattr__(
            self, "_vessel_by_id", {v.id: v for v in self.vessels}
        )
        object.__setattr__(
            self, "_shipment_by_id", {s.id: s for s in self.shipments}
        )
        object.__setattr__(
            self, "_location_by_id", {k.id: k for k in self.yard_locations}
        )
        object.__setattr__(
            self,
            "_location_index",
            {k.id: pos for pos, k in enumerate(self.yard_locations)},
        )
        self._check()

    # -- lookups -------------------------------------------------------

    def vessel(self, vessel_id: int) -> Vessel:
        return self._vessel_by_id[vessel_id]

    def shipment(self, shipment_id: int) -> Shipment:
        return self._shipment_by_id[shipment_id]

    def location(self, location_id: int) -> YardLocation:
        return self._location_by_id[location_id]

    @property
    def inbound_shipments(self) -> tuple[Shipment, ...]:
        return tuple(s for s in self.shipments if s.is_inbound)

    @property
    def outbound_shipments(self) -> tuple[Shipment, ...]:
        return tuple(s for s in self.shipments if s.is_outbound)

    @property
    def inbound_available_locations(self) -> tuple[YardLocation, ...]:
        return tuple(
            k for k in self.yard_locations if k.reserved_for == INBOUND_AVAILABLE
        )

    def shipments_of_vessel(self, vessel_id: int) -> tuple[Shipment, ...]:
        return tuple(s for s in self.shipments if s.vessel == vessel_id)

    def tyc(self, from_location: int, to_location: int) -> int:
        """Yard-crane travel time between two yard locations (by id)."""
        idx = self._location_index
        return self.yc_travel[idx[from_location]][idx[to_location]]

    def tt(self, location_id: int) -> int:
        """Quay-to-yard transfer time for an inbound-available location."""
        return self.yt_inbound_transfer[location_id]

    def shipment_location(self, shipment_id: int, yard_assignment: Mapping[int, int]) -> int:
        """Yard location of a shipment: the fixed one, or the assigned one."""
        ship = self.shipment(shipment_id)
        if ship.is_outbound:
            return ship.fixed_location
        return yard_assignment[shipment_id]

    # -- validation ----------------------------------------------------

    def _check(self) -> None:
        if self.total_bays < 1:
            raise InstanceInvalid("total_bays must be positive")
        if self.qc_count < 1:
            raise InstanceInvalid("qc_count must be positive")
        if self.yc_count < 1:
            raise InstanceInvalid("yc_count must be positive")
        if self.safety_distance < 0:
            raise InstanceInvalid("safety_distance must be nonnegative")
        if self.qc_unit_travel < 0:
            raise InstanceInvalid("qc_unit_travel must be nonnegative")

        if len(self._vessel_by_id) != len(self.vessels):
            raise InstanceInvalid("duplicate vessel ids")
        for v in self.vessels:
            if v.weight <= 0:
                raise InstanceInvalid(f"vessel {v.id}: weight must be positive")

        if len(self._location_by_id) != len(self.yard_locations):
            raise InstanceInvalid("duplicate yard location ids")
        for k in self.yard_locations:
            if not 1 <= k.yc <= self.yc_count:
                raise InstanceInvalid(f"location {k.id}: unknown yard crane {k.yc}")
            if k.field not in YARD_FIELDS:
                raise InstanceInvalid(f"location {k.id}: unknown field {k.field!r}")
            if k.reserved_for not in (INBOUND_AVAILABLE, OUTBOUND_FIXED):
                raise InstanceInvalid(
                    f"location {k.id}: unknown reservation {k.reserved_for!r}"
                )

        n_locations = len(self.yard_locations)
        if len(self.yc_travel) != n_locations or any(
            len(row) != n_locations for row in self.yc_travel
        ):
            raise InstanceInvalid("yc_travel must be square over yard_locations")
        for a in range(n_locations):
            if self.yc_travel[a][a] != 0:
                raise InstanceInvalid("yc_travel diagonal must be zero")
            for b in range(n_locations):
                if self.yc_travel[a][b] < 0:
                    raise InstanceInvalid("yc_travel times must be nonnegative")
                if self.yc_travel[a][b] != self.yc_travel[b][a]:
                    raise InstanceInvalid("yc_travel must be symmetric")

        inbound_ids = {
            k.id for k in self.yard_locations if k.reserved_for == INBOUND_AVAILABLE
        }
        if set(self.yt_inbound_transfer) != inbound_ids:
            raise InstanceInvalid(
                "yt_inbound_transfer must cover exactly the inbound-available locations"
            )
        for k_id, value in self.yt_inbound_transfer.items():
            if value < 0:
                raise InstanceInvalid(f"transfer time to location {k_id} is negative")

        if len(self._shipment_by_id) != len(self.shipments):
            raise InstanceInvalid("duplicate shipment ids")
        fixed_seen: dict[int, int] = {}
        for s in self.shipments:
            if s.vessel not in self._vessel_by_id:
                raise InstanceInvalid(f"shipment {s.id}: unknown vessel {s.vessel}")
            if s.direction not in (INBOUND, OUTBOUND):
                raise InstanceInvalid(f"shipment {s.id}: unknown direction")
            if not 1 <= s.bay <= self.total_bays:
                raise InstanceInvalid(f"shipment {s.id}: bay {s.bay} outside vessel")
            if s.containers < 1:
                raise InstanceInvalid(f"shipment {s.id}: containers must be positive")
            if s.qc_time < 1 or s.yc_time < 1:
                raise InstanceInvalid(f"shipment {s.id}: handling times must be positive")
            if s.is_inbound:
                if s.fixed_location is not None or s.yt_outbound_time is not None:
                    raise InstanceInvalid(
                        f"shipment {s.id}: inbound shipments carry no fixed location"
                    )
            else:
                if s.fixed_location is None or s.yt_outbound_time is None:
                    raise InstanceInvalid(
                        f"shipment {s.id}: outbound shipments need location and travel"
                    )
                if s.yt_outbound_time < 0:
                    raise InstanceInvalid(f"shipment {s.id}: negative travel time")
                loc = self._location_by_id.get(s.fixed_location)
                if loc is None:
                    raise InstanceInvalid(
                        f"shipment {s.id}: unknown location {s.fixed_location}"
                    )
                if loc.reserved_for != OUTBOUND_FIXED:
                    raise InstanceInvalid(
                        f"shipment {s.id}: location {loc.id} is not outbound-reserved"
                    )
                if loc.id in fixed_seen:
                    raise InstanceInvalid(
                        f"location {loc.id} fixed for two outbound shipments"
                    )
                fixed_seen[loc.id] = s.id
        for k in self.yard_locations:
            if k.reserved_for == OUTBOUND_FIXED and k.id not in fixed_seen:
                raise InstanceInvalid(
                    f"outbound location {k.id} is referenced by no shipment"
                )


# -- quay geometry -----------------------------------------------------


def eligible_qcs(bay: int, total_bays: int, qc_count: int, safety_distance: int) -> frozenset[int]:
    """Quay cranes that can stand at ``bay`` while the others keep clear.

    Crane q has q-1 cranes pinned on its left and qc_count-q on its right;
    neighbours on the shared rail cannot cross and must stay at least
    safety_distance+1 bays apart, which pins q to a window of bays.
    """
    if not 1 <= bay <= total_bays:
        raise InstanceInvalid(f"bay {bay} outside [1, {total_bays}]")
    if qc_count < 1:
        raise InstanceInvalid("qc_count must be positive")
    spacing = safety_distance + 1
    cranes = frozenset(
        q
        for q in range(1, qc_count + 1)
        if (q - 1) * spacing + 1 <= bay <= total_bays - (qc_count - q) * spacing
    )
    if not cranes:
        raise NoEligibleCrane(
            f"no quay crane can service bay {bay} "
            f"(bays={total_bays}, cranes={qc_count}, safety={safety_distance})"
        )
    return cranes


def crane_min_distance(crane_v: int, crane_w: int, safety_distance: int) -> int:
    """Smallest allowed bay gap between two cranes on the shared rail."""
    return (safety_distance + 1) * abs(crane_v - crane_w)


def bay_interference_time(
    bay_i: int,
    bay_j: int,
    crane_v: int,
    crane_w: int,
    safety_distance: int,
    qc_unit_travel: int,
) -> int:
    """Minimum start separation for two distinct shipments on cranes v and w.

    When the shipments' bays leave the cranes closer than their minimum gap,
    the first crane must travel to a safe bay before the second may start;
    the returned value is that travel time, and 0 means no interference.
    """
    if crane_v == crane_w:
        return 0
    gap = crane_min_distance(crane_v, crane_w, safety_distance)
    if crane_v < crane_w and bay_i > bay_j - gap:
        return (bay_i - bay_j + gap) * qc_unit_travel
    if crane_v > crane_w and bay_i < bay_j + gap:
        return (bay_j - bay_i + gap) * qc_unit_travel
    return 0


def interference_time(
    instance: Instance, ship_i: int, ship_j: int, crane_v: int, crane_w: int
) -> int:
    """Start separation needed between shipments ship_i on v and ship_j on w."""
    if ship_i == ship_j:
        return 0
    return bay_interference_time(
        instance.shipment(ship_i).bay,
        instance.shipment(ship_j).bay,
        crane_v,
        crane_w,
        instance.safety_distance,
        instance.qc_unit_travel,
    )


# -- derived tables ----------------------------------------------------


@dataclass(frozen=True)
class DerivedTables:
    """Precomputed eligibility, distances, interference and empty travel."""

    eligible_qcs: Mapping[int, frozenset[int]]
    crane_min_distance: tuple[tuple[int, ...], ...]
    interference_time: Mapping[tuple[int, int, int, int], int]
    interference_set: tuple[tuple[int, int, int, int], ...]
    qc_empty_travel: Mapping[tuple[int, int], int]
    yc_empty_travel: Mapping[tuple[int, int], int]

    def canonical_json(self) -> str:
        payload = {
            "eligible_qcs": {
                str(i): sorted(qcs) for i, qcs in sorted(self.eligible_qcs.items())
            },
            "crane_min_distance": [list(row) for row in self.crane_min_distance],
            "interference_time": [
                [i, j, v, w, t]
                for (i, j, v, w), t in sorted(self.interference_time.items())
            ],
            "interference_set": [list(t) for t in self.interference_set],
            "qc_empty_travel": [
                [i, j, t] for (i, j), t in sorted(self.qc_empty_travel.items())
            ],
            "yc_empty_travel": [
                [k, l, t] for (k, l), t in sorted(self.yc_empty_travel.items())
            ],
        }
        return canonical_dumps(payload)


def build_derived(instance: Instance) -> DerivedTables:
    """Populate every derived table; rejects instances with unreachable bays."""
    eligible = {
        s.id: eligible_qcs(
            s.bay, instance.total_bays, instance.qc_count, instance.safety_distance
        )
        for s in instance.shipments
    }

    size = instance.qc_count + 1
    distance = tuple(
        tuple(
            crane_min_distance(v, w, instance.safety_distance) if v and w else 0
            for w in range(size)
        )
        for v in range(size)
    )

    interference: dict[tuple[int, int, int, int], int] = {}
    ships = sorted(instance.shipments, key=lambda s: s.id)
    for a in ships:
        for b in ships:
            if a.id == b.id:
                continue
            for v in sorted(eligible[a.id]):
                for w in sorted(eligible[b.id]):
                    t = bay_interference_time(
                        a.bay,
                        b.bay,
                        v,
                        w,
                        instance.safety_distance,
                        instance.qc_unit_travel,
                    )
                    if t > 0:
                        interference[(a.id, b.id, v, w)] = t
    theta = tuple(
        key for key in sorted(interference) if key[0] < key[1]
    )

    qc_empty = {
        (a.id, b.id): instance.qc_unit_travel * abs(a.bay - b.bay)
        for a in ships
        for b in ships
    }
    yc_empty = {
        (a.id, b.id): instance.tyc(a.id, b.id)
        for a in instance.yard_locations
        for b in instance.yard_locations
    }

    return DerivedTables(
        eligible_qcs=eligible,
        crane_min_distance=distance,
        interference_time=interference,
        interference_set=theta,
        qc_empty_travel=qc_empty,
        yc_empty_travel=yc_empty,
    )


# -- canonical instance file format -------------------------------------


def instance_to_payload(instance: Instance) -> dict:
    """Instance as a plain JSON-ready dictionary (canonical file format)."""
    tt_vector = [
        instance.yt_inbound_transfer.get(k.id, 0) for k in instance.yard_locations
    ]
    return {
        "vessels": [{"id": v.id, "weight": v.weight} for v in instance.vessels],
        "shipments": [
            {
                "id": s.id,
                "vessel": s.vessel,
                "direction": s.direction,
                "bay": s.bay,
                "containers": s.containers,
                "qc_time": s.qc_time,
                "yc_time": s.yc_time,
                **(
                    {
                        "fixed_location": s.fixed_location,
                        "yt_outbound_time": s.yt_outbound_time,
                    }
                    if s.is_outbound
                    else {}
                ),
            }
            for s in instance.shipments
        ],
        "yard_locations": [
            {
                "id": k.id,
                "yc": k.yc,
                "block_group": k.block_group,
                "field": k.field,
                "reserved_for": k.reserved_for,
            }
            for k in instance.yard_locations
        ],
        "geometry": {
            "B_T": instance.total_bays,
            "QC_T": instance.qc_count,
            "yc_count": instance.yc_count,
            "delta": instance.safety_distance,
            "s_qc": instance.qc_unit_travel,
        },
        "travel": {
            "tyc": [list(row) for row in instance.yc_travel],
            "tt": tt_vector,
        },
    }


def instance_from_payload(payload: Mapping) -> Instance:
    """Build (and validate) an Instance from the canonical dictionary form."""
    try:
        geometry = payload["geometry"]
        travel = payload["travel"]
        locations = tuple(
            YardLocation(
                id=k["id"],
                yc=k["yc"],
                block_group=k["block_group"],
                field=k["field"],
                reserved_for=k["reserved_for"],
            )
            for k in payload["yard_locations"]
        )
        tt_vector = travel["tt"]
        transfer = {
            k.id: tt_vector[pos]
            for pos, k in enumerate(locations)
            if k.reserved_for == INBOUND_AVAILABLE
        }
        return Instance(
            vessels=tuple(
                Vessel(id=v["id"], weight=v["weight"]) for v in payload["vessels"]
            ),
            shipments=tuple(
                Shipment(
                    id=s["id"],
                    vessel=s["vessel"],
                    direction=s["direction"],
                    bay=s["bay"],
                    containers=s["containers"],
                    qc_time=s["qc_time"],
                    yc_time=s["yc_time"],
                    fixed_location=s.get("fixed_location"),
                    yt_outbound_time=s.get("yt_outbound_time"),
                )
                for s in payload["shipments"]
            ),
            total_bays=geometry["B_T"],
            qc_count=geometry["QC_T"],
            yc_count=geometry["yc_count"],
            yard_locations=locations,
            safety_distance=geometry["delta"],
            qc_unit_travel=geometry["s_qc"],
            yc_travel=tuple(tuple(row) for row in travel["tyc"]),
            yt_inbound_transfer=transfer,
        )
    except (KeyError, IndexError, TypeError) as exc:
        raise InstanceInvalid(f"malformed instance file: {exc}") from exc


def instance_to_json(instance: Instance) -> str:
    return canonical_dumps(instance_to_payload(instance))


def instance_from_json(text: str) -> Instance:
    return instance_from_payload(json.loads(text))


def read_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as handle:
        return instance_from_payload(json.load(handle))


def write_instance(path, instance: Instance) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(instance_to_json(instance))
