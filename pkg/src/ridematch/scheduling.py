"""Tour pricing: single-request insertion and two-vehicle merge plans.

A plan is priced by simulating the tour stop by stop from the vehicle's
current position.  Every stop must respect the owning request's window
(pickup by ``q_r``, dropoff by ``l_r``) and the running occupancy must
never exceed capacity.  The cost of a feasible plan is the time from the
current update instant until the last stop is completed.
"""

from __future__ import annotations

import math
from typing import Iterator, Mapping, NamedTuple

from .model import DROPOFF, PICKUP, Request, Stop, Tour, Vehicle
from .network import RoadNetwork


class PlanResult(NamedTuple):
    feasible: bool
    cost: int | None
    tour: Tour | None


INFEASIBLE = PlanResult(False, None, None)


def check_z1(pickup_arrival: int, q_r: int) -> bool:
    """Pickup no later than the latest pickup time."""
    return pickup_arrival <= q_r


def check_z2(dropoff_arrival: int, l_r: int) -> bool:
    """Dropoff no later than the latest dropoff time."""
    return dropoff_arrival <= l_r


def tour_schedule(net: RoadNetwork, start_node: int, depart_t: int,
                  tour: Tour) -> tuple[tuple[int, ...], int] | None:
    """Arrival times at each stop, ignoring windows and capacity.

    Returns ``(arrivals, completion_time)`` with zero dwell at stops, or
    None when some leg has no route.
    """
    arrivals = []
    node, clock = start_node, depart_t
    for stop in tour:
        leg = net.shortest_travel_time(node, stop.node)
        if leg is None:
            return None
        clock += leg
        arrivals.append(clock)
        node = stop.node
    return tuple(arrivals), clock


def evaluate_tour(net: RoadNetwork, t: int, start_node: int, depart_t: int,
                  tour: Tour, onboard_count: int, capacity: int,
                  requests_by_id: Mapping[int, Request],
                  ) -> tuple[int, tuple[int, ...]] | None:
    """Price a tour against windows and capacity.

    Returns ``(cost, arrivals)`` where cost is completion time minus ``t``,
    or None when any window or the capacity bound is violated.  An empty
    tour costs 0.
    """
    arrivals = []
    node, clock, load = start_node, depart_t, onboard_count
    for stop in tour:
        leg = net.shortest_travel_time(node, stop.node)
        if leg is None:
            return None
        clock += leg
        req = requests_by_id[stop.request_id]
        if stop.kind == PICKUP:
            if not check_z1(clock, req.q_r):
                return None
            load += 1
            if load > capacity:
                return None
        else:
            if not check_z2(clock, req.l_r):
                return None
            load -= 1
        arrivals.append(clock)
        node = stop.node
    if not tour:
        return 0, ()
    return clock - t, tuple(arrivals)


def insertion_candidates(tour: Tour, pickup: Stop,
                         dropoff: Stop) -> Iterator[Tour]:
    """All tours that keep the existing stop order and add the new pair.

    The pickup goes to slot ``i`` (0..L) and the dropoff to any later slot
    ``j``; candidates come out in ascending ``(i, j)`` order.
    """
    L = len(tour)
    for i in range(L + 1):
        with_pickup = tour[:i] + (pickup,) + tour[i:]
        for j in range(i + 1, L + 2):
            yield with_pickup[:j] + (dropoff,) + with_pickup[j:]


def exhaustive_candidates(tour: Tour, pickup: Stop,
                          dropoff: Stop) -> Iterator[Tour]:
    """Every precedence-valid ordering of the old stops plus the new pair.

    Unlike plain insertion this may reorder the existing stops; pickups
    still precede their dropoffs.  Used for short tours where complete
    enumeration is cheap.
    """
    stops = list(tour) + [pickup, dropoff]
    n = len(stops)
    pickup_pos = {s.request_id: k for k, s in enumerate(stops)
                  if s.kind == PICKUP}

    def placeable(k: int, used: set[int]) -> bool:
        s = stops[k]
        if s.kind == DROPOFF and s.request_id in pickup_pos:
            return pickup_pos[s.request_id] in used
        return True

    def walk(prefix: list[Stop], used: set[int]) -> Iterator[Tour]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in range(n):
            if k not in used and placeable(k, used):
                prefix.append(stops[k])
                used.add(k)
                yield from walk(prefix, used)
                used.remove(k)
                prefix.pop()

    yield from walk([], set())


# tours with at most this many distinct requests are priced exhaustively
EXHAUSTIVE_REQUEST_LIMIT = 2


def path_cost(net: RoadNetwork, t: int, vehicle: Vehicle, request: Request,
              requests_by_id: Mapping[int, Request]) -> PlanResult:
    """Best feasible tour serving the vehicle's plan plus one new request.

    Tours with at most two distinct requests are re-optimised by complete
    enumeration; longer ones keep their stop order and take the cheapest
    insertion of the new pickup/dropoff pair.  Ties keep the first
    candidate in enumeration order.
    """
    if vehicle.available_capacity < 1:
        return INFEASIBLE
    pickup = Stop(PICKUP, request.id, request.origin)
    dropoff = Stop(DROPOFF, request.id, request.destination)
    lookup = _with_request(requests_by_id, request)
    distinct = {s.request_id for s in vehicle.tour}
    if len(distinct) <= EXHAUSTIVE_REQUEST_LIMIT:
        candidates = exhaustive_candidates(vehicle.tour, pickup, dropoff)
    else:
        candidates = insertion_candidates(vehicle.tour, pickup, dropoff)
    return _best_plan(net, t, vehicle.location,
                      max(t, vehicle.ready_at), candidates,
                      len(vehicle.onboard), vehicle.capacity, lookup)


def split_tour(tour: Tour) -> tuple[Tour, Tour]:
    """Cut a tour into a first and second part at the middle stop."""
    cut = math.ceil(len(tour) / 2)
    return tour[:cut], tour[cut:]


def split_merge_candidates(recipient_tour: Tour, part1: Tour,
                           part2: Tour) -> Iterator[Tour]:
    """All merges of a split donor tour into the recipient's tour.

    Both parts are inserted as contiguous blocks, the second at or after
    the end of the first, with the recipient's own stop order preserved.
    Candidates come out in ascending ``(i, j)`` order.
    """
    for i in range(len(recipient_tour) + 1):
        with_first = recipient_tour[:i] + part1 + recipient_tour[i:]
        for j in range(i + len(part1), len(with_first) + 1):
            yield with_first[:j] + part2 + with_first[j:]


def split_merge_cost(net: RoadNetwork, t: int, donor: Vehicle,
                     recipient: Vehicle,
                     requests_by_id: Mapping[int, Request]) -> PlanResult:
    """Best feasible tour for the recipient after absorbing the donor's.

    The donor tour is split at its middle and both halves are inserted as
    blocks into the recipient tour; the plan is priced from the
    recipient's position.  Ties keep the first candidate.
    """
    part1, part2 = split_tour(donor.tour)
    candidates = split_merge_candidates(recipient.tour, part1, part2)
    return _best_plan(net, t, recipient.location,
                      max(t, recipient.ready_at), candidates,
                      len(recipient.onboard), recipient.capacity,
                      requests_by_id)


def _with_request(requests_by_id: Mapping[int, Request],
                  request: Request) -> Mapping[int, Request]:
    if requests_by_id.get(request.id) is request:
        return requests_by_id
    merged = dict(requests_by_id)
    merged[request.id] = request
    return merged


def _best_plan(net: RoadNetwork, t: int, start_node: int, depart_t: int,
               candidates: Iterator[Tour], onboard_count: int, capacity: int,
               requests_by_id: Mapping[int, Request]) -> PlanResult:
    best_cost: int | None = None
    best_tour: Tour | None = None
    for cand in candidates:
        priced = evaluate_tour(net, t, start_node, depart_t, cand,
                               onboard_count, capacity, requests_by_id)
        if priced is None:
            continue
        cost, _ = priced
        if best_cost is None or cost < best_cost:
            best_cost, best_tour = cost, cand
    if best_cost is None:
        return INFEASIBLE
    return PlanResult(True, best_cost, best_tour)
