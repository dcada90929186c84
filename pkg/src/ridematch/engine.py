"""Per-update matching drivers.

``gmomatch_update`` runs the full two-step procedure: assign pending
requests to vehicles, then repeatedly merge freshly assigned tours onto
busier vehicles, then try to assign the still-unmatched requests to the
vehicles freed by the merges, until nothing changes.  ``baseline_update``
stops after a single assignment round, which reproduces the classical
one-request-per-vehicle-per-update behaviour.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .assignment import Edge, build_bipartite, solve_assignment
from .model import ASSIGNED, EXPIRED, PENDING, Request, Vehicle
from .network import RoadNetwork
from .vehicle_graph import step2_loop


@dataclass
class UpdateOutcome:
    finalized: list[int] = field(default_factory=list)
    expired: list[int] = field(default_factory=list)
    deferred: list[int] = field(default_factory=list)
    iterations: int = 0
    step2_rounds: int = 0
    step2_merges: int = 0
    # one (rounds, assigned vehicles at entry) pair per merge-loop call
    step2_calls: list[tuple[int, int]] = field(default_factory=list)
    cost_calculation_s: float = 0.0
    solution_s: float = 0.0


def expire_overdue(t: int, pending: Sequence[Request]) -> list[int]:
    """Expire requests whose latest pickup time has passed."""
    expired = []
    for req in sorted(pending, key=lambda r: r.id):
        if req.status == PENDING and t > req.q_r:
            req.set_status(EXPIRED)
            expired.append(req.id)
    return expired


def commit_matches(t: int, matches: Sequence[Edge],
                   vehicles_by_id: Mapping[int, Vehicle],
                   requests_by_id: Mapping[int, Request]) -> None:
    """Adopt the matched tours and mark the requests assigned.

    The vehicle is pinned to depart no earlier than ``t`` so the realized
    schedule equals the priced one.
    """
    for edge in matches:
        veh = vehicles_by_id[edge.vehicle_id]
        req = requests_by_id[edge.request_id]
        veh.tour = edge.tour
        veh.scheduled.add(edge.request_id)
        veh.assigned_requests.add(edge.request_id)
        veh.ready_at = max(veh.ready_at, t)
        veh.revision += 1
        req.set_status(ASSIGNED)
        req.vehicle_id = veh.id
        req.assign_t = t


def _begin_update(t: int, pending: Sequence[Request],
                  vehicles: Sequence[Vehicle],
                  outcome: UpdateOutcome) -> list[Request]:
    # assignment epochs are per update: forget last update's R_v
    for veh in vehicles:
        veh.assigned_requests.clear()
    outcome.expired = expire_overdue(t, pending)
    return sorted((r for r in pending if r.status == PENDING),
                  key=lambda r: r.id)


def gmomatch_update(net: RoadNetwork, t: int, pending: Sequence[Request],
                    vehicles: Sequence[Vehicle],
                    requests_by_id: Mapping[int, Request]) -> UpdateOutcome:
    """Two-step matching at update time ``t``.

    Each pass assigns at most one new request per vehicle, then the merge
    stage frees vehicles by combining compatible plans; freed vehicles can
    pick up more requests on the next pass.  Stops when every pending
    request is matched or no priced edge remains.
    """
    outcome = UpdateOutcome()
    remaining = _begin_update(t, pending, vehicles, outcome)
    vehicles_by_id = {v.id: v for v in vehicles}
    feasible_index: dict[int, tuple[int, ...]] = {}
    while remaining:
        t0 = time.perf_counter()
        graph = build_bipartite(net, t, remaining, vehicles, requests_by_id)
        outcome.cost_calculation_s += time.perf_counter() - t0
        outcome.iterations += 1
        feasible_index.update(graph.feasible_sets)
        if not graph.edges:
            break
        t0 = time.perf_counter()
        matches = solve_assignment(graph)
        outcome.solution_s += time.perf_counter() - t0
        if not matches:
            break
        commit_matches(t, matches, vehicles_by_id, requests_by_id)
        outcome.finalized.extend(m.request_id for m in matches)
        stats = step2_loop(net, t, vehicles, requests_by_id, feasible_index)
        outcome.step2_rounds += stats.rounds
        outcome.step2_merges += stats.merges
        outcome.step2_calls.append((stats.rounds, stats.initial_assigned))
        outcome.cost_calculation_s += stats.cost_calculation_s
        outcome.solution_s += stats.solution_s
        remaining = [r for r in remaining if r.status == PENDING]
    outcome.deferred = [r.id for r in remaining]
    return outcome


def baseline_update(net: RoadNetwork, t: int, pending: Sequence[Request],
                    vehicles: Sequence[Vehicle],
                    requests_by_id: Mapping[int, Request]) -> UpdateOutcome:
    """Single assignment round: one new request per vehicle per update."""
    outcome = UpdateOutcome()
    remaining = _begin_update(t, pending, vehicles, outcome)
    vehicles_by_id = {v.id: v for v in vehicles}
    if remaining:
        t0 = time.perf_counter()
        graph = build_bipartite(net, t, remaining, vehicles, requests_by_id)
        outcome.cost_calculation_s += time.perf_counter() - t0
        outcome.iterations = 1
        t0 = time.perf_counter()
        matches = solve_assignment(graph)
        outcome.solution_s += time.perf_counter() - t0
        commit_matches(t, matches, vehicles_by_id, requests_by_id)
        outcome.finalized.extend(m.request_id for m in matches)
        matched = {m.request_id for m in matches}
        outcome.deferred = [r.id for r in remaining if r.id not in matched]
    return outcome


MATCHERS = {
    "gmomatch": gmomatch_update,
    "baseline": baseline_update,
}
