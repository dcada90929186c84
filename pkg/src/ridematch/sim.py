"""Rolling-horizon fleet simulator.

A scenario is driven by a fixed update interval: at every update instant
the configured matcher expires overdue requests and commits assignments,
then the fleet advances along its tours until the next instant.  Demand
arrives as per-OD Poisson processes during a loading period (or from an
explicit request file) and the run continues past loading until every
request is served or expired and every tour is finished.
"""

from __future__ import annotations

import csv
import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .engine import MATCHERS, UpdateOutcome
from .model import (ONBOARD, PENDING, SERVED, PICKUP, Request, Vehicle,
                    make_request)
from .network import NetworkFormatError, RoadNetwork, grid_network, load_network


class ConfigError(ValueError):
    """A scenario document failed validation."""


_CONFIG_FIELDS = {"network", "demand", "loading_period_s", "fleet_size",
                  "capacity", "flexibility_s", "update_interval_s",
                  "matcher", "seed"}
_NETWORK_KINDS = {"grid", "file"}
_DEMAND_KINDS = {"poisson", "uniform", "file"}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario parameters; see ``from_dict`` for the schema."""

    network: dict
    demand: dict
    loading_period_s: int
    fleet_size: int
    capacity: int
    flexibility_s: int
    update_interval_s: int
    matcher: str = "gmomatch"
    seed: int = 0

    @staticmethod
    def from_dict(doc: dict) -> "ScenarioConfig":
        if not isinstance(doc, dict):
            raise ConfigError("scenario config must be a JSON object")
        unknown = set(doc) - _CONFIG_FIELDS
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = _CONFIG_FIELDS - {"matcher", "seed"} - set(doc)
        if missing:
            raise ConfigError(f"missing config fields: {sorted(missing)}")
        cfg = ScenarioConfig(
            network=doc["network"],
            demand=doc["demand"],
            loading_period_s=_int_field(doc, "loading_period_s"),
            fleet_size=_int_field(doc, "fleet_size"),
            capacity=_int_field(doc, "capacity"),
            flexibility_s=_int_field(doc, "flexibility_s"),
            update_interval_s=_int_field(doc, "update_interval_s"),
            matcher=doc.get("matcher", "gmomatch"),
            seed=_int_field(doc, "seed") if "seed" in doc else 0,
        )
        cfg._check()
        return cfg

    @staticmethod
    def from_file(path: str | Path) -> "ScenarioConfig":
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {p}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {p}: {exc}") from exc
        return ScenarioConfig.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "network": self.network,
            "demand": self.demand,
            "loading_period_s": self.loading_period_s,
            "fleet_size": self.fleet_size,
            "capacity": self.capacity,
            "flexibility_s": self.flexibility_s,
            "update_interval_s": self.update_interval_s,
            "matcher": self.matcher,
            "seed": self.seed,
        }

    def replace(self, **changes) -> "ScenarioConfig":
        doc = self.to_dict()
        doc.update(changes)
        return ScenarioConfig.from_dict(doc)

    def _check(self) -> None:
        if self.update_interval_s <= 0:
            raise ConfigError("update_interval_s must be > 0")
        if self.capacity < 1:
            raise ConfigError("capacity must be >= 1")
        if self.flexibility_s < 0:
            raise ConfigError("flexibility_s must be >= 0")
        if self.fleet_size < 1:
            raise ConfigError("fleet_size must be >= 1")
        if self.loading_period_s < 0:
            raise ConfigError("loading_period_s must be >= 0")
        if self.matcher not in MATCHERS:
            raise ConfigError(f"matcher must be one of {sorted(MATCHERS)}, "
                              f"got {self.matcher!r}")
        if not isinstance(self.network, dict):
            raise ConfigError("network must be an object")
        kind = self.network.get("kind")
        if kind not in _NETWORK_KINDS:
            raise ConfigError(f"network.kind must be one of "
                              f"{sorted(_NETWORK_KINDS)}, got {kind!r}")
        if kind == "grid":
            extra = set(self.network) - {"kind", "rows", "cols",
                                         "link_length_m", "link_travel_time_s"}
            if extra:
                raise ConfigError(f"unknown network fields: {sorted(extra)}")
            if not ("rows" in self.network and "cols" in self.network):
                raise ConfigError("grid network needs 'rows' and 'cols'")
        else:
            extra = set(self.network) - {"kind", "path"}
            if extra:
                raise ConfigError(f"unknown network fields: {sorted(extra)}")
            if "path" not in self.network:
                raise ConfigError("file network needs 'path'")
        if not isinstance(self.demand, dict):
            raise ConfigError("demand must be an object")
        dkind = self.demand.get("kind")
        if dkind not in _DEMAND_KINDS:
            raise ConfigError(f"demand.kind must be one of "
                              f"{sorted(_DEMAND_KINDS)}, got {dkind!r}")
        if dkind == "poisson":
            extra = set(self.demand) - {"kind", "od_rates", "scale"}
            if extra:
                raise ConfigError(f"unknown demand fields: {sorted(extra)}")
            rates = self.demand.get("od_rates")
            if not isinstance(rates, list) or not rates:
                raise ConfigError("poisson demand needs a non-empty od_rates list")
            for rec in rates:
                if (not isinstance(rec, dict)
                        or set(rec) != {"origin", "destination", "rate_per_hour"}):
                    raise ConfigError(f"bad od_rates entry: {rec!r}")
                if rec["rate_per_hour"] < 0:
                    raise ConfigError("rate_per_hour must be >= 0")
                if rec["origin"] == rec["destination"]:
                    raise ConfigError("od_rates origin must differ from destination")
        elif dkind == "uniform":
            extra = set(self.demand) - {"kind", "requests_per_hour", "scale"}
            if extra:
                raise ConfigError(f"unknown demand fields: {sorted(extra)}")
            if "requests_per_hour" not in self.demand:
                raise ConfigError("uniform demand needs 'requests_per_hour'")
            if self.demand["requests_per_hour"] < 0:
                raise ConfigError("requests_per_hour must be >= 0")
        else:
            extra = set(self.demand) - {"kind", "path"}
            if extra:
                raise ConfigError(f"unknown demand fields: {sorted(extra)}")
            if "path" not in self.demand:
                raise ConfigError("file demand needs 'path'")
        if "scale" in self.demand and self.demand["scale"] < 0:
            raise ConfigError("demand scale must be >= 0")


def _int_field(doc: dict, name: str) -> int:
    v = doc.get(name)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    return v


def build_network(config: ScenarioConfig) -> RoadNetwork:
    spec = config.network
    if spec["kind"] == "grid":
        return grid_network(spec["rows"], spec["cols"],
                            spec.get("link_length_m", 400.0),
                            spec.get("link_travel_time_s", 40))
    try:
        return load_network(Path(spec["path"]))
    except NetworkFormatError as exc:
        raise ConfigError(str(exc)) from exc


def check_demand_reachability(config: ScenarioConfig,
                              net: RoadNetwork) -> None:
    """Reject OD pairs with no route (or unknown nodes) up front."""
    if config.demand["kind"] == "poisson":
        for rec in config.demand["od_rates"]:
            o, d = rec["origin"], rec["destination"]
            if o not in net or d not in net:
                raise ConfigError(f"demand references unknown node: {o}->{d}")
            if net.shortest_travel_time(o, d) is None:
                raise ConfigError(f"demand OD pair {o}->{d} is unreachable")


def generate_demand(config: ScenarioConfig, net: RoadNetwork,
                    rng: np.random.Generator) -> list[Request]:
    """Draw the request list for the loading period.

    Poisson demand: per-OD counts are Poisson with mean rate × period,
    arrival instants uniform over the period.  Uniform demand spreads one
    total rate over all ordered node pairs.  File demand is read verbatim.
    Requests come back sorted by announcement time with sequential ids.
    """
    kind = config.demand["kind"]
    T = config.loading_period_s
    scale = config.demand.get("scale", 1.0)
    events: list[tuple[int, int, int]] = []
    if kind == "poisson":
        for rec in config.demand["od_rates"]:
            lam = rec["rate_per_hour"] * scale * T / 3600.0
            count = int(rng.poisson(lam)) if lam > 0 else 0
            for _ in range(count):
                events.append((int(rng.integers(0, max(T, 1))),
                               rec["origin"], rec["destination"]))
    elif kind == "uniform":
        lam = config.demand["requests_per_hour"] * scale * T / 3600.0
        count = int(rng.poisson(lam)) if lam > 0 else 0
        nodes = net.nodes
        for _ in range(count):
            t = int(rng.integers(0, max(T, 1)))
            o = int(nodes[rng.integers(0, len(nodes))])
            d = int(nodes[rng.integers(0, len(nodes))])
            while d == o:
                d = int(nodes[rng.integers(0, len(nodes))])
            events.append((t, o, d))
    else:
        return load_requests(Path(config.demand["path"]), config, net)
    events.sort()
    out = []
    for rid, (t, o, d) in enumerate(events):
        out.append(make_request(rid, t, o, d, config.flexibility_s, net))
    return out


def load_requests(path: Path, config: ScenarioConfig,
                  net: RoadNetwork) -> list[Request]:
    """Read an explicit request file.

    Shape: ``{"requests": [{"t_r": s, "origin": n, "destination": n,
    "flexibility_s": s?}, ...]}`` where flexibility defaults to the
    scenario value.  Ids follow announcement order.
    """
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read request file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"requests"}:
        raise ConfigError("request file must be {\"requests\": [...]}")
    rows = []
    for rec in doc["requests"]:
        allowed = {"t_r", "origin", "destination", "flexibility_s"}
        if not isinstance(rec, dict) or not set(rec) <= allowed:
            raise ConfigError(f"bad request record: {rec!r}")
        for need in ("t_r", "origin", "destination"):
            if need not in rec:
                raise ConfigError(f"request record missing {need!r}: {rec!r}")
        if rec["t_r"] < 0:
            raise ConfigError("request t_r must be >= 0")
        if rec["origin"] == rec["destination"]:
            raise ConfigError("request origin must differ from destination")
        rows.append(rec)
    rows.sort(key=lambda r: r["t_r"])
    out = []
    for rid, rec in enumerate(rows):
        flex = rec.get("flexibility_s", config.flexibility_s)
        try:
            out.append(make_request(rid, rec["t_r"], rec["origin"],
                                    rec["destination"], flex, net))
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad request record {rec!r}: {exc}") from exc
    return out


def initialize_fleet(config: ScenarioConfig, demand: Sequence[Request],
                     net: RoadNetwork,
                     rng: np.random.Generator) -> list[Vehicle]:
    """Place idle vehicles, start nodes drawn proportional to origin demand.

    With zero demand the draw falls back to uniform over all nodes.
    """
    nodes = np.array(net.nodes)
    weights = np.zeros(len(nodes), dtype=float)
    index = {n: i for i, n in enumerate(net.nodes)}
    for req in demand:
        weights[index[req.origin]] += 1
    if weights.sum() == 0:
        weights[:] = 1.0
    starts = rng.choice(nodes, size=config.fleet_size,
                        p=weights / weights.sum())
    return [Vehicle(id=i, capacity=config.capacity, location=int(starts[i]))
            for i in range(config.fleet_size)]


@dataclass
class SimulationState:
    net: RoadNetwork
    vehicles: list[Vehicle]
    requests: list[Request]
    requests_by_id: dict[int, Request]
    clock: int = 0
    pending: list[Request] = field(default_factory=list)
    update_records: list[dict] = field(default_factory=list)


def advance(state: SimulationState, until: int) -> None:
    """Move every vehicle along its tour up to time ``until``.

    Stops execute with zero dwell at the arrival instant; traversed link
    lengths accumulate on the odometer.  On return any vehicle still
    holding stops is strictly in transit (its next arrival is after
    ``until``).
    """
    if until < state.clock:
        raise ValueError("cannot advance backwards")
    for veh in state.vehicles:
        while veh.tour and veh.ready_at <= until:
            stop = veh.tour[0]
            if veh.location == stop.node:
                req = state.requests_by_id[stop.request_id]
                if stop.kind == PICKUP:
                    req.set_status(ONBOARD)
                    req.pickup_t = veh.ready_at
                    veh.scheduled.discard(stop.request_id)
                    veh.assigned_requests.discard(stop.request_id)
                    veh.onboard.add(stop.request_id)
                    assert len(veh.onboard) <= veh.capacity, \
                        f"vehicle {veh.id} over capacity"
                    assert req.pickup_t <= req.q_r, \
                        f"request {req.id} picked up after its deadline"
                else:
                    req.set_status(SERVED)
                    req.dropoff_t = veh.ready_at
                    veh.onboard.discard(stop.request_id)
                    assert req.dropoff_t <= req.l_r, \
                        f"request {req.id} dropped off after its deadline"
                veh.tour = veh.tour[1:]
                veh.revision += 1
            else:
                path = state.net.shortest_path(veh.location, stop.node)
                assert path is not None, "committed tour has unreachable stop"
                link = state.net.link(veh.location, path[1])
                veh.location = link.dst
                veh.ready_at += link.travel_time_s
                veh.odometer_m += link.length_m
                veh.drive_time_s += link.travel_time_s
        assert veh.tour or not veh.onboard, \
            f"vehicle {veh.id} idle with passengers aboard"
    state.clock = until


@dataclass
class RunResult:
    config: ScenarioConfig
    state: SimulationState
    trip_records: list[dict]
    update_records: list[dict]


# hard stop against a stuck scenario; updates are Δ-spaced so this is hours
# of simulated time for any sane config
MAX_UPDATES = 1_000_000


def run_scenario(config: ScenarioConfig) -> RunResult:
    """Simulate one scenario to quiescence and collect the trip log."""
    net = build_network(config)
    check_demand_reachability(config, net)
    rng = np.random.default_rng(config.seed)
    demand = generate_demand(config, net, rng)
    vehicles = initialize_fleet(config, demand, net, rng)
    state = SimulationState(net=net, vehicles=vehicles, requests=demand,
                            requests_by_id={r.id: r for r in demand})
    future = deque(demand)
    matcher = MATCHERS[config.matcher]
    delta = config.update_interval_s
    for k in range(MAX_UPDATES):
        t = k * delta
        while future and future[0].t_r <= t:
            state.pending.append(future.popleft())
        outcome: UpdateOutcome = matcher(net, t, state.pending, vehicles,
                                         state.requests_by_id)
        state.update_records.append({
            "t": t,
            "finalized": len(outcome.finalized),
            "expired": len(outcome.expired),
            "deferred": len(outcome.deferred),
            "iterations": outcome.iterations,
            "step2_rounds": outcome.step2_rounds,
            "step2_merges": outcome.step2_merges,
            "step2_calls": list(outcome.step2_calls),
            "cost_calculation_s": outcome.cost_calculation_s,
            "solution_s": outcome.solution_s,
        })
        state.pending = [r for r in state.pending if r.status == PENDING]
        state.clock = t
        if not future and not state.pending \
                and all(not v.tour for v in vehicles):
            break
        advance(state, (k + 1) * delta)
    else:
        raise RuntimeError("scenario did not reach quiescence")
    return RunResult(config=config, state=state,
                     trip_records=build_trip_records(state),
                     update_records=state.update_records)


TRIP_LOG_COLUMNS = ("request_id", "t_r", "O", "D", "q_r", "l_r",
                    "vehicle_id", "assign_t", "pickup_t", "dropoff_t",
                    "H", "status")


def build_trip_records(state: SimulationState) -> list[dict]:
    """One record per generated request, in id order."""
    records = []
    for req in sorted(state.requests, key=lambda r: r.id):
        records.append({
            "request_id": req.id,
            "t_r": req.t_r,
            "O": req.origin,
            "D": req.destination,
            "q_r": req.q_r,
            "l_r": req.l_r,
            "vehicle_id": req.vehicle_id,
            "assign_t": req.assign_t,
            "pickup_t": req.pickup_t,
            "dropoff_t": req.dropoff_t,
            "H": req.direct_time_s,
            "status": req.status,
        })
    return records


def write_trip_log(path: str | Path, trip_records: Sequence[dict]) -> None:
    """Write the trip log as CSV; missing values become empty fields."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRIP_LOG_COLUMNS)
        for rec in trip_records:
            writer.writerow(["" if rec[c] is None else rec[c]
                             for c in TRIP_LOG_COLUMNS])


def example_config(**overrides) -> ScenarioConfig:
    """A small grid scenario usable out of the box; see demos/."""
    doc = {
        "network": {"kind": "grid", "rows": 6, "cols": 6,
                    "link_length_m": 400.0, "link_travel_time_s": 40},
        "demand": {"kind": "uniform", "requests_per_hour": 360,
                   "scale": 1.0},
        "loading_period_s": 900,
        "fleet_size": 15,
        "capacity": 4,
        "flexibility_s": 300,
        "update_interval_s": 30,
        "matcher": "gmomatch",
        "seed": 0,
    }
    doc.update(overrides)
    return ScenarioConfig.from_dict(doc)


def commuter_config(**overrides) -> ScenarioConfig:
    """Corner-to-corner commuter flows on the bundled 6x6 grid.

    Demand arrives in shareable bursts that outnumber the fleet at every
    update, with a tight pickup window, which is the regime where batching
    several requests per vehicle per update pays off.
    """
    corners = [(0, 35), (5, 30), (30, 5), (35, 0)]
    doc = {
        "network": {"kind": "grid", "rows": 6, "cols": 6,
                    "link_length_m": 400.0, "link_travel_time_s": 40},
        "demand": {"kind": "poisson",
                   "od_rates": [{"origin": o, "destination": d,
                                 "rate_per_hour": 240} for o, d in corners],
                   "scale": 1.0},
        "loading_period_s": 900,
        "fleet_size": 8,
        "capacity": 4,
        "flexibility_s": 120,
        "update_interval_s": 30,
        "matcher": "gmomatch",
        "seed": 0,
    }
    doc.update(overrides)
    return ScenarioConfig.from_dict(doc)
