"""Scenario indicators computed from trip logs and timing records.

All indicators cover the shared fleet only; there is no background
traffic in the simulator, so fleet-wide travel time and speed stand in
for the network-wide figures.  Undefined averages (no served requests,
no movement) are reported as NaN rather than zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Mapping, Sequence

from .model import EXPIRED, SERVED, Vehicle

METRICS_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class MetricsReport:
    generated: int
    served: int
    expired: int
    service_rate: float          # percent of generated requests served
    avg_vkt_km: float            # mean odometer per vehicle
    avg_detour_min: float        # mean realized-minus-direct ride time
    avg_wait_min: float          # mean pickup minus announcement
    avg_vehicle_travel_time_min: float  # mean driving time per vehicle
    avg_vehicle_speed_kmh: float        # fleet distance over driving time
    avg_assignments: float       # served requests per vehicle
    avg_cost_calculation_s: float  # per update: pricing + graph building
    avg_solution_s: float          # per update: matching solves
    avg_compute_s: float           # per update: both components


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else math.nan


def compute_metrics(trip_records: Sequence[Mapping],
                    vehicles: Sequence[Vehicle],
                    update_records: Sequence[Mapping]) -> MetricsReport:
    """Aggregate one scenario's outcome into a MetricsReport."""
    generated = len(trip_records)
    served_rows = [r for r in trip_records if r["status"] == SERVED]
    served = len(served_rows)
    expired = sum(1 for r in trip_records if r["status"] == EXPIRED)
    service_rate = 100.0 * served / generated if generated else math.nan
    detours = [(r["dropoff_t"] - r["pickup_t"] - r["H"]) / 60.0
               for r in served_rows]
    waits = [(r["pickup_t"] - r["t_r"]) / 60.0 for r in served_rows]
    total_km = sum(v.odometer_m for v in vehicles) / 1000.0
    total_drive_h = sum(v.drive_time_s for v in vehicles) / 3600.0
    cost_calc = [u["cost_calculation_s"] for u in update_records]
    solution = [u["solution_s"] for u in update_records]
    return MetricsReport(
        generated=generated,
        served=served,
        expired=expired,
        service_rate=service_rate,
        avg_vkt_km=_mean([v.odometer_m / 1000.0 for v in vehicles]),
        avg_detour_min=_mean(detours),
        avg_wait_min=_mean(waits),
        avg_vehicle_travel_time_min=_mean(
            [v.drive_time_s / 60.0 for v in vehicles]),
        avg_vehicle_speed_kmh=(total_km / total_drive_h
                               if total_drive_h > 0 else math.nan),
        avg_assignments=(served / len(vehicles) if vehicles else math.nan),
        avg_cost_calculation_s=_mean(cost_calc),
        avg_solution_s=_mean(solution),
        avg_compute_s=_mean([c + s for c, s in zip(cost_calc, solution)]),
    )


METRIC_COLUMNS = tuple(f.name for f in fields(MetricsReport))


def metrics_header() -> list[str]:
    return ["schema_version", *METRIC_COLUMNS]


def metrics_row(report: MetricsReport) -> list:
    return [METRICS_SCHEMA_VERSION,
            *[getattr(report, c) for c in METRIC_COLUMNS]]


def format_summary(report: MetricsReport) -> str:
    """Human-readable one-scenario summary."""

    def num(x, unit=""):
        if isinstance(x, float) and math.isnan(x):
            return "n/a"
        if isinstance(x, float):
            return f"{x:.2f}{unit}"
        return f"{x}{unit}"

    lines = [
        f"requests: {report.generated} generated, {report.served} served, "
        f"{report.expired} expired",
        f"service rate: {num(report.service_rate, '%')}",
        f"avg vehicle distance: {num(report.avg_vkt_km, ' km')}",
        f"avg detour: {num(report.avg_detour_min, ' min')}",
        f"avg wait: {num(report.avg_wait_min, ' min')}",
        f"avg vehicle travel time: {num(report.avg_vehicle_travel_time_min, ' min')}",
        f"avg vehicle speed: {num(report.avg_vehicle_speed_kmh, ' km/h')}",
        f"assignments per vehicle: {num(report.avg_assignments)}",
        f"avg compute per update: {num(report.avg_compute_s, ' s')} "
        f"(cost calculation {num(report.avg_cost_calculation_s, ' s')}, "
        f"solution {num(report.avg_solution_s, ' s')})",
    ]
    return "\n".join(lines)
