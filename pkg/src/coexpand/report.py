"""Machine-readable reports: one JSON schema for every CLI command.

Schema (version 1)::

    {
      "schema": 1,
      "tool_version": "...",
      "command": "...",
      "input": "<expression text or null>",
      "domain": {"lo": ..., "hi": ...} | null,
      "params": {...},
      "results": {... command-specific payload ...},
      "wall_time": <seconds>
    }

Intervals serialize as {"lo", "hi"} with Python's shortest round-trip
float repr (json uses it natively).  Reports round-trip through
``to_json``/``from_json``; payloads are stored in already-JSON-safe form
so equality after a round trip is structural.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from . import __version__
from .certify import Certificate
from .classify import FixSetClass
from .glueable import GlueableResult
from .interval import Box2, Interval
from .roots import CritReport, FixedPoint
from .singer import PeriodicOrbit, SingerReport

SCHEMA_VERSION = 1


def interval_dict(iv: Interval) -> dict[str, float]:
    return {"lo": iv.lo, "hi": iv.hi}


def box_dict(b: Box2) -> dict[str, Any]:
    return {"x": interval_dict(b.x), "y": interval_dict(b.y)}


def fixed_point_dict(p: FixedPoint) -> dict[str, Any]:
    return {
        "isolating": interval_dict(p.isolating),
        "location": p.location,
        "multiplier": interval_dict(p.multiplier),
        "stability": p.stability.value,
        "evidence": p.evidence.value,
    }


def crit_report_dict(r: CritReport) -> dict[str, Any]:
    return {
        "isolating": [interval_dict(i) for i in r.isolating],
        "components": [interval_dict(c) for c in r.components],
        "status": r.status,
        "reason": r.reason,
    }


def certificate_dict(c: Certificate) -> dict[str, Any]:
    return {
        "verdict": c.verdict,
        "witness": None if c.witness is None else {"x": c.witness[0], "y": c.witness[1]},
        "chi_lower_bound": c.chi_lower_bound,
        "frontier": [box_dict(b) for b in c.frontier],
        "components": [interval_dict(i) for i in c.components],
        "boxes_processed": c.boxes_processed,
        "notes": list(c.notes),
    }


def glueable_dict(g: GlueableResult) -> dict[str, Any]:
    return {
        "verdict": g.verdict,
        "left_bound_ok": g.left_bound_ok,
        "right_bound_ok": g.right_bound_ok,
        "witness": g.witness,
        "reason": g.reason,
    }


def fix_set_dict(r: FixSetClass) -> dict[str, Any]:
    return {
        "kind": r.kind,
        "points": [fixed_point_dict(p) for p in r.points],
        "interval": None if r.interval is None else interval_dict(r.interval),
        "evidence": r.evidence,
        "notes": list(r.notes),
    }


def orbit_dict(o: PeriodicOrbit) -> dict[str, Any]:
    return {
        "point": o.point,
        "period": o.period,
        "multiplier": interval_dict(o.multiplier),
        "orbit": list(o.orbit),
        "basin": interval_dict(o.basin),
        "hits_lower": o.hits_lower,
        "hits_upper": o.hits_upper,
        "attracted_critical_points": list(o.attracted_critical_points),
        "unbounded_evidence": o.unbounded_evidence,
        "dichotomy_holds": o.dichotomy_holds,
    }


def singer_dict(r: SingerReport) -> dict[str, Any]:
    return {
        "orbits": [orbit_dict(o) for o in r.orbits],
        "critical_points": list(r.critical_points),
        "alarm": r.alarm,
        "notes": list(r.notes),
    }


@dataclass(slots=True)
class Report:
    command: str
    input: str | None
    domain: Interval | None
    results: dict[str, Any]
    params: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    tool_version: str = __version__

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "tool_version": self.tool_version,
            "command": self.command,
            "input": self.input,
            "domain": None if self.domain is None else interval_dict(self.domain),
            "params": self.params,
            "results": self.results,
            "wall_time": self.wall_time,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> Report:
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        dom = d.get("domain")
        return cls(
            command=d["command"],
            input=d.get("input"),
            domain=None if dom is None else Interval(dom["lo"], dom["hi"]),
            results=d.get("results", {}),
            params=d.get("params", {}),
            wall_time=d.get("wall_time", 0.0),
            tool_version=d.get("tool_version", __version__),
        )

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls.from_dict(json.loads(text))
