"""JSON-shaped serialization of domains and obstacles.

Domain::

    {"outer": {"circle": {"center": [x, y], "radius": r}} | {"polygon": [[x, y], ...]},
     "holes": [<same shapes as outer>, ...]}

Obstacle::

    {"kind": "region" | "chain", "vertices": [[x, y], ...], "edges": [[i, j], ...],
     "holes": [[[x, y], ...], ...]}
    {"kind": "region", "fourier": {"center": [x, y], "a0": a0, "a": [...], "b": [...]}}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .obstacle import Obstacle
from .shapes import Circle, Domain, FourierShape, Polygon


def _shape_to_dict(shape) -> dict:
    if isinstance(shape, Circle):
        return {"circle": {"center": list(shape.center), "radius": shape.radius}}
    return {"polygon": shape.vertices.tolist()}


def _shape_from_dict(d: dict):
    if "circle" in d:
        c = d["circle"]
        return Circle(tuple(c["center"]), float(c["radius"]))
    if "polygon" in d:
        return Polygon(np.asarray(d["polygon"], dtype=float))
    raise ValueError(f"unknown shape keys {sorted(d)}")


def domain_to_dict(domain: Domain) -> dict:
    return {"outer": _shape_to_dict(domain.outer), "holes": [_shape_to_dict(h) for h in domain.holes]}


def domain_from_dict(d: dict) -> Domain:
    return Domain(_shape_from_dict(d["outer"]), tuple(_shape_from_dict(h) for h in d.get("holes", [])))


def fourier_to_dict(f: FourierShape) -> dict:
    return {"center": list(f.center), "a0": f.a0, "a": list(f.a), "b": list(f.b)}


def fourier_from_dict(d: dict) -> FourierShape:
    return FourierShape(tuple(d["center"]), float(d["a0"]), tuple(d.get("a", ())), tuple(d.get("b", ())))


def obstacle_to_dict(obstacle: Obstacle) -> dict:
    if obstacle.fourier is not None:
        return {"kind": "region", "fourier": fourier_to_dict(obstacle.fourier)}
    out = {"kind": obstacle.kind, "vertices": obstacle.vertices.tolist()}
    if obstacle.kind == "chain":
        out["edges"] = obstacle.edges.tolist()
    elif obstacle.holes:
        out["holes"] = [np.asarray(h).tolist() for h in obstacle.holes]
    return out


def obstacle_from_dict(d: dict) -> Obstacle:
    kind = d.get("kind", "region")
    if "fourier" in d:
        if kind != "region":
            raise ValueError("a Fourier obstacle is a region")
        return Obstacle.from_fourier(fourier_from_dict(d["fourier"]))
    verts = d.get("vertices")
    if not verts:
        raise ValueError("degenerate obstacle: no vertices")
    if kind == "chain":
        if "edges" in d:
            return Obstacle.graph(verts, d["edges"])
        return Obstacle.chain(verts, closed=bool(d.get("closed", False)))
    return Obstacle.polygon(verts, [np.asarray(h, dtype=float) for h in d.get("holes", [])])


def load_json(path) -> dict:
    return json.loads(Path(path).read_text())


def save_json(path, data: dict) -> None:
    Path(path).write_text(json.dumps(data, indent=2) + "\n")
