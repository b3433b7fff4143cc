"""Seeded Fruchterman-Reingold layout and plot-ready node/edge tables."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Optional

import numpy as np

from ._validation import check_positive_int
from .exceptions import ValidationError
from .model import ParticipantId


@dataclass(frozen=True)
class LayoutResult:
    coordinates: Mapping[ParticipantId, tuple[float, float]]
    bounding_box: tuple[float, float]
    iterations: int
    seed: int
    edges: tuple[tuple[ParticipantId, ParticipantId], ...] = ()


def _nodes_and_edges(graph) -> tuple[list, list]:
    nodes = list(graph.nodes)
    if hasattr(graph, "weights"):
        edges = list(graph.weights)
    else:
        edges = list(graph.edges)
    return nodes, sorted(tuple(e) for e in edges)


def fruchterman_reingold(
    graph,
    seed: int = 0,
    iterations: int = 200,
    box: tuple[float, float] = (1.0, 1.0),
    constant: float = 1.0,
    callback: Optional[Callable[[int, np.ndarray, float], None]] = None,
) -> LayoutResult:
    """Force-directed placement inside a ``W x H`` box.

    ``graph`` is any object with ``nodes`` and either ``edges`` (a backbone)
    or ``weights`` (a weighted network; weights are ignored). Initial
    positions are uniform in the box from a PCG64 generator seeded with
    ``seed``; the step cap starts at a tenth of the larger box side and
    cools linearly to zero. ``callback(iteration, positions, cap)`` sees the
    positions after each step.
    """
    iterations = check_positive_int(iterations, "iterations")
    width, height = float(box[0]), float(box[1])
    if not (width > 0 and height > 0):
        raise ValidationError(f"box dimensions must be positive, got {box!r}")
    nodes, edges = _nodes_and_edges(graph)
    if not nodes:
        raise ValidationError("cannot lay out an empty graph")
    nodes = sorted(nodes)
    index = {n: k for k, n in enumerate(nodes)}
    n = len(nodes)

    rng = np.random.Generator(np.random.PCG64(seed))
    pos = rng.uniform((0.0, 0.0), (width, height), size=(n, 2))
    k = constant * math.sqrt(width * height / n)
    t0 = max(width, height) / 10.0
    src = np.array([index[i] for i, _ in edges], dtype=int)
    dst = np.array([index[j] for _, j in edges], dtype=int)

    for it in range(iterations):
        cap = t0 * (1.0 - it / iterations)
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, np.inf)
        coincident = dist < 1e-12
        if coincident.any():
            # nudge stacked nodes apart along a seeded direction
            jitter = rng.normal(scale=1e-6, size=delta.shape)
            delta = np.where(coincident[..., None], jitter, delta)
            dist = np.where(coincident, np.linalg.norm(delta, axis=-1), dist)
        disp = np.sum(delta / dist[..., None] * (k * k / dist)[..., None], axis=1)
        if len(edges):
            d = pos[src] - pos[dst]
            length = np.maximum(np.linalg.norm(d, axis=-1), 1e-12)
            pull = d / length[:, None] * (length * length / k)[:, None]
            np.add.at(disp, src, -pull)
            np.add.at(disp, dst, pull)
        norm = np.linalg.norm(disp, axis=-1)
        scale = np.where(norm > 0, np.minimum(norm, cap) / np.where(norm > 0, norm, 1.0), 0.0)
        pos = pos + disp * scale[:, None]
        pos[:, 0] = np.clip(pos[:, 0], 0.0, width)
        pos[:, 1] = np.clip(pos[:, 1], 0.0, height)
        if callback is not None:
            callback(it, pos.copy(), cap)

    coords = {node: (float(pos[index[node], 0]), float(pos[index[node], 1])) for node in nodes}
    return LayoutResult(coords, (width, height), iterations, seed, tuple(edges))


@dataclass(frozen=True)
class FigureData:
    nodes: list[dict]
    edges: list[dict]

    def write_csv(self, node_path: str | Path, edge_path: str | Path) -> None:
        with open(node_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, ["id", "x", "y", "band"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.nodes)
        with open(edge_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, ["i", "j"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.edges)

    def to_json(self) -> str:
        return json.dumps({"nodes": self.nodes, "edges": self.edges}, indent=2)


def render_figure_data(
    layout: LayoutResult,
    bands: Mapping[ParticipantId, str],
    graph=None,
) -> FigureData:
    """Node rows ``(id, x, y, band)`` and edge rows ``(i, j)``; no drawing.

    When ``graph`` is passed its nodes and edges are used and must all be
    in the layout. Nodes without a band get an empty label.
    """
    if graph is not None:
        nodes, edges = _nodes_and_edges(graph)
    else:
        nodes, edges = list(layout.coordinates), list(layout.edges)
    missing = [n for n in nodes if n not in layout.coordinates]
    if missing:
        raise ValidationError(f"{len(missing)} node(s) missing from layout, e.g. {missing[0]!r}")
    node_rows = [
        {"id": n, "x": layout.coordinates[n][0], "y": layout.coordinates[n][1], "band": bands.get(n, "")}
        for n in sorted(nodes)
    ]
    edge_rows = [{"i": i, "j": j} for i, j in sorted(edges)]
    return FigureData(node_rows, edge_rows)
