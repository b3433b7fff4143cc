"""GraphML and JSON serialization of weighted networks and backbones."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Optional, Union

import networkx as nx

from .backbone import BackboneNetwork
from .exceptions import ValidationError
from .model import ParticipantId
from .proximity import WeightedNetwork

Graphish = Union[WeightedNetwork, BackboneNetwork]


def to_networkx(graph: Graphish, bands: Optional[Mapping[ParticipantId, str]] = None) -> nx.Graph:
    """Attributed networkx view.

    Nodes carry ``participant`` and, when given, ``band``. Weighted-network
    edges carry ``weight``; backbone edges (every positive-weight edge of
    the source network) also carry ``alpha``, ``alpha_i``, ``alpha_j`` and
    ``retained``.
    """
    g = nx.Graph()
    for n in graph.nodes:
        attrs = {"participant": n}
        if bands is not None and n in bands:
            attrs["band"] = bands[n]
        g.add_node(n, **attrs)
    if isinstance(graph, BackboneNetwork):
        g.graph["alpha_threshold"] = graph.alpha_threshold
        g.graph["rule"] = graph.rule
        for (i, j), s in sorted(graph.significance.items()):
            g.add_edge(
                i, j,
                weight=s.weight,
                alpha=s.alpha,
                alpha_i=s.alpha_at_i,
                alpha_j=s.alpha_at_j,
                retained=(i, j) in graph.edges,
            )
    elif isinstance(graph, WeightedNetwork):
        for (i, j), w in graph.weights.items():
            g.add_edge(i, j, weight=w)
    else:
        raise ValidationError(f"cannot export {type(graph).__name__}")
    return g


def write_graphml(
    graph: Graphish, path: str | Path, bands: Optional[Mapping[ParticipantId, str]] = None
) -> None:
    nx.write_graphml(to_networkx(graph, bands), str(path))


def read_graphml(path: str | Path) -> nx.Graph:
    g = nx.read_graphml(str(path))
    # networkx records empty <default> blocks; drop them so the graph-level
    # attributes match what was written
    for key in ("node_default", "edge_default"):
        if g.graph.get(key) == {}:
            del g.graph[key]
    return g


def write_json(data, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=False)
        fh.write("\n")


def read_network_json(path: str | Path) -> Graphish:
    """Load either document kind written by :func:`write_json`."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "alpha_threshold" in data:
        return BackboneNetwork.from_mapping(data)
    return WeightedNetwork.from_mapping(data)
