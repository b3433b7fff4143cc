import math

import numpy as np
import pytest

from proxnet.backbone import BackboneNetwork
from proxnet.exceptions import ValidationError
from proxnet.layout import fruchterman_reingold, render_figure_data
from proxnet.proximity import WeightedNetwork

from oracles import random_weights


def backbone(nodes, edges):
    return BackboneNetwork(tuple(nodes), frozenset(edges), {e: None for e in edges}, 0.05)


def test_single_node_stays_at_seeded_position():
    result = fruchterman_reingold(backbone(["a"], []), seed=11)
    start = np.random.Generator(np.random.PCG64(11)).uniform((0.0, 0.0), (1.0, 1.0), size=(1, 2))[0]
    assert result.coordinates["a"] == (start[0], start[1])


def test_two_connected_nodes_settle_near_k():
    result = fruchterman_reingold(backbone("ab", [("a", "b")]), seed=0, iterations=200)
    k = math.sqrt(1.0 / 2)
    (ax, ay), (bx, by) = result.coordinates["a"], result.coordinates["b"]
    assert abs(math.hypot(ax - bx, ay - by) - k) <= 0.2 * k


def test_deterministic():
    ids, weights = random_weights(np.random.default_rng(4), 25, density=0.15)
    net = WeightedNetwork(tuple(ids), weights)
    assert fruchterman_reingold(net, seed=3) == fruchterman_reingold(net, seed=3)
    assert fruchterman_reingold(net, seed=3) != fruchterman_reingold(net, seed=4)


def test_containment_and_cooling_every_iteration():
    ids, weights = random_weights(np.random.default_rng(9), 30, density=0.2)
    box = (4.0, 2.5)
    seen = []

    def watch(it, pos, cap):
        assert np.all(pos >= 0.0) and np.all(pos[:, 0] <= box[0]) and np.all(pos[:, 1] <= box[1])
        assert np.all(np.isfinite(pos))
        seen.append((pos, cap))

    fruchterman_reingold(WeightedNetwork(tuple(ids), weights), seed=1, iterations=120, box=box, callback=watch)
    caps = [c for _, c in seen]
    assert caps == sorted(caps, reverse=True)
    for (prev, _), (cur, cap) in zip(seen, seen[1:]):
        assert np.linalg.norm(cur - prev, axis=1).max() <= cap + 1e-12


def test_validation():
    with pytest.raises(ValidationError):
        fruchterman_reingold(backbone([], []))
    with pytest.raises(ValidationError):
        fruchterman_reingold(backbone("ab", []), box=(0, 1))
    with pytest.raises(ValueError):
        fruchterman_reingold(backbone("ab", []), iterations=0)


def test_render_path_with_bands():
    bb = backbone("abc", [("a", "b"), ("b", "c")])
    fig = render_figure_data(fruchterman_reingold(bb), {"a": "minimal", "b": "mild", "c": "severe"}, bb)
    assert [(r["id"], r["band"]) for r in fig.nodes] == [("a", "minimal"), ("b", "mild"), ("c", "severe")]
    assert fig.edges == [{"i": "a", "j": "b"}, {"i": "b", "j": "c"}]


def test_render_empty_edges_and_missing_node(tmp_path):
    bb = backbone("ab", [])
    layout = fruchterman_reingold(bb)
    fig = render_figure_data(layout, {})
    assert fig.edges == [] and len(fig.nodes) == 2
    fig.write_csv(tmp_path / "n.csv", tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == "i,j\n"
    with pytest.raises(ValidationError):
        render_figure_data(layout, {}, backbone("abc", []))
