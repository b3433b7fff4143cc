"""Disparity-filter backbone of a weighted network.

For a node of degree k the null model spreads its strength uniformly at
random over its k edges. An edge carrying a fraction p of the node's
strength is significant at that node when the probability of seeing a
fraction at least that large under the null,

    alpha = (1 - p) ** (k - 1),

is below the chosen threshold.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping

from ._validation import check_open_unit, check_positive_int
from .exceptions import DomainError, ValidationError
from .model import RETENTION_RULES, ParticipantId
from .proximity import WeightedNetwork

logger = logging.getLogger(__name__)


def edge_alpha(p: float, k: int) -> float:
    """Null-model probability of an edge share >= ``p`` at a node of degree ``k``."""
    k = check_positive_int(k, "degree k")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"normalized weight p must lie in [0, 1], got {p!r}")
    if k == 1:
        return 1.0
    return (1.0 - p) ** (k - 1)


@dataclass(frozen=True)
class EdgeSignificance:
    pair: tuple[ParticipantId, ParticipantId]
    weight: float
    p_at_i: float
    p_at_j: float
    alpha_at_i: float
    alpha_at_j: float

    @property
    def alpha(self) -> float:
        """The smaller endpoint alpha, i.e. the edge's best significance."""
        return min(self.alpha_at_i, self.alpha_at_j)

    def retained(self, threshold: float, rule: str = "or") -> bool:
        if rule == "or":
            return self.alpha_at_i < threshold or self.alpha_at_j < threshold
        return self.alpha_at_i < threshold and self.alpha_at_j < threshold


def edge_significance(network: WeightedNetwork) -> dict[tuple[ParticipantId, ParticipantId], EdgeSignificance]:
    """Normalized weights and endpoint alphas for every positive-weight edge."""
    strength: dict = {n: 0.0 for n in network.nodes}
    degree: dict = {n: 0 for n in network.nodes}
    for (i, j), w in network.weights.items():
        strength[i] += w
        strength[j] += w
        degree[i] += 1
        degree[j] += 1
    out = {}
    for (i, j), w in network.weights.items():
        # clip guards the p = 1 case against rounding in the strength sum
        p_i = min(w / strength[i], 1.0)
        p_j = min(w / strength[j], 1.0)
        out[(i, j)] = EdgeSignificance(
            (i, j), w, p_i, p_j, edge_alpha(p_i, degree[i]), edge_alpha(p_j, degree[j])
        )
    return out


@dataclass(frozen=True)
class BackboneNetwork:
    """Binary backbone: every node of the source network plus the retained edges.

    ``significance`` covers every positive-weight edge of the source
    network, retained or not.
    """

    nodes: tuple[ParticipantId, ...]
    edges: frozenset
    significance: Mapping[tuple[ParticipantId, ParticipantId], EdgeSignificance]
    alpha_threshold: float
    rule: str = "or"

    def __post_init__(self):
        if not self.edges <= set(self.significance):
            raise ValidationError("backbone edges must be a subset of the source network's edges")

    def sorted_edges(self) -> list[tuple[ParticipantId, ParticipantId]]:
        return sorted(self.edges)

    def degree(self) -> dict[ParticipantId, int]:
        deg = {n: 0 for n in self.nodes}
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def to_mapping(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "alpha_threshold": self.alpha_threshold,
            "rule": self.rule,
            "edges": [
                {
                    "i": i,
                    "j": j,
                    "weight": s.weight,
                    "p_i": s.p_at_i,
                    "p_j": s.p_at_j,
                    "alpha_i": s.alpha_at_i,
                    "alpha_j": s.alpha_at_j,
                    "alpha": s.alpha,
                    "retained": (i, j) in self.edges,
                }
                for (i, j), s in sorted(self.significance.items())
            ],
        }

    @classmethod
    def from_mapping(cls, data: Mapping) -> "BackboneNetwork":
        try:
            sig = {}
            edges = set()
            for e in data["edges"]:
                key = (e["i"], e["j"])
                sig[key] = EdgeSignificance(
                    key, e["weight"], e["p_i"], e["p_j"], e["alpha_i"], e["alpha_j"]
                )
                if e["retained"]:
                    edges.add(key)
            return cls(tuple(data["nodes"]), frozenset(edges), sig, data["alpha_threshold"], data["rule"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed backbone document: {exc}") from None


def extract_backbone(
    network: WeightedNetwork,
    alpha_threshold: float = 0.05,
    rule: str = "or",
) -> BackboneNetwork:
    """Keep the edges whose endpoint alpha falls strictly below ``alpha_threshold``.

    With ``rule="or"`` one significant endpoint is enough; ``"and"`` needs
    both. All nodes are kept, isolated or not.
    """
    alpha_threshold = check_open_unit(alpha_threshold, "alpha_threshold")
    if rule not in RETENTION_RULES:
        raise ValidationError(f"rule must be one of {RETENTION_RULES}, got {rule!r}")
    sig = edge_significance(network)
    edges = frozenset(key for key, s in sig.items() if s.retained(alpha_threshold, rule))

    dyads = [key for key, s in sig.items() if s.alpha_at_i == 1.0 and s.alpha_at_j == 1.0]
    if dyads:
        logger.warning(
            "%d isolated dyad(s) cannot pass the disparity filter and were dropped", len(dyads)
        )
    return BackboneNetwork(network.nodes, edges, sig, alpha_threshold, rule)
