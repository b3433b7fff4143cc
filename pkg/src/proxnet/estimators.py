"""scikit-learn style wrappers over the functional core.

These let the pipeline stages be used on plain arrays and dropped into
sklearn tooling (``get_params``, ``clone``, ``Pipeline``). Each wrapper
delegates to the corresponding function; there is no second
implementation here.
"""

from __future__ import annotations

from datetime import timedelta

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_weight_matrix
from .backbone import extract_backbone
from .layout import fruchterman_reingold
from .model import (
    DEFAULT_BAND_TABLES,
    Instrument,
    SeverityBandTable,
    SurveyResponse,
    band_score,
    score_survey,
)
from .proximity import WeightedNetwork, build_weighted_network, tally_scans


def _matrix_to_network(W: np.ndarray) -> WeightedNetwork:
    n = W.shape[0]
    labels = [f"{k:06d}" for k in range(n)]
    rows, cols = np.nonzero(np.triu(W, 1))
    return WeightedNetwork(tuple(labels), {(labels[a], labels[b]): W[a, b] for a, b in zip(rows, cols)})


class ProximityWeights(BaseEstimator, TransformerMixin):
    """Scan events -> dense proximity-weight matrix.

    ``fit`` fixes the node order (``participants_``) and tallies the
    events; ``transform`` tallies a (possibly different) event list over
    the same window and participants.
    """

    def __init__(self, window=None, participants=None):
        self.window = window
        self.participants = participants

    def fit(self, X, y=None):
        events = list(X)
        window = self.window
        if window is None:
            stamps = [e.timestamp for e in events]
            window = (min(stamps), max(stamps) + timedelta(seconds=1))
        self.window_ = window
        self.tally_ = tally_scans(events, window, self.participants)
        self.participants_ = self.tally_.participants
        self.network_ = build_weighted_network(self.tally_)
        return self

    def transform(self, X):
        check_is_fitted(self, "participants_")
        tally = tally_scans(list(X), self.window_, self.participants_)
        network = build_weighted_network(tally)
        index = {p: k for k, p in enumerate(self.participants_)}
        W = np.zeros((len(index), len(index)))
        for (i, j), w in network.weights.items():
            W[index[i], index[j]] = W[index[j], index[i]] = w
        return W


class DisparityFilter(BaseEstimator, TransformerMixin):
    """Weight matrix -> boolean backbone adjacency.

    After ``fit``, ``alpha_[a, b]`` is the significance of edge ``{a, b}``
    seen from node ``a`` (1.0 where there is no edge) and ``backbone_`` the
    retained adjacency of the fitted matrix.
    """

    def __init__(self, alpha=0.05, rule="or"):
        self.alpha = alpha
        self.rule = rule

    def _run(self, X):
        W = check_weight_matrix(X)
        return W, extract_backbone(_matrix_to_network(W), self.alpha, self.rule)

    def fit(self, X, y=None):
        W, bb = self._run(X)
        n = W.shape[0]
        alpha = np.ones((n, n))
        for (i, j), s in bb.significance.items():
            a, b = int(i), int(j)
            alpha[a, b] = s.alpha_at_i
            alpha[b, a] = s.alpha_at_j
        self.alpha_ = alpha
        self.backbone_ = self._adjacency(n, bb)
        self.n_features_in_ = n
        return self

    def transform(self, X):
        check_is_fitted(self, "backbone_")
        W, bb = self._run(X)
        return self._adjacency(W.shape[0], bb)

    @staticmethod
    def _adjacency(n, bb):
        A = np.zeros((n, n), dtype=bool)
        for i, j in bb.edges:
            A[int(i), int(j)] = A[int(j), int(i)] = True
        return A


class FruchtermanReingold(BaseEstimator):
    """Adjacency matrix -> ``(n, 2)`` layout coordinates in ``embedding_``."""

    def __init__(self, seed=0, iterations=200, box=(1.0, 1.0), constant=1.0):
        self.seed = seed
        self.iterations = iterations
        self.box = box
        self.constant = constant

    def fit(self, X, y=None):
        A = check_weight_matrix(np.asarray(X, dtype=float))
        net = _matrix_to_network(A)
        result = fruchterman_reingold(net, self.seed, self.iterations, self.box, self.constant)
        self.embedding_ = np.array([result.coordinates[n] for n in net.nodes])
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_


class SeverityBander(BaseEstimator, TransformerMixin):
    """Item-score matrix ``(n_respondents, n_items)`` -> severity labels."""

    def __init__(self, instrument="PHQ9", bands=None):
        self.instrument = instrument
        self.bands = bands

    def fit(self, X=None, y=None):
        instrument = Instrument.parse(self.instrument)
        table = self.bands or DEFAULT_BAND_TABLES[instrument]
        if not isinstance(table, SeverityBandTable):
            table = SeverityBandTable(instrument, tuple(table))
        self.instrument_ = instrument
        self.table_ = table
        return self

    def totals(self, X) -> np.ndarray:
        check_is_fitted(self, "table_")
        X = np.asarray(X)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D item matrix, got shape {X.shape}")
        return np.array([
            score_survey(SurveyResponse("", self.instrument_, tuple(v.item() for v in row), None))
            for row in X
        ], dtype=int)

    def transform(self, X):
        return np.array([band_score(int(t), self.table_) for t in self.totals(X)], dtype=object)
