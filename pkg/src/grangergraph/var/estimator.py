"""scikit-learn compatible wrapper around :func:`fit_var`."""

from __future__ import annotations

import itertools

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from ..graph import MixedGraph
from .model import TimeSeries, fit_var, lag_matrix, validate_var

__all__ = ["GraphicalVAR"]


class GraphicalVAR(BaseEstimator):
    """Least-squares VAR(p) constrained by the directed edges of a mixed graph.

    Parameters
    ----------
    graph : MixedGraph or None
        Constraint graph whose vertices name the columns. ``None`` means the
        complete graph, i.e. an unrestricted VAR with columns ``"1".."d"``.
    order : int
        Lag order ``p``.

    Attributes
    ----------
    model_ : VarModel
    coef_ : ndarray of shape (order, n_features, n_features)
    sigma_ : ndarray of shape (n_features, n_features)
    violations_ : list
        Zero-pattern violations of the fitted model; directed ones never
        occur, concentration ones are reported but not imposed.
    """

    def __init__(self, graph=None, order=1):
        self.graph = graph
        self.order = order

    def _graph_for(self, d):
        if self.graph is not None:
            return self.graph
        labels = [str(i) for i in range(1, d + 1)]
        return MixedGraph(
            labels,
            itertools.permutations(labels, 2),
            itertools.combinations(labels, 2),
        )

    def _as_array(self, X):
        if isinstance(X, TimeSeries):
            X = X.data
        return check_array(X, dtype=float, ensure_min_samples=self.order + 1)

    def fit(self, X, y=None):
        X = self._as_array(X)
        g = self._graph_for(X.shape[1])
        if g.n != X.shape[1]:
            raise ValueError(f"graph has {g.n} vertices but X has {X.shape[1]} columns")
        series = TimeSeries(tuple(str(v) for v in g.labels), X)
        self.model_ = fit_var(series, g, self.order)
        self.coef_ = np.array(self.model_.phi)
        self.sigma_ = np.array(self.model_.sigma)
        self.violations_ = validate_var(self.model_, g)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        """One-step-ahead predictions; the first ``order`` rows are NaN."""
        check_is_fitted(self, "model_")
        X = self._as_array(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError("wrong number of columns")
        p, d = self.order, X.shape[1]
        Z = lag_matrix(X, p)
        B = np.concatenate(list(self.coef_), axis=1)  # (d, p*d), lag-major like Z
        out = np.full(X.shape, np.nan)
        out[p:] = Z @ B.T
        return out

    def transform(self, X):
        """Innovations ``X(t) - prediction``; the first ``order`` rows are NaN."""
        X = self._as_array(X)
        return X - self.predict(X)

    def score(self, X, y=None):
        """Average one-step-ahead R^2 across components."""
        X = self._as_array(X)
        pred = self.predict(X)[self.order:]
        obs = X[self.order:]
        ss_res = ((obs - pred) ** 2).sum(axis=0)
        ss_tot = ((obs - obs.mean(axis=0)) ** 2).sum(axis=0)
        return float(np.mean(1.0 - ss_res / ss_tot))
