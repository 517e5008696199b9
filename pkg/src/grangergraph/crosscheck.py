"""Exhaustive agreement checks between the separation engines."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .graph import MixedGraph, random_graph
from .separation import oracle_path_exists, p_connecting_exists, trail_p_active_exists


@dataclass
class CrossCheck:
    graphs: int = 0
    queries: int = 0
    disagreements: list = field(default_factory=list)

    def merge(self, other: "CrossCheck") -> "CrossCheck":
        self.graphs += other.graphs
        self.queries += other.queries
        self.disagreements.extend(other.disagreements)
        return self


def crosscheck_graph(g: MixedGraph) -> CrossCheck:
    """Compare automaton, path oracle and trail check on every singleton query of ``g``.

    Queries range over ordered pairs ``(a, b)`` and every ``S`` drawn from the
    remaining vertices.
    """
    res = CrossCheck(graphs=1)
    for a, b in itertools.permutations(g.labels, 2):
        rest = [v for v in g.labels if v != a and v != b]
        for r in range(len(rest) + 1):
            for S in itertools.combinations(rest, r):
                auto = p_connecting_exists(g, a, b, S)
                path = oracle_path_exists(g, a, b, S)
                trail = trail_p_active_exists(g, a, b, S)
                res.queries += 1
                if not (auto == path == trail):
                    res.disagreements.append(
                        {"graph": repr(g), "a": a, "b": b, "S": list(S),
                         "automaton": auto, "path_oracle": path, "trail": trail}
                    )
    return res


def random_suite(trials: int, seed: int = 0, max_vertices: int = 5, max_edges: int = 10,
                 self_loops: bool = False) -> list:
    """Deterministic list of random mixed graphs with 2..max_vertices vertices."""
    rng = np.random.default_rng(seed)
    return [
        random_graph(rng, int(rng.integers(2, max_vertices + 1)), max_edges, self_loops=self_loops)
        for _ in range(trials)
    ]


def crosscheck_random(trials: int, seed: int = 0, **kw) -> CrossCheck:
    res = CrossCheck()
    for g in random_suite(trials, seed, **kw):
        res.merge(crosscheck_graph(g))
    return res
