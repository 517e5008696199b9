"""Mixed graphs over component series.

A :class:`MixedGraph` holds directed edges ``a -> b`` and undirected edges
``a -- b``. Directed self-loops are accepted but carry no information about
the interrelationships between components, so every query runs on the
self-loop-free normalization.

Vertex labels are arbitrary hashables (strings when parsed from ``.mg`` files).
Internally each label maps to a dense integer id; ids follow the natural sort
order of the labels, so numeric labels sort numerically.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Hashable, Iterable
from pathlib import Path

import numpy as np

from .errors import GraphFormatError, QueryError

Label = Hashable

__all__ = [
    "MixedGraph",
    "parents",
    "children",
    "neighbours",
    "ancestors",
    "induced_subgraph",
    "marginal_ancestral_graph",
    "undirected_skeleton",
    "parse_mg",
    "read_mg",
    "to_mg",
    "to_dot",
    "random_graph",
    "natural_key",
]


def natural_key(label):
    """Sort key placing integer-like labels first, in numeric order."""
    s = str(label)
    if re.fullmatch(r"-?\d+", s):
        return (0, int(s), s)
    return (1, 0, s)


class MixedGraph:
    """Immutable mixed graph.

    Parameters
    ----------
    vertices : iterable of labels
        Vertices, including isolated ones. Edge endpoints are added
        automatically.
    directed : iterable of (a, b)
        Directed edges ``a -> b``. Self-loops ``(a, a)`` are kept in
        :attr:`self_loops` but ignored by all queries.
    undirected : iterable of (a, b)
        Undirected edges ``a -- b``; ``a == b`` is rejected.
    """

    __slots__ = (
        "labels",
        "_index",
        "directed",
        "undirected",
        "self_loops",
        "_pa",
        "_ch",
        "_ne",
        "_hash",
    )

    def __init__(self, vertices=(), directed=(), undirected=()):
        directed = [tuple(e) for e in directed]
        undirected = [tuple(e) for e in undirected]
        for e in directed + undirected:
            if len(e) != 2:
                raise GraphFormatError(f"edge must have two endpoints, got {e!r}")
        verts = set(vertices)
        for a, b in itertools.chain(directed, undirected):
            verts.add(a)
            verts.add(b)

        labels = tuple(sorted(verts, key=natural_key))
        if len({str(v) for v in labels}) != len(labels):
            raise GraphFormatError("vertex labels must be distinct as strings")
        index = {v: i for i, v in enumerate(labels)}

        loops = frozenset(a for a, b in directed if a == b)
        dset = frozenset((a, b) for a, b in directed if a != b)
        uset = set()
        for a, b in undirected:
            if a == b:
                raise GraphFormatError(f"undirected self-loop at {a!r}")
            uset.add(frozenset((a, b)))

        n = len(labels)
        pa = [set() for _ in range(n)]
        ch = [set() for _ in range(n)]
        ne = [set() for _ in range(n)]
        for a, b in dset:
            ia, ib = index[a], index[b]
            pa[ib].add(ia)
            ch[ia].add(ib)
        for e in uset:
            a, b = tuple(e)
            ia, ib = index[a], index[b]
            ne[ia].add(ib)
            ne[ib].add(ia)

        self.labels = labels
        self._index = index
        self.directed = dset
        self.undirected = frozenset(uset)
        self.self_loops = loops
        self._pa = tuple(frozenset(s) for s in pa)
        self._ch = tuple(frozenset(s) for s in ch)
        self._ne = tuple(frozenset(s) for s in ne)
        self._hash = None

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return (
            set(self.labels) == set(other.labels)
            and self.directed == other.directed
            and self.undirected == other.undirected
            and self.self_loops == other.self_loops
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (frozenset(self.labels), self.directed, self.undirected, self.self_loops)
            )
        return self._hash

    def __repr__(self):
        return (
            f"MixedGraph(vertices={list(self.labels)!r}, "
            f"directed={sorted(self.directed_pairs())!r}, "
            f"undirected={sorted(self.undirected_pairs())!r})"
        )

    def __len__(self):
        return len(self.labels)

    def __contains__(self, v):
        try:
            self.index(v)
        except QueryError:
            return False
        return True

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.labels)

    def normalized(self) -> "MixedGraph":
        """Copy with directed self-loops removed."""
        if not self.self_loops:
            return self
        return MixedGraph(self.labels, self.directed, (tuple(e) for e in self.undirected))

    def directed_pairs(self):
        """Directed edges as ``(a, b)`` tuples, in id order."""
        return sorted(self.directed, key=lambda e: (self._index[e[0]], self._index[e[1]]))

    def undirected_pairs(self):
        """Undirected edges as ``(a, b)`` tuples with ``a`` before ``b`` in id order."""
        out = []
        for e in self.undirected:
            a, b = sorted(e, key=self._index.__getitem__)
            out.append((a, b))
        return sorted(out, key=lambda e: (self._index[e[0]], self._index[e[1]]))

    def has_directed(self, a, b) -> bool:
        return self.index(a) in self._pa[self.index(b)]

    def has_undirected(self, a, b) -> bool:
        return self.index(b) in self._ne[self.index(a)]

    # -- label <-> id -----------------------------------------------------

    def index(self, v) -> int:
        """Integer id of vertex ``v``; string forms of labels are accepted."""
        try:
            return self._index[v]
        except (KeyError, TypeError):
            pass
        s = str(v)
        for label, i in self._index.items():
            if str(label) == s:
                return i
        raise QueryError(f"unknown vertex {v!r}")

    def ids(self, vs) -> frozenset:
        """Integer ids of an iterable of labels (a bare label is one vertex)."""
        if isinstance(vs, (str, bytes)) or not isinstance(vs, Iterable):
            vs = (vs,)
        return frozenset(self.index(v) for v in vs)

    def label_set(self, ids) -> frozenset:
        return frozenset(self.labels[i] for i in ids)

    def sorted_labels(self, vs):
        """Labels of ``vs`` in canonical (id) order."""
        return [self.labels[i] for i in sorted(self.ids(vs))]

    # -- id-level adjacency, used by the path engines -----------------------

    def pa_ids(self, i: int) -> frozenset:
        return self._pa[i]

    def ch_ids(self, i: int) -> frozenset:
        return self._ch[i]

    def ne_ids(self, i: int) -> frozenset:
        return self._ne[i]

    def parents_of(self, ids) -> frozenset:
        ids = frozenset(ids)
        out = set()
        for i in ids:
            out |= self._pa[i]
        return frozenset(out - ids)

    def children_of(self, ids) -> frozenset:
        ids = frozenset(ids)
        out = set()
        for i in ids:
            out |= self._ch[i]
        return frozenset(out - ids)

    def neighbours_of(self, ids) -> frozenset:
        ids = frozenset(ids)
        out = set()
        for i in ids:
            out |= self._ne[i]
        return frozenset(out - ids)

    def ancestors_of(self, ids) -> frozenset:
        seen = set(ids)
        stack = list(seen)
        while stack:
            v = stack.pop()
            for w in self._pa[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return frozenset(seen)

    def relabel(self, mapping) -> "MixedGraph":
        """Graph with every label ``v`` replaced by ``mapping[v]``."""
        return MixedGraph(
            (mapping[v] for v in self.labels),
            [(mapping[a], mapping[b]) for a, b in self.directed]
            + [(mapping[v], mapping[v]) for v in self.self_loops],
            [tuple(mapping[v] for v in e) for e in self.undirected],
        )


# -- public set operations --------------------------------------------------


def parents(g: MixedGraph, A) -> frozenset:
    """``pa(A)``: vertices with a directed edge into ``A``, minus ``A`` itself."""
    return g.label_set(g.parents_of(g.ids(A)))


def children(g: MixedGraph, A) -> frozenset:
    """``ch(A)``: vertices with a directed edge out of ``A``, minus ``A``."""
    return g.label_set(g.children_of(g.ids(A)))


def neighbours(g: MixedGraph, A) -> frozenset:
    """``ne(A)``: vertices joined to ``A`` by an undirected edge, minus ``A``."""
    return g.label_set(g.neighbours_of(g.ids(A)))


def ancestors(g: MixedGraph, A) -> frozenset:
    """Smallest superset of ``A`` closed under taking parents."""
    return g.label_set(g.ancestors_of(g.ids(A)))


def induced_subgraph(g: MixedGraph, A) -> MixedGraph:
    """Subgraph on ``A`` keeping exactly the edges with both endpoints in ``A``."""
    keep = g.label_set(g.ids(A))
    return MixedGraph(
        keep,
        [(a, b) for a, b in g.directed if a in keep and b in keep],
        [tuple(e) for e in g.undirected if e <= keep],
    )


def marginal_ancestral_graph(g: MixedGraph, U) -> MixedGraph:
    """Marginal ancestral graph ``G_[an(U)]``.

    ``U`` is closed under ancestors first. The result is the induced subgraph
    on ``A = an(U)`` plus an undirected edge ``a -- b`` for every pair in
    ``A`` joined by an undirected path of ``g`` whose intermediate vertices
    all lie outside ``A``.
    """
    anc = g.ancestors_of(g.ids(U))
    base = induced_subgraph(g.normalized(), g.label_set(anc))
    extra = set()
    for a in anc:
        # undirected reachability through vertices outside the ancestral set
        seen = {a}
        stack = [a]
        while stack:
            v = stack.pop()
            for w in g.ne_ids(v):
                if w in seen:
                    continue
                seen.add(w)
                if w in anc:
                    if w != a:
                        extra.add(frozenset((g.labels[a], g.labels[w])))
                else:
                    stack.append(w)
    undirected = set(base.undirected) | extra
    return MixedGraph(base.labels, base.directed, [tuple(e) for e in undirected])


def undirected_skeleton(g: MixedGraph) -> MixedGraph:
    """Same vertices, undirected edges only."""
    return MixedGraph(g.labels, (), [tuple(e) for e in g.undirected])


# -- text formats -----------------------------------------------------------

_EDGE_RE = re.compile(r"^(\S+)\s*(->|--)\s*(\S+)$")


def parse_mg(text: str) -> MixedGraph:
    """Parse the line-oriented ``.mg`` graph format.

    ::

        # comment
        vertices: 1 2 3
        1 -> 2
        2 -- 3
    """
    vertices, directed, undirected = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vertices:"):
            vertices.extend(line[len("vertices:"):].split())
            continue
        m = _EDGE_RE.match(line)
        if m is None:
            raise GraphFormatError(f"line {lineno}: cannot parse {raw!r}")
        a, op, b = m.groups()
        if op == "->":
            directed.append((a, b))
        else:
            if a == b:
                raise GraphFormatError(f"line {lineno}: undirected self-loop at {a!r}")
            undirected.append((a, b))
    return MixedGraph(vertices, directed, undirected)


def read_mg(path) -> MixedGraph:
    return parse_mg(Path(path).read_text(encoding="utf-8"))


def to_mg(g: MixedGraph) -> str:
    lines = ["vertices: " + " ".join(str(v) for v in g.labels)]
    loops = sorted(g.self_loops, key=g.index)
    lines += [f"{a} -> {b}" for a, b in g.directed_pairs()]
    lines += [f"{v} -> {v}" for v in loops]
    lines += [f"{a} -- {b}" for a, b in g.undirected_pairs()]
    return "\n".join(lines) + "\n"


def to_dot(g: MixedGraph, name: str = "G") -> str:
    """DOT rendering; undirected edges are drawn as ``dir=none`` arcs."""
    lines = [f"digraph {name} {{"]
    lines += [f'  "{v}";' for v in g.labels]
    lines += [f'  "{a}" -> "{b}";' for a, b in g.directed_pairs()]
    lines += [f'  "{a}" -> "{b}" [dir=none];' for a, b in g.undirected_pairs()]
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- random graphs ----------------------------------------------------------


def random_graph(
    rng: np.random.Generator,
    n_vertices: int,
    max_edges: int,
    p_undirected: float = 0.4,
    self_loops: bool = False,
) -> MixedGraph:
    """Random mixed graph on labels ``1..n_vertices`` with at most ``max_edges`` edges.

    Candidate edges are all ordered pairs (directed) plus all unordered pairs
    (undirected); the edge count is drawn uniformly from ``0..max_edges``.
    """
    labels = [str(i) for i in range(1, n_vertices + 1)]
    cand_d = [(a, b) for a in labels for b in labels if a != b]
    cand_u = list(itertools.combinations(labels, 2))
    m = int(rng.integers(0, max_edges + 1))
    directed, undirected = set(), set()
    for _ in range(m):
        if cand_u and rng.random() < p_undirected:
            undirected.add(cand_u[int(rng.integers(len(cand_u)))])
        else:
            directed.add(cand_d[int(rng.integers(len(cand_d)))])
    if self_loops:
        directed |= {(v, v) for v in labels if rng.random() < 0.5}
    return MixedGraph(labels, sorted(directed), sorted(undirected))
