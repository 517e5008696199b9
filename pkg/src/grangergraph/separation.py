"""p-separation and its pointing-path variants.

Paths may be self-intersecting. An intermediate vertex is a *p-collider* when
neither adjacent edge has a tail at it and the two edges are not both lines
(``->c<-``, ``->c--``, ``--c<-``). A path is *p-connecting* given ``C`` when
every collider occurrence lies in ``C`` and every non-collider occurrence lies
outside ``C``.

Three engines answer the same questions:

* :func:`p_connecting_exists` and the set-level wrappers run a reachability
  search over (vertex, arrival mark, phase) states. Collider status depends
  only on the two marks meeting at a vertex, so this finite search is exact.
* :func:`oracle_path_exists` enumerates concrete paths depth-first, never
  reusing an oriented edge traversal (within a segment, for the extended
  bi-pointing kind), and checks the definitions literally on each path.
* :func:`trail_p_active_exists` enumerates trails and applies the original
  AMP activity conditions.

The last two exist to cross-check the first.
"""

from __future__ import annotations

import enum
from typing import NamedTuple

from .errors import QueryError
from .graph import MixedGraph, marginal_ancestral_graph

__all__ = [
    "Mark",
    "PathKind",
    "Traversal",
    "collider_status",
    "is_collider",
    "traversals",
    "is_p_connecting",
    "is_b_pointing",
    "is_extended_bipointing",
    "p_connecting_exists",
    "p_separated",
    "b_pointing_blocked",
    "ext_bipointing_blocked",
    "pure_collider_check",
    "pure_collider_path_exists",
    "extend_separation",
    "trail_p_active_exists",
    "oracle_path_exists",
    "oracle_find_path",
]


class Mark(enum.Enum):
    """Edge mark at one endpoint."""

    HEAD = "head"
    TAIL = "tail"
    LINE = "line"


class PathKind(enum.Enum):
    ANY = "any"
    B_POINTING = "b-pointing"
    EXTENDED_BIPOINTING = "extended-bi-pointing"


class Traversal(NamedTuple):
    """One edge walked in one direction, in integer vertex ids.

    ``depart`` is the mark at ``start``, ``arrive`` the mark at ``end``.
    """

    start: int
    end: int
    depart: Mark
    arrive: Mark

    @property
    def directed(self) -> bool:
        return self.depart is not Mark.LINE


COLLIDER = "collider"
NONCOLLIDER = "noncollider"


def is_collider(arrival: Mark, departure: Mark) -> bool:
    if arrival is Mark.TAIL or departure is Mark.TAIL:
        return False
    return not (arrival is Mark.LINE and departure is Mark.LINE)


def collider_status(arrival: Mark, departure: Mark) -> str:
    """``"collider"`` or ``"noncollider"`` for the marks meeting at a vertex."""
    return COLLIDER if is_collider(arrival, departure) else NONCOLLIDER


def traversals(g: MixedGraph):
    """Outgoing oriented traversals per vertex id, in deterministic order."""
    out = [[] for _ in range(g.n)]
    for v in range(g.n):
        for w in sorted(g.ch_ids(v)):
            out[v].append(Traversal(v, w, Mark.TAIL, Mark.HEAD))
        for w in sorted(g.pa_ids(v)):
            out[v].append(Traversal(v, w, Mark.HEAD, Mark.TAIL))
        for w in sorted(g.ne_ids(v)):
            out[v].append(Traversal(v, w, Mark.LINE, Mark.LINE))
    return out


# -- literal path predicates ------------------------------------------------


def is_p_connecting(path, C) -> bool:
    """Check every intermediate occurrence on ``path`` against ``C``."""
    C = frozenset(C)
    for prev, nxt in zip(path, path[1:]):
        v = prev.end
        if is_collider(prev.arrive, nxt.depart) != (v in C):
            return False
    return True


def is_b_pointing(path) -> bool:
    """Arrowhead at the final endpoint."""
    return bool(path) and path[-1].arrive is Mark.HEAD


def _is_undirected(seg) -> bool:
    return all(t.depart is Mark.LINE for t in seg)


def _is_bipointing(seg) -> bool:
    return bool(seg) and seg[0].depart is Mark.HEAD and seg[-1].arrive is Mark.HEAD


def is_extended_bipointing(path) -> bool:
    """Whether ``path`` splits as undirected + bi-pointing + undirected.

    Every split point pair is tried; the bi-pointing middle may be empty only
    if the whole path is undirected.
    """
    path = list(path)
    n = len(path)
    if _is_undirected(path):
        return True
    for i in range(n + 1):
        if not _is_undirected(path[:i]):
            break
        for j in range(n, i, -1):
            if not _is_undirected(path[j:]):
                break
            if _is_bipointing(path[i:j]):
                return True
    return False


# -- automaton --------------------------------------------------------------


def _step_phase(kind: PathKind, phase: int, t: Traversal):
    """Phase after taking ``t``; None when the path can no longer qualify.

    Extended bi-pointing phases: 0 undirected prefix, 1 inside the middle
    segment with last directed arrival a tail, 2 last directed arrival a head.
    """
    if kind is not PathKind.EXTENDED_BIPOINTING or not t.directed:
        return phase
    if phase == 0 and t.depart is not Mark.HEAD:
        return None
    return 2 if t.arrive is Mark.HEAD else 1


def _accepts(kind: PathKind, phase: int, t: Traversal) -> bool:
    if kind is PathKind.ANY:
        return True
    if kind is PathKind.B_POINTING:
        return t.arrive is Mark.HEAD
    return phase in (0, 2)


def _connected(g: MixedGraph, A: frozenset, B: frozenset, C: frozenset, kind: PathKind) -> bool:
    out = traversals(g)
    seen = set()
    stack = []

    def push(t, phase):
        phase = _step_phase(kind, phase, t)
        if phase is None:
            return False
        if t.end in B and _accepts(kind, phase, t):
            return True
        state = (t.end, t.arrive, phase)
        if state not in seen:
            seen.add(state)
            stack.append(state)
        return False

    for a in sorted(A):
        for t in out[a]:
            if push(t, 0):
                return True
    while stack:
        v, arrive, phase = stack.pop()
        in_c = v in C
        for t in out[v]:
            if is_collider(arrive, t.depart) != in_c:
                continue
            if push(t, phase):
                return True
    return False


# -- argument handling ------------------------------------------------------


def _kind(kind) -> PathKind:
    if isinstance(kind, PathKind):
        return kind
    try:
        return PathKind(kind)
    except ValueError:
        raise QueryError(f"unknown path kind {kind!r}") from None


def _disjoint(**sets):
    names = list(sets)
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            common = sets[x] & sets[y]
            if common:
                raise QueryError(f"sets {x} and {y} overlap")


def p_connecting_exists(g: MixedGraph, a, b, S, kind=PathKind.ANY) -> bool:
    """Whether a path of ``kind`` between ``a`` and ``b`` is p-connecting given ``S``.

    For ``ANY`` the endpoints must lie outside ``S``. The pointing kinds are
    evaluated against conditioning sets that routinely contain the endpoints,
    so no such restriction applies there.
    """
    kind = _kind(kind)
    ia, ib = g.index(a), g.index(b)
    S = g.ids(S)
    if ia == ib:
        raise QueryError("endpoints must differ")
    if kind is PathKind.ANY and (ia in S or ib in S):
        raise QueryError("endpoints must not be in the conditioning set")
    return _connected(g, frozenset((ia,)), frozenset((ib,)), S, kind)


def p_separated(g: MixedGraph, A, B, S=()) -> bool:
    """``A`` and ``B`` are p-separated given ``S``."""
    A, B, S = g.ids(A), g.ids(B), g.ids(S)
    if not A or not B:
        raise QueryError("A and B must be nonempty")
    _disjoint(A=A, B=B, S=S)
    return not _connected(g, A, B, S, PathKind.ANY)


def b_pointing_blocked(g: MixedGraph, A, B, C) -> bool:
    """Every B-pointing path between ``A`` and ``B`` is p-blocked given ``C``.

    ``C`` is the full conditioning set, usually ``S | B``.
    """
    A, B, C = g.ids(A), g.ids(B), g.ids(C)
    _disjoint(A=A, B=B)
    _disjoint(A=A, C=C)
    return not _connected(g, A, B, C, PathKind.B_POINTING)


def ext_bipointing_blocked(g: MixedGraph, A, B, C) -> bool:
    """Every extended bi-pointing path between ``A`` and ``B`` is p-blocked given ``C``."""
    A, B, C = g.ids(A), g.ids(B), g.ids(C)
    _disjoint(A=A, B=B)
    return not _connected(g, A, B, C, PathKind.EXTENDED_BIPOINTING)


def pure_collider_check(g: MixedGraph, A, B) -> bool:
    """Local criterion for ``A`` and ``B`` being separated by everything else.

    True iff ``(A | ch(A))`` misses ``(B | ch(B))`` and so does ``ne(A | ch(A))``.
    """
    A, B = g.ids(A), g.ids(B)
    _disjoint(A=A, B=B)
    a_ext = A | g.children_of(A)
    b_ext = B | g.children_of(B)
    if a_ext & b_ext:
        return False
    return not (g.neighbours_of(a_ext) & b_ext)


def pure_collider_path_exists(g: MixedGraph, A, B) -> bool:
    """Whether some path between ``A`` and ``B`` has only colliders as intermediates."""
    A, B = g.ids(A), g.ids(B)
    _disjoint(A=A, B=B)
    return _oracle(g, A, B, frozenset(), PathKind.ANY, pure_collider=True) is not None


def extend_separation(g: MixedGraph, A, B, S=()):
    """Grow a separation of ``A`` and ``B`` to a partition of ``an(A | B | S)``.

    Returns ``(A2, B2)`` with ``A <= A2``, ``B <= B2``,
    ``A2 | B2 | S == an(A | B | S)`` and ``A2`` p-separated from ``B2``
    given ``S``; returns None when ``A`` and ``B`` are not p-separated.
    """
    if not p_separated(g, A, B, S):
        return None
    Ai, Bi, Si = g.ids(A), g.ids(B), g.ids(S)
    anc = g.ancestors_of(Ai | Bi | Si)
    mag = marginal_ancestral_graph(g, g.label_set(anc))
    B_lab = g.label_set(Bi)
    S_lab = g.label_set(Si)
    a_ext = frozenset(
        v
        for v in mag.labels
        if v not in B_lab and v not in S_lab and p_separated(mag, (v,), B_lab, S_lab)
    )
    b_ext = frozenset(mag.labels) - a_ext - S_lab
    return a_ext, b_ext


# -- oracles ----------------------------------------------------------------


def _oracle(g, A, B, C, kind, pure_collider=False):
    """Depth-first enumeration of concrete paths; returns a witness or None.

    A prefix whose intermediate vertices already violate the connecting
    conditions is abandoned, since every extension inherits the violation.
    """
    out = traversals(g)

    def ok_junction(prev, nxt):
        col = is_collider(prev.arrive, nxt.depart)
        if pure_collider:
            return col
        return col == (prev.end in C)

    def accept(path):
        if path[-1].end not in B:
            return False
        if not pure_collider and not is_p_connecting(path, C):
            return False
        if kind is PathKind.B_POINTING:
            return is_b_pointing(path)
        if kind is PathKind.EXTENDED_BIPOINTING:
            return is_extended_bipointing(path)
        return True

    if kind is not PathKind.EXTENDED_BIPOINTING:
        path, used = [], set()

        def dfs():
            if path and accept(path):
                return True
            v = path[-1].end if path else None
            for t in out[v]:
                if t in used or not ok_junction(path[-1], t):
                    continue
                used.add(t)
                path.append(t)
                if dfs():
                    return True
                path.pop()
                used.discard(t)
            return False

        for a in sorted(A):
            for t in out[a]:
                path, used = [t], {t}
                if dfs():
                    return list(path)
        return None

    # Extended bi-pointing: segments u1 (undirected), beta (bi-pointing), u2
    # (undirected); an oriented traversal is not reused within one segment.
    path = []
    used = [set(), set(), set()]

    def allowed(seg, t):
        if seg != 1 and t.directed:
            return False
        if seg == 1 and not any(s == 1 for s in seg_of):
            return t.depart is Mark.HEAD
        return True

    seg_of = []

    def extend(t, seg):
        if t in used[seg] or not allowed(seg, t):
            return False
        if path and not ok_junction(path[-1], t):
            return False
        used[seg].add(t)
        path.append(t)
        seg_of.append(seg)
        if dfs(seg):
            return True
        seg_of.pop()
        path.pop()
        used[seg].discard(t)
        return False

    def dfs(seg):
        if accept(path):
            return True
        v = path[-1].end
        for t in out[v]:
            if extend(t, seg):
                return True
            # switch to the next segment before taking t
            if seg == 0 and extend(t, 1):
                return True
            if seg == 1 and path[-1].arrive is Mark.HEAD and extend(t, 2):
                return True
        return False

    for a in sorted(A):
        for t in out[a]:
            for seg in (0, 1):
                if extend(t, seg):
                    return list(path)
    return None


def oracle_find_path(g: MixedGraph, a, b, S, kind=PathKind.ANY):
    """Witness path (list of :class:`Traversal`) or None; see :func:`oracle_path_exists`."""
    kind = _kind(kind)
    return _oracle(g, g.ids(a), g.ids(b), g.ids(S), kind)


def oracle_path_exists(g: MixedGraph, a, b, S, kind=PathKind.ANY) -> bool:
    """Brute-force counterpart of :func:`p_connecting_exists`.

    Enumerates paths in which no oriented traversal repeats (per segment for
    the extended bi-pointing kind). Cutting the loop between two uses of the
    same oriented traversal leaves a path that is still connecting and of the
    same kind, so the restriction loses no witness.
    """
    return oracle_find_path(g, a, b, S, kind) is not None


def trail_p_active_exists(g: MixedGraph, a, b, S) -> bool:
    """AMP criterion: is some trail between ``a`` and ``b`` p-active relative to ``S``.

    A trail visits no vertex twice. It is active when every collider is in
    ``an(S)`` and every non-collider is outside ``S`` or sits between two
    lines and has a parent outside ``S``.
    """
    ia, ib = g.index(a), g.index(b)
    S = g.ids(S)
    if ia == ib:
        raise QueryError("endpoints must differ")
    an_s = g.ancestors_of(S)
    out = traversals(g)

    def active(prev, nxt):
        v = prev.end
        if is_collider(prev.arrive, nxt.depart):
            return v in an_s
        if v not in S:
            return True
        return (
            prev.arrive is Mark.LINE
            and nxt.depart is Mark.LINE
            and bool(g.pa_ids(v) - S)
        )

    def dfs(prev, visited):
        for t in out[prev.end]:
            if t.end in visited or not active(prev, t):
                continue
            if t.end == ib:
                return True
            visited.add(t.end)
            if dfs(t, visited):
                return True
            visited.discard(t.end)
        return False

    for t in out[ia]:
        if t.end == ib:
            return True
        if dfs(t, {ia, t.end}):
            return True
    return False
