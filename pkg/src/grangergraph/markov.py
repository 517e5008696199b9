"""Granger-causal Markov statements read off a mixed graph.

Pairwise (PC), local (LC) and block-recursive (BC) properties are finite
lists of statements at full information ``V`` and can be enumerated. The
global properties, Granger-causal (GC) and AMP (GA), are exposed as queries
for arbitrary disjoint ``A``, ``B``, ``S``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import QueryError
from .graph import MixedGraph
from .separation import b_pointing_blocked, ext_bipointing_blocked, p_separated

__all__ = [
    "StatementKind",
    "MarkovLevel",
    "MarkovStatement",
    "enumerate_statements",
    "gc_noncausal",
    "gc_contemp",
    "ga_condindep",
    "psep_granger_bundle",
    "format_statement",
]


class StatementKind(enum.IntEnum):
    NONCAUSAL = 0
    CONTEMP_CI = 1
    COND_INDEP = 2


class MarkovLevel(enum.Enum):
    PC = "pc"
    LC = "lc"
    BC = "bc"
    GC = "gc"
    GA = "ga"


@dataclass(frozen=True)
class MarkovStatement:
    """One noncausality, contemporaneous-CI or conditional-independence claim.

    ``source`` and ``target`` are tuples of labels in canonical order.
    ``information`` is the set whose filtration conditions the claim; for
    ``COND_INDEP`` it is the separating set.
    """

    kind: StatementKind
    source: tuple
    target: tuple
    information: tuple

    def __str__(self):
        return format_statement(self)

    def to_dict(self):
        return {
            "kind": self.kind.name.lower(),
            "source": [str(v) for v in self.source],
            "target": [str(v) for v in self.target],
            "information": [str(v) for v in self.information],
        }


def _braces(labels) -> str:
    return "{" + ",".join(str(v) for v in labels) + "}"


def format_statement(st: MarkovStatement) -> str:
    """One-line text form, e.g. ``noncausal {1} -/-> {4} | info={1,2,3,4,5}``."""
    src, tgt, info = _braces(st.source), _braces(st.target), _braces(st.information)
    if st.kind is StatementKind.NONCAUSAL:
        return f"noncausal {src} -/-> {tgt} | info={info}"
    if st.kind is StatementKind.CONTEMP_CI:
        return f"contemp {src} <-/-> {tgt} | info={info}"
    return f"condindep {src} _||_ {tgt} | {info}"


def _level(level) -> MarkovLevel:
    if isinstance(level, MarkovLevel):
        return level
    try:
        return MarkovLevel(str(level).lower())
    except ValueError:
        raise QueryError(f"unknown Markov level {level!r}") from None


def enumerate_statements(g: MixedGraph, level, max_block: int = 3) -> list:
    """All statements of the pairwise, local or block-recursive property.

    Statements with an empty source set are vacuous and omitted. The output
    is sorted by kind, then by source and target ids.
    """
    level = _level(level)
    if level in (MarkovLevel.GC, MarkovLevel.GA):
        raise QueryError(f"level {level.name} is query-only and cannot be enumerated")
    g = g.normalized()
    V = frozenset(range(g.n))
    info = tuple(g.labels)

    def stmt(kind, src, tgt):
        return MarkovStatement(
            kind,
            tuple(g.labels[i] for i in sorted(src)),
            tuple(g.labels[i] for i in sorted(tgt)),
            info,
        )

    keyed = {}

    def add(kind, src, tgt):
        if not src:
            return
        key = (kind, tuple(sorted(src)), tuple(sorted(tgt)))
        keyed[key] = stmt(kind, src, tgt)

    if level is MarkovLevel.PC:
        for a, b in itertools.permutations(range(g.n), 2):
            if a not in g.pa_ids(b):
                add(StatementKind.NONCAUSAL, {a}, {b})
        for a, b in itertools.combinations(range(g.n), 2):
            if b not in g.ne_ids(a):
                add(StatementKind.CONTEMP_CI, {a}, {b})
    else:
        if level is MarkovLevel.LC:
            blocks = [frozenset((a,)) for a in range(g.n)]
        else:
            if max_block < 1:
                raise QueryError("max_block must be positive")
            blocks = [
                frozenset(c)
                for k in range(1, min(max_block, g.n) + 1)
                for c in itertools.combinations(range(g.n), k)
            ]
        for A in blocks:
            add(StatementKind.NONCAUSAL, V - g.parents_of(A) - A, A)
            add(StatementKind.CONTEMP_CI, V - g.neighbours_of(A) - A, A)

    return [keyed[k] for k in sorted(keyed)]


def _sets(g, A, B, S):
    A, B, S = g.ids(A), g.ids(B), g.ids(S)
    if not A or not B:
        raise QueryError("A and B must be nonempty")
    for x, y, name in ((A, B, "A and B"), (A, S, "A and S"), (B, S, "B and S")):
        if x & y:
            raise QueryError(f"sets {name} overlap")
    return g.label_set(A), g.label_set(B), g.label_set(S)


def gc_noncausal(g: MixedGraph, A, B, S=()) -> bool:
    """Does the graph license ``X_A -/-> X_B`` with respect to ``F_{A|B|S}``."""
    A, B, S = _sets(g, A, B, S)
    return b_pointing_blocked(g, A, B, S | B)


def gc_contemp(g: MixedGraph, A, B, S=()) -> bool:
    """Does the graph license contemporaneous CI of ``X_A``, ``X_B`` w.r.t. ``F_{A|B|S}``."""
    A, B, S = _sets(g, A, B, S)
    return ext_bipointing_blocked(g, A, B, A | B | S)


def ga_condindep(g: MixedGraph, A, B, S=()) -> bool:
    """Global AMP property: ``X_A`` and ``X_B`` independent given ``X_S`` (whole series)."""
    A, B, S = _sets(g, A, B, S)
    return p_separated(g, A, B, S)


def psep_granger_bundle(g: MixedGraph, A, B, S=()):
    """``(A -/-> B, B -/-> A, A contemp-CI B)``, all w.r.t. ``F_{A|B|S}``."""
    return (
        gc_noncausal(g, A, B, S),
        gc_noncausal(g, B, A, S),
        gc_contemp(g, A, B, S),
    )
