"""Concept graph model: typed concepts, a closed set of relationship kinds,
and the merge/measure primitives everything else builds on.

A graph is identified by its normalized concept labels.  Relationship kinds
split into directed hierarchy kinds (detailing, goal, causal, broader_context),
which must stay acyclic, and undirected kinds (alternative, negation,
connected), which are stored with canonical endpoint order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum


class RelationKind(str, Enum):
    BROADER_CONTEXT = "broader_context"
    DETAILING = "detailing"
    ALTERNATIVE = "alternative"
    CAUSAL = "causal"
    NEGATION = "negation"
    CONNECTED = "connected"
    GOAL = "goal"


# Directed kinds participate in path enumeration and must form a DAG.
HIERARCHY_KINDS = frozenset(
    {
        RelationKind.DETAILING,
        RelationKind.GOAL,
        RelationKind.CAUSAL,
        RelationKind.BROADER_CONTEXT,
    }
)

UNDIRECTED_KINDS = frozenset(
    {RelationKind.ALTERNATIVE, RelationKind.NEGATION, RelationKind.CONNECTED}
)


class Explicitness(str, Enum):
    EXPLICIT = "explicit"
    IMPLIED = "implied"


class GraphError(ValueError):
    """Raised on structural violations; ``code`` is a stable machine name."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


_WS = re.compile(r"\s+")


def normalize_label(text: str) -> str:
    """Lowercase and collapse internal whitespace; this is concept identity."""
    return _WS.sub(" ", text.strip()).lower()


@dataclass(frozen=True)
class Origin:
    """Provenance of a concept: the author's own text or an LLM response."""

    kind: str  # "author" | "llm"
    response_id: str | None = None

    AUTHOR_KIND = "author"
    LLM_KIND = "llm"

    def __post_init__(self):
        if self.kind not in (self.AUTHOR_KIND, self.LLM_KIND):
            raise GraphError("bad-origin", f"unknown origin kind: {self.kind!r}")
        if self.kind == self.LLM_KIND and not self.response_id:
            raise GraphError("bad-origin", "llm origin requires a response id")
        if self.kind == self.AUTHOR_KIND and self.response_id is not None:
            raise GraphError("bad-origin", "author origin carries no response id")

    @classmethod
    def author(cls) -> Origin:
        return cls(cls.AUTHOR_KIND)

    @classmethod
    def llm(cls, response_id: str) -> Origin:
        return cls(cls.LLM_KIND, response_id)

    def is_llm(self) -> bool:
        return self.kind == self.LLM_KIND

    def encode(self) -> str:
        return "author" if self.kind == self.AUTHOR_KIND else f"llm:{self.response_id}"

    @classmethod
    def decode(cls, text: str) -> Origin:
        if text == "author":
            return cls.author()
        if text.startswith("llm:") and len(text) > 4:
            return cls.llm(text[4:])
        raise GraphError("bad-origin", f"cannot decode origin {text!r}")


@dataclass(frozen=True)
class Attribute:
    """A qualifier attached to a concept; polarity is filled by a lexicon."""

    text: str
    polarity: str | None = None  # "positive" | "negative" | "neutral" | None


@dataclass(frozen=True)
class Concept:
    label: str  # normalized; doubles as the concept id
    attributes: tuple[Attribute, ...] = ()
    origin: Origin = field(default_factory=Origin.author)
    cluster: str | None = None

    def __post_init__(self):
        normalized = normalize_label(self.label)
        if not normalized:
            raise GraphError("empty-label", "concept label is empty")
        object.__setattr__(self, "label", normalized)

    @property
    def id(self) -> str:
        return self.label


@dataclass(frozen=True)
class Relationship:
    source: str  # concept id
    target: str  # concept id
    kind: RelationKind
    explicitness: Explicitness = Explicitness.EXPLICIT

    def __post_init__(self):
        if self.source == self.target:
            raise GraphError("self-loop", f"self relationship on {self.source!r}")
        # Undirected kinds get one canonical representation.
        if self.kind in UNDIRECTED_KINDS and self.target < self.source:
            a, b = self.target, self.source
            object.__setattr__(self, "source", a)
            object.__setattr__(self, "target", b)

    def endpoints(self) -> tuple[str, str]:
        return (self.source, self.target)


@dataclass(frozen=True)
class ConceptGraph:
    """Immutable concept graph with canonical internal ordering."""

    concepts: tuple[Concept, ...]
    relationships: tuple[Relationship, ...]

    def concept(self, concept_id: str) -> Concept:
        found = self.concepts_by_id().get(concept_id)
        if found is None:
            raise GraphError("unknown-concept", f"no concept {concept_id!r}")
        return found

    def concepts_by_id(self) -> dict[str, Concept]:
        return {c.id: c for c in self.concepts}

    def has_concept(self, concept_id: str) -> bool:
        return any(c.id == concept_id for c in self.concepts)

    def labels(self) -> set[str]:
        return {c.label for c in self.concepts}

    def edges_of_kinds(self, kinds: frozenset[RelationKind]) -> list[Relationship]:
        return [r for r in self.relationships if r.kind in kinds]


def build_graph(
    concepts: list[Concept] | tuple[Concept, ...],
    relationships: list[Relationship] | tuple[Relationship, ...] = (),
) -> ConceptGraph:
    """Assemble and validate a graph.

    Rejects duplicate normalized labels, relationship endpoints that name no
    concept, and cycles in the directed hierarchy kinds.  Construction is
    order-independent: the result is canonically sorted.
    """
    seen: dict[str, Concept] = {}
    for concept in concepts:
        if concept.label in seen:
            raise GraphError(
                "duplicate-label", f"duplicate concept label {concept.label!r}"
            )
        seen[concept.label] = concept

    unique: dict[tuple[str, str, RelationKind], Relationship] = {}
    for rel in relationships:
        for end in rel.endpoints():
            if end not in seen:
                raise GraphError(
                    "dangling-endpoint",
                    f"relationship endpoint {end!r} names no declared concept",
                )
        unique.setdefault((rel.source, rel.target, rel.kind), rel)

    ordered_concepts = tuple(sorted(seen.values(), key=lambda c: c.label))
    ordered_rels = tuple(
        sorted(unique.values(), key=lambda r: (r.kind.value, r.source, r.target))
    )
    graph = ConceptGraph(ordered_concepts, ordered_rels)
    cycle = _find_hierarchy_cycle(graph)
    if cycle:
        raise GraphError(
            "cycle-in-hierarchy",
            "hierarchy kinds must stay acyclic; cycle: " + " -> ".join(cycle),
        )
    return graph


def merge_graphs(base: ConceptGraph, delta: ConceptGraph) -> ConceptGraph:
    """Fuse ``delta`` into ``base`` by normalized label.

    A delta concept matching a base label keeps the base origin and cluster;
    attribute lists are unioned.  Relationships are unioned with duplicates
    collapsed.  A cycle created by the union is rejected.
    """
    merged: dict[str, Concept] = {c.label: c for c in base.concepts}
    for concept in delta.concepts:
        existing = merged.get(concept.label)
        if existing is None:
            merged[concept.label] = concept
            continue
        attrs = list(existing.attributes)
        known = {(a.text, a.polarity) for a in attrs}
        for attr in concept.attributes:
            if (attr.text, attr.polarity) not in known:
                attrs.append(attr)
                known.add((attr.text, attr.polarity))
        merged[concept.label] = Concept(
            label=existing.label,
            attributes=tuple(attrs),
            origin=existing.origin,
            cluster=existing.cluster if existing.cluster is not None else concept.cluster,
        )
    rels = list(base.relationships) + list(delta.relationships)
    try:
        return build_graph(list(merged.values()), rels)
    except GraphError as err:
        if err.code == "cycle-in-hierarchy":
            raise GraphError("merged-cycle", str(err)) from err
        raise


def degree(
    graph: ConceptGraph,
    concept_id: str,
    kinds: frozenset[RelationKind] | None = None,
) -> int:
    """Count distinct neighbors over the selected kinds, both directions."""
    graph.concept(concept_id)
    selected = kinds if kinds is not None else frozenset(RelationKind)
    neighbors: set[str] = set()
    for rel in graph.relationships:
        if rel.kind not in selected:
            continue
        if rel.source == concept_id:
            neighbors.add(rel.target)
        elif rel.target == concept_id:
            neighbors.add(rel.source)
    return len(neighbors)


def components(
    graph: ConceptGraph,
    kinds: frozenset[RelationKind] | None = None,
) -> list[list[str]]:
    """Connected components over an undirected view of the selected kinds.

    Every concept appears in exactly one component; singletons included.
    Components are sorted by size descending, then by first member label;
    members are sorted by label.
    """
    selected = kinds if kinds is not None else frozenset(RelationKind)
    parent = {c.id: c.id for c in graph.concepts}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rel in graph.relationships:
        if rel.kind in selected:
            ra, rb = find(rel.source), find(rel.target)
            if ra != rb:
                parent[ra] = rb

    groups: dict[str, list[str]] = {}
    for c in graph.concepts:
        groups.setdefault(find(c.id), []).append(c.id)
    result = [sorted(members) for members in groups.values()]
    result.sort(key=lambda ms: (-len(ms), ms[0]))
    return result


def _find_hierarchy_cycle(graph: ConceptGraph) -> list[str] | None:
    """Return one hierarchy cycle as a label sequence, or None."""
    adjacency: dict[str, list[str]] = {c.id: [] for c in graph.concepts}
    for rel in graph.edges_of_kinds(HIERARCHY_KINDS):
        adjacency[rel.source].append(rel.target)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in adjacency}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        stack.append(node)
        for nxt in adjacency[node]:
            if color[nxt] == GRAY:
                return stack[stack.index(nxt) :] + [nxt]
            if color[nxt] == WHITE:
                found = visit(nxt)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for node in sorted(adjacency):
        if color[node] == WHITE:
            found = visit(node)
            if found:
                return found
    return None


@dataclass(frozen=True)
class AnalogyPair:
    """Two concepts treated as counterparts, with their matched attributes."""

    source: str
    target: str
    attribute_pairs: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class AnalogyMap:
    pairs: tuple[AnalogyPair, ...]
