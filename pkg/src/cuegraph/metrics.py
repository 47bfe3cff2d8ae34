"""Graph measurements: hierarchy paths and their growth between revisions,
degree centrality, unexplored and unconnected material, attribute polarity
clashes across an analogy, and causal chain length.

All outputs are deterministically ordered so reports diff cleanly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .graph import (
    AnalogyMap,
    AnalogyPair,
    ConceptGraph,
    Explicitness,
    HIERARCHY_KINDS,
    RelationKind,
    degree,
    normalize_label,
)

POSITIVE = "positive"
NEGATIVE = "negative"
NEUTRAL = "neutral"


class MetricsError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class PathReport:
    """Maximal directed paths over the hierarchy kinds.

    A path runs from a source (no incoming hierarchy edge) to a sink and
    needs at least one edge; lengths count edges.  ``breadth`` is the number
    of distinct sources that originate a path.
    """

    paths: tuple[tuple[str, ...], ...]
    length_histogram: dict[int, int]
    max_depth: int
    breadth: int


@dataclass(frozen=True)
class PathDelta:
    """Paths of the merged graph absent from the base graph, by label sequence."""

    new_paths: tuple[tuple[str, ...], ...]
    length_histogram: dict[int, int]


def _hierarchy_adjacency(graph: ConceptGraph) -> tuple[dict[str, list[str]], set[str]]:
    # Parallel edges of different kinds collapse: a path is a concept sequence.
    children: dict[str, set[str]] = {c.id: set() for c in graph.concepts}
    has_incoming: set[str] = set()
    for rel in graph.edges_of_kinds(HIERARCHY_KINDS):
        children[rel.source].add(rel.target)
        has_incoming.add(rel.target)
    return {parent: sorted(kids) for parent, kids in children.items()}, has_incoming


def enumerate_paths(graph: ConceptGraph) -> PathReport:
    """Enumerate every maximal hierarchy path, ordered by label sequence."""
    children, has_incoming = _hierarchy_adjacency(graph)
    sources = [c for c in sorted(children) if c not in has_incoming and children[c]]
    paths: list[tuple[str, ...]] = []

    def walk(path: list[str]):
        kids = children[path[-1]]
        if not kids:
            paths.append(tuple(path))
            return
        for kid in kids:
            walk(path + [kid])

    for source in sources:
        walk([source])
    paths.sort()
    histogram: dict[int, int] = {}
    for path in paths:
        histogram[len(path) - 1] = histogram.get(len(path) - 1, 0) + 1
    return PathReport(
        paths=tuple(paths),
        length_histogram=dict(sorted(histogram.items())),
        max_depth=max((len(p) - 1 for p in paths), default=0),
        breadth=len({p[0] for p in paths}),
    )


def delta_paths(base: ConceptGraph, merged: ConceptGraph) -> PathDelta:
    """Report paths introduced by a merge; requires merged ⊇ base by label."""
    missing = base.labels() - merged.labels()
    if missing:
        raise MetricsError(
            "not-a-superset",
            "merged graph lacks base concepts: " + ", ".join(sorted(missing)),
        )
    known = set(enumerate_paths(base).paths)
    new = tuple(p for p in enumerate_paths(merged).paths if p not in known)
    histogram: dict[int, int] = {}
    for path in new:
        histogram[len(path) - 1] = histogram.get(len(path) - 1, 0) + 1
    return PathDelta(new_paths=new, length_histogram=dict(sorted(histogram.items())))


def centrality_report(graph: ConceptGraph) -> list[tuple[str, int]]:
    """All concepts ranked by degree over every kind, ties broken by label."""
    ranked = [(c.id, degree(graph, c.id)) for c in graph.concepts]
    ranked.sort(key=lambda item: (-item[1], item[0]))
    return ranked


@dataclass(frozen=True)
class UnexploredReport:
    # LLM-origin concepts in components that touch no author concept and
    # that no explored cue text mentions.
    unanchored_llm: tuple[str, ...]
    # Author concepts with no LLM-origin neighbor.
    author_without_llm: tuple[str, ...]


def unexplored_report(
    graph: ConceptGraph, explored_texts: tuple[str, ...] | list[str] = ()
) -> UnexploredReport:
    by_id = graph.concepts_by_id()
    normalized_texts = [normalize_label(t) for t in explored_texts if t.strip()]

    # Union-find over every kind: a concept counts as anchored when its
    # component contains any author-origin concept.
    parent = {c.id: c.id for c in graph.concepts}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for rel in graph.relationships:
        ra, rb = find(rel.source), find(rel.target)
        if ra != rb:
            parent[ra] = rb
    anchored_roots = {find(c.id) for c in graph.concepts if not c.origin.is_llm()}

    def referenced(label: str) -> bool:
        return any(label in text for text in normalized_texts)

    unanchored = tuple(
        c.id
        for c in graph.concepts
        if c.origin.is_llm() and find(c.id) not in anchored_roots and not referenced(c.label)
    )

    neighbors: dict[str, set[str]] = {c.id: set() for c in graph.concepts}
    for rel in graph.relationships:
        neighbors[rel.source].add(rel.target)
        neighbors[rel.target].add(rel.source)
    lonely_authors = tuple(
        c.id
        for c in graph.concepts
        if not c.origin.is_llm()
        and not any(by_id[n].origin.is_llm() for n in neighbors[c.id])
    )
    return UnexploredReport(unanchored, lonely_authors)


@dataclass(frozen=True)
class UnconnectedReport:
    isolated: tuple[str, ...]  # degree 0 over every kind
    implied_only_bridges: tuple[tuple[str, str], ...]  # pairs joined solely by implied edges


def unconnected_report(graph: ConceptGraph) -> UnconnectedReport:
    isolated = tuple(c.id for c in graph.concepts if degree(graph, c.id) == 0)
    pair_flags: dict[tuple[str, str], bool] = {}
    for rel in graph.relationships:
        pair = tuple(sorted(rel.endpoints()))
        all_implied = pair_flags.get(pair, True)
        pair_flags[pair] = all_implied and rel.explicitness is Explicitness.IMPLIED
    bridges = tuple(sorted(pair for pair, implied in pair_flags.items() if implied))
    return UnconnectedReport(isolated, bridges)


class PolarityLexicon:
    """Case-insensitive attribute -> polarity table; unknown words are neutral."""

    def __init__(self, table: dict[str, str] | None = None):
        self._table: dict[str, str] = {}
        for word, polarity in (table or {}).items():
            if polarity not in (POSITIVE, NEGATIVE, NEUTRAL):
                raise MetricsError("bad-polarity", f"unknown polarity {polarity!r}")
            self._table[normalize_label(word)] = polarity

    def polarity(self, attribute: str) -> str:
        return self._table.get(normalize_label(attribute), NEUTRAL)

    def __len__(self) -> int:
        return len(self._table)

    @classmethod
    def from_text(cls, text: str) -> PolarityLexicon:
        """Parse `attribute<TAB>polarity` lines; '#' lines are comments."""
        table: dict[str, str] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "\t" not in stripped:
                raise MetricsError(
                    "bad-lexicon", f"line {lineno}: expected 'attribute<TAB>polarity'"
                )
            word, _, polarity = stripped.partition("\t")
            table[word.strip()] = polarity.strip()
        return cls(table)

    @classmethod
    def from_path(cls, path) -> PolarityLexicon:
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_text(handle.read())

    @classmethod
    def default(cls) -> PolarityLexicon:
        from importlib.resources import files

        return cls.from_text(
            files("cuegraph").joinpath("data/polarity_lexicon.tsv").read_text("utf-8")
        )


@dataclass(frozen=True)
class AttributeConflict:
    source_attribute: str
    source_polarity: str
    target_attribute: str
    target_polarity: str


@dataclass(frozen=True)
class InconsistencyFinding:
    """One analogy pair whose matched attributes carry opposing polarity."""

    source: str
    target: str
    conflicts: tuple[AttributeConflict, ...]
    severity: str  # "high" when every matched attribute pair opposes

    def pair(self) -> tuple[str, str]:
        return (self.source, self.target)


def inconsistency_report(
    graph: ConceptGraph, analogy: AnalogyMap, lexicon: PolarityLexicon
) -> list[InconsistencyFinding]:
    """Check each mapped pair's matched attributes for polarity opposition.

    Neutral never conflicts.  A finding aggregates every opposing attribute
    pair of one concept pair, so one mapped pair yields at most one finding.
    """
    findings: list[InconsistencyFinding] = []
    for pair in analogy.pairs:
        source = graph.concept(pair.source)
        target = graph.concept(pair.target)
        source_attrs = {normalize_label(a.text) for a in source.attributes}
        target_attrs = {normalize_label(a.text) for a in target.attributes}
        conflicts: list[AttributeConflict] = []
        for left, right in pair.attribute_pairs:
            left_n, right_n = normalize_label(left), normalize_label(right)
            if left_n not in source_attrs:
                raise MetricsError(
                    "unknown-attribute", f"{pair.source!r} has no attribute {left!r}"
                )
            if right_n not in target_attrs:
                raise MetricsError(
                    "unknown-attribute", f"{pair.target!r} has no attribute {right!r}"
                )
            lp, rp = lexicon.polarity(left_n), lexicon.polarity(right_n)
            if {lp, rp} == {POSITIVE, NEGATIVE}:
                conflicts.append(AttributeConflict(left_n, lp, right_n, rp))
        if conflicts:
            severity = "high" if len(conflicts) == len(pair.attribute_pairs) else "moderate"
            findings.append(
                InconsistencyFinding(source.id, target.id, tuple(conflicts), severity)
            )
    return findings


@dataclass(frozen=True)
class IdeaFlowReport:
    chains: tuple[tuple[str, ...], ...]  # maximal causal-only paths
    flagged: tuple[tuple[str, ...], ...]  # chains longer than the threshold
    threshold: int


LONG_CAUSAL_SEQUENCE = "long causal sequence"


def idea_flow_report(graph: ConceptGraph, threshold: int = 3) -> IdeaFlowReport:
    """Trace causal chains; chains longer than ``threshold`` edges get flagged."""
    if threshold < 1:
        raise MetricsError("bad-threshold", "threshold must be at least 1")
    causal = frozenset({RelationKind.CAUSAL})
    children: dict[str, list[str]] = {c.id: [] for c in graph.concepts}
    has_incoming: set[str] = set()
    for rel in graph.edges_of_kinds(causal):
        children[rel.source].append(rel.target)
        has_incoming.add(rel.target)
    for kids in children.values():
        kids.sort()

    chains: list[tuple[str, ...]] = []

    def walk(path: list[str]):
        kids = children[path[-1]]
        if not kids:
            chains.append(tuple(path))
            return
        for kid in kids:
            walk(path + [kid])

    for source in sorted(children):
        if source not in has_incoming and children[source]:
            walk([source])
    chains.sort()
    flagged = tuple(c for c in chains if len(c) - 1 > threshold)
    return IdeaFlowReport(tuple(chains), flagged, threshold)


def load_analogy_map(path) -> AnalogyMap:
    """Load an analogy map: JSON pairs of concepts and matched attributes."""
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    pairs = []
    for entry in raw.get("pairs", []):
        pairs.append(
            AnalogyPair(
                source=normalize_label(entry["source"]),
                target=normalize_label(entry["target"]),
                attribute_pairs=tuple(
                    (str(a), str(b)) for a, b in entry.get("attribute_pairs", [])
                ),
            )
        )
    return AnalogyMap(tuple(pairs))


def path_report_dict(report: PathReport) -> dict:
    return {
        "path_count": len(report.paths),
        "length_histogram": {str(k): v for k, v in report.length_histogram.items()},
        "max_depth": report.max_depth,
        "breadth": report.breadth,
        "paths": [list(p) for p in report.paths],
    }


def metrics_report_dict(
    graph: ConceptGraph,
    analogy: AnalogyMap | None = None,
    lexicon: PolarityLexicon | None = None,
) -> dict:
    """Bundle every report for one graph into a JSON-ready dictionary."""
    unconnected = unconnected_report(graph)
    unexplored = unexplored_report(graph)
    flow = idea_flow_report(graph)
    clusters: dict[str, int] = {}
    for concept in graph.concepts:
        if concept.cluster:
            clusters[concept.cluster] = clusters.get(concept.cluster, 0) + 1
    report = {
        "concept_count": len(graph.concepts),
        "paths": path_report_dict(enumerate_paths(graph)),
        "centrality": [
            {"concept": cid, "degree": deg} for cid, deg in centrality_report(graph)
        ],
        "clusters": dict(sorted(clusters.items())),
        "unconnected": {
            "isolated": list(unconnected.isolated),
            "implied_only_bridges": [list(p) for p in unconnected.implied_only_bridges],
        },
        "unexplored": {
            "unanchored_llm": list(unexplored.unanchored_llm),
            "author_without_llm": list(unexplored.author_without_llm),
        },
        "idea_flow": {
            "threshold": flow.threshold,
            "chains": [list(c) for c in flow.chains],
            "flagged": [list(c) for c in flow.flagged],
        },
    }
    if analogy is not None:
        findings = inconsistency_report(graph, analogy, lexicon or PolarityLexicon.default())
        report["inconsistencies"] = [
            {
                "pair": [f.source, f.target],
                "severity": f.severity,
                "conflicts": [
                    {
                        "source_attribute": c.source_attribute,
                        "source_polarity": c.source_polarity,
                        "target_attribute": c.target_attribute,
                        "target_polarity": c.target_polarity,
                    }
                    for c in f.conflicts
                ],
            }
            for f in findings
        ]
    return report
