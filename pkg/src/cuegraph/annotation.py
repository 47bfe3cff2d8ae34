"""Line-oriented annotation format for write-ups and their concept graphs.

A document carries sentence frames (semantic role bins plus qualifiers),
sentence-to-sentence relations, concept declarations, and concept edges:

    #paragraph r0
    S1: I walked into my regular classes.
      who: I
      verb: walked
      where: classes
      attr: classes <- regular
    R: S1 -connected-> S2
    C: self-confidence origin=author cluster=blue attrs=high
    E: dance -detailing-> movement implied

Parsing is total: any input yields either a document or a positioned
``AnnotationError``; nothing else escapes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .graph import (
    Attribute,
    Concept,
    ConceptGraph,
    Explicitness,
    GraphError,
    Origin,
    RelationKind,
    Relationship,
    build_graph,
    normalize_label,
)

ROLE_BINS = ("verb", "what", "who", "where", "when", "on_who", "outputs", "for_who", "why")
QUALIFIER_KEYS = {"attr": "attribute", "adv": "adverb"}
KIND_NAMES = {k.value for k in RelationKind}


class AnnotationError(ValueError):
    """Parse or validation failure with a 1-based source position."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


@dataclass(frozen=True)
class Qualifier:
    head: str
    text: str
    kind: str  # "attribute" | "adverb"


@dataclass(frozen=True)
class SentenceFrame:
    sentence_id: int
    raw: str
    bins: dict[str, tuple[str, ...]] = field(default_factory=dict)
    qualifiers: tuple[Qualifier, ...] = ()

    def tokens(self, role: str) -> tuple[str, ...]:
        return self.bins.get(role, ())


@dataclass(frozen=True)
class FrameRelation:
    source: int
    target: int
    kind: RelationKind


@dataclass(frozen=True)
class AnnotationDocument:
    revision: str
    frames: tuple[SentenceFrame, ...] = ()
    frame_relations: tuple[FrameRelation, ...] = ()
    concepts: tuple[Concept, ...] = ()
    edges: tuple[Relationship, ...] = ()


@dataclass(frozen=True)
class ConceptSuggestion:
    """An unconfirmed concept extracted from a frame's noun bins."""

    label: str
    attributes: tuple[str, ...]
    sentence_id: int


_SENTENCE_RE = re.compile(r"^S(\d+):\s*(.*)$")
_RELATION_RE = re.compile(r"^R:\s*S(\d+)\s+-([a-z_]+)->\s+S(\d+)\s*$")
_EDGE_RE = re.compile(r"^E:\s*(.+?)\s+-([a-z_]+)->\s+(.+?)\s*$")
_META_RE = re.compile(r"^(origin|cluster|attrs)=(\S+)$")


def parse_annotation(text: str) -> AnnotationDocument:
    """Parse annotation text; raise AnnotationError with line/column on failure."""
    revision = "0"
    revision_seen = False
    frames: list[SentenceFrame] = []
    frame_lines: dict[int, int] = {}
    relations: list[tuple[int, FrameRelation]] = []
    concepts: dict[str, Concept] = {}
    edges: list[tuple[int, Relationship]] = []

    current: dict | None = None  # frame under construction

    def finish_frame():
        nonlocal current
        if current is None:
            return
        frame = SentenceFrame(
            sentence_id=current["id"],
            raw=current["raw"],
            bins={k: tuple(v) for k, v in current["bins"].items()},
            qualifiers=tuple(current["qualifiers"]),
        )
        binned = {tok for toks in frame.bins.values() for tok in toks}
        for qualifier in frame.qualifiers:
            if qualifier.head not in binned:
                raise AnnotationError(
                    current["line"],
                    1,
                    f"qualifier head {qualifier.head!r} appears in no role bin of S{frame.sentence_id}",
                )
        if frame.sentence_id in frame_lines:
            raise AnnotationError(
                current["line"], 1, f"sentence id S{frame.sentence_id} declared twice"
            )
        frame_lines[frame.sentence_id] = current["line"]
        frames.append(frame)
        current = None

    for lineno, rawline in enumerate(text.splitlines(), start=1):
        if not rawline.strip():
            continue
        indented = rawline[0] in (" ", "\t")
        line = rawline.strip()

        if not indented:
            if line.startswith("#paragraph"):
                finish_frame()
                parts = line.split(None, 1)
                if len(parts) < 2 or not parts[1].strip():
                    raise AnnotationError(lineno, 1, "#paragraph requires a revision id")
                if revision_seen:
                    raise AnnotationError(lineno, 1, "duplicate #paragraph directive")
                revision = parts[1].strip()
                revision_seen = True
                continue
            if line.startswith("#"):
                continue

            match = _SENTENCE_RE.match(line)
            if match:
                finish_frame()
                if not match.group(2).strip():
                    raise AnnotationError(lineno, len(match.group(0)) or 1, "empty sentence text")
                current = {
                    "id": int(match.group(1)),
                    "raw": match.group(2).strip(),
                    "bins": {},
                    "qualifiers": [],
                    "line": lineno,
                }
                continue

            if line.startswith("R:"):
                finish_frame()
                match = _RELATION_RE.match(line)
                if not match:
                    raise AnnotationError(
                        lineno, 1, "malformed relation; expected 'R: S<id> -<kind>-> S<id>'"
                    )
                kind = _parse_kind(match.group(2), lineno, line)
                relations.append(
                    (lineno, FrameRelation(int(match.group(1)), int(match.group(3)), kind))
                )
                continue

            if line.startswith("C:"):
                finish_frame()
                _parse_concept_line(line, lineno, concepts)
                continue

            if line.startswith("E:"):
                finish_frame()
                edges.append(_parse_edge_line(line, lineno))
                continue

            raise AnnotationError(
                lineno, 1, f"unrecognized line {line.split(':')[0]!r}; expected S/R/C/E or a comment"
            )

        # Indented: role or qualifier line inside the current frame.
        if current is None:
            raise AnnotationError(lineno, 1, "indented line outside a sentence frame")
        if ":" not in line:
            raise AnnotationError(lineno, 1, "expected '<role>: tokens' inside a frame")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key in QUALIFIER_KEYS:
            if "<-" not in value:
                raise AnnotationError(lineno, 1, f"{key} line requires '<head> <- <qualifier>'")
            head, _, qual = value.partition("<-")
            head, qual = head.strip(), qual.strip()
            if not head or not qual:
                raise AnnotationError(lineno, 1, f"{key} line requires '<head> <- <qualifier>'")
            current["qualifiers"].append(Qualifier(head, qual, QUALIFIER_KEYS[key]))
        elif key in ROLE_BINS:
            if key in current["bins"]:
                raise AnnotationError(lineno, 1, f"role {key!r} given twice in S{current['id']}")
            tokens = tuple(value.split())
            if not tokens:
                raise AnnotationError(lineno, 1, f"role {key!r} has no tokens")
            current["bins"][key] = tokens
        else:
            raise AnnotationError(
                lineno, 1, f"unknown role {key!r}; expected one of {', '.join(ROLE_BINS)}, attr, adv"
            )

    finish_frame()

    declared_ids = set(frame_lines)
    for lineno, relation in relations:
        for end in (relation.source, relation.target):
            if end not in declared_ids:
                raise AnnotationError(lineno, 1, f"relation references undeclared sentence S{end}")

    declared_labels = set(concepts)
    for lineno, edge in edges:
        for end in (edge.source, edge.target):
            if end not in declared_labels:
                raise AnnotationError(lineno, 1, f"edge references undeclared concept {end!r}")

    try:
        document = AnnotationDocument(
            revision=revision,
            frames=tuple(sorted(frames, key=lambda f: f.sentence_id)),
            frame_relations=tuple(r for _, r in relations),
            concepts=tuple(concepts.values()),
            edges=tuple(e for _, e in edges),
        )
        to_graph(document)  # surfaces hierarchy cycles with a position-free check
    except GraphError as err:
        raise AnnotationError(0, 0, str(err)) from err
    return document


def _parse_kind(name: str, lineno: int, line: str) -> RelationKind:
    if name not in KIND_NAMES:
        raise AnnotationError(
            lineno,
            line.find(name) + 1,
            f"unknown kind {name!r}; expected one of {', '.join(sorted(KIND_NAMES))}",
        )
    return RelationKind(name)


def _parse_concept_line(line: str, lineno: int, concepts: dict[str, Concept]) -> None:
    body = line[2:].strip()
    if not body:
        raise AnnotationError(lineno, 1, "concept line requires a label")
    tokens = body.split()
    meta: dict[str, str] = {}
    while tokens:
        match = _META_RE.match(tokens[-1])
        if not match:
            break
        key, value = match.group(1), match.group(2)
        if key in meta:
            raise AnnotationError(lineno, 1, f"duplicate {key}= on concept line")
        meta[key] = value
        tokens.pop()
    if not tokens:
        raise AnnotationError(lineno, 1, "concept line requires a label")
    label = normalize_label(" ".join(tokens))
    if label in concepts:
        raise AnnotationError(lineno, 1, f"duplicate concept label {label!r}")
    try:
        origin = Origin.decode(meta.get("origin", "author"))
    except GraphError as err:
        raise AnnotationError(lineno, 1, str(err)) from err
    attrs = tuple(
        Attribute(text=a.strip()) for a in meta.get("attrs", "").split(",") if a.strip()
    )
    concepts[label] = Concept(
        label=label, attributes=attrs, origin=origin, cluster=meta.get("cluster")
    )


def _parse_edge_line(line: str, lineno: int) -> tuple[int, Relationship]:
    match = _EDGE_RE.match(line)
    if not match:
        raise AnnotationError(
            lineno, 1, "malformed edge; expected 'E: <label> -<kind>-> <label> [explicit|implied]'"
        )
    kind = _parse_kind(match.group(2), lineno, line)
    target_part = match.group(3)
    explicitness = Explicitness.EXPLICIT
    pieces = target_part.rsplit(None, 1)
    if len(pieces) == 2 and pieces[1] in ("explicit", "implied"):
        target_part = pieces[0]
        explicitness = Explicitness(pieces[1])
    source = normalize_label(match.group(1))
    target = normalize_label(target_part)
    if not source or not target:
        raise AnnotationError(lineno, 1, "edge endpoints must be non-empty labels")
    if source == target:
        raise AnnotationError(lineno, 1, f"self edge on {source!r}")
    return (lineno, Relationship(source, target, kind, explicitness))


def serialize_annotation(document: AnnotationDocument) -> str:
    """Render a document in canonical form; parse() of the output round-trips."""
    out: list[str] = [f"#paragraph {document.revision}"]
    for frame in sorted(document.frames, key=lambda f: f.sentence_id):
        out.append(f"S{frame.sentence_id}: {frame.raw}")
        for role in ROLE_BINS:
            if frame.tokens(role):
                out.append(f"  {role}: {' '.join(frame.tokens(role))}")
        for qualifier in frame.qualifiers:
            key = "attr" if qualifier.kind == "attribute" else "adv"
            out.append(f"  {key}: {qualifier.head} <- {qualifier.text}")
    for relation in document.frame_relations:
        out.append(f"R: S{relation.source} -{relation.kind.value}-> S{relation.target}")
    for concept in sorted(document.concepts, key=lambda c: c.label):
        line = f"C: {concept.label} origin={concept.origin.encode()}"
        if concept.cluster:
            line += f" cluster={concept.cluster}"
        if concept.attributes:
            line += " attrs=" + ",".join(a.text for a in concept.attributes)
        out.append(line)
    for edge in sorted(
        document.edges, key=lambda e: (e.kind.value, e.source, e.target, e.explicitness.value)
    ):
        line = f"E: {edge.source} -{edge.kind.value}-> {edge.target}"
        if edge.explicitness is Explicitness.IMPLIED:
            line += " implied"
        out.append(line)
    return "\n".join(out) + "\n"


def serialize_graph(graph: ConceptGraph, revision: str = "0") -> str:
    """Render a bare concept graph (no frames) as annotation text."""
    document = AnnotationDocument(
        revision=revision, concepts=graph.concepts, edges=graph.relationships
    )
    return serialize_annotation(document)


def to_graph(document: AnnotationDocument) -> ConceptGraph:
    """Build the validated concept graph declared by a document."""
    return build_graph(list(document.concepts), list(document.edges))


def load_annotation(path) -> AnnotationDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_annotation(handle.read())


NOUN_BINS = ("what", "who", "on_who", "outputs", "for_who")


def extract_concept_suggestions(frame: SentenceFrame) -> list[ConceptSuggestion]:
    """Propose one concept per distinct noun token in the noun-bearing bins.

    Attribute-kind qualifiers whose head matches the token become suggested
    attributes.  Suggestions are unconfirmed; callers decide what to keep.
    """
    seen: list[str] = []
    for role in NOUN_BINS:
        for token in frame.tokens(role):
            normalized = normalize_label(token)
            if normalized and normalized not in seen:
                seen.append(normalized)
    suggestions = []
    for token in seen:
        attrs = tuple(
            q.text
            for q in frame.qualifiers
            if q.kind == "attribute" and normalize_label(q.head) == token
        )
        suggestions.append(
            ConceptSuggestion(label=token, attributes=attrs, sentence_id=frame.sentence_id)
        )
    return suggestions
