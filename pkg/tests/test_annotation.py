from __future__ import annotations

import pytest

from cuegraph.annotation import (
    AnnotationError,
    extract_concept_suggestions,
    load_annotation,
    parse_annotation,
    serialize_annotation,
    serialize_graph,
    to_graph,
)
from cuegraph.graph import Explicitness, RelationKind

SMALL = """#paragraph r0
# a short worked example
S1: The dancer rehearses the solo nightly.
  who: dancer
  verb: rehearses
  what: solo
  when: nightly
  attr: solo <- demanding
S2: Critics praise her stamina.
  who: Critics
  verb: praise
  what: stamina
R: S1 -causal-> S2
C: rehearsal cluster=green attrs=nightly
C: stamina origin=llm:r2
C: praise
E: rehearsal -causal-> stamina
E: praise -connected-> stamina implied
"""


class TestParse:
    def test_paragraph_revision(self):
        assert parse_annotation(SMALL).revision == "r0"

    def test_revision_defaults_when_directive_absent(self):
        assert parse_annotation("C: lone\n").revision == "0"

    def test_frames_and_roles(self):
        doc = parse_annotation(SMALL)
        frame = doc.frames[0]
        assert frame.sentence_id == 1
        assert frame.raw == "The dancer rehearses the solo nightly."
        assert frame.tokens("who") == ("dancer",)
        assert frame.tokens("when") == ("nightly",)
        assert frame.tokens("why") == ()

    def test_qualifier_binds_to_declared_head(self):
        doc = parse_annotation(SMALL)
        (qual,) = doc.frames[0].qualifiers
        assert (qual.head, qual.text, qual.kind) == ("solo", "demanding", "attribute")

    def test_frame_relation(self):
        doc = parse_annotation(SMALL)
        (rel,) = doc.frame_relations
        assert (rel.source, rel.target, rel.kind) == (1, 2, RelationKind.CAUSAL)

    def test_concept_metadata(self):
        doc = parse_annotation(SMALL)
        by_label = {c.id: c for c in doc.concepts}
        assert by_label["rehearsal"].cluster == "green"
        assert [a.text for a in by_label["rehearsal"].attributes] == ["nightly"]
        assert by_label["stamina"].origin.encode() == "llm:r2"
        assert by_label["praise"].origin.encode() == "author"

    def test_edge_explicitness(self):
        doc = parse_annotation(SMALL)
        marks = {(e.source, e.target): e.explicitness for e in doc.edges}
        assert marks[("rehearsal", "stamina")] is Explicitness.EXPLICIT
        assert marks[("praise", "stamina")] is Explicitness.IMPLIED

    def test_to_graph(self):
        graph = to_graph(parse_annotation(SMALL))
        assert graph.labels() == {"rehearsal", "stamina", "praise"}
        assert len(graph.relationships) == 2


class TestParseErrors:
    def check(self, text, line, fragment):
        with pytest.raises(AnnotationError) as err:
            parse_annotation(text)
        assert err.value.line == line
        assert fragment in str(err.value)

    def test_duplicate_paragraph_directive(self):
        self.check("#paragraph r0\n#paragraph r1\n", 2, "duplicate")

    def test_paragraph_directive_requires_revision(self):
        self.check("#paragraph\n", 1, "revision")

    def test_duplicate_role(self):
        text = "#paragraph r0\nS1: A line.\n  verb: runs\n  verb: walks\n"
        self.check(text, 4, "twice")

    def test_qualifier_head_must_be_declared(self):
        # reported at the frame's opening line, where the binding is checked
        text = "#paragraph r0\nS1: A line.\n  verb: runs\n  attr: track <- fast\n"
        self.check(text, 2, "track")

    def test_unknown_relation_kind(self):
        text = SMALL.replace("-causal-> S2", "-implies-> S2")
        self.check(text, 13, "implies")

    def test_edge_with_undeclared_concept(self):
        text = SMALL + "E: rehearsal -detailing-> ghost\n"
        self.check(text, 19, "ghost")

    def test_duplicate_concept_label(self):
        text = SMALL + "C: Praise\n"
        self.check(text, 19, "duplicate")

    def test_indented_line_outside_frame(self):
        self.check("#paragraph r0\n  verb: runs\n", 2, "outside")

    def test_hierarchy_cycle_reported_at_origin(self):
        text = (
            "#paragraph r0\n"
            "C: a\nC: b\n"
            "E: a -detailing-> b\n"
            "E: b -goal-> a\n"
        )
        with pytest.raises(AnnotationError) as err:
            parse_annotation(text)
        assert (err.value.line, err.value.column) == (0, 0)

    def test_error_carries_position(self):
        err = AnnotationError(7, 3, "boom")
        assert (err.line, err.column) == (7, 3)
        assert "7" in str(err)


class TestSerialize:
    def test_round_trip_is_fixed_point(self):
        doc = parse_annotation(SMALL)
        once = serialize_annotation(doc)
        assert serialize_annotation(parse_annotation(once)) == once

    def test_concept_lines_sorted_and_origin_explicit(self):
        out = serialize_annotation(parse_annotation(SMALL))
        lines = [ln for ln in out.splitlines() if ln.startswith("C: ")]
        assert lines == sorted(lines)
        assert all("origin=" in ln for ln in lines)

    def test_implied_suffix_only_when_implied(self):
        out = serialize_annotation(parse_annotation(SMALL))
        edges = [ln for ln in out.splitlines() if ln.startswith("E: ")]
        assert sum(ln.endswith(" implied") for ln in edges) == 1

    def test_serialize_graph_parses_back(self):
        graph = to_graph(parse_annotation(SMALL))
        text = serialize_graph(graph, revision="r9")
        doc = parse_annotation(text)
        assert doc.revision == "r9"
        assert to_graph(doc).labels() == graph.labels()


class TestFixtures:
    @pytest.mark.parametrize(
        "name",
        [
            "analogy_initial.cga",
            "analogy_llm_delta.cga",
            "metaphor_initial.cga",
            "metaphor_llm_fragment.cga",
        ],
    )
    def test_round_trip_fixed_point(self, fixtures, name):
        doc = load_annotation(fixtures[name])
        once = serialize_annotation(doc)
        again = serialize_annotation(parse_annotation(once))
        assert again == once

    def test_first_frame_of_diary_fixture(self, fixtures):
        doc = load_annotation(fixtures["metaphor_initial.cga"])
        frame = doc.frames[0]
        assert frame.raw == "I walked into my regular classes."
        assert frame.tokens("verb") == ("walked",)
        assert frame.tokens("who") == ("I",)
        assert frame.tokens("where") == ("classes",)
        (qual,) = frame.qualifiers
        assert (qual.head, qual.text) == ("classes", "regular")


class TestSuggestions:
    def test_noun_bins_become_suggestions_with_attributes(self):
        doc = parse_annotation(SMALL)
        suggestions = extract_concept_suggestions(doc.frames[0])
        by_label = {s.label: s for s in suggestions}
        assert set(by_label) == {"dancer", "solo"}
        assert by_label["solo"].attributes == ("demanding",)
        assert by_label["dancer"].attributes == ()
        assert by_label["solo"].sentence_id == 1

    def test_verb_and_adverb_are_not_suggested(self):
        doc = parse_annotation(
            "#paragraph r0\nS1: It runs.\n  verb: runs\n  adv: runs <- quickly\n"
        )
        assert extract_concept_suggestions(doc.frames[0]) == []
