#!/usr/bin/env python3
"""Regenerate the bundled replay fixtures and decision traces.

The replay provider keys responses by a hash of the normalized prompt, so the
records here are derived from the same template instantiations the engine
performs at run time.  Run from the repository root:

    python3 tools/build_replay_fixtures.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from cuegraph.prompts import instantiate  # noqa: E402
from cuegraph.providers import build_fixture  # noqa: E402

FIXTURES = ROOT / "src" / "cuegraph" / "fixtures"


ANALOGY_CRITIQUE = """\
The paragraph sets up a promising comparison between the two art forms.

1. clarity of analogies: clarify the type and explanation of each analogy used.
2. structural flow: improve the organization, flow, and transition of ideas.
3. supporting examples: use concrete examples to support the analogy.
4. conciseness: make the paragraph more concise.
5. grammar and language: polish grammar and word choice.
6. formatting: reconsider the formatting of the paragraph.

Addressing these points would tighten the piece considerably."""

ANALOGY_R2 = """\
Elaborating on that analogy opens several distinct directions.

1. structural foundation: both topic and song act as the base the rest of the work is built on.
2. emotional expression: the coordination of body movements in dance is fundamental in conveying emotions to the audience, much as word choice carries feeling in a poem.
3. narrative and storytelling: topic and song each set up a story the audience can follow.
4. unity and coherence: both keep the many moving parts of a piece aligned with one another.
5. artistic interpretation: performers and readers alike bring their own reading of the underlying theme.

Each of these angles could anchor a revision of the paragraph."""

ANALOGY_R3 = """\
Coordination does far more than keep dancers synchronized.

1. facial expression: a dancer's face carries shades of feeling the body alone cannot.
2. body language: posture and gesture communicate mood before a single step lands.
3. timing and rhythms: acceleration and pause give emotional weight to a phrase.
4. spatial dynamics: distance between dancers reads as intimacy, conflict, or isolation.
5. partnering and interactions: lifts and counterbalance dramatize trust between performers.
6. narrative and expression: sequences of movement sketch the arc of a story.
7. musical alignment: matching accents in the score amplifies what the body says.
8. artistic interpretation: choreography leaves room for each dancer's own reading.

Together these channels make coordinated movement a language of its own."""

ANALOGY_R4 = """\
The parallels run deeper than a shared starting point.

1. historical evolution: both pairings have drifted together and apart across eras.
2. cross-cultural perspectives: different traditions weight music and subject differently.
3. interdisciplinary collaborations: choreographers and poets often borrow each other's framing devices.
4. emotional input: the song hands the dancer feeling to work with, as a topic hands the poet one.
5. narrative and symbolism: each supplies symbols the audience decodes over the course of the piece.
6. experimental approaches: removing the song or the topic entirely is itself a known experiment.
7. contemporary examples: recent stage works show the pairing still evolving.
8. educational significance: teachers in both arts use the pairing to explain form.

Any of these could be developed into a concrete passage."""

ANALOGY_R5 = (
    "1. swan lake ballet: the score tells the dancers what the piece is about, "
    "exactly as a poem's topic tells the poet, so every choice on stage refers back to it."
)

ANALOGY_R6 = (
    "1. hamilton: a recent stage production where the songs function as the topic "
    "sentence of every scene, steering both movement and language at once."
)

ANALOGY_R7 = """\
Body language bends to whatever feeling the performer is given to carry.

1. emotional expression: the body amplifies the feeling the music supplies.
2. cultural background: gestures inherit meaning from the dancer's own tradition.
3. personal narrative: private memories color how openly a dancer moves.
4. physical conditioning: tired muscles flatten expression no matter the intent.
5. psychological factors: confidence and nerves visibly reshape posture.
6. interpersonal relationships: chemistry between partners changes the conversation on stage.
7. life themes: grief, joy, and longing each leave a distinct signature in movement.
8. educational background: formal training widens the vocabulary available for feeling.

The influence runs both ways, but the emotional input always leads."""

ANALOGY_BALANCE = """\
Balancing the two is mostly a matter of pacing.

1. anchor first: state the analogy plainly before illustrating it.
2. one example per idea: a single well-chosen example clarifies more than three rushed ones.
3. return to the claim: close each example by restating what it was meant to show.

Handled this way, examples sharpen the analogy instead of crowding it."""

METAPHOR_CRITIQUE = """\
The paragraph has an appealing personal voice and a clear arc.

1. personal journey: the growth story could be framed more explicitly from start to finish.
2. passion and dedication: the author's commitment to improving comes through and deserves more room.
3. high self-confidence: the slide toward hubris is a striking thread worth keeping visible.
4. self-reflection: the recording-and-reviewing habit could carry more of the paragraph's weight.

A sharper frame around these threads would make the piece more persuasive."""

METAPHOR_R2 = """\
Several angles could make that dedication unmistakable on the page.

1. time and effort: name the hours the practice actually consumes.
2. feedback seeking: show the author asking teachers for correction rather than waiting for it.
3. perseverance through failure: let one bad night stand for all of them.
4. sacrifices made: note what was given up to keep the schedule.
5. continuous self-improvement: trace one skill from clumsy to clean.
6. long-term goals: state the destination the daily work is aimed at.
7. passion for the art: tie the discipline back to love of the form itself.

Even two of these, made concrete, would carry the theme."""

METAPHOR_R3 = """\
Determination shows best through repeated, specific behavior.

1. consistent effort: the same drills appearing week after week.
2. relentless self-reflection: reviewing recordings even when they are painful to watch.
3. perseverance among frustration: staying in the room after a correction stings.
4. trial and error: treating each failed attempt as one more data point.
5. continuous learning: seeking out new teachers and new styles deliberately.
6. unaware self-belief: pushing on before the evidence justifies it.
7. goal-oriented mindset: measuring every class against a named target.
8. long-term commitment: framing the work in years rather than evenings.

Pick the behaviors that match the author's actual habits."""

METAPHOR_R4 = """\
Passion is easiest to show through its physical traces.

1. expressive language: let the verbs move the way the dancing does.
2. physical sensations: describe what a turn feels like from inside the body.
3. sensory details: the sound of the floor, the heat of the lights.
4. moments of euphoria: name the seconds that justify the months.
5. personal sacrifice: what the author gives the art without being asked.
6. artistic inspiration: the performances that first made dance feel necessary.
7. intrinsic motivation: dancing on the days nobody is watching.
8. dreams and aspirations: where the author hopes the practice leads.

Grounding passion in the body keeps it from sounding abstract."""


def analogy_pairs(paragraph: str) -> list[tuple[str, str]]:
    return [
        (instantiate("critique", {"Paragraph": paragraph}), ANALOGY_CRITIQUE),
        (
            instantiate(
                "elaborate_on",
                {"Selected_Cue": "the analogy between topic in poetry and song in dance"},
            ),
            ANALOGY_R2,
        ),
        (
            instantiate(
                "elaborate_on",
                {
                    "Selected_Cue": (
                        "the idea that coordination of body movements in dance is "
                        "fundamental in conveying emotions to the audience"
                    )
                },
            ),
            ANALOGY_R3,
        ),
        (
            instantiate(
                "elaborate_on",
                {
                    "Selected_Cue": (
                        "parallels between the idea of song in dance and the idea of "
                        "topic in poetry"
                    )
                },
            ),
            ANALOGY_R4,
        ),
        (
            instantiate(
                "example_request",
                {"Selected_Cue": "song in dance is like topic in poetry"},
            ),
            ANALOGY_R5,
        ),
        (
            instantiate(
                "contemporary_example",
                {"Selected_Cue": "the analogy between song in dance and topic in poetry"},
            ),
            ANALOGY_R6,
        ),
        (
            instantiate(
                "influenced_by",
                {"Broader_Cue": "body language", "Detailed_Cue": "emotional input"},
            ),
            ANALOGY_R7,
        ),
        (
            instantiate(
                "balance",
                {"Cue1": "clarity of analogies", "Cue2": "supporting examples"},
            ),
            ANALOGY_BALANCE,
        ),
    ]


def metaphor_pairs(paragraph: str) -> list[tuple[str, str]]:
    return [
        (instantiate("critique", {"Paragraph": paragraph}), METAPHOR_CRITIQUE),
        (
            instantiate(
                "highlight_in_paragraph",
                {
                    "Selected_Cue": (
                        "the author's dedication and unwavering commitment to improving "
                        "his dance skills"
                    )
                },
            ),
            METAPHOR_R2,
        ),
        (
            instantiate(
                "highlight_in_paragraph", {"Selected_Cue": "the author's determination"}
            ),
            METAPHOR_R3,
        ),
        (
            instantiate("elaborate_on", {"Selected_Cue": "the author's passion for dance"}),
            METAPHOR_R4,
        ),
    ]


ANALOGY_TRACE = {
    "schema_version": 1,
    "events": [
        {"action": "triage", "data": {"cue_id": "PROMPT1.1", "category": "explore"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.3", "category": "explore"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.2", "category": "evaluate"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.4", "category": "evaluate"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.5", "category": "ignore"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.6", "category": "ignore"}},
        {"action": "select_thread", "data": {}},
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t1",
                "kind": "elaborate_on",
                "cue_text": "the analogy between topic in poetry and song in dance",
            },
        },
        {"action": "select_cues", "data": {"thread_id": "t1", "cue_ids": ["PROMPT2.2"]}},
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t1",
                "kind": "elaborate_on",
                "cue_text": (
                    "the idea that coordination of body movements in dance is fundamental "
                    "in conveying emotions to the audience"
                ),
            },
        },
        {
            "action": "select_cues",
            "data": {"thread_id": "t1", "cue_ids": ["PROMPT3.2", "PROMPT3.4"]},
        },
        {"action": "select_thread", "data": {}},
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t2",
                "kind": "elaborate_on",
                "cue_text": (
                    "parallels between the idea of song in dance and the idea of topic "
                    "in poetry"
                ),
            },
        },
        {
            "action": "select_cues",
            "data": {"thread_id": "t2", "cue_ids": ["PROMPT4.4", "PROMPT4.7"]},
        },
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t2",
                "kind": "example_request",
                "cue_text": "song in dance is like topic in poetry",
            },
        },
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t2",
                "kind": "contemporary_example",
                "cue_text": "the analogy between song in dance and topic in poetry",
            },
        },
        {
            "action": "combine",
            "data": {"cue_a": "PROMPT3.2", "cue_b": "PROMPT4.4", "kind": "influenced_by"},
        },
        {
            "action": "select_cues",
            "data": {"thread_id": "t1", "cue_ids": ["PROMPT7.6", "PROMPT7.7"]},
        },
        {"action": "terminate", "data": {}},
    ],
}

METAPHOR_TRACE = {
    "schema_version": 1,
    "events": [
        {"action": "triage", "data": {"cue_id": "PROMPT1.2", "category": "explore"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.3", "category": "evaluate"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.1", "category": "ignore"}},
        {"action": "triage", "data": {"cue_id": "PROMPT1.4", "category": "ignore"}},
        {"action": "select_thread", "data": {}},
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t1",
                "kind": "highlight_in_paragraph",
                "cue_text": (
                    "the author's dedication and unwavering commitment to improving his "
                    "dance skills"
                ),
            },
        },
        {"action": "select_cues", "data": {"thread_id": "t1", "cue_ids": ["PROMPT2.6"]}},
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t1",
                "kind": "highlight_in_paragraph",
                "cue_text": "the author's determination",
            },
        },
        {
            "action": "select_cues",
            "data": {"thread_id": "t1", "cue_ids": ["PROMPT3.1", "PROMPT3.7", "PROMPT3.8"]},
        },
        {
            "action": "request_detailing",
            "data": {
                "thread_id": "t1",
                "kind": "elaborate_on",
                "cue_text": "the author's passion for dance",
            },
        },
        {"action": "terminate", "data": {}},
    ],
}


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", "utf-8")
    print(f"wrote {path.relative_to(ROOT)}")


def main() -> None:
    analogy_paragraph = (FIXTURES / "analogy_paragraph.txt").read_text("utf-8").strip()
    metaphor_paragraph = (FIXTURES / "metaphor_paragraph.txt").read_text("utf-8").strip()
    _write_json(FIXTURES / "analogy_replay.json", build_fixture(analogy_pairs(analogy_paragraph)))
    _write_json(FIXTURES / "metaphor_replay.json", build_fixture(metaphor_pairs(metaphor_paragraph)))
    _write_json(FIXTURES / "analogy.trace", ANALOGY_TRACE)
    _write_json(FIXTURES / "metaphor.trace", METAPHOR_TRACE)


if __name__ == "__main__":
    main()
