"""Prompt templates, response parsing, and cue scoring.

Templates live in a small text catalog (kind: body) with named slots in
curly braces.  Responses are parsed into a broad statement, list items that
become cue candidates, and a trailing summary.  Scoring ranks candidate cues
by content-word overlap with evaluation cues.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib.resources import files


class TemplateKind(str, Enum):
    CRITIQUE = "critique"
    EXPAND = "expand"
    ELABORATE_ON = "elaborate_on"
    HIGHLIGHT_IN_PARAGRAPH = "highlight_in_paragraph"
    FAMOUS_INDIVIDUALS = "famous_individuals"
    FAMOUS_CHARACTERS = "famous_characters"
    INFLUENCED_BY = "influenced_by"
    CONVEY = "convey"
    EXPRESS_IN = "express_in"
    BALANCE = "balance"
    CONTEMPORARY_EXAMPLE = "contemporary_example"
    EXAMPLE_REQUEST = "example_request"


# Kinds a thread may use to deepen its root cue, versus kinds that fuse two
# cues into one convergence question.
DETAILING_KINDS = frozenset(
    {
        TemplateKind.EXPAND,
        TemplateKind.ELABORATE_ON,
        TemplateKind.HIGHLIGHT_IN_PARAGRAPH,
        TemplateKind.FAMOUS_INDIVIDUALS,
        TemplateKind.FAMOUS_CHARACTERS,
        TemplateKind.CONTEMPORARY_EXAMPLE,
        TemplateKind.EXAMPLE_REQUEST,
    }
)
COMBINATION_KINDS = frozenset(
    {
        TemplateKind.INFLUENCED_BY,
        TemplateKind.CONVEY,
        TemplateKind.EXPRESS_IN,
        TemplateKind.BALANCE,
    }
)


class PromptError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


_SLOT_RE = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class PromptTemplate:
    kind: TemplateKind
    body: str

    @property
    def slots(self) -> tuple[str, ...]:
        seen: list[str] = []
        for name in _SLOT_RE.findall(self.body):
            if name not in seen:
                seen.append(name)
        return tuple(seen)


class TemplateCatalog:
    def __init__(self, templates: dict[TemplateKind, PromptTemplate]):
        self._templates = dict(templates)

    def get(self, kind: TemplateKind) -> PromptTemplate:
        template = self._templates.get(kind)
        if template is None:
            raise PromptError("unknown-kind", f"no template for kind {kind!r}")
        return template

    def kinds(self) -> tuple[TemplateKind, ...]:
        return tuple(self._templates)

    @classmethod
    def from_text(cls, text: str) -> TemplateCatalog:
        templates: dict[TemplateKind, PromptTemplate] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            name, sep, body = stripped.partition(":")
            if not sep or not body.strip():
                raise PromptError(
                    "bad-catalog", f"line {lineno}: expected '<kind>: <template body>'"
                )
            try:
                kind = TemplateKind(name.strip())
            except ValueError:
                raise PromptError(
                    "unknown-kind", f"line {lineno}: unknown template kind {name.strip()!r}"
                ) from None
            templates[kind] = PromptTemplate(kind, body.strip())
        return cls(templates)

    @classmethod
    def default(cls) -> TemplateCatalog:
        return _default_catalog()


@lru_cache(maxsize=1)
def _default_catalog() -> TemplateCatalog:
    text = files("cuegraph").joinpath("data/templates.txt").read_text("utf-8")
    return TemplateCatalog.from_text(text)


def instantiate(
    kind: TemplateKind | str,
    values: dict[str, str],
    catalog: TemplateCatalog | None = None,
) -> str:
    """Fill a template's slots; every referenced slot needs non-empty text."""
    try:
        kind = TemplateKind(kind)
    except ValueError:
        raise PromptError("unknown-kind", f"unknown template kind {kind!r}") from None
    template = (catalog or TemplateCatalog.default()).get(kind)
    rendered = template.body
    for slot in template.slots:
        value = values.get(slot)
        if value is None or not value.strip():
            raise PromptError("missing-slot", f"template {kind.value!r} needs slot {slot!r}")
        rendered = rendered.replace("{" + slot + "}", value.strip())
    return rendered


@dataclass(frozen=True)
class CueCandidate:
    label: str
    body: str

    @property
    def text(self) -> str:
        return f"{self.label} {self.body}".strip()


@dataclass(frozen=True)
class ParsedResponse:
    broad_statement: str
    items: tuple[CueCandidate, ...]
    summary: str


_NUMBERED_RE = re.compile(r"^\s*(\d{1,3})[.)]\s+(.*)$")
_BULLET_RE = re.compile(r"^\s*[-•*]\s+(.*)$")
_BOLD_RE = re.compile(r"^\s*\*\*([^*]+)\*\*[:.]?\s*(.*)$")
_PLAIN_LABEL_RE = re.compile(r"^\s*([^:\n]{1,80}):\s+(.*)$")
_LABEL_SPLIT_RE = re.compile(r":| - | – | — ")
MAX_LABEL_WORDS = 8


def _item_start(line: str) -> str | None:
    """Return the item text when the line opens a list item."""
    match = _NUMBERED_RE.match(line)
    if match:
        return match.group(2)
    match = _BULLET_RE.match(line)
    if match:
        return match.group(1)
    match = _BOLD_RE.match(line)
    if match:
        label, rest = match.group(1).strip(), match.group(2).strip()
        label = label.rstrip(":").strip()
        return f"{label}: {rest}" if rest else label
    match = _PLAIN_LABEL_RE.match(line)
    if match and len(match.group(1).split()) <= MAX_LABEL_WORDS:
        return f"{match.group(1).strip()}: {match.group(2).strip()}"
    return None


def _derive_label(item_text: str) -> tuple[str, str]:
    """Split an item into (label, body): label precedes the first colon/dash."""
    match = _LABEL_SPLIT_RE.search(item_text)
    if match:
        label = item_text[: match.start()].strip()
        body = item_text[match.end() :].strip()
    else:
        label, body = item_text.strip(), ""
    label = label.strip("*").strip()
    words = label.split()
    if len(words) > MAX_LABEL_WORDS:
        label = " ".join(words[:MAX_LABEL_WORDS])
    if not label:
        label = " ".join(item_text.split()[:MAX_LABEL_WORDS])
    return label, body


def extract_cues(text: str) -> ParsedResponse:
    """Parse a response into broad statement, cue items, and summary.

    Items start on numbered, bulleted, bold-label, or short 'Label: body'
    lines.  Unindented prose directly below an item continues its body; a
    blank line ends the item, and prose after the last item is the summary.
    """
    lines = text.splitlines()
    broad: list[str] = []
    summary: list[str] = []
    raw_items: list[str] = []
    in_items = False
    item_open = False

    for line in lines:
        if not line.strip():
            item_open = False
            continue
        item_text = _item_start(line)
        if item_text is not None:
            raw_items.append(item_text.strip())
            in_items = True
            item_open = True
            summary.clear()  # prose so far was item continuation, not summary
            continue
        if not in_items:
            broad.append(line.strip())
        elif item_open:
            raw_items[-1] += " " + line.strip()
        else:
            summary.append(line.strip())

    candidates: list[CueCandidate] = []
    used: dict[str, int] = {}
    for raw in raw_items:
        label, body = _derive_label(raw)
        count = used.get(label, 0) + 1
        used[label] = count
        if count > 1:
            label = f"{label} ({count})"
        candidates.append(CueCandidate(label=label, body=body))
    return ParsedResponse(
        broad_statement="\n".join(broad).strip(),
        items=tuple(candidates),
        summary="\n".join(summary).strip(),
    )


@lru_cache(maxsize=1)
def stop_words() -> frozenset[str]:
    text = files("cuegraph").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


_WORD_RE = re.compile(r"[a-z0-9']+")


def content_words(text: str) -> frozenset[str]:
    """Lowercased tokens minus stop words; duplicates collapse to a set."""
    words = set()
    for token in _WORD_RE.findall(text.lower()):
        token = token.strip("'")
        if token and token not in stop_words():
            words.add(token)
    return frozenset(words)


@dataclass(frozen=True)
class ScoredCue:
    label: str
    score: float


def score_against(
    candidates: list[tuple[str, str]] | tuple[tuple[str, str], ...],
    evaluation: list[str] | tuple[str, ...],
) -> list[ScoredCue]:
    """Rank (label, text) candidates by best Jaccard overlap with any
    evaluation cue text; ties sort by label ascending."""
    if not evaluation:
        raise PromptError("empty-evaluation", "evaluation cue set is empty")
    evaluation_sets = [content_words(text) for text in evaluation]
    scored = []
    for label, text in candidates:
        words = content_words(text)
        best = 0.0
        for other in evaluation_sets:
            union = words | other
            if union:
                best = max(best, len(words & other) / len(union))
        scored.append(ScoredCue(label=label, score=best))
    scored.sort(key=lambda s: (-s.score, s.label))
    return scored
