"""Graph rendering: plain dictionaries for JSON APIs and Graphviz DOT text.

DOT output keeps the reviewing conventions: model-contributed concepts get a
distinct style from author concepts, and implied relationships are dashed.
"""
from __future__ import annotations

from typing import Any

from .graph import ConceptGraph, Explicitness, RelationKind, UNDIRECTED_KINDS


def graph_to_dict(graph: ConceptGraph) -> dict[str, Any]:
    return {
        "concepts": [
            {
                "id": concept.id,
                "label": concept.label,
                "origin": concept.origin.encode(),
                "cluster": concept.cluster,
                "attributes": [
                    {"text": a.text, "polarity": a.polarity} for a in concept.attributes
                ],
            }
            for concept in graph.concepts
        ],
        "relationships": [
            {
                "source": r.source,
                "target": r.target,
                "kind": r.kind.value,
                "explicitness": r.explicitness.value,
            }
            for r in graph.relationships
        ],
    }


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


_CLUSTER_COLORS = {
    "yellow": "#f5e6a3",
    "green": "#bde0bd",
    "blue": "#b8cde8",
}


def graph_to_dot(graph: ConceptGraph, name: str = "concepts") -> str:
    lines = [f"digraph {_quote(name)} {{"]
    lines.append("  rankdir=TB;")
    lines.append('  node [shape=box, fontname="Helvetica"];')
    for concept in graph.concepts:
        attrs = []
        if concept.attributes:
            extra = ", ".join(a.text for a in concept.attributes)
            attrs.append(f"label={_quote(concept.label + chr(10) + '(' + extra + ')')}")
        if concept.origin.is_llm():
            attrs.append("style=\"filled,rounded\"")
            attrs.append('fillcolor="#e8e8f8"')
            attrs.append('peripheries=2')
        elif concept.cluster:
            attrs.append('style=filled')
        if concept.cluster:
            color = _CLUSTER_COLORS.get(concept.cluster, "#dddddd")
            attrs.append(f'color="{color}"')
            if 'style=filled' in attrs:
                attrs.append(f'fillcolor="{color}"')
        rendered = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {_quote(concept.id)}{rendered};")
    for rel in graph.relationships:
        edge_attrs = [f"label={_quote(rel.kind.value)}"]
        if rel.kind in UNDIRECTED_KINDS:
            edge_attrs.append("dir=none")
        if rel.explicitness is Explicitness.IMPLIED:
            edge_attrs.append("style=dashed")
        if rel.kind is RelationKind.CAUSAL:
            edge_attrs.append("penwidth=2")
        lines.append(
            f"  {_quote(rel.source)} -> {_quote(rel.target)} [{', '.join(edge_attrs)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
