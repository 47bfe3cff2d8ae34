"""Concept graphs, write-up metrics, and cue-driven exploration sessions."""
from __future__ import annotations

from .graph import (
    AnalogyMap,
    AnalogyPair,
    Attribute,
    Concept,
    ConceptGraph,
    Explicitness,
    GraphError,
    Origin,
    RelationKind,
    Relationship,
    build_graph,
    components,
    degree,
    merge_graphs,
    normalize_label,
)

__version__ = "1.0.0"

__all__ = [
    "AnalogyMap",
    "AnalogyPair",
    "Attribute",
    "Concept",
    "ConceptGraph",
    "Explicitness",
    "GraphError",
    "Origin",
    "RelationKind",
    "Relationship",
    "build_graph",
    "components",
    "degree",
    "merge_graphs",
    "normalize_label",
    "__version__",
]
