"""Static registry of known list-labelling bounds for common graph classes.

Each sum-side bound doubles into a product-side bound through the
halve-the-list reduction (lists of size 2k-1 contain k values of pairwise
distinct absolute value, and absolute products behave like sums).
"""

from __future__ import annotations

from dataclasses import dataclass

DOUBLING = "doubling reduction from the sum bound"


@dataclass(frozen=True)
class BoundRegistryEntry:
    graph_class: str
    parameter: str  # "ch_sum" or "ch_prod_star"
    bound: str
    source: str


_CLASSES = [
    ("nice connected graph", "D+1", "2D+1", "general max-degree sum bound"),
    ("complete graph", "3", "5", "algebraic sum bound"),
    ("complete bipartite graph", "3", "5", "algebraic sum bound"),
    ("tree", "3", "5", "algebraic sum bound"),
    ("2-degenerate non-bipartite graph", "3", "5", "degeneracy sum bound"),
    ("wheel", "3", "5", "wheel sum bound"),
    ("graph with mad <= 11/4", "3", "5", "sparse-graph sum bound"),
    ("outerplanar graph", "4", "7", "outerplanar sum bound"),
    ("graph with max degree <= 4", "4", "7", "bounded-degree sum bound"),
    ("2-connected chordal graph", "5", "9", "chordal sum bound"),
    ("line graph", "5", "9", "line-graph sum bound"),
    ("planar graph", "7", "13", "planar sum bound"),
]

REGISTRY: tuple[BoundRegistryEntry, ...] = tuple(
    entry
    for cls, s_bound, p_bound, src in _CLASSES
    for entry in (
        BoundRegistryEntry(cls, "ch_sum", s_bound, src),
        BoundRegistryEntry(cls, "ch_prod_star", p_bound, DOUBLING),
    )
)


def format_table() -> str:
    width = max(len(e.graph_class) for e in REGISTRY)
    lines = [f"{'class':{width}}  parameter     bound  source"]
    for e in REGISTRY:
        lines.append(f"{e.graph_class:{width}}  {e.parameter:12}  {e.bound:5}  {e.source}")
    return "\n".join(lines)
