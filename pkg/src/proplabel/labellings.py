"""Exact-arithmetic edge labels, list assignments and the properness checkers.

All label arithmetic uses `fractions.Fraction`: properness is an equality
predicate on induced vertex colours, and floating point would make values such
as a and a**2 collide.  Canonical lowest-terms form means colour comparison and
list membership are structural equality.
"""

from __future__ import annotations

import enum
import json
import re
from fractions import Fraction

from .errors import PreconditionError
from .graphs import Graph, edge_key

Edge = tuple[int, int]
Labelling = dict  # Edge -> Fraction, total on E(G)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class Mode(enum.Enum):
    SUM = "sum"
    PRODUCT = "product"


def parse_label(text: str) -> Fraction:
    """Parse a rational literal: "3", "-1/2"."""
    s = str(text).strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(s)


def format_label(x: Fraction) -> str:
    return str(Fraction(x))


def label_key(x: Fraction):
    """Deterministic tie-breaking order for labels: (numerator, denominator)."""
    return (x.numerator, x.denominator)


class ListAssignment:
    """Per-edge finite label sets.

    Lists are stored deduplicated and sorted by `label_key`, so membership and
    iteration order are canonical.
    """

    __slots__ = ("_lists",)

    def __init__(self, lists):
        canon = {}
        for e, values in lists.items():
            u, v = e
            canon[edge_key(u, v)] = tuple(sorted({Fraction(x) for x in values}, key=label_key))
        self._lists = dict(sorted(canon.items()))

    @classmethod
    def uniform(cls, g: Graph, values) -> "ListAssignment":
        vals = tuple(values)
        return cls({e: vals for e in g.edges})

    @property
    def lists(self) -> dict:
        return self._lists

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._lists)

    def __getitem__(self, e: Edge):
        return self._lists[edge_key(*e)]

    def __contains__(self, e: Edge) -> bool:
        return edge_key(*e) in self._lists

    def __eq__(self, other):
        return isinstance(other, ListAssignment) and self._lists == other._lists

    def __repr__(self):
        return f"ListAssignment({len(self._lists)} edges)"

    def size_of(self, e: Edge) -> int:
        return len(self[e])

    def min_size(self) -> int:
        return min((len(v) for v in self._lists.values()), default=0)

    def uniform_size(self):
        """The common list size, or None when lists are non-uniform."""
        sizes = {len(v) for v in self._lists.values()}
        return sizes.pop() if len(sizes) == 1 else None

    def is_zero_free(self) -> bool:
        return all(0 not in v for v in self._lists.values())

    def covers(self, g: Graph) -> bool:
        return all(e in self._lists for e in g.edges)

    def restrict(self, edges) -> "ListAssignment":
        keep = {edge_key(*e) for e in edges}
        return ListAssignment({e: v for e, v in self._lists.items() if e in keep})

    def to_json(self) -> str:
        payload = {f"{u}-{v}": [format_label(x) for x in vals] for (u, v), vals in self._lists.items()}
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ListAssignment":
        payload = json.loads(text)
        if not isinstance(payload, dict):
            raise ValueError("list-assignment JSON must be an object")
        lists = {}
        for key, values in payload.items():
            e = _parse_edge_key(key)
            if not isinstance(values, list):
                raise ValueError(f"edge {key}: expected an array of rationals")
            lists[e] = [parse_label(x) for x in values]
        return cls(lists)


def _parse_edge_key(key: str) -> Edge:
    parts = key.split("-")
    if len(parts) != 2:
        raise ValueError(f"bad edge key {key!r}, expected 'u-v'")
    u, v = int(parts[0]), int(parts[1])
    if u >= v:
        raise ValueError(f"edge key {key!r} must satisfy u < v")
    return (u, v)


def strip_zero(la: ListAssignment) -> ListAssignment:
    """Remove label 0 from every list.

    Feasibility in PRODUCT mode is unchanged: an edge labelled 0 zeroes both
    endpoint products, so no proper labelling ever uses it.
    """
    return ListAssignment({e: [x for x in vals if x != 0] for e, vals in la.lists.items()})


# -- labellings ----------------------------------------------------------------


def labelling_to_json(lab: Labelling) -> str:
    items = sorted((edge_key(*e), x) for e, x in lab.items())
    return json.dumps({f"{u}-{v}": format_label(x) for (u, v), x in items}, indent=2)


def labelling_from_json(text: str) -> Labelling:
    payload = json.loads(text)
    if not isinstance(payload, dict):
        raise ValueError("labelling JSON must be an object")
    return {_parse_edge_key(k): parse_label(x) for k, x in payload.items()}


def assert_total(g: Graph, lab: Labelling) -> None:
    missing = [e for e in g.edges if e not in lab]
    if missing:
        raise PreconditionError(f"labelling is missing edges: {missing[:5]}")


def assert_respects(lab: Labelling, la: ListAssignment) -> None:
    for e, x in lab.items():
        e = edge_key(*e)
        if e not in la:
            raise PreconditionError(f"edge {e} has no list")
        if Fraction(x) not in la[e]:
            raise PreconditionError(f"label {format_label(x)} for edge {e} is outside its list")


def vertex_colour(g: Graph, lab: Labelling, v: int, mode: Mode) -> Fraction:
    """Induced colour of v: sum or product of incident labels.

    Empty sums are 0 and empty products are 1, so isolated vertices never
    conflict with anything.
    """
    if mode is Mode.PRODUCT:
        acc = Fraction(1)
        for w in g.neighbors(v):
            acc *= lab[edge_key(v, w)]
    else:
        acc = Fraction(0)
        for w in g.neighbors(v):
            acc += lab[edge_key(v, w)]
    return acc


def vertex_product(g: Graph, lab: Labelling, v: int) -> Fraction:
    return vertex_colour(g, lab, v, Mode.PRODUCT)


def vertex_sum(g: Graph, lab: Labelling, v: int) -> Fraction:
    return vertex_colour(g, lab, v, Mode.SUM)


def colour_map(g: Graph, lab: Labelling, mode: Mode) -> dict:
    assert_total(g, lab)
    return {v: vertex_colour(g, lab, v, mode) for v in g.vertices}


def check_proper(g: Graph, lab: Labelling, mode: Mode) -> list[Edge]:
    """Exactly the edges whose endpoints get equal colours; empty means proper."""
    colours = colour_map(g, lab, mode)
    return [e for e in g.edges if colours[e[0]] == colours[e[1]]]
