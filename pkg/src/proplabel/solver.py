"""Ground-truth decision procedures for list edge labelling.

`solve` is an exhaustive backtracking search; `count_proper` is a deliberately
independent flat enumeration over the full choice product.  The two are kept
separate so they can cross-check each other: NONE from `solve` means proven
infeasible, never "gave up".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceeded
from .graphs import Graph, edge_key
from .labellings import (
    Labelling,
    ListAssignment,
    Mode,
    assert_respects,
    check_proper,
    label_key,
)

DEFAULT_CAP = 2**24


@dataclass(frozen=True)
class SolveOutcome:
    labelling: Labelling | None
    nodes_explored: int

    @property
    def found(self) -> bool:
        return self.labelling is not None


def _edge_order(g: Graph) -> list[tuple[int, int]]:
    # Most-constrained-first: descending endpoint degree sum, then lexicographic.
    return sorted(g.edges, key=lambda e: (-(g.degree(e[0]) + g.degree(e[1])), e))


class _Backtracker:
    """Shared machinery for decision search and exhaustive solution counting."""

    def __init__(self, g: Graph, la: ListAssignment, mode: Mode, node_cap: int):
        if not la.covers(g):
            missing = [e for e in g.edges if e not in la]
            raise ValueError(f"list assignment does not cover edges: {missing[:5]}")
        self.g = g
        self.mode = mode
        self.node_cap = node_cap
        self.order = _edge_order(g)
        self.lists = [sorted(la[e], key=label_key) for e in self.order]
        self.nodes = 0

        ident = Fraction(1) if mode is Mode.PRODUCT else Fraction(0)
        self.acc = {v: ident for v in g.vertices}
        self.remaining = {v: g.degree(v) for v in g.vertices}
        self.labels: dict[tuple[int, int], Fraction] = {}

    def _conflicts(self, v: int) -> bool:
        # Only meaningful when v is complete; compares against complete neighbours.
        av = self.acc[v]
        for w in self.g.neighbors(v):
            if self.remaining[w] == 0 and self.acc[w] == av:
                return True
        return False

    def run(self, count_all: bool):
        """Depth-first over edges in fixed order.

        With count_all=False, stops at the first proper labelling (deterministic:
        first in edge order with lists sorted by label_key).  With count_all=True,
        exhausts the space and returns the number of proper labellings.
        """
        g, mode = self.g, self.mode
        order, lists = self.order, self.lists
        acc, remaining, labels = self.acc, self.remaining, self.labels
        m = len(order)
        found: Labelling | None = None
        count = 0

        def descend(i: int) -> bool:
            nonlocal count, found
            if i == m:
                if count_all:
                    count += 1
                    return False
                found = dict(labels)
                return True
            u, v = order[i]
            for x in lists[i]:
                self.nodes += 1
                if self.nodes > self.node_cap:
                    raise CapExceeded(f"solver node cap {self.node_cap} exceeded")
                old_u, old_v = acc[u], acc[v]
                if mode is Mode.PRODUCT:
                    acc[u] = old_u * x
                    acc[v] = old_v * x
                else:
                    acc[u] = old_u + x
                    acc[v] = old_v + x
                remaining[u] -= 1
                remaining[v] -= 1
                labels[(u, v)] = x
                ok = not ((remaining[u] == 0 and self._conflicts(u))
                          or (remaining[v] == 0 and self._conflicts(v)))
                if ok and descend(i + 1):
                    return True
                del labels[(u, v)]
                remaining[u] += 1
                remaining[v] += 1
                acc[u], acc[v] = old_u, old_v
            return False

        descend(0)
        return found, count


def solve(g: Graph, la: ListAssignment, mode: Mode, node_cap: int = DEFAULT_CAP) -> SolveOutcome:
    """Complete search for a proper labelling drawing every label from its list.

    Returns FOUND with the deterministic first solution, or NONE after exhausting
    the space.  Raises CapExceeded instead of silently truncating.
    """
    if any(len(la[e]) == 0 for e in g.edges):
        return SolveOutcome(None, 0)
    bt = _Backtracker(g, la, mode, node_cap)
    found, _ = bt.run(count_all=False)
    if found is not None:
        # Soundness is asserted on every return.
        assert_respects(found, la)
        assert not check_proper(g, found, mode), "solver returned an improper labelling"
    return SolveOutcome(found, bt.nodes)


def count_via_backtracking(g: Graph, la: ListAssignment, mode: Mode,
                           node_cap: int = DEFAULT_CAP) -> int:
    """Number of proper labellings, via the pruned backtracking route."""
    if any(len(la[e]) == 0 for e in g.edges):
        return 0
    bt = _Backtracker(g, la, mode, node_cap)
    _, count = bt.run(count_all=True)
    return count


def count_proper(g: Graph, la: ListAssignment, mode: Mode, cap: int = DEFAULT_CAP) -> int:
    """Exact number of proper labellings by flat iteration over the full product.

    Intentionally independent of the backtracking search: no pruning, no shared
    state.  Refuses when the choice product exceeds `cap`.
    """
    edges = list(g.edges)
    lists = [sorted(la[e], key=label_key) for e in edges]
    total = 1
    for vals in lists:
        total *= len(vals)
        if total > cap:
            raise CapExceeded(f"choice product exceeds cap {cap}")
    if total == 0:
        return 0

    verts = g.vertices
    index = {v: i for i, v in enumerate(verts)}
    incident = [[] for _ in verts]
    for j, (u, v) in enumerate(edges):
        incident[index[u]].append(j)
        incident[index[v]].append(j)
    pairs = [(index[u], index[v]) for u, v in edges]
    is_prod = mode is Mode.PRODUCT
    ident = Fraction(1) if is_prod else Fraction(0)

    count = 0
    for choice in itertools.product(*lists):
        colours = []
        for js in incident:
            c = ident
            if is_prod:
                for j in js:
                    c *= choice[j]
            else:
                for j in js:
                    c += choice[j]
            colours.append(c)
        if all(colours[a] != colours[b] for a, b in pairs):
            count += 1
    return count


@dataclass(frozen=True)
class WorstListOutcome:
    feasible: bool
    witness: ListAssignment | None
    assignments_checked: int


def worst_list_verdict(g: Graph, universe, k: int, mode: Mode,
                       cap: int = DEFAULT_CAP) -> WorstListOutcome:
    """Check every k-list assignment drawn from a finite label universe.

    FEASIBLE means each one admits a proper labelling; otherwise the first
    infeasible assignment found is returned as a concrete lower-bound witness.
    """
    values = sorted({Fraction(x) for x in universe}, key=label_key)
    if k < 1 or k > len(values):
        raise ValueError(f"k={k} incompatible with universe of size {len(values)}")
    subsets = list(itertools.combinations(values, k))
    edges = list(g.edges)
    total = 1
    for _ in edges:
        total *= len(subsets)
        if total > cap:
            raise CapExceeded(f"assignment space exceeds cap {cap}")

    checked = 0
    for pick in itertools.product(subsets, repeat=len(edges)):
        la = ListAssignment(dict(zip(edges, pick)))
        checked += 1
        if not solve(g, la, mode).found:
            # Re-check the defining property before the witness escapes.
            assert not solve(g, la, mode).found
            return WorstListOutcome(False, la, checked)
    return WorstListOutcome(True, None, checked)
