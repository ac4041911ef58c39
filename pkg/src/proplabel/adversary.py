"""Lower-bound constructions: list assignments that admit no proper labelling.

Every generator runs the exact solver on its output before returning, so no
unverified witness ever escapes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation, PreconditionError
from .graphs import Graph, bipartition, cycle_graph, path_graph, serialize_edge_list
from .labellings import ListAssignment, Mode, format_label
from .solver import solve


@dataclass(frozen=True)
class AdversaryWitness:
    graph: Graph
    lists: ListAssignment
    claim: str
    mode: Mode = Mode.PRODUCT

    def to_json(self) -> str:
        return json.dumps(
            {
                "claim": self.claim,
                "mode": self.mode.value,
                "edges": [list(e) for e in self.graph.edges],
                "lists": {
                    f"{u}-{v}": [format_label(x) for x in vals]
                    for (u, v), vals in self.lists.lists.items()
                },
            },
            indent=2,
        )


def _verified(graph: Graph, lists: ListAssignment, claim: str) -> AdversaryWitness:
    if solve(graph, lists, Mode.PRODUCT).found:
        raise InvariantViolation(f"claimed witness for {claim!r} admits a proper labelling")
    return AdversaryWitness(graph, lists, claim)


def all_ones(g: Graph) -> AdversaryWitness:
    """Lists {1} everywhere: both endpoint products of any edge equal 1."""
    if g.num_edges == 0:
        raise PreconditionError("graph needs at least one edge")
    return _verified(g, ListAssignment.uniform(g, [Fraction(1)]), "ch_prod_star > 1")


def plus_minus_one(g: Graph):
    """Lists {-1, 1} everywhere; a witness exactly when some component is
    non-bipartite or has both bipartition sides odd.

    With these lists every vertex product is +1 or -1, so properness is a proper
    2-colouring realizable by an edge subset with prescribed degree parities;
    such a subset exists iff some side of each component is even.
    Returns None (not a witness) otherwise.
    """
    parts = bipartition(g)
    if parts is None:
        bad = True
    else:
        a, b = parts
        bad = any(
            len(set(comp) & a) % 2 == 1 and len(set(comp) & b) % 2 == 1
            for comp in g.components()
        )
    if not bad:
        return None
    la = ListAssignment.uniform(g, [Fraction(-1), Fraction(1)])
    return _verified(g, la, "ch_prod_star > 2")


def bad_tree8(a) -> AdversaryWitness:
    """The 8-vertex tree whose two pending 2-paths force a chain of labels.

    Lists: {1, a} on the edges into the double fork, {1, a^2} on the bridge edge,
    {a, a^2} elsewhere.  The two pending paths force label a on both fork edges,
    the fork product a^2 then forces the bridge edge to 1, and the remaining
    pending path makes that a conflict.
    """
    a = Fraction(a)
    if a in (0, 1, -1):
        raise PreconditionError("parameter must avoid 0, 1 and -1")
    g = Graph(range(1, 9), [(1, 2), (2, 5), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)])
    filler = (a, a * a)
    lists = {e: filler for e in g.edges}
    lists[(2, 5)] = (Fraction(1), a)
    lists[(4, 5)] = (Fraction(1), a)
    lists[(6, 7)] = (Fraction(1), a * a)
    return _verified(g, ListAssignment(lists), "ch_prod_star > 2")


def bad_path(n: int, a, b) -> AdversaryWitness:
    """Infeasible 2-lists on the path P_n for n = 3 (mod 4), n >= 7.

    The even-indexed edges e_2, e_4, ..., e_{n-1} form an odd-length chain whose
    consecutive members must differ, with labels 1 banned at both ends; lists
    {1,a}, {a,b}, ..., {1, t} (t matching the forced alternation) leave no
    consistent choice.
    """
    a, b = Fraction(a), Fraction(b)
    if n < 7 or n % 4 != 3:
        raise PreconditionError("n must be at least 7 and congruent to 3 mod 4")
    if a in (0, 1, -1):
        raise PreconditionError("a must avoid 0, 1 and -1")
    if b in (0, 1, a):
        raise PreconditionError("b must avoid 0, 1 and a")
    g = path_graph(n)
    default = (a, b)
    lists = {e: default for e in g.edges}
    chain = list(range(2, n, 2))  # edge indices 2, 4, ..., n-1
    forced = a
    for idx in chain[1:-1]:
        lists[(idx - 1, idx)] = (a, b)
        forced = b if forced == a else a
    lists[(1, 2)] = (Fraction(1), a)
    lists[(n - 2, n - 1)] = (Fraction(1), forced)
    return _verified(g, ListAssignment(lists), "ch_prod_star > 2")


def bad_odd_cycle(n: int, a, b):
    """Identical 2-lists {a, b} on C_n.

    For n not divisible by 4 the distance-2 constraint graph contains an odd
    cycle, which equal 2-lists cannot properly colour; returns a verified
    witness.  For n = 0 (mod 4) returns None (the solver finds a labelling).
    """
    a, b = Fraction(a), Fraction(b)
    if n < 3:
        raise PreconditionError("cycles need length at least 3")
    if a == b or a == 0 or b == 0:
        raise PreconditionError("need two distinct nonzero labels")
    if n % 4 == 0:
        return None
    g = cycle_graph(n)
    return _verified(g, ListAssignment.uniform(g, (a, b)), "ch_prod_star > 2")


def witness_from_json(text: str) -> AdversaryWitness:
    payload = json.loads(text)
    g = Graph((), [tuple(e) for e in payload["edges"]])
    la = ListAssignment.from_json(json.dumps(payload["lists"]))
    return AdversaryWitness(g, la, payload["claim"], Mode(payload.get("mode", "product")))
