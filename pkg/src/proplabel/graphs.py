"""Undirected simple graphs and the structural queries the labelling algorithms rely on.

Vertices are non-negative integers.  Graphs are immutable after construction and
all iteration happens in increasing id order, so every algorithm built on top is
reproducible.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .errors import GraphParseError, StructureError

Edge = tuple[int, int]

INFINITE = math.inf


def edge_key(u: int, v: int) -> Edge:
    """Canonical (min, max) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph: no loops, no parallel edges."""

    __slots__ = ("_vertices", "_edges", "_adj")

    def __init__(self, vertices=(), edges=()):
        vs = set(int(v) for v in vertices)
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise StructureError(f"self-loop at vertex {u}")
            if u < 0 or v < 0:
                raise StructureError("vertex ids must be non-negative")
            es.add(edge_key(u, v))
            vs.add(u)
            vs.add(v)
        if any(v < 0 for v in vs):
            raise StructureError("vertex ids must be non-negative")
        adj: dict[int, list[int]] = {v: [] for v in vs}
        for u, v in es:
            adj[u].append(v)
            adj[v].append(u)
        self._vertices = tuple(sorted(vs))
        self._edges = tuple(sorted(es))
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}

    # -- basic accessors ---------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def num_vertices(self) -> int:
        return len(self._vertices)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def min_degree(self) -> int:
        return min((len(ns) for ns in self._adj.values()), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self._vertices == other._vertices
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash((self._vertices, self._edges))

    def __repr__(self):
        return f"Graph(n={self.num_vertices}, m={self.num_edges})"

    # -- derived structure -------------------------------------------------

    def components(self) -> list[tuple[int, ...]]:
        """Connected components as sorted vertex tuples, ordered by smallest member."""
        seen: set[int] = set()
        comps = []
        for s in self._vertices:
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_tree(self) -> bool:
        return self.is_connected() and self.num_edges == self.num_vertices - 1

    def is_path_graph(self) -> bool:
        return self.is_tree() and self.max_degree() <= 2

    def is_cycle_graph(self) -> bool:
        return (
            self.num_vertices >= 3
            and self.is_connected()
            and all(self.degree(v) == 2 for v in self._vertices)
        )

    # -- immutable surgery -------------------------------------------------

    def without_vertices(self, removed) -> Graph:
        rm = set(removed)
        vs = [v for v in self._vertices if v not in rm]
        es = [(u, v) for u, v in self._edges if u not in rm and v not in rm]
        return Graph(vs, es)

    def without_edges(self, removed) -> Graph:
        rm = {edge_key(u, v) for u, v in removed}
        return Graph(self._vertices, [e for e in self._edges if e not in rm])

    def induced(self, kept) -> Graph:
        kp = set(kept)
        return Graph(
            [v for v in self._vertices if v in kp],
            [(u, v) for u, v in self._edges if u in kp and v in kp],
        )


# -- constructors ------------------------------------------------------------


def path_graph(n: int) -> Graph:
    """Path with n edges on vertices 0..n."""
    if n < 0:
        raise StructureError("path length must be non-negative")
    return Graph(range(n + 1), [(i, i + 1) for i in range(n)])


def cycle_graph(n: int) -> Graph:
    """Cycle with n edges on vertices 0..n-1."""
    if n < 3:
        raise StructureError("cycles need length at least 3")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def star_graph(q: int) -> Graph:
    """Star with center 0 and leaves 1..q."""
    return Graph(range(q + 1), [(0, i) for i in range(1, q + 1)])


def complete_graph(n: int) -> Graph:
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(range(a + b), [(i, a + j) for i in range(a) for j in range(b)])


# -- edge-list text format ----------------------------------------------------


def parse_edge_list(text: str) -> Graph:
    """Parse the plain edge-list format: one "u v" pair per line.

    '#' starts a comment line, blank lines are ignored.  Self-loops, duplicate
    edges and malformed lines are rejected with the offending line number.
    """
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(f"expected two integers, got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        if u < 0 or v < 0:
            raise GraphParseError("vertex ids must be non-negative", lineno)
        e = edge_key(u, v)
        if e in seen:
            raise GraphParseError(f"duplicate edge {e[0]} {e[1]}", lineno)
        seen.add(e)
        edges.append(e)
    return Graph((), edges)


def serialize_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


# -- structural queries --------------------------------------------------------


def is_nice(g: Graph) -> bool:
    """True iff no connected component is a single edge on two degree-1 vertices."""
    for comp in g.components():
        if len(comp) == 2 and g.degree(comp[0]) == 1:
            return False
    return True


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    """Lexicographically smallest rotation/reflection of a cycle's vertex sequence."""
    n = len(cycle)
    best = None
    for seq in (cycle, cycle[::-1]):
        for s in range(n):
            cand = tuple(seq[(s + i) % n] for i in range(n))
            if best is None or cand < best:
                best = cand
    return best


def shortest_cycle(g: Graph):
    """A shortest cycle as a vertex tuple (lex-smallest canonical form), or None.

    Shortest cycles are always induced: a chord would close a shorter cycle.
    """
    best = None  # (length, canonical form)
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y and parent.get(y) != x:
                    # Non-tree edge: walk both endpoints up to their meeting point.
                    px, py = [x], [y]
                    while px[-1] is not None:
                        px.append(parent[px[-1]])
                    while py[-1] is not None:
                        py.append(parent[py[-1]])
                    px.pop()
                    py.pop()
                    shared = set(px) & set(py)
                    cut_x = next(i for i, w in enumerate(px) if w in shared)
                    cut_y = next(i for i, w in enumerate(py) if w in shared)
                    if px[cut_x] != py[cut_y]:
                        continue
                    cyc = px[: cut_x + 1] + py[:cut_y][::-1]
                    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
                        continue
                    cand = (len(cyc), _canonical_cycle(cyc))
                    if best is None or cand < best:
                        best = cand
    return None if best is None else best[1]


def girth(g: Graph):
    """Length of a shortest cycle; INFINITE (math.inf) for forests."""
    c = shortest_cycle(g)
    return INFINITE if c is None else len(c)


def bipartition(g: Graph):
    """A 2-colouring class pair (A, B), or None when some component has an odd cycle.

    Per component the side containing the smallest vertex id goes to A.
    """
    side: dict[int, int] = {}
    a: set[int] = set()
    b: set[int] = set()
    for comp in g.components():
        s = comp[0]
        side[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if y not in side:
                    side[y] = 1 - side[x]
                    queue.append(y)
                elif side[y] == side[x]:
                    return None
        a |= {v for v in comp if side[v] == 0}
        b |= {v for v in comp if side[v] == 1}
    return (a, b)


@dataclass(frozen=True)
class Thread:
    """A path whose interior vertices all have degree exactly 2.

    Endpoints have degree >= 2; on a cycle they are ordinary degree-2 vertices.
    """

    u: int
    interior: tuple[int, ...]
    w: int

    def validate(self, g: Graph) -> None:
        verts = (self.u, *self.interior, self.w)
        if len(set(verts)) != len(verts):
            raise StructureError("thread vertices must be distinct")
        if g.degree(self.u) < 2 or g.degree(self.w) < 2:
            raise StructureError("thread endpoints need degree >= 2")
        for v in self.interior:
            if g.degree(v) != 2:
                raise StructureError("thread interior must have degree exactly 2")
        for x, y in zip(verts, verts[1:]):
            if y not in g.neighbors(x):
                raise StructureError("thread vertices must be consecutive")


def find_thread(g: Graph, length: int):
    """Some thread with `length` interior vertices, or None.

    Scans maximal chains of degree-2 vertices in increasing id order, so the
    result is deterministic for a fixed graph.
    """
    if length < 1:
        raise ValueError("thread length must be positive")

    def walk(start: int, first: int):
        """Follow degree-2 vertices from `start` towards `first`; return (path, end)."""
        path = []
        prev, cur = start, first
        while g.degree(cur) == 2 and cur != start:
            path.append(cur)
            cur, prev = [z for z in g.neighbors(cur) if z != prev][0], cur
        return path, cur

    seen: set[int] = set()
    for start in g.vertices:
        if g.degree(start) != 2 or start in seen:
            continue
        n0, n1 = g.neighbors(start)
        left_path, left_end = walk(start, n0)
        if left_end == start:
            # The whole component is a cycle; any long-enough window works.
            comp = [start] + left_path
            seen.update(comp)
            if len(comp) >= length + 2:
                t = Thread(comp[0], tuple(comp[1 : 1 + length]), comp[1 + length])
                t.validate(g)
                return t
            continue
        right_path, right_end = walk(start, n1)
        chain = left_path[::-1] + [start] + right_path
        seen.update(chain)
        k = len(chain)
        # Window flanks must have degree >= 2 and all vertices must be distinct.
        lo = 0 if g.degree(left_end) >= 2 else 1
        hi = (k - length) if g.degree(right_end) >= 2 else (k - length - 1)
        for off in range(max(lo, 0), hi + 1):
            if off + length > k:
                continue
            u = left_end if off == 0 else chain[off - 1]
            w = right_end if off + length == k else chain[off + length]
            if u == w:
                continue
            t = Thread(u, tuple(chain[off : off + length]), w)
            t.validate(g)
            return t
    return None


def pending_path3(g: Graph):
    """A pending path (u, v, w, x) with d(u)=1, d(v)=d(w)=2, d(x)>=2, or None."""
    for u in g.vertices:
        if g.degree(u) != 1:
            continue
        v = g.neighbors(u)[0]
        if g.degree(v) != 2:
            continue
        w = [z for z in g.neighbors(v) if z != u][0]
        if g.degree(w) != 2:
            continue
        x = [z for z in g.neighbors(w) if z != v][0]
        if g.degree(x) >= 2:
            return (u, v, w, x)
    return None


@dataclass(frozen=True)
class TreeStructure:
    """Root-to-leaf decomposition of a tree.

    `leaf_children` and `two_step_children` describe the pending paths hanging
    from the deepest branching vertex; they are only meaningful when
    `long_pending_path` is None (otherwise the tree still needs reducing).
    """

    root: int
    parent: dict
    deepest_branching: int | None
    leaf_children: tuple[int, ...]
    two_step_children: tuple[tuple[int, int], ...]
    long_pending_path: tuple[int, int, int, int] | None


def tree_structure(t: Graph, root: int) -> TreeStructure:
    if not t.is_tree():
        raise StructureError("input is not a tree")
    if not t.has_vertex(root):
        raise StructureError(f"root {root} not in tree")
    parent: dict[int, int | None] = {root: None}
    depth = {root: 0}
    order = [root]
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in t.neighbors(x):
            if y not in parent:
                parent[y] = x
                depth[y] = depth[x] + 1
                order.append(y)
                queue.append(y)

    branchings = [v for v in t.vertices if t.degree(v) >= 3]
    deepest = None
    if branchings:
        deepest = min(branchings, key=lambda v: (-depth[v], v))

    long_path = pending_path3(t)

    leaf_children: list[int] = []
    two_step: list[tuple[int, int]] = []
    if deepest is not None and long_path is None:
        for c in t.neighbors(deepest):
            if c == parent[deepest]:
                continue
            if t.degree(c) == 1:
                leaf_children.append(c)
            else:
                grand = [z for z in t.neighbors(c) if z != deepest]
                if t.degree(c) != 2 or len(grand) != 1 or t.degree(grand[0]) != 1:
                    raise StructureError(
                        "deepest branching vertex has a descendant chain longer than 2"
                    )
                two_step.append((c, grand[0]))

    return TreeStructure(
        root=root,
        parent=parent,
        deepest_branching=deepest,
        leaf_children=tuple(leaf_children),
        two_step_children=tuple(two_step),
        long_pending_path=long_path,
    )


def two_core(g: Graph) -> Graph:
    """Maximal subgraph with minimum degree >= 2 (iteratively strip degree <= 1)."""
    deg = {v: g.degree(v) for v in g.vertices}
    removed: set[int] = set()
    queue = deque(v for v in g.vertices if deg[v] <= 1)
    while queue:
        x = queue.popleft()
        if x in removed:
            continue
        removed.add(x)
        for y in g.neighbors(x):
            if y not in removed:
                deg[y] -= 1
                if deg[y] <= 1:
                    queue.append(y)
    return g.without_vertices(removed)
