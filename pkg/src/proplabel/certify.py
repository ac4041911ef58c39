"""Algebraic certificates for choosability bounds.

For an oriented graph, the sum polynomial Q multiplies, over all arcs (u,v), the
difference between the incident-label sums at u and at v; the product polynomial
P does the same with products.  A labelling is proper exactly when the relevant
polynomial does not vanish on it, so a nonzero coefficient on a suitable
monomial certifies, via the Combinatorial Nullstellensatz, that every list
assignment with large enough lists admits a proper labelling.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import CapExceeded
from .graphs import Graph, edge_key
from .labellings import Mode

EXPANSION_EDGE_LIMIT = 16


@dataclass(frozen=True)
class Orientation:
    """One ordered pair per edge, aligned with the graph's canonical edge order."""

    arcs: tuple[tuple[int, int], ...]

    def validate(self, g: Graph) -> None:
        if tuple(edge_key(*a) for a in self.arcs) != g.edges:
            raise ValueError("arcs must cover the graph's edges exactly once, in order")


def default_orientation(g: Graph) -> Orientation:
    """Each edge oriented from smaller to larger id; only signs depend on this."""
    return Orientation(tuple(g.edges))


def reverse_arc(o: Orientation, index: int) -> Orientation:
    arcs = list(o.arcs)
    u, v = arcs[index]
    arcs[index] = (v, u)
    return Orientation(tuple(arcs))


class SparsePolynomial:
    """Multivariate polynomial keyed by dense exponent vectors, big-int coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], int] = {}
        if terms:
            for expo, coeff in terms.items():
                self.add_term(expo, coeff)

    def add_term(self, expo, coeff: int) -> None:
        if coeff == 0:
            return
        expo = tuple(expo)
        if len(expo) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        new = self.terms.get(expo, 0) + coeff
        if new:
            self.terms[expo] = new
        else:
            del self.terms[expo]

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, expo) -> int:
        return self.terms.get(tuple(expo), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def max_exponent(self) -> int:
        return max((max(e) for e in self.terms), default=0)

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = SparsePolynomial(self.nvars)
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out.add_term(tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparsePolynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __repr__(self):
        return f"SparsePolynomial({len(self.terms)} terms over {self.nvars} vars)"

    def evaluate(self, values):
        acc = 0
        for expo, coeff in self.terms.items():
            term = coeff
            for x, e in zip(values, expo):
                term *= x**e
            acc += term
        return acc


def _check_expansion_size(g: Graph, limit: int) -> None:
    if g.num_edges > limit:
        raise CapExceeded(f"expansion refused for {g.num_edges} edges (limit {limit})")


def _arc_factor_sum(g: Graph, arc, index: dict) -> SparsePolynomial:
    m = g.num_edges
    f = SparsePolynomial(m)
    u, v = arc
    for w in g.neighbors(u):
        e = [0] * m
        e[index[edge_key(u, w)]] = 1
        f.add_term(tuple(e), 1)
    for w in g.neighbors(v):
        e = [0] * m
        e[index[edge_key(v, w)]] = 1
        f.add_term(tuple(e), -1)
    return f


def _arc_factor_product(g: Graph, arc, index: dict) -> SparsePolynomial:
    m = g.num_edges
    f = SparsePolynomial(m)
    u, v = arc
    e_u = [0] * m
    for w in g.neighbors(u):
        e_u[index[edge_key(u, w)]] += 1
    e_v = [0] * m
    for w in g.neighbors(v):
        e_v[index[edge_key(v, w)]] += 1
    f.add_term(tuple(e_u), 1)
    f.add_term(tuple(e_v), -1)
    return f


def _expand(g: Graph, o: Orientation, factor, limit: int) -> SparsePolynomial:
    _check_expansion_size(g, limit)
    o.validate(g)
    index = {e: i for i, e in enumerate(g.edges)}
    poly = SparsePolynomial(g.num_edges, {(0,) * g.num_edges: 1})
    for arc in o.arcs:
        poly = poly * factor(g, arc, index)
    return poly


def build_sum_poly(g: Graph, o: Orientation | None = None,
                   limit: int = EXPANSION_EDGE_LIMIT) -> SparsePolynomial:
    """Fully expanded sum polynomial; every term has total degree exactly m."""
    return _expand(g, o or default_orientation(g), _arc_factor_sum, limit)


def build_product_poly(g: Graph, o: Orientation | None = None,
                       limit: int = EXPANSION_EDGE_LIMIT) -> SparsePolynomial:
    """Fully expanded product polynomial; exponents stay below twice the max degree."""
    return _expand(g, o or default_orientation(g), _arc_factor_product, limit)


def permanent(mat) -> int:
    """Exact permanent by Ryser's inclusion-exclusion over column subsets."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    total = 0
    for bits in range(1, 1 << n):
        cols = [j for j in range(n) if bits >> j & 1]
        prod = 1
        for row in mat:
            s = 0
            for j in cols:
                s += row[j]
            prod *= s
            if prod == 0:
                break
        if (n - len(cols)) % 2:
            total -= prod
        else:
            total += prod
    return total


def sum_poly_matrix(g: Graph, o: Orientation | None = None) -> list[list[int]]:
    """Matrix whose permanent is the all-ones-exponent coefficient of Q.

    Row per arc, column per edge; entry = coefficient of that edge's variable in
    the arc's linear factor (+1 at the tail, -1 at the head, 0 if both or
    neither).  The multilinear coefficient of a product of homogeneous linear
    forms is the permanent of their coefficient matrix.
    """
    o = o or default_orientation(g)
    o.validate(g)
    index = {e: i for i, e in enumerate(g.edges)}
    m = g.num_edges
    rows = []
    for u, v in o.arcs:
        row = [0] * m
        for w in g.neighbors(u):
            row[index[edge_key(u, w)]] += 1
        for w in g.neighbors(v):
            row[index[edge_key(v, w)]] -= 1
        rows.append(row)
    return rows


def coefficient(p: SparsePolynomial, expo) -> int:
    return p.coefficient(expo)


@dataclass(frozen=True)
class Certificate:
    """A monomial witness proving a choosability bound.

    In SUM mode any monomial has maximum total degree; in PRODUCT mode the
    qualifier records that the witness monomial attains the expansion's maximum
    total degree, which the Nullstellensatz requires.  Lists of size
    1 + max(exponents) then always admit a proper labelling; in PRODUCT mode
    zero-free lists of size max(exponents) already do, because a zero label
    forces the polynomial to vanish, so padding lists with 0 costs nothing.
    """

    mode: Mode
    exponents: tuple[int, ...]
    coeff: int
    bound: int
    max_total_degree: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "mode": self.mode.value,
                "exponents": list(self.exponents),
                "coefficient": str(self.coeff),
                "bound": self.bound,
                "max_total_degree": self.max_total_degree,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        d = json.loads(text)
        return cls(
            Mode(d["mode"]),
            tuple(d["exponents"]),
            int(d["coefficient"]),
            int(d["bound"]),
            bool(d["max_total_degree"]),
        )


def certify(g: Graph, mode: Mode, k: int,
            limit: int = EXPANSION_EDGE_LIMIT) -> Certificate | None:
    """Search the expansion for a qualifying monomial with all exponents below k.

    Returns the lexicographically smallest qualifying exponent vector, or None
    when no monomial qualifies.  The verdict does not depend on the orientation:
    reversing an arc only negates every coefficient.
    """
    if k < 1:
        raise ValueError("k must be positive")
    poly = build_sum_poly(g, limit=limit) if mode is Mode.SUM else build_product_poly(g, limit=limit)
    if poly.is_zero():
        return None
    top = poly.total_degree()
    best = None
    for expo, coeff in poly.terms.items():
        if sum(expo) != top:
            continue
        if max(expo, default=0) >= k:
            continue
        if best is None or expo < best:
            best = expo
    if best is None:
        return None
    return Certificate(
        mode=mode,
        exponents=best,
        coeff=poly.terms[best],
        bound=1 + max(best, default=0),
        max_total_degree=True,
    )


def naive_permanent(mat) -> int:
    """Permanent by summing over all permutations; cross-check for small n."""
    n = len(mat)
    total = 0
    for perm in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(perm):
            prod *= mat[i][j]
        total += prod
    return total
