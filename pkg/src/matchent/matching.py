"""Exact matching counts: matching polynomials, permanents, Newton checks.

Everything here is integer or rational arithmetic; counts overflow 64 bits
already for modest tori, so no floating point enters until a caller takes
a logarithm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ResourceLimitError
from .graphs import Graph, biadjacency_graph, regular_biadjacency_matrices

# Vertex guard for the deletion recursion; the memo is keyed by induced
# subgraph bitmasks, so width matters more than this cap in practice.
DEFAULT_VERTEX_GUARD = 40


@dataclass(frozen=True)
class MatchingPolynomial:
    """Coefficients of the matching generating polynomial; entry l counts l-matchings."""

    coefficients: tuple[int, ...]
    vertex_count: int

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise ValueError("coefficient 0 must be 1 (the empty matching)")
        if len(self.coefficients) > self.vertex_count // 2 + 1:
            raise ValueError("more coefficients than floor(n/2) + 1")
        if any(c < 0 for c in self.coefficients):
            raise ValueError("matching counts must be nonnegative")

    def count(self, l: int) -> int:
        """Number of l-matchings (0 outside the stored range)."""
        if 0 <= l < len(self.coefficients):
            return self.coefficients[l]
        return 0

    def evaluate(self, x):
        """Generating polynomial at x; exact for Fraction/int arguments."""
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    @property
    def total(self) -> int:
        """Number of monomer-dimer covers: the coefficient sum."""
        return sum(self.coefficients)


def matching_polynomial(g: Graph, guard: int = DEFAULT_VERTEX_GUARD) -> MatchingPolynomial:
    """Exact matching polynomial by vertex-deletion recursion.

    Removing the lowest remaining vertex either leaves it a monomer or
    matches it to a live neighbor (multiplicities multiply the counts).
    States are induced-subgraph bitmasks, memoized across the recursion.
    """
    n = g.vertex_count
    if n > guard:
        raise ResourceLimitError(f"graph has {n} vertices, guard is {guard}")
    adj = g.adjacency
    memo = {0: (1,)}

    def poly(mask):
        cached = memo.get(mask)
        if cached is not None:
            return cached
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        out = list(poly(rest))
        for u, mult in adj[v]:
            if rest >> u & 1:
                sub = poly(rest & ~(1 << u))
                if len(out) < len(sub) + 1:
                    out.extend([0] * (len(sub) + 1 - len(out)))
                for i, c in enumerate(sub):
                    out[i + 1] += mult * c
        result = tuple(out)
        memo[mask] = result
        return result

    return MatchingPolynomial(poly((1 << n) - 1), n)


def krr_matching_count(r: int, l: int) -> int:
    """l-matchings of the complete bipartite graph K_{r,r}: C(r,l)^2 * l!."""
    if not 0 <= l <= r:
        raise ValueError(f"need 0 <= l <= r, got l={l}, r={r}")
    return math.comb(r, l) ** 2 * math.factorial(l)


def monomer_dimer_cover_count(g: Graph, guard: int = DEFAULT_VERTEX_GUARD) -> int:
    """Number of monomer-dimer covers: sum of all matching counts."""
    return matching_polynomial(g, guard).total


def newton_check(mp: MatchingPolynomial) -> tuple[bool, int | None]:
    """Exact Newton log-concavity of counts normalized by binomials.

    With n = floor(vertex_count / 2), checks
    phi(l-1)/C(n,l-1) * phi(l+1)/C(n,l+1) <= (phi(l)/C(n,l))^2 for every
    interior l in rational arithmetic.  Returns (ok, first violating l).
    """
    n = mp.vertex_count // 2
    for l in range(1, n):
        lhs = (Fraction(mp.count(l - 1), math.comb(n, l - 1))
               * Fraction(mp.count(l + 1), math.comb(n, l + 1)))
        rhs = Fraction(mp.count(l), math.comb(n, l)) ** 2
        if lhs > rhs:
            return False, l
    return True, None


def permanent(matrix) -> int:
    """Exact permanent of a square nonnegative integer matrix.

    Row expansion with memoization on the remaining-columns mask; fine for
    the desk-scale matrices used here.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    memo = {}

    def rec(i, cols):
        if i == n:
            return 1
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total = 0
        row = matrix[i]
        for j in range(n):
            if cols >> j & 1 and row[j]:
                total += row[j] * rec(i + 1, cols & ~(1 << j))
        memo[cols] = total
        return total

    # the row index is determined by popcount of cols, so cols alone keys the memo
    return rec(0, (1 << n) - 1)


def matchings_from_biadjacency(matrix, l: int) -> int:
    """l-matchings of a bipartite multigraph given by its biadjacency matrix.

    Sums permanents of all l-by-l submatrices; multiplicities weigh each
    matching by the product of the chosen parallel-edge counts.
    """
    n = len(matrix)
    if not 0 <= l <= n:
        raise ValueError(f"need 0 <= l <= {n}")
    if l == 0:
        return 1
    total = 0
    for rows in combinations(range(n), l):
        for cols in combinations(range(n), l):
            sub = [[matrix[i][j] for j in cols] for i in rows]
            total += permanent(sub)
    return total


def min_matchings_over_class(n: int, r: int, l: int) -> tuple[int, Graph]:
    """Minimum l-matching count over all r-regular bipartite multigraphs on n+n.

    Returns the minimum and a witness graph.  Runs the complete biadjacency
    enumeration, so the class guards apply.
    """
    best = None
    witness = None
    for matrix in regular_biadjacency_matrices(n, r):
        value = matchings_from_biadjacency(matrix, l)
        if best is None or value < best:
            best = value
            witness = matrix
    if best is None:
        raise ValueError("empty class")
    return best, biadjacency_graph(witness)


def finite_entropy_point(g: Graph, p: float, guard: int = DEFAULT_VERTEX_GUARD) -> float:
    """Finite-graph entropy at density p: log max(phi(floor(p n / 2)), 1) / n."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    mp = matching_polynomial(g, guard)
    l = int(p * g.vertex_count / 2)
    return math.log(max(mp.count(l), 1)) / g.vertex_count


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def polynomial_to_json(mp: MatchingPolynomial) -> str:
    """Counts as decimal strings so arbitrary precision survives the trip."""
    return json.dumps({"n_vertices": mp.vertex_count,
                       "phi": [str(c) for c in mp.coefficients]})


def polynomial_from_json(text: str) -> MatchingPolynomial:
    data = json.loads(text)
    return MatchingPolynomial(tuple(int(c) for c in data["phi"]), int(data["n_vertices"]))
