"""Independent brute-force oracles for the test suite.

Everything here deliberately avoids the library's own algorithms: matching
counts come from raw edge-subset enumeration, permanents from permutation
sums, Perron roots from exact characteristic polynomials, and class counts
from a sorted-capacity dynamic program.
"""

import itertools
import math
from collections import Counter
from fractions import Fraction


def brute_matching_counts(graph) -> list[int]:
    """Matching counts by enumerating all subsets of edge slots.

    Multi-edges are expanded into distinct parallel slots, so multiplicity
    weighting is automatic.  Feasible up to ~20 slots.
    """
    slots = []
    for u, v, mult in graph.edges:
        slots.extend([(u, v)] * mult)
    if len(slots) > 20:
        raise ValueError("too many edge slots for brute force")
    masks = [(1 << u) | (1 << v) for u, v in slots]
    counts = Counter()
    for subset in range(1 << len(slots)):
        used = 0
        size = 0
        ok = True
        remaining = subset
        while remaining:
            bit = remaining & -remaining
            idx = bit.bit_length() - 1
            if used & masks[idx]:
                ok = False
                break
            used |= masks[idx]
            size += 1
            remaining ^= bit
        if ok:
            counts[size] += 1
    top = max(counts)
    return [counts.get(l, 0) for l in range(top + 1)]


def brute_two_coloring_exists(graph) -> bool:
    """Odd-cycle detection by exhaustive DFS coloring, no queue tricks."""
    color = {}

    def dfs(v, c):
        color[v] = c
        for u, _ in graph.adjacency[v]:
            if u in color:
                if color[u] == c:
                    return False
            elif not dfs(u, 1 - c):
                return False
        return True

    for v in range(graph.vertex_count):
        if v not in color and not dfs(v, 0):
            return False
    return True


def permanent_by_permutations(matrix) -> int:
    """Permanent straight from the definition; fine up to 7x7."""
    n = len(matrix)
    total = 0
    for perm in itertools.permutations(range(n)):
        product = 1
        for i, j in enumerate(perm):
            product *= matrix[i][j]
            if product == 0:
                break
        total += product
    return total


def count_regular_biadjacency(n: int, r: int) -> int:
    """Number of n-by-n nonnegative integer matrices with row/col sums r.

    Row-by-row DP over the multiset of remaining column sums (sorting the
    state exploits column-permutation symmetry, so this is not the same
    recursion as the library's enumerator).
    """
    def rows_against(caps):
        def rec(j, left, row):
            if j == len(caps) - 1:
                if left <= caps[j]:
                    yield tuple(row + [left])
                return
            for a in range(min(left, caps[j]) + 1):
                row.append(a)
                yield from rec(j + 1, left - a, row)
                row.pop()
        yield from rec(0, r, [])

    states = {tuple([r] * n): 1}
    for _ in range(n):
        nxt = Counter()
        for caps, ways in states.items():
            for row in rows_against(caps):
                nxt[tuple(sorted(c - a for c, a in zip(caps, row)))] += ways
        states = dict(nxt)
    return states.get(tuple([0] * n), 0)


def exact_charpoly(matrix) -> list[Fraction]:
    """Monic characteristic polynomial by the Faddeev-LeVerrier recursion.

    Returns [1, c1, ..., cn] for x^n + c1 x^(n-1) + ... + cn, exact.
    """
    n = len(matrix)
    a = [[Fraction(v) for v in row] for row in matrix]

    def matmul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]

    m = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        am = matmul(a, m)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
        for i in range(n):
            am[i][i] += c
        m = am
    return coeffs


def largest_real_root(coeffs, upper) -> Fraction:
    """Largest real root of a monic polynomial by scan plus bisection.

    ``upper`` must exceed every root (for a nonnegative matrix, max row sum
    plus one works).  Exact rational arithmetic throughout.
    """
    def value(x):
        acc = Fraction(0)
        for c in coeffs:
            acc = acc * x + c
        return acc

    hi = Fraction(upper)
    if value(hi) <= 0:
        raise ValueError("upper bound does not dominate the roots")
    steps = 4096
    step = hi / steps
    lo = None
    x = hi
    for _ in range(steps):
        x -= step
        if value(x) <= 0:
            lo = x
            hi = x + step
            break
    if lo is None:
        raise ValueError("no sign change found; root scan failed")
    for _ in range(90):
        mid = (lo + hi) / 2
        if value(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def stirling_binomial_log(n: int, l: int) -> float:
    """log C(n, l) exactly via big integers (reference for Stirling limits)."""
    return math.log(math.comb(n, l))
