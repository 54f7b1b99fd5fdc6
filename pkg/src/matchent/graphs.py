"""Finite multigraphs and layered graph families.

Vertices are dense integers 0..n-1.  Multi-edges are stored as integer
multiplicities; self-loops are rejected.  A layered family couples a base
graph F = (U, D) with a 0-1 connection matrix A: layer k of the n-layer
graph carries a copy of the base, and (u, k) is joined to (v, k+1 mod n)
whenever A[u][v] == 1.  Vertex (u, k) maps to k * #U + u, so builds are
bit-for-bit reproducible.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .errors import ResourceLimitError

Matrix = tuple[tuple[int, ...], ...]

# Exhaustive enumeration of r-regular bipartite multigraph classes is kept
# to desk scale; beyond this the class sizes explode combinatorially.
CLASS_GUARD_N = 5
CLASS_GUARD_R = 3

CONNECTION_MODES = ("permutation-bipartite", "even-odd-cubic", "two-per-row")


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph on vertices 0..vertex_count-1.

    ``edges`` holds one (u, v, multiplicity) triple per distinct pair with
    u < v.  ``bipartition`` is an optional 0/1 class label per vertex; when
    present every edge must cross the two classes.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    bipartition: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        seen = set()
        for u, v, mult in self.edges:
            if not (0 <= u < v < self.vertex_count):
                raise ValueError(f"bad edge ({u}, {v}): endpoints must satisfy 0 <= u < v < n")
            if mult < 1:
                raise ValueError(f"edge ({u}, {v}) has multiplicity {mult}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge entry ({u}, {v})")
            seen.add((u, v))
        if self.bipartition is not None:
            if len(self.bipartition) != self.vertex_count:
                raise ValueError("bipartition length must equal vertex_count")
            if any(c not in (0, 1) for c in self.bipartition):
                raise ValueError("bipartition classes must be 0/1")
            for u, v, _ in self.edges:
                if self.bipartition[u] == self.bipartition[v]:
                    raise ValueError(f"edge ({u}, {v}) does not cross the bipartition")

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-vertex tuple of (neighbor, multiplicity) pairs."""
        adj = [[] for _ in range(self.vertex_count)]
        for u, v, mult in self.edges:
            adj[u].append((v, mult))
            adj[v].append((u, mult))
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for u, v, mult in self.edges:
            deg[u] += mult
            deg[v] += mult
        return tuple(deg)

    def is_r_regular(self, r: int) -> bool:
        return all(d == r for d in self.degrees)

    @property
    def edge_total(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(mult for _, _, mult in self.edges)


def _make_graph(n, pairs, bipartition=None) -> Graph:
    """Build a Graph from an iterable of (u, v) or (u, v, mult) items."""
    counts = Counter()
    for item in pairs:
        if len(item) == 2:
            u, v = item
            mult = 1
        else:
            u, v, mult = item
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        counts[(u, v)] += mult
    edges = tuple((u, v, m) for (u, v), m in sorted(counts.items()))
    bip = tuple(bipartition) if bipartition is not None else None
    return Graph(n, edges, bip)


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def make_edgeless(n: int) -> Graph:
    """Graph on n vertices with no edges."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Graph(n, ())


def make_cycle(length: int) -> Graph:
    """Cycle C_l; bipartitioned by parity when the length is even."""
    if length < 3:
        raise ValueError("cycle length must be at least 3")
    pairs = [(i, (i + 1) % length) for i in range(length)]
    bipartition = tuple(i % 2 for i in range(length)) if length % 2 == 0 else None
    return _make_graph(length, pairs, bipartition)


def make_torus(dims: Sequence[int]) -> Graph:
    """Discrete torus on prod(dims) vertices: ring edges in every coordinate.

    Each dimension must exceed 2, otherwise the wrap edge would collapse
    onto a box edge.  The result is 2*len(dims)-regular and bipartite iff
    all dimensions are even (parity 2-coloring of coordinate sums).
    """
    dims = tuple(int(m) for m in dims)
    if not dims:
        raise ValueError("dims must be nonempty")
    if any(m <= 2 for m in dims):
        raise ValueError("every torus dimension must exceed 2")
    strides = [1] * len(dims)
    for k in range(len(dims) - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]
    volume = strides[0] * dims[0]

    def coords(v):
        return [(v // strides[k]) % dims[k] for k in range(len(dims))]

    pairs = []
    for v in range(volume):
        cs = coords(v)
        for k in range(len(dims)):
            w = v + strides[k] * ((cs[k] + 1) % dims[k] - cs[k])
            pairs.append((v, w))
    bipartition = None
    if all(m % 2 == 0 for m in dims):
        bipartition = tuple(sum(coords(v)) % 2 for v in range(volume))
    return _make_graph(volume, pairs, bipartition)


def make_complete_bipartite(r: int) -> Graph:
    """Complete bipartite graph K_{r,r} with classes [0, r) and [r, 2r)."""
    if r < 1:
        raise ValueError("r must be at least 1")
    pairs = [(i, r + j) for i in range(r) for j in range(r)]
    return _make_graph(2 * r, pairs, [0] * r + [1] * r)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    """Disjoint union with h's vertices relabeled after g's."""
    off = g.vertex_count
    pairs = list(g.edges) + [(u + off, v + off, m) for u, v, m in h.edges]
    bip = None
    if g.bipartition is not None and h.bipartition is not None:
        bip = g.bipartition + h.bipartition
    return _make_graph(g.vertex_count + h.vertex_count, pairs, bip)


def proper_two_coloring(g: Graph) -> tuple[int, ...] | None:
    """BFS 2-coloring; None when the graph contains an odd cycle."""
    color = [-1] * g.vertex_count
    for start in range(g.vertex_count):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v, _ in g.adjacency[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return tuple(color)


# ---------------------------------------------------------------------------
# Layered families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LayeredFamily:
    """Base graph plus 0-1 connection matrix defining the n-layer sequence.

    The all-zero connection is allowed and means "disjoint copies of the
    base"; every other connection must be a 0-1 matrix of base size.
    """

    base: Graph
    connection: Matrix
    name: str = ""

    def __post_init__(self):
        n = self.base.vertex_count
        if len(self.connection) != n or any(len(row) != n for row in self.connection):
            raise ValueError("connection matrix must be square of base size")
        for row in self.connection:
            if any(a not in (0, 1) for a in row):
                raise ValueError("connection matrix entries must be 0 or 1")

    @cached_property
    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.connection)

    @cached_property
    def col_sums(self) -> tuple[int, ...]:
        n = self.base.vertex_count
        return tuple(sum(self.connection[u][v] for u in range(n)) for v in range(n))

    @property
    def is_permutation(self) -> bool:
        return all(s == 1 for s in self.row_sums) and all(s == 1 for s in self.col_sums)

    @property
    def is_disjoint(self) -> bool:
        """All-zero connection: the family is n disjoint copies of the base."""
        return all(s == 0 for s in self.row_sums)

    @property
    def width(self) -> int:
        return self.base.vertex_count


@dataclass(frozen=True)
class BipartiteLayerTag:
    """Which bipartite wiring a connection matrix realizes.

    "within-class" keeps every inter-layer edge inside one base class;
    "cross-class" sends every inter-layer edge to the opposite class.  Both
    wirings yield bipartite layer graphs for an even layer count.
    """

    mode: str

    def __post_init__(self):
        if self.mode not in ("within-class", "cross-class"):
            raise ValueError(f"unknown wiring mode {self.mode!r}")


def classify_wiring(base: Graph, connection: Matrix) -> BipartiteLayerTag | None:
    """Classify a connection against the base bipartition; None if mixed.

    The all-zero connection is vacuously "within-class".
    """
    if base.bipartition is None:
        raise ValueError("base graph carries no bipartition")
    classes = base.bipartition
    within = cross = True
    for u, row in enumerate(connection):
        for v, a in enumerate(row):
            if not a:
                continue
            if classes[u] == classes[v]:
                cross = False
            else:
                within = False
    if within:
        return BipartiteLayerTag("within-class")
    if cross:
        return BipartiteLayerTag("cross-class")
    return None


def identity_connection(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero_connection(n: int) -> Matrix:
    return tuple((0,) * n for _ in range(n))


def shift_connection(n: int, step: int = 1) -> Matrix:
    """Cyclic shift permutation: u connects to u+step (mod n) in the next layer."""
    return tuple(tuple(1 if j == (i + step) % n else 0 for j in range(n)) for i in range(n))


def even_odd_connection(length: int, pairing: Sequence[int] | None = None) -> Matrix:
    """Matching from even to odd cycle vertices, one edge per even vertex.

    ``pairing[i]`` selects the odd target of even vertex 2i as 2*pairing[i]+1;
    the default pairs 2i with 2i+1, the hexagonal-lattice wiring.
    """
    if length % 2:
        raise ValueError("even-odd connection needs an even length")
    half = length // 2
    if pairing is None:
        pairing = tuple(range(half))
    if sorted(pairing) != list(range(half)):
        raise ValueError("pairing must be a permutation of 0..length/2-1")
    rows = [[0] * length for _ in range(length)]
    for i in range(half):
        rows[2 * i][2 * pairing[i] + 1] = 1
    return tuple(tuple(r) for r in rows)


def build_layer_graph(family: LayeredFamily, n: int) -> Graph:
    """Concrete n-layer graph of the family (layer n+1 wraps to layer 1).

    Has n * #D + n * ones(A) edges counted with multiplicity; for n == 2 and
    symmetric connections the two wrap directions stack into multi-edges.
    """
    if n < 2:
        raise ValueError("need at least 2 layers")
    base = family.base
    width = base.vertex_count
    pairs = []
    for k in range(n):
        off = k * width
        for u, v, mult in base.edges:
            pairs.append((off + u, off + v, mult))
        nxt = ((k + 1) % n) * width
        for u, row in enumerate(family.connection):
            for v, a in enumerate(row):
                if a:
                    pairs.append((off + u, nxt + v, 1))
    bipartition = _layer_bipartition(family, n)
    return _make_graph(width * n, pairs, bipartition)


def _layer_bipartition(family: LayeredFamily, n: int) -> tuple[int, ...] | None:
    """2-coloring of the layer graph when the wiring rules guarantee one."""
    base = family.base
    if base.bipartition is None:
        return None
    try:
        tag = classify_wiring(base, family.connection)
    except ValueError:
        return None
    if tag is None:
        return None
    width = base.vertex_count
    if tag.mode == "cross-class":
        # Every edge, intra- and inter-layer, crosses the base classes.
        return tuple(base.bipartition[v % width] for v in range(width * n))
    if n % 2:
        return None
    # Within-class wiring: alternate the base classes layer by layer.
    return tuple((base.bipartition[v % width] + v // width) % 2 for v in range(width * n))


# ---------------------------------------------------------------------------
# Connection-matrix enumeration
# ---------------------------------------------------------------------------

def enumerate_connections(base: Graph, mode: str, dedup: bool = True) -> list[Matrix]:
    """All connection matrices of the given mode, one per rotation class.

    Modes:
      permutation-bipartite: permutation matrices whose wiring keeps the
        layer graphs bipartite (class-preserving or class-swapping).
      even-odd-cubic: perfect matchings from one base class into the other,
        one edge per class-0 vertex (layer graphs are (p+1)-regular).
      two-per-row: 0-1 matrices with two ones in every row and column; on a
        bipartitioned base only the bipartite wirings are kept.

    When the base is a standard cycle and ``dedup`` is left on, matrices
    equivalent under rotation of the cycle labels are deduplicated
    (rotation conjugation is an isomorphism of every layer graph; full
    isomorphism testing is not attempted).
    """
    if mode not in CONNECTION_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {CONNECTION_MODES}")
    n = base.vertex_count
    if mode in ("permutation-bipartite", "even-odd-cubic") and base.bipartition is None:
        raise ValueError(f"mode {mode!r} requires a bipartitioned base")

    if mode == "permutation-bipartite":
        candidates = _bipartite_permutations(base.bipartition)
    elif mode == "even-odd-cubic":
        candidates = _class_matchings(base.bipartition)
    else:
        candidates = [m for m in _two_per_row_matrices(n)
                      if base.bipartition is None or classify_wiring(base, m) is not None]

    if not dedup:
        return sorted(set(candidates))
    return _dedup_rotations(base, candidates)


def _bipartite_permutations(classes):
    n = len(classes)
    cls0 = [v for v in range(n) if classes[v] == 0]
    cls1 = [v for v in range(n) if classes[v] == 1]
    out = []
    import itertools

    def matrices(images_of, targets_of):
        # permutation built from two independent bijections
        for im0 in itertools.permutations(targets_of[0]):
            for im1 in itertools.permutations(targets_of[1]):
                rows = [[0] * n for _ in range(n)]
                for u, v in zip(images_of[0], im0):
                    rows[u][v] = 1
                for u, v in zip(images_of[1], im1):
                    rows[u][v] = 1
                yield tuple(tuple(r) for r in rows)

    # class-preserving and class-swapping wirings
    out.extend(matrices((cls0, cls1), (cls0, cls1)))
    out.extend(matrices((cls0, cls1), (cls1, cls0)))
    return out


def _class_matchings(classes):
    import itertools

    n = len(classes)
    cls0 = [v for v in range(n) if classes[v] == 0]
    cls1 = [v for v in range(n) if classes[v] == 1]
    if len(cls0) != len(cls1):
        raise ValueError("classes must have equal sizes")
    out = []
    for image in itertools.permutations(cls1):
        rows = [[0] * n for _ in range(n)]
        for u, v in zip(cls0, image):
            rows[u][v] = 1
        out.append(tuple(tuple(r) for r in rows))
    return out


def _two_per_row_matrices(n):
    import itertools

    out = []
    cols = list(range(n))

    def rec(i, remaining, rows):
        if i == n:
            out.append(tuple(rows))
            return
        for pair in itertools.combinations(cols, 2):
            a, b = pair
            if remaining[a] and remaining[b]:
                remaining[a] -= 1
                remaining[b] -= 1
                rows.append(tuple(1 if j in pair else 0 for j in range(n)))
                rec(i + 1, remaining, rows)
                rows.pop()
                remaining[a] += 1
                remaining[b] += 1

    rec(0, [2] * n, [])
    return out


def _is_standard_cycle(g: Graph) -> bool:
    if g.vertex_count < 3:
        return False
    want = {(i, (i + 1) % g.vertex_count) for i in range(g.vertex_count)}
    want = {(min(p), max(p)) for p in want}
    return {(u, v) for u, v, m in g.edges if m == 1} == want and len(g.edges) == g.vertex_count


def _dedup_rotations(base: Graph, candidates) -> list[Matrix]:
    n = base.vertex_count
    if _is_standard_cycle(base):
        shifts = range(n)
    else:
        shifts = (0,)

    def conjugate(mat, k):
        return tuple(tuple(mat[(u - k) % n][(v - k) % n] for v in range(n)) for u in range(n))

    # Orbit key may fall outside the mode (an odd rotation can flip the
    # even/odd roles); the representative stays an in-mode candidate.
    chosen = {}
    for mat in candidates:
        key = min(conjugate(mat, k) for k in shifts)
        cur = chosen.get(key)
        if cur is None or mat < cur:
            chosen[key] = mat
    return [chosen[k] for k in sorted(chosen)]


# ---------------------------------------------------------------------------
# Bethe-tree approximants
# ---------------------------------------------------------------------------

def make_bethe_sequence_element(r: int, n: int, glue: Graph) -> Graph:
    """Finite r-regular bipartite approximant of the infinite r-regular tree.

    Takes the radius-n ball around a root, keeps the children of the r-th
    branch one level deeper, and closes all remaining degree defects with
    the caller-supplied glue graph: an (r-1)-regular bipartite graph pairing
    the r-1 first branches' depth-n leaves with the r-th branch's depth-n+1
    leaves, (r-1)^n vertices on each side.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    leaves = (r - 1) ** n
    if glue.bipartition is None:
        raise ValueError("glue graph must carry a bipartition")
    if glue.vertex_count != 2 * leaves:
        raise ValueError(f"glue graph must have {2 * leaves} vertices")
    if not glue.is_r_regular(r - 1):
        raise ValueError(f"glue graph must be {r - 1}-regular")
    side0 = [v for v in range(glue.vertex_count) if glue.bipartition[v] == 0]
    side1 = [v for v in range(glue.vertex_count) if glue.bipartition[v] == 1]
    if len(side0) != leaves:
        raise ValueError("glue bipartition classes must have equal sizes")

    # Vertex layout: root, then the blocks A(i, j) for j = 1..n ordered by
    # (j, i), then the depth-(n+1) block of branch r.
    sizes = [(r - 1) ** (j - 1) for j in range(n + 2)]

    def block_start(i, j):
        before = sum(r * sizes[jj] for jj in range(1, j))
        return 1 + before + (i - 1) * sizes[j]

    tail_start = block_start(1, n + 1)
    total = tail_start + leaves

    pairs = []
    for i in range(1, r + 1):
        pairs.append((0, block_start(i, 1)))
    for j in range(1, n + 1):
        branches = range(1, r + 1) if j < n else (r,)
        for i in branches:
            start = block_start(i, j)
            child_start = block_start(i, j + 1) if j < n else tail_start
            for k in range(sizes[j]):
                for c in range(r - 1):
                    pairs.append((start + k, child_start + k * (r - 1) + c))

    # Glue: class-0 vertices onto the depth-n leaves of branches 1..r-1
    # (a contiguous index range), class-1 onto the depth-(n+1) block.
    fringe_start = block_start(1, n)
    to_new = {}
    for idx, v in enumerate(sorted(side0)):
        to_new[v] = fringe_start + idx
    for idx, v in enumerate(sorted(side1)):
        to_new[v] = tail_start + idx
    for u, v, mult in glue.edges:
        pairs.append((to_new[u], to_new[v], mult))

    depth = [0] * total
    for j in range(1, n + 1):
        for i in range(1, r + 1):
            start = block_start(i, j)
            for k in range(sizes[j]):
                depth[start + k] = j
    for k in range(leaves):
        depth[tail_start + k] = n + 1
    bipartition = tuple(d % 2 for d in depth)

    out = _make_graph(total, pairs, bipartition)
    if not out.is_r_regular(r):
        raise ValueError("glue graph does not close the tree's degree defects")
    return out


def random_bipartite_glue(r: int, n: int, seed: int = 0) -> Graph:
    """Seeded random (r-1)-regular bipartite multigraph of Bethe glue size.

    Superposes r-1 uniformly random permutations; coinciding permutation
    entries stack into multi-edges.
    """
    if r < 2 or n < 1:
        raise ValueError("need r >= 2 and n >= 1")
    half = (r - 1) ** n
    rng = random.Random(seed)
    counts = Counter()
    for _ in range(r - 1):
        perm = list(range(half))
        rng.shuffle(perm)
        for i, j in enumerate(perm):
            counts[(i, half + j)] += 1
    pairs = [(u, v, m) for (u, v), m in counts.items()]
    return _make_graph(2 * half, pairs, [0] * half + [1] * half)


# ---------------------------------------------------------------------------
# Regular bipartite multigraph classes
# ---------------------------------------------------------------------------

def regular_biadjacency_matrices(n: int, r: int) -> Iterator[Matrix]:
    """All n-by-n nonnegative integer matrices with row and column sums r."""
    if n > CLASS_GUARD_N or r > CLASS_GUARD_R:
        raise ResourceLimitError(
            f"class enumeration guarded to n <= {CLASS_GUARD_N}, r <= {CLASS_GUARD_R}")
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")

    def rows_summing(remaining):
        def rec(j, left, row):
            if j == n - 1:
                if left <= remaining[j]:
                    yield tuple(row + [left])
                return
            for a in range(min(left, remaining[j]) + 1):
                row.append(a)
                yield from rec(j + 1, left - a, row)
                row.pop()
        yield from rec(0, r, [])

    def rec_rows(i, remaining, rows):
        if i == n:
            yield tuple(rows)
            return
        for row in rows_summing(remaining):
            nxt = tuple(c - a for c, a in zip(remaining, row))
            rows.append(row)
            yield from rec_rows(i + 1, nxt, rows)
            rows.pop()

    yield from rec_rows(0, tuple(r for _ in range(n)), [])


def biadjacency_graph(matrix: Matrix) -> Graph:
    """Bipartite multigraph with the given biadjacency; right class offset by n."""
    n = len(matrix)
    pairs = [(i, n + j, matrix[i][j]) for i in range(n) for j in range(n) if matrix[i][j]]
    return _make_graph(2 * n, pairs, [0] * n + [1] * n)


def enumerate_regular_bipartite_class(n: int, r: int) -> Iterator[Graph]:
    """All r-regular bipartite multigraphs on n+n vertices, one per biadjacency."""
    for matrix in regular_biadjacency_matrices(n, r):
        yield biadjacency_graph(matrix)


# ---------------------------------------------------------------------------
# Interchange format
# ---------------------------------------------------------------------------

def graph_to_text(g: Graph) -> str:
    """Line-oriented dump: header, optional bipartition bitstring, edge lines."""
    lines = [f"vertices {g.vertex_count}"]
    if g.bipartition is not None:
        lines.append("bipartition " + "".join(str(c) for c in g.bipartition))
    for u, v, mult in g.edges:
        lines.append(f"edge {u} {v} {mult}")
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    n = None
    bipartition = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "vertices":
            n = int(fields[1])
        elif fields[0] == "bipartition":
            bipartition = tuple(int(c) for c in fields[1])
        elif fields[0] == "edge":
            u, v, mult = int(fields[1]), int(fields[2]), int(fields[3])
            pairs.append((u, v, mult))
        else:
            raise ValueError(f"line {lineno}: unknown record {fields[0]!r}")
    if n is None:
        raise ValueError("missing 'vertices' header")
    return _make_graph(n, pairs, bipartition)
