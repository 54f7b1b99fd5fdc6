"""Subset-indexed transfer matrices for layered families.

For a base graph on N vertices the transfer matrix is 2^N x 2^N, indexed
by vertex subsets.  Entry (S, T) weighs one layer whose dimers into the
previous layer sit on S and into the next layer on T: the intra-layer
factor is the matching polynomial of the base minus S and T evaluated at
e^{2t}, times e^{(|S|+|T|)t}, composed with the subset lift of the
connection matrix (permanents of its square submatrices).  Trace powers of
the result generate the layer graphs' matching polynomials, so the Perron
root gives the family's pressure.

The matrix is stored as exponent layers B_i with B(t) = sum_i e^{it} B_i,
which makes t-sweeps, d/dt, and the large-t rescaled form all evaluate
from one structure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .errors import NumericFailureError, ResourceLimitError
from .graphs import Graph, LayeredFamily, Matrix, identity_connection

DEFAULT_WIDTH_GUARD = 16
# Above this dimension B(t) is applied from its exponent layers instead of
# being materialized per t.
MATERIALIZE_LIMIT = 4096

DEFAULT_EIGEN_TOL = 1e-13
_MAX_POWER_ITER = 400_000


@dataclass(frozen=True)
class SubsetIndex:
    """Bijection between matrix indices and subsets of the base vertex set.

    Index k encodes the subset with bitmask k; the empty set is index 0.
    """

    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be nonnegative")

    @property
    def dim(self) -> int:
        return 1 << self.width

    @staticmethod
    def size(mask: int) -> int:
        return mask.bit_count()

    def submasks_of(self, mask: int):
        """All subsets of ``mask``, the empty set last."""
        sub = mask
        while True:
            yield sub
            if sub == 0:
                return
            sub = (sub - 1) & mask


class IntraLayerTable:
    """Matching polynomials of all induced subgraphs of the base.

    The (S, T) entry of the intra-layer factor depends only on the kept
    vertex set U \\ (S u T), so one polynomial per kept-mask suffices.
    """

    def __init__(self, base: Graph, polys: dict[int, tuple[int, ...]]):
        self.base = base
        self.width = base.vertex_count
        self.full_mask = (1 << self.width) - 1
        self._polys = polys

    def kept_polynomial(self, kept_mask: int) -> tuple[int, ...]:
        return self._polys[kept_mask]

    def entry(self, s_mask: int, t_mask: int) -> tuple[int, ...]:
        """Coefficients of c_{ST}; the zero polynomial when S and T meet."""
        if s_mask & t_mask:
            return ()
        return self._polys[self.full_mask & ~(s_mask | t_mask)]

    @property
    def full_polynomial(self) -> tuple[int, ...]:
        return self._polys[self.full_mask]


def build_intra_table(base: Graph, width_guard: int = DEFAULT_WIDTH_GUARD) -> IntraLayerTable:
    """Matching polynomials of every induced subgraph, shared-memo recursion."""
    n = base.vertex_count
    if n > width_guard:
        raise ResourceLimitError(f"base width {n} exceeds guard {width_guard}")
    adj = base.adjacency
    polys = {0: (1,)}

    def poly(mask):
        cached = polys.get(mask)
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
        polys[mask] = result
        return result

    for mask in range(1 << n):
        poly(mask)
    return IntraLayerTable(base, polys)


class ConnectionLift:
    """Subset lift of a 0-1 connection matrix.

    Entry (S, T) counts the perfect matchings of the bipartite graph the
    connection induces between row subset S and column subset T, i.e. the
    permanent of the S x T submatrix; it vanishes unless |S| == |T|, and
    the empty-against-empty entry is 1.
    """

    def __init__(self, width: int, entries: dict[tuple[int, int], int]):
        self.width = width
        self.dim = 1 << width
        self.entries = entries
        rows = [[] for _ in range(self.dim)]
        for (s_mask, t_mask), value in entries.items():
            rows[s_mask].append((t_mask, value))
        self.rows = tuple(tuple(sorted(r)) for r in rows)

    @property
    def is_permutation(self) -> bool:
        """Exactly one unit entry per subset row and column."""
        if any(v != 1 for v in self.entries.values()):
            return False
        row_seen = [0] * self.dim
        col_seen = [0] * self.dim
        for s_mask, t_mask in self.entries:
            row_seen[s_mask] += 1
            col_seen[t_mask] += 1
        return all(c == 1 for c in row_seen) and all(c == 1 for c in col_seen)


def lift_connection(connection: Matrix, width_guard: int = DEFAULT_WIDTH_GUARD) -> ConnectionLift:
    """All square-submatrix permanents of a 0-1 matrix, indexed by subsets.

    Built one cardinality at a time: the pair (S, T) is reached only by
    adding S's smallest row, so every expansion term is counted once.  Only
    pairs with a nonzero permanent are stored.
    """
    n = len(connection)
    if any(len(row) != n for row in connection):
        raise ValueError("connection matrix must be square")
    if any(a not in (0, 1) for row in connection for a in row):
        raise ValueError("connection matrix entries must be 0 or 1")
    if n > width_guard:
        raise ResourceLimitError(f"connection width {n} exceeds guard {width_guard}")

    entries = {(0, 0): 1}
    frontier = {(0, 0): 1}
    for _ in range(n):
        grown = {}
        for (s_mask, t_mask), value in frontier.items():
            low = (s_mask & -s_mask).bit_length() - 1 if s_mask else n
            for s in range(low):
                row = connection[s]
                s_new = s_mask | (1 << s)
                for t in range(n):
                    if row[t] and not t_mask >> t & 1:
                        key = (s_new, t_mask | (1 << t))
                        grown[key] = grown.get(key, 0) + value
        if not grown:
            break
        entries.update(grown)
        frontier = grown
    return ConnectionLift(n, entries)


class TransferMatrix:
    """Exponent-layer form of the transfer matrix of one layered family."""

    def __init__(self, family: LayeredFamily, table: IntraLayerTable,
                 lift: ConnectionLift, layers: tuple[dict[tuple[int, int], int], ...]):
        self.family = family
        self.width = family.width
        self.dim = 1 << self.width
        self.table = table
        self.lift = lift
        self.layers = layers
        self._layer_csr = tuple(self._to_csr(layer) for layer in layers)
        support = None
        for mat in self._layer_csr:
            if mat is None:
                continue
            support = mat if support is None else support + mat
        if support is None:
            raise ValueError("transfer matrix has no nonzero entries")
        support = support.tocsr()
        support.data[:] = 1.0
        self.support = support
        self._scc = None

    def _to_csr(self, layer):
        if not layer:
            return None
        keys = sorted(layer)
        rows = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
        cols = np.fromiter((k[1] for k in keys), dtype=np.int64, count=len(keys))
        vals = np.fromiter((float(layer[k]) for k in keys), dtype=np.float64, count=len(keys))
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))

    @property
    def scc(self):
        """(count, labels) of strongly connected components of the support."""
        if self._scc is None:
            self._scc = connected_components(self.support, directed=True, connection="strong")
        return self._scc

    def _weighted_sum(self, weights):
        acc = None
        for w, mat in zip(weights, self._layer_csr):
            if mat is None or w == 0.0:
                continue
            term = mat * w
            acc = term if acc is None else acc + term
        if acc is None:
            acc = sparse.csr_matrix((self.dim, self.dim))
        return acc.tocsr()


def build_transfer(family: LayeredFamily,
                   width_guard: int = DEFAULT_WIDTH_GUARD) -> TransferMatrix:
    """Assemble the exponent layers B_i for one family.

    An intra-layer entry with m dimers and boundary sets S, T contributes
    to exponent i = 2m + |S| + |T|; composing with the connection lift on
    the right keeps the layers exact integer matrices.
    """
    base = family.base
    n = base.vertex_count
    if n > width_guard:
        raise ResourceLimitError(f"family width {n} exceeds guard {width_guard}")
    table = build_intra_table(base, width_guard)
    lift = lift_connection(family.connection, width_guard)

    layers = [dict() for _ in range(n + 1)]
    full = (1 << n) - 1
    for s_mask in range(1 << n):
        comp = full & ~s_mask
        s_bits = s_mask.bit_count()
        t_mask = comp
        while True:
            poly = table.kept_polynomial(full & ~(s_mask | t_mask))
            boundary = s_bits + t_mask.bit_count()
            row = lift.rows[t_mask]
            if row:
                for m, coeff in enumerate(poly):
                    if not coeff:
                        continue
                    layer = layers[2 * m + boundary]
                    for t2_mask, a in row:
                        key = (s_mask, t2_mask)
                        layer[key] = layer.get(key, 0) + coeff * a
            if t_mask == 0:
                break
            t_mask = (t_mask - 1) & comp
    return TransferMatrix(family, table, lift, tuple(layers))


# ---------------------------------------------------------------------------
# Numeric evaluation
# ---------------------------------------------------------------------------

def evaluate_numeric(tm: TransferMatrix, t: float):
    """B(t) as a sparse CSR matrix; overflows (range error) near |t| ~ 300."""
    weights = [math.exp(i * t) for i in range(tm.width + 1)]
    return tm._weighted_sum(weights)


def derivative_matrix(tm: TransferMatrix, t: float):
    """Entrywise d/dt of B(t)."""
    weights = [i * math.exp(i * t) for i in range(tm.width + 1)]
    return tm._weighted_sum(weights)


def evaluate_shifted(tm: TransferMatrix, t: float):
    """The rescaled matrix e^{-Nt} B(t), stable for large positive t."""
    n = tm.width
    weights = [math.exp((i - n) * t) for i in range(n + 1)]
    return tm._weighted_sum(weights)


def derivative_shifted(tm: TransferMatrix, t: float):
    """Entrywise d/dt of the rescaled matrix (entries are nonpositive)."""
    n = tm.width
    weights = [(i - n) * math.exp((i - n) * t) for i in range(n + 1)]
    return tm._weighted_sum(weights)


def derivative_bilinear(tm: TransferMatrix, t: float, left, right,
                        shifted: bool = False) -> float:
    """left . dB/dt . right straight from the exponent layers.

    Avoids materializing the derivative matrix; summation order over the
    layers is fixed, so results are deterministic.
    """
    n = tm.width
    total = 0.0
    for i, mat in enumerate(tm._layer_csr):
        if mat is None:
            continue
        w = (i - n) * math.exp((i - n) * t) if shifted else i * math.exp(i * t)
        if w:
            total += w * float(left @ (mat @ right))
    return total


class TransferOperator:
    """Matrix-free application of B(t) for dimensions past the materialize cap.

    Applies y = sum_i w_i (B_i x) straight from the exponent layers.
    """

    def __init__(self, tm: TransferMatrix, weights):
        self.tm = tm
        self.weights = tuple(float(w) for w in weights)
        self.shape = (tm.dim, tm.dim)

    def matvec(self, x):
        out = np.zeros(self.shape[0])
        for w, mat in zip(self.weights, self.tm._layer_csr):
            if mat is not None and w != 0.0:
                out += w * (mat @ x)
        return out

    def rmatvec(self, x):
        out = np.zeros(self.shape[0])
        for w, mat in zip(self.weights, self.tm._layer_csr):
            if mat is not None and w != 0.0:
                out += w * (mat.T @ x)
        return out

    @property
    def support(self):
        return self.tm.support

    def extract(self, indices):
        """Materialized principal submatrix (component blocks stay small)."""
        acc = None
        for w, mat in zip(self.weights, self.tm._layer_csr):
            if mat is None or w == 0.0:
                continue
            block = mat[indices][:, indices] * w
            acc = block if acc is None else acc + block
        if acc is None:
            acc = sparse.csr_matrix((len(indices), len(indices)))
        return acc.tocsr()


def transfer_operator(tm: TransferMatrix, t: float, shifted: bool = False) -> TransferOperator:
    n = tm.width
    if shifted:
        weights = [math.exp((i - n) * t) for i in range(n + 1)]
    else:
        weights = [math.exp(i * t) for i in range(n + 1)]
    return TransferOperator(tm, weights)


# ---------------------------------------------------------------------------
# Perron root
# ---------------------------------------------------------------------------

class _Ops:
    """Uniform access to CSR matrices and TransferOperators."""

    def __init__(self, mat):
        if isinstance(mat, TransferOperator):
            self.n = mat.shape[0]
            self.matvec = mat.matvec
            self.rmatvec = mat.rmatvec
            self.support = mat.support
            self._extract = mat.extract
            ones = np.ones(self.n)
            self.row_sums = mat.matvec(ones)
            self.col_sums = mat.rmatvec(ones)
            self.diagonal = None  # computed lazily from extract
            self._op = mat
        else:
            if isinstance(mat, np.ndarray):
                mat = sparse.csr_matrix(mat)
            mat = mat.tocsr()
            if (mat.data < 0).any():
                raise ValueError("matrix must be nonnegative")
            self.n = mat.shape[0]
            self.matvec = lambda x: mat @ x
            csc = mat.T.tocsr()
            self.rmatvec = lambda x: csc @ x
            support = mat.copy()
            support.data[:] = 1.0
            self.support = support
            self._extract = lambda idx: mat[idx][:, idx]
            self.row_sums = np.asarray(mat.sum(axis=1)).ravel()
            self.col_sums = np.asarray(mat.sum(axis=0)).ravel()
            self.diagonal = mat.diagonal()
            self._op = mat

    def nnz(self):
        return self.support.nnz

    def extract(self, idx):
        return self._extract(np.asarray(idx, dtype=np.int64))

    def diag_entry(self, i):
        if self.diagonal is not None:
            return float(self.diagonal[i])
        return float(self.extract([i]).toarray()[0, 0])


def _power_vector(ops, sigma, tol, max_iter, transpose=False):
    """Power iteration on (A + sigma I); returns (rho, vector, residual).

    The diagonal shift translates the spectrum so nearly period-2 support
    patterns (the large-t regime) still give a clean dominant eigenvalue;
    eigenvectors are unchanged.  Deterministic all-ones start.
    """
    apply_ = ops.rmatvec if transpose else ops.matvec
    n = ops.n
    x = np.full(n, 1.0 / n)
    theta = 0.0
    it = 0
    stagnation = 0
    best_resid = math.inf
    while it < max_iter:
        converged = False
        for _ in range(48):
            it += 1
            y = apply_(x)
            if sigma:
                y = y + sigma * x
            theta = float(y.sum())
            if theta <= 0.0:
                return 0.0, x, 0.0
            y /= theta
            step = float(np.max(np.abs(y - x))) / float(np.max(y))
            x = y
            if step <= tol:
                converged = True
                break
        z = apply_(x)
        # least-squares eigenvalue for the converged direction
        rho = float(x @ z) / float(x @ x)
        scale = max(abs(rho), 1e-300) * float(np.max(x))
        resid = float(np.max(np.abs(z - rho * x))) / scale
        if resid <= 10.0 * tol:
            return rho, x, resid
        if converged:
            stagnation = stagnation + 1 if resid >= best_resid else 0
            best_resid = min(best_resid, resid)
            if stagnation >= 5:
                raise NumericFailureError(
                    f"power iteration stagnated at residual {resid:.3e}", residual=resid)
    raise NumericFailureError(
        f"power iteration did not converge in {max_iter} iterations", residual=best_resid)


def spectral_radius(mat, tol: float = DEFAULT_EIGEN_TOL,
                    max_iter: int = _MAX_POWER_ITER):
    """Perron root with left/right eigenvectors, normalized left . right = 1.

    Accepts a nonnegative CSR/ndarray or a TransferOperator.  Irreducibility
    of the support is checked first; a reducible matrix falls back to
    per-strongly-connected-component roots, taking the maximum, while the
    eigenvectors still come from full-space iteration.
    """
    ops = _Ops(mat)
    if ops.nnz() == 0:
        raise ValueError("matrix has no nonzero entries")
    sigma = 0.5 * min(float(np.max(ops.row_sums)), float(np.max(ops.col_sums)))
    if ops.n == 1:
        rho = float(ops.row_sums[0])
        one = np.ones(1)
        return rho, one.copy(), one.copy()

    ncomp, labels = connected_components(ops.support, directed=True, connection="strong")
    rho_comp = None
    if ncomp > 1:
        rho_comp = 0.0
        for comp in range(ncomp):
            idx = np.flatnonzero(labels == comp)
            if len(idx) == 1:
                rho_comp = max(rho_comp, ops.diag_entry(int(idx[0])))
            else:
                block = _Ops(ops.extract(idx))
                sig = 0.5 * min(float(np.max(block.row_sums)), float(np.max(block.col_sums)))
                rho_b, _vec, _res = _power_vector(block, sig, tol, max_iter)
                rho_comp = max(rho_comp, rho_b)

    rho_r, right, resid_r = _power_vector(ops, sigma, tol, max_iter)
    rho_l, left, resid_l = _power_vector(ops, sigma, tol, max_iter, transpose=True)
    rho = rho_comp if rho_comp is not None else 0.5 * (rho_r + rho_l)
    if abs(rho_r - rho) > 1e-9 * max(rho, 1.0) or abs(rho_l - rho) > 1e-9 * max(rho, 1.0):
        raise NumericFailureError(
            f"left/right/component Perron estimates disagree: {rho_l}, {rho_r}, {rho}",
            residual=max(resid_r, resid_l))

    scale = float(left @ right)
    if scale <= 0.0:
        raise NumericFailureError("left and right eigenvectors are orthogonal")
    left = left / scale
    return rho, left, right


# ---------------------------------------------------------------------------
# Exact-rational evaluation
# ---------------------------------------------------------------------------

def exact_matrix(tm: TransferMatrix, x) -> list[dict[int, Fraction]]:
    """B at rational x = e^t, as sparse rows of exact Fractions."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x = e^t must be positive")
    x2 = x * x
    full = (1 << tm.width) - 1
    powers = [x ** k for k in range(tm.width + 1)]
    rows = [dict() for _ in range(tm.dim)]
    for s_mask in range(tm.dim):
        comp = full & ~s_mask
        s_bits = s_mask.bit_count()
        row_out = rows[s_mask]
        t_mask = comp
        while True:
            lift_row = tm.lift.rows[t_mask]
            if lift_row:
                poly = tm.table.kept_polynomial(full & ~(s_mask | t_mask))
                acc = Fraction(0)
                for coeff in reversed(poly):
                    acc = acc * x2 + coeff
                value = acc * powers[s_bits + t_mask.bit_count()]
                for t2_mask, a in lift_row:
                    row_out[t2_mask] = row_out.get(t2_mask, Fraction(0)) + value * a
            if t_mask == 0:
                break
            t_mask = (t_mask - 1) & comp
    return rows


def exact_trace_power(tm: TransferMatrix, x, n: int) -> Fraction:
    """tr B(x)^n in exact rational arithmetic; equals psi(x^2, G_n)."""
    if n < 2:
        raise ValueError("need at least 2 layers")
    rows = exact_matrix(tm, x)
    power = rows
    for _ in range(n - 2):
        power = _sparse_mul(power, rows)
    trace = Fraction(0)
    for i, row in enumerate(power):
        for j, v in row.items():
            w = rows[j].get(i)
            if w is not None:
                trace += v * w
    return trace


def _sparse_mul(a, b):
    out = [dict() for _ in range(len(a))]
    for i, row in enumerate(a):
        target = out[i]
        for k, v in row.items():
            for j, w in b[k].items():
                target[j] = target.get(j, Fraction(0)) + v * w
    return out


# ---------------------------------------------------------------------------
# Identity-wiring pressure dominance
# ---------------------------------------------------------------------------

def max_pressure_check(base: Graph, connection: Matrix, t_list,
                       slack: float = 1e-10,
                       width_guard: int = DEFAULT_WIDTH_GUARD) -> dict:
    """Check log rho(M(t) Alift) <= log rho(M(t)) + slack for permutation wirings.

    Identity wiring maximizes the pressure among permutation connections;
    violations are reported as findings, never raised.
    """
    family = LayeredFamily(base, tuple(tuple(row) for row in connection), name="check")
    if not family.is_permutation:
        raise ValueError("connection must be a permutation matrix")
    ident = LayeredFamily(base, identity_connection(base.vertex_count), name="identity")
    tm = build_transfer(family, width_guard)
    tm_id = build_transfer(ident, width_guard)
    rows = []
    findings = []
    for t in t_list:
        rho_a, _, _ = spectral_radius(evaluate_numeric(tm, t))
        rho_i, _, _ = spectral_radius(evaluate_numeric(tm_id, t))
        gap = math.log(rho_i) - math.log(rho_a)
        rows.append({"t": t, "log_rho": math.log(rho_a), "log_rho_identity": math.log(rho_i),
                     "gap": gap})
        if gap < -slack:
            findings.append({"kind": "pressure-dominance-violation",
                             "location": f"t={t}", "margin": gap})
    return {"rows": rows, "findings": findings, "ok": not findings}


# ---------------------------------------------------------------------------
# Debug dump
# ---------------------------------------------------------------------------

def dump_coefficients(tm: TransferMatrix) -> str:
    """Exact exponent-layer entries, one 'S T i coeff' line each."""
    lines = [f"dim {tm.dim}"]
    for i, layer in enumerate(tm.layers):
        for (s_mask, t_mask) in sorted(layer):
            lines.append(f"{s_mask} {t_mask} {i} {layer[(s_mask, t_mask)]}")
    return "\n".join(lines) + "\n"
