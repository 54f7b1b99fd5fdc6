"""Pressure, dimer density, and entropy curves for layered families.

The pressure is P(t) = log rho(B(t)) / N with N the base width.  Its
derivative p(t) = P'(t) is the dimer density, computed from the Perron
eigenvectors through the variational identity rho'(t) = l . B'(t) r with
l . r = 1.  The entropy at density p(t) is the Legendre value
h = P(t) - t p(t); curves are kept parametric in t because inverting p(t)
is ill-conditioned in the tails.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import transfer
from .errors import NumericFailureError
from .graphs import LayeredFamily, make_complete_bipartite, zero_connection

DEFAULT_EIGEN_TOL = transfer.DEFAULT_EIGEN_TOL
DERIVATIVE_TOL = 1e-6
CURVE_TOL = 1e-6
# Beyond this t the rescaled (hat) evaluation is used for stability.
SHIFT_THRESHOLD = 4.0

_CSV_HEADER = "t,rho,P,p,h"

# every structural property a sweep is checked against
INVARIANT_KINDS = (
    "density-out-of-range",
    "negative-entropy",
    "density-not-monotone",
    "pressure-not-monotone",
    "pressure-not-convex",
    "entropy-not-concave",
    "legendre-support-violated",
)


@dataclass(frozen=True)
class CurveSample:
    t: float
    rho: float
    P: float
    p: float
    h: float


@dataclass(frozen=True)
class EntropyCurve:
    """Sampled (t, p(t), h(p(t))) triples from one family sweep."""

    name: str
    samples: tuple[CurveSample, ...]
    meta: dict = field(default_factory=dict)

    @property
    def t(self):
        return np.array([s.t for s in self.samples])

    @property
    def p(self):
        return np.array([s.p for s in self.samples])

    @property
    def h(self):
        return np.array([s.h for s in self.samples])

    @property
    def pressure(self):
        return np.array([s.P for s in self.samples])

    def interpolate(self, p_query, extra_points=()):
        """Monotone piecewise-linear h at the requested densities.

        ``extra_points`` may add known exact anchors such as (0, 0); queries
        outside the sampled range clamp to the nearest known value.
        """
        pts = sorted({(s.p, s.h) for s in self.samples} | set(extra_points))
        ps = np.array([q[0] for q in pts])
        hs = np.array([q[1] for q in pts])
        return np.interp(np.asarray(p_query, dtype=float), ps, hs)

    def endpoint_estimates(self) -> dict:
        """h(0)/h(1) estimates from the outermost samples; extrapolated values."""
        first, last = self.samples[0], self.samples[-1]
        return {"p_low": first.p, "h_low": first.h,
                "p_high": last.p, "h_high": last.h,
                "extrapolated": True}

    def invariant_findings(self, slack: float = 1e-9) -> list[dict]:
        """Violations of the structural curve invariants, empty when clean.

        Checks density in [0, 1] and nondecreasing in t, entropy nonnegative,
        pressure nondecreasing and convex, entropy concave in density, and
        the support-line inequality P(t) >= p*t + h for all sample pairs.
        Slope-based convexity/concavity checks skip near-degenerate spacing.
        """
        out = []
        t = self.t
        p = self.p
        h = self.h
        P = self.pressure

        def bad(kind, location, margin):
            out.append({"kind": kind, "location": location, "margin": float(margin)})

        for i, s in enumerate(self.samples):
            if not -slack <= s.p <= 1.0 + slack:
                bad("density-out-of-range", f"t={s.t}", min(s.p, 1.0 - s.p))
            if s.h < -slack:
                bad("negative-entropy", f"t={s.t}", s.h)
        for i in range(len(t) - 1):
            if p[i + 1] < p[i] - 1e-12:
                bad("density-not-monotone", f"t={t[i + 1]}", p[i + 1] - p[i])
            if P[i + 1] < P[i] - 1e-12:
                bad("pressure-not-monotone", f"t={t[i + 1]}", P[i + 1] - P[i])
        for i in range(len(t) - 2):
            dt1, dt2 = t[i + 1] - t[i], t[i + 2] - t[i + 1]
            if min(dt1, dt2) > 1e-9:
                bend = (P[i + 2] - P[i + 1]) / dt2 - (P[i + 1] - P[i]) / dt1
                if bend < -1e-9:
                    bad("pressure-not-convex", f"t={t[i + 1]}", bend)
            dp1, dp2 = p[i + 1] - p[i], p[i + 2] - p[i + 1]
            if min(dp1, dp2) > 1e-6:
                bend = (h[i + 2] - h[i + 1]) / dp2 - (h[i + 1] - h[i]) / dp1
                if bend > 1e-8:
                    bad("entropy-not-concave", f"t={t[i + 1]}", bend)
        # Legendre support lines: every sampled (p, h) pair bounds every P(t).
        support = np.min(P[:, None] - t[:, None] * p[None, :] - h[None, :])
        if support < -slack:
            bad("legendre-support-violated", "grid", support)
        return out

    def to_csv(self) -> str:
        lines = [_CSV_HEADER]
        for s in self.samples:
            lines.append(",".join(f"{v:.17g}" for v in (s.t, s.rho, s.P, s.p, s.h)))
        return "\n".join(lines) + "\n"


def default_t_grid(n: int = 101, span: float = 8.0, sharpness: float = 2.0):
    """tanh-spaced grid on [-span, span], denser toward both tails.

    Density saturates exponentially in |t|, so extra resolution near the
    ends pins down the approach to p = 0 and p = 1.
    """
    u = np.linspace(-1.0, 1.0, n)
    return span * np.tanh(sharpness * u) / math.tanh(sharpness)


@lru_cache(maxsize=128)
def _cached_transfer(family: LayeredFamily, width_guard: int):
    return transfer.build_transfer(family, width_guard)


def _resolve(family_or_tm, width_guard=transfer.DEFAULT_WIDTH_GUARD):
    if isinstance(family_or_tm, transfer.TransferMatrix):
        return family_or_tm
    return _cached_transfer(family_or_tm, width_guard)


def _matrix_at(tm, t, shifted):
    if tm.dim > transfer.MATERIALIZE_LIMIT:
        return transfer.transfer_operator(tm, t, shifted=shifted)
    return transfer.evaluate_shifted(tm, t) if shifted else transfer.evaluate_numeric(tm, t)


def _sample(tm, t, tol):
    """One (rho, P, p, h) evaluation; rescaled form beyond the t threshold."""
    shifted = t > SHIFT_THRESHOLD
    mat = _matrix_at(tm, t, shifted)
    rho_eval, left, right = transfer.spectral_radius(mat, tol)
    n = tm.width
    slope = transfer.derivative_bilinear(tm, t, left, right, shifted=shifted)
    if shifted:
        pressure_value = t + math.log(rho_eval) / n
        density_value = 1.0 + slope / (n * rho_eval)
    else:
        pressure_value = math.log(rho_eval) / n
        density_value = slope / (n * rho_eval)
    density_value = _clamp_density(density_value, t)
    entropy_value = pressure_value - t * density_value
    if entropy_value < 0.0:
        if entropy_value < -1e-9:
            raise NumericFailureError(f"entropy {entropy_value} below zero at t={t}",
                                      residual=entropy_value)
        entropy_value = 0.0
    rho_actual = math.exp(n * pressure_value)
    return CurveSample(float(t), rho_actual, pressure_value, density_value, entropy_value)


def _clamp_density(value, t):
    if 0.0 <= value <= 1.0:
        return value
    if -1e-9 <= value <= 1.0 + 1e-9:
        warnings.warn(f"density {value} clamped into [0, 1] at t={t}")
        return min(max(value, 0.0), 1.0)
    raise NumericFailureError(f"density {value} far outside [0, 1] at t={t}",
                              residual=value)


def pressure(family_or_tm, t: float, tol: float = DEFAULT_EIGEN_TOL) -> float:
    """log rho(B(t)) / N, via the rescaled form for large positive t."""
    tm = _resolve(family_or_tm)
    if t > SHIFT_THRESHOLD:
        return pressure_shifted(tm, t, tol)
    rho, _, _ = transfer.spectral_radius(_matrix_at(tm, t, shifted=False), tol)
    return math.log(rho) / tm.width


def pressure_shifted(family_or_tm, t: float, tol: float = DEFAULT_EIGEN_TOL) -> float:
    """t + log rho(e^{-Nt} B(t)) / N; stable arbitrarily far right."""
    tm = _resolve(family_or_tm)
    rho, _, _ = transfer.spectral_radius(_matrix_at(tm, t, shifted=True), tol)
    return t + math.log(rho) / tm.width


def density(family_or_tm, t: float, tol: float = DEFAULT_EIGEN_TOL) -> float:
    """Dimer density p(t) = P'(t) from the eigenvector variational formula."""
    tm = _resolve(family_or_tm)
    return _sample(tm, t, tol).p


def entropy_point(family_or_tm, t: float, tol: float = DEFAULT_EIGEN_TOL) -> tuple[float, float]:
    """The Legendre pair (p(t), h(p(t))) with h = P(t) - t p(t)."""
    sample = _sample(_resolve(family_or_tm), t, tol)
    return sample.p, sample.h


def sweep(family_or_tm, t_grid=None, name: str | None = None,
          tol: float = DEFAULT_EIGEN_TOL) -> EntropyCurve:
    """Sample the entropy curve over a strictly increasing t grid."""
    tm = _resolve(family_or_tm)
    if t_grid is None:
        t_grid = default_t_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2:
        raise ValueError("t grid must be a 1-d array with at least 2 points")
    if not np.all(np.diff(t_grid) > 0):
        raise ValueError("t grid must be strictly increasing")
    samples = []
    for t in t_grid:
        try:
            samples.append(_sample(tm, float(t), tol))
        except NumericFailureError as exc:
            exc.partial = tuple(samples)
            raise
    if name is None:
        name = tm.family.name or "family"
    meta = {"width": tm.width, "tolerance": tol,
            "dim": tm.dim, "regularity": _family_regularity(tm.family)}
    curve = EntropyCurve(name, tuple(samples), meta)
    meta["endpoints"] = curve.endpoint_estimates()
    return curve


def _family_regularity(family: LayeredFamily):
    degrees = set(family.base.degrees) if family.base.vertex_count else {0}
    if len(degrees) != 1:
        return None
    base_degree = degrees.pop()
    if family.is_disjoint:
        return base_degree
    rows, cols = set(family.row_sums), set(family.col_sums)
    if rows == cols and len(rows) == 1:
        return base_degree + 2 * rows.pop()
    return None


# ---------------------------------------------------------------------------
# Closed-form reference curve: disjoint unions of K_{r,r}
# ---------------------------------------------------------------------------

def krr_curve(r: int, t_grid=None) -> EntropyCurve:
    """Closed-form entropy curve of the disjoint-K_{r,r} family.

    Evaluated from the finite matching polynomial of K_{r,r}, not through
    transfer matrices, so it cross-checks the spectral path.
    """
    from .bounds import hk

    if t_grid is None:
        t_grid = default_t_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    if not np.all(np.diff(t_grid) > 0):
        raise ValueError("t grid must be strictly increasing")
    samples = []
    for t in t_grid:
        p, h = hk(r, float(t))
        pressure_value = h + t * p
        samples.append(CurveSample(float(t), math.exp(2 * r * pressure_value),
                                   pressure_value, p, h))
    curve = EntropyCurve(f"disjoint-K{r}{r}", tuple(samples),
                         {"width": 2 * r, "regularity": r, "closed_form": True})
    curve.meta["endpoints"] = curve.endpoint_estimates()
    return curve


def disjoint_krr_family(r: int) -> LayeredFamily:
    """The transfer-matrix counterpart of krr_curve: K_{r,r} base, zero wiring."""
    base = make_complete_bipartite(r)
    return LayeredFamily(base, zero_connection(2 * r), name=f"disjoint-K{r}{r}")
