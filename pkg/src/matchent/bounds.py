"""Closed-form lower and upper bound curves for matching entropies.

All functions use natural logarithms, the convention 0 log 0 = 0, and are
defined on densities p in [0, 1].  The lower-bound family is built around
the anchor densities r/(r+s), s = 0, 1, ..., where the asymptotic count of
l-matchings in r-regular bipartite graphs is known exactly; between anchors
the bounds interpolate, either linearly (ghl) or linearly after adding the
binary-entropy shift (low1), or by the best of two analytic branches
(low2).  Upper bounds come from Bregman-type counting (upp1, upp2) and
from the disjoint complete-bipartite reference curve (hk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .matching import krr_matching_count

# Anchors accumulate at p = 0; below r/(r+S_MAX) the interpolants join the
# origin linearly (in shifted coordinates where applicable).
S_MAX = 64

BOUND_NAMES = ("h1", "gh", "ghl", "low1", "low2", "fh", "upp1", "upp2", "hk")


def _xlogx(x: float) -> float:
    return x * math.log(x) if x > 0.0 else 0.0


def _check_density(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"density {p} outside [0, 1]")


def _entropy_shift(p: float) -> float:
    """(p log p + (1-p) log(1-p)) / 2, the Stirling binomial correction."""
    return 0.5 * (_xlogx(p) + _xlogx(1.0 - p))


def h1(p: float) -> float:
    """One-dimensional monomer-dimer entropy, in closed form."""
    _check_density(p)
    out = (1.0 - p / 2.0) * math.log(1.0 - p / 2.0) - _xlogx(1.0 - p)
    if p > 0.0:
        out -= (p / 2.0) * math.log(p / 2.0)
    return out


def gh(r: int, p: float) -> float:
    """Asymptotic l-matching exponent of random r-regular bipartite graphs.

    Coincides with h1 at r = 2 and anchors every lower bound below.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    _check_density(p)
    return 0.5 * (p * math.log(r) - _xlogx(p) - 2.0 * _xlogx(1.0 - p)
                  + (r - p) * math.log1p(-p / r))


def _anchor(r: int, s: int) -> float:
    return r / (r + s)


def _interval_index(r: int, p: float) -> int:
    """s with p in [r/(r+s+1), r/(r+s)]; may exceed S_MAX near zero."""
    s = int(math.floor(r * (1.0 - p) / p))
    # guard against float boundary misclassification
    while s > 0 and p > _anchor(r, s):
        s -= 1
    while p < _anchor(r, s + 1):
        s += 1
    return s


def ghl(r: int, p: float) -> float:
    """Piecewise-linear interpolation of gh between the anchor densities."""
    if r < 2:
        raise ValueError("r must be at least 2")
    _check_density(p)
    if p == 0.0:
        return 0.0
    cut = _anchor(r, S_MAX)
    if p < cut:
        return p / cut * gh(r, cut)
    s = min(_interval_index(r, p), S_MAX - 1)
    lo, hi = _anchor(r, s + 1), _anchor(r, s)
    w = (p - lo) / (hi - lo)
    return (1.0 - w) * gh(r, lo) + w * gh(r, hi)


def low1(r: int, p: float) -> float:
    """Anchor interpolation made concave-exact by the entropy shift.

    The shifted function gh + shift is concave, so interpolating it between
    anchors and removing the shift again dominates ghl while staying a
    valid lower bound.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    _check_density(p)
    if p == 0.0:
        return 0.0
    cut = _anchor(r, S_MAX)
    if p < cut:
        return p / cut * (gh(r, cut) + _entropy_shift(cut)) - _entropy_shift(p)
    s = min(_interval_index(r, p), S_MAX - 1)
    lo, hi = _anchor(r, s + 1), _anchor(r, s)
    w = (p - lo) / (hi - lo)
    shifted = ((1.0 - w) * (gh(r, lo) + _entropy_shift(lo))
               + w * (gh(r, hi) + _entropy_shift(hi)))
    return shifted - _entropy_shift(p)


def fg_bound(r: int, p: float, j: int) -> float:
    """Analytic lower bound branch with free integer parameter j >= 1.

    Exact (equal to gh) at the anchor p = r/(r+j); elsewhere a valid lower
    bound for every j, best when j matches p's anchor interval.
    """
    if r < 2 or j < 1:
        raise ValueError("need r >= 2 and j >= 1")
    if not 0.0 < p <= 1.0:
        raise ValueError("fg_bound is defined for p in (0, 1]")
    tail = ((r + j - 1) * math.log1p(-1.0 / (r + j))
            - (j - 1 + p) * math.log1p(-(1.0 - p) / j))
    return 0.5 * (p * math.log(r) - _xlogx(p) - 2.0 * _xlogx(1.0 - p) + tail)


def _schrijver_branch(r: int, p: float) -> float:
    """Perfect-matching (Schrijver) bound spread to density p by AM-GM."""
    return 0.5 * p * (math.log(r) + (r - 1) * math.log1p(-1.0 / r)) - _entropy_shift(p)


def low2(r: int, p: float) -> float:
    """Best analytic branch per anchor interval.

    On (r/(r+1), 1] the Schrijver branch competes with the j = 1 branch; on
    (r/(r+s+1), r/(r+s)) the branches j = s and j = s+1 compete.  At an
    anchor both adjacent intervals' branches are evaluated and the maximum
    taken, which reproduces the anchor value gh exactly.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    _check_density(p)
    if p == 0.0:
        return 0.0
    cut = _anchor(r, S_MAX)
    if p < cut:
        # join the origin linearly in shifted coordinates, as for low1
        return p / cut * (gh(r, cut) + _entropy_shift(cut)) - _entropy_shift(p)
    s = min(_interval_index(r, p), S_MAX - 1)
    candidate_js = set()
    intervals = {s}
    if s >= 1 and abs(p - _anchor(r, s)) <= 1e-12:
        intervals.add(s - 1)
    if abs(p - _anchor(r, s + 1)) <= 1e-12:
        intervals.add(s + 1)
    best = -math.inf
    for si in intervals:
        if si == 0:
            best = max(best, _schrijver_branch(r, p), fg_bound(r, p, 1))
        else:
            candidate_js.update((si, si + 1))
    for j in candidate_js:
        best = max(best, fg_bound(r, p, j))
    return best


def schrijver_gl(r: int, l: int, n: int) -> tuple[Fraction, float]:
    """Conjectured minimal l-matching count g_r(l, 2n), exact and in logs.

    C(n,l)^2 ((nr-l)/(nr))^(rn-l) (lr/n)^l; the l = n case is Schrijver's
    perfect-matching lower bound.
    """
    if not 0 <= l <= n:
        raise ValueError("need 0 <= l <= n")
    if r < 1 or n < 1:
        raise ValueError("need r >= 1 and n >= 1")
    value = (Fraction(math.comb(n, l)) ** 2
             * Fraction(n * r - l, n * r) ** (r * n - l)
             * Fraction(l * r, n) ** l)
    return value, _log_fraction(value)


def tverberg_fl(r: int, l: int, n: int) -> Fraction:
    """Permanent-based lower bound f_r(l, 2n) = C(n,l)^2 l! (r/n)^l, exact."""
    if not 0 <= l <= n:
        raise ValueError("need 0 <= l <= n")
    return (Fraction(math.comb(n, l)) ** 2 * math.factorial(l)
            * Fraction(r, n) ** l)


def fh(d: int, p: float) -> float:
    """Asymptotic form of the permanent-based bound for the 2d-regular case."""
    if d < 1:
        raise ValueError("d must be at least 1")
    _check_density(p)
    return 0.5 * (-_xlogx(p) - 2.0 * _xlogx(1.0 - p) + p * math.log(2 * d) - p)


def _log_fraction(value: Fraction) -> float:
    if value == 0:
        return -math.inf
    return math.log(value.numerator) - math.log(value.denominator)


def upp1(r: int, p: float) -> float:
    """Bregman-type upper bound: p log(r!)/(2r) - (p log p)/2 - (1-p)log(1-p)."""
    if r < 2:
        raise ValueError("r must be at least 2")
    _check_density(p)
    return (p * math.log(math.factorial(r)) / (2 * r)
            - 0.5 * _xlogx(p) - _xlogx(1.0 - p))


def upp2(r: int, p: float) -> float:
    """Degree-count upper bound: (p log r)/2 - (p log p + (1-p)log(1-p))/2."""
    if r < 2:
        raise ValueError("r must be at least 2")
    _check_density(p)
    return 0.5 * p * math.log(r) - _entropy_shift(p)


# ---------------------------------------------------------------------------
# Disjoint complete-bipartite reference curve
# ---------------------------------------------------------------------------

def hk(r: int, t: float) -> tuple[float, float]:
    """Parametric (p, h) of the disjoint-K_{r,r} family at parameter t.

    Pressure is log(sum_l C(r,l)^2 l! e^{2lt}) / (2r); density and entropy
    follow by differentiating the finite sum.  Terms are rescaled by the
    dominant exponent so any t is safe.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    weights = [krr_matching_count(r, l) for l in range(r + 1)]
    log_terms = [math.log(w) + 2 * l * t for l, w in enumerate(weights)]
    top = max(log_terms)
    scaled = [math.exp(v - top) for v in log_terms]
    z = sum(scaled)
    p = sum(2 * l * s for l, s in enumerate(scaled)) / (2 * r * z)
    pressure_value = (top + math.log(z)) / (2 * r)
    return p, pressure_value - t * p


def hk_exact_density(r: int, y) -> Fraction:
    """Exact density of the disjoint-K_{r,r} family at rational y = e^{2t}."""
    if r < 2:
        raise ValueError("r must be at least 2")
    y = Fraction(y)
    weights = [krr_matching_count(r, l) for l in range(r + 1)]
    num = sum(w * 2 * l * y ** l for l, w in enumerate(weights))
    den = 2 * r * sum(w * y ** l for l, w in enumerate(weights))
    return Fraction(num, den)


def hk_dimer_limit(r: int) -> float:
    """h at full density for the disjoint-K_{r,r} family: log(r!) / (2r)."""
    return math.log(math.factorial(r)) / (2 * r)


def hk_on_densities(r: int, p_query) -> np.ndarray:
    """hk evaluated at requested densities by inverting its parametric form.

    The closed-form density is strictly increasing in t and cheap, so the
    parameter is recovered by bisection to float precision; no chord error
    enters the reference margins.  Densities beyond the resolvable range
    fall back to the exact endpoint values 0 and log(r!)/(2r).
    """
    lo_t, hi_t = -60.0, 60.0
    p_lo = hk(r, lo_t)[0]
    p_hi = hk(r, hi_t)[0]
    out = []
    for p in np.atleast_1d(np.asarray(p_query, dtype=float)):
        if p <= p_lo:
            out.append(0.0 if p <= 0.0 else hk(r, lo_t)[1])
            continue
        if p >= p_hi:
            out.append(hk_dimer_limit(r) if p >= 1.0 else hk(r, hi_t)[1])
            continue
        a, b = lo_t, hi_t
        for _ in range(80):
            mid = 0.5 * (a + b)
            if hk(r, mid)[0] < p:
                a = mid
            else:
                b = mid
        out.append(hk(r, 0.5 * (a + b))[1])
    return np.array(out)


# ---------------------------------------------------------------------------
# Named curves and sandwich checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCurve:
    """A named bound evaluated on a density grid."""

    name: str
    parameter: int | None
    samples: tuple[tuple[float, float], ...]

    @property
    def p(self):
        return np.array([q[0] for q in self.samples])

    @property
    def values(self):
        return np.array([q[1] for q in self.samples])


def bound_curve(name: str, r: int | None, p_grid) -> BoundCurve:
    """Evaluate one named bound on a density grid.

    The parameter is r for the regular-graph bounds, d for fh, and unused
    for h1.
    """
    p_grid = np.asarray(p_grid, dtype=float)
    if name not in BOUND_NAMES:
        raise ValueError(f"unknown bound {name!r}; expected one of {BOUND_NAMES}")
    if name == "h1":
        values = [h1(p) for p in p_grid]
    elif name == "hk":
        values = hk_on_densities(r, p_grid)
    else:
        fn = {"gh": gh, "ghl": ghl, "low1": low1, "low2": low2,
              "fh": fh, "upp1": upp1, "upp2": upp2}[name]
        values = [fn(r, p) for p in p_grid]
    samples = tuple((float(p), float(v)) for p, v in zip(p_grid, values))
    return BoundCurve(name, r if name != "h1" else None, samples)


def sandwich_report(curve, r: int, tol: float = 1e-9, include_hk: bool = True) -> dict:
    """Margins of an entropy curve against its lower and upper bounds.

    Lower margin is h - max(low1, low2), upper margin min(upp1, upp2) - h;
    optionally also the reference-curve margin hk - h (a conjectured bound,
    so its violations are reported as findings, never raised).
    """
    p = curve.p
    h = curve.h
    lower = np.array([max(low1(r, float(x)), low2(r, float(x))) for x in p])
    upper = np.array([min(upp1(r, float(x)), upp2(r, float(x))) for x in p])
    lower_margin = h - lower
    upper_margin = upper - h
    findings = []
    for i in range(len(p)):
        if lower_margin[i] < -tol:
            findings.append({"kind": "lower-bound-violation",
                             "location": f"p={p[i]:.6g}", "margin": float(lower_margin[i])})
        if upper_margin[i] < -tol:
            findings.append({"kind": "upper-bound-violation",
                             "location": f"p={p[i]:.6g}", "margin": float(upper_margin[i])})
    report = {"family": curve.name, "r": r,
              "p": p, "h": h, "lower": lower, "upper": upper,
              "lower_margin": lower_margin, "upper_margin": upper_margin,
              "findings": findings}
    if include_hk:
        hk_margin = hk_on_densities(r, p) - h
        report["hk_margin"] = hk_margin
        for i in range(len(p)):
            if hk_margin[i] < -tol:
                findings.append({"kind": "reference-curve-violation",
                                 "location": f"p={p[i]:.6g}", "margin": float(hk_margin[i])})
    report["ok"] = not findings
    return report
