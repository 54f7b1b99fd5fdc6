"""Command-line surface: sweeps, bound tables, conjecture checks, oracles.

Subcommands: sweep, check, oracle, maxpres, bounds.  Configuration comes
from an optional JSON file plus flag overrides (flags win).  Exit codes
are a stable contract: 0 success, 1 finding or mismatch, 2 usage error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bounds as bnd
from . import graphs, matching, thermo, transfer
from .errors import NumericFailureError, ResourceLimitError

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


@dataclass
class RunConfig:
    """One experiment manifest; serializes losslessly to JSON."""

    family: dict = field(default_factory=lambda: {
        "base": {"kind": "cycle", "length": 4},
        "connection": {"kind": "identity"},
        "name": "cycle4-identity"})
    grid: dict = field(default_factory=lambda: {
        "kind": "tanh", "lo": -8.0, "hi": 8.0, "n": 101, "sharpness": 2.0})
    tolerances: dict = field(default_factory=lambda: {
        "eigen": 1e-13, "derivative": 1e-6, "curve": 1e-6, "sandwich": 1e-9})
    exact: list = field(default_factory=lambda: [[1, 1], [3, 2], [2, 3]])
    layer_counts: list = field(default_factory=lambda: [2, 3, 4])
    seed: int = 0
    width_guard: int = 16

    def __post_init__(self):
        if any(v <= 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")

    def to_dict(self) -> dict:
        return {"family": self.family, "grid": self.grid,
                "tolerances": self.tolerances, "exact": self.exact,
                "layer_counts": self.layer_counts, "seed": self.seed,
                "width_guard": self.width_guard}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        cfg = cls()
        for key, value in data.items():
            if not hasattr(cfg, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(cfg, key, value)
        cfg.__post_init__()
        return cfg

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def build_base(spec: dict) -> graphs.Graph:
    kind = spec.get("kind")
    if kind == "cycle":
        return graphs.make_cycle(int(spec["length"]))
    if kind == "torus":
        return graphs.make_torus([int(m) for m in spec["dims"]])
    if kind == "complete_bipartite":
        return graphs.make_complete_bipartite(int(spec["r"]))
    if kind == "single":
        return graphs.make_edgeless(1)
    raise ValueError(f"unknown base kind {kind!r}")


def build_connection(spec: dict, width: int) -> graphs.Matrix:
    kind = spec.get("kind")
    if kind == "identity":
        return graphs.identity_connection(width)
    if kind == "zero":
        return graphs.zero_connection(width)
    if kind == "shift":
        return graphs.shift_connection(width, int(spec.get("step", 1)))
    if kind == "even-odd":
        pairing = spec.get("pairing")
        return graphs.even_odd_connection(width, pairing)
    if kind == "matrix":
        rows = spec.get("matrix")
        if rows is None:
            raise ValueError("matrix connection needs a 'matrix' field")
        matrix = tuple(tuple(int(a) for a in row) for row in rows)
        if len(matrix) != width or any(len(row) != width for row in matrix):
            raise ValueError("connection matrix must be square of base size")
        return matrix
    raise ValueError(f"unknown connection kind {kind!r}")


def build_family(cfg: RunConfig) -> graphs.LayeredFamily:
    base = build_base(cfg.family.get("base", {}))
    connection = build_connection(cfg.family.get("connection", {}), base.vertex_count)
    name = cfg.family.get("name", "") or "family"
    return graphs.LayeredFamily(base, connection, name=name)


def build_grid(cfg: RunConfig) -> np.ndarray:
    grid = cfg.grid
    n = int(grid.get("n", 101))
    lo = float(grid.get("lo", -8.0))
    hi = float(grid.get("hi", 8.0))
    if n < 2 or hi <= lo:
        raise ValueError("grid needs n >= 2 and hi > lo")
    if grid.get("kind", "tanh") == "linear":
        return np.linspace(lo, hi, n)
    sharp = float(grid.get("sharpness", 2.0))
    u = np.tanh(sharp * np.linspace(-1.0, 1.0, n)) / math.tanh(sharp)
    return lo + (hi - lo) * (u + 1.0) / 2.0


def _write(path: str, text: str):
    with open(path, "w") as fh:
        fh.write(text)


def write_report(out_dir: str, command: str, cfg: RunConfig,
                 findings: list, passed: bool, extra: dict | None = None) -> str:
    report = {"command": command, "config_digest": cfg.digest(),
              "findings": findings, "pass": bool(passed)}
    if extra:
        report.update(extra)
    path = os.path.join(out_dir, f"{command}_report.json")
    _write(path, json.dumps(report, indent=2, sort_keys=True) + "\n")
    return path


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_sweep(cfg: RunConfig, out_dir: str) -> int:
    family = build_family(cfg)
    grid = build_grid(cfg)
    curve = thermo.sweep(family, grid, tol=cfg.tolerances["eigen"])
    findings = curve.invariant_findings()
    failed_kinds = {f["kind"] for f in findings}
    checks = {kind: kind not in failed_kinds for kind in thermo.INVARIANT_KINDS}
    _write(os.path.join(out_dir, f"{curve.name}_curve.csv"), curve.to_csv())
    write_report(out_dir, "sweep", cfg, findings, not findings,
                 {"family": curve.name, "samples": len(curve.samples),
                  "checks": checks})
    return EXIT_OK if not findings else EXIT_FINDINGS


def _family_check_regularity(family: graphs.LayeredFamily) -> int:
    """Regularity of the family, validated on the 4-layer graph.

    Raises ValueError (usage error) with the degree histogram when the
    family is not regular bipartite.
    """
    if family.is_disjoint:
        probe = family.base
    else:
        probe = graphs.build_layer_graph(family, 4)
    degrees = set(probe.degrees)
    if len(degrees) != 1 or graphs.proper_two_coloring(probe) is None:
        histogram = dict(sorted(Counter(probe.degrees).items()))
        raise ValueError(f"family is not regular bipartite; degree histogram {histogram}")
    return degrees.pop()


def cmd_check(cfg: RunConfig, out_dir: str, enumerate_mode: str | None = None) -> int:
    family = build_family(cfg)
    r = _family_check_regularity(family)
    grid = build_grid(cfg)
    tol = cfg.tolerances["sandwich"]

    families = [(family.name, family)]
    if enumerate_mode:
        matrices = graphs.enumerate_connections(family.base, enumerate_mode)
        families = [(f"{family.name}-A{i}", graphs.LayeredFamily(family.base, A, name=f"A{i}"))
                    for i, A in enumerate(matrices)]

    findings = []
    summary = []
    for label, fam in families:
        r_fam = _family_check_regularity(fam)
        curve = thermo.sweep(fam, grid, tol=cfg.tolerances["eigen"])
        report = bnd.sandwich_report(curve, r_fam, tol=tol)
        lines = ["p,lower_margin,upper_margin"]
        for pv, lo, hi in zip(report["p"], report["lower_margin"], report["upper_margin"]):
            lines.append(f"{pv:.17g},{lo:.17g},{hi:.17g}")
        _write(os.path.join(out_dir, f"{label}_margins.csv"), "\n".join(lines) + "\n")
        for item in report["findings"]:
            item = dict(item)
            item["location"] = f"{label}:{item['location']}"
            findings.append(item)
        summary.append({"family": label, "r": r_fam,
                        "min_lower_margin": float(np.min(report["lower_margin"])),
                        "min_upper_margin": float(np.min(report["upper_margin"]))})
    write_report(out_dir, "check", cfg, findings, not findings, {"curves": summary})
    return EXIT_OK if not findings else EXIT_FINDINGS


def cmd_oracle(cfg: RunConfig, out_dir: str) -> int:
    family = build_family(cfg)
    tm = transfer.build_transfer(family, cfg.width_guard)
    rows = []
    mismatches = []
    for n in cfg.layer_counts:
        layer_graph = graphs.build_layer_graph(family, int(n))
        poly = matching.matching_polynomial(layer_graph)
        for num, den in cfg.exact:
            x = Fraction(int(num), int(den))
            lhs = transfer.exact_trace_power(tm, x, int(n))
            rhs = poly.evaluate(x * x)
            ok = lhs == rhs
            rows.append({"n": int(n), "x": f"{x}", "trace": str(lhs),
                         "psi": str(rhs), "equal": ok})
            if not ok:
                mismatches.append({"kind": "oracle-mismatch",
                                   "location": f"n={n}, e^t={x}",
                                   "margin": float(lhs - rhs)})
                print(f"mismatch at n={n}, e^t={x}: trace={lhs} psi={rhs}",
                      file=sys.stderr)
    write_report(out_dir, "oracle", cfg, mismatches, not mismatches, {"rows": rows})
    return EXIT_OK if not mismatches else EXIT_FINDINGS


def cmd_maxpres(cfg: RunConfig, out_dir: str, t_values=(-1.0, 0.0, 1.0)) -> int:
    family = build_family(cfg)
    base = family.base
    if base.bipartition is None:
        raise ValueError("maxpres needs a bipartitioned base")
    matrices = graphs.enumerate_connections(base, "permutation-bipartite")
    findings = []
    rows = []
    ident = graphs.LayeredFamily(base, graphs.identity_connection(base.vertex_count),
                                 name="identity")
    grid = build_grid(cfg)
    ident_curve = thermo.sweep(ident, grid, tol=cfg.tolerances["eigen"])
    for i, A in enumerate(matrices):
        res = transfer.max_pressure_check(base, A, t_values,
                                          width_guard=cfg.width_guard)
        for item in res["findings"]:
            item = dict(item)
            item["location"] = f"A{i}:{item['location']}"
            findings.append(item)
        fam = graphs.LayeredFamily(base, A, name=f"A{i}")
        curve = thermo.sweep(fam, grid, tol=cfg.tolerances["eigen"])
        inside = (curve.p >= ident_curve.p[0]) & (curve.p <= ident_curve.p[-1])
        dominated = ident_curve.interpolate(curve.p[inside])
        gap = float(np.min(dominated - curve.h[inside])) if inside.any() else 0.0
        rows.append({"connection": i, "pressure_gaps": [r["gap"] for r in res["rows"]],
                     "min_entropy_gap": gap})
        if gap < -cfg.tolerances["sandwich"]:
            findings.append({"kind": "entropy-dominance-violation",
                             "location": f"A{i}", "margin": gap})
    write_report(out_dir, "maxpres", cfg, findings, not findings,
                 {"rows": rows, "connections": len(matrices)})
    return EXIT_OK if not findings else EXIT_FINDINGS


def cmd_bounds(names: list[str], r: int, p_grid, out_dir: str, cfg: RunConfig) -> int:
    p_grid = np.asarray(p_grid, dtype=float)
    columns = {}
    for name in names:
        if "-" in name and name not in bnd.BOUND_NAMES:
            first, second = name.split("-", 1)
            left = bnd.bound_curve(first.strip(), r, p_grid).values
            right = bnd.bound_curve(second.strip(), r, p_grid).values
            columns[name] = left - right
        else:
            columns[name] = bnd.bound_curve(name, r, p_grid).values
    header = "p," + ",".join(columns)
    lines = [header]
    for i, p in enumerate(p_grid):
        lines.append(",".join([f"{p:.17g}"] + [f"{columns[c][i]:.17g}" for c in columns]))
    csv_path = os.path.join(out_dir, "bounds.csv")
    _write(csv_path, "\n".join(lines) + "\n")

    plot = ["set datafile separator ','",
            "set key autotitle columnhead",
            "set xlabel 'p'",
            f"set title 'bound curves, r={r}'",
            "plot " + ", ".join(f"'bounds.csv' using 1:{i + 2} with lines"
                                for i in range(len(columns)))]
    _write(os.path.join(out_dir, "bounds.gp"), "\n".join(plot) + "\n")
    write_report(out_dir, "bounds", cfg, [], True,
                 {"names": list(columns), "r": r, "points": len(p_grid)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _parse_span(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected 'a:b:n', got {text!r}")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _load_config(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_dict(json.load(fh))
    else:
        cfg = RunConfig()
    if args.grid:
        lo, hi, n = _parse_span(args.grid)
        cfg.grid = {"kind": "linear", "lo": lo, "hi": hi, "n": n}
    if args.exact:
        num, _, den = args.exact.partition("/")
        cfg.exact = [[int(num), int(den or 1)]]
    if args.seed is not None:
        cfg.seed = args.seed
    if args.width_guard is not None:
        cfg.width_guard = args.width_guard
    if args.tol is not None:
        cfg.tolerances["eigen"] = args.tol
    return cfg


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--grid", help="linear t grid as 'a:b:n'")
    parser.add_argument("--exact", help="rational e^t as 'NUM/DEN'")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--width-guard", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None,
                        help="eigensolver relative tolerance")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="matchent",
        description="Monomer-dimer entropy curves and matching bound checks")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (("sweep", "sample one family's entropy curve"),
                      ("check", "compare a family's curve against the bounds"),
                      ("oracle", "exact trace-vs-polynomial equality check"),
                      ("maxpres", "identity-wiring pressure dominance check"),
                      ("bounds", "tabulate closed-form bound curves")):
        p = sub.add_parser(name, help=doc)
        _add_common(p)
        if name == "check":
            p.add_argument("--enumerate", dest="enumerate_mode",
                           choices=graphs.CONNECTION_MODES,
                           help="sweep every connection matrix of this mode")
        if name == "maxpres":
            p.add_argument("--t-values", default="-1,0,1",
                           help="comma-separated t list for the pressure check")
        if name == "bounds":
            p.add_argument("--names", default="gh,ghl,low1",
                           help="comma-separated curve names; 'a-b' for differences")
            p.add_argument("--r", type=int, default=4)
            p.add_argument("--pgrid", default="0:1:201", help="density grid 'a:b:n'")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    try:
        cfg = _load_config(args)
        out_dir = args.out
        os.makedirs(out_dir, exist_ok=True)
        if args.command == "sweep":
            return cmd_sweep(cfg, out_dir)
        if args.command == "check":
            return cmd_check(cfg, out_dir, args.enumerate_mode)
        if args.command == "oracle":
            return cmd_oracle(cfg, out_dir)
        if args.command == "maxpres":
            t_values = tuple(float(v) for v in args.t_values.split(","))
            return cmd_maxpres(cfg, out_dir, t_values)
        if args.command == "bounds":
            lo, hi, n = _parse_span(args.pgrid)
            names = [s.strip() for s in args.names.split(",") if s.strip()]
            return cmd_bounds(names, args.r, np.linspace(lo, hi, n), out_dir, cfg)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError, ResourceLimitError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericFailureError as exc:
        print(f"numeric failure: {exc} (residual={exc.residual})", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
