#!/usr/bin/env python3
"""The closed-form bound families for 4-regular bipartite graphs.

Three pictures tell the story:
  1. the anchored lower bounds ghl <= low1 <= gh, pinched together at the
     anchor densities 4/(4+s);
  2. their defects low1 - gh and low2 - gh, showing where the analytic
     branches of low2 beat the concavity interpolation of low1;
  3. the upper side: the disjoint-K44 reference curve hk under the two
     counting bounds upp1 and upp2, whose crossing moves left with r.
"""

import os

import numpy as np

from matchent.bounds import bound_curve, gh, hk_on_densities, low1, low2, upp1, upp2

OUT = os.path.join(os.path.dirname(__file__), "output")
R = 4


def write_csv(path, header, columns):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
    print(f"wrote {path}")


def main():
    os.makedirs(OUT, exist_ok=True)
    ps = np.linspace(0.0, 1.0, 601)

    lower_names = ("ghl", "low1", "gh")
    lower = {name: bound_curve(name, R, ps).values for name in lower_names}
    write_csv(os.path.join(OUT, "lower_bounds.csv"), "p,ghl,low1,gh",
              [ps] + [lower[n] for n in lower_names])

    defects = {
        "low1-gh": np.array([low1(R, p) - gh(R, p) for p in ps]),
        "low2-gh": np.array([low2(R, p) - gh(R, p) for p in ps]),
    }
    write_csv(os.path.join(OUT, "lower_defects.csv"), "p,low1-gh,low2-gh",
              [ps, defects["low1-gh"], defects["low2-gh"]])

    upper = {
        "hk": hk_on_densities(R, ps),
        "upp1": np.array([upp1(R, p) for p in ps]),
        "upp2": np.array([upp2(R, p) for p in ps]),
    }
    write_csv(os.path.join(OUT, "upper_bounds.csv"), "p,hk,upp1,upp2",
              [ps, upper["hk"], upper["upp1"], upper["upp2"]])

    for r in (3, 4, 8):
        diffs = [upp1(r, p) - upp2(r, p) for p in ps[1:-1]]
        sign_flip = next(p for p, d in zip(ps[1:-1], diffs) if d < 0)
        print(f"r={r}: upp1/upp2 crossing near p = {sign_flip:.3f}")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the plots")
        return

    fig, axes = plt.subplots(1, 3, figsize=(15, 4.2))
    for name in lower_names:
        axes[0].plot(ps, lower[name], label=name)
    axes[0].set_title(f"anchored lower bounds, r={R}")
    for name, vals in defects.items():
        axes[1].plot(ps, vals, label=name)
    axes[1].set_title("defects against gh")
    for name, vals in upper.items():
        axes[2].plot(ps, vals, label=name)
    axes[2].set_title("upper bounds and the reference curve")
    for ax in axes:
        ax.set_xlabel("p")
        ax.legend()
    fig.tight_layout()
    png = os.path.join(OUT, "bound_curves.png")
    fig.savefig(png, dpi=120)
    print(f"wrote {png}")


if __name__ == "__main__":
    main()
