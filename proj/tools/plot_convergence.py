#!/usr/bin/env python3
"""Convergence study for the manufactured cases, driven through the CLI.

Runs `stheat validate` over a refinement ladder, reads the gradient-error
value from the JSON report, prints the observed contraction rates, and
(when matplotlib is importable) saves a log-log plot.

    tools/plot_convergence.py --case u1 --nu 1 --levels 4 --plot conv.png
"""

import argparse
import json
import math
import pathlib
import subprocess
import sys
import tempfile

GRAD_CHECK = "grad error <= C1_tilde |f|"


def run_validate(binary, case, nu, h_cells, k_cells):
    with tempfile.NamedTemporaryFile(suffix=".json", delete=False) as f:
        out_path = f.name
    cmd = [
        binary, "validate",
        "--case", case,
        "--nu", str(nu),
        "--h-cells", str(h_cells),
        "--k-cells", str(k_cells),
        "--format", "json",
        "--out", out_path,
    ]
    res = subprocess.run(cmd, capture_output=True, text=True)
    if res.returncode not in (0, 3):
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{res.stderr}")
    doc = json.loads(pathlib.Path(out_path).read_text())
    pathlib.Path(out_path).unlink()
    for check in doc["checks"]:
        if check["check"] == GRAD_CHECK:
            return check["value"], check["bound"]
    raise RuntimeError("gradient error check not found in the report")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bin", default=None, help="path to the stheat binary")
    ap.add_argument("--case", default="u1", choices=["u1", "u2", "u3"])
    ap.add_argument("--nu", type=float, default=1.0)
    ap.add_argument("--h0", type=int, default=5, help="coarsest space cell count")
    ap.add_argument("--k0", type=int, default=40, help="coarsest time cell count")
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--plot", default=None, help="write a log-log PNG here")
    args = ap.parse_args()

    root = pathlib.Path(__file__).resolve().parent.parent
    binary = args.bin or str(root / "build" / "stheat")

    rows = []
    for lvl in range(args.levels):
        h_cells = args.h0 * (2 ** lvl)
        k_cells = args.k0 * (2 ** lvl)
        err, bound = run_validate(binary, args.case, args.nu, h_cells, k_cells)
        rows.append((1.0 / h_cells, err, bound))
        print(f"h=1/{h_cells} k=1/{k_cells}: grad error {err:.6e} (bound {bound:.6e})")

    print("\nobserved contraction per refinement:")
    for (h1, e1, _), (h2, e2, _) in zip(rows, rows[1:]):
        rate = math.log(e1 / e2) / math.log(h1 / h2)
        print(f"  h=1/{round(1/h1)} -> 1/{round(1/h2)}: factor {e1/e2:.3f} (order {rate:.2f})")

    if args.plot:
        try:
            import matplotlib
            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib unavailable; skipping the plot", file=sys.stderr)
            return
        hs = [r[0] for r in rows]
        errs = [r[1] for r in rows]
        bounds = [r[2] for r in rows]
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog(hs, errs, "o-", label="gradient error")
        ax.loglog(hs, bounds, "s--", label="certified bound")
        ref = [errs[0] * (h / hs[0]) for h in hs]
        ax.loglog(hs, ref, ":", color="gray", label="first order")
        ax.set_xlabel("h")
        ax.set_ylabel("L2(J; H10) error")
        ax.set_title(f"case {args.case}, nu={args.nu}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"plot written to {args.plot}")


if __name__ == "__main__":
    main()
