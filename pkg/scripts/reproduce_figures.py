#!/usr/bin/env python3
"""Run the three headline comparison experiments (mhc-mhc, ppp-mhc, cmhc-mhc
plus the ppp-ppp control) and write plot-ready CSV curves and JSON reports.

Outputs land in --outdir (default ./results): one curve CSV and one report
per (case, delta), plus a summary table on stdout.
"""

import argparse
import json
from pathlib import Path

from matern_contact import (
    ContactCase,
    ExperimentConfig,
    ProcessParams,
    Window,
    run_experiment,
)

CASES = {
    ContactCase.PPP_TO_PPP: (1.0,),
    ContactCase.MHC_TO_MHC: (0.5, 1.0),
    ContactCase.PPP_TO_MHC: (0.5, 1.0),
    ContactCase.CMHC_TO_MHC: (0.5, 1.0),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("results"))
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--seed", type=int, default=20260808)
    parser.add_argument("--window", type=float, default=100.0)
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    print(f"{'case':<10} {'delta':>6} {'samples':>9} {'sup_distance':>13} {'seconds':>8}")
    for case, deltas in CASES.items():
        for delta in deltas:
            config = ExperimentConfig(
                case=case,
                params=ProcessParams(1.0, delta),
                window=Window(args.window, args.window),
                replications=args.reps,
                seed=args.seed,
            )
            report = run_experiment(config)
            stem = f"{case.value}_delta{delta:g}"
            curve = report.analytic
            lines = ["r,F,F_hat"]
            f_hat = report.empirical.cdf(curve.radii)
            lines += [
                f"{float(r)!r},{float(v)!r},{float(h)!r}"
                for r, v, h in zip(curve.radii, curve.values, f_hat)
            ]
            (args.outdir / f"{stem}.csv").write_text("\n".join(lines) + "\n")
            (args.outdir / f"{stem}.json").write_text(
                json.dumps(report.to_dict(), sort_keys=True, indent=2)
            )
            print(
                f"{case.value:<10} {delta:>6g} {report.empirical.n:>9} "
                f"{report.sup_distance:>13.5f} {report.runtime_seconds:>8.2f}"
            )


if __name__ == "__main__":
    main()
