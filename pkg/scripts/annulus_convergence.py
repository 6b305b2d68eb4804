#!/usr/bin/env python3
"""Convergence study of the discretised annulus product against the adaptive
quadrature void probability, for all four cases. Prints the gap per annulus
count and the fitted convergence order (expected: first order)."""

import argparse

import numpy as np

from matern_contact import (
    ContactCase,
    ProcessParams,
    RetentionFunction,
    contact_cdf,
    void_probability_discretized,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lambda", dest="lambda_p", type=float, default=1.0)
    parser.add_argument("--delta", type=float, default=0.5)
    parser.add_argument("--radius", type=float, default=2.0)
    args = parser.parse_args()

    params = ProcessParams(args.lambda_p, args.delta)
    counts = [10**3, 10**4, 10**5, 10**6]
    header = "case       " + "".join(f"{f'N=1e{int(np.log10(n))}':>12}" for n in counts)
    print(header + "   order")
    for case in ContactCase:
        eta = RetentionFunction(case, params)
        reference = 1.0 - contact_cdf(eta, np.array([args.radius])).values[-1]
        gaps = [
            abs(void_probability_discretized(eta, args.radius, n) - reference)
            for n in counts
        ]
        order = -np.polyfit(np.log(counts), np.log(gaps), 1)[0]
        row = f"{case.value:<11}" + "".join(f"{g:>12.3e}" for g in gaps)
        print(row + f"   {order:.3f}")


if __name__ == "__main__":
    main()
