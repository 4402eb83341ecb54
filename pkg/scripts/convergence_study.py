"""Grid refinement of the discrete operators and the predictor-corrector.

Prints empirical orders of the L1 scheme on t^g, the inversion defect of
J^a D^a, and the error of the predictor-corrector for C2 both at the final
time and over the whole grid (the latter includes the layer near t = 0).
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from fracmks import (
    FractionalOrder,
    SampledFunction,
    SolutionParams,
    TimeGrid,
    caputo_l1,
    caputo_power,
    coeff_c2_c3,
    reduced_system_numeric,
    verify_inversion,
)


@dataclass(frozen=True)
class ConvergenceConfig:
    alphas: tuple[float, ...] = (0.25, 0.5, 0.75)
    exponents: tuple[int, ...] = (2, 3)
    l1_steps: tuple[int, ...] = (250, 500, 1000, 2000)
    abm_steps: tuple[int, ...] = (1024, 2048, 4096)
    abm_lambdas: tuple[float, ...] = (1 / 3, 1 / 4)


def l1_orders(config: ConvergenceConfig) -> None:
    print("# L1 scheme: alpha, exponent, errors at t=1, empirical orders")
    for alpha in config.alphas:
        order = FractionalOrder(alpha)
        for g in config.exponents:
            errors = []
            for n in config.l1_steps:
                f = SampledFunction.from_callable(TimeGrid(1.0, n), lambda t: t**g)
                errors.append(abs(caputo_l1(f, order).at(1.0) - caputo_power(g, order, 1.0)))
            rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
            print(alpha, g, " ".join(f"{e:.2e}" for e in errors), np.round(rates, 3))


def inversion(config: ConvergenceConfig) -> None:
    print("# inversion defect for t^3, alpha = 0.5")
    for n in config.l1_steps:
        f = SampledFunction.from_callable(TimeGrid(1.0, n), lambda t: t**3)
        print(n, f"{verify_inversion(f, FractionalOrder(0.5)):.3e}")


def predictor_corrector(config: ConvergenceConfig) -> None:
    print("# predictor-corrector C2: alpha, lambda, n, error at t=1, max error, max for t >= 0.1")
    for alpha in config.alphas + (1.0,):
        for lam in config.abm_lambdas:
            p = SolutionParams.create(lam, alpha)
            for n in config.abm_steps:
                grid = TimeGrid(1.0, n)
                _, c2, _ = reduced_system_numeric(p, grid)
                exact = np.array([coeff_c2_c3(t, p) for t in grid.nodes])
                err = np.abs(c2.values - exact)
                late = err[grid.nodes >= 0.1]
                print(alpha, round(lam, 4), n, f"{err[-1]:.2e}", f"{err.max():.2e}", f"{late.max():.2e}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--part", choices=("l1", "inversion", "abm", "all"), default="all")
    args = parser.parse_args()

    config = ConvergenceConfig()
    if args.part in ("l1", "all"):
        l1_orders(config)
    if args.part in ("inversion", "all"):
        inversion(config)
    if args.part in ("abm", "all"):
        predictor_corrector(config)
