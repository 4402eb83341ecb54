"""Size of the product-rule defect of E_alpha and its effect on C1.

For each order, prints the gap g(t) = E_a(theta (2t)^a) - E_a(theta t^a)^2,
the resulting residual of the closed-form solution, and the difference between
the closed-form and quadrature values of C1 at the final time.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

import numpy as np

from fracmks import (
    C1Mode,
    FractionalOrder,
    SolutionParams,
    TimeGrid,
    coeff_c1_paper,
    coeff_c1_quadrature,
    composition_gap,
    pde_residual,
)


@dataclass(frozen=True)
class GapStudyConfig:
    lam: float = 1 / 3
    alphas: tuple[float, ...] = (0.25, 0.5, 0.75, 0.9, 1.0)
    t_samples: tuple[float, ...] = (0.1, 0.5, 1.0, 2.0)
    quad_steps: int = 4000
    t_final: float = 1.0


def run(config: GapStudyConfig) -> list[dict[str, float]]:
    rows = []
    for alpha in config.alphas:
        p = SolutionParams.create(config.lam, alpha)
        gaps = composition_gap(FractionalOrder(alpha), p.mks.theta, config.t_samples)
        residual = pde_residual(p, config.t_samples, [0.0], C1Mode.PAPER_CLOSED_FORM)

        grid = TimeGrid(config.t_final, config.quad_steps)
        c1_quad = coeff_c1_quadrature(grid, p).at(config.t_final)
        c1_paper = coeff_c1_paper(config.t_final, p)

        rows.append({
            "alpha": alpha,
            "max_gap": gaps.max_abs_gap,
            "max_residual": residual.max_abs_residual,
            "c1_paper": c1_paper,
            "c1_quadrature": c1_quad,
            "c1_difference": c1_paper - c1_quad,
        })

    return rows


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lambda", dest="lam", type=float, default=GapStudyConfig.lam)
    parser.add_argument("--quad-steps", type=int, default=GapStudyConfig.quad_steps)
    args = parser.parse_args()

    rows = run(GapStudyConfig(lam=args.lam, quad_steps=args.quad_steps))
    keys = list(rows[0])
    print(",".join(keys))
    for row in rows:
        print(",".join(f"{row[k]:.6g}" for k in keys))
    print(f"# largest C1 difference: {np.max([abs(r['c1_difference']) for r in rows]):.3g}")
