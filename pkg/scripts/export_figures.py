"""Write the solution grids behind the six figure presets as CSV files."""

from __future__ import annotations

import argparse
import pathlib
from dataclasses import dataclass

from fracmks.cli import PRESETS, main


@dataclass(frozen=True)
class ExportConfig:
    out_dir: pathlib.Path = pathlib.Path("figures")
    t_max: float = 2.0
    n_t: int = 40
    n_x: int = 65
    precision: int = 12


def export(config: ExportConfig) -> list[pathlib.Path]:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in sorted(PRESETS):
        path = config.out_dir / f"{name}.csv"
        code = main([
            "solve", "--preset", name,
            "--t-max", str(config.t_max),
            "--n-t", str(config.n_t),
            "--n-x", str(config.n_x),
            "--precision", str(config.precision),
            "--output", str(path),
        ])
        if code != 0:
            raise RuntimeError(f"export of {name} failed with exit code {code}")
        written.append(path)

    return written


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=pathlib.Path, default=ExportConfig.out_dir)
    parser.add_argument("--t-max", type=float, default=ExportConfig.t_max)
    parser.add_argument("--n-t", type=int, default=ExportConfig.n_t)
    parser.add_argument("--n-x", type=int, default=ExportConfig.n_x)
    args = parser.parse_args()

    for path in export(ExportConfig(args.out_dir, args.t_max, args.n_t, args.n_x)):
        print(path)
