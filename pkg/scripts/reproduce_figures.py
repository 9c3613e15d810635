#!/usr/bin/env python3
"""Write the fig3, fig4 and fig5 preset CSVs (plus manifests) for a config.

    python3 scripts/reproduce_figures.py [--config configs/defaults.cfg] [--out results]
"""

import argparse
import sys
from pathlib import Path

from edgeoffload import cli

ROOT = Path(__file__).resolve().parents[1]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(ROOT / "configs" / "defaults.cfg"))
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    for fig in ("fig3", "fig4", "fig5"):
        argv = ["sweep", args.config, "--figure", fig, "--out", args.out, "--workers", str(args.workers)]
        if args.seed is not None:
            argv += ["--seed", str(args.seed)]
        if args.trials is not None:
            argv += ["--trials", str(args.trials)]
        code = cli.main(argv)
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
