"""Write the per-objective figure CSVs for Tullock(1,1), n = 2..12."""

import argparse
import sys

from seqcontest.cli import main

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="results/figures")
    p.add_argument("--jobs", default="1")
    args = p.parse_args()
    sys.exit(main(["figures", "--model", "tullock:1,1", "--n", "2..12", "--out", args.out, "--jobs", args.jobs]))
