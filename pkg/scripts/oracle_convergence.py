"""Oracle-vs-characterization discrepancy as the grid is refined (n = 3 and 4)."""

import argparse
import csv
import sys
import time

from seqcontest import enumerate_contests, make_linear, make_tullock, oracle_solve, solve_equilibrium
from seqcontest.oracle import OracleConfig

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--grids", default="26,51,101,201,401,801,1601,2001")
    args = p.parse_args()
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["model", "contest", "grid_points", "grid_step", "max_discrepancy", "seconds"])
    for name, m in (("tullock:1,1", make_tullock()), ("linear:1,1", make_linear())):
        for n in (3, 4):
            for c in enumerate_contests(n):
                exact = solve_equilibrium(m, c)
                for g in map(int, args.grids.split(",")):
                    t = time.perf_counter()
                    o = oracle_solve(m, c, OracleConfig(grid_points=g))
                    d = max([abs(o.X_star - exact.X_star)] +
                            [abs(a - b) for a, b in zip(o.period_efforts, exact.period_efforts)])
                    w.writerow([name, str(c), g, f"{m.xbar / (g - 1):.6g}", f"{d:.3e}",
                                f"{time.perf_counter() - t:.3f}"])
