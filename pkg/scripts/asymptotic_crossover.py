"""How well the large-contest rules describe exact Tullock equilibria.

Part 1: |approx X - exact X*| for sequential contests.
Part 2: for each n and i, whether the closed-form extremal contest for the
i-th highest effort or payoff is optimal in the exact Tullock game.
"""

import argparse

from seqcontest import Contest, make_tullock
from seqcontest.asymptotics import compare_exact, ith_effort_extremal, ith_payoff_extremal, period_of_player
from seqcontest.designer import contest_table

TIE = 1e-9
KINDS = [("effort", "min"), ("effort", "max"), ("effort", "max-family"), ("payoff", "min"), ("payoff", "max")]


def exact_matches(m, n):
    table = list(contest_table(m, n).solved())
    res = {}
    for i in range(1, n + 1):
        eff = {c: o.period_efforts[period_of_player(c, i)] for c, o, _ in table}
        pay = {c: o.period_payoffs[period_of_player(c, i)] for c, o, _ in table}
        for kind, vals, rule in (("effort", eff, ith_effort_extremal), ("payoff", pay, ith_payoff_extremal)):
            for d in ("min", "max"):
                best = (min if d == "min" else max)(vals.values())
                closed = rule(n, i, d).contests
                res[kind, d, i] = all(abs(vals[c] - best) <= TIE for c in closed)
        # the effort maximizer is a family: any contest whose first period holds i players
        best = max(eff.values())
        res["effort", "max-family", i] = any(
            abs(v - best) <= TIE and (c.periods[0] == i or (i == n and c.T == 1)) for c, v in eff.items())
    return res


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--nmax", type=int, default=12)
    args = p.parse_args()
    m = make_tullock(1, 1)
    print("n,sequential_exact_X,approx_X,gap")
    for r in compare_exact(m, [Contest.sequential(n) for n in range(2, args.nmax + 1)]):
        print(f"{r.contest.n},{r.exact_X:.12g},{r.approx_X:.12g},{r.gap:.3e}")
    print()
    print("n,kind,direction,matching_i,total_i")
    tally = {}
    for n in range(2, args.nmax + 1):
        res = exact_matches(m, n)
        for kind, d in KINDS:
            hits = [i for i in range(1, n + 1) if res[kind, d, i]]
            tally[kind, d, n] = len(hits) == n
            print(f"{n},{kind},{d},{len(hits)},{n}")
    print()
    for kind, d in KINDS:
        ns = [n for n in range(2, args.nmax + 1) if tally[kind, d, n]]
        tail = next((n for n in range(2, args.nmax + 1)
                     if all(tally[kind, d, k] for k in range(n, args.nmax + 1))), None)
        since = f"for all n >= {tail}" if tail else "not for all n up to the largest n"
        print(f"{kind} {d}: closed form exact-optimal for every i at n in {ns}; {since} (n <= {args.nmax})")
