"""Print the worked three-player examples next to their reference values."""

from seqcontest import Contest, make_squared_exponential, make_tullock, solve_equilibrium

ROWS = [
    # label, model, contest, quantity, reference
    ("Tullock (1,2) X*", "tullock", (1, 2), "X", 0.75),
    ("Tullock (1,2) x1", "tullock", (1, 2), "x1", 0.375),
    ("Tullock (1,2) x3", "tullock", (1, 2), "xT", 0.1875),
    ("Tullock (1,2) h(X*)", "tullock", (1, 2), "h", 0.3333),
    ("Tullock (1,1,1) X*", "tullock", (1, 1, 1), "X", 0.7887),
    ("Tullock (1,1,1) x1", "tullock", (1, 1, 1), "x1", 0.3591),
    ("Tullock (1,1,1) x3", "tullock", (1, 1, 1), "xT", 0.1667),
    ("Tullock (1,1,1) u1", "tullock", (1, 1, 1), "u1", 0.0962),
    ("Tullock (1,1,1) h(X*)", "tullock", (1, 1, 1), "h", 0.2679),
    ("Tullock (1,1,1) x1 - x3", "tullock", (1, 1, 1), "gap", 0.1925),
    ("Tullock (2,1) X*", "tullock", (2, 1), "X", 0.75),
    ("Tullock (2,1) x1", "tullock", (2, 1), "x1", 0.2813),
    ("Tullock (2,1) u1", "tullock", (2, 1), "u1", 0.0938),
    ("exponential (1,2) x1", "sqexp", (1, 2), "x1", 0.3698),
    ("exponential (1,1,1) x1", "sqexp", (1, 1, 1), "x1", 0.3714),
]


def quantity(out, key):
    x, u = out.period_efforts, out.period_payoffs
    return {"X": out.X_star, "x1": x[0], "xT": x[-1], "u1": u[0], "h": out.h_star, "gap": x[0] - x[-1]}[key]


if __name__ == "__main__":
    models = {"tullock": make_tullock(1, 1), "sqexp": make_squared_exponential(2, 1)}
    print(f"{'quantity':28s} {'computed':>14s} {'reference':>10s} {'diff':>10s}")
    for label, fam, periods, key, ref in ROWS:
        value = quantity(solve_equilibrium(models[fam], Contest(periods)), key)
        print(f"{label:28s} {value:14.10f} {ref:10.4f} {value - ref:10.2e}")
