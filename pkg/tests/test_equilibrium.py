import numpy as np
import pytest

from seqcontest import (
    Contest,
    check_assumptions,
    enumerate_contests,
    g_tower,
    make_linear,
    make_tullock,
    solve_equilibrium,
    solve_total_effort,
    strictly_refines,
)
from seqcontest.equilibrium import eval_f, solve_many
from seqcontest.errors import DomainError


def test_eval_f_examples(tullock, linear):
    assert eval_f(tullock, Contest((3,)), 0, 2 / 3) == pytest.approx(0.0, abs=1e-15)
    assert eval_f(tullock, Contest((1, 2)), 0, 0.75) == pytest.approx(0.0, abs=1e-15)
    for c in (Contest((3,)), Contest((1, 2, 1))):
        assert eval_f(linear, c, c.T, 0.4) == 0.4
    with pytest.raises(DomainError):
        eval_f(tullock, Contest((1, 2)), 0, 1.2)


def test_total_effort_examples(tullock, linear):
    assert solve_total_effort(tullock, Contest((1, 2))) == pytest.approx(0.75, abs=1e-12)
    assert solve_total_effort(tullock, Contest((2, 1))) == pytest.approx(0.75, abs=1e-12)
    assert solve_total_effort(tullock, Contest((1, 1, 1))) == pytest.approx(0.5 + np.sqrt(3) / 6, abs=1e-12)
    assert solve_total_effort(linear, Contest((1,))) == pytest.approx(0.5, abs=1e-12)


def test_equilibrium_examples(tullock, sqexp):
    out = solve_equilibrium(tullock, Contest((1, 2)))
    assert out.period_efforts == pytest.approx((0.375, 0.1875), abs=1e-12)
    out = solve_equilibrium(tullock, Contest((1, 1, 1)))
    assert out.X_star == pytest.approx(0.7887, abs=5e-5)
    assert out.period_efforts[0] == pytest.approx(0.3591, abs=5e-5)
    assert out.period_efforts[2] == pytest.approx(1 / 6, abs=1e-12)
    assert out.period_payoffs[0] == pytest.approx(0.0962, abs=5e-5)
    out = solve_equilibrium(tullock, Contest((2, 1)))
    assert out.period_efforts[0] == pytest.approx(0.28125, abs=1e-12)
    assert out.period_payoffs[0] == pytest.approx(0.09375, abs=1e-12)
    out = solve_equilibrium(tullock, Contest((3,)))
    assert out.X_star == pytest.approx(2 / 3, abs=1e-12)
    assert out.period_efforts == pytest.approx((2 / 9,), abs=1e-12)
    assert solve_equilibrium(sqexp, Contest((1, 2))).period_efforts[0] == pytest.approx(0.3698, abs=5e-5)
    assert solve_equilibrium(sqexp, Contest((1, 1, 1))).period_efforts[0] == pytest.approx(0.3714, abs=5e-5)


def test_linear_product_formula(linear):
    # for linear h, x_t = xbar / prod_{k<=t}(1 + n_k) holds exactly
    for c in enumerate_contests(6):
        out = solve_equilibrium(linear, c)
        prod = np.cumprod([1 + p for p in c.periods])
        assert np.allclose(out.period_efforts, 1 / prod, atol=1e-12)
        assert out.X_star == pytest.approx(1 - 1 / prod[-1], abs=1e-12)


def test_assumption_examples(tullock, linear):
    rep = check_assumptions(tullock, Contest((1, 1, 1)))
    assert rep.assumption1_ok and rep.assumption2_ok and rep.interior
    for c in enumerate_contests(5):
        rep = check_assumptions(linear, c)
        assert rep.assumption1_ok and rep.assumption2_strict
    mono = solve_equilibrium(tullock, Contest((1,)))
    assert mono.flags.degenerate and mono.X_star == 0.0
    assert mono.period_efforts == (0.0,)


def test_assumption2_strict_fails_exactly_for_sequential_tullock(tullock):
    # g_n vanishes at the sequential root, so only the weak form holds there
    for n in range(3, 8):
        for c in enumerate_contests(n):
            rep = solve_equilibrium(tullock, c).flags.assumptions
            assert rep.assumption2_ok
            assert rep.assumption2_strict == (not c.is_sequential())


def test_solve_many_matches_single(tullock):
    cs = list(enumerate_contests(6))
    for c, out in zip(cs, solve_many(tullock, cs)):
        single = solve_equilibrium(tullock, c)
        assert out.X_star == single.X_star
        assert out.period_efforts == single.period_efforts


def test_outcome_serializes(tullock):
    d = solve_equilibrium(tullock, Contest((1, 2))).to_dict()
    assert d["contest"] == "1,2" and d["efforts"][0] == pytest.approx(0.375)
    assert "assumptions" not in d["flags"]


def test_scaled_tullock_scales_efforts():
    base = solve_equilibrium(make_tullock(1, 1), Contest((1, 2, 1)))
    scaled = solve_equilibrium(make_tullock(3, 1.5), Contest((1, 2, 1)))
    assert scaled.X_star == pytest.approx(2 * base.X_star, rel=1e-10)
    assert np.allclose(scaled.period_efforts, 2 * np.array(base.period_efforts), rtol=1e-10)


# property suites over every composition with n <= 9 ----------------------------

SUITES = [("tullock", n) for n in range(3, 10)] + [("linear", n) for n in range(2, 10)]


@pytest.fixture(scope="module")
def solved():
    models = {"tullock": make_tullock(), "linear": make_linear()}
    cache = {}
    for fam, n in SUITES:
        cs = list(enumerate_contests(n))
        cache[fam, n] = (models[fam], dict(zip(cs, solve_many(models[fam], cs))))
    return cache


@pytest.mark.parametrize("fam,n", SUITES)
def test_invariants(solved, fam, n):
    m, outs = solved[fam, n]
    for c, o in outs.items():
        x = np.array(o.period_efforts)
        u = np.array(o.period_payoffs)
        sizes = np.array(c.periods)
        assert abs(sizes @ x - o.X_star) < 1e-8
        assert abs(sizes @ u - o.welfare) < 1e-8
        assert abs(x[-1] - g_tower(m, o.X_star, 1)[0]) < 1e-8
        assert np.all(x >= 0)
        ineq_x, ineq_u = x[0] - x[-1], u[0] - u[-1]
        assert abs(ineq_u - ineq_x * o.h_star) < 1e-8
        assert o.flags.residual < 1e-10 and o.flags.slope > 0
        if c.T >= 2:
            assert np.all(np.diff(x) < 0) and np.all(np.diff(u) < 0)
        if fam == "tullock":
            assert o.flags.assumption1_ok and o.flags.assumption2_ok


@pytest.mark.parametrize("fam,n", SUITES)
def test_permutation_invariance(solved, fam, n):
    _, outs = solved[fam, n]
    for c, o in outs.items():
        canon = Contest(tuple(sorted(c.periods)))
        assert abs(o.X_star - outs[canon].X_star) < 1e-10


@pytest.mark.parametrize("fam,n", SUITES)
def test_refinement_monotonicity(solved, fam, n):
    _, outs = solved[fam, n]
    cs = list(outs)
    for fine in cs:
        for coarse in cs:
            if strictly_refines(fine, coarse):
                a, b = outs[fine], outs[coarse]
                assert a.X_star > b.X_star
                assert a.welfare < b.welfare
                assert a.period_efforts[-1] < b.period_efforts[-1]


def test_tullock_two_players_tie(tullock):
    # with two players the extra disclosure changes nothing
    a = solve_equilibrium(tullock, Contest((1, 1)))
    b = solve_equilibrium(tullock, Contest((2,)))
    assert a.X_star == pytest.approx(b.X_star, abs=1e-12)
    assert a.period_efforts[0] == pytest.approx(a.period_efforts[1], abs=1e-12)
