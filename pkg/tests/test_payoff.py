import math

import numpy as np
import pytest

from seqcontest import (
    g_tower,
    make_custom,
    make_exponential,
    make_exponential_decay,
    make_linear,
    make_squared_exponential,
    make_tullock,
    parse_model,
)
from seqcontest.errors import DomainError, ModelError
from seqcontest.jets import SeriesJet
from seqcontest.payoff import model_from_dict


def test_tullock_examples(tullock):
    assert tullock.xbar == 1.0
    assert float(tullock.h(1.0)) == 0.0
    assert g_tower(tullock, 0.5, 1)[0] == pytest.approx(0.25)
    assert g_tower(tullock, 0.75, 1)[0] == pytest.approx(0.1875)
    assert g_tower(tullock, 0.5, 2)[1] == pytest.approx(0.0, abs=1e-15)
    m = make_tullock(2, 1)
    assert m.xbar == 2.0
    assert float(m.h(1.0)) == pytest.approx(1.0)


def test_linear_tower_is_constant():
    m = make_linear(1, 1)
    assert g_tower(m, 0.3, 3) == pytest.approx([0.7, 0.7, 0.7])
    assert np.allclose(g_tower(m, 1.0, 4), 0.0)
    assert float(make_linear(2, 1).h(0.5)) == pytest.approx(1.0)
    xs = np.linspace(0.01, 2.5, 50)
    m = make_linear(3.0, 2.5)
    tower = g_tower(m, xs, 6)
    assert np.allclose(tower, 2.5 - xs, atol=1e-12)


def _tullock_polys(K):
    """g_k for Tullock(1,1) expanded as plain polynomials by the recursion."""
    P = np.polynomial.Polynomial
    g = P([0, 1, -1])
    out = [g]
    for _ in range(1, K):
        out.append(-(out[-1].deriv() * g))
    return out


def test_tullock_tower_matches_polynomials(tullock):
    xs = np.linspace(0.01, 1.0, 100)
    tower = g_tower(tullock, xs, 6)
    for k, poly in enumerate(_tullock_polys(6)):
        assert poly.degree() == k + 2  # g_{k+1} has degree k + 2
        assert np.max(np.abs(tower[k] - poly(xs))) < 1e-10


def test_tullock_tower_hand_expanded(tullock):
    X = 0.75
    g2 = -(1 - 2 * X) * X * (1 - X)
    # g2 = -(X - 3X^2 + 2X^3), so g3 = -g2' g
    g2_prime = -(1 - 6 * X + 6 * X**2)
    g3 = -g2_prime * X * (1 - X)
    assert g_tower(tullock, X, 3) == pytest.approx([0.1875, g2, g3], abs=1e-12)


def test_tower_derivative_output(tullock):
    vals, ders = g_tower(tullock, 0.6, 2, derivative=True)
    assert ders[0] == pytest.approx(1 - 2 * 0.6)
    assert vals[1] == pytest.approx(-(1 - 1.2) * 0.6 * 0.4)


def test_exponential_families():
    m = make_exponential(2, 2, 0)
    assert m.xbar == pytest.approx(1.0)
    decay = make_exponential_decay(2.0, 1.0, 1 / math.log(2))
    assert decay.xbar == 1.0
    assert float(decay.h(0.0)) == pytest.approx(1 / (2 * math.log(2)))
    sq = make_squared_exponential()
    assert sq.alpha == 0.0 and math.copysign(1, sq.alpha) == 1
    xs = np.linspace(0.05, 1.0, 20)
    assert np.allclose(g_tower(sq, xs, 1)[0], (2.0**-xs - 0.5) / math.log(2))


@pytest.mark.parametrize("factory,args", [
    (make_tullock, (0, 1)), (make_tullock, (1, -1)), (make_linear, (0, 1)), (make_linear, (1, 0)),
    (make_exponential, (1.0, 2, 0)), (make_exponential, (3, 0.5, 0)), (make_exponential, (2, 2, 1.5)),
])
def test_bad_parameters(factory, args):
    with pytest.raises(ModelError):
        factory(*args)


def test_every_model_saturates_and_decreases():
    for m in (make_tullock(3, 2), make_linear(0.5, 4), make_exponential(5, 3, 1),
              make_exponential_decay(3, 2, 1), make_squared_exponential(3, 0.5)):
        assert abs(float(m.h(m.xbar))) <= 1e-10
        xs = np.linspace(max(m.x_floor, m.xbar / 1000), m.xbar, 1000)[:-1]
        assert np.all(m.dh(xs) < 0)


def test_domain_errors(tullock):
    with pytest.raises(DomainError):
        g_tower(tullock, 0.0, 2)
    with pytest.raises(DomainError):
        g_tower(tullock, 1.5, 2)
    with pytest.raises(DomainError):
        g_tower(tullock, 1e-13, 1)


def test_custom_model():
    m = make_custom(lambda X, K: (2.0 - SeriesJet.variable(X, K)) ** 2 - 1.0, xbar=1.0)
    assert m.alpha == pytest.approx(2.0)
    X = 0.4
    assert g_tower(m, X, 1)[0] == pytest.approx(-((2 - X) ** 2 - 1) / (-2 * (2 - X)))
    with pytest.raises(ModelError):
        make_custom(lambda X, K: (1.0 - SeriesJet.variable(X, K)) ** 2, xbar=1.0)  # h'(xbar) = 0
    with pytest.raises(ModelError):
        make_custom(lambda X, K: SeriesJet.variable(X, K) - 1.0, xbar=1.0)  # increasing


def test_model_literals_and_dicts():
    assert parse_model("tullock:1,1") == make_tullock(1, 1)
    assert parse_model("linear:2,3").xbar == 3.0
    assert model_from_dict({"family": "tullock", "v": 1, "c": 1}) == make_tullock()
    assert model_from_dict(make_exponential(3, 2, 1).to_dict()) == make_exponential(3, 2, 1)
    for bad in ("nope:1", "tullock:a,b", "tullock:1,2,3"):
        with pytest.raises(ModelError):
            parse_model(bad)
    with pytest.raises(ModelError):
        model_from_dict({"family": "tullock", "v": 1, "q": 2})


def test_models_are_hashable_values():
    assert hash(make_tullock()) == hash(make_tullock(1.0, 1.0))
    assert make_tullock() != make_linear()
