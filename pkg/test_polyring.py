"""
Tests for polynomials, rational functions and exact matrix inversion
"""

import os
import random
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from algebra.errors import DimensionError, SingularMatrixError
from algebra.polyring import (
    PolyMatrix,
    RatFunc,
    bareiss_det,
    cofactor_det,
    denominator_factors,
    format_poly,
    get_context,
    is_quasi_homogeneous,
    poly_arith,
    poly_from_json,
    poly_to_json,
    rat_inverse,
    rescale,
    total_degree,
    weighted_substitute,
)
from models.config import Settings


@pytest.fixture
def ctx3():
    return get_context(3)


@pytest.fixture
def rng():
    return random.Random(Settings.from_env().seed)


def random_poly(rng, ctx, terms=3, max_exp=2):
    return ctx.from_terms({
        tuple(rng.randint(0, max_exp) for _ in range(ctx.k)): Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        for _ in range(terms)
    })


def nonzero_poly(rng, ctx, **kwargs):
    while True:
        p = random_poly(rng, ctx, **kwargs)
        if p:
            return p


def test_total_degree(ctx3):
    q1, q2, q3 = ctx3.gens
    assert total_degree(q1**2 * q2 + q3) == 3
    assert total_degree(ctx3.const(5)) == 0
    assert total_degree(ctx3.zero) is None


def test_poly_arith(ctx3):
    q1, q2, _ = ctx3.gens
    assert poly_arith(q1**2 * q2, None, "partial_derivative", 1) == 2 * q1 * q2
    assert poly_arith(q1, q2, "mul") == q1 * q2
    with pytest.raises(DimensionError):
        poly_arith(q1, get_context(2).gens[0], "add")
    with pytest.raises(DimensionError):
        poly_arith(q1, None, "partial_derivative", 4)
    with pytest.raises(ValueError):
        poly_arith(q1, q2, "pow")


def test_weighted_degrees():
    ctx = get_context(5)
    q1, q2, q3, _, _ = ctx.gens
    entry = ctx.const(Fraction(-2, 3)) * q3 * q2 + 16 * q1**2 * q3
    weights = [2, 4, 4, 4, 6]
    assert weighted_substitute(entry, weights) == {8}
    assert is_quasi_homogeneous(entry, weights, 8)
    assert weighted_substitute(q1 * q2 + q3**2, weights) == {6, 8}
    assert weighted_substitute(ctx.zero, weights) == set()
    with pytest.raises(DimensionError):
        weighted_substitute(q1, [1, 2])


def test_rescale(ctx3):
    q1, q2, q3 = ctx3.gens
    assert rescale(q1 * q2 + q3, [2, 3, 1]) == 6 * q1 * q2 + q3


def test_format_poly():
    ctx = get_context(5)
    q1, _, q3, _, q5 = ctx.gens
    assert format_poly(ctx.const(Fraction(375, 2)) * q1**3 + 10 * q1 * q5) == "375/2*q1^3 + 10*q1*q5"
    assert format_poly(1 - q3) == "-q3 + 1"
    assert format_poly(ctx.zero) == "0"
    assert format_poly(ctx.const(Fraction(1, 3)) * ctx.gens[1] ** 2, latex=True) == "\\frac{1}{3} q_{2}^{2}"


def test_ratfunc_is_reduced_with_monic_denominator(ctx3):
    q1, q2, q3 = ctx3.gens
    assert RatFunc(q1 * q2 - q1, q2 - 1) == RatFunc.of(q1)
    half = RatFunc(q1, 2 * q2)
    assert half.den == q2
    assert half.num * 2 == q1
    assert not half.is_polynomial
    assert RatFunc(q1, q3 - 1).format() == "(q1)/(q3 - 1)"
    with pytest.raises(ZeroDivisionError):
        RatFunc(q1, ctx3.zero)


def test_ratfunc_arithmetic(ctx3):
    q1, q2, q3 = ctx3.gens
    a = RatFunc(q1, q2)
    assert a * RatFunc.of(q2) == q1
    assert (a - a).is_zero()
    assert a.diff(2) == RatFunc(-q1, q2**2)
    assert a.diff(1) == RatFunc(ctx3.one, q2)
    assert RatFunc(q1 + 3, q2 - 1).at_zero() == -3
    with pytest.raises(ZeroDivisionError):
        a.at_zero()


def test_denominator_factors(ctx3):
    q1, _, q3 = ctx3.gens
    assert denominator_factors(RatFunc(q1, (q3 - 1) ** 2)) == [(q3 - 1, 2)]
    assert denominator_factors(RatFunc.of(q1)) == []


def test_bareiss_matches_cofactor_expansion(ctx3):
    q1, q2, q3 = ctx3.gens
    m = PolyMatrix(ctx3, [[q1, ctx3.one, ctx3.zero], [q2, q1, ctx3.one], [ctx3.one, q3, q2]])
    assert bareiss_det(m) == cofactor_det(m)


def test_unipotent_inverse(ctx3):
    q1 = ctx3.gens[0]
    m = PolyMatrix(ctx3, [[ctx3.one, q1], [ctx3.zero, ctx3.one]])
    result = rat_inverse(m)
    assert result.method == "unipotent"
    assert result.det_constant
    assert result.inverse[0, 1] == -q1
    assert result.inverse[0, 0] == ctx3.one


def test_bareiss_inverse_with_nonconstant_det(ctx3):
    q1 = ctx3.gens[0]
    m = PolyMatrix(ctx3, [[ctx3.one, q1], [q1, ctx3.one]])
    result = rat_inverse(m)
    assert result.method == "bareiss"
    assert result.det == 1 - q1**2
    assert not result.det_constant
    assert not result.singular_at_origin
    product = result.inverse @ m.to_rat()
    for i in range(2):
        for j in range(2):
            assert product[i, j] == (ctx3.one if i == j else ctx3.zero)


def test_inverse_singular_at_origin(ctx3):
    q1 = ctx3.gens[0]
    result = rat_inverse(PolyMatrix(ctx3, [[q1, ctx3.zero], [ctx3.zero, ctx3.one]]))
    assert result.singular_at_origin
    assert result.inverse[0, 0] == RatFunc(ctx3.one, q1)


def test_identically_singular_matrix(ctx3):
    q1 = ctx3.gens[0]
    with pytest.raises(SingularMatrixError):
        rat_inverse(PolyMatrix(ctx3, [[q1, q1], [q1, q1]]))


def test_ring_axioms_on_random_polynomials(ctx3, rng):
    for _ in range(20):
        a, b, c = (random_poly(rng, ctx3) for _ in range(3))
        assert poly_arith(a, b, "add") == poly_arith(b, a, "add")
        assert poly_arith(a, b, "mul") == poly_arith(b, a, "mul")
        assert poly_arith(poly_arith(a, b, "mul"), c, "mul") == poly_arith(a, poly_arith(b, c, "mul"), "mul")
        assert poly_arith(a, poly_arith(b, c, "add"), "mul") == a * b + a * c
        assert poly_arith(a, a, "sub") == ctx3.zero
        for var in (1, 2, 3):
            leibniz = poly_arith(a, None, "partial_derivative", var) * b + a * poly_arith(b, None, "partial_derivative", var)
            assert poly_arith(a * b, None, "partial_derivative", var) == leibniz


def test_ratfunc_reduction_is_canonical(ctx3, rng):
    for _ in range(15):
        a = random_poly(rng, ctx3, terms=2)
        b = nonzero_poly(rng, ctx3, terms=2, max_exp=1)
        g = nonzero_poly(rng, ctx3, terms=2, max_exp=1)
        reduced = RatFunc(a, b)
        unreduced = RatFunc(a * g, b * g, reduced=True)
        assert unreduced.cross_equal(reduced)
        assert RatFunc(a * g, b * g) == reduced
        assert RatFunc(reduced.num, reduced.den) == reduced
        assert reduced.den.LC == 1
        assert reduced.num.gcd(reduced.den).is_ground
        assert not (reduced + RatFunc.of(ctx3.one)).cross_equal(reduced)


def test_polynomial_serialization_round_trip(ctx3, rng):
    for _ in range(10):
        p = random_poly(rng, ctx3, terms=4)
        data = poly_to_json(p)
        assert all(set(term) == {"coeff", "exps"} and "/" in term["coeff"] for term in data)
        assert poly_from_json(ctx3, data) == p
        r = RatFunc(p, nonzero_poly(rng, ctx3, max_exp=1))
        back = r.to_json()
        assert RatFunc(poly_from_json(ctx3, back["num"]), poly_from_json(ctx3, back["den"])) == r
    with pytest.raises(DimensionError):
        poly_from_json(ctx3, [{"coeff": "1/1", "exps": [1, 0]}])


@pytest.mark.parametrize("size", [1, 2, 3, 4, 5])
def test_bareiss_matches_cofactor_on_random_matrices(ctx3, rng, size):
    for _ in range(4):
        m = PolyMatrix(ctx3, [[random_poly(rng, ctx3, terms=2, max_exp=1) for _ in range(size)] for _ in range(size)])
        expected = cofactor_det(m)
        if not expected:
            with pytest.raises(SingularMatrixError):
                bareiss_det(m)
        else:
            assert bareiss_det(m) == expected


def _assert_identity(product, size, ctx):
    for i in range(size):
        for j in range(size):
            assert product[i, j] == (ctx.one if i == j else ctx.zero)


@pytest.mark.parametrize("size", [2, 3, 4])
def test_random_unipotent_inverse(ctx3, rng, size):
    rows = [[ctx3.one if i == j else (random_poly(rng, ctx3) if j > i else ctx3.zero) for j in range(size)]
            for i in range(size)]
    m = PolyMatrix(ctx3, rows)
    result = rat_inverse(m)
    assert result.method == "unipotent"
    assert result.det_constant
    assert result.inverse.is_polynomial()
    _assert_identity(m.to_rat() @ result.inverse, size, ctx3)


@pytest.mark.parametrize("size", [2, 3])
def test_random_generic_inverse(ctx3, rng, size):
    while True:
        m = PolyMatrix(ctx3, [[random_poly(rng, ctx3, terms=2, max_exp=1) for _ in range(size)] for _ in range(size)])
        det = cofactor_det(m)
        if det and not det.is_ground:
            break
    result = rat_inverse(m)
    assert result.method == "bareiss"
    assert result.det == det
    _assert_identity(m.to_rat() @ result.inverse, size, ctx3)
    _assert_identity(result.inverse @ m.to_rat(), size, ctx3)
