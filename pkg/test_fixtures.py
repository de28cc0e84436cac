"""
Tests for complement files, coordinate alignment and the shipped reference fixtures
"""

import json
import os
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from algebra.errors import ComplementFileError, ConsistencyError
from algebra.lie import H
from algebra.polyring import coefficient, denominator_factors, get_context
from models.partition import Partition
from transverse.fixtures import (
    REFERENCE_FIXTURES,
    align_coordinates,
    compare_with_expected,
    fixture_path,
    load_fixture,
    parse_complement_file,
    parse_entry,
    parse_monomial,
    read_complement_file,
    resolve,
    run_complement_file,
)


@pytest.mark.parametrize("name", sorted(REFERENCE_FIXTURES))
def test_reference_fixture_matches(name):
    fr = run_complement_file(load_fixture(name))
    assert compare_with_expected(fr) == []


@pytest.mark.parametrize("name, scaling", [
    ("subregular_graded", [12, 1, 1, 1, 1]),
    ("subregular_graded_prime", [-4, 1, 1, 1, 1]),
    ("subregular_ungraded", [-4, 1, 1, 1, 1]),
    ("sl5_32_graded", [30, 2, 2, 2, 1, 1, 1, 1]),
])
def test_reference_coordinates_are_rescaled_duals(name, scaling):
    fr = run_complement_file(load_fixture(name))
    assert fr.presentation.scaling == [Fraction(c) for c in scaling]


def test_degree_depends_on_the_complement():
    graded = run_complement_file(load_fixture("subregular_graded")).run.structure
    prime = run_complement_file(load_fixture("subregular_graded_prime")).run.structure
    assert (graded.degree, prime.degree) == (3, 2)


def test_ungraded_fixture_denominators():
    fr = run_complement_file(load_fixture("subregular_ungraded"))
    q3 = fr.run.structure.ctx.gens[2]
    entry = fr.presentation.lambda_prime[3, 4]
    assert not entry.is_polynomial
    assert {factor for factor, _ in denominator_factors(entry)} == {q3 - 1}


def test_parse_entry():
    ctx = get_context(5)
    _, q2, q3, q4, q5 = ctx.gens
    entry = parse_entry(ctx, "q5**2 + 2*q2*q4*(2*q3 - 1)/(q3 - 1)")
    assert entry.den == q3 - 1
    assert entry.num == q5**2 * (q3 - 1) + 2 * q2 * q4 * (2 * q3 - 1)
    with pytest.raises(ComplementFileError):
        parse_entry(ctx, "q1 +")
    with pytest.raises(ComplementFileError):
        parse_entry(ctx, "q9")


def test_malformed_complement_files():
    with pytest.raises(ComplementFileError):
        parse_complement_file("{not json")
    with pytest.raises(ComplementFileError):
        parse_complement_file('[{"E(2,1)": "1"}]')
    with pytest.raises(ComplementFileError):
        parse_complement_file('{"n": 4}')
    with pytest.raises(ComplementFileError):
        parse_complement_file('{"n": 4, "partition": [3, 1], "complement": [], "colour": "red"}')


def test_unreadable_complement_file(tmp_path):
    with pytest.raises(ComplementFileError):
        read_complement_file(tmp_path / "missing.json")


def test_bad_labels_are_reported_as_file_errors():
    cf = parse_complement_file(json.dumps({"n": 4, "partition": [3, 1], "complement": [{"X(1)": "1"}] * 10}))
    with pytest.raises(ComplementFileError):
        resolve(cf)


def test_orbit_mismatch():
    cf = load_fixture("subregular_graded")
    with pytest.raises(ComplementFileError):
        resolve(cf, 4, Partition.of([2, 2]))
    with pytest.raises(ComplementFileError):
        resolve(cf, 5)


def test_reference_that_is_not_a_dual_multiple():
    cf = load_fixture("subregular_graded")
    data = json.loads(fixture_path("subregular_graded").read_text(encoding="utf-8"))
    data["dual_reference"][1] = {"H(1)": "1"}
    with pytest.raises(ComplementFileError):
        run_complement_file(parse_complement_file(json.dumps(data)))

    fr = run_complement_file(cf)
    reference = list(fr.loaded.reference)
    reference[0] = H(4, 2)
    with pytest.raises(ConsistencyError):
        align_coordinates(fr.run.dual, reference)


def test_parse_monomial():
    ctx = get_context(5)
    assert parse_monomial(ctx, "q1**2*q4") == (2, 0, 0, 1, 0)
    for text in ("2*q1", "q1 + q2", "1/q3"):
        with pytest.raises(ComplementFileError):
            parse_monomial(ctx, text)


def test_single_terms_of_an_entry_can_be_pinned():
    fr = run_complement_file(load_fixture("sl5_32_graded"))
    entry = fr.presentation.lambda_prime[5, 6]
    assert entry.is_polynomial
    assert coefficient(entry.num, (4, 0, 0, 0, 0, 0, 0, 0)) == Fraction(625, 4)

    data = json.loads(fixture_path("sl5_32_graded").read_text(encoding="utf-8"))
    data["expected"]["lambda_prime_terms"] = {"6,7": {"q1**4": "1"}, "1,2": {"q1": "1"}}
    problems = compare_with_expected(run_complement_file(parse_complement_file(json.dumps(data))))
    assert problems == [
        "coefficient of q1 in Lambda'(1,2) = 0, expected 1",
        "coefficient of q1**4 in Lambda'(6,7) = 625/4, expected 1",
    ]


def test_cubic_brackets_of_the_sl5_32_complement():
    fr = run_complement_file(load_fixture("sl5_32_graded"))
    ctx = fr.run.structure.ctx
    entry = fr.presentation.lambda_prime[1, 6]
    assert entry != parse_entry(ctx, "375/2*q1**3 + 10*q5*q1 - 5*q4*q1 - 2/3*q2*q3")
    assert coefficient(entry.num, (3, 0, 0, 0, 0, 0, 0, 0)) == Fraction(-125, 2)
    assert coefficient(entry.num, (0, 1, 1, 0, 0, 0, 0, 0)) == Fraction(-2, 3)
    assert fr.run.jacobi.passed
