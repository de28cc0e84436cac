"""
Tests for the sl_n model: bracket, invariant form, roots and weight gradings
"""

import os
import random
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from algebra.errors import DimensionError, NonSemisimpleError
from algebra.lie import (
    E,
    H,
    BasisLabel,
    LieElement,
    Root,
    all_labels,
    bracket,
    cartan,
    is_subalgebra,
    offdiag,
    pairing,
    structure_constants,
    weight_decompose,
    weight_of,
)


def random_element(rng, n):
    return LieElement(n, {label: rng.randint(-4, 4) for label in all_labels(n)})


def test_labels_and_parsing():
    assert len(all_labels(4)) == 15
    assert str(offdiag(1, 2)) == "E(1,2)"
    assert str(cartan(3)) == "H(3)"
    assert BasisLabel.parse("E(3, 1)") == offdiag(3, 1)
    assert BasisLabel.parse("H(2)") == cartan(2)
    with pytest.raises(ValueError):
        BasisLabel.parse("X(1)")


def test_bracket_of_root_vectors():
    assert bracket(E(2, 1, 2), E(2, 2, 1)) == H(2, 1)
    assert bracket(H(2, 1), E(2, 1, 2)) == E(2, 1, 2).scale(2)
    assert bracket(E(4, 1, 2), E(4, 2, 3)) == E(4, 1, 3)
    assert bracket(E(4, 1, 2), E(4, 3, 4)).is_zero()


def test_bracket_is_a_lie_bracket():
    rng = random.Random(7)
    for n in (2, 3, 4):
        for _ in range(3):
            x, y, z = (random_element(rng, n) for _ in range(3))
            assert bracket(x, y) == -bracket(y, x)
            cyclic = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
            assert cyclic.is_zero()
            assert pairing(bracket(x, y), z) == pairing(x, bracket(y, z))


def test_trace_and_killing_pairing():
    assert pairing(H(4, 1), H(4, 1)) == 2
    assert pairing(H(4, 1), H(4, 2)) == -1
    assert pairing(E(4, 1, 2), E(4, 2, 1)) == 1
    assert pairing(E(4, 1, 2), E(4, 1, 2)) == 0
    assert pairing(E(4, 1, 2), E(4, 2, 1), Fraction(8)) == 8


def test_mismatched_dimensions_are_rejected():
    with pytest.raises(DimensionError):
        bracket(E(3, 1, 2), E(4, 2, 1))
    with pytest.raises(DimensionError):
        pairing(H(3, 1), H(4, 1))
    with pytest.raises(DimensionError):
        LieElement.from_matrix(3, {(1, 1): 1})


def test_matrix_and_json_views():
    x = LieElement.from_matrix(3, {(1, 1): 2, (2, 2): -1, (3, 3): -1, (1, 3): Fraction(1, 2)})
    assert x.diagonal() == [2, -1, -1]
    assert x.coefficient(cartan(1)) == 2
    assert x.coefficient(cartan(2)) == 1
    assert LieElement.from_json(3, x.to_json()) == x


def test_roots_and_coroots():
    beta = Root.from_simple_range(1, 2)
    assert beta == Root(1, 3)
    assert beta.is_positive
    assert beta.simple_coefficients(4) == [1, 1, 0]
    assert beta.negate().simple_coefficients(4) == [-1, -1, 0]
    assert beta.root_vector(4) == E(4, 1, 3)
    assert beta.coroot(4) == H(4, 1) + H(4, 2)
    h = LieElement.from_diagonal([2, 0, 0, -2])
    assert beta.evaluate(h) == 2


def test_weight_of_detects_weight_vectors():
    h = LieElement.from_diagonal([2, 0, 0, -2])
    assert weight_of(E(4, 1, 2) + E(4, 2, 4), h) == 2
    assert weight_of(H(4, 1), h) == 0
    assert weight_of(E(4, 2, 1) + E(4, 3, 4), h) is None


def test_weight_decompose_splits_stable_spans():
    h = LieElement.from_diagonal([2, 0, 0, -2])
    blocks = weight_decompose(h, [E(4, 1, 2) + E(4, 2, 3), E(4, 1, 2) - E(4, 2, 3)])
    assert sorted(blocks) == [0, 2]
    assert blocks[2] == [E(4, 1, 2)]
    assert blocks[0] == [E(4, 2, 3)]


def test_weight_decompose_rejects_unstable_spans():
    h = LieElement.from_diagonal([2, 0, 0, -2])
    with pytest.raises(NonSemisimpleError) as info:
        weight_decompose(h, [E(4, 2, 1) + E(4, 3, 4)])
    assert info.value.vector is not None


def test_weight_decompose_of_the_whole_algebra():
    h = LieElement.from_diagonal([2, 0, 0, -2])
    space = [LieElement(4, {label: 1}) for label in all_labels(4)]
    blocks = weight_decompose(h, space)
    assert {w: len(b) for w, b in blocks.items()} == {4: 1, 2: 4, 0: 5, -2: 4, -4: 1}
    assert blocks[4] == [E(4, 1, 4)]
    assert blocks[-4] == [E(4, 4, 1)]
    for w, block in blocks.items():
        assert all(weight_of(x, h) == w for x in block)


def test_structure_constants_of_sl2():
    basis = [E(2, 1, 2), H(2, 1), E(2, 2, 1)]
    c = structure_constants(basis)
    assert c[0][2] == [0, 1, 0]
    assert c[1][0] == [2, 0, 0]
    assert c[1][2] == [0, 0, -2]
    assert is_subalgebra(basis)
    assert not is_subalgebra([E(3, 1, 2), E(3, 2, 1)])
