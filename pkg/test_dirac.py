"""
Tests for the constraint matrices, transverse tensors, Jacobi identity and grading
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from algebra.errors import DimensionError, NotAntisymmetricError
from algebra.lie import E, H
from algebra.polyring import RatFunc, RatMatrix, get_context, weighted_substitute
from models.partition import Partition
from transverse.complement import conormal_complement, im_ad_f
from transverse.dirac import (
    compute_transverse,
    jacobi_check,
    lie_poisson_matrix,
    tensor_degree,
    vanishes_at_origin,
)
from transverse.fixtures import load_fixture, run_complement_file
from transverse.orbit import centralizer, triplet_from_partition


def builtin_run(parts, kind="imadf"):
    t = triplet_from_partition(Partition.of(parts))
    z = centralizer(t)
    c = conormal_complement(t, z) if kind == "conormal" else im_ad_f(t)
    return compute_transverse(t, z, c)


def rat_matrix(ctx, rows):
    return RatMatrix(ctx, [[RatFunc.of(a) for a in row] for row in rows])


def test_lie_poisson_structure_of_sl2_is_poisson():
    m = lie_poisson_matrix([E(2, 1, 2), H(2, 1), E(2, 2, 1)])
    report = jacobi_check(m)
    assert report.passed
    assert report.triples_checked == 1
    assert report.witness is None


def test_jacobi_failure_names_a_triple():
    ctx = get_context(3)
    q1, q2, q3 = ctx.gens
    zero = ctx.zero
    m = rat_matrix(ctx, [[zero, q3, zero], [-q3, zero, q2], [zero, -q2, zero]])
    report = jacobi_check(m)
    assert not report.passed
    assert report.witness == [1, 2, 3]
    assert report.residual == "q3"


def test_jacobi_rejects_bad_input():
    ctx = get_context(2)
    q1 = ctx.gens[0]
    with pytest.raises(NotAntisymmetricError):
        jacobi_check(rat_matrix(ctx, [[ctx.zero, q1], [q1, ctx.zero]]))
    wide = get_context(3)
    with pytest.raises(DimensionError):
        jacobi_check(rat_matrix(wide, [[wide.zero] * 2] * 2))


def test_tensor_degree():
    ctx = get_context(2)
    q1, q2 = ctx.gens
    assert tensor_degree(rat_matrix(ctx, [[ctx.zero, q1 * q2], [-q1 * q2, ctx.zero]])) == 2
    assert tensor_degree(rat_matrix(ctx, [[ctx.zero]])) == 0
    assert tensor_degree(RatMatrix(ctx, [[RatFunc(q1, q2 - 1)]])) is None


def test_subregular_constraint_matrices():
    fr = run_complement_file(load_fixture("subregular_graded"))
    ts, pres = fr.run.structure, fr.presentation
    q1, q2, q3, q4, q5 = ts.ctx.gens
    assert pres.c[2, 3] == q4
    assert pres.c[3, 4] == 4 * q1
    assert pres.c[0, 5] == -2
    assert all(v == 0 for row in ts.d.at_zero() for v in row)
    assert all(v == 0 for row in ts.a.at_zero() for v in row)
    assert ts.a[0, 2] == -4 * q3
    assert not ts.lambda_equals_prime


def test_subregular_graded_tensor():
    run = run_complement_file(load_fixture("subregular_graded")).run
    ts = run.structure
    assert ts.polynomial
    assert ts.degree == 3
    assert ts.degree_prime == 3
    assert ts.det_c_constant
    assert run.jacobi.passed
    assert run.grading.applicable and run.grading.passed
    assert run.grading.variable_weights == [2, 4, 4, 4, 6]
    assert weighted_substitute(ts.lambda_prime[2, 4].num, run.grading.variable_weights) == {8}
    assert vanishes_at_origin(ts.lambda_full)
    assert run.consistent


def test_perturbed_tensor_fails_jacobi():
    ts = run_complement_file(load_fixture("subregular_graded")).run.structure
    one = RatFunc.of(ts.ctx.one)
    rows = [list(row) for row in ts.lambda_full.rows]
    rows[1][2] = rows[1][2] + one
    rows[2][1] = rows[2][1] - one
    report = jacobi_check(RatMatrix(ts.ctx, rows))
    assert not report.passed
    assert len(report.witness) == 3
    assert report.residual != "0"


def test_ungraded_complement_gives_rational_tensor():
    run = run_complement_file(load_fixture("subregular_ungraded")).run
    ts = run.structure
    assert not run.complement.ad_h_invariant
    assert not ts.polynomial
    assert ts.degree is None
    assert not ts.det_c_constant
    assert ts.inverse_method == "bareiss"
    assert not run.grading.applicable
    assert ts.quasi_homogeneous is None
    assert run.jacobi.passed
    assert vanishes_at_origin(ts.lambda_full)
    assert run.consistent


def test_sl5_32_im_ad_f_has_degree_four():
    run = builtin_run([3, 2])
    assert run.structure.polynomial
    assert run.structure.degree == 4
    assert run.grading.passed
    assert run.jacobi.passed


def test_sl5_32_conormal_is_quadratic():
    run = builtin_run([3, 2], "conormal")
    ts = run.structure
    assert run.complement.subalgebra
    assert ts.polynomial
    assert ts.quadratic
    assert ts.degree <= 2
    assert run.jacobi.passed
    assert run.consistent


def test_regular_sl2_orbit():
    run = builtin_run([2])
    ts = run.structure
    assert ts.k == 1
    assert ts.degree == 0
    assert ts.lambda_equals_prime
    assert run.jacobi.triples_checked == 0


def test_killing_form_keeps_the_degree():
    t = triplet_from_partition(Partition.of([3, 1]))
    z = centralizer(t)
    c = im_ad_f(t)
    trace_run = compute_transverse(t, z, c)
    killing_run = compute_transverse(t, z, c, Fraction(8))
    assert killing_run.structure.degree == trace_run.structure.degree
    assert killing_run.jacobi.passed
