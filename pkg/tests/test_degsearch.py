from fractions import Fraction

import pytest

from app.models.forms import QuadraticForm, ThetaForm
from app.models.scalar import ONE, Scalar, T
from app.models.tensor import BraidingMatrix, multidegrees
from app.services.braid_service import BraidService
from app.services.degree_service import (
    enumerate_E,
    is_semipositive,
    theta_exponent,
    zero_blocks,
)
from app.services.relation_service import RelationService
from app.utils.exceptions import BadParameters, NonMonomialBraiding


def test_theta_form_of_a2(a2_braiding):
    tf = ThetaForm.from_braiding(a2_braiding)
    assert tf.diagonal == (4, 4)
    assert tf.pairs == {(0, 1): -4}


def test_theta_exponent_matches_full_twist(example_braiding):
    tf = ThetaForm.from_braiding(example_braiding)
    braid = BraidService(example_braiding)
    for n in range(5):
        for md in multidegrees(3, n):
            assert Scalar.t_power(theta_exponent(tf, md)) == braid.theta_scalar(md)
    with pytest.raises(BadParameters):
        theta_exponent(tf, (1, 0))


def test_non_monomial_braiding():
    braiding = BraidingMatrix(((T + 1, ONE), (ONE, ONE)))
    with pytest.raises(NonMonomialBraiding):
        ThetaForm.from_braiding(braiding)


def test_quadratic_form_of_example(example_braiding):
    qf = QuadraticForm.from_theta(ThetaForm.from_braiding(example_braiding))
    assert qf.b == {(0, 1): Fraction(3), (0, 2): Fraction(4), (1, 2): Fraction(2)}
    assert qf.in_E((1, 0, 3))
    assert not qf.in_E((1, 1, 1))


def test_quadratic_form_needs_uniform_diagonal():
    tf = ThetaForm.from_braiding(BraidingMatrix.from_t_exponents([[4, 0], [0, 2]]))
    assert not tf.uniform_diagonal
    with pytest.raises(BadParameters):
        QuadraticForm.from_theta(tf)


def test_zero_blocks_with_mixed_diagonal(a2_braiding):
    assert ThetaForm.from_braiding(a2_braiding).uniform_diagonal
    tf = ThetaForm.from_braiding(BraidingMatrix.from_t_exponents([[4, -2], [-2, 2]]))
    assert not tf.uniform_diagonal
    assert zero_blocks(tf, 6) == [(1, 3), (2, 1), (2, 4), (3, 3)]


def test_from_b_validates_pairs():
    with pytest.raises(BadParameters):
        QuadraticForm.from_b(2, {(1, 0): Fraction(1)})


def test_a2_points_are_finite(a2_braiding):
    qf = QuadraticForm.from_theta(ThetaForm.from_braiding(a2_braiding))
    assert is_semipositive(qf)
    result = enumerate_E(qf)
    assert result.semipositive
    assert result.truncated_at is None
    assert [x for x in result.points if sum(x) >= 2] == [(1, 2), (2, 1), (2, 2)]


def test_example_form_is_indefinite(example_braiding):
    qf = QuadraticForm.from_theta(ThetaForm.from_braiding(example_braiding))
    assert not is_semipositive(qf)
    result = enumerate_E(qf, height=4)
    assert not result.semipositive
    assert result.truncated_at == 4
    assert (1, 0, 3) in result.points
    with pytest.raises(BadParameters):
        enumerate_E(qf)


def test_zero_blocks_are_the_points_of_E(example_braiding):
    tf = ThetaForm.from_braiding(example_braiding)
    points = enumerate_E(QuadraticForm.from_theta(tf), height=5).points
    assert zero_blocks(tf, 5) == [x for x in points if sum(x) >= 2]


def test_all_integer_enumeration(example_braiding):
    qf = QuadraticForm.from_theta(ThetaForm.from_braiding(example_braiding))
    nonnegative = set(enumerate_E(qf, height=3).points)
    everything = set(enumerate_E(qf, height=3, nonnegative=False).points)
    assert nonnegative <= everything
    assert all(sum(abs(v) for v in x) <= 3 for x in everything)


def test_a2_prerelations_live_on_points_of_E(a2_braiding):
    qf = QuadraticForm.from_theta(ThetaForm.from_braiding(a2_braiding))
    points = set(enumerate_E(qf).points)
    service = RelationService(a2_braiding, workers=1)
    for n in range(2, 7):
        for b in service.prerelations(n).blocks:
            assert b.multidegree in points
