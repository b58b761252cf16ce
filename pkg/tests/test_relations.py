from random import Random

import pytest

from app.models.relation import BlockRelations, RelationKind, RelationSet, Side
from app.models.scalar import ONE, Q, T, Scalar
from app.models.tensor import Block, BraidingMatrix, TensorElement, block, multidegrees
from app.services import linalg_service
from app.services.braid_service import random_braiding
from app.services.calculus_service import quantum_serre
from app.services.relation_service import RelationService, normalize_relation
from app.utils.exceptions import BadParameters, VerificationFailure
from app.utils.formatting import parse_scalar
from tests.conftest import EXAMPLE_P4


def test_normalize_relation_scales_the_largest_word():
    x = TensorElement.from_pairs([((1, 2), Q), ((2, 1), ONE)])
    normalized, factor = normalize_relation(x)
    assert normalized.coefficient((2, 1)) == ONE
    assert normalized.coefficient((1, 2)) == Q
    assert factor == ONE


def test_normalize_relation_clears_denominators():
    x = TensorElement.from_pairs([((2, 1), ONE), ((1, 2), ONE / (T + 1))])
    normalized, factor = normalize_relation(x)
    assert factor == T + 1
    assert all(c.is_laurent for _, c in normalized.items())
    assert normalized == x.scale(factor)


def test_degree2_relations():
    braiding = BraidingMatrix((
        (-ONE, Q, Q),
        (Q.inverse(), Q, T),
        (Q, T, Scalar.t_power(3)),
    ))
    relations = RelationService(braiding).degree2_relations()
    assert relations.kind == RelationKind.DEGREE2
    assert relations.block((2, 0, 0)).relations == (TensorElement.from_word((1, 1)),)
    commutator = TensorElement.from_word((1, 2)) - TensorElement.from_word((2, 1), Q)
    assert relations.block((1, 1, 0)).relations == (commutator,)
    assert relations.block((0, 1, 1)) is None
    assert relations.dimension == 2


@pytest.mark.parametrize("seed", range(50))
def test_degree2_relations_are_the_symmetrizer_kernel(seed):
    rng = Random(seed)
    braiding = random_braiding(3, rng, 2, signs=True, unit_pairs=True)
    service = RelationService(braiding)
    relations = service.degree2_relations()
    for md in multidegrees(3, 2):
        found = relations.block(md)
        space = found.space if found else linalg_service.zero_space(block(3, md))
        assert space == service.symmetrizer_kernel(md)


def test_a2_serre_prerelations(a2_braiding):
    service = RelationService(a2_braiding, workers=1)
    relations = service.prerelations(3)
    assert relations.dimensions() == {(1, 2): 1, (2, 1): 1}
    calculus = service.calculus
    for b in relations.blocks:
        x = b.relations[0]
        assert service.apply("Tn", x) == TensorElement()
        assert service.apply("Pn", b.witnesses[0]) == x
        assert all(not calculus.dR(i, x) for i in (1, 2))
    expected = normalize_relation(quantum_serre(a2_braiding, 1, 2, 2))[0]
    assert relations.block((2, 1)).relations[0] == expected


def test_a2_constants_contain_quantum_serre(a2_braiding):
    service = RelationService(a2_braiding, workers=1)
    constants = service.constants(3)
    found = constants.block((2, 1))
    serre = quantum_serre(a2_braiding, 1, 2, 2)
    assert linalg_service.contains(found.space, serre.to_vector(found.space.block))


def test_left_constants_are_killed_by_left_derivations(a2_braiding):
    service = RelationService(a2_braiding, workers=1)
    for b in service.constants(3, Side.LEFT).blocks:
        for x in b.relations:
            assert all(not service.calculus.dL(i, x) for i in (1, 2))


def test_example_prerelation_block(example_braiding):
    service = RelationService(example_braiding, workers=1)
    found = service.block_prerelations(4, Side.RIGHT, (1, 0, 3))
    assert found.dimension == 1
    assert found.relations[0].format("F") == EXAMPLE_P4
    assert found.relations[0].coefficient((1, 3, 3, 3)) == parse_scalar("-q^-3")


def test_theta_pruning(example_braiding):
    service = RelationService(example_braiding, workers=1)
    assert service.braid.theta_scalar((0, 0, 4)) != ONE
    assert service.block_prerelations(4, Side.RIGHT, (0, 0, 4)) is None
    for b in service.prerelations(3).blocks:
        assert service.braid.theta_scalar(b.multidegree) == ONE


def test_relations_need_degree_two(a2_braiding):
    with pytest.raises(BadParameters):
        RelationService(a2_braiding).prerelations(1)


@pytest.mark.parametrize("kind", [RelationKind.CONSTANT, RelationKind.PRERELATION])
def test_garside_balance(a2_braiding, b2_braiding, kind):
    for braiding in (a2_braiding, b2_braiding):
        for n in (2, 3):
            report = RelationService(braiding, workers=1).balance_check(n, kind)
            assert all(b.balanced and b.right_dimension == b.left_dimension for b in report)


@pytest.mark.slow
@pytest.mark.parametrize("kind", [RelationKind.CONSTANT, RelationKind.PRERELATION])
def test_garside_balance_on_four_strands(a2_braiding, b2_braiding, kind):
    for braiding in (a2_braiding, b2_braiding):
        report = RelationService(braiding, workers=1).balance_check(4, kind)
        assert all(b.balanced and b.right_dimension == b.left_dimension for b in report)


def test_nichols_dimensions(minus_one_braiding):
    exterior = RelationService(minus_one_braiding).nichols_dims(3)
    assert [d.total for d in exterior] == [1, 2, 1, 0]
    symmetric = RelationService(BraidingMatrix(((ONE, ONE), (ONE, ONE)))).nichols_dims(3)
    assert [d.total for d in symmetric] == [1, 2, 3, 4]


def test_ideal_component(a2_braiding):
    service = RelationService(a2_braiding)
    generator = TensorElement.from_word((1, 1))
    space = service.ideal_component([generator], (3, 0))
    assert space.dimension == 1
    space = service.ideal_component([generator], (2, 1))
    # v1 v1 v2 and v2 v1 v1
    assert space.dimension == 2


def test_integration_check(a2_braiding):
    service = RelationService(a2_braiding)
    serre = quantum_serre(a2_braiding, 1, 2, 2)
    assert service.integration_check(serre, [])
    assert not service.integration_check(TensorElement.from_word((1, 2)), [])


def test_redundant_relations(minus_one_braiding):
    service = RelationService(minus_one_braiding, workers=1)
    degree2 = service.constants(2)
    degree3 = service.constants(3)
    flagged = service.redundant_relations([degree2, degree3])
    # every degree-3 constant of the exterior algebra lies in the degree-2 ideal
    assert len(flagged) == degree3.dimension
    assert all(degree == 3 for degree, _, _ in flagged)


def test_verify_relations(a2_braiding):
    service = RelationService(a2_braiding, workers=1)
    relations = service.prerelations(3)
    service.verify_relations(relations)

    broken_block = relations.blocks[0]
    tampered = broken_block.relations[0] + TensorElement.from_word(broken_block.relations[0].words()[0])
    bad = RelationSet(
        relations.side,
        relations.kind,
        relations.degree,
        (BlockRelations(broken_block.multidegree, broken_block.space, (tampered,), broken_block.witnesses),),
    )
    with pytest.raises(VerificationFailure):
        service.verify_relations(bad)


@pytest.mark.slow
def test_parallel_blocks_match_serial(example_braiding):
    serial = RelationService(example_braiding, workers=1).prerelations(4)
    parallel = RelationService(example_braiding, workers=2).prerelations(4)
    assert serial.dimensions() == parallel.dimensions()
    for b in serial.blocks:
        assert parallel.block(b.multidegree).relations == b.relations


@pytest.mark.slow
def test_symmetrizer_kernel_is_generated_by_lower_relations(random_braidings):
    for braiding in random_braidings:
        service = RelationService(braiding, workers=1)
        generators = []
        for n in (2, 3, 4):
            generators += service.constants(n).elements()
            for md in multidegrees(2, n):
                kernel = service.symmetrizer_kernel(md)
                ideal = service.ideal_component(generators, md)
                assert kernel == ideal


@pytest.mark.slow
def test_symmetrizer_kernel_is_generated_by_prerelations(a2_braiding):
    service = RelationService(a2_braiding, workers=1)
    generators = []
    for n in (2, 3, 4):
        generators += service.prerelations(n).elements()
        for md in multidegrees(2, n):
            assert service.symmetrizer_kernel(md) == service.ideal_component(generators, md)


@pytest.mark.parametrize(
    "braiding, degree, md",
    [("a2_braiding", 3, (2, 1)), ("a2_braiding", 3, (1, 2)), ("example_braiding", 4, (1, 0, 3))],
)
def test_prerelation_span_survives_basis_permutation(request, braiding, degree, md):
    service = RelationService(request.getfixturevalue(braiding), workers=1)
    found = service.block_prerelations(degree, Side.RIGHT, md)
    b = block(service.n_letters, md)
    permuted = Block(b.degree, b.multidegree, tuple(reversed(b.basis)))
    matrix = linalg_service.operator_matrix(service.braid, service.operator("TnPrime", degree), permuted)
    images = [service.apply("Pn", x) for x in linalg_service.kernel(matrix, permuted).elements()]
    assert linalg_service.span_elements(b, images) == found.space


@pytest.mark.slow
def test_prerelations_integrate_into_lower_ideal(a2_braiding, b2_braiding):
    for braiding in (a2_braiding, b2_braiding):
        service = RelationService(braiding, workers=1)
        lower = []
        for n in (2, 3, 4, 5):
            relations = service.prerelations(n).elements()
            assert all(service.integration_check(x, lower) for x in relations)
            lower += relations
