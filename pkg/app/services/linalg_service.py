from fractions import Fraction
from typing import List, Sequence, Tuple
import logging

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from app.models.braid import BraidOperator
from app.models.linalg import ScalarMatrix, Subspace, Vector
from app.models.scalar import FIELD, ONE, ZERO, Scalar, to_fraction, to_qq
from app.models.tensor import Block, TensorElement
from app.services.braid_service import BraidService
from app.utils.exceptions import BadParameters, DegreeMismatch, NotSubspace

logger = logging.getLogger(__name__)


def _rref_field(rows: Sequence[Sequence[Scalar]], cols: int) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Nonzero RREF rows and pivot columns over Q(t)."""
    if not rows:
        return [], ()
    data = [[c.to_field() if c else FIELD.zero for c in row] for row in rows]
    reduced, pivots = DomainMatrix(data, (len(data), cols), FIELD).rref()
    result = []
    for row in reduced.to_list()[:len(pivots)]:
        result.append(tuple(Scalar.from_field(c) if c else ZERO for c in row))
    return result, tuple(pivots)


def rref_rational(rows: Sequence[Sequence[Fraction]], cols: int) -> Tuple[List[Tuple[Fraction, ...]], Tuple[int, ...]]:
    """Nonzero RREF rows and pivot columns over Q."""
    if not rows:
        return [], ()
    data = [[to_qq(c) for c in row] for row in rows]
    reduced, pivots = DomainMatrix(data, (len(data), cols), QQ).rref()
    return (
        [tuple(to_fraction(c) for c in row) for row in reduced.to_list()[:len(pivots)]],
        tuple(pivots),
    )


def rational_rank(rows: Sequence[Sequence[Fraction]], cols: int) -> int:
    return len(rref_rational(rows, cols)[1])


def _null_vectors(reduced: List[Vector], pivots: Tuple[int, ...], cols: int) -> List[Vector]:
    free = [j for j in range(cols) if j not in pivots]
    vectors = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for row, p in zip(reduced, pivots):
            if row[f]:
                v[p] = -row[f]
        vectors.append(tuple(v))
    return vectors


def span(block: Block, vectors: Sequence[Sequence[Scalar]]) -> Subspace:
    """RREF subspace spanned by coordinate vectors on ``block``."""
    vectors = [tuple(v) for v in vectors if any(v)]
    for v in vectors:
        if len(v) != block.size:
            raise BadParameters(f"Vector of length {len(v)} on a block of size {block.size}")
    basis, pivots = _rref_field(vectors, block.size)
    return Subspace(block, tuple(basis), pivots)


def span_elements(block: Block, elements: Sequence[TensorElement]) -> Subspace:
    return span(block, [x.to_vector(block) for x in elements])


def zero_space(block: Block) -> Subspace:
    return Subspace(block, (), ())


def full_space(block: Block) -> Subspace:
    return span(block, ScalarMatrix.identity(block.size).entries)


def operator_matrix(braid: BraidService, op: BraidOperator, block: Block) -> ScalarMatrix:
    """Column j is the image of basis word j."""
    if op.strand_count != block.degree:
        raise DegreeMismatch(
            f"Operator on {op.strand_count} strands for a block of degree {block.degree}"
        )
    columns = [
        braid.apply_operator(op, TensorElement.from_word(word)).to_vector(block)
        for word in block.basis
    ]
    return ScalarMatrix.from_columns(columns, block.size)


def kernel(matrix: ScalarMatrix, block: Block) -> Subspace:
    """Right null space of ``matrix`` as a subspace of ``block``."""
    if matrix.cols != block.size:
        raise BadParameters(f"{matrix.cols} columns for a block of size {block.size}")
    reduced, pivots = _rref_field(matrix.entries, matrix.cols)
    return span(block, _null_vectors(reduced, pivots, matrix.cols))


def rank(matrix: ScalarMatrix) -> int:
    return len(_rref_field(matrix.entries, matrix.cols)[1])


def contains(space: Subspace, vector: Sequence[Scalar]) -> bool:
    if not any(vector):
        return True
    return span(space.block, list(space.basis) + [tuple(vector)]).dimension == space.dimension


def contains_space(space: Subspace, other: Subspace) -> bool:
    _same_block(space, other)
    return span(space.block, list(space.basis) + list(other.basis)).dimension == space.dimension


def _same_block(u: Subspace, w: Subspace):
    if u.block != w.block:
        raise BadParameters(
            f"Subspaces live in different blocks {u.block.multidegree} and {w.block.multidegree}"
        )


def sum_spaces(u: Subspace, w: Subspace) -> Subspace:
    _same_block(u, w)
    return span(u.block, list(u.basis) + list(w.basis))


def intersect(u: Subspace, w: Subspace) -> Subspace:
    """Exact intersection through the null space of [U^T | -W^T]."""
    _same_block(u, w)
    if not u or not w:
        return zero_space(u.block)
    n = u.block.size
    columns = list(u.basis) + [tuple(-c for c in v) for v in w.basis]
    stacked = ScalarMatrix.from_columns(columns, n)
    reduced, pivots = _rref_field(stacked.entries, stacked.cols)
    vectors = []
    for combo in _null_vectors(reduced, pivots, stacked.cols):
        vector = [ZERO] * n
        for a, basis_vector in zip(combo[:u.dimension], u.basis):
            if a:
                vector = [x + a * y for x, y in zip(vector, basis_vector)]
        vectors.append(vector)
    return span(u.block, vectors)


def complement_in(u: Subspace, w: Subspace) -> Subspace:
    """Span of the basis vectors of ``u`` that extend ``w`` to ``u``, taken greedily
    in RREF order."""
    _same_block(u, w)
    if not contains_space(u, w):
        raise NotSubspace(f"Subspace of dimension {w.dimension} is not contained in the given space")
    chosen: List[Vector] = []
    current = w
    for v in u.basis:
        if current.dimension == u.dimension:
            break
        extended = span(u.block, list(current.basis) + [v])
        if extended.dimension > current.dimension:
            chosen.append(v)
            current = extended
    return span(u.block, chosen)


def coordinates_in(space: Subspace, vector: Sequence[Scalar]) -> Vector:
    """Coordinates of ``vector`` in the RREF basis; read off at the pivots."""
    coords = tuple(vector[p] for p in space.pivots)
    rebuilt = [ZERO] * space.ambient_dimension
    for a, basis_vector in zip(coords, space.basis):
        if a:
            rebuilt = [x + a * y for x, y in zip(rebuilt, basis_vector)]
    if tuple(rebuilt) != tuple(vector):
        raise NotSubspace("Vector does not lie in the subspace")
    return coords


def image(matrix: ScalarMatrix, space: Subspace) -> Subspace:
    return span(space.block, [matrix.apply(v) for v in space.basis])
