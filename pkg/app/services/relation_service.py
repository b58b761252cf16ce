from typing import Dict, List, Optional, Sequence, Tuple
import logging

from app.core.config import settings
from app.models.braid import BraidOperator
from app.models.linalg import ScalarMatrix, Subspace
from app.models.relation import (
    BlockBalance,
    BlockRelations,
    DegreeDimensions,
    RelationKind,
    RelationSet,
    Side,
)
from app.models.scalar import ONE, Laurent, Scalar
from app.models.tensor import (
    BraidingMatrix,
    Multidegree,
    TensorElement,
    block,
    multidegree,
    multidegrees,
)
from app.services import linalg_service
from app.services.braid_service import BraidService, make_operator, x_left_operator, x_operator
from app.services.calculus_service import CalculusService
from app.utils.exceptions import BadParameters, VerificationFailure

logger = logging.getLogger(__name__)

# operator names per side: (annihilator, extraction, projector)
_SIDE_OPERATORS = {
    Side.RIGHT: ("Tn", "TnPrime", "Pn"),
    Side.LEFT: ("Un", "UnPrime", "Qn"),
}


def normalize_relation(x: TensorElement) -> Tuple[TensorElement, Scalar]:
    """Scale ``x`` so its largest word has coefficient 1, then clear
    non-Laurent denominators.  Returns the scaled element and the factor."""
    if not x:
        return x, ONE
    leading = max(word for word, _ in x.items())
    factor = x.coefficient(leading).inverse()
    scaled = x.scale(factor)
    denominators = [c.den for _, c in scaled.items() if not c.is_laurent]
    if denominators:
        common = denominators[0]
        for d in denominators[1:]:
            common = common.lcm(d)
        clearing = Scalar(Laurent(common))
        scaled = scaled.scale(clearing)
        factor = factor * clearing
    return scaled, factor


class RelationService:
    def __init__(self, braiding: BraidingMatrix, workers: Optional[int] = None):
        self.braiding = braiding
        self.n_letters = braiding.size
        self.braid = BraidService(braiding)
        self.calculus = CalculusService(braiding)
        self.workers = settings.WORKERS if workers is None else workers
        self._operators: Dict[Tuple[str, int, Optional[int]], BraidOperator] = {}
        self._matrices: Dict[Tuple[str, int, Optional[int], Multidegree], ScalarMatrix] = {}

    def operator(self, name: str, n: int, m: Optional[int] = None) -> BraidOperator:
        key = (name, n, m)
        if key not in self._operators:
            if name == "Xmn":
                self._operators[key] = x_operator(m, n)
            elif name == "XmnLeft":
                self._operators[key] = x_left_operator(m, n)
            else:
                self._operators[key] = make_operator(name, n)
        return self._operators[key]

    def block_matrix(self, name: str, md: Multidegree, m: Optional[int] = None) -> ScalarMatrix:
        n = sum(md)
        key = (name, n, m, tuple(md))
        if key not in self._matrices:
            b = block(self.n_letters, md)
            self._matrices[key] = linalg_service.operator_matrix(self.braid, self.operator(name, n, m), b)
        return self._matrices[key]

    def apply(self, name: str, x: TensorElement, m: Optional[int] = None) -> TensorElement:
        n = x.homogeneous_degree()
        if n is None:
            return TensorElement()
        return self.braid.apply_operator(self.operator(name, n, m), x)

    def _check_degree(self, n: int):
        if n < 2:
            raise BadParameters(f"Relations need degree >= 2, got {n}")

    def degree2_relations(self) -> RelationSet:
        """v_s v_t - q_st v_t v_s for every s <= t with q_st q_ts = 1."""
        q = self.braiding.q
        per_block: Dict[Multidegree, List[TensorElement]] = {}
        for s in range(1, self.n_letters + 1):
            for t in range(s, self.n_letters + 1):
                if q(s, t) * q(t, s) != ONE:
                    continue
                if s == t:
                    if q(s, s) == ONE:
                        continue
                    x = TensorElement.from_word((s, s))
                else:
                    x = TensorElement.from_word((s, t)) - TensorElement.from_word((t, s), q(s, t))
                md = multidegree((s, t), self.n_letters)
                per_block.setdefault(md, []).append(x)
        blocks = []
        for md, elements in sorted(per_block.items()):
            space = linalg_service.span_elements(block(self.n_letters, md), elements)
            blocks.append(BlockRelations(md, space, tuple(elements)))
        logger.info(f"Found {sum(len(b.relations) for b in blocks)} degree-2 relations")
        return RelationSet(Side.RIGHT, RelationKind.DEGREE2, 2, tuple(blocks))

    def _derivation_kernel(self, md: Multidegree, side: Side) -> Subspace:
        """Intersection of the kernels of all derivations on one block."""
        b = block(self.n_letters, md)
        return linalg_service.kernel(self.calculus.derivation_matrix(b, side.value), b)

    def block_constants(self, n: int, side: Side, md: Multidegree) -> Optional[BlockRelations]:
        annihilator = _SIDE_OPERATORS[side][0]
        b = block(self.n_letters, md)
        space = linalg_service.kernel(self.block_matrix(annihilator, md), b)
        if space != self._derivation_kernel(md, side):
            logger.error(f"Kernel of {annihilator} differs from the derivation kernel on {md}")
            raise VerificationFailure(
                f"Kernel of {annihilator} and common kernel of derivations differ on block {md}"
            )
        if not space:
            return None
        relations = tuple(normalize_relation(x)[0] for x in space.elements())
        logger.debug(f"Block {md}: {space.dimension} {side.value} constants")
        return BlockRelations(tuple(md), space, relations)

    def block_prerelations(self, n: int, side: Side, md: Multidegree) -> Optional[BlockRelations]:
        """Pre-relations of one block; the full span of the projector on the
        extraction kernel, each listed relation with its witness."""
        if self.braid.theta_scalar(md) != ONE:
            logger.debug(f"Block {md} skipped: full twist acts by {self.braid.theta_scalar(md)}")
            return None
        annihilator, extraction, projector = _SIDE_OPERATORS[side]
        guard = "Xmn" if side == Side.RIGHT else "XmnLeft"
        b = block(self.n_letters, md)

        k_space = linalg_service.kernel(self.block_matrix(extraction, md), b)
        if not k_space:
            return None
        if n == 2:
            k_zero = linalg_service.zero_space(b)
        else:
            guard_kernel = linalg_service.kernel(self.block_matrix(guard, md, n - 2), b)
            k_zero = linalg_service.intersect(k_space, guard_kernel)
        complement = linalg_service.complement_in(k_space, k_zero)
        if not complement:
            return None

        witnesses = [TensorElement.from_vector(b, v) for v in complement.basis]
        first = witnesses[0]
        witnesses += [first + TensorElement.from_vector(b, v) for v in k_zero.basis]

        relations: List[TensorElement] = []
        kept_witnesses: List[TensorElement] = []
        space = linalg_service.zero_space(b)
        for w in witnesses:
            image = self.apply(projector, w)
            if not image:
                continue
            extended = linalg_service.span(b, list(space.basis) + [image.to_vector(b)])
            if extended.dimension == space.dimension:
                continue
            if self.apply(annihilator, image):
                logger.error(f"{annihilator} does not annihilate a pre-relation on block {md}")
                raise VerificationFailure(f"Pre-relation on block {md} is not a constant")
            relation, factor = normalize_relation(image)
            relations.append(relation)
            kept_witnesses.append(w.scale(factor))
            space = extended
        if not relations:
            return None
        logger.debug(f"Block {md}: {len(relations)} {side.value} pre-relations")
        return BlockRelations(tuple(md), space, tuple(relations), tuple(kept_witnesses))

    def compute_block(self, kind: RelationKind, n: int, side: Side, md: Multidegree) -> Optional[BlockRelations]:
        if kind == RelationKind.CONSTANT:
            return self.block_constants(n, side, md)
        return self.block_prerelations(n, side, md)

    def _collect(self, kind: RelationKind, n: int, side: Side) -> RelationSet:
        self._check_degree(n)
        mds = multidegrees(self.n_letters, n)
        if self.workers > 1 and len(mds) > 1:
            from app.workers.block_worker import run_blocks
            found = run_blocks(self.braiding, kind, n, side, mds, self.workers)
        else:
            found = [self.compute_block(kind, n, side, md) for md in mds]
        blocks = tuple(sorted((b for b in found if b is not None), key=lambda b: b.multidegree))
        result = RelationSet(side, kind, n, blocks)
        logger.info(f"Computed {result.dimension} {side.value} {kind.value}s in degree {n}")
        return result

    def constants(self, n: int, side: Side = Side.RIGHT) -> RelationSet:
        return self._collect(RelationKind.CONSTANT, n, side)

    def prerelations(self, n: int, side: Side = Side.RIGHT) -> RelationSet:
        return self._collect(RelationKind.PRERELATION, n, side)

    def balance_check(self, n: int, kind: RelationKind = RelationKind.PRERELATION) -> List[BlockBalance]:
        """Compare the Garside image of the right set with the left set per block."""
        right = self._collect(kind, n, Side.RIGHT)
        left = self._collect(kind, n, Side.LEFT)
        report = []
        for md in sorted(set(right.dimensions()) | set(left.dimensions())):
            b = block(self.n_letters, md)
            r_block = right.block(md)
            l_block = left.block(md)
            r_space = r_block.space if r_block else linalg_service.zero_space(b)
            l_space = l_block.space if l_block else linalg_service.zero_space(b)
            moved = linalg_service.image(self.block_matrix("Garside", md), r_space)
            report.append(BlockBalance(md, r_space.dimension, l_space.dimension, moved == l_space))
        logger.info(f"Balance in degree {n}: {sum(b.balanced for b in report)}/{len(report)} blocks")
        return report

    def nichols_dims(self, n_max: int) -> List[DegreeDimensions]:
        """Rank of the total symmetrizer on every block up to ``n_max``."""
        if n_max < 0:
            raise BadParameters(f"Maximal degree must be >= 0, got {n_max}")
        result = []
        for n in range(n_max + 1):
            dims = {}
            for md in multidegrees(self.n_letters, n):
                b = block(self.n_letters, md)
                if n < 2:
                    dims[md] = b.size
                else:
                    dims[md] = linalg_service.rank(self.block_matrix("SnFactoredT", md))
            result.append(DegreeDimensions(n, dims))
            logger.info(f"Degree {n}: Nichols dimension {result[-1].total}")
        return result

    def symmetrizer_kernel(self, md: Multidegree) -> Subspace:
        b = block(self.n_letters, md)
        if sum(md) < 2:
            return linalg_service.zero_space(b)
        return linalg_service.kernel(self.block_matrix("SnFactoredT", md), b)

    def ideal_component(self, generators: Sequence[TensorElement], md: Multidegree) -> Subspace:
        """Span of u r w over words u, w and generators r, inside block ``md``."""
        target = block(self.n_letters, md)
        vectors = []
        for r in generators:
            for r_md, part in r.blocks(self.n_letters).items():
                rest = tuple(a - c for a, c in zip(md, r_md))
                if any(x < 0 for x in rest):
                    continue
                for word in block(self.n_letters, rest).basis:
                    for k in range(len(word) + 1):
                        u = TensorElement.from_word(word[:k])
                        w = TensorElement.from_word(word[k:])
                        vectors.append((u * part * w).to_vector(target))
        return linalg_service.span(target, vectors)

    def integration_check(self, relation: TensorElement, lower: Sequence[TensorElement]) -> bool:
        """True when every dR_i(relation) lies in the ideal spanned by ``lower``."""
        for i in range(1, self.n_letters + 1):
            for md, part in self.calculus.dR(i, relation).blocks(self.n_letters).items():
                space = self.ideal_component(lower, md)
                if not linalg_service.contains(space, part.to_vector(space.block)):
                    logger.warning(f"dR_{i} of a relation leaves the ideal on block {md}")
                    return False
        return True

    def redundant_relations(self, sets: Sequence[RelationSet]) -> List[Tuple[int, Multidegree, int]]:
        """Relations lying in the ideal generated by lower-degree output."""
        flagged = []
        ordered = sorted(sets, key=lambda s: s.degree)
        for current in ordered:
            lower = [x for s in ordered if s.degree < current.degree for x in s.elements()]
            if not lower:
                continue
            for b in current.blocks:
                space = self.ideal_component(lower, b.multidegree)
                for index, x in enumerate(b.relations):
                    if linalg_service.contains(space, x.to_vector(space.block)):
                        flagged.append((current.degree, b.multidegree, index))
        logger.info(f"{len(flagged)} relations are generated by lower degrees")
        return flagged

    def verify_relations(self, relation_set: RelationSet):
        """Re-check annihilation (and witnesses) of a loaded relation set."""
        annihilator, _, projector = _SIDE_OPERATORS[relation_set.side]
        for b in relation_set.blocks:
            for index, x in enumerate(b.relations):
                if x.homogeneous_degree() != relation_set.degree:
                    raise VerificationFailure(f"Relation {index} of block {b.multidegree} has the wrong degree")
                if self.apply(annihilator, x):
                    logger.error(f"Loaded relation {index} of block {b.multidegree} is not annihilated")
                    raise VerificationFailure(
                        f"Relation {index} of block {b.multidegree} is not killed by {annihilator}"
                    )
            for index, w in enumerate(b.witnesses):
                if self.apply(projector, w) != b.relations[index]:
                    raise VerificationFailure(
                        f"Witness {index} of block {b.multidegree} does not reproduce its relation"
                    )
        logger.info(f"Verified {relation_set.dimension} relations of degree {relation_set.degree}")
