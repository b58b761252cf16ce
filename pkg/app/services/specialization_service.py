from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from app.models.classical import (
    AveragedMatrix,
    CartanLike,
    CartanMatrix,
    ClassicalElement,
    ClassicalWord,
)
from app.models.scalar import Scalar
from app.models.tensor import BraidingMatrix, TensorElement, block
from app.schemas.matrix import MatrixFile
from app.services.linalg_service import rref_rational
from app.utils.exceptions import (
    BadParameters,
    DegreeMismatch,
    DenominatorVanishesAtOne,
    NotInA1,
)

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    NOT_IN_RADICAL = "NotInRadical"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class WitnessResult:
    verdict: Verdict
    chain: Tuple[int, ...] = ()
    terminal: Optional[ClassicalElement] = None
    steps: Tuple[ClassicalElement, ...] = ()
    h_residues: Tuple[ClassicalElement, ...] = field(default=(), compare=False)


def average(cartan: CartanMatrix) -> AveragedMatrix:
    n = cartan.size
    return AveragedMatrix(tuple(
        tuple(Fraction(cartan.entries[i][j] + cartan.entries[j][i], 2) for j in range(n))
        for i in range(n)
    ))


def braiding_from_cartan(matrix: CartanLike, side: str = "negative") -> BraidingMatrix:
    """q_ij = q^(c_ij) on the negative side, q^(-c_ij) on the positive side."""
    if side not in ("negative", "positive"):
        raise BadParameters(f"Unknown side '{side}'")
    sign = 1 if side == "negative" else -1
    n = matrix.size
    # t = q^(1/2): the t-exponent of q^c is 2c, an integer for half-integral c
    doubled = [[sign * int(2 * matrix.c(i, j)) for j in range(1, n + 1)] for i in range(1, n + 1)]
    origin = "averaged" if isinstance(matrix, AveragedMatrix) else "cartan"
    return BraidingMatrix.from_t_exponents(doubled, origin)


def braiding_from_file(matrix_file: MatrixFile) -> BraidingMatrix:
    if matrix_file.cartan is not None:
        cartan = CartanMatrix.from_rows(matrix_file.cartan)
        source = average(cartan) if matrix_file.average else cartan
        return braiding_from_cartan(source, matrix_file.side)
    return BraidingMatrix.from_t_exponents(matrix_file.braiding_exponents_doubled)


def cartan_from_file(matrix_file: MatrixFile) -> Optional[CartanMatrix]:
    if matrix_file.cartan is None:
        return None
    return CartanMatrix.from_rows(matrix_file.cartan)


def specialize_element(x: TensorElement) -> ClassicalElement:
    """Evaluate every coefficient at t = 1 and read words as f-words."""
    pairs = []
    for word, coeff in x.items():
        try:
            pairs.append((word, coeff.eval_at_one()))
        except DenominatorVanishesAtOne:
            raise NotInA1(f"Coefficient {coeff} of {word} has a pole at q = 1")
    return ClassicalElement.from_f_pairs(pairs)


def _move_h_right(cartan: CartanLike, h_word: Sequence[int], f_word: Sequence[int]) -> Dict[Tuple[int, ...], Fraction]:
    """Expand h_word * f_word = f_word * prod_j (h_j - sum_a c_ja)."""
    expanded: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
    for j in h_word:
        shift = sum(Fraction(cartan.c(j, a)) for a in f_word)
        step: Dict[Tuple[int, ...], Fraction] = {}
        for key, c in expanded.items():
            kept = key + (j,)
            step[kept] = step.get(kept, Fraction(0)) + c
            if shift:
                step[key] = step.get(key, Fraction(0)) - shift * c
        expanded = step
    return expanded


def classical_product(cartan: CartanLike, x: ClassicalElement, y: ClassicalElement) -> ClassicalElement:
    """Product in normal form, using h_j f_k = f_k (h_j - c_jk)."""
    terms: Dict[ClassicalWord, Fraction] = {}
    for (f1, h1), a in x.items():
        for (f2, h2), b in y.items():
            for h_mid, c in _move_h_right(cartan, h1, f2).items():
                key = (f1 + f2, tuple(sorted(h_mid + h2)))
                terms[key] = terms.get(key, Fraction(0)) + a * b * c
    return ClassicalElement(terms)


def ad_e(cartan: CartanLike, i: int, u: ClassicalElement) -> ClassicalElement:
    """[e_i, u] for a pure-f element u, in normal form."""
    if not u.is_pure_f:
        raise BadParameters("ad_e expects an element without h-letters")
    if not 1 <= i <= cartan.size:
        raise BadParameters(f"Index {i} outside 1..{cartan.size}")
    terms: Dict[ClassicalWord, Fraction] = {}
    for (f, _), coeff in u.items():
        for p, a in enumerate(f):
            if a != i:
                continue
            rest = f[:p] + f[p + 1:]
            tail = f[p + 1:]
            shift = sum(Fraction(cartan.c(i, b)) for b in tail)
            terms[(rest, (i,))] = terms.get((rest, (i,)), Fraction(0)) + coeff
            if shift:
                terms[(rest, ())] = terms.get((rest, ()), Fraction(0)) - shift * coeff
    return ClassicalElement(terms)


def ad_f(i: int, y: ClassicalElement) -> ClassicalElement:
    """[f_i, y] on pure-f elements."""
    terms: Dict[ClassicalWord, Fraction] = {}
    for (f, h), c in y.items():
        if h:
            raise BadParameters("ad_f expects an element without h-letters")
        left = ((i,) + f, ())
        right = (f + (i,), ())
        terms[left] = terms.get(left, Fraction(0)) + c
        terms[right] = terms.get(right, Fraction(0)) - c
    return ClassicalElement(terms)


def serre_elements(cartan: CartanLike) -> List[Tuple[int, int, ClassicalElement]]:
    """(ad f_i)^(1 - c_ij)(f_j) for i != j with an integral exponent."""
    found = []
    for i in range(1, cartan.size + 1):
        for j in range(1, cartan.size + 1):
            if i == j:
                continue
            power = 1 - Fraction(cartan.c(i, j))
            if power.denominator != 1:
                logger.debug(f"No Serre element for ({i},{j}): exponent {power}")
                continue
            x = ClassicalElement.from_f_word((j,))
            for _ in range(int(power)):
                x = ad_f(i, x)
            found.append((i, j, x))
    return found


def serre_ideal_member(cartan: CartanLike, u: ClassicalElement, degree: int) -> bool:
    """Exact test of u in the two-sided ideal generated by the Serre elements."""
    if not u.is_pure_f or (u and u.f_degrees() != {degree}):
        raise DegreeMismatch(f"Expected a pure-f element of degree {degree}")
    generators = [s for _, _, s in serre_elements(cartan)]
    n = cartan.size
    for md, part in u.f_multidegrees(n).items():
        vectors = []
        for s in generators:
            for s_md, s_part in s.f_multidegrees(n).items():
                rest = [a - b for a, b in zip(md, s_md)]
                if any(r < 0 for r in rest):
                    continue
                for word in _words_with(rest):
                    for k in range(len(word) + 1):
                        vectors.append(_concat(word[:k], s_part, word[k:]))
        if not _in_span(vectors, part):
            return False
    return True


def _words_with(counts: Sequence[int]) -> List[Tuple[int, ...]]:
    return list(block(len(counts), tuple(counts)).basis)


def _concat(left: Tuple[int, ...], middle: ClassicalElement, right: Tuple[int, ...]) -> Dict[Tuple[int, ...], Fraction]:
    return {left + f + right: c for (f, _), c in middle.items()}


def _in_span(vectors: List[Dict[Tuple[int, ...], Fraction]], target: ClassicalElement) -> bool:
    target_terms = {f: c for (f, _), c in target.items()}
    if not target_terms:
        return True
    if not vectors:
        return False
    words = sorted(set(target_terms).union(*vectors))
    index = {w: k for k, w in enumerate(words)}

    def dense(v):
        row = [Fraction(0)] * len(words)
        for w, c in v.items():
            row[index[w]] = c
        return row

    rows = [dense(v) for v in vectors]
    base = len(rref_rational(rows, len(words))[1])
    return len(rref_rational(rows + [dense(target_terms)], len(words))[1]) == base


def r_minus_witness(cartan: CartanLike, u: ClassicalElement, depth_max: int) -> WitnessResult:
    """Search chains of ad e_i for a nonzero height-1 image.

    Breadth first; each node tries its previous index first, then the others
    in ascending order.  Branches whose pure-f part vanishes are pruned; the
    h-components met along the way are returned as residues.
    """
    if not u.is_pure_f:
        raise BadParameters("The witness search expects a pure-f element")
    if not u:
        return WitnessResult(Verdict.INCONCLUSIVE)
    if u.f_degrees() == {1}:
        return WitnessResult(Verdict.NOT_IN_RADICAL, (), u)

    queue = deque([((), u, (), ())])
    while queue:
        chain, current, steps, residues = queue.popleft()
        if len(chain) >= depth_max:
            continue
        previous = chain[-1] if chain else None
        order = ([previous] if previous else []) + [
            i for i in range(1, cartan.size + 1) if i != previous
        ]
        for i in order:
            image = ad_e(cartan, i, current)
            pure = image.pure_f_part()
            if not pure:
                continue
            new_chain = chain + (i,)
            new_steps = steps + (pure,)
            new_residues = residues + (image.h_part(),)
            if pure.f_degrees() == {1}:
                logger.info(f"Witness chain {list(new_chain)} reaches {pure}")
                return WitnessResult(Verdict.NOT_IN_RADICAL, new_chain, pure, new_steps, new_residues)
            queue.append((new_chain, pure, new_steps, new_residues))
    logger.info(f"No witness chain up to depth {depth_max}")
    return WitnessResult(Verdict.INCONCLUSIVE)


def twist_degree2(original: BraidingMatrix, target: BraidingMatrix, x: TensorElement) -> TensorElement:
    """psi(v_i v_j) = q'_ij q_ij^-1 v_i v_j for i <= j and v_i v_j otherwise."""
    terms: Dict[Tuple[int, ...], Scalar] = {}
    for word, coeff in x.items():
        if len(word) != 2:
            raise DegreeMismatch("The twist map is only defined in degree 2")
        i, j = word
        if i <= j:
            coeff = coeff * target.q(i, j) * original.q_inv(i, j)
        terms[word] = coeff
    return TensorElement(terms)
