from itertools import permutations
from random import Random
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import re

from app.models.braid import BraidOperator, BraidWord
from app.models.scalar import ONE, ZERO, Scalar
from app.models.tensor import BraidingMatrix, Multidegree, TensorElement, Word
from app.utils.exceptions import BadParameters, DegreeMismatch, DegreeTooSmall, UnknownName

logger = logging.getLogger(__name__)


class BraidService:
    def __init__(self, braiding: BraidingMatrix):
        self.braiding = braiding
        self._swaps: Dict[Tuple[Word, int, int], Tuple[Word, Scalar]] = {}

    def _swap(self, word: Word, i: int, sign: int) -> Tuple[Word, Scalar]:
        key = (word, i, sign)
        cached = self._swaps.get(key)
        if cached is None:
            a, b = word[i - 1], word[i]
            factor = self.braiding.q(a, b) if sign > 0 else self.braiding.q_inv(b, a)
            cached = (word[:i - 1] + (b, a) + word[i + 1:], factor)
            self._swaps[key] = cached
        return cached

    def apply_generator(self, i: int, x: TensorElement, sign: int = 1) -> TensorElement:
        """Apply sigma_i (or its inverse) at positions i, i+1."""
        terms: Dict[Word, Scalar] = {}
        for word, coeff in x.items():
            if len(word) < i + 1:
                raise DegreeTooSmall(f"sigma_{i} needs degree >= {i + 1}, got {len(word)}")
            new_word, factor = self._swap(word, i, sign)
            terms[new_word] = terms.get(new_word, ZERO) + factor * coeff
        return TensorElement(terms)

    def apply_word_to_word(self, gens: BraidWord, word: Word) -> Tuple[Word, Scalar]:
        """Image of a single word under a braid word, applied right to left."""
        factor = ONE
        for i, sign in reversed(gens):
            word, f = self._swap(word, i, sign)
            factor = factor * f
        return word, factor

    def apply_operator(self, op: BraidOperator, x: TensorElement) -> TensorElement:
        """Apply a braid operator; products are applied factor by factor."""
        degree = x.homogeneous_degree()
        if x and degree != op.strand_count:
            raise DegreeMismatch(
                f"Operator on {op.strand_count} strands applied to degrees {sorted(x.degrees())}"
            )
        if op.factors:
            result = x
            for factor in reversed(op.factors):
                result = self.apply_operator(factor, result)
            return result
        terms: Dict[Word, Scalar] = {}
        for word, coeff in x.items():
            for gens, c in op.terms.items():
                image, factor = self.apply_word_to_word(gens, word)
                terms[image] = terms.get(image, ZERO) + c * factor * coeff
        return TensorElement(terms)

    def theta_scalar(self, md: Multidegree) -> Scalar:
        """Scalar by which the full twist acts on the block ``md``."""
        q = self.braiding.q
        result = ONE
        for k, m in enumerate(md, start=1):
            if m > 1:
                result = result * q(k, k) ** (m * (m - 1))
        for p in range(1, len(md) + 1):
            for r in range(p + 1, len(md) + 1):
                if md[p - 1] and md[r - 1]:
                    result = result * (q(p, r) * q(r, p)) ** (md[p - 1] * md[r - 1])
        return result


def permutation_of(word: BraidWord, n: int) -> Tuple[int, ...]:
    """Underlying permutation (one-line, 1-based) of a braid word.

    The word ``s_i1 ... s_ik`` maps to the product ``s_i1 o ... o s_ik``;
    right multiplication by ``s_i`` swaps the entries at positions i, i+1.
    """
    result = list(range(1, n + 1))
    for i, _ in word:
        result[i - 1], result[i] = result[i], result[i - 1]
    return tuple(result)


def matsumoto_lift(p: Sequence[int]) -> BraidWord:
    """Reduced positive braid word for a permutation in one-line notation."""
    current = list(p)
    recorded: List[int] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(current) - 1):
            if current[i] > current[i + 1]:
                current[i], current[i + 1] = current[i + 1], current[i]
                recorded.append(i + 1)
                changed = True
    return tuple((i, 1) for i in reversed(recorded))


def _inverse_permutation(p: Sequence[int]) -> Tuple[int, ...]:
    inverse = [0] * len(p)
    for position, image in enumerate(p, start=1):
        inverse[image - 1] = position
    return tuple(inverse)


def alternate_lift(p: Sequence[int]) -> BraidWord:
    """A second reduced word for ``p``: the reversed lift of its inverse."""
    return tuple(reversed(matsumoto_lift(_inverse_permutation(p))))


def _binomial(n: int, word: Sequence[int]) -> BraidOperator:
    """The factor (1 - word)."""
    return BraidOperator(n, {(): ONE, tuple((i, 1) for i in word): -ONE})


def _product(n: int, factors: List[BraidOperator]) -> BraidOperator:
    if not factors:
        return BraidOperator.identity(n)
    if len(factors) == 1:
        return factors[0]
    return BraidOperator(n, factors=factors)


def _sum_of_words(n: int, words: List[List[int]]) -> BraidOperator:
    terms: Dict[BraidWord, Scalar] = {}
    for word in words:
        key = tuple((i, 1) for i in word)
        terms[key] = terms.get(key, ZERO) + ONE
    return BraidOperator(n, terms)


def t_operator(k: int, n: int) -> BraidOperator:
    """T_k = 1 + s_{k-1} + s_{k-1}s_{k-2} + ... on the first k of n strands."""
    return _sum_of_words(n, [list(range(k - 1, j - 1, -1)) for j in range(k, 0, -1)])


def u_operator(k: int, n: int) -> BraidOperator:
    """U_k = 1 + s_o + s_os_(o+1) + ... on the last k of n strands, o = n-k+1."""
    offset = n - k
    return _sum_of_words(n, [list(range(offset + 1, offset + j)) for j in range(1, k + 1)])


def x_operator(m: int, n: int) -> BraidOperator:
    """X_{m,n}: T'_{m+1} embedded on the last m+1 strands."""
    if not 0 <= m <= n - 1:
        raise BadParameters(f"X_(m,n) needs 0 <= m <= n-1, got m={m}, n={n}")
    return _product(n, [
        _binomial(n, [n - 1] + list(range(n - 1, k - 1, -1))) for k in range(n - m, n)
    ])


def x_left_operator(m: int, n: int) -> BraidOperator:
    """Mirror of X_{m,n}: U'_{m+1} on the first m+1 strands."""
    if not 0 <= m <= n - 1:
        raise BadParameters(f"X_(m,n) needs 0 <= m <= n-1, got m={m}, n={n}")
    return _product(n, [_binomial(n, [1] + list(range(1, j + 1))) for j in range(m, 0, -1)])


def garside_word(n: int) -> List[int]:
    word: List[int] = []
    for k in range(n - 1, 0, -1):
        word.extend(range(1, k + 1))
    return word


_NAME_WITH_PARAM = re.compile(r"^(Xmn|XmnLeft)\((\d+)\)$")


def make_operator(name: str, n: int, m: Optional[int] = None) -> BraidOperator:
    """Named operator of K[B_n]; ``Xmn`` takes ``m`` or the form ``Xmn(2)``."""
    match = _NAME_WITH_PARAM.match(name)
    if match:
        name, m = match.group(1), int(match.group(2))
    if n < 2:
        raise BadParameters(f"Operator {name} needs n >= 2, got {n}")

    if name == "Tn":
        return t_operator(n, n)
    if name == "Un":
        return u_operator(n, n)
    if name == "Pn":
        return _product(n, [_binomial(n, list(range(n - 1, k - 1, -1))) for k in range(1, n)])
    if name == "Qn":
        return _product(n, [_binomial(n, list(range(1, n - k + 1))) for k in range(1, n)])
    if name == "TnPrime":
        return x_operator(n - 1, n)
    if name == "UnPrime":
        return x_left_operator(n - 1, n)
    if name == "Garside":
        return BraidOperator.from_word(n, garside_word(n))
    if name == "Theta":
        return BraidOperator.from_word(n, garside_word(n) * 2)
    if name in ("Xmn", "XmnLeft"):
        if m is None:
            raise BadParameters(f"{name} needs the parameter m")
        if not 1 <= m <= n - 1:
            raise BadParameters(f"{name} needs 1 <= m <= n-1, got m={m}, n={n}")
        return x_operator(m, n) if name == "Xmn" else x_left_operator(m, n)
    if name == "SnDirect":
        terms: Dict[BraidWord, Scalar] = {}
        for p in permutations(range(1, n + 1)):
            terms[matsumoto_lift(p)] = ONE
        return BraidOperator(n, terms)
    if name == "SnFactoredT":
        return _product(n, [t_operator(k, n) for k in range(2, n + 1)])
    if name == "SnFactoredU":
        return _product(n, [u_operator(k, n) for k in range(2, n + 1)])
    raise UnknownName(f"Unknown operator '{name}'")


def random_braiding(
    n_letters: int,
    rng: Random,
    bound: int = 4,
    symmetric: bool = False,
    signs: bool = False,
    unit_pairs: bool = False,
) -> BraidingMatrix:
    """Random monomial braiding q_ij = +-t^e with e in [-bound, bound].

    ``unit_pairs`` forces q_ij q_ji = 1 on a random half of the pairs and
    ``signs`` allows q_ii = -1 on the diagonal.
    """
    entries: List[List[Scalar]] = [[ONE] * n_letters for _ in range(n_letters)]
    for i in range(n_letters):
        if signs and rng.random() < 0.3:
            entries[i][i] = -ONE
        else:
            entries[i][i] = Scalar.t_power(rng.randint(-bound, bound))
        for j in range(i + 1, n_letters):
            e = rng.randint(-bound, bound)
            entries[i][j] = Scalar.t_power(e)
            if symmetric:
                entries[j][i] = entries[i][j]
            elif unit_pairs and rng.random() < 0.5:
                entries[j][i] = Scalar.t_power(-e)
            else:
                entries[j][i] = Scalar.t_power(rng.randint(-bound, bound))
    return BraidingMatrix(tuple(tuple(row) for row in entries), origin="free")
