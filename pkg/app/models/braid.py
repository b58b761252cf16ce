from functools import cached_property
from typing import Dict, Iterable, Optional, Sequence, Tuple
import logging

from app.models.scalar import ONE, ZERO, Scalar
from app.utils.exceptions import BadParameters

logger = logging.getLogger(__name__)

# A generator is (index, sign): (i, 1) is sigma_i and (i, -1) its inverse.
Generator = Tuple[int, int]
BraidWord = Tuple[Generator, ...]


def braid_word(indices: Iterable[int]) -> BraidWord:
    """Positive braid word from generator indices; negative index = inverse."""
    return tuple((abs(i), 1 if i > 0 else -1) for i in indices)


class BraidOperator:
    """Element of K[B_n]: a Scalar-linear combination of braid words.

    An operator built as a product keeps its factors so it can be applied
    factor by factor; ``terms`` is the fully expanded sum either way.
    """

    def __init__(
        self,
        strand_count: int,
        terms: Optional[Dict[BraidWord, Scalar]] = None,
        factors: Sequence["BraidOperator"] = (),
    ):
        self.strand_count = strand_count
        self.factors: Tuple["BraidOperator", ...] = tuple(factors)
        if terms is not None:
            self._check(terms)
            self.__dict__["terms"] = {w: c for w, c in terms.items() if c}
        elif not self.factors:
            self.__dict__["terms"] = {}

    def _check(self, terms: Dict[BraidWord, Scalar]):
        for word in terms:
            for i, sign in word:
                if not 1 <= i <= self.strand_count - 1 or sign not in (1, -1):
                    raise BadParameters(
                        f"Generator {(i, sign)} does not fit {self.strand_count} strands"
                    )

    @classmethod
    def identity(cls, n: int) -> "BraidOperator":
        return cls(n, {(): ONE})

    @classmethod
    def zero(cls, n: int) -> "BraidOperator":
        return cls(n, {})

    @classmethod
    def from_word(cls, n: int, word: Sequence, coeff: Scalar = ONE) -> "BraidOperator":
        """Single braid word; plain integers are read as positive generators."""
        word = tuple(g if isinstance(g, tuple) else (g, 1) for g in word)
        return cls(n, {word: coeff})

    @cached_property
    def terms(self) -> Dict[BraidWord, Scalar]:
        expanded: Dict[BraidWord, Scalar] = {(): ONE}
        for factor in self.factors:
            product: Dict[BraidWord, Scalar] = {}
            for u, a in expanded.items():
                for v, b in factor.terms.items():
                    w = u + v
                    product[w] = product.get(w, ZERO) + a * b
            expanded = {w: c for w, c in product.items() if c}
        return expanded

    def __len__(self) -> int:
        return len(self.terms)

    def _same_strands(self, other: "BraidOperator"):
        if other.strand_count != self.strand_count:
            raise BadParameters(
                f"Strand counts differ: {self.strand_count} vs {other.strand_count}"
            )

    def __add__(self, other: "BraidOperator") -> "BraidOperator":
        self._same_strands(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, ZERO) + c
        return BraidOperator(self.strand_count, terms)

    def __neg__(self) -> "BraidOperator":
        return BraidOperator(self.strand_count, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "BraidOperator") -> "BraidOperator":
        return self + (-other)

    def scale(self, s: Scalar) -> "BraidOperator":
        return BraidOperator(self.strand_count, {w: s * c for w, c in self.terms.items()})

    def __mul__(self, other: "BraidOperator") -> "BraidOperator":
        """Composition: ``(a * b)(x) = a(b(x))``."""
        self._same_strands(other)
        return BraidOperator(
            self.strand_count,
            factors=(self.factors or (self,)) + (other.factors or (other,)),
        )

    def __pow__(self, k: int) -> "BraidOperator":
        if k == 0:
            return BraidOperator.identity(self.strand_count)
        return BraidOperator(self.strand_count, factors=(self.factors or (self,)) * k)

    def __repr__(self) -> str:
        shown = " + ".join(
            f"({c})*{''.join(f's{i}' if s > 0 else f's{i}^-1' for i, s in w) or '1'}"
            for w, c in sorted(self.terms.items(), key=lambda item: (len(item[0]), item[0]))
        )
        return f"BraidOperator(n={self.strand_count}, {shown or '0'})"
