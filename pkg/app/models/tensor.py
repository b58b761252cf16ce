from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from math import factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple
import logging

from sympy.utilities.iterables import multiset_permutations

from app.models.scalar import ONE, ZERO, Scalar
from app.utils.exceptions import BadParameters, LetterOutOfRange
from app.utils.formatting import format_terms, format_word

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
Multidegree = Tuple[int, ...]


def multidegree(word: Sequence[int], n_letters: int) -> Multidegree:
    """Count the occurrences of each letter 1..N in a word."""
    counts = [0] * n_letters
    for letter in word:
        if not 1 <= letter <= n_letters:
            raise LetterOutOfRange(f"Letter {letter} outside 1..{n_letters}")
        counts[letter - 1] += 1
    return tuple(counts)


def multidegrees(n_letters: int, degree: int) -> List[Multidegree]:
    """All multidegrees of total degree ``degree``, lexicographically sorted."""
    result = set()
    for letters in combinations_with_replacement(range(1, n_letters + 1), degree):
        result.add(multidegree(letters, n_letters))
    return sorted(result)


@dataclass(frozen=True)
class Block:
    degree: int
    multidegree: Multidegree
    basis: Tuple[Word, ...]

    @cached_property
    def index(self) -> Dict[Word, int]:
        return {word: i for i, word in enumerate(self.basis)}

    @property
    def size(self) -> int:
        return len(self.basis)

    @property
    def n_letters(self) -> int:
        return len(self.multidegree)


@lru_cache(maxsize=None)
def _cached_block(md: Multidegree) -> Block:
    letters = [k + 1 for k, m in enumerate(md) for _ in range(m)]
    basis = sorted(tuple(w) for w in multiset_permutations(letters))
    expected = factorial(len(letters))
    for m in md:
        expected //= factorial(m)
    assert len(basis) == expected
    logger.debug(f"Materialized block {md} with {len(basis)} words")
    return Block(degree=len(letters), multidegree=md, basis=tuple(basis))


def block(n_letters: int, md: Sequence[int]) -> Block:
    """All distinct words with letter counts ``md``, in lexicographic order."""
    md = tuple(md)
    if len(md) != n_letters or any(m < 0 for m in md):
        raise BadParameters(f"Multidegree {md} does not fit N={n_letters}")
    return _cached_block(md)


class TensorElement:
    """Finite linear combination of words; an element of T(V)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        self._terms: Dict[Word, Scalar] = {
            tuple(w): c for w, c in (terms or {}).items() if c
        }

    @classmethod
    def from_word(cls, word: Sequence[int], coeff: Scalar = ONE) -> "TensorElement":
        return cls({tuple(word): coeff})

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Sequence[int], Scalar]]) -> "TensorElement":
        terms: Dict[Word, Scalar] = {}
        for word, coeff in pairs:
            word = tuple(word)
            terms[word] = terms.get(word, ZERO) + coeff
        return cls(terms)

    @classmethod
    def from_vector(cls, b: Block, vector: Sequence[Scalar]) -> "TensorElement":
        return cls({word: c for word, c in zip(b.basis, vector)})

    def to_vector(self, b: Block) -> List[Scalar]:
        vector = [ZERO] * b.size
        for word, coeff in self._terms.items():
            vector[b.index[word]] = coeff
        return vector

    def items(self) -> Iterator[Tuple[Word, Scalar]]:
        return iter(self._terms.items())

    def words(self) -> List[Word]:
        return sorted(self._terms)

    def coefficient(self, word: Sequence[int]) -> Scalar:
        return self._terms.get(tuple(word), ZERO)

    def degrees(self) -> set:
        return {len(w) for w in self._terms}

    def homogeneous_degree(self) -> Optional[int]:
        """Common word length, or None for zero or mixed elements."""
        degrees = self.degrees()
        return degrees.pop() if len(degrees) == 1 else None

    def project(self, md: Multidegree) -> "TensorElement":
        n_letters = len(md)
        return TensorElement({
            w: c for w, c in self._terms.items() if multidegree(w, n_letters) == tuple(md)
        })

    def blocks(self, n_letters: int) -> Dict[Multidegree, "TensorElement"]:
        parts: Dict[Multidegree, Dict[Word, Scalar]] = {}
        for word, coeff in self._terms.items():
            parts.setdefault(multidegree(word, n_letters), {})[word] = coeff
        return {md: TensorElement(terms) for md, terms in sorted(parts.items())}

    def map_coefficients(self, fn) -> "TensorElement":
        return TensorElement({w: fn(c) for w, c in self._terms.items()})

    def scale(self, s: Scalar) -> "TensorElement":
        if not s:
            return TensorElement()
        return TensorElement({w: s * c for w, c in self._terms.items()})

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __neg__(self) -> "TensorElement":
        return TensorElement({w: -c for w, c in self._terms.items()})

    def __add__(self, other: "TensorElement") -> "TensorElement":
        terms = dict(self._terms)
        for word, coeff in other._terms.items():
            terms[word] = terms.get(word, ZERO) + coeff
        return TensorElement(terms)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return concat_mul(self, other)
        if isinstance(other, (Scalar, int)):
            return self.scale(Scalar.from_number(other) if isinstance(other, int) else other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(Scalar.from_number(other) if isinstance(other, int) else other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def format(self, letter: str = "F") -> str:
        """Sum of terms in descending word order, e.g. ``F3^3*F1 - q^-3*F1*F3^3``."""
        return format_terms(
            (self._terms[w], format_word(w, letter)) for w in sorted(self._terms, reverse=True)
        )

    def __str__(self) -> str:
        return self.format("v")

    def __repr__(self) -> str:
        return f"TensorElement({self})"


def concat_mul(x: TensorElement, y: TensorElement) -> TensorElement:
    """Bilinear extension of word concatenation."""
    terms: Dict[Word, Scalar] = {}
    for u, a in x.items():
        for v, b in y.items():
            w = u + v
            terms[w] = terms.get(w, ZERO) + a * b
    return TensorElement(terms)


def letter(i: int) -> TensorElement:
    """The generator v_i."""
    return TensorElement.from_word((i,))


UNIT = TensorElement.from_word(())


class TensorSquareElement:
    """Element of T(V) (x) T(V): a map (Word, Word) -> Scalar."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Tuple[Word, Word], Scalar]] = None):
        self._terms = {(tuple(a), tuple(b)): c for (a, b), c in (terms or {}).items() if c}

    def items(self):
        return iter(self._terms.items())

    def coefficient(self, left: Sequence[int], right: Sequence[int]) -> Scalar:
        return self._terms.get((tuple(left), tuple(right)), ZERO)

    def __add__(self, other: "TensorSquareElement") -> "TensorSquareElement":
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            terms[key] = terms.get(key, ZERO) + coeff
        return TensorSquareElement(terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorSquareElement):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self) -> str:
        inner = " + ".join(
            f"({c})*{format_word(a, 'v')}(x){format_word(b, 'v')}"
            for (a, b), c in sorted(self._terms.items())
        )
        return f"TensorSquareElement({inner or '0'})"


@dataclass(frozen=True)
class BraidingMatrix:
    """Diagonal braiding sigma(v_a (x) v_b) = q_ab v_b (x) v_a."""

    entries: Tuple[Tuple[Scalar, ...], ...]
    origin: str = "free"
    _inverses: Tuple[Tuple[Scalar, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise BadParameters("Braiding matrix must be square and non-empty")
        if any(not q for row in self.entries for q in row):
            raise BadParameters("Braiding matrix entries must be nonzero")
        object.__setattr__(
            self, "_inverses", tuple(tuple(q.inverse() for q in row) for row in self.entries)
        )

    @classmethod
    def from_t_exponents(cls, exponents: Sequence[Sequence[int]], origin: str = "free") -> "BraidingMatrix":
        """q_ij = t^(exponents[i][j]); exponents are doubled q-exponents."""
        return cls(tuple(tuple(Scalar.t_power(e) for e in row) for row in exponents), origin)

    @property
    def size(self) -> int:
        return len(self.entries)

    def q(self, a: int, b: int) -> Scalar:
        """Entry q_ab for letters a, b in 1..N."""
        return self.entries[a - 1][b - 1]

    def q_inv(self, a: int, b: int) -> Scalar:
        return self._inverses[a - 1][b - 1]

    @cached_property
    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def t_exponents(self) -> Optional[Tuple[Tuple[int, ...], ...]]:
        """Exponents of t when every entry is a pure t-power, else None."""
        rows = []
        for row in self.entries:
            exps = tuple(q.monomial_exponent() for q in row)
            if any(e is None for e in exps):
                return None
            rows.append(exps)
        return tuple(rows)
