from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from app.models.tensor import Word
from app.utils.exceptions import InvalidCartan
from app.utils.formatting import format_terms, format_word

# (f-letters, sorted h-letters)
ClassicalWord = Tuple[Word, Word]


@dataclass(frozen=True)
class CartanMatrix:
    """Generalized Cartan matrix."""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n == 0 or any(len(row) != n for row in self.entries):
            raise InvalidCartan("Cartan matrix must be square and non-empty")
        for i in range(n):
            if self.entries[i][i] != 2:
                raise InvalidCartan(f"Diagonal entry c_{i + 1}{i + 1} must be 2")
            for j in range(n):
                if i == j:
                    continue
                if self.entries[i][j] > 0:
                    raise InvalidCartan(f"Off-diagonal entry c_{i + 1}{j + 1} must be <= 0")
                if (self.entries[i][j] == 0) != (self.entries[j][i] == 0):
                    raise InvalidCartan(f"c_{i + 1}{j + 1} and c_{j + 1}{i + 1} must vanish together")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "CartanMatrix":
        return cls(tuple(tuple(int(c) for c in row) for row in rows))

    @property
    def size(self) -> int:
        return len(self.entries)

    def c(self, i: int, j: int) -> int:
        return self.entries[i - 1][j - 1]

    @property
    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))


@dataclass(frozen=True)
class AveragedMatrix:
    """Entrywise average (C + C^T) / 2 of a Cartan matrix."""

    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for i in range(n):
            if self.entries[i][i] != 2:
                raise InvalidCartan(f"Averaged diagonal entry {i + 1} must be 2")
            for j in range(n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InvalidCartan("Averaged matrix must be symmetric")
                if (2 * self.entries[i][j]).denominator != 1:
                    raise InvalidCartan("Averaged entries must be half-integers")

    @property
    def size(self) -> int:
        return len(self.entries)

    def c(self, i: int, j: int) -> Fraction:
        return self.entries[i - 1][j - 1]


CartanLike = Union[CartanMatrix, AveragedMatrix]


class ClassicalElement:
    """Element of U(n_-) extended by Cartan letters, in normal form.

    Words carry their f-letters first and their h-letters last, sorted
    ascending; coefficients are Fractions.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[ClassicalWord, Fraction]] = None):
        self._terms: Dict[ClassicalWord, Fraction] = {}
        for (f, h), c in (terms or {}).items():
            key = (tuple(f), tuple(sorted(h)))
            self._terms[key] = self._terms.get(key, Fraction(0)) + Fraction(c)
        self._terms = {k: c for k, c in self._terms.items() if c}

    @classmethod
    def from_f_word(cls, word: Sequence[int], coeff=1) -> "ClassicalElement":
        return cls({(tuple(word), ()): Fraction(coeff)})

    @classmethod
    def from_f_pairs(cls, pairs: Iterable[Tuple[Sequence[int], Fraction]]) -> "ClassicalElement":
        terms: Dict[ClassicalWord, Fraction] = {}
        for word, c in pairs:
            key = (tuple(word), ())
            terms[key] = terms.get(key, Fraction(0)) + Fraction(c)
        return cls(terms)

    def items(self) -> Iterator[Tuple[ClassicalWord, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, f_word: Sequence[int], h_word: Sequence[int] = ()) -> Fraction:
        return self._terms.get((tuple(f_word), tuple(sorted(h_word))), Fraction(0))

    @property
    def is_pure_f(self) -> bool:
        return all(not h for (_, h) in self._terms)

    def pure_f_part(self) -> "ClassicalElement":
        return ClassicalElement({k: c for k, c in self._terms.items() if not k[1]})

    def h_part(self) -> "ClassicalElement":
        return ClassicalElement({k: c for k, c in self._terms.items() if k[1]})

    def f_degrees(self) -> set:
        return {len(f) for (f, _) in self._terms}

    def f_multidegrees(self, n_letters: int) -> Dict[Tuple[int, ...], "ClassicalElement"]:
        parts: Dict[Tuple[int, ...], Dict[ClassicalWord, Fraction]] = {}
        for (f, h), c in self._terms.items():
            md = [0] * n_letters
            for a in f:
                md[a - 1] += 1
            parts.setdefault(tuple(md), {})[(f, h)] = c
        return {md: ClassicalElement(t) for md, t in sorted(parts.items())}

    def scale(self, s) -> "ClassicalElement":
        s = Fraction(s)
        return ClassicalElement({k: s * c for k, c in self._terms.items()})

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __neg__(self) -> "ClassicalElement":
        return self.scale(-1)

    def __add__(self, other: "ClassicalElement") -> "ClassicalElement":
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return ClassicalElement(terms)

    def __sub__(self, other: "ClassicalElement") -> "ClassicalElement":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassicalElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        pieces: List[Tuple[Fraction, str]] = []
        for (f, h) in sorted(self._terms, reverse=True):
            parts = [format_word(f, "f")] if f else []
            parts += [f"h{a}" for a in h]
            pieces.append((self._terms[(f, h)], "*".join(parts) or "1"))
        return format_terms(pieces)

    def __repr__(self) -> str:
        return f"ClassicalElement({self})"
