from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from app.models.tensor import BraidingMatrix, Multidegree
from app.utils.exceptions import BadParameters, NonMonomialBraiding


@dataclass(frozen=True)
class ThetaForm:
    """Exponent data of a monomial braiding.

    ``diagonal[k]`` is the t-exponent of q_kk and ``pairs[(p, q)]`` (p < q,
    0-based) the t-exponent of q_pq q_qp.
    """

    diagonal: Tuple[int, ...]
    pairs: Dict[Tuple[int, int], int]

    @classmethod
    def from_braiding(cls, braiding: BraidingMatrix) -> "ThetaForm":
        exponents = braiding.t_exponents()
        if exponents is None:
            raise NonMonomialBraiding("Degree search needs every q_ij to be a pure power of t")
        n = braiding.size
        return cls(
            diagonal=tuple(exponents[k][k] for k in range(n)),
            pairs={(p, q): exponents[p][q] + exponents[q][p] for p in range(n) for q in range(p + 1, n)},
        )

    @property
    def size(self) -> int:
        return len(self.diagonal)

    @property
    def uniform_diagonal(self) -> bool:
        return self.diagonal[0] != 0 and all(d == self.diagonal[0] for d in self.diagonal)

    def exponent(self, md: Sequence[int]) -> int:
        total = sum(d * m * (m - 1) for d, m in zip(self.diagonal, md))
        for (p, q), e in self.pairs.items():
            total += e * md[p] * md[q]
        return total


@dataclass(frozen=True)
class QuadraticForm:
    """Q(x) = sum x_i^2 - sum_{i<j} b_ij x_i x_j with rational b (0-based keys)."""

    size: int
    b: Dict[Tuple[int, int], Fraction]

    @classmethod
    def from_theta(cls, tf: ThetaForm) -> "QuadraticForm":
        """b_pq = -2 e_pq / d; needs one nonzero exponent d on the whole diagonal."""
        d = tf.diagonal[0]
        if not tf.uniform_diagonal:
            raise BadParameters(
                f"Quadratic form needs a uniform nonzero diagonal exponent, got {list(tf.diagonal)}"
            )
        return cls(tf.size, {key: Fraction(-2 * e, d) for key, e in tf.pairs.items()})

    @classmethod
    def from_b(cls, size: int, b: Optional[Dict[Tuple[int, int], Fraction]] = None) -> "QuadraticForm":
        b = {key: Fraction(v) for key, v in (b or {}).items()}
        for p, q in b:
            if not 0 <= p < q < size:
                raise BadParameters(f"Pair {(p, q)} does not index a {size}-variable form")
        return cls(size, b)

    def value(self, x: Sequence[int]) -> Fraction:
        total = Fraction(sum(v * v for v in x))
        for (p, q), c in self.b.items():
            total -= c * x[p] * x[q]
        return total

    def shifted_square(self, x: Sequence[int]) -> int:
        """S(x) = sum (x_i - 1)^2."""
        return sum((v - 1) ** 2 for v in x)

    def in_E(self, x: Multidegree) -> bool:
        """Q(x) + S(x) = N, the vanishing of the normalized twist exponent."""
        return self.value(x) + self.shifted_square(x) == self.size
