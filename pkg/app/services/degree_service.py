from dataclasses import dataclass
from itertools import product
from math import isqrt
from typing import List, Optional, Sequence
import logging

from sympy import Matrix, Rational

from app.models.forms import QuadraticForm, ThetaForm
from app.models.tensor import Multidegree, multidegrees
from app.utils.exceptions import BadParameters

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationResult:
    semipositive: bool
    points: List[Multidegree]
    truncated_at: Optional[int] = None


def theta_exponent(tf: ThetaForm, md: Sequence[int]) -> int:
    """Exponent of t by which the full twist acts on the block ``md``."""
    if len(md) != tf.size:
        raise BadParameters(f"Multidegree {tuple(md)} for {tf.size} letters")
    return tf.exponent(md)


def zero_blocks(tf: ThetaForm, height_max: int) -> List[Multidegree]:
    """Blocks of height 2..height_max fixed by the full twist."""
    found = []
    for height in range(2, height_max + 1):
        found.extend(md for md in multidegrees(tf.size, height) if tf.exponent(md) == 0)
    return sorted(found)


def gram_matrix(qf: QuadraticForm) -> Matrix:
    n = qf.size
    entries = [[Rational(1) if i == j else Rational(0) for j in range(n)] for i in range(n)]
    for (p, q), b in qf.b.items():
        half = -Rational(b.numerator, b.denominator) / 2
        entries[p][q] = half
        entries[q][p] = half
    return Matrix(entries)


def is_semipositive(qf: QuadraticForm) -> bool:
    """Exact semi-definiteness of the rational Gram matrix."""
    return bool(gram_matrix(qf).is_positive_semidefinite)


def _box(qf: QuadraticForm, nonnegative: bool):
    # S(x) <= N on E, so each coordinate lies within sqrt(N) of 1
    radius = isqrt(qf.size)
    low = max(0, 1 - radius) if nonnegative else 1 - radius
    return product(range(low, 2 + radius), repeat=qf.size)


def _bounded(size: int, height: int, nonnegative: bool):
    if nonnegative:
        for h in range(height + 1):
            yield from multidegrees(size, h)
        return
    for x in product(range(-height, height + 1), repeat=size):
        if sum(abs(v) for v in x) <= height:
            yield x


def enumerate_E(
    qf: QuadraticForm,
    height: Optional[int] = None,
    nonnegative: bool = True,
) -> EnumerationResult:
    """Integral points with Q(x) + S(x) = N.

    A semi-positive form confines them to the box |x_i - 1| <= sqrt(N); an
    indefinite one is searched up to ``height`` and reported as truncated.
    """
    if is_semipositive(qf):
        points = sorted(tuple(x) for x in _box(qf, nonnegative) if qf.in_E(x))
        logger.info(f"Finite E with {len(points)} points")
        return EnumerationResult(True, points)
    if height is None:
        raise BadParameters("An indefinite form needs a height bound")
    points = sorted(tuple(x) for x in _bounded(qf.size, height, nonnegative) if qf.in_E(x))
    logger.info(f"Form is not semi-positive; {len(points)} points up to height {height}")
    return EnumerationResult(False, points, truncated_at=height)
