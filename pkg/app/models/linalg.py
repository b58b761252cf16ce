from dataclasses import dataclass
from typing import List, Sequence, Tuple

from app.models.scalar import ONE, ZERO, Scalar
from app.models.tensor import Block, TensorElement
from app.utils.exceptions import BadParameters

Vector = Tuple[Scalar, ...]


@dataclass(frozen=True)
class ScalarMatrix:
    """Dense matrix of Scalars, stored row-major."""

    rows: int
    cols: int
    entries: Tuple[Vector, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise BadParameters(f"Matrix data does not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Scalar]], cols: int = None) -> "ScalarMatrix":
        rows = tuple(tuple(r) for r in rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int) -> "ScalarMatrix":
        entries = tuple(tuple(col[i] for col in columns) for i in range(rows))
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, n: int) -> "ScalarMatrix":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "ScalarMatrix":
        return cls(rows, cols, tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def scale(self, s: Scalar) -> "ScalarMatrix":
        return ScalarMatrix(self.rows, self.cols, tuple(tuple(s * c for c in r) for r in self.entries))

    def apply(self, vector: Sequence[Scalar]) -> Vector:
        if len(vector) != self.cols:
            raise BadParameters(f"Vector of length {len(vector)} for {self.cols} columns")
        result = []
        for row in self.entries:
            total = ZERO
            for a, b in zip(row, vector):
                if a and b:
                    total = total + a * b
            result.append(total)
        return tuple(result)

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if self.cols != other.rows:
            raise BadParameters(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = [self.apply(other.column(j)) for j in range(other.cols)]
        return ScalarMatrix.from_columns(columns, self.rows)


@dataclass(frozen=True)
class Subspace:
    """Subspace of a block, held as its reduced row echelon basis."""

    block: Block
    basis: Tuple[Vector, ...]
    pivots: Tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def ambient_dimension(self) -> int:
        return self.block.size

    def elements(self) -> List[TensorElement]:
        return [TensorElement.from_vector(self.block, v) for v in self.basis]

    def __bool__(self) -> bool:
        return bool(self.basis)
