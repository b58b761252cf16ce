from pydantic import BaseModel, model_validator
from typing import List, Literal, Optional


class MatrixFile(BaseModel):
    """Input matrix: a generalized Cartan matrix or doubled q-exponents."""
    cartan: Optional[List[List[int]]] = None
    braiding_exponents_doubled: Optional[List[List[int]]] = None
    average: bool = False
    side: Literal["negative", "positive"] = "negative"

    @model_validator(mode='after')
    def validate_source(self):
        if (self.cartan is None) == (self.braiding_exponents_doubled is None):
            raise ValueError('Exactly one of "cartan" and "braiding_exponents_doubled" is required')
        rows = self.cartan if self.cartan is not None else self.braiding_exponents_doubled
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError('Matrix must be square and non-empty')
        if self.average and self.cartan is None:
            raise ValueError('"average" applies to Cartan matrices only')
        if self.cartan is not None:
            n = len(rows)
            for i in range(n):
                if rows[i][i] != 2:
                    raise ValueError(f'Cartan diagonal entry ({i + 1},{i + 1}) must be 2')
                for j in range(n):
                    if i == j:
                        continue
                    if rows[i][j] > 0:
                        raise ValueError(f'Cartan entry ({i + 1},{j + 1}) must be <= 0')
                    if (rows[i][j] == 0) != (rows[j][i] == 0):
                        raise ValueError(f'Cartan entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) must vanish together')
        return self

    @property
    def size(self) -> int:
        rows = self.cartan if self.cartan is not None else self.braiding_exponents_doubled
        return len(rows)
