from pydantic import BaseModel, Field
from typing import List, Optional

from app.models.tensor import TensorElement
from app.schemas.matrix import MatrixFile
from app.utils.formatting import parse_scalar


class ElementTerm(BaseModel):
    word: List[int]
    coeff: str

    @classmethod
    def from_element(cls, x: TensorElement) -> List["ElementTerm"]:
        """Terms in lexicographic word order."""
        return [cls(word=list(word), coeff=str(x.coefficient(word))) for word in x.words()]

    @staticmethod
    def to_element(terms: List["ElementTerm"]) -> TensorElement:
        return TensorElement.from_pairs((t.word, parse_scalar(t.coeff)) for t in terms)


class BlockReport(BaseModel):
    multidegree: List[int]
    relations: List[List[ElementTerm]]
    witnesses: List[List[ElementTerm]] = []
    display: List[str] = []
    redundant: Optional[List[int]] = None


class RelationTable(BaseModel):
    matrix: MatrixFile
    degree: int = Field(ge=2)
    side: str = "right"
    kind: str = "prerelation"
    blocks: List[BlockReport] = []


class DegreeReport(BaseModel):
    semipositive: Optional[bool] = None
    points: List[List[int]]
    truncated_at: Optional[int] = None


class BlockDimension(BaseModel):
    multidegree: List[int]
    dimension: int


class DimensionReport(BaseModel):
    degree: int
    total: int
    blocks: List[BlockDimension]


class WitnessReport(BaseModel):
    multidegree: List[int]
    relation: str
    specialized: str
    verdict: str
    chain: List[int] = []
    terminal: Optional[str] = None
    h_residues: List[str] = []


class SpecializationReport(BaseModel):
    multidegree: List[int]
    relation: str
    specialized: str
    serre_member: Optional[bool] = None


class SuiteReport(BaseModel):
    suite: str
    checks: int
    passed: bool
    failures: List[str] = []


class BlockBalanceReport(BaseModel):
    multidegree: List[int]
    right: int
    left: int
    balanced: bool


class BalanceReport(BaseModel):
    degree: int
    kind: str
    blocks: List[BlockBalanceReport]
