from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from app.models.linalg import Subspace
from app.models.tensor import Multidegree, TensorElement


class Side(str, Enum):
    RIGHT = "right"
    LEFT = "left"


class RelationKind(str, Enum):
    CONSTANT = "constant"
    PRERELATION = "prerelation"
    DEGREE2 = "degree2"


@dataclass(frozen=True)
class BlockRelations:
    """Relations found in one multidegree block.

    ``witnesses[k]`` is the element w with P_n w == relations[k] (Q_n w on
    the left); constants and degree-2 relations carry no witnesses.
    """

    multidegree: Multidegree
    space: Subspace
    relations: Tuple[TensorElement, ...]
    witnesses: Tuple[TensorElement, ...] = ()

    @property
    def dimension(self) -> int:
        return self.space.dimension


@dataclass(frozen=True)
class RelationSet:
    side: Side
    kind: RelationKind
    degree: int
    blocks: Tuple[BlockRelations, ...] = field(default_factory=tuple)

    @property
    def dimension(self) -> int:
        return sum(b.dimension for b in self.blocks)

    def elements(self) -> List[TensorElement]:
        return [x for b in self.blocks for x in b.relations]

    def block(self, md: Multidegree) -> Optional[BlockRelations]:
        for b in self.blocks:
            if b.multidegree == tuple(md):
                return b
        return None

    def dimensions(self) -> Dict[Multidegree, int]:
        return {b.multidegree: b.dimension for b in self.blocks}


@dataclass(frozen=True)
class BlockBalance:
    multidegree: Multidegree
    right_dimension: int
    left_dimension: int
    balanced: bool


@dataclass(frozen=True)
class DegreeDimensions:
    degree: int
    blocks: Dict[Multidegree, int]

    @property
    def total(self) -> int:
        return sum(self.blocks.values())
