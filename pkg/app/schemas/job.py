from pydantic import BaseModel, Field, model_validator
from typing import Literal, Optional

from app.core.config import settings
from app.schemas.matrix import MatrixFile

RELATION_COMMANDS = ("relations", "specialize", "witness", "balance")


class JobConfig(BaseModel):
    """One CLI invocation after flag parsing."""
    command: str
    matrix: Optional[MatrixFile] = None
    table: Optional[str] = None
    degree: Optional[int] = None
    max_height: Optional[int] = Field(None, ge=0)
    side: Literal["right", "left"] = "right"
    constants: bool = False
    redundancy: bool = False
    strands: int = Field(4, ge=2)
    seed: int = settings.DEFAULT_SEED
    depth: int = Field(settings.WITNESS_DEPTH, ge=1)
    all_integers: bool = False

    @model_validator(mode='after')
    def validate_sources(self):
        if self.command == "check-identities":
            return self
        if self.command in ("specialize", "witness"):
            if (self.matrix is None) == (self.table is None):
                raise ValueError('Give exactly one of --matrix and --table')
        elif self.matrix is None:
            raise ValueError('--matrix is required')
        if self.command in RELATION_COMMANDS and self.table is None:
            if self.degree is None or self.degree < 2:
                raise ValueError('--degree must be at least 2')
        if self.command in ("degrees", "dims") and self.max_height is None:
            raise ValueError('--max is required')
        return self
