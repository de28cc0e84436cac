"""
Configuration models: environment settings and per-run options
"""

import os
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from algebra.errors import ConfigurationError, InvalidPartitionError, UnsupportedFamilyError
from models.partition import Partition

# Load environment variables
load_dotenv()


class FormNormalization(str, Enum):
    """Invariant form used to identify sl_n with its dual"""
    TRACE = "trace"
    KILLING = "killing"

    def scale(self, n: int) -> Fraction:
        return Fraction(2 * n) if self is FormNormalization.KILLING else Fraction(1)


class ComplementKind(str, Enum):
    """Families of complements of the centralizer"""
    IMADF = "imadf"
    CONORMAL = "conormal"
    FILE = "file"


class TensorChoice(str, Enum):
    FULL = "full"
    PRIME = "prime"
    BOTH = "both"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    LATEX = "latex"


class CheckScope(str, Enum):
    ALL = "all"
    FIXTURES = "fixtures"
    PROPERTIES = "properties"


# Settings field -> environment variable
ENV_VARIABLES = {
    "num_threads": "PT_NUM_THREADS",
    "log_level": "PT_LOG_LEVEL",
    "form": "PT_FORM",
    "seed": "PT_SEED",
}


class Settings(BaseModel):
    """Process-wide settings read from the environment"""

    num_threads: int = Field(default=1, ge=1, description="Worker cap for independent checks (PT_NUM_THREADS)")
    log_level: str = Field(default="WARNING", description="Log sink level (PT_LOG_LEVEL)")
    form: FormNormalization = Field(default=FormNormalization.TRACE, description="Default form (PT_FORM)")
    seed: int = Field(default=20240601, description="Seed of randomized property suites (PT_SEED)")

    @field_validator("log_level")
    @classmethod
    def _upper(cls, value: str) -> str:
        return value.upper()

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Raises:
            ConfigurationError: a PT_* variable does not validate
        """
        raw = {field: os.getenv(name) for field, name in ENV_VARIABLES.items()}
        try:
            return cls.model_validate({field: value for field, value in raw.items() if value is not None})
        except ValidationError as exc:
            error = exc.errors()[0]
            name = ENV_VARIABLES.get(str(error["loc"][0]), "environment")
            raise ConfigurationError(f"{name}: {error['msg']}") from exc


class RunConfig(BaseModel):
    """Options of one transverse computation"""

    n: int = Field(..., ge=2, description="Rank parameter of sl_n")
    partition: Partition = Field(..., description="Jordan type of the orbit")
    complement: ComplementKind = Field(default=ComplementKind.IMADF, description="Complement family")
    complement_path: Optional[Path] = Field(None, description="Complement JSON file for the file selector")
    tensor: TensorChoice = Field(default=TensorChoice.BOTH, description="Which tensors to emit")
    output_format: OutputFormat = Field(default=OutputFormat.TEXT)
    form: FormNormalization = Field(default=FormNormalization.TRACE)
    output_path: Optional[Path] = Field(None, description="Write the report here instead of stdout")
    show_a: bool = Field(default=False, description="Emit the A matrix")

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if self.partition.n != self.n:
            raise InvalidPartitionError(f"partition {self.partition} does not sum to {self.n}")
        if self.complement is ComplementKind.FILE and self.complement_path is None:
            raise ValueError("the file selector needs a path")
        if self.complement is ComplementKind.CONORMAL:
            parts = self.partition.parts
            if parts[0] - parts[-1] > 1:
                raise UnsupportedFamilyError(f"partition {self.partition} is outside the conormal family")
        return self

    @classmethod
    def from_selector(cls, n: int, partition: Partition, selector: str, **options) -> "RunConfig":
        """Split a selector like imadf, conormal or file:PATH"""
        if selector.startswith("file:"):
            return cls(n=n, partition=partition, complement=ComplementKind.FILE,
                       complement_path=Path(selector[len("file:"):]), **options)
        return cls(n=n, partition=partition, complement=ComplementKind(selector), **options)
