import json
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import ConfigError

THREADS_VARIABLE = "EIGENID_THREADS"


class Tolerances(BaseModel):
    """
    Every numeric knob used by the library and the cli.

    Examples

    # Defaults
    tolerances = Tolerances()

    # From a yaml file, then cli overrides (None values are ignored)
    tolerances = Tolerances.load("tolerances.yaml").merged(eig_tol=1e-13, cluster_tol=None)
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    hermitian_tol: float = Field(1e-12, gt=0)
    eig_tol: float = Field(1e-12, gt=0)
    max_sweeps: int = Field(30, ge=1)
    cluster_tol: float = Field(1e-8, gt=0)
    rhs_negativity_tol: float = Field(1e-10, gt=0)
    unitary_tol: float = Field(1e-10, gt=0)
    fail_above: float = Field(1e-6, gt=0)
    lemma1_tol: float = Field(1e-8, gt=0)
    gap_warning: float = Field(10.0, gt=0)
    max_subsets: int = Field(1_000_000, ge=1)

    @classmethod
    def load(cls, path: str) -> "Tolerances":
        """
        Loads a yaml file whose keys are a subset of the Tolerances fields.
        Unknown keys and non-positive values raise a ConfigError.
        """
        with open(Path(path)) as file:
            data = yaml.safe_load(file) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping of tolerance names to values")
        try:
            return cls(**data)
        except ValidationError as error:
            raise ConfigError(f"{path}: {error}") from error

    def merged(self, **overrides: Any) -> "Tolerances":
        updates = {key: value for key, value in overrides.items() if value is not None}
        try:
            return Tolerances(**{**self.model_dump(), **updates})
        except ValidationError as error:
            raise ConfigError(str(error)) from error


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    threads: int = Field(ge=1)

    @classmethod
    def from_environ(cls, environ: Optional[Dict[str, str]] = None) -> "Settings":
        """
        Reads EIGENID_THREADS. Absence means min(8, cpu count).
        """
        environ = os.environ if environ is None else environ
        value = environ.get(THREADS_VARIABLE)
        if value is None or value.strip() == "":
            return cls(threads=min(8, os.cpu_count() or 1))
        try:
            threads = int(value)
        except ValueError as error:
            raise ConfigError(f"{THREADS_VARIABLE}={value!r} is not an integer") from error
        if threads < 1:
            raise ConfigError(f"{THREADS_VARIABLE}={value!r} must be positive")
        return cls(threads=threads)


class MatrixFile(BaseModel):
    """
    Matrix JSON file: {"n": 2, "entries": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
    Every entry is an explicit [re, im] pair.
    """

    n: int = Field(ge=1)
    entries: List[List[Tuple[float, float]]]

    @model_validator(mode="after")
    def check_shape(self) -> "MatrixFile":
        if len(self.entries) != self.n or any(len(row) != self.n for row in self.entries):
            raise ValueError(f"entries must be a {self.n}x{self.n} array of [re, im] pairs")
        for row in self.entries:
            for re, im in row:
                if not (math.isfinite(re) and math.isfinite(im)):
                    raise ValueError("entries must be finite")
        return self

    def to_array(self) -> np.ndarray:
        pairs = np.asarray(self.entries, dtype=float)
        return pairs[..., 0] + 1j * pairs[..., 1]

    @classmethod
    def from_array(cls, matrix: np.ndarray) -> "MatrixFile":
        matrix = np.asarray(matrix, dtype=complex)
        entries = [[(float(z.real), float(z.imag)) for z in row] for row in matrix]
        return cls(n=matrix.shape[0], entries=entries)

    @classmethod
    def parse(cls, text: str) -> "MatrixFile":
        return cls.model_validate_json(text)

    def dumps(self) -> str:
        return json.dumps(self.model_dump()) + "\n"
