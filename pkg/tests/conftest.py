import json
from typing import List

import numpy as np
import pytest

from eigenid.config import MatrixFile
from eigenid.instances import SpectrumSpec
from eigenid.linalg import HermitianMatrix, hermitian_from_entries


def degenerate_spectrum(seed: int, n_min: int = 2, n_max: int = 10) -> SpectrumSpec:
    """
    A spectrum with at least two distinct values, multiplicities up to n - 1
    and gaps of at least 0.5, drawn deterministically from seed.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    clusters = int(rng.integers(2, n + 1))
    cuts = np.sort(rng.choice(np.arange(1, n), size=clusters - 1, replace=False))
    multiplicities = np.diff(np.concatenate(([0], cuts, [n])))
    start = rng.uniform(-3.0, 3.0)
    values = start + np.cumsum(np.concatenate(([0.0], 0.5 + 2.0 * rng.random(clusters - 1))))
    return SpectrumSpec(pairs=tuple((float(v), int(m)) for v, m in zip(values, multiplicities)))


def write_matrix(path, matrix) -> str:
    path.write_text(MatrixFile.from_array(np.asarray(matrix, dtype=complex)).dumps())
    return str(path)


def rel_diff(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.fixture
def swap() -> HermitianMatrix:
    return hermitian_from_entries([[0, 1], [1, 0]])


@pytest.fixture
def diag112() -> HermitianMatrix:
    return hermitian_from_entries(np.diag([1.0, 1.0, 2.0]))


@pytest.fixture
def projector() -> HermitianMatrix:
    """
    I_3 - J_3 / 3: eigenvalue 0 once, eigenvalue 1 twice.
    """
    return hermitian_from_entries(np.eye(3) - np.ones((3, 3)) / 3)


@pytest.fixture
def matrix_path(tmp_path):
    def write(matrix, name: str = "A.json") -> str:
        return write_matrix(tmp_path / name, matrix)

    return write


@pytest.fixture
def read_json():
    def read(path) -> dict:
        with open(path) as file:
            return json.load(file)

    return read


def subsets_of(text: str) -> List[List[int]]:
    return [[int(k) for k in part.split(",")] for part in text.split(";")]
