"""
Dense complex matrices, Hermitian validation, principal minors,
row-submatrices and determinants.

Indices in the public API are 1-based, matching the [n] convention of the
identity. Matrices are numpy complex128 arrays.
"""

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import IndexOutOfRange, NotFinite, NotHermitian, NotSquare, SizeMismatch


class IndexSet(BaseModel):
    """
    A sorted set of distinct 1-based indices.

    Examples

    S = IndexSet.of(1, 3)
    S = IndexSet.parse("1,3")
    len(S)         # 2
    S.zero_based   # array([0, 2])
    """

    model_config = ConfigDict(frozen=True)

    members: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def check_members(self) -> "IndexSet":
        if any(member < 1 for member in self.members):
            raise ValueError(f"indices are 1-based, got {self.members}")
        if any(a >= b for a, b in zip(self.members, self.members[1:])):
            raise ValueError(f"indices must be strictly increasing, got {self.members}")
        return self

    @classmethod
    def of(cls, *members: int) -> "IndexSet":
        return cls(members=tuple(int(member) for member in members))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(members=tuple(range(1, n + 1)))

    @classmethod
    def parse(cls, text: str) -> "IndexSet":
        """
        Parses a comma separated list of 1-based indices, ex: "1,3".
        An empty string is the empty set.
        """
        text = text.strip()
        if not text:
            return cls()
        return cls(members=tuple(int(part) for part in text.split(",")))

    def __len__(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return ",".join(str(member) for member in self.members)

    @property
    def zero_based(self) -> np.ndarray:
        return np.asarray(self.members, dtype=int) - 1

    def check_within(self, n: int) -> None:
        if self.members and self.members[-1] > n:
            raise IndexOutOfRange(f"index {self.members[-1]} is outside 1..{n}")

    def complement(self, n: int) -> "IndexSet":
        self.check_within(n)
        excluded = set(self.members)
        return IndexSet(members=tuple(k for k in range(1, n + 1) if k not in excluded))


def _square(matrix) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSquare(matrix.shape)
    return matrix


def hermitian_defect(matrix: np.ndarray) -> float:
    """
    max_{j,k} |A_jk - conj(A_kj)|
    """
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(matrix - matrix.conj().T)))


class HermitianMatrix:
    """
    A dense n x n complex self-adjoint matrix with exact Hermitian storage.
    Build it with hermitian_from_entries; the constructor assumes the
    entries are already exactly Hermitian.
    """

    def __init__(self, entries: np.ndarray) -> None:
        entries = np.array(entries, dtype=complex)
        entries.setflags(write=False)
        self.entries: np.ndarray = entries
        self.n: int = entries.shape[0]

    def __repr__(self) -> str:
        return f"HermitianMatrix(n={self.n})"

    @property
    def defect(self) -> float:
        return hermitian_defect(self.entries)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.n else 0.0

    @property
    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def shifted(self, shift: float) -> "HermitianMatrix":
        """
        Returns A + shift * I.
        """
        return HermitianMatrix(self.entries + shift * np.eye(self.n))


def hermitian_from_entries(entries, hermitian_tol: float = 1e-12) -> HermitianMatrix:
    """
    Validates and symmetrizes a square matrix.

    : param entries: square array-like of complex numbers.
    : param hermitian_tol: largest accepted max_{j,k} |A_jk - conj(A_kj)|.
    Returns a HermitianMatrix holding (A + A*) / 2.
    """
    matrix = _square(entries)
    if not np.all(np.isfinite(matrix)):
        raise NotFinite("Matrix entries must be finite")
    defect = hermitian_defect(matrix)
    if defect > hermitian_tol:
        raise NotHermitian(defect=defect, tolerance=hermitian_tol)
    return HermitianMatrix((matrix + matrix.conj().T) / 2)


def principal_minor(matrix: HermitianMatrix, subset: IndexSet) -> HermitianMatrix:
    """
    M_S: deletes the rows and columns of A whose indices belong to S.
    """
    keep = subset.complement(matrix.n).zero_based
    return HermitianMatrix(matrix.entries[np.ix_(keep, keep)])


def submatrix_rows(vectors: np.ndarray, subset: IndexSet) -> np.ndarray:
    """
    Returns the |S| x |S| matrix of the rows of V indexed by S, in ascending S order.
    V must have exactly |S| columns.
    """
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim != 2 or len(subset) != vectors.shape[1]:
        raise SizeMismatch(
            f"|S| = {len(subset)} does not match the {np.shape(vectors)} column block"
        )
    subset.check_within(vectors.shape[0])
    return vectors[subset.zero_based, :]


def determinant(matrix) -> complex:
    """
    Determinant by LU factorization with partial pivoting.
    The 0 x 0 matrix has determinant 1.
    """
    lu = _square(matrix).copy()
    n = lu.shape[0]
    sign = 1.0
    for k in range(n):
        pivot = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[pivot, k] == 0:
            return 0j
        if pivot != k:
            lu[[k, pivot]] = lu[[pivot, k]]
            sign = -sign
        multipliers = lu[k + 1 :, k] / lu[k, k]
        lu[k + 1 :, k:] -= np.outer(multipliers, lu[k, k:])
    return complex(sign * np.prod(np.diag(lu)))


def abs_det_squared(matrix) -> float:
    """
    |det(M)|^2, never negative.
    """
    value = determinant(matrix)
    return math.fabs(value.real) ** 2 + math.fabs(value.imag) ** 2
