"""
Both sides of the eigenvector/eigenvalue identity for Hermitian matrices
with repeated eigenvalues:

    |det([v_i1 .. v_iμ]_S)|^2 = prod_j (λ_i - λ_j(M_S)) / prod_{j != i} (λ_i - λ_j)^μ_j

plus the unitary block-determinant property it rests on and its
simple-eigenvalue special case.
"""

import math
from enum import Enum
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import Tolerances
from .eigensolver import EigenDecomposition, eigh, orthonormalize_clusters, unitarity_defect
from .errors import (
    IndexOutOfRange,
    MultiplicityNotOne,
    NegativeRightHandSide,
    NotSquare,
    NotUnitary,
    SubsetSizeMismatch,
)
from .linalg import (
    HermitianMatrix,
    IndexSet,
    abs_det_squared,
    determinant,
    principal_minor,
    submatrix_rows,
)
from .modules.logger import Log
from .spectrum import ClusteredSpectrum, SignedLogReal, cluster_eigenvalues, denominator_eq1

log = Log("eigenid.identity")

REL_ERR_FLOOR = 1e-300


class RhsMethod(str, Enum):
    """
    How the numerator prod_j (λ_i - λ_j(M_S)) is evaluated.
    EIGENVALUES: from the eigenvalues of M_S.
    DETERMINANT: as det(λ_i I - M_S) by LU factorization.
    """

    EIGENVALUES = "eigenvalues"
    DETERMINANT = "determinant"


class RhsDiagnostics(BaseModel):
    model_config = ConfigDict(frozen=True)

    numerator_sign: int
    denominator_sign: int
    min_factor: Optional[float] = None
    raw: float
    clamped: bool = False


class IdentityEvaluation(BaseModel):
    model_config = ConfigDict(frozen=True)

    cluster_index: int
    cluster_value: float
    multiplicity: int
    subset: IndexSet
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    numerator_sign: int
    gap_margin: float
    min_factor: Optional[float] = None


def _check_subset(spectrum: ClusteredSpectrum, index: int, subset: IndexSet) -> None:
    multiplicity = spectrum.cluster(index).multiplicity
    if len(subset) != multiplicity:
        raise SubsetSizeMismatch(
            f"|S| = {len(subset)} but cluster {index} has multiplicity {multiplicity}"
        )


def rhs_eq1(
    matrix: HermitianMatrix,
    spectrum: ClusteredSpectrum,
    index: int,
    subset: IndexSet,
    eig_tol: float = 1e-12,
    max_sweeps: int = 30,
    rhs_negativity_tol: float = 1e-10,
    method: RhsMethod = RhsMethod.EIGENVALUES,
) -> Tuple[float, RhsDiagnostics]:
    """
    Right-hand side of the identity for cluster index (1-based) and subset S.

    The eigenvalues of M_S are used raw, with multiplicity. Values in
    [-rhs_negativity_tol * max(1, |rhs|), 0) are clamped to 0; anything more
    negative raises NegativeRightHandSide.
    """
    _check_subset(spectrum, index, subset)
    minor = principal_minor(matrix, subset)
    value = spectrum.cluster(index).value

    min_factor = None
    if method == RhsMethod.EIGENVALUES:
        factors = value - eigh(minor, eig_tol=eig_tol, max_sweeps=max_sweeps).values
        numerator = SignedLogReal.product(factors)
        min_factor = float(np.min(np.abs(factors))) if factors.size else math.inf
    else:
        shifted = value * np.eye(minor.n) - minor.entries
        numerator = SignedLogReal.from_float(determinant(shifted).real)

    denominator = denominator_eq1(spectrum, index)
    raw = (numerator / denominator).to_float()
    diagnostics = RhsDiagnostics(
        numerator_sign=numerator.sign,
        denominator_sign=denominator.sign,
        min_factor=min_factor,
        raw=raw,
        clamped=raw < 0,
    )
    if raw >= 0:
        return raw, diagnostics

    limit = rhs_negativity_tol * max(1.0, abs(raw))
    if raw < -limit:
        raise NegativeRightHandSide(value=raw, tolerance=limit)
    log.warning(f"clamping rhs {raw:.3e} to 0 for cluster {index}, S={subset}")
    return 0.0, diagnostics


def lhs_eq1(
    decomposition: EigenDecomposition, spectrum: ClusteredSpectrum, index: int, subset: IndexSet
) -> float:
    """
    |det([v_i1 .. v_iμ]_S)|^2 from the eigenvector block of cluster index.
    The block is expected to be orthonormal (see orthonormalize_clusters).
    """
    _check_subset(spectrum, index, subset)
    block = decomposition.block(spectrum.cluster(index).member_indices)
    return abs_det_squared(submatrix_rows(block, subset))


def enumerate_minors(n: int, multiplicity: int) -> List[IndexSet]:
    """
    All C(n, multiplicity) subsets of 1..n in lexicographic order.
    """
    if not 0 <= multiplicity <= n:
        raise ValueError(f"need 0 <= multiplicity <= n, got {multiplicity} and {n}")
    return [IndexSet(members=members) for members in combinations(range(1, n + 1), multiplicity)]


class Identity:
    """
    One eigendecomposition and clustering of A, shared by every (cluster, S)
    evaluation on it.

    Examples

    identity = Identity(matrix)
    identity.spectrum.values           # distinct eigenvalues
    identity.evaluate(1, IndexSet.of(1)).rel_err
    identity.sum_over_subsets(1)       # 1 within 1e-8
    """

    def __init__(self, matrix: HermitianMatrix, tolerances: Optional[Tolerances] = None) -> None:
        self.matrix: HermitianMatrix = matrix
        self.tolerances: Tolerances = tolerances or Tolerances()
        decomposition = eigh(
            matrix, eig_tol=self.tolerances.eig_tol, max_sweeps=self.tolerances.max_sweeps
        )
        self.spectrum: ClusteredSpectrum = cluster_eigenvalues(
            decomposition.values, cluster_tol=self.tolerances.cluster_tol
        )
        self.decomposition: EigenDecomposition = orthonormalize_clusters(decomposition, self.spectrum)

    def subsets(self, index: int) -> List[IndexSet]:
        return enumerate_minors(self.matrix.n, self.spectrum.cluster(index).multiplicity)

    def lhs(self, index: int, subset: IndexSet) -> float:
        return lhs_eq1(self.decomposition, self.spectrum, index, subset)

    def rhs(
        self, index: int, subset: IndexSet, method: RhsMethod = RhsMethod.EIGENVALUES
    ) -> Tuple[float, RhsDiagnostics]:
        return rhs_eq1(
            self.matrix,
            self.spectrum,
            index,
            subset,
            eig_tol=self.tolerances.eig_tol,
            max_sweeps=self.tolerances.max_sweeps,
            rhs_negativity_tol=self.tolerances.rhs_negativity_tol,
            method=method,
        )

    def evaluate(
        self, index: int, subset: IndexSet, method: RhsMethod = RhsMethod.EIGENVALUES
    ) -> IdentityEvaluation:
        cluster = self.spectrum.cluster(index)
        lhs = self.lhs(index, subset)
        rhs, diagnostics = self.rhs(index, subset, method=method)
        abs_err = abs(lhs - rhs)
        return IdentityEvaluation(
            cluster_index=index,
            cluster_value=cluster.value,
            multiplicity=cluster.multiplicity,
            subset=subset,
            lhs=lhs,
            rhs=rhs,
            abs_err=abs_err,
            rel_err=abs_err / max(lhs, rhs, REL_ERR_FLOOR),
            numerator_sign=diagnostics.numerator_sign,
            gap_margin=self.spectrum.gap_margin,
            min_factor=diagnostics.min_factor,
        )

    def sum_over_subsets(self, index: int) -> float:
        """
        Sum of the lhs over every S with |S| = μ_i; equals det(V*V) = 1 by Cauchy-Binet.
        """
        return math.fsum(self.lhs(index, subset) for subset in self.subsets(index))

    def corollary_component(self, index: int, k: int) -> float:
        """
        |v_i1(k)|^2 from eigenvalues alone, for a cluster of multiplicity 1.
        """
        multiplicity = self.spectrum.cluster(index).multiplicity
        if multiplicity != 1:
            raise MultiplicityNotOne(f"cluster {index} has multiplicity {multiplicity}")
        rhs, _ = self.rhs(index, IndexSet.of(k))
        return rhs


def evaluate_identity(
    matrix: HermitianMatrix,
    index: int,
    subset: IndexSet,
    tolerances: Optional[Tolerances] = None,
    method: RhsMethod = RhsMethod.EIGENVALUES,
) -> IdentityEvaluation:
    return Identity(matrix, tolerances).evaluate(index, subset, method=method)


def sum_over_subsets(matrix: HermitianMatrix, index: int, tolerances: Optional[Tolerances] = None) -> float:
    return Identity(matrix, tolerances).sum_over_subsets(index)


def corollary_component(
    matrix: HermitianMatrix, index: int, k: int, tolerances: Optional[Tolerances] = None
) -> float:
    return Identity(matrix, tolerances).corollary_component(index, k)


class BlockPartition:
    """
    P split as [[P11, P12], [P21, P22]] with P11 of order r.
    """

    def __init__(self, matrix, r: int) -> None:
        matrix = np.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise NotSquare(matrix.shape)
        if not 0 <= r <= matrix.shape[0]:
            raise IndexOutOfRange(f"split {r} is outside 0..{matrix.shape[0]}")
        matrix.setflags(write=False)
        self.matrix: np.ndarray = matrix
        self.r: int = r

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def p11(self) -> np.ndarray:
        return self.matrix[: self.r, : self.r]

    @property
    def p12(self) -> np.ndarray:
        return self.matrix[: self.r, self.r :]

    @property
    def p21(self) -> np.ndarray:
        return self.matrix[self.r :, : self.r]

    @property
    def p22(self) -> np.ndarray:
        return self.matrix[self.r :, self.r :]

    def complement_determinants(self) -> Tuple[float, float]:
        """
        (det(I_r - P21* P21), det(I_{n-r} - P21 P21*)).
        For unitary P these equal |det P11|^2 and |det P22|^2.
        """
        p21 = self.p21
        top = np.eye(self.r) - p21.conj().T @ p21
        bottom = np.eye(self.n - self.r) - p21 @ p21.conj().T
        return determinant(top).real, determinant(bottom).real


def verify_lemma1(matrix, r: int, unitary_tol: float = 1e-10) -> Tuple[float, float]:
    """
    Returns (|det P11|^2, |det P22|^2) for the r / n - r split of a unitary P.
    Raises NotUnitary when max |P*P - I| exceeds unitary_tol.
    """
    partition = BlockPartition(matrix, r)
    defect = unitarity_defect(partition.matrix)
    if defect > unitary_tol:
        raise NotUnitary(defect=defect, tolerance=unitary_tol)
    return abs_det_squared(partition.p11), abs_det_squared(partition.p22)
