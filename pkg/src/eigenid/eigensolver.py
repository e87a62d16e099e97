"""
Self-adjoint eigendecomposition A = P D P* by cyclic Jacobi rotations.
"""

import math

import numpy as np

from .errors import NoConvergence, NotSquare, RankDeficient
from .linalg import HermitianMatrix, IndexSet
from .modules.logger import Log

log = Log("eigenid.eigensolver")

RANK_COLLAPSE = 1e-13


def _off_diagonal_norm(matrix: np.ndarray) -> float:
    off = matrix - np.diag(np.diag(matrix))
    return float(np.linalg.norm(off))


def unitarity_defect(matrix) -> float:
    """
    max-entry of |P*P - I|
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSquare(matrix.shape)
    if matrix.size == 0:
        return 0.0
    gram = matrix.conj().T @ matrix
    return float(np.max(np.abs(gram - np.eye(matrix.shape[0]))))


def reconstruction_defect(matrix: HermitianMatrix, values: np.ndarray, vectors: np.ndarray) -> float:
    """
    max-entry of |A - V diag(values) V*|
    """
    if matrix.n == 0:
        return 0.0
    rebuilt = (vectors * values) @ vectors.conj().T
    return float(np.max(np.abs(matrix.entries - rebuilt)))


class EigenDecomposition:
    """
    Ascending eigenvalues and the unitary matrix of eigenvectors (as columns)
    of a Hermitian matrix, plus the defects measured against that matrix.
    """

    def __init__(self, matrix: HermitianMatrix, values: np.ndarray, vectors: np.ndarray, sweeps: int = 0) -> None:
        values = np.array(values, dtype=float)
        vectors = np.array(vectors, dtype=complex)
        values.setflags(write=False)
        vectors.setflags(write=False)
        self.matrix: HermitianMatrix = matrix
        self.values: np.ndarray = values
        self.vectors: np.ndarray = vectors
        self.sweeps: int = sweeps
        self.residual: float = reconstruction_defect(matrix, values, vectors)
        self.unitarity_defect: float = unitarity_defect(vectors)

    def __repr__(self) -> str:
        return (
            f"EigenDecomposition(n={len(self.values)}, sweeps={self.sweeps}, "
            f"residual={self.residual:.3e}, unitarity_defect={self.unitarity_defect:.3e})"
        )

    @property
    def spectral_scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.values)))) if len(self.values) else 1.0

    def block(self, cols: IndexSet) -> np.ndarray:
        """
        The n x |cols| block of eigenvector columns, cols 1-based.
        """
        cols.check_within(len(self.values))
        return self.vectors[:, cols.zero_based]

    def with_vectors(self, vectors: np.ndarray) -> "EigenDecomposition":
        """
        Same eigenvalues with another eigenvector matrix; defects are recomputed.
        """
        return EigenDecomposition(self.matrix, self.values, vectors, sweeps=self.sweeps)


def _rotate(work: np.ndarray, vectors: np.ndarray, p: int, q: int) -> None:
    """
    Annihilates work[p, q] with a complex Givens rotation G,
    work <- G* work G and vectors <- vectors G.
    """
    apq = work[p, q]
    magnitude = abs(apq)
    phase = apq / magnitude
    app, aqq = work[p, p].real, work[q, q].real
    theta = 0.5 * math.atan2(2.0 * magnitude, aqq - app)
    c, s = math.cos(theta), math.sin(theta)
    rotation = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]], dtype=complex)

    pair = [p, q]
    work[:, pair] = work[:, pair] @ rotation
    work[pair, :] = rotation.conj().T @ work[pair, :]
    work[p, q] = work[q, p] = 0.0
    work[p, p] = work[p, p].real
    work[q, q] = work[q, q].real
    vectors[:, pair] = vectors[:, pair] @ rotation


def _power_of_two_scale(matrix: HermitianMatrix) -> int:
    """
    Exponent e with max|A_jk| * 2**-e in [0.5, 1); 0 for the zero matrix.
    """
    return math.frexp(matrix.max_abs)[1]


def _ldexp(entries: np.ndarray, exponent: int) -> np.ndarray:
    return np.ldexp(entries.real, exponent) + 1j * np.ldexp(entries.imag, exponent)


def eigh(matrix: HermitianMatrix, eig_tol: float = 1e-12, max_sweeps: int = 30) -> EigenDecomposition:
    """
    Cyclic Jacobi eigendecomposition.

    Works on A scaled by a power of two so that max|A_jk| is in [0.5, 1);
    the scaling is exact and keeps huge or tiny entries from overflowing or
    underflowing the norms. Sweeps over every (p, q) pair above the diagonal
    until the off-diagonal Frobenius norm is at most eig_tol * ||A||_F and the
    reconstruction residual is at most eig_tol * max(1, max|values|).
    Eigenvalues come back in ascending order with the eigenvector columns
    permuted to match. Raises NoConvergence after max_sweeps sweeps.
    """
    if eig_tol <= 0:
        raise ValueError("eig_tol must be positive")
    n = matrix.n
    exponent = _power_of_two_scale(matrix)
    work = _ldexp(np.array(matrix.entries, dtype=complex), -exponent)
    vectors = np.eye(n, dtype=complex)
    threshold = eig_tol * float(np.linalg.norm(work))

    sweep = 0
    while True:
        off = _off_diagonal_norm(work)
        if off <= threshold:
            values = np.ldexp(np.diag(work).real, exponent)
            order = np.argsort(values, kind="stable")
            decomposition = EigenDecomposition(matrix, values[order], vectors[:, order], sweeps=sweep)
            if decomposition.residual <= eig_tol * decomposition.spectral_scale:
                return decomposition
            log.debug(f"sweep {sweep}: residual {decomposition.residual:.3e} above tolerance")
        if sweep == max_sweeps:
            raise NoConvergence(off_diag_norm=float(np.ldexp(off, exponent)), sweeps=sweep)
        for p in range(n - 1):
            for q in range(p + 1, n):
                if work[p, q] != 0:
                    _rotate(work, vectors, p, q)
        sweep += 1
        log.debug(f"sweep {sweep}: off-diagonal norm {float(np.ldexp(_off_diagonal_norm(work), exponent)):.3e}")


def orthonormalize_block(vectors: np.ndarray, cols: IndexSet) -> np.ndarray:
    """
    Replaces the selected columns by an orthonormal basis of their span.

    Modified Gram-Schmidt with one re-orthogonalization pass. Columns
    outside cols are untouched. Raises RankDeficient when a column loses all
    but a 1e-13 fraction of its norm during elimination.
    """
    result = np.array(vectors, dtype=complex)
    cols.check_within(result.shape[1])
    basis = []
    for col in cols.zero_based:
        v = result[:, col].copy()
        original = float(np.linalg.norm(v))
        for _ in range(2):
            for q in basis:
                v -= (q.conj() @ v) * q
        norm = float(np.linalg.norm(v))
        if original == 0.0 or norm < RANK_COLLAPSE * original:
            raise RankDeficient(f"column {col + 1} is linearly dependent on the previous columns")
        v /= norm
        basis.append(v)
        result[:, col] = v
    return result


def orthonormalize_clusters(decomposition: EigenDecomposition, spectrum) -> EigenDecomposition:
    """
    Re-orthonormalizes the eigenvector block of every cluster with multiplicity > 1.
    """
    vectors = decomposition.vectors
    for cluster in spectrum.clusters:
        if cluster.multiplicity > 1:
            vectors = orthonormalize_block(vectors, cluster.member_indices)
    if vectors is decomposition.vectors:
        return decomposition
    return decomposition.with_vectors(vectors)
