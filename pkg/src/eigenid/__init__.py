from .config import Tolerances
from .eigensolver import EigenDecomposition, eigh, orthonormalize_block, unitarity_defect
from .identity import (
    Identity,
    IdentityEvaluation,
    RhsMethod,
    corollary_component,
    enumerate_minors,
    evaluate_identity,
    lhs_eq1,
    rhs_eq1,
    sum_over_subsets,
    verify_lemma1,
)
from .instances import SpectrumSpec, haar_unitary, hermitian_with_spectrum, random_hermitian
from .linalg import (
    HermitianMatrix,
    IndexSet,
    abs_det_squared,
    determinant,
    hermitian_from_entries,
    principal_minor,
    submatrix_rows,
)
from .spectrum import ClusteredSpectrum, SignedLogReal, char_poly_eval, cluster_eigenvalues, denominator_eq1

__version__ = "0.1.0"
