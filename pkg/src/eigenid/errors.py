class EigenIdError(Exception):
    """
    Base class for every error raised by eigenid.
    exit_code is the process exit status the cli reports for the error.
    """

    exit_code: int = 1


class ConfigError(EigenIdError, ValueError):
    exit_code = 2


class NotSquare(EigenIdError, ValueError):
    exit_code = 2

    def __init__(self, shape: tuple) -> None:
        self.shape = shape
        super().__init__(f"Matrix must be square, got shape {shape}")


class NotFinite(EigenIdError, ValueError):
    exit_code = 2


class NotHermitian(EigenIdError, ValueError):
    exit_code = 3

    def __init__(self, defect: float, tolerance: float) -> None:
        self.defect = defect
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tolerance:.3e}"
        )


class NotUnitary(EigenIdError, ValueError):
    exit_code = 3

    def __init__(self, defect: float, tolerance: float) -> None:
        self.defect = defect
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not unitary: defect {defect:.3e} exceeds tolerance {tolerance:.3e}"
        )


class IndexOutOfRange(EigenIdError, IndexError):
    exit_code = 2


class SizeMismatch(EigenIdError, ValueError):
    exit_code = 2


class SubsetSizeMismatch(SizeMismatch):
    pass


class MultiplicityNotOne(EigenIdError, ValueError):
    exit_code = 2


class NoConvergence(EigenIdError, ArithmeticError):
    exit_code = 4

    def __init__(self, off_diag_norm: float, sweeps: int) -> None:
        self.off_diag_norm = off_diag_norm
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal norm {off_diag_norm:.3e})"
        )


class RankDeficient(EigenIdError, ArithmeticError):
    pass


class CharPolyOverflow(EigenIdError, OverflowError):
    pass


class DegenerateDenominator(EigenIdError, ArithmeticError):
    pass


class NegativeRightHandSide(EigenIdError, ArithmeticError):
    def __init__(self, value: float, tolerance: float) -> None:
        self.value = value
        self.tolerance = tolerance
        super().__init__(
            f"Right-hand side {value:.3e} is negative beyond tolerance {tolerance:.3e}; "
            "clustering or eigensolving failed"
        )


class SpectrumParseError(EigenIdError, ValueError):
    exit_code = 2


class SweepTooLarge(EigenIdError, ValueError):
    exit_code = 2

    def __init__(self, count: int, limit: int) -> None:
        self.count = count
        self.limit = limit
        super().__init__(
            f"Full subset sweep needs {count} subsets (limit {limit}); pass --force to run it"
        )
