"""
Deterministic test instances: Haar random unitaries and Hermitian matrices
with exactly prescribed, possibly degenerate, spectra.

Streams come from numpy's PCG64 bit generator seeded with the 64-bit seed;
complex Gaussians are drawn by Box-Muller from its uniform doubles.
"""

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from .errors import SpectrumParseError
from .linalg import HermitianMatrix, hermitian_from_entries

SEED_LIMIT = 2**64


class SpectrumSpec(BaseModel):
    """
    Prescribed distinct eigenvalues with multiplicities.

    Examples

    spec = SpectrumSpec.parse("1:2,2:1")
    spec.n           # 3
    spec.expanded()  # array([1., 1., 2.])
    """

    model_config = ConfigDict(frozen=True)

    pairs: Tuple[Tuple[float, int], ...]

    @model_validator(mode="after")
    def check_pairs(self) -> "SpectrumSpec":
        if not self.pairs:
            raise ValueError("spectrum must have at least one value")
        for value, multiplicity in self.pairs:
            if not math.isfinite(value):
                raise ValueError(f"value {value} is not finite")
            if multiplicity < 1:
                raise ValueError(f"multiplicity of {value} must be >= 1, got {multiplicity}")
        values = [value for value, _ in self.pairs]
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ValueError(f"values must be strictly increasing, got {values}")
        return self

    @classmethod
    def parse(cls, text: str) -> "SpectrumSpec":
        """
        Parses "v1:m1,v2:m2,...", ex: "1:2,2:1".
        """
        pairs = []
        try:
            for item in text.split(","):
                value, multiplicity = item.split(":")
                pairs.append((float(value), int(multiplicity)))
            return cls(pairs=tuple(pairs))
        except (ValueError, ValidationError) as error:
            raise SpectrumParseError(f"invalid spectrum {text!r}: {error}") from error

    def __str__(self) -> str:
        return ",".join(f"{value:g}:{multiplicity}" for value, multiplicity in self.pairs)

    @property
    def n(self) -> int:
        return sum(multiplicity for _, multiplicity in self.pairs)

    def expanded(self) -> np.ndarray:
        return np.repeat(
            [value for value, _ in self.pairs], [multiplicity for _, multiplicity in self.pairs]
        ).astype(float)


def _generator(seed: int) -> np.random.Generator:
    if not 0 <= seed < SEED_LIMIT:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def complex_gaussians(rng: np.random.Generator, shape: Tuple[int, ...]) -> np.ndarray:
    """
    Standard complex Gaussians (E|z|^2 = 1) by Box-Muller.
    """
    u1 = 1.0 - rng.random(shape)
    u2 = rng.random(shape)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return radius * (np.cos(angle) + 1j * np.sin(angle)) / np.sqrt(2.0)


def _haar_from(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussians(rng, (n, n)))
    diagonal = np.diag(r)
    magnitudes = np.abs(diagonal)
    phases = np.where(magnitudes > 0, diagonal / np.where(magnitudes > 0, magnitudes, 1.0), 1.0)
    return q * phases


def haar_unitary(n: int, seed: int) -> np.ndarray:
    """
    Haar distributed n x n unitary: QR of a complex Gaussian matrix with the
    phases of R's diagonal moved into Q, so R has a positive diagonal.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return _haar_from(_generator(seed), n)


def hermitian_with_spectrum(spec: SpectrumSpec, seed: int) -> HermitianMatrix:
    """
    U diag(values with multiplicity) U* with U = haar_unitary(n, seed).
    """
    values = spec.expanded()
    unitary = haar_unitary(spec.n, seed)
    matrix = (unitary * values) @ unitary.conj().T
    scale = max(1.0, float(np.max(np.abs(values))))
    return hermitian_from_entries(matrix, hermitian_tol=1e-10 * scale)


def random_hermitian(n: int, seed: int) -> HermitianMatrix:
    """
    (G + G*) / 2 for a complex Gaussian G; all multiplicities are 1 generically.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    gaussian = complex_gaussians(_generator(seed), (n, n))
    return hermitian_from_entries((gaussian + gaussian.conj().T) / 2, hermitian_tol=0.0)
