"""
Clusters floating point eigenvalues into distinct values with algebraic
multiplicities and evaluates spectral products in sign/log-magnitude form.
"""

import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .errors import CharPolyOverflow, DegenerateDenominator, IndexOutOfRange
from .linalg import IndexSet

LOG_ZERO = float("-inf")
LOG_MAX = math.log(np.finfo(float).max)


class SignedLogReal(BaseModel):
    """
    A real number stored as sign and natural log of its magnitude.
    sign 0 is exact zero and its log_mag is LOG_ZERO.
    """

    model_config = ConfigDict(frozen=True)

    sign: int
    log_mag: float = LOG_ZERO

    @model_validator(mode="after")
    def check_sign(self) -> "SignedLogReal":
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and self.log_mag != LOG_ZERO:
            raise ValueError("zero must have log_mag -inf")
        if self.sign != 0 and math.isnan(self.log_mag):
            raise ValueError("log_mag must not be NaN")
        return self

    @classmethod
    def zero(cls) -> "SignedLogReal":
        return cls(sign=0)

    @classmethod
    def one(cls) -> "SignedLogReal":
        return cls(sign=1, log_mag=0.0)

    @classmethod
    def from_float(cls, value: float) -> "SignedLogReal":
        if math.isnan(value):
            raise ValueError("cannot represent NaN")
        if value == 0:
            return cls.zero()
        return cls(sign=1 if value > 0 else -1, log_mag=math.log(abs(value)))

    @classmethod
    def product(cls, factors: Iterable[float]) -> "SignedLogReal":
        sign = 1
        log_mag = 0.0
        for factor in factors:
            if factor == 0:
                return cls.zero()
            if factor < 0:
                sign = -sign
            log_mag += math.log(abs(factor))
        return cls(sign=sign, log_mag=log_mag)

    def __mul__(self, other: "SignedLogReal") -> "SignedLogReal":
        if self.sign == 0 or other.sign == 0:
            return SignedLogReal.zero()
        return SignedLogReal(sign=self.sign * other.sign, log_mag=self.log_mag + other.log_mag)

    def __truediv__(self, other: "SignedLogReal") -> "SignedLogReal":
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero SignedLogReal")
        if self.sign == 0:
            return SignedLogReal.zero()
        return SignedLogReal(sign=self.sign * other.sign, log_mag=self.log_mag - other.log_mag)

    def __pow__(self, exponent: int) -> "SignedLogReal":
        if exponent < 0:
            raise ValueError("only non-negative integer powers are supported")
        if exponent == 0:
            return SignedLogReal.one()
        if self.sign == 0:
            return self
        return SignedLogReal(sign=self.sign**exponent, log_mag=self.log_mag * exponent)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_mag > LOG_MAX:
            raise CharPolyOverflow(f"log-magnitude {self.log_mag:.6g} exceeds the double range")
        return self.sign * math.exp(self.log_mag)


class EigenvalueCluster(BaseModel):
    """
    A distinct eigenvalue (mean of its members) with its algebraic multiplicity.
    member_indices are 1-based positions in the ascending eigenvalue list.
    """

    model_config = ConfigDict(frozen=True)

    value: float
    multiplicity: int
    member_indices: IndexSet

    @model_validator(mode="after")
    def check_members(self) -> "EigenvalueCluster":
        members = self.member_indices.members
        if self.multiplicity < 1 or self.multiplicity != len(members):
            raise ValueError("multiplicity must equal the number of members and be >= 1")
        if members[-1] - members[0] + 1 != len(members):
            raise ValueError(f"cluster members must be contiguous, got {members}")
        return self


class ClusteredSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True)

    clusters: Tuple[EigenvalueCluster, ...]
    n: int
    gap_margin: float
    cluster_tol: float
    spectral_scale: float

    @model_validator(mode="after")
    def check_clusters(self) -> "ClusteredSpectrum":
        if sum(cluster.multiplicity for cluster in self.clusters) != self.n:
            raise ValueError("multiplicities must sum to n")
        values = [cluster.value for cluster in self.clusters]
        if any(a >= b for a, b in zip(values, values[1:])):
            raise ValueError("cluster values must be strictly increasing")
        return self

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[float, int]], cluster_tol: float = 1e-8) -> "ClusteredSpectrum":
        """
        Builds the spectrum of distinct values with given multiplicities, ex: [(0, 2), (2, 1)].
        """
        values = [value for value, multiplicity in pairs for _ in range(multiplicity)]
        return cluster_eigenvalues(values, cluster_tol=cluster_tol)

    @property
    def values(self) -> Tuple[float, ...]:
        return tuple(cluster.value for cluster in self.clusters)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(cluster.multiplicity for cluster in self.clusters)

    @property
    def threshold(self) -> float:
        return self.cluster_tol * self.spectral_scale

    def cluster(self, index: int) -> EigenvalueCluster:
        """
        The cluster with the given 1-based index.
        """
        if not 1 <= index <= len(self.clusters):
            raise IndexOutOfRange(f"cluster index {index} is outside 1..{len(self.clusters)}")
        return self.clusters[index - 1]

    def index_of(self, value: float, tolerance: Optional[float] = None) -> int:
        """
        1-based index of the cluster nearest to value.
        Raises IndexOutOfRange if it is farther than tolerance (default: the clustering threshold).
        """
        tolerance = self.threshold if tolerance is None else tolerance
        if not self.clusters:
            raise IndexOutOfRange("empty spectrum")
        distances = [abs(cluster.value - value) for cluster in self.clusters]
        index = int(np.argmin(distances))
        if distances[index] > tolerance:
            raise IndexOutOfRange(f"no eigenvalue cluster within {tolerance:.3e} of {value}")
        return index + 1


def cluster_eigenvalues(values: Sequence[float], cluster_tol: float = 1e-8) -> ClusteredSpectrum:
    """
    Greedy single-linkage clustering of ascending eigenvalues.

    Adjacent values whose gap is at most cluster_tol * spectral_scale share a
    cluster, spectral_scale = max(1, max - min). The representative is the
    mean of the members. gap_margin is the smallest gap between clusters
    divided by cluster_tol * spectral_scale (inf with fewer than two clusters).
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    values = [float(value) for value in values]
    if any(a > b for a, b in zip(values, values[1:])):
        raise ValueError("eigenvalues must be sorted ascending")
    if not values:
        return ClusteredSpectrum(
            clusters=(), n=0, gap_margin=math.inf, cluster_tol=cluster_tol, spectral_scale=1.0
        )

    spectral_scale = max(1.0, values[-1] - values[0])
    threshold = cluster_tol * spectral_scale

    groups = [[0]]
    gaps = []
    for position in range(1, len(values)):
        gap = values[position] - values[position - 1]
        if gap <= threshold:
            groups[-1].append(position)
        else:
            gaps.append(gap)
            groups.append([position])

    clusters = tuple(
        EigenvalueCluster(
            value=math.fsum(values[k] for k in group) / len(group),
            multiplicity=len(group),
            member_indices=IndexSet(members=tuple(k + 1 for k in group)),
        )
        for group in groups
    )
    gap_margin = min(gaps) / threshold if gaps else math.inf
    return ClusteredSpectrum(
        clusters=clusters,
        n=len(values),
        gap_margin=gap_margin,
        cluster_tol=cluster_tol,
        spectral_scale=spectral_scale,
    )


def char_poly_eval(spectrum: ClusteredSpectrum, x: float) -> float:
    """
    f_A(x) = prod_i (x - lambda_i)^mu_i, accumulated in sign/log form.
    """
    total = SignedLogReal.one()
    for cluster in spectrum.clusters:
        total = total * SignedLogReal.from_float(x - cluster.value) ** cluster.multiplicity
    return total.to_float()


def denominator_eq1(spectrum: ClusteredSpectrum, index: int) -> SignedLogReal:
    """
    prod_{j != i} (lambda_i - lambda_j)^mu_j for the 1-based cluster index i.
    """
    target = spectrum.cluster(index)
    total = SignedLogReal.one()
    for position, cluster in enumerate(spectrum.clusters, start=1):
        if position == index:
            continue
        difference = target.value - cluster.value
        if abs(difference) <= spectrum.threshold:
            raise DegenerateDenominator(
                f"clusters {index} and {position} are within {spectrum.threshold:.3e}"
            )
        total = total * SignedLogReal.from_float(difference) ** cluster.multiplicity
    return total
