import csv
import io
import math
from typing import Dict, List, Optional, Sequence

import pendulum
from pydantic import BaseModel, ConfigDict, model_validator

from .config import Tolerances
from .identity import Identity, IdentityEvaluation, RhsMethod

SUBSET_SUM_TOL = 1e-8

CSV_COLUMNS = [
    "cluster_index",
    "cluster_value",
    "multiplicity",
    "subset",
    "lhs",
    "rhs",
    "abs_err",
    "rel_err",
    "numerator_sign",
    "min_factor",
]


def _finite_or_none(value: Optional[float]) -> Optional[float]:
    if value is None or not math.isfinite(value):
        return None
    return value


class SpectrumSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    values: List[float]
    multiplicities: List[int]
    gap_margin: Optional[float] = None


class ReportRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    cluster_index: int
    cluster_value: float
    multiplicity: int
    subset: List[int]
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    numerator_sign: int
    min_factor: Optional[float] = None

    @model_validator(mode="after")
    def check_subset(self) -> "ReportRecord":
        if len(self.subset) != self.multiplicity:
            raise ValueError("subset size must equal the cluster multiplicity")
        return self

    @classmethod
    def from_evaluation(cls, evaluation: IdentityEvaluation) -> "ReportRecord":
        return cls(
            cluster_index=evaluation.cluster_index,
            cluster_value=evaluation.cluster_value,
            multiplicity=evaluation.multiplicity,
            subset=list(evaluation.subset.members),
            lhs=evaluation.lhs,
            rhs=evaluation.rhs,
            abs_err=evaluation.abs_err,
            rel_err=evaluation.rel_err,
            numerator_sign=evaluation.numerator_sign,
            min_factor=_finite_or_none(evaluation.min_factor),
        )


class ClusterCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    cluster_index: int
    value: float
    multiplicity: int
    subset_sum: Optional[float] = None
    subset_sum_ok: Optional[bool] = None


class Summary(BaseModel):
    model_config = ConfigDict(frozen=True)

    records: int
    max_rel_err: float
    clusters: List[ClusterCheck]
    passed: bool


class Report(BaseModel):
    """
    Machine readable result of a check run.
    Report.model_validate_json(report.model_dump_json()) == report
    """

    model_config = ConfigDict(frozen=True)

    input_digest: str
    generated_at: str
    tolerances: Tolerances
    method: RhsMethod
    residual: float
    unitarity_defect: float
    spectrum: SpectrumSummary
    records: List[ReportRecord]
    summary: Summary

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def to_csv(self) -> str:
        """
        One header row and one row per (cluster, subset).
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in self.records:
            row = record.model_dump()
            row["subset"] = ",".join(str(k) for k in record.subset)
            row["min_factor"] = "" if record.min_factor is None else repr(record.min_factor)
            writer.writerow([row[column] for column in CSV_COLUMNS])
        return buffer.getvalue()


def build_report(
    identity: Identity,
    evaluations: Sequence[IdentityEvaluation],
    input_digest: str,
    method: RhsMethod = RhsMethod.EIGENVALUES,
    subset_sums: Optional[Dict[int, float]] = None,
) -> Report:
    """
    Packs evaluations into a Report. subset_sums maps cluster index to the
    sum of lhs over every subset; pass it only for full sweeps.
    """
    tolerances = identity.tolerances
    spectrum = identity.spectrum
    subset_sums = subset_sums or {}

    selected = sorted({evaluation.cluster_index for evaluation in evaluations})
    clusters = []
    for index in selected:
        cluster = spectrum.cluster(index)
        total = subset_sums.get(index)
        clusters.append(
            ClusterCheck(
                cluster_index=index,
                value=cluster.value,
                multiplicity=cluster.multiplicity,
                subset_sum=total,
                subset_sum_ok=None if total is None else abs(total - 1.0) <= SUBSET_SUM_TOL,
            )
        )

    max_rel_err = max((evaluation.rel_err for evaluation in evaluations), default=0.0)
    return Report(
        input_digest=input_digest,
        generated_at=pendulum.now("UTC").to_iso8601_string(),
        tolerances=tolerances,
        method=method,
        residual=identity.decomposition.residual,
        unitarity_defect=identity.decomposition.unitarity_defect,
        spectrum=SpectrumSummary(
            values=list(spectrum.values),
            multiplicities=list(spectrum.multiplicities),
            gap_margin=_finite_or_none(spectrum.gap_margin),
        ),
        records=[ReportRecord.from_evaluation(evaluation) for evaluation in evaluations],
        summary=Summary(
            records=len(evaluations),
            max_rel_err=max_rel_err,
            clusters=clusters,
            passed=max_rel_err <= tolerances.fail_above,
        ),
    )


class Lemma1Result(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    r: int
    p11: float
    p22: float
    difference: float
    complement_top: float
    complement_bottom: float
    unitarity_defect: float
    holds: bool

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"
