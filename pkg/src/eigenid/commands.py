"""
The check, gen and lemma1 commands. Each returns the process exit code.
"""

import argparse
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Tuple

from .config import MatrixFile, Settings, Tolerances
from .eigensolver import unitarity_defect
from .errors import SubsetSizeMismatch, SweepTooLarge
from .identity import BlockPartition, Identity, IdentityEvaluation, RhsMethod, enumerate_minors, verify_lemma1
from .instances import SpectrumSpec, hermitian_with_spectrum
from .linalg import IndexSet, hermitian_from_entries
from .modules.file import File
from .modules.logger import Log
from .report import Lemma1Result, build_report

log = Log("eigenid")

Task = Tuple[int, IndexSet]


def load_tolerances(args: argparse.Namespace) -> Tolerances:
    tolerances = Tolerances.load(args.config) if getattr(args, "config", None) else Tolerances()
    return tolerances.merged(
        hermitian_tol=getattr(args, "hermitian_tol", None),
        cluster_tol=getattr(args, "cluster_tol", None),
        eig_tol=getattr(args, "eig_tol", None),
        fail_above=getattr(args, "fail_above", None),
        unitary_tol=getattr(args, "unitary_tol", None),
    )


def parse_subsets(text: str) -> List[IndexSet]:
    """
    Parses 1-based subsets separated by semicolons, ex: "1,2;1,3".
    """
    return [IndexSet.parse(part) for part in text.split(";")]


def select_clusters(identity: Identity, cluster: str) -> List[int]:
    count = len(identity.spectrum.clusters)
    if cluster.strip().lower() == "all":
        return list(range(1, count + 1))
    index = int(cluster)
    identity.spectrum.cluster(index)
    return [index]


def plan_sweep(
    identity: Identity, clusters: List[int], subsets: str, max_subsets: int, force: bool = False
) -> Tuple[List[Task], bool]:
    """
    The (cluster, S) pairs to evaluate, ordered by cluster then lexicographic S,
    and whether every cluster gets a full sweep.
    """
    n = identity.matrix.n
    tasks: List[Task] = []
    if subsets.strip().lower() == "all":
        for index in clusters:
            multiplicity = identity.spectrum.cluster(index).multiplicity
            count = math.comb(n, multiplicity)
            if count > max_subsets and not force:
                raise SweepTooLarge(count=count, limit=max_subsets)
            tasks.extend((index, subset) for subset in enumerate_minors(n, multiplicity))
        return tasks, True

    explicit = sorted(set(parse_subsets(subsets)), key=lambda subset: subset.members)
    for subset in explicit:
        subset.check_within(n)
    used = set()
    for index in clusters:
        multiplicity = identity.spectrum.cluster(index).multiplicity
        for subset in explicit:
            if len(subset) == multiplicity:
                tasks.append((index, subset))
                used.add(subset)
    unmatched = [str(subset) for subset in explicit if subset not in used]
    if unmatched:
        raise SubsetSizeMismatch(
            f"subsets {unmatched} match the multiplicity of no selected cluster "
            f"(multiplicities {[identity.spectrum.cluster(index).multiplicity for index in clusters]})"
        )
    return tasks, False


def run_sweep(identity: Identity, tasks: List[Task], threads: int, method: RhsMethod) -> List[IdentityEvaluation]:
    """
    Evaluates every task; results keep the task order whatever the thread count.
    """

    def evaluate(task: Task) -> IdentityEvaluation:
        index, subset = task
        return identity.evaluate(index, subset, method=method)

    if threads <= 1 or len(tasks) <= 1:
        return [evaluate(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(evaluate, tasks))


def cmd_check(args: argparse.Namespace) -> int:
    tolerances = load_tolerances(args)
    method = RhsMethod(args.method)
    file = File()

    matrix_file, digest = file.read_matrix(args.matrix)
    matrix = hermitian_from_entries(matrix_file.to_array(), hermitian_tol=tolerances.hermitian_tol)
    identity = Identity(matrix, tolerances)
    decomposition = identity.decomposition
    log.info(
        f"Eigendecomposition: {decomposition.sweeps} sweep(s), residual {decomposition.residual:.3e}, "
        f"unitarity defect {decomposition.unitarity_defect:.3e}"
    )
    log.spectrum(identity.spectrum)
    log.gap_warning(identity.spectrum.gap_margin, tolerances.gap_warning)

    clusters = select_clusters(identity, args.cluster)
    tasks, full_sweep = plan_sweep(identity, clusters, args.subsets, tolerances.max_subsets, args.force)
    threads = args.threads if args.threads else Settings.from_environ().threads
    log.info(f"Evaluating {len(tasks)} (cluster, subset) pair(s) on {threads} thread(s)")
    evaluations = run_sweep(identity, tasks, threads, method)
    for evaluation in evaluations:
        log.evaluation(evaluation)

    subset_sums: Dict[int, float] = {}
    if full_sweep:
        for index in clusters:
            subset_sums[index] = math.fsum(
                evaluation.lhs for evaluation in evaluations if evaluation.cluster_index == index
            )

    report = build_report(identity, evaluations, digest, method=method, subset_sums=subset_sums)
    fmt = file.get_format(args.format, args.out)
    file.write(report.to_csv() if fmt == "csv" else report.to_json(), args.out)

    log.info(f"max rel_err {report.summary.max_rel_err:.3e} (fail above {tolerances.fail_above:g})")
    if not report.summary.passed:
        log.failed(f"max rel_err {report.summary.max_rel_err:.3e} exceeds {tolerances.fail_above:g}")
        return 1
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    spec = SpectrumSpec.parse(args.spectrum)
    log.info(f"Generating n = {spec.n} matrix with spectrum {spec}, seed {args.seed}")
    matrix = hermitian_with_spectrum(spec, seed=args.seed)
    File().write(MatrixFile.from_array(matrix.entries).dumps(), args.out)
    return 0


def cmd_lemma1(args: argparse.Namespace) -> int:
    tolerances = load_tolerances(args)
    file = File()
    matrix_file, _ = file.read_matrix(args.matrix)
    matrix = matrix_file.to_array()

    p11, p22 = verify_lemma1(matrix, args.split, unitary_tol=tolerances.unitary_tol)
    partition = BlockPartition(matrix, args.split)
    top, bottom = partition.complement_determinants()
    difference = abs(p11 - p22)
    result = Lemma1Result(
        n=matrix_file.n,
        r=args.split,
        p11=p11,
        p22=p22,
        difference=difference,
        complement_top=top,
        complement_bottom=bottom,
        unitarity_defect=unitarity_defect(matrix),
        holds=difference <= tolerances.lemma1_tol,
    )
    file.write(result.to_json(), args.out)
    if not result.holds:
        log.failed(f"|det P11|^2 and |det P22|^2 differ by {difference:.3e}")
        return 1
    return 0


COMMANDS = {
    "check": cmd_check,
    "gen": cmd_gen,
    "lemma1": cmd_lemma1,
}
