import argparse
from typing import List, Optional


class Cli:
    def __init__(self) -> None:
        pass

    @property
    def formats(self) -> List[str]:
        return ["json", "csv"]

    @property
    def methods(self) -> List[str]:
        return ["eigenvalues", "determinant"]

    def _common(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "-v",
            "--verbose",
            action="store_true",
            help="Log debug messages to stderr.",
        )
        parser.add_argument(
            "--config",
            type=str,
            required=False,
            help="YAML file of tolerances, ex: {eig_tol: 1e-13, cluster_tol: 1e-9}. Flags override it.",
        )
        parser.add_argument(
            "--out",
            type=str,
            required=False,
            help="Output path. Writes to stdout when omitted.",
        )

    def parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="eigenid",
            description="Eigenvector block determinants of Hermitian matrices from eigenvalues.",
        )
        commands = parser.add_subparsers(dest="command", required=True)

        check = commands.add_parser("check", help="Verify the identity on a Hermitian matrix file.")
        self._common(check)
        check.add_argument("--matrix", type=str, required=True, help="Matrix JSON file.")
        check.add_argument(
            "--cluster",
            type=str,
            default="all",
            help="1-based cluster index in ascending eigenvalue order, or 'all' (default: %(default)s).",
        )
        check.add_argument(
            "--subsets",
            type=str,
            default="all",
            help="'all' or 1-based subsets separated by semicolons, ex: \"1,2;1,3\" (default: %(default)s).",
        )
        check.add_argument("--hermitian-tol", type=float, default=None, help="Hermitian defect tolerance.")
        check.add_argument("--cluster-tol", type=float, default=None, help="Relative clustering tolerance.")
        check.add_argument("--eig-tol", type=float, default=None, help="Jacobi convergence tolerance.")
        check.add_argument("--fail-above", type=float, default=None, help="Largest accepted rel_err.")
        check.add_argument("--format", type=str, choices=self.formats, default=None, help="Report format.")
        check.add_argument("--method", type=str, choices=self.methods, default="eigenvalues", help="RHS numerator.")
        check.add_argument("--threads", type=int, default=None, help="Sweep threads, overrides EIGENID_THREADS.")
        check.add_argument(
            "--force",
            action="store_true",
            help="Run full subset sweeps even beyond the subset count limit.",
        )

        gen = commands.add_parser("gen", help="Write a Hermitian matrix with a prescribed spectrum.")
        self._common(gen)
        gen.add_argument(
            "--spectrum",
            type=str,
            required=True,
            help="Values with multiplicities, ex: \"1:2,2:1\".",
        )
        gen.add_argument("--seed", type=int, default=0, help="64-bit seed (default: %(default)s).")

        lemma1 = commands.add_parser("lemma1", help="Compare |det P11|^2 and |det P22|^2 of a unitary matrix.")
        self._common(lemma1)
        lemma1.add_argument("--matrix", type=str, required=True, help="Matrix JSON file.")
        lemma1.add_argument("--split", type=int, required=True, help="Order r of the top-left block.")
        lemma1.add_argument("--unitary-tol", type=float, default=None, help="Unitarity defect tolerance.")
        return parser

    def parse_arguments(self, argv: Optional[List[str]] = None) -> argparse.Namespace:
        return self.parser().parse_args(argv)
