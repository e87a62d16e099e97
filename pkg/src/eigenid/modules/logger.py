import sys

from logbook import INFO, Logger, StreamHandler

FORMAT_STRING = "[{record.time:%Y-%m-%d %H:%M:%S}] {record.level_name}: {record.message}"


def stderr_handler(level: int = INFO) -> StreamHandler:
    """
    The cli's stderr handler. Bind it around a command run, ex:
    with stderr_handler(DEBUG).applicationbound(): ...
    Stdout stays free for reports.
    """
    handler = StreamHandler(sys.stderr, level=level, bubble=False)
    handler.format_string = FORMAT_STRING
    return handler


class Log(Logger):
    def __init__(self, name: str = "eigenid") -> None:
        """
        Sets logging and inherits from Logger.
        Records go to whatever handlers the host application has bound.
        """
        super().__init__(name)

    def spectrum(self, spec) -> None:
        """
        Logs the clustered spectrum, one line per cluster.
        """
        self.info(f"{len(spec.clusters)} distinct eigenvalue(s), n = {spec.n}")
        for index, cluster in enumerate(spec.clusters, start=1):
            self.info(f"  cluster {index}: value {cluster.value:.12g}, multiplicity {cluster.multiplicity}")

    def gap_warning(self, margin: float, threshold: float) -> None:
        """
        Warns when eigenvalue clusters nearly merge.
        """
        if margin < threshold:
            self.warning(
                f"Cluster gap margin {margin:.3g} is below {threshold:g}; multiplicities may be ambiguous."
            )

    def evaluation(self, evaluation) -> None:
        """
        Logs one identity evaluation.
        """
        self.debug(
            f"cluster {evaluation.cluster_index} S={list(evaluation.subset.members)}: "
            f"lhs {evaluation.lhs:.15g} rhs {evaluation.rhs:.15g} rel_err {evaluation.rel_err:.3e}"
        )

    def failed(self, message: str) -> None:
        """
        Logs a failure that ends the command.
        """
        self.error(f"-> {message}")
