import hashlib
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Tuple

from ..config import MatrixFile
from .logger import Log


class File:
    def __init__(self) -> None:
        self.log = Log("eigenid.file")

    def read_matrix(self, path: str) -> Tuple[MatrixFile, str]:
        """
        : param path: Matrix JSON file, {"n": 2, "entries": [[[re, im], ...], ...]}.
        Returns the parsed MatrixFile and the "sha256:<hex>" digest of the file bytes.
        """
        self.log.info(f"Reading matrix: {path}")
        payload = Path(path).read_bytes()
        digest = "sha256:" + hashlib.sha256(payload).hexdigest()
        matrix_file = MatrixFile.parse(payload.decode("utf-8"))
        self.log.info(f"Matrix of order {matrix_file.n} read, {digest}")
        return matrix_file, digest

    def write(self, payload: str, path: Optional[str] = None) -> None:
        """
        : param payload: The text to write.
        : param path: Target file. Writes to stdout when None.
        The file is written to a temporary file in the target directory first
        and then moved into place.
        """
        if path is None:
            sys.stdout.write(payload)
            sys.stdout.flush()
            return

        target = Path(path)
        self.log.info(f"Writing to: {target}...")
        temporary = None
        try:
            with tempfile.NamedTemporaryFile(
                mode="w", dir=target.parent, prefix=f".{target.name}.", suffix=".tmp", delete=False
            ) as file:
                temporary = Path(file.name)
                file.write(payload)
            os.replace(temporary, target)
        except BaseException:
            if temporary is not None:
                temporary.unlink(missing_ok=True)
            raise
        self.log.info("Write to file completed.")

    def get_format(self, fmt: Optional[str], path: Optional[str]) -> str:
        """
        Returns the report format: the explicit fmt, else "csv" if path ends in .csv, else "json".
        """
        if fmt:
            return fmt
        if path and Path(path).suffix.lower() == ".csv":
            return "csv"
        return "json"
