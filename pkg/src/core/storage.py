"""
Atomic file output: every artifact is written to a temporary file in the
target directory and renamed into place.
"""

import logging
import os
import tempfile
from pathlib import Path
from typing import Union

import pandas as pd

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write text to path via temp file + rename.

    Example:
        >>> atomic_write_text("results/summary.md", "# Run\\n")
        PosixPath('results/summary.md')
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(temp_name, target)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    logger.debug("Wrote %s", target)
    return target


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    """CSV with full float precision and no index column."""
    return atomic_write_text(path, frame.to_csv(index=False, float_format="%.17g", lineterminator="\n"))
