"""Atomic file output helpers"""
import os
import tempfile
from pathlib import Path
from typing import Union

import pandas as pd

from utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def write_text_atomic(path: PathLike, text: str) -> Path:
    """Write text to path via a temporary sibling file and rename.

    An interrupted write leaves no partial file behind.

    Args:
        path: Destination file
        text: Full file content

    Returns:
        The destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise

    logger.debug(f"Wrote {target}")
    return target


def write_bytes_atomic(path: PathLike, payload: bytes) -> Path:
    """Binary counterpart of write_text_atomic"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise

    logger.debug(f"Wrote {target}")
    return target


def write_csv_atomic(path: PathLike, frame: pd.DataFrame) -> Path:
    """Write a DataFrame as comma-separated text, atomically"""
    return write_text_atomic(path, frame.to_csv(index=False, float_format="%.10g"))
