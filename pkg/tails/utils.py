"""This module offers some utils for input files and report output."""
import enum
import json
import logging
import math
import os
import sys
import tempfile

import numpy as np
import pandas as pd

from tails.discrete import DiscretePMF, JointPMF
from tails.empirical import PairedSample, SeriesSample
from tails.exceptions import MalformedFile, UnwritableOutput

logger = logging.getLogger(__name__)


def read_matrix(path, columns=None):
    """Reads a header free numeric CSV file, '#' lines are comments.
    :param path: Path of the CSV file
    :param columns: Expected number of columns, any if None
    :return: 2-d float array
    """
    logger.info("Loading numeric table from '%s'", path)
    try:
        frame = pd.read_csv(path, comment="#", header=None, skipinitialspace=True)
        matrix = frame.apply(pd.to_numeric, errors="raise").to_numpy(dtype=float)
    except OSError as error:
        raise MalformedFile(path, error.strerror or str(error))
    except pd.errors.EmptyDataError:
        raise MalformedFile(path, "no data")
    except (pd.errors.ParserError, ValueError) as error:
        raise MalformedFile(path, str(error))
    if columns is not None and matrix.shape[1] != columns:
        raise MalformedFile(path, f"{matrix.shape[1]} columns, expected {columns}")
    return matrix


def read_pairs(path):
    """Reads a two column CSV file of (x, y) observations.
    :param path: Path of the CSV file
    :return: PairedSample
    """
    matrix = read_matrix(path, columns=2)
    return PairedSample(matrix[:, 0], matrix[:, 1])


def read_series(path):
    """Reads a one column CSV file of series values.
    :param path: Path of the CSV file
    :return: SeriesSample
    """
    return SeriesSample(read_matrix(path, columns=1)[:, 0])


def read_margin(path):
    """Reads a two column CSV file of (atom, probability) rows.
    :param path: Path of the CSV file
    :return: DiscretePMF
    """
    matrix = read_matrix(path, columns=2)
    return DiscretePMF(matrix[:, 0], matrix[:, 1])


def read_joint_pmf(path, row_margin=None, col_margin=None):
    """Reads a joint probability mass function.

    Without margin files the first row holds the column atoms and the
    first column the row atoms, the top left cell is ignored. With margin
    files the CSV file is the bare mass matrix.
    :param path: Path of the mass CSV file
    :param row_margin: Optional path of the row margin CSV file
    :param col_margin: Optional path of the column margin CSV file
    :return: JointPMF
    """
    if (row_margin is None) != (col_margin is None):
        raise MalformedFile(path, "both margin files are required")
    matrix = read_matrix(path)
    if row_margin is not None:
        return JointPMF(read_margin(row_margin), read_margin(col_margin), matrix)
    if matrix.shape[0] < 2 or matrix.shape[1] < 2:
        raise MalformedFile(path, "atoms row and column missing")
    return JointPMF.from_mass(matrix[1:, 1:], matrix[1:, 0], matrix[0, 1:])


def jsonable(obj):
    """Converts report content to JSON types, nan and inf become None."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def to_json(obj):
    """Serializes report content with sorted keys, nan as null."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, allow_nan=False)


def atomic_write(path, text):
    """Writes text to a file through a temporary file and a rename, or to
    the standard output when path is None or '-'.
    :param path: Output path
    :param text: Content to write
    """
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    temporary = None
    try:
        handle, temporary = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(handle, "w") as stream:
            stream.write(text)
        os.replace(temporary, path)
    except OSError as error:
        if temporary is not None and os.path.exists(temporary):
            os.remove(temporary)
        raise UnwritableOutput(path, error.strerror or str(error))
    logger.info("Written output to '%s'", path)
