import csv
import math
from dataclasses import dataclass
from os import path as os_path

import numpy as np
from core_data_modules.logging import Logger

from src.common.errors import DatasetError

log = Logger(__name__)

_COMMENT_PREFIX = "#"


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    :param name: Name of the dataset.
    :param values: Lifetimes, all finite and > 0.
    :param source_path: File the values were read from.
    """
    name: str
    values: np.ndarray
    source_path: str

    def __post_init__(self):
        assert len(self.values) > 0, f"Dataset {self.name} is empty"
        assert np.all(np.isfinite(self.values)) and np.all(self.values > 0), \
            f"Dataset {self.name} has values that are not finite and > 0"

    @property
    def n(self):
        return len(self.values)


def _parse_lifetime(text, file_path, line_number):
    try:
        value = float(text)
    except ValueError:
        raise DatasetError(f"'{text}' is not a number", file_path, line_number)
    if not (math.isfinite(value) and value > 0):
        raise DatasetError(f"Lifetimes must be finite and > 0, but got {text}", file_path, line_number)
    return value


def _is_number(text):
    try:
        float(text)
        return True
    except ValueError:
        return False


def _read_plain(lines, file_path):
    values = []
    for line_number, text in lines:
        fields = text.split()
        if len(fields) != 1:
            raise DatasetError(f"Expected one value per line, but found {len(fields)}", file_path, line_number)
        values.append(_parse_lifetime(fields[0], file_path, line_number))
    return values


def _read_csv(lines, file_path, column):
    header_line_number, header_text = lines[0]
    header = [h.strip() for h in next(csv.reader([header_text]))]
    if column is None:
        if len(header) != 1:
            raise DatasetError(f"CSV has columns {header}; choose one with --column", file_path, header_line_number)
        column = header[0]
    if column not in header:
        raise DatasetError(f"CSV has no column '{column}' (columns are {header})", file_path, header_line_number)
    index = header.index(column)

    values = []
    for line_number, text in lines[1:]:
        row = next(csv.reader([text]))
        if len(row) != len(header):
            raise DatasetError(f"Expected {len(header)} fields, but found {len(row)}", file_path, line_number)
        values.append(_parse_lifetime(row[index].strip(), file_path, line_number))
    return values


def load_dataset(file_path, column=None, name=None):
    """
    Loads a vector of lifetimes from a text file.

    Two formats are accepted: one value per line, or a CSV whose first non-comment line is a header, with `column`
    selecting the field (optional if there is only one). Blank lines and lines starting with '#' are skipped.

    :param file_path: Path to the file.
    :type file_path: str
    :param column: CSV column to read.
    :type column: str | None
    :param name: Dataset name. Defaults to the file's name without its extension.
    :type name: str | None
    :rtype: Dataset
    :raises DatasetError: if the file is malformed, with the offending line number.
    """
    if name is None:
        name = os_path.splitext(os_path.basename(file_path))[0]

    try:
        with open(file_path, "r", encoding="utf-8") as f:
            raw_lines = f.readlines()
    except OSError as e:
        raise DatasetError(f"Could not read dataset: {e.strerror}", file_path)

    lines = [(i + 1, line.strip()) for i, line in enumerate(raw_lines)]
    lines = [(i, text) for i, text in lines if text != "" and not text.startswith(_COMMENT_PREFIX)]
    if len(lines) == 0:
        raise DatasetError("Dataset has no values", file_path)

    first = lines[0][1]
    is_csv = "," in first or not _is_number(first)
    if is_csv:
        values = _read_csv(lines, file_path, column)
    else:
        if column is not None:
            log.warning(f"{file_path} is a one-column file; ignoring --column {column}")
        values = _read_plain(lines, file_path)

    if len(values) == 0:
        raise DatasetError("Dataset has no values", file_path)
    log.info(f"Loaded {len(values)} lifetimes from {file_path}")
    return Dataset(name, np.array(values), file_path)
