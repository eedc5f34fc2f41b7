"""
Dataset loading and preprocessing
Instance matrices with optional ground-truth labels, plus the two input transforms
(z-score for Gaussian visible units, min-max for binary visible units)
"""

import logging
import re
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.errors import DataFormatError, EmptyInputError, PreprocessingStateError

logger = logging.getLogger(__name__)

RAW = "raw"
STANDARDIZED = "standardized"
UNIT_INTERVAL = "unit_interval"
PREPROCESSING_STATES = (RAW, STANDARDIZED, UNIT_INTERVAL)


class ConstantColumnWarning(UserWarning):
    pass


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Dataset:
    """N x M instance matrix; labels are remapped to 0..C-1, originals kept in label_names"""

    values: np.ndarray
    labels: Optional[np.ndarray] = None
    label_names: Tuple[str, ...] = ()
    preprocessing: str = RAW
    constant_columns: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DataFormatError(f"expected a non-empty 2-D matrix, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DataFormatError("matrix contains NaN or Inf entries")
        if self.preprocessing not in PREPROCESSING_STATES:
            raise ValueError(f"unknown preprocessing state '{self.preprocessing}'")
        object.__setattr__(self, "values", _frozen(values))

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if labels.shape != (values.shape[0],):
                raise DataFormatError(
                    f"labels length {labels.shape[0] if labels.ndim else 0} != N={values.shape[0]}"
                )
            n_classes = int(labels.max()) + 1 if labels.size else 0
            if labels.min() < 0 or len(np.unique(labels)) != n_classes:
                raise DataFormatError("labels must cover 0..C-1 with every class present")
            object.__setattr__(self, "labels", _frozen(labels))

    @property
    def n_instances(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> Optional[int]:
        if self.labels is None:
            return None
        return int(self.labels.max()) + 1

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def with_values(self, values: np.ndarray, preprocessing: str) -> "Dataset":
        """Same labels, new matrix"""
        return replace(self, values=values, preprocessing=preprocessing, constant_columns=())


def encode_labels(raw_labels) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """Map opaque identifiers to contiguous 0..C-1 (sorted identifier order)"""
    codes, uniques = pd.factorize(pd.Series(raw_labels, dtype=str), sort=True)
    return codes.astype(np.int64), tuple(str(u) for u in uniques)


def _line_number(message: str) -> Optional[int]:
    match = re.search(r"line (\d+)", message)
    return int(match.group(1)) if match else None


def load_csv(
    path: str,
    label_column: Optional[int] = None,
    delimiter: str = ",",
    has_header: bool = False,
) -> Dataset:
    """
    Read a delimited text file into a raw Dataset

    Args:
        path: UTF-8 text file of decimal floats
        label_column: column index holding class identifiers (negative counts from the end)
        delimiter: field separator
        has_header: skip the first line

    Returns:
        Dataset with preprocessing=raw
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise FileNotFoundError(f"dataset file not found: {path}")

    header_offset = 1 if has_header else 0
    try:
        frame = pd.read_csv(
            file_path,
            sep=delimiter,
            header=None,
            skiprows=header_offset,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=True,
            encoding="utf-8",
            engine="python",
        )
    except pd.errors.EmptyDataError:
        raise EmptyInputError(str(path))
    except pd.errors.ParserError as e:
        line = _line_number(str(e))
        raise DataFormatError("ragged rows", row=line)

    if frame.empty:
        raise EmptyInputError(str(path))

    # Short rows come back padded with None
    cells = frame.to_numpy(dtype=object)
    missing = np.argwhere(pd.isna(frame).to_numpy())
    if len(missing):
        row = int(missing[0][0])
        raise DataFormatError("ragged rows", row=row + 1 + header_offset)

    n_cols = cells.shape[1]
    labels = None
    label_names: Tuple[str, ...] = ()
    value_columns = list(range(n_cols))
    if label_column is not None:
        if not -n_cols <= label_column < n_cols:
            raise DataFormatError(f"label column {label_column} out of range for {n_cols} columns")
        label_index = label_column % n_cols
        value_columns.remove(label_index)
        labels, label_names = encode_labels([str(c).strip() for c in cells[:, label_index]])
        if not value_columns:
            raise DataFormatError("no feature columns left after removing the label column")

    values = np.empty((cells.shape[0], len(value_columns)), dtype=np.float64)
    for out_col, src_col in enumerate(value_columns):
        column = pd.to_numeric(pd.Series(cells[:, src_col]).str.strip(), errors="coerce")
        parsed = column.to_numpy(dtype=np.float64)
        bad = np.flatnonzero(~np.isfinite(parsed))
        if len(bad):
            row = int(bad[0])
            raise DataFormatError(
                f"unparseable cell '{cells[row, src_col]}'",
                row=row + 1 + header_offset,
                column=src_col + 1,
            )
        values[:, out_col] = parsed

    logger.info(f"[DataIO] ✅ Loaded {file_path.name}: N={values.shape[0]}, M={values.shape[1]}"
                + (f", classes={len(label_names)}" if labels is not None else ""))
    return Dataset(values=values, labels=labels, label_names=label_names, preprocessing=RAW)


def write_csv(d: Dataset, path: str, delimiter: str = ",") -> Path:
    """Write values (and original label identifiers as the last column) without a header"""
    frame = pd.DataFrame(d.values)
    if d.labels is not None:
        frame[frame.shape[1]] = [d.label_names[c] if d.label_names else str(c) for c in d.labels]
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, sep=delimiter, header=False, index=False)
    return out


def _require_raw(d: Dataset, operation: str):
    if d.preprocessing != RAW:
        raise PreprocessingStateError(
            f"{operation} requires a raw dataset, got preprocessing={d.preprocessing}"
        )


def standardize(d: Dataset) -> Dataset:
    """Per-column z-score with population (1/N) variance; constant columns become zeros"""
    _require_raw(d, "standardize")
    values = d.values
    mean = values.mean(axis=0)
    std = values.std(axis=0)
    constant = (np.ptp(values, axis=0) == 0) | (std == 0)

    safe_std = np.where(constant, 1.0, std)
    scaled = (values - mean) / safe_std
    scaled[:, constant] = 0.0

    constant_columns = tuple(int(c) for c in np.flatnonzero(constant))
    if constant_columns:
        message = f"constant columns mapped to zero: {list(constant_columns)}"
        warnings.warn(message, ConstantColumnWarning, stacklevel=2)
        logger.warning(f"[DataIO] ⚠️ {message}")

    return replace(d, values=scaled, preprocessing=STANDARDIZED, constant_columns=constant_columns)


def scale_unit_interval(d: Dataset) -> Dataset:
    """Per-column min-max scaling into [0, 1]; constant columns become 0.5"""
    _require_raw(d, "scale_unit_interval")
    values = d.values
    low = values.min(axis=0)
    high = values.max(axis=0)
    span = high - low
    constant = span == 0

    scaled = (values - low) / np.where(constant, 1.0, span)
    scaled[:, constant] = 0.5
    np.clip(scaled, 0.0, 1.0, out=scaled)

    constant_columns = tuple(int(c) for c in np.flatnonzero(constant))
    return replace(d, values=scaled, preprocessing=UNIT_INTERVAL, constant_columns=constant_columns)
