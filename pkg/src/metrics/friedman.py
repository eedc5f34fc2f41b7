"""
Friedman aligned-ranks test
Align each dataset row on its mean, rank all cells jointly, chi-square on algorithm totals
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import gammaincc
from scipy.stats import rankdata

logger = logging.getLogger(__name__)

# aligned values equal up to this many decimals share a midrank
ALIGN_DECIMALS = 12


def _names(given: Optional[Sequence[str]], count: int, prefix: str) -> Tuple[str, ...]:
    if given is None:
        return tuple(f"{prefix}{i}" for i in range(count))
    names = tuple(str(n) for n in given)
    if len(names) != count:
        raise ValueError(f"expected {count} {prefix} names, got {len(names)}")
    return names


@dataclass(frozen=True)
class RankTable:
    """n_d x n_a aligned ranks; rank 1 is the best (largest) aligned value"""

    ranks: np.ndarray
    aligned: Optional[np.ndarray] = None
    datasets: Tuple[str, ...] = ()
    algorithms: Tuple[str, ...] = ()

    def __post_init__(self):
        ranks = np.array(self.ranks, dtype=np.float64, copy=True)
        if ranks.ndim != 2 or ranks.shape[0] < 2 or ranks.shape[1] < 2:
            raise ValueError(f"rank table needs at least 2 datasets x 2 algorithms, got {ranks.shape}")
        n_cells = ranks.size
        if ranks.min() < 1 or ranks.max() > n_cells:
            raise ValueError(f"ranks must lie in [1, {n_cells}]")
        ranks.flags.writeable = False
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "datasets", _names(self.datasets or None, ranks.shape[0], "dataset"))
        object.__setattr__(self, "algorithms", _names(self.algorithms or None, ranks.shape[1], "algorithm"))

    @property
    def n_datasets(self) -> int:
        return self.ranks.shape[0]

    @property
    def n_algorithms(self) -> int:
        return self.ranks.shape[1]

    @property
    def row_totals(self) -> np.ndarray:
        return self.ranks.sum(axis=1)

    @property
    def col_totals(self) -> np.ndarray:
        return self.ranks.sum(axis=0)

    @property
    def average_ranks(self) -> np.ndarray:
        return self.col_totals / self.n_datasets


@dataclass(frozen=True)
class FriedmanResult:
    T: float
    p: float
    dof: int
    degenerate: bool = False
    table: Optional[RankTable] = field(default=None, compare=False, repr=False)

    def __iter__(self) -> Iterator[float]:
        # unpacks as (T, p)
        return iter((self.T, self.p))


def _as_matrix(values) -> Tuple[np.ndarray, Optional[Sequence[str]], Optional[Sequence[str]]]:
    if isinstance(values, pd.DataFrame):
        return values.to_numpy(dtype=np.float64), list(values.index), list(values.columns)
    return np.asarray(values, dtype=np.float64), None, None


def aligned_ranks(values, datasets: Optional[Sequence[str]] = None,
                  algorithms: Optional[Sequence[str]] = None) -> RankTable:
    """
    Rank the row-mean-aligned values of an n_d x n_a performance matrix

    Larger performance values get smaller ranks; ties share midranks.
    A DataFrame supplies dataset (index) and algorithm (column) names.
    """
    matrix, frame_datasets, frame_algorithms = _as_matrix(values)
    if matrix.ndim != 2 or matrix.shape[0] < 2 or matrix.shape[1] < 2:
        raise ValueError(f"need at least 2 datasets x 2 algorithms, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("performance matrix contains NaN or Inf")

    aligned = matrix - matrix.mean(axis=1, keepdims=True)
    rounded = np.round(aligned, ALIGN_DECIMALS)
    ranks = rankdata(-rounded, method="average").reshape(matrix.shape)
    return RankTable(
        ranks=ranks,
        aligned=aligned,
        datasets=tuple(datasets if datasets is not None else frame_datasets or ()),
        algorithms=tuple(algorithms if algorithms is not None else frame_algorithms or ()),
    )


def chi2_upper_tail(statistic: float, dof: int) -> float:
    """P(X >= statistic) for X ~ chi-square(dof), via the regularized upper incomplete gamma"""
    if statistic <= 0:
        return 1.0
    return float(gammaincc(dof / 2.0, statistic / 2.0))


def friedman_aligned(rt: RankTable) -> FriedmanResult:
    """
    T = (n_a - 1) [sum_j R_j^2 - (n_a n_d^2 / 4)(n_a n_d + 1)^2]
        / ([n_a n_d (n_a n_d + 1)(2 n_a n_d + 1) / 6] - (1 / n_a) sum_i R_i^2)

    with R_j the algorithm rank totals and R_i the dataset rank totals.
    """
    n_d, n_a = rt.n_datasets, rt.n_algorithms
    n = n_a * n_d
    dof = n_a - 1

    numerator = dof * (np.sum(rt.col_totals ** 2) - (n_a * n_d ** 2 / 4.0) * (n + 1) ** 2)
    denominator = n * (n + 1) * (2 * n + 1) / 6.0 - np.sum(rt.row_totals ** 2) / n_a

    all_tied = np.all(rt.ranks == rt.ranks.flat[0])
    if all_tied or denominator <= 1e-12 * n ** 3:
        logger.warning(f"[Friedman] ⚠️ degenerate rank table ({n_d}x{n_a}): all aligned values tie")
        return FriedmanResult(T=0.0, p=1.0, dof=dof, degenerate=True, table=rt)

    T = float(max(numerator / denominator, 0.0))
    p = chi2_upper_tail(T, dof)
    logger.info(f"[Friedman] T={T:.4f} (chi2, {dof} dof), p={p:.4g}")
    return FriedmanResult(T=T, p=p, dof=dof, table=rt)


# ============================================
# CSV interchange (header row names algorithms)
# ============================================

def read_metric_grid(path: str) -> pd.DataFrame:
    """Rows = datasets (first column), columns = algorithms"""
    frame = pd.read_csv(path, index_col=0)
    if frame.shape[0] < 2 or frame.shape[1] < 2:
        raise ValueError(f"{path}: metric grid needs >= 2 datasets x >= 2 algorithms, got {frame.shape}")
    frame.index = frame.index.astype(str)
    return frame.astype(np.float64)


def write_metric_grid(frame: pd.DataFrame, path: str) -> Path:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index_label="dataset")
    return out


def rank_table_to_frame(rt: RankTable) -> pd.DataFrame:
    """Ranks with a `total` column per dataset and a `total` / `average` row per algorithm"""
    frame = pd.DataFrame(rt.ranks, index=list(rt.datasets), columns=list(rt.algorithms))
    frame["total"] = rt.row_totals
    totals = list(rt.col_totals) + [float(rt.ranks.sum())]
    averages = list(rt.average_ranks) + [np.nan]
    frame.loc["total"] = totals
    frame.loc["average"] = averages
    frame.index.name = "dataset"
    return frame
