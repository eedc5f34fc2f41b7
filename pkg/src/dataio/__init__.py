from src.dataio.dataset import (
    RAW,
    STANDARDIZED,
    UNIT_INTERVAL,
    ConstantColumnWarning,
    Dataset,
    load_csv,
    scale_unit_interval,
    standardize,
    write_csv,
)

__all__ = [
    "RAW",
    "STANDARDIZED",
    "UNIT_INTERVAL",
    "ConstantColumnWarning",
    "Dataset",
    "load_csv",
    "scale_unit_interval",
    "standardize",
    "write_csv",
]
