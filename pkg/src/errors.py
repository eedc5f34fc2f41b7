"""
Exception hierarchy shared by all modules
"""

from typing import Optional


class UcrdError(Exception):
    """Base class for every error raised by the library"""


class DataFormatError(UcrdError, ValueError):
    """Malformed CSV input; carries the 1-based row and column when known"""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column {column}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class EmptyInputError(DataFormatError):
    def __init__(self, path: str = ""):
        super().__init__(f"empty input{': ' + path if path else ''}")


class PreprocessingStateError(UcrdError, ValueError):
    """Operation requested on a Dataset in the wrong preprocessing state"""


class DimensionMismatchError(UcrdError, ValueError):
    pass


class ConfigError(UcrdError, ValueError):
    """Invalid configuration value; `field` names the offending key"""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class DegenerateDataError(UcrdError, ValueError):
    """Median pairwise distance is zero on non-identical input, so the RBF width is undefined"""


class ModelFileError(UcrdError):
    pass


class BadMagicError(ModelFileError):
    pass


class VersionMismatchError(ModelFileError):
    pass


class TruncatedFileError(ModelFileError):
    pass


class InconsistentModelError(ModelFileError):
    pass
