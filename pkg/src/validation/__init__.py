from src.validation.validator import KNOWN_FEATURE_SETS, ConfigValidator, RunConfig

__all__ = ["KNOWN_FEATURE_SETS", "ConfigValidator", "RunConfig"]
