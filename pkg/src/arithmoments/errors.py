from typing import Optional


class ArithMomentsError(Exception):
    kind = "error"

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.field = field


class EmptyRangeError(ArithMomentsError, ValueError):
    kind = "empty_range"


class InvalidProgressionError(ArithMomentsError, ValueError):
    kind = "invalid_progression"


class OutOfRangeError(ArithMomentsError, ValueError):
    kind = "out_of_range"


class FunctionLookupError(ArithMomentsError, LookupError):
    kind = "unknown_function"


class OrderLimitError(ArithMomentsError, ValueError):
    kind = "order_limit"


class DegenerateDistributionError(ArithMomentsError, ValueError):
    kind = "degenerate_distribution"


class ParameterError(ArithMomentsError, ValueError):
    kind = "invalid_parameter"


class EmptyDomainError(ArithMomentsError, ValueError):
    kind = "empty_domain"


class CacheError(ArithMomentsError, ValueError):
    kind = "cache"


class ConfigError(ArithMomentsError, ValueError):
    kind = "config"
