# Error hierarchy shared by the numeric kernel, the pipeline nodes and the CLI
from __future__ import annotations

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3


class OrrPiError(Exception):
    exit_code = EXIT_FAILURE


# -------------------- numeric-core --------------------

class DivisionBySingularJet(OrrPiError):
    pass


class OrderExhausted(OrrPiError):
    pass


class JetMismatch(OrrPiError, ValueError):
    """Binary jet operation on jets with different base points or orders."""


# -------------------- elliptic --------------------

class AgmNonConvergence(OrrPiError):
    pass


class SingularModulus(OrrPiError):
    pass


# -------------------- hyperseries --------------------

class DivergentSeries(OrrPiError):
    pass


class SeriesNonConvergence(OrrPiError):
    pass


class UnsupportedLValue(OrrPiError):
    exit_code = EXIT_USAGE


# -------------------- factorization / translator --------------------

class NewtonNonConvergence(OrrPiError):
    pass


class RecognitionFailure(OrrPiError):
    pass


class NoFamilyError(OrrPiError):
    pass


# -------------------- relations --------------------

class PrecisionExhausted(OrrPiError):
    exit_code = EXIT_PRECISION


class NotRankOne(OrrPiError):
    pass


# -------------------- telescope --------------------

class CertificateNotFound(OrrPiError):
    pass


class NoLinearRelation(OrrPiError):
    pass


# -------------------- cli --------------------

class CatalogError(OrrPiError):
    exit_code = EXIT_USAGE

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def exit_code_for(error: BaseException) -> int:
    """Exit code of an error raised anywhere below the CLI; bad arguments count as usage errors."""
    if isinstance(error, OrrPiError):
        return error.exit_code
    if isinstance(error, (ValueError, TypeError)):
        return EXIT_USAGE
    return EXIT_FAILURE
