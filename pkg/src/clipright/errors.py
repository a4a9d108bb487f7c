"""Exception hierarchy shared by all clipright modules.

Everything raised on bad input derives from ClipRightError so the CLI can
map any expected failure to exit code 1.
"""


class ClipRightError(Exception):
    """Base class for all expected clipright failures."""


# -- embedding store ------------------------------------------------------

class MissingFileError(ClipRightError):
    pass


class MalformedRecordError(ClipRightError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number


class DuplicateWorkIdError(ClipRightError):
    pass


class DimensionMismatchError(ClipRightError):
    pass


class ModelMismatchError(ClipRightError):
    pass


class UnknownWorkIdError(ClipRightError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its message; keep it plain
        return self.args[0] if self.args else ""


# -- metric ---------------------------------------------------------------

class ZeroVectorError(ClipRightError):
    pass


# -- rulings dataset ------------------------------------------------------

class MalformedRowError(ClipRightError):
    def __init__(self, line_number: int, reason: str):
        super().__init__(f"row {line_number}: {reason}")
        self.line_number = line_number


class UnknownLabelError(ClipRightError):
    pass


class DuplicatePairIdError(ClipRightError):
    pass


class MissingReportedMetricError(ClipRightError):
    pass


class LengthMismatchError(ClipRightError):
    pass


class EmptyDatasetError(ClipRightError):
    pass


class OutOfRangeError(ClipRightError):
    pass


class InsufficientClassesError(ClipRightError):
    pass


# -- influence ------------------------------------------------------------

class EmptyTrainingSetError(ClipRightError):
    pass


class SingularSystemError(ClipRightError):
    pass


class InfluenceOutputMismatchError(ClipRightError):
    pass


class ZeroTotalRawError(ClipRightError):
    pass


# -- compensation schemes -------------------------------------------------

class ZeroDisplacedError(ClipRightError):
    pass


class HoldingsExceedDatasetError(ClipRightError):
    pass


class ZeroFameTotalError(ClipRightError):
    pass


class UnknownSchemeError(ClipRightError):
    pass


class ConfigError(ClipRightError):
    pass
