"""Exception hierarchy.

Every error carries a stable ``code`` that the command-line interface prints
as ``error[CODE]: message``. All classes derive from :class:`ValueError` so
library callers can keep catching the builtin.
"""


class WdstabError(ValueError):
    code = "E_WDSTAB"


# -- ingest -----------------------------------------------------------------
class EmptyInput(WdstabError):
    code = "E_EMPTY_INPUT"


class MalformedRow(WdstabError):
    code = "E_MALFORMED_ROW"


class DuplicateKey(WdstabError):
    code = "E_DUPLICATE_KEY"


class UnknownCountry(WdstabError):
    code = "E_UNKNOWN_COUNTRY"


class UnknownIndicator(WdstabError):
    code = "E_UNKNOWN_INDICATOR"


class InsufficientData(WdstabError):
    code = "E_INSUFFICIENT_DATA"


class DegenerateRange(InsufficientData):
    code = "E_DEGENERATE_RANGE"


class NonFiniteInput(WdstabError):
    code = "E_NON_FINITE"


class NoCompleteRows(WdstabError):
    code = "E_NO_COMPLETE_ROWS"


# -- transforms -------------------------------------------------------------
class NonPositiveInput(WdstabError):
    code = "E_NON_POSITIVE"


class DegenerateData(WdstabError):
    code = "E_DEGENERATE_DATA"


class ZeroVarianceColumn(DegenerateData):
    code = "E_ZERO_VARIANCE_COLUMN"

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} has zero variance")


# -- least squares ----------------------------------------------------------
class TooFewObservations(WdstabError):
    code = "E_TOO_FEW_OBSERVATIONS"


class DuplicateColumnName(WdstabError):
    code = "E_DUPLICATE_COLUMN"


class SingularDesign(WdstabError):
    code = "E_SINGULAR_DESIGN"


class DimensionMismatch(WdstabError):
    code = "E_DIMENSION_MISMATCH"


# -- diagnostics ------------------------------------------------------------
class ZeroTotalVariance(WdstabError):
    code = "E_ZERO_TOTAL_VARIANCE"


class DegenerateDegreesOfFreedom(WdstabError):
    code = "E_DEGENERATE_DOF"


class DegenerateResiduals(WdstabError):
    code = "E_DEGENERATE_RESIDUALS"


class SampleTooSmall(WdstabError):
    code = "E_SAMPLE_TOO_SMALL"


class InvalidAlpha(WdstabError):
    code = "E_INVALID_ALPHA"


class NonPositiveStdErr(WdstabError):
    code = "E_NON_POSITIVE_STD_ERR"


# -- pca --------------------------------------------------------------------
class TooManyComponents(WdstabError):
    code = "E_TOO_MANY_COMPONENTS"


class TooFewComponents(WdstabError):
    code = "E_TOO_FEW_COMPONENTS"


class IndexOutOfRange(WdstabError):
    code = "E_INDEX_OUT_OF_RANGE"


# -- subset search / synthetic data ----------------------------------------
class PoolTooSmall(WdstabError):
    code = "E_POOL_TOO_SMALL"


class InvalidConfig(WdstabError):
    code = "E_INVALID_CONFIG"


class InvalidSpec(WdstabError):
    code = "E_INVALID_SPEC"
