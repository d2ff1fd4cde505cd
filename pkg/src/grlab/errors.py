"""Exception hierarchy shared by all grlab modules."""


class GrlabError(Exception):
    """Base class for toolkit errors."""


class DomainError(GrlabError, ValueError):
    """A parameter is outside its mathematical domain."""


class ResourceError(GrlabError, RuntimeError):
    """A requested computation exceeds the dense-algebra budget."""


class UnsupportedCaseError(GrlabError, ValueError):
    """The parameter combination is not covered by any known formula."""


class ConstantUnavailableError(UnsupportedCaseError):
    """A Pickands/Piterbarg constant has no exact value and no attached estimate."""


class InsufficientSamplesError(GrlabError, RuntimeError):
    """Too few Monte Carlo hits to form the requested estimate."""


class FieldBuildError(GrlabError, RuntimeError):
    """The requested covariance is not positive semidefinite on the grid."""


class DiagnosticsError(GrlabError, RuntimeError):
    """An internal sanity guard tripped, indicating a parameter bug."""
