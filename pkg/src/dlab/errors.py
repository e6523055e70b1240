"""Exception types shared across the package."""


class DlabError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    code = "error"
    exit_code = 1


class InsufficientPrecision(DlabError):
    code = "insufficient_precision"
    exit_code = 2


class CapExceeded(DlabError):
    """An enumeration or linear system exceeds the configured size cap."""

    code = "cap_exceeded"
    exit_code = 3


class InvariantViolation(DlabError):
    code = "invariant_violation"


class UnclassifiableInput(DlabError):
    code = "unclassifiable"


class InvalidParams(DlabError):
    code = "invalid_params"


class ExtensionBoundExceeded(DlabError):
    code = "extension_bound_exceeded"


class SnapAmbiguity(DlabError):
    code = "snap_ambiguity"

    def __init__(self, msg, candidates=()):
        super().__init__(msg)
        self.candidates = tuple(candidates)


class IncomparableEndpoints(DlabError):
    code = "incomparable_endpoints"


class IncomparableConstants(DlabError):
    code = "incomparable_constants"


class DualityViolation(DlabError):
    code = "duality_violation"


class NotMuOrdinary(DlabError):
    code = "not_mu_ordinary"
