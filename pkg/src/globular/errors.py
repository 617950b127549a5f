"""Shared exception types for the globular engine."""


class GlobularError(Exception):
    """Base class for domain errors (distinct from usage errors)."""


class DimensionMismatch(GlobularError):
    pass


class InvalidTable(GlobularError):
    pass


class NotParallel(GlobularError):
    """The two arrows do not restrict equally to their boundary."""


class NotAdmissible(GlobularError):
    """Lifting requested for a pair outside the admissible class."""


class InvalidPair(GlobularError):
    """Pair references symbols that are not available at this stage."""


class CoherenceFailure(GlobularError):
    """A pair of boundary operations evaluates to different cells in a model."""

    def __init__(self, pair, args, message=""):
        super().__init__(message or f"boundary operations disagree at {args!r}")
        self.pair = pair
        self.args = args


class ProviderFailure(GlobularError):
    """A lifting provider could not resolve a pair."""

    def __init__(self, pair, message=""):
        super().__init__(message or "no lifting available for the requested pair")
        self.pair = pair


class EvalError(GlobularError):
    pass
