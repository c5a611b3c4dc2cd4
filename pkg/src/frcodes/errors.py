"""Exception hierarchy. Validation problems are returned as data, not raised."""


class FrCodesError(Exception):
    """Base class for all package errors."""


class ParameterError(FrCodesError, ValueError):
    """Arguments fall outside an operation's parameter domain."""


class EnumerationCapError(FrCodesError):
    """An exhaustive enumeration would exceed its configured cap."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"{count} subsets to enumerate exceeds cap {cap}")
        self.count = count
        self.cap = cap


class InvalidDesignError(FrCodesError):
    """A block design failed validation where a valid one was required."""


class InvalidCodeError(FrCodesError):
    """An FR code failed validation where a valid one was required."""


class BudgetExceededError(FrCodesError):
    """A search ran out of budget; ``best`` is a lower bound, not the optimum."""

    def __init__(self, message: str, best: int | None, witness=None):
        super().__init__(message)
        self.best = best
        self.witness = witness
        self.exact = False


class FieldCapacityError(FrCodesError):
    """Codeword length exceeds what GF(256) supports."""


class InsufficientPacketsError(FrCodesError):
    """Fewer distinct packets than needed to decode."""


class RepairInfeasibleError(FrCodesError):
    """No perfect matching exists for some failed node."""

    def __init__(self, failed: frozenset[int], node: int):
        super().__init__(f"no uncoded repair for node {node} under failure set {sorted(failed)}")
        self.failed = failed
        self.node = node


class ToleranceExceededError(FrCodesError):
    """Too many simultaneous failures for the repetition degree."""


class MissingTableEntryError(FrCodesError):
    pass


class ConsistencyError(FrCodesError):
    """Repair table and system state disagree."""


class FileTooLargeError(FrCodesError):
    pass


class NodeFailedError(FrCodesError):
    """A read contacted a failed node."""


class ScenarioError(FrCodesError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"event {index}: {cause}")
        self.index = index
        self.cause = cause
