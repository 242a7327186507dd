"""Exception hierarchy shared by every module of the package."""


class CantorGapError(Exception):
    """Base class for all errors raised by cantorgap."""


class InvalidSpec(CantorGapError, ValueError):
    """An IFS description violates one of its structural invariants."""


class InvalidParams(CantorGapError, ValueError):
    pass


class DegenerateInput(CantorGapError, ValueError):
    pass


class EmptyRegionList(CantorGapError, ValueError):
    pass


class DomainEscape(CantorGapError):
    """An intermediate point of a composition left the extension disk."""


class BudgetExceeded(CantorGapError):
    pass


class TailBoundUnavailable(CantorGapError):
    pass


class DivergentRecursion(CantorGapError):
    pass


class MismatchedSquares(CantorGapError, ValueError):
    pass


class HypothesisViolated(CantorGapError):
    pass


class CaseSelectionAmbiguous(CantorGapError):
    pass


class ContainmentLost(CantorGapError):
    pass


class NoGaps(CantorGapError, ValueError):
    pass


class NonpositiveTau(CantorGapError, ValueError):
    pass
