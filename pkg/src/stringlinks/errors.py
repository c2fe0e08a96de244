"""Exception types shared across the package."""


class TangleError(Exception):
    """Base class for all diagram and invariant errors."""


class MalformedWord(TangleError):
    """Event positions or active-point counts are structurally impossible."""


class NotAStringLink(TangleError):
    """Open word whose strands do not run bottom-to-top in order."""


class ArityMismatch(TangleError):
    """Operation applied to a word with the wrong strand count or boundary type."""


class EmptySelection(TangleError):
    """Sublink extraction with an empty strand set."""


class BadCrossingId(TangleError):
    """Crossing identifier out of range or of the wrong kind."""


class NotClosed(TangleError):
    """Closed-diagram oracle applied to an open word."""


class SingularInput(TangleError):
    """Non-singular operation applied to a word with double points."""


class MultiComponent(TangleError):
    """Knot-only oracle applied to a multi-component diagram."""


class RecursionBudgetExceeded(TangleError):
    """Diagram exceeds the configured crossing budget of the skein recursion."""


class UnknownName(TangleError):
    """No built-in weight system with the requested name."""


class UnvalidatedWeight(TangleError):
    """Weight system used in a state sum before 1T/4T validation."""


class NotOrderTwo(TangleError):
    """Evaluator fails the three-double-point vanishing probe."""


class NotInSL2(TangleError):
    """C3-classification requested for a word with nonzero linking numbers."""


class Inconsistent(TangleError):
    """Calibration system has no (integral) solution."""


class Underdetermined(TangleError):
    """Calibration system has a nontrivial kernel; carries the kernel basis."""

    def __init__(self, message, kernel=()):
        super().__init__(message)
        self.kernel = tuple(kernel)


class ParseError(TangleError):
    """Rejected diagram text; carries line-numbered diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        first = next((d for d in self.diagnostics if d.severity == "error"), None)
        msg = f"line {first.line}: {first.message}" if first else "parse failed"
        super().__init__(msg)
