"""Outcome exceptions shared across the engines; each maps to a CLI exit code."""


class CombforgeError(Exception):
    exit_code = 1


class BudgetExhausted(CombforgeError):
    """A bounded search ran out of budget.  Never a nonexistence claim."""

    exit_code = 2

    def __init__(self, stage: str, message: str = "", progress: object = None):
        super().__init__(f"[{stage}] budget exhausted" + (f": {message}" if message else ""))
        self.stage = stage
        self.progress = progress


class InvariantViolation(CombforgeError):
    exit_code = 3

    def __init__(self, violation: str, detail: str = ""):
        super().__init__(f"{violation}: {detail}" if detail else violation)
        self.violation = violation
        self.detail = detail


class PreconditionViolation(CombforgeError):
    exit_code = 4


class DualityViolation(PreconditionViolation):
    """The caller asked for the complementary structure where a comb exists."""
