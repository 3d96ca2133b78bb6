"""Exception types shared across the package."""


class RadexError(Exception):
    """Base class for every error raised by radex."""


class ParseError(RadexError, ValueError):
    pass


class DomainError(RadexError, ValueError):
    pass


class ConfigError(RadexError, ValueError):
    pass


class FamilyError(RadexError, ValueError):
    """A closed-form family was requested outside its parameter domain."""


class HorizonError(RadexError, IndexError):
    """A table coefficient sequence was read past its last entry."""


class SingularArithmeticError(RadexError, ZeroDivisionError):
    def __init__(self, site):
        super().__init__(f"division by zero in {site}")
        self.site = site


class SingularStepError(RadexError):
    """A denominator of the recurrence vanished while computing index ``step + 1``."""

    def __init__(self, step, equation, factor):
        super().__init__(f"singular at step {step}: {factor} = 0 ({equation} equation)")
        self.step = step
        self.equation = equation
        self.factor = factor


class ForbiddenInstanceError(RadexError):
    """Initial data lies in the forbidden set of a closed-form family.

    ``step`` and ``equation`` locate the failure in the same terms the direct
    iteration uses, so the two can be compared.
    """

    def __init__(self, family, step, equation, condition):
        super().__init__(
            f"{family}: forbidden instance, {condition} "
            f"(singular at step {step}, {equation} equation)"
        )
        self.family = family
        self.step = step
        self.equation = equation
        self.condition = condition


class ReconstructionSingularError(RadexError):
    def __init__(self, step, equation, which):
        super().__init__(f"cannot reconstruct index {step + 1}: {which} = 0")
        self.step = step
        self.equation = equation
        self.which = which
