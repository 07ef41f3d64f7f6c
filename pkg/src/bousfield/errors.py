"""Exception types shared across the package."""


class BousfieldError(Exception):
    """Base class for all package errors."""


class NonInvertibleDenominator(BousfieldError):
    """Denominator is not a unit in the requested coefficient ring."""


class SpecMismatch(BousfieldError):
    """Operands live over different algebra specifications."""


class NonPLocalInput(BousfieldError):
    """A p-local complex was required."""


class EvaluationError(BousfieldError):
    """A catalog expression could not be evaluated."""


class UnroutablePair(BousfieldError):
    """No tensor routing exists between the two coefficient homes."""


class InconclusiveNullity(BousfieldError):
    """The nullity matrix contains entries that did not stabilize."""

    def __init__(self, entries):
        super().__init__(f"inconclusive nullity entries: {entries}")
        self.entries = tuple(entries)


class MissingJoinWitness(BousfieldError):
    """The catalog holds no object realizing a requested join or tensor."""


class InvalidIdeal(BousfieldError):
    """Subset is not a lattice ideal."""


class NotUnital(BousfieldError):
    """Operation requires a model whose top element is a tensor unit."""


class NotComplementedPair(BousfieldError):
    """The two elements do not tensor to bottom and join to top."""


class AxiomViolation(BousfieldError):
    """A finite tensor lattice failed validation."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)


class GenerationFailure(BousfieldError):
    """The random model generator exhausted its retry budget."""


class ConfigError(BousfieldError):
    """Invalid configuration value."""
