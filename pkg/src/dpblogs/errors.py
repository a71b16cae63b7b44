"""Exception and warning types shared across the package."""


class NumericDomainError(ValueError):
    """Inputs are well formed but the requested quantity does not exist.

    Raised, for example, when a subsampling equation has no finite root or a
    composed delta leaves [0, 1). Plain ``ValueError`` is used for malformed
    inputs; the CLI maps this subclass to a distinct exit code.
    """


class EpsilonOverflowWarning(RuntimeWarning):
    """An exponent argument exceeded the overflow guard; epsilon is +inf."""


class BoundWarning(UserWarning):
    """A closed-form bound was evaluated outside its meaningful regime."""


class TrainingDivergedError(RuntimeError):
    """The toy trainer's loss exceeded the divergence guard."""

    def __init__(self, step: int, loss: float):
        super().__init__(f"loss {loss:.6g} exceeded 1e12 at step {step}; run aborted")
        self.step = step
        self.loss = loss
