"""Exception hierarchy.

Two broad families matter for callers: configuration problems (bad input,
violated preconditions that can be fixed by editing a config) and numerical
failures (a computation that cannot proceed or did not converge).  The CLI
maps them to exit codes 2 and 3 respectively.
"""


class VpmixError(Exception):
    """Base class for all package errors."""


class ConfigError(VpmixError):
    """Invalid configuration or violated input contract."""


class NumericalError(VpmixError):
    """A numerical procedure failed or its assumptions broke down."""


class HermiticityError(NumericalError):
    """An operator claimed Hermitian deviates beyond tolerance."""


class ResonantParameterError(NumericalError):
    """Parameters sit on a pole of a formula (e.g. zero detuning)."""


class NonResonantPairError(NumericalError):
    """Initial and final bare states are not degenerate within tolerance."""


class DegenerateIntermediateError(NumericalError):
    """A virtual-transition path crosses a state degenerate with the
    initial energy; perturbation theory is invalid there."""

    def __init__(self, state_index: int, detail: str = ""):
        self.state_index = state_index
        msg = f"intermediate state {state_index} is degenerate with the initial energy"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class BranchTrackingError(NumericalError):
    """The two eigenbranches spanning a nominated bare pair could not be
    identified unambiguously."""


class LabelAmbiguityError(NumericalError):
    """Dressed-state labels needed for an operator are missing or claimed
    by more than one eigenstate."""


class StepSizeError(NumericalError):
    """Time integration exceeded its trace-drift budget; retry with a
    smaller step."""
