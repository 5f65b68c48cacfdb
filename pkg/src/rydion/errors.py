"""Exception and warning types raised across the toolkit."""


class RydionError(Exception):
    """Base class for all toolkit errors."""


class PhysicsError(RydionError):
    """The requested configuration has no physical trapped solution."""


class Unstable(PhysicsError):
    """A pseudopotential secular frequency squared is not positive."""

    def __init__(self, axis, omega_sq):
        self.axis = axis
        self.omega_sq = omega_sq
        super().__init__(f"unstable trap: omega_{axis}^2 = {omega_sq:.6g} rad^2/s^2 <= 0")


class AntiTrapped(PhysicsError):
    """The Stark contribution removes confinement along an axis."""

    def __init__(self, axis, value):
        self.axis = axis
        self.value = value
        super().__init__(f"Stark-shifted potential is anti-trapping along {axis} ({value:.6g} <= 0)")


class MassMismatch(RydionError):
    pass


class TruncationTooSmall(RydionError):
    pass


class CutoffTooSmall(RydionError):
    pass


class FitError(RydionError):
    """Base class for fitting failures."""


class FitDiverged(FitError):
    pass


class DegenerateData(FitError):
    pass


class IntegratorFailure(RydionError):
    pass


class ConfigError(RydionError):
    pass


class PerturbationInvalid(UserWarning):
    """The Stark term is not small compared to the trap stiffness."""


class SignMismatch(UserWarning):
    """Fitted curvature sign disagrees with the polarizability sign."""
