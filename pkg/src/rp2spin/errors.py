"""Exception types raised by rp2spin."""


class Rp2SpinError(ValueError):
    """Base class for all library errors."""


class AntipodalAmbiguityError(Rp2SpinError):
    """Great-circle interpolation between antipodal points is not unique."""


class PairingError(Rp2SpinError):
    """A sample set is missing the antipode of one of its points."""


class ParityError(Rp2SpinError):
    """A sampled section fails an evenness/oddness precondition."""


class NotInFiberError(Rp2SpinError):
    """A vector does not lie in the image of the projector at the path start."""


class StepTooLargeError(Rp2SpinError):
    """A transport step shrank the vector below the renormalization threshold."""


class InvarianceError(Rp2SpinError):
    """A section is not invariant under the requested Z2 action."""
