"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A density matrix or Bloch vector violates its defining constraints."""


class InvalidRatesError(ValueError):
    """A rate set fails positivity / positive-semidefiniteness requirements."""


class InvalidCoefficientsError(ValueError):
    """Mode amplitudes produce a non-positive (unphysical) density operator."""


class NumericalFailureError(RuntimeError):
    """A quadrature or extrapolation failed to converge; details in args."""


class IntegrationFailureError(NumericalFailureError):
    """The ODE integrator gave up (step-size underflow or similar)."""


class DegenerateSpectrumError(RuntimeError):
    """Spectrum classification is ambiguous (e.g. two slow candidates).

    The offending eigenvalues are attached as ``candidates``.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class DefectiveSpectrumError(RuntimeError):
    """The generator has no complete eigenbasis; spectral propagation is
    unavailable and callers should fall back to direct integration."""
