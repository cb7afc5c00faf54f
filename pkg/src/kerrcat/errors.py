"""Exception types shared across the package."""


class KerrcatError(Exception):
    """Base class for all package errors."""


class InvalidSpaceError(KerrcatError):
    """Fock-space dimension is unusable (dim < 2)."""


class SpaceMismatchError(KerrcatError):
    """Operands live on Fock spaces of different dimension."""


class TruncationRiskError(KerrcatError):
    """Requested state does not fit the truncated space.

    Carries ``suggested_dim`` so callers can retry at an adequate dimension.
    """

    def __init__(self, msg, suggested_dim=None):
        super().__init__(msg)
        self.suggested_dim = suggested_dim


class DegenerateCatError(KerrcatError):
    """Odd cat state at alpha = 0 is the zero vector."""


class NotATransmonError(KerrcatError):
    """Charging energy exceeds the effective Josephson energy."""


class TopologyError(KerrcatError):
    """Junction counts or topology flags are inconsistent."""


class BathSpecError(KerrcatError):
    """A required spectral-density or temperature entry is missing."""


class HermiticityError(KerrcatError):
    """A matrix that must be Hermitian is not (numerical corruption)."""


class ParityError(KerrcatError):
    """Hamiltonian does not commute with the photon parity operator."""


class PropagatorAccuracyError(KerrcatError):
    """One-period propagator failed the unitarity check."""


class IntegratorError(KerrcatError):
    """Time integration lost norm/trace beyond tolerance."""


class ResourceGuardError(KerrcatError):
    """A dense solve would exceed the configured size guard."""


class ModeIdentificationError(KerrcatError):
    """No Liouvillian mode with dominant ground-coherence weight.

    ``spectrum`` holds the full eigenvalue list for inspection.
    """

    def __init__(self, msg, spectrum=None):
        super().__init__(msg)
        self.spectrum = spectrum


class ConfigError(KerrcatError):
    """Scenario file failed schema validation."""
