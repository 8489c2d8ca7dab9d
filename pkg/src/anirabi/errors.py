"""Exception types shared across the solver modules."""


class AnirabiError(Exception):
    """Base class for solver errors."""


class PoleProximity(AnirabiError):
    """Spectral parameter too close to a pole line x = n."""


class Singular(AnirabiError):
    """Parameter combination makes a recurrence denominator vanish."""


class IsotropicSingular(Singular):
    """Degenerate-condition coefficients are singular at r = 1."""


class NotDegenerate(AnirabiError):
    """Quasi-exact construction attempted away from a degeneracy."""


class TruncationLoss(AnirabiError):
    """Fock-space conversion dropped a tail above tolerance."""


class ConfigError(AnirabiError):
    """Invalid sweep or CLI configuration."""
