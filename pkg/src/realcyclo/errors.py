"""Exception taxonomy shared by all realcyclo modules."""


class RealcycloError(Exception):
    """Base class for all library errors."""


class InvalidConductor(RealcycloError):
    """Conductor triple (p, s, r) is outside the supported family."""


class SizeMismatch(RealcycloError):
    """Vector length does not match the transform plan size."""


class DomainMismatch(RealcycloError):
    """Operands live in different coefficient domains or rings."""


class ModulusUnsuitable(RealcycloError):
    """Modulus lacks the 4N-th root of unity the DCT path needs."""


class DegreeTooLarge(RealcycloError):
    """Polynomial degree exceeds what the reduction formulas cover."""


class NoSuchRoot(RealcycloError):
    """F_q has no element of the requested multiplicative order."""


class ZeroElement(RealcycloError):
    """Multiplicative order of zero requested."""


class NotARoot(RealcycloError):
    """Evaluation point is not a root of the minimal polynomial mod q."""


class InvalidK(RealcycloError):
    """k-ideal factor degree outside the valid range."""


class SingularMatrix(RealcycloError):
    """Matrix inversion failed; signals a construction bug."""


class IllConditioned(RealcycloError):
    """Numerical refinement failed to reach the requested residual."""
