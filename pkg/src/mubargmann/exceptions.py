"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(ValueError):
    """Argument inside the domain but outside the supported range."""


class SingularPointError(DomainError):
    """Density evaluated exactly at a point where it is infinite.

    The density stays integrable; quadrature never samples the endpoint.
    """


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not converge or met a non-finite sample."""


class BesselUnderflowWarning(RuntimeWarning):
    """K_alpha(x) is below the smallest representable double and was returned as 0."""
