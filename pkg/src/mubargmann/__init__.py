"""Deformed Segal-Bargmann calculus: special functions, measures, entropies, energies and the transform."""

from .entropy_energy import (
    EnergyValue,
    EntropyValue,
    SharpnessPoint,
    energy_xi,
    entropy_classical,
    entropy_gap_zeta1,
    entropy_monomial_ground,
    entropy_xi,
    entropy_xi_even,
    entropy_xi_odd,
    entropy_zeta1,
    sharpness_sequence,
    sharpness_verdict,
)
from .exceptions import BesselUnderflowWarning, DomainError, QuadratureError, RangeError, SingularPointError
from .mu_core import (
    DensePolynomial,
    MeasureDensity,
    MuParameter,
    e_mu,
    gamma_mu,
    hermite_mu,
    log_gamma_mu,
    xi_mu,
    zeta_mu,
)
from .quadrature import QuadratureConfig, energy_oracle, entropy_oracle, norm_sq_oracle
from .special_functions import bessel_k, digamma, log_gamma
from .transform import ComplexGrid, bargmann_transform, bargmann_transform_exact, verify_basis_transform

__version__ = "0.1.0"

__all__ = [
    "BesselUnderflowWarning",
    "ComplexGrid",
    "DensePolynomial",
    "DomainError",
    "EnergyValue",
    "EntropyValue",
    "MeasureDensity",
    "MuParameter",
    "QuadratureConfig",
    "QuadratureError",
    "RangeError",
    "SharpnessPoint",
    "SingularPointError",
    "bargmann_transform",
    "bargmann_transform_exact",
    "bessel_k",
    "digamma",
    "e_mu",
    "energy_oracle",
    "energy_xi",
    "entropy_classical",
    "entropy_gap_zeta1",
    "entropy_monomial_ground",
    "entropy_oracle",
    "entropy_xi",
    "entropy_xi_even",
    "entropy_xi_odd",
    "entropy_zeta1",
    "gamma_mu",
    "hermite_mu",
    "log_gamma",
    "log_gamma_mu",
    "norm_sq_oracle",
    "sharpness_sequence",
    "sharpness_verdict",
    "verify_basis_transform",
    "xi_mu",
    "zeta_mu",
]
