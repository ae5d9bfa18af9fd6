"""The deformed Segal-Bargmann transform from the ground-state space to phase space.

Two routes are provided.  :func:`bargmann_transform` evaluates the integral
kernel numerically; :func:`bargmann_transform_exact` expands a polynomial in
the normalised Hermite basis and maps each element to its phase-space
partner.  The second is the reference for checking the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .exceptions import DomainError, RangeError
from .mu_core import (
    DensePolynomial,
    MeasureDensity,
    MuLike,
    as_mu,
    e_mu,
    log_xi_mu_norm_const,
    xi_mu,
    zeta_mu,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_semi_infinite

__all__ = [
    "ComplexGrid",
    "MAX_VERIFY_INDEX",
    "bargmann_transform",
    "bargmann_transform_exact",
    "zeta_expansion",
    "verify_basis_transform",
    "transform_parity_defect",
]

MAX_VERIFY_INDEX = 12


@dataclass(frozen=True)
class ComplexGrid:
    """Finite set of evaluation points in the complex plane."""

    points: tuple

    def __post_init__(self):
        pts = tuple(complex(p) for p in self.points)
        if not pts:
            raise DomainError("grid must contain at least one point")
        if not all(math.isfinite(p.real) and math.isfinite(p.imag) for p in pts):
            raise DomainError("grid points must be finite")
        object.__setattr__(self, "points", pts)

    @classmethod
    def default(cls) -> "ComplexGrid":
        """Radii 0.25, 0.5, 1, 2 at angles 0, pi/4, pi/2, 3pi/4, plus the origin."""
        pts = [0j]
        for r in (0.25, 0.5, 1.0, 2.0):
            for k in range(4):
                pts.append(r * complex(math.cos(k * math.pi / 4), math.sin(k * math.pi / 4)))
        return cls(tuple(pts))

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _as_poly(f) -> DensePolynomial:
    return f if isinstance(f, DensePolynomial) else DensePolynomial(f)


def bargmann_transform(f, mu: MuLike, z: complex, cfg: QuadratureConfig = DEFAULT_CONFIG,
                       *, with_error: bool = False):
    """Evaluate the transform of a polynomial at ``z`` by quadrature of its integral kernel.

    The real line is folded onto (0, inf); real and imaginary parts are
    integrated as two separate real integrals.

    Returns
    -------
    complex, or (complex, float) when ``with_error`` is true.
    """
    m = as_mu(mu)
    f = _as_poly(f)
    z = complex(z)
    ground = MeasureDensity("ground_state", m)
    tol = min(1e-17, 1e-3 * cfg.abs_tol)
    scale = math.sqrt(2.0) * z

    def kernel(t):
        t = np.asarray(t, dtype=float)
        w = np.exp(ground.log_prefactor - t * t + 2.0 * m * np.log(t))
        return (e_mu(scale * t, m, tol) * f(t) + e_mu(-scale * t, m, tol) * f(-t)) * w

    re, re_err = integrate_semi_infinite(lambda t: kernel(t).real, cfg)
    im, im_err = integrate_semi_infinite(lambda t: kernel(t).imag, cfg)
    prefactor = np.exp(-0.5 * z * z)
    value = complex(prefactor * complex(re, im))
    if with_error:
        return value, abs(prefactor) * math.hypot(re_err, im_err)
    return value


def zeta_expansion(f, mu: MuLike) -> np.ndarray:
    """Coefficients of ``f`` in the normalised Hermite basis, by back substitution."""
    m = as_mu(mu)
    f = _as_poly(f)
    residual = np.array(f.coeffs, dtype=float)
    out = np.zeros(len(residual))
    for n in range(len(residual) - 1, -1, -1):
        basis = zeta_mu(n, m).coeffs
        a = residual[n] / basis[n]
        out[n] = a
        residual[: n + 1] -= a * basis
    return out


def bargmann_transform_exact(f, mu: MuLike) -> DensePolynomial:
    """Transform of a polynomial as a polynomial in z, via the basis correspondence."""
    m = as_mu(mu)
    a = zeta_expansion(f, m)
    scale = np.array([math.exp(log_xi_mu_norm_const(n, m)) for n in range(len(a))])
    return DensePolynomial(a * scale)


def verify_basis_transform(n_max: int, mu: MuLike, grid: ComplexGrid | Iterable[complex] | None = None,
                           cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Largest |B(zeta_n)(z) - xi_n(z)| over n <= n_max and z in the grid."""
    if int(n_max) != n_max or n_max < 0:
        raise DomainError(f"n_max must be a nonnegative integer, got {n_max!r}")
    if n_max > MAX_VERIFY_INDEX:
        raise RangeError(f"n_max is capped at {MAX_VERIFY_INDEX}")
    m = as_mu(mu)
    if grid is None:
        grid = ComplexGrid.default()
    elif not isinstance(grid, ComplexGrid):
        grid = ComplexGrid(tuple(grid))
    worst = 0.0
    for n in range(int(n_max) + 1):
        source, target = zeta_mu(n, m), xi_mu(n, m)
        for z in grid:
            worst = max(worst, abs(bargmann_transform(source, m, z, cfg) - target(complex(z))))
    return worst


def transform_parity_defect(f, mu: MuLike, grid: ComplexGrid | None = None,
                            cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Largest |B f(-z) - (+/-) B f(z)| over the grid for a parity-pure ``f``."""
    f = _as_poly(f)
    parity = f.parity
    if parity is None:
        raise DomainError("parity defect needs an even or odd polynomial")
    sign = -1.0 if parity else 1.0
    grid = grid or ComplexGrid.default()
    m = as_mu(mu)
    return max(
        abs(bargmann_transform(f, m, -z, cfg) - sign * bargmann_transform(f, m, z, cfg)) for z in grid
    )
