"""Deformed factorial, exponential, Hermite polynomials, basis elements and measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import DomainError, SingularPointError
from .special_functions import log_bessel_k, log_gamma

__all__ = [
    "MuParameter",
    "DensePolynomial",
    "MeasureDensity",
    "MeasureKind",
    "as_mu",
    "theta_odd",
    "gamma_mu",
    "log_gamma_mu",
    "e_mu",
    "hermite_mu",
    "zeta_mu",
    "xi_mu",
    "xi_mu_norm_const",
    "log_xi_mu_norm_const",
    "density",
    "log_density",
    "radial_weight",
    "measure_mass",
]


@dataclass(frozen=True)
class MuParameter:
    """Deformation parameter, mu > -1/2."""

    mu: float

    def __post_init__(self):
        m = float(self.mu)
        if not math.isfinite(m) or m <= -0.5:
            raise DomainError(f"mu must exceed -1/2, got {self.mu!r}")
        object.__setattr__(self, "mu", m)

    def __float__(self) -> float:
        return self.mu


MuLike = Union[MuParameter, float, int]


def as_mu(mu: MuLike) -> float:
    """Validate ``mu`` and return it as a float."""
    if isinstance(mu, MuParameter):
        return mu.mu
    return MuParameter(mu).mu


def theta_odd(n: int) -> int:
    """Indicator of the odd integers; theta(0) is taken as 0."""
    if n < 0:
        raise DomainError(f"theta_odd needs n >= 0, got {n}")
    return n & 1


def gamma_mu(n: int, mu: MuLike) -> float:
    """Deformed factorial by its defining recursion.

    gamma_mu(0) = 1 and gamma_mu(n) = (n + 2 mu theta(n)) gamma_mu(n - 1).
    Overflows to ``inf`` past n ~ 170; use :func:`log_gamma_mu` there.
    """
    m = as_mu(mu)
    if n < 0:
        raise DomainError(f"gamma_mu needs n >= 0, got {n}")
    value = 1.0
    for k in range(1, n + 1):
        value *= k + 2.0 * m * (k & 1)
    return value


def log_gamma_mu(n: int, mu: MuLike) -> float:
    """log of the deformed factorial from its closed gamma-function form."""
    m = as_mu(mu)
    if n < 0:
        raise DomainError(f"log_gamma_mu needs n >= 0, got {n}")
    k, odd = divmod(n, 2)
    half = m + 0.5
    return (
        n * math.log(2.0)
        + log_gamma(k + 1.0)
        + log_gamma(half + k + odd)
        - log_gamma(half)
    )


def _series_done(term, nxt, partial, tol) -> bool:
    bound = tol * (1.0 + np.abs(partial))
    return bool(np.all(np.abs(term) < bound) and np.all(np.abs(nxt) < bound))


def e_mu(z, mu: MuLike, tol: float = 1e-17):
    """Deformed exponential: sum of z**n / gamma_mu(n).

    Accepts a scalar or an array of complex points and sums term by term
    until two consecutive terms fall below ``tol * (1 + |partial sum|)``.
    """
    m = as_mu(mu)
    if not tol > 0:
        raise DomainError("tol must be positive")
    scalar = np.isscalar(z)
    w = np.asarray(z, dtype=complex)
    term = np.ones_like(w)
    total = term.copy()
    n = 0
    while True:
        n += 1
        term = term * w / (n + 2.0 * m * (n & 1))
        total = total + term
        nxt = term * w / (n + 1 + 2.0 * m * ((n + 1) & 1))
        if _series_done(term, nxt, total, tol):
            break
        if n > 100000:
            raise RuntimeError("e_mu series failed to converge")
    if scalar:
        return complex(total)
    return total


@dataclass(frozen=True, eq=False)
class DensePolynomial:
    """Real polynomial; ``coeffs[k]`` multiplies t**k.

    Trailing zeros are stripped on construction, so ``degree`` is exact.
    The zero polynomial has an empty coefficient vector and degree -1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def monomial(cls, n: int, scale: float = 1.0) -> "DensePolynomial":
        c = np.zeros(n + 1)
        c[n] = scale
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def __call__(self, t):
        """Horner evaluation at real or complex points."""
        t = np.asarray(t)
        acc = np.zeros_like(t, dtype=np.result_type(t, float))
        for c in self.coeffs[::-1]:
            acc = acc * t + c
        return acc if acc.ndim else acc.item()

    def __eq__(self, other):
        if not isinstance(other, DensePolynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __add__(self, other: "DensePolynomial") -> "DensePolynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(size)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return DensePolynomial(c)

    def __mul__(self, other) -> "DensePolynomial":
        if isinstance(other, DensePolynomial):
            if self.is_zero or other.is_zero:
                return DensePolynomial([])
            return DensePolynomial(np.convolve(self.coeffs, other.coeffs))
        return DensePolynomial(self.coeffs * float(other))

    __rmul__ = __mul__

    def parity_part(self, parity: int) -> "DensePolynomial":
        """Even (parity 0) or odd (parity 1) part."""
        c = self.coeffs.copy()
        c[(1 - parity)::2] = 0.0
        return DensePolynomial(c)

    def even_part(self) -> "DensePolynomial":
        return self.parity_part(0)

    def odd_part(self) -> "DensePolynomial":
        return self.parity_part(1)

    @property
    def parity(self) -> int | None:
        """0 or 1 if all monomials share a parity, else None (zero polynomial: 0)."""
        idx = np.flatnonzero(self.coeffs)
        if idx.size == 0:
            return 0
        p = idx % 2
        return int(p[0]) if np.all(p == p[0]) else None

    @property
    def is_monomial(self) -> bool:
        return np.count_nonzero(self.coeffs) == 1

    def __repr__(self):
        return f"DensePolynomial({self.coeffs.tolist()})"


def hermite_mu(n: int, mu: MuLike) -> DensePolynomial:
    """Deformed Hermite polynomial H_n^mu from its generating function.

    The coefficient of z**n in exp(-z**2) e_mu(2 t z) is
    sum_k (-1)**k / k! * (2t)**(n-2k) / gamma_mu(n-2k); H_n^mu is n! times it.
    """
    m = as_mu(mu)
    if n < 0:
        raise DomainError(f"hermite_mu needs n >= 0, got {n}")
    coeffs = np.zeros(n + 1)
    if n <= 60:
        nfact = math.factorial(n)
        for k in range(n // 2 + 1):
            j = n - 2 * k
            ratio = float(nfact // math.factorial(k) * 2**j)
            coeffs[j] = (-1.0) ** k * ratio / gamma_mu(j, m)
        return DensePolynomial(coeffs)
    log_nfact = log_gamma(n + 1.0)
    for k in range(n // 2 + 1):
        j = n - 2 * k
        log_mag = log_nfact - log_gamma(k + 1.0) + j * math.log(2.0) - log_gamma_mu(j, m)
        coeffs[j] = (-1.0) ** k * math.exp(log_mag)
    return DensePolynomial(coeffs)


def zeta_mu(n: int, mu: MuLike) -> DensePolynomial:
    """Normalised deformed Hermite polynomial, the n-th ground-state basis vector."""
    m = as_mu(mu)
    log_scale = -0.5 * n * math.log(2.0) - log_gamma(n + 1.0) + 0.5 * log_gamma_mu(n, m)
    return hermite_mu(n, m) * math.exp(log_scale)


def log_xi_mu_norm_const(n: int, mu: MuLike) -> float:
    return -0.5 * log_gamma_mu(n, mu)


def xi_mu_norm_const(n: int, mu: MuLike) -> float:
    """(gamma_mu(n))**(-1/2), the coefficient of the phase-space basis monomial."""
    return math.exp(log_xi_mu_norm_const(n, mu))


def xi_mu(n: int, mu: MuLike) -> DensePolynomial:
    """n-th phase-space basis vector as a polynomial in z."""
    return DensePolynomial.monomial(n, xi_mu_norm_const(n, mu))


MeasureKind = str
_KINDS = ("ground_state", "even_phase", "odd_phase")


@dataclass(frozen=True)
class MeasureDensity:
    """One of the three reference measures.

    ``ground_state`` is the weight on the real line; ``even_phase`` and
    ``odd_phase`` are radial Lebesgue densities on the plane built from
    K_{mu-1/2} and K_{mu+1/2}.
    """

    kind: MeasureKind
    mu: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "mu", as_mu(self.mu))

    @classmethod
    def for_parity(cls, parity: int, mu: MuLike) -> "MeasureDensity":
        return cls("odd_phase" if parity else "even_phase", as_mu(mu))

    @property
    def bessel_order(self) -> float:
        if self.kind == "ground_state":
            raise AttributeError("ground_state measure has no Bessel order")
        return self.mu + (0.5 if self.kind == "odd_phase" else -0.5)

    @property
    def log_prefactor(self) -> float:
        """log of the constant multiplying the radial part of the density."""
        if self.kind == "ground_state":
            return -log_gamma(self.mu + 0.5)
        return (0.5 - self.mu) * math.log(2.0) - math.log(math.pi) - log_gamma(self.mu + 0.5)


def _phase_limit_at_zero(measure: MeasureDensity) -> float:
    """Limit of K_alpha(r**2) r**(2 mu + 1) times the prefactor as r -> 0+."""
    a = abs(measure.bessel_order)
    power = 2.0 * measure.mu + 1.0 - 2.0 * a  # exponent of r in the small-r asymptotic
    if abs(power) < 1e-12:
        power = 0.0
    if a == 0.0 or power > 0:
        return 0.0
    if power < 0:
        raise SingularPointError(
            f"{measure.kind} density with mu={measure.mu} is infinite at r=0 (integrable)"
        )
    # K_a(x) ~ Gamma(a)/2 (2/x)**a
    return math.exp(measure.log_prefactor + log_gamma(a) + (a - 1.0) * math.log(2.0))


def log_density(measure: MeasureDensity, point: float) -> float:
    """log of :func:`density`; ``-inf`` where the density vanishes."""
    x = abs(float(point))
    if measure.kind == "ground_state":
        if x == 0.0:
            if measure.mu > 0:
                return -math.inf
            if measure.mu < 0:
                raise SingularPointError(f"ground_state density with mu={measure.mu} is infinite at t=0")
            return measure.log_prefactor
        return measure.log_prefactor - x * x + 2.0 * measure.mu * math.log(x)
    if x == 0.0:
        lim = _phase_limit_at_zero(measure)
        return math.log(lim) if lim > 0 else -math.inf
    return (
        measure.log_prefactor
        + log_bessel_k(measure.bessel_order, x * x)
        + (2.0 * measure.mu + 1.0) * math.log(x)
    )


def density(measure: MeasureDensity, point: float) -> float:
    """Density of ``measure`` at a real point t (ground state) or radius r = |z| (phase space).

    Phase-space densities are with respect to dx dy.  At the origin the
    limiting value is returned when finite; otherwise
    :class:`SingularPointError` is raised.
    """
    return math.exp(log_density(measure, point))


def radial_weight(measure: MeasureDensity, s):
    """Phase-space density after polar reduction and s = r**2.

    For radial g, the integral of g(|z|) against the measure equals the
    integral over s in (0, inf) of g(sqrt(s)) * radial_weight(s).
    Vectorised over ``s``; every entry must be positive.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    order = measure.bessel_order
    base = measure.log_prefactor + math.log(math.pi)
    out = np.array(
        [math.exp(base + log_bessel_k(order, si) + (measure.mu + 0.5) * math.log(si)) for si in s_arr]
    )
    return out if np.ndim(s) else out[0]


def measure_mass(measure: MeasureDensity) -> float:
    """Total mass: 1 for ground_state and even_phase, sqrt(pi) Gamma(mu+1)/Gamma(mu+1/2) for odd_phase."""
    if measure.kind == "odd_phase":
        return math.exp(0.5 * math.log(math.pi) + log_gamma(measure.mu + 1.0) - log_gamma(measure.mu + 0.5))
    return 1.0
