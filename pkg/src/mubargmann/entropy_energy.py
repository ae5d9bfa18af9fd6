"""Closed-form entropies and energies of basis elements, with their identities and limits.

Everything is evaluated in log space through :func:`log_gamma` and
:func:`log_gamma_mu`, so indices up to 10**4 and beyond are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exceptions import DomainError, RangeError
from .mu_core import MuLike, as_mu, log_gamma_mu, theta_odd
from .special_functions import EULER_GAMMA, digamma, log_gamma

__all__ = [
    "EntropyValue",
    "EnergyValue",
    "SharpnessPoint",
    "SharpnessSummary",
    "entropy_xi_even",
    "entropy_xi_odd",
    "entropy_xi",
    "entropy_classical",
    "entropy_monomial_ground",
    "log_entropy_monomial_ground",
    "entropy_zeta1",
    "entropy_gap_zeta1",
    "entropy_relation_half_plus_m",
    "s_vs_S_relation",
    "monomial_entropy_growth_error",
    "entropy_limit_mu_infinity",
    "energy_xi",
    "sharpness_sequence",
    "sharpness_predictor",
    "sharpness_verdict",
]

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class EntropyValue:
    """Entropy (in nats) of the basis element or monomial with index ``n``."""

    n: int
    mu: float
    value: float

    def __post_init__(self):
        if math.isnan(self.value) or self.value == -math.inf:
            raise RangeError(f"entropy must be finite, got {self.value}")

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class EnergyValue:
    """Energy of the phase-space basis element with index ``n``."""

    n: int
    mu: float
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise RangeError(f"energy must be positive, got {self.value}")

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class SharpnessPoint:
    """One term of the energy-minus-c-entropy sequence.

    ``n`` is the half-index: the basis index is ``2n`` (even) or ``2n + 1`` (odd).
    """

    n: int
    parity: int
    c: float
    mu: float
    energy: float
    entropy: float

    @property
    def index(self) -> int:
        return 2 * self.n + self.parity

    @property
    def gap(self) -> float:
        return self.energy - self.c * self.entropy


def _check_index(n: int) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"index must be a nonnegative integer, got {n!r}")
    return int(n)


def entropy_xi_even(n: int, mu: MuLike) -> EntropyValue:
    """Entropy of the even basis monomial with index 2n.

    n * (psi(mu + n + 1/2) + psi(n + 1)) - log(gamma_mu(2n) / 4**n).
    """
    n = _check_index(n)
    m = as_mu(mu)
    if n == 0:
        return EntropyValue(0, m, 0.0)
    value = n * (digamma(m + n + 0.5) + digamma(n + 1.0)) - (log_gamma_mu(2 * n, m) - 2 * n * _LOG2)
    return EntropyValue(2 * n, m, value)


def entropy_xi_odd(n: int, mu: MuLike) -> EntropyValue:
    """Entropy of the odd basis monomial with index 2n + 1.

    (n + 1/2) * (psi(mu + n + 3/2) + psi(n + 1)) - log(gamma_mu(2n+1) / 2**(2n+1)).
    """
    n = _check_index(n)
    m = as_mu(mu)
    value = (n + 0.5) * (digamma(m + n + 1.5) + digamma(n + 1.0)) - (
        log_gamma_mu(2 * n + 1, m) - (2 * n + 1) * _LOG2
    )
    return EntropyValue(2 * n + 1, m, value)


def entropy_xi(n: int, mu: MuLike) -> EntropyValue:
    """Entropy of the n-th phase-space basis monomial, both parities in one expression."""
    n = _check_index(n)
    m = as_mu(mu)
    if n == 0:
        return EntropyValue(0, m, 0.0)
    a = m + 0.5 * (n + theta_odd(n) + 1)
    b = 0.5 * (n + theta_odd(n + 1) + 1)
    value = 0.5 * n * (digamma(a) + digamma(b)) - (log_gamma_mu(n, m) - n * _LOG2)
    return EntropyValue(n, m, value)


def entropy_classical(n: int) -> EntropyValue:
    """Undeformed entropy n * psi(n + 1) - log n!."""
    n = _check_index(n)
    if n == 0:
        return EntropyValue(0, 0.0, 0.0)
    return EntropyValue(n, 0.0, n * digamma(n + 1.0) - log_gamma(n + 1.0))


def _log_moment_ratio(n: int, m: float) -> float:
    """log(Gamma(n + mu + 1/2) / Gamma(mu + 1/2)), the log squared norm of t**n."""
    return log_gamma(n + m + 0.5) - log_gamma(m + 0.5)


def _monomial_bracket(n: int, m: float) -> float:
    return n * digamma(n + m + 0.5) - _log_moment_ratio(n, m)


def log_entropy_monomial_ground(n: int, mu: MuLike) -> float:
    """log of the ground-state entropy of t**n, for n >= 1 (where it is positive)."""
    n = _check_index(n)
    m = as_mu(mu)
    if n == 0:
        raise DomainError("entropy of t**0 is zero; its log is undefined")
    return _log_moment_ratio(n, m) + math.log(_monomial_bracket(n, m))


def entropy_monomial_ground(n: int, mu: MuLike) -> EntropyValue:
    """Ground-state entropy of the unnormalised monomial t**n.

    Overflows a double near n = 170; use :func:`log_entropy_monomial_ground` beyond.
    """
    n = _check_index(n)
    m = as_mu(mu)
    if n == 0:
        return EntropyValue(0, m, 0.0)
    log_ratio = _log_moment_ratio(n, m)
    if log_ratio > 700.0:
        raise RangeError(f"entropy of t**{n} overflows; use log_entropy_monomial_ground")
    return EntropyValue(n, m, math.exp(log_ratio) * _monomial_bracket(n, m))


def entropy_zeta1(mu: MuLike) -> EntropyValue:
    """Ground-state entropy of the first normalised Hermite element: psi(mu + 3/2) - log(mu + 1/2)."""
    m = as_mu(mu)
    return EntropyValue(1, m, digamma(m + 1.5) - math.log(m + 0.5))


def entropy_gap_zeta1(mu: MuLike) -> float:
    """Entropy change under the transform for the first basis element: -(psi(mu + 3/2) + Euler gamma) / 2."""
    m = as_mu(mu)
    return -0.5 * (digamma(m + 1.5) + EULER_GAMMA)


def entropy_relation_half_plus_m(n: int, m: int) -> tuple[float, float]:
    """Both sides of S_{n+m} + S_n - S_m = S_{2n}^{1/2+m} + sum_{k=1}^{n} m/(m+k).

    The left side uses undeformed entropies, the right side the even deformed
    entropy at mu = 1/2 + m.
    """
    n, m = _check_index(n), _check_index(m)
    lhs = entropy_classical(n + m).value + entropy_classical(n).value - entropy_classical(m).value
    tail = math.fsum(m / (m + k) for k in range(1, n + 1))
    rhs = entropy_xi_even(n, 0.5 + m).value + tail
    return lhs, rhs


def s_vs_S_relation(n: int, mu: MuLike) -> tuple[float, float]:
    """Ground-state monomial entropy versus the moment ratio times (S_{2n}^mu - S_n)."""
    n = _check_index(n)
    if n < 1:
        raise DomainError("relation is stated for n >= 1")
    m = as_mu(mu)
    lhs = entropy_monomial_ground(n, m).value
    ratio = math.exp(_log_moment_ratio(n, m))
    rhs = ratio * (entropy_xi_even(n, m).value - entropy_classical(n).value)
    return lhs, rhs


def monomial_entropy_growth_error(n: int, mu: MuLike) -> float:
    """|s_n / (n Gamma(n + mu + 1/2)) - 1/Gamma(mu + 1/2)|, evaluated without overflow."""
    n = _check_index(n)
    if n < 1:
        raise DomainError("growth ratio needs n >= 1")
    m = as_mu(mu)
    inv = math.exp(-log_gamma(m + 0.5))
    ratio = inv * _monomial_bracket(n, m) / n
    return abs(ratio - inv)


def entropy_limit_mu_infinity(index: int, mu_grid: Sequence[float]) -> list[float]:
    """Large-mu behaviour of the entropy of the basis element ``index``.

    Even index 2n: S_{2n}^mu - S_n over the grid (tends to 0).
    Odd index: S_{2n+1}^mu itself (tends to -inf).
    """
    index = _check_index(index)
    grid = [as_mu(m) for m in mu_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("mu_grid must be strictly increasing")
    half, parity = divmod(index, 2)
    if parity:
        return [entropy_xi_odd(half, m).value for m in grid]
    base = entropy_classical(half).value
    return [entropy_xi_even(half, m).value - base for m in grid]


def energy_xi(n: int, mu: MuLike) -> EnergyValue:
    """Energy of the n-th phase-space basis monomial.

    Even 2k: 2 Gamma(k+3/2) Gamma(k+mu+1) / (Gamma(k+1) Gamma(k+mu+1/2)).
    Odd 2k+1: 2 Gamma(k+3/2) Gamma(k+mu+2) / (Gamma(k+1) Gamma(k+mu+3/2)).
    """
    n = _check_index(n)
    m = as_mu(mu)
    k, odd = divmod(n, 2)
    log_e = (
        _LOG2
        + log_gamma(k + 1.5)
        - log_gamma(k + 1.0)
        + log_gamma(k + m + 1.0 + odd)
        - log_gamma(k + m + 0.5 + odd)
    )
    return EnergyValue(n, m, math.exp(log_e))


def _parity_code(parity) -> int:
    if parity in ("even", 0):
        return 0
    if parity in ("odd", 1):
        return 1
    raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")


@lru_cache(maxsize=64)
def _energy_entropy_arrays(parity: int, mu: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    entropy = entropy_xi_odd if parity else entropy_xi_even
    e = np.array([energy_xi(2 * k + parity, mu).value for k in range(n_max + 1)])
    s = np.array([entropy(k, mu).value for k in range(n_max + 1)])
    e.setflags(write=False)
    s.setflags(write=False)
    return e, s


def sharpness_predictor(parity, c: float, mu: MuLike, n):
    """Leading asymptotics of the gap: (1 - c) 2n + c (mu + 1/2) log(mu + n + 1/2 + parity)."""
    p = _parity_code(parity)
    m = as_mu(mu)
    n = np.asarray(n, dtype=float)
    return (1.0 - c) * 2.0 * n + c * (m + 0.5) * np.log(m + n + 0.5 + p)


def sharpness_sequence(parity, c: float, mu: MuLike, n_max: int) -> list[SharpnessPoint]:
    """Gap terms E - c S for half-indices 0..n_max of the requested parity."""
    p = _parity_code(parity)
    m = as_mu(mu)
    n_max = _check_index(n_max)
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    e, s = _energy_entropy_arrays(p, m, n_max)
    return [SharpnessPoint(k, p, float(c), m, float(e[k]), float(s[k])) for k in range(n_max + 1)]


@dataclass(frozen=True)
class SharpnessSummary:
    """Finite-range verdict on whether the gap sequence is bounded above.

    ``growth`` is gap(n_max) - gap(n_ref) and ``predicted_growth`` the same
    difference of :func:`sharpness_predictor`.
    """

    parity: int
    c: float
    mu: float
    n_max: int
    n_ref: int
    argmax: int
    max_gap: float
    growth: float
    predicted_growth: float
    tail_decreasing: bool
    verdict: str


def sharpness_verdict(parity, c: float, mu: MuLike, n_max: int = 10_000) -> SharpnessSummary:
    """Classify the gap sequence as 'bounded', 'unbounded' or 'inconclusive'.

    Bounded: the maximum sits before n_max and the gap strictly decreases
    over the last decade [n_max // 10, n_max].  Unbounded: the growth from
    n_ref = 100 (or n_max // 10 for short ranges) to n_max exceeds half the
    predicted growth.
    """
    p = _parity_code(parity)
    m = as_mu(mu)
    n_max = _check_index(n_max)
    if n_max < 10:
        raise DomainError("sharpness verdict needs n_max >= 10")
    e, s = _energy_entropy_arrays(p, m, n_max)
    gap = e - c * s
    n_ref = 100 if n_max >= 1000 else n_max // 10
    argmax = int(np.argmax(gap))
    tail = gap[n_max // 10:]
    decreasing = bool(np.all(np.diff(tail) < 0))
    growth = float(gap[n_max] - gap[n_ref])
    pred = sharpness_predictor(p, c, m, [n_ref, n_max])
    predicted = float(pred[1] - pred[0])
    if argmax < n_max and decreasing:
        verdict = "bounded"
    elif growth > 0.5 * predicted and predicted > 0:
        verdict = "unbounded"
    else:
        verdict = "inconclusive"
    return SharpnessSummary(p, float(c), m, n_max, n_ref, argmax, float(gap[argmax]), growth,
                            predicted, decreasing, verdict)
