"""Adaptive Gauss-Kronrod quadrature and the integral oracles built on it.

The oracles evaluate norms, entropies, energies and masses straight from
their defining integrals against the reference measures.  They never call
the closed-form entropy or energy formulas, so agreement between the two
is a genuine cross-check.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .exceptions import DomainError, QuadratureError
from .mu_core import DensePolynomial, MeasureDensity, MuLike, as_mu
from .special_functions import log_bessel_k

__all__ = [
    "QuadratureConfig",
    "IntegrandSpec",
    "SummedIntegrand",
    "integrate",
    "integrate_semi_infinite",
    "inner_product_oracle",
    "norm_sq_oracle",
    "entropy_oracle",
    "energy_oracle",
    "measure_mass_oracle",
    "k_moment_oracle",
]

# 15-point Kronrod nodes on [0, 1] (symmetric) with the embedded 7-point Gauss rule.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
# Full 15-node layout: -x1..-x7, 0, x7..x1.
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5]] = _WG[:3]
_GWEIGHTS[7] = _WG[3]
_GWEIGHTS[[9, 11, 13]] = _WG[2::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny

# r**2 beyond which exp(-r**2) underflows
_SQUARED_RADIUS_CAP = 700.0
_TAIL_START_RADIUS = 8.0
_BREAKPOINT_FLOOR = 1e-12


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for :func:`integrate_semi_infinite`.

    Parameters
    ----------
    rel_tol, abs_tol : float
        Target error ``max(abs_tol, rel_tol * |value|)``.
    max_subdivisions : int
        Panel budget per integral.
    tail_cut : float, optional
        Fixed truncation radius.  When ``None`` it is found by doubling
        from r = 8 until the integrand falls below ``abs_tol``.
    angular_nodes : int
        Trapezoid nodes on the circle for non-radial phase-space integrands.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    tail_cut: float | None = None
    angular_nodes: int = 256

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("rel_tol and abs_tol must be positive")
        if int(self.max_subdivisions) < 1:
            raise DomainError("max_subdivisions must be at least 1")
        if self.tail_cut is not None and not self.tail_cut > 0:
            raise DomainError("tail_cut must be positive")
        if int(self.angular_nodes) < 1:
            raise DomainError("angular_nodes must be at least 1")


DEFAULT_CONFIG = QuadratureConfig()


def _panel(fvals: np.ndarray, a: float, b: float) -> tuple[float, float, float]:
    """Kronrod value, error estimate and roundoff floor on [a, b] from 15 samples."""
    half = 0.5 * (b - a)
    resk = float(_KWEIGHTS @ fvals)
    resg = float(_GWEIGHTS @ fvals)
    resabs = float(_KWEIGHTS @ np.abs(fvals))
    resasc = float(_KWEIGHTS @ np.abs(fvals - 0.5 * resk))
    err = abs((resk - resg) * half)
    resasc *= abs(half)
    resabs *= abs(half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    floor = 50.0 * _EPS * resabs
    if resabs > _TINY / (50.0 * _EPS):
        err = max(floor, err)
    return resk * half, err, floor


def _evaluate_panels(func, intervals: Sequence[tuple[float, float]]) -> list[tuple[float, float, float]]:
    a = np.array([iv[0] for iv in intervals])
    b = np.array([iv[1] for iv in intervals])
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = (centre[:, None] + half[:, None] * _NODES[None, :]).ravel()
    y = np.asarray(func(x), dtype=float).reshape(len(intervals), 15)
    if not np.all(np.isfinite(y)):
        bad = x.reshape(len(intervals), 15)[~np.isfinite(y)][0]
        raise QuadratureError(f"non-finite integrand sample at x={bad!r}")
    return [_panel(y[i], a[i], b[i]) for i in range(len(intervals))]


def integrate(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    breakpoints: Iterable[float] = (),
) -> tuple[float, float]:
    """Adaptive 7/15-point Gauss-Kronrod integral of a vectorised ``func`` over [a, b].

    The rule never samples the endpoints, so integrable endpoint
    singularities are handled by repeated bisection.  Interior
    ``breakpoints`` seed the initial partition (use them at kinks and
    logarithmic singularities).  Refinement stops early when the error
    estimate is down to the accumulated rounding level of the samples.

    Returns
    -------
    value, err_est : float
    """
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    edges = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    intervals = list(zip(edges[:-1], edges[1:]))
    heap: list[tuple[float, float, float, float, float]] = []
    for (lo, hi), (val, err, floor) in zip(intervals, _evaluate_panels(func, intervals)):
        heapq.heappush(heap, (-err, lo, hi, val, floor))

    def sums():
        return (math.fsum(item[3] for item in heap), math.fsum(-item[0] for item in heap),
                math.fsum(item[4] for item in heap))

    total, total_err, roundoff = sums()
    # stop once the estimate is within a factor 2 of the summed roundoff floors
    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total), 2.0 * roundoff):
        if len(heap) >= cfg.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {len(heap)} panels: value {total!r}, error estimate {total_err!r}"
            )
        _, lo, hi, _, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise QuadratureError(f"panel [{lo!r}, {hi!r}] cannot be bisected further")
        halves = [(lo, mid), (mid, hi)]
        for (l2, h2), (v2, e2, r2) in zip(halves, _evaluate_panels(func, halves)):
            heapq.heappush(heap, (-e2, l2, h2, v2, r2))
        total, total_err, roundoff = sums()
    return total, total_err


def _xlogx(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    pos = v > 0
    out[pos] = v[pos] * np.log(v[pos])
    return out


def _log_weight(measure: MeasureDensity, x: np.ndarray) -> np.ndarray:
    """log of the reduced weight in the integration variable (t or s = r**2)."""
    if measure.kind == "ground_state":
        return measure.log_prefactor - x * x + 2.0 * measure.mu * np.log(x)
    base = measure.log_prefactor + math.log(math.pi) + (measure.mu + 0.5) * np.log(x)
    order = measure.bessel_order
    return base + np.array([log_bessel_k(order, xi) for xi in x])


_PAYLOADS = ("norm_sq", "entropy_integrand", "energy_integrand", "product")


@dataclass(frozen=True)
class IntegrandSpec:
    """A defining integrand reduced to one variable on (0, inf).

    For the ground-state measure the variable is t and both signs are
    folded together.  For phase-space measures the variable is s = r**2
    after the angular integration, which is done exactly for radial
    polynomial payloads and by an ``angular_nodes`` trapezoid rule for
    the entropy of a non-monomial.

    Parameters
    ----------
    measure : MeasureDensity
    payload : {'norm_sq', 'entropy_integrand', 'energy_integrand', 'product'}
        |f|^2, |f|^2 log|f|^2, |f|^2 |z|^2, or f * conj(other).
    function : DensePolynomial
        Must have the parity of a phase-space measure.
    other : DensePolynomial, optional
        Second factor for ``product``.
    """

    measure: MeasureDensity
    payload: str
    function: DensePolynomial
    other: DensePolynomial | None = None
    angular_nodes: int = 256

    def __post_init__(self):
        if self.payload not in _PAYLOADS:
            raise DomainError(f"unknown payload {self.payload!r}; expected one of {_PAYLOADS}")
        if (self.payload == "product") != (self.other is not None):
            raise DomainError("the 'product' payload needs exactly one extra polynomial")
        ground = self.measure.kind == "ground_state"
        if ground and self.payload == "energy_integrand":
            raise DomainError("energy is defined on phase space only")
        if not ground:
            want = 1 if self.measure.kind == "odd_phase" else 0
            for poly in (self.function, self.other):
                if poly is not None and not poly.is_zero and poly.parity != want:
                    raise DomainError(f"{self.measure.kind} integrands need polynomials of parity {want}")

    @property
    def radial_variable(self) -> bool:
        """True when the variable is s = r**2 rather than t."""
        return self.measure.kind != "ground_state"

    def breakpoints(self) -> list[float]:
        """Points in the integration variable where the integrand may be non-smooth."""
        f = self.function
        if self.payload != "entropy_integrand" or f.degree < 1 or f.is_monomial:
            return []
        with np.errstate(all="ignore"):
            scaled = f.coeffs / np.max(np.abs(f.coeffs))
            try:
                roots = np.roots(scaled[::-1])
            except np.linalg.LinAlgError:
                return []
        # a vanishing leading coefficient sends roots past any tail cut
        roots = roots[np.isfinite(roots)]
        if self.radial_variable:
            pts = np.abs(roots) ** 2
        else:
            pts = np.abs(roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots))].real)
        # zeros this close to the origin are covered by the open endpoint
        return sorted({float(p) for p in pts if p > _BREAKPOINT_FLOOR})

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.radial_variable:
            return self._phase(x)
        return self._ground(x)

    def _ground(self, t: np.ndarray) -> np.ndarray:
        f, g = self.function, self.other
        fp, fm = f(t), f(-t)
        if self.payload == "norm_sq":
            p = fp * fp + fm * fm
        elif self.payload == "product":
            p = fp * g(t) + fm * g(-t)
        else:
            p = _xlogx(fp * fp) + _xlogx(fm * fm)
        return p * np.exp(_log_weight(self.measure, t))

    def _phase(self, s: np.ndarray) -> np.ndarray:
        f = self.function
        log_w = _log_weight(self.measure, s)
        log_s = np.log(s)
        if f.is_zero:
            return np.zeros_like(s)
        if self.payload == "entropy_integrand" and f.is_monomial:
            n = f.degree
            log_a2 = 2.0 * math.log(abs(f.coeffs[n]))
            log_mod2 = log_a2 + n * log_s
            return np.exp(log_mod2 + log_w) * log_mod2
        if self.payload == "entropy_integrand":
            m = self.angular_nodes
            theta = 2.0 * math.pi * np.arange(m) / m
            z = np.sqrt(s)[:, None] * np.exp(1j * theta)[None, :]
            mod2 = np.abs(f(z)) ** 2
            return _xlogx(mod2).mean(axis=1) * np.exp(log_w)
        # circle averages of z**j conj(z**k) vanish unless j == k
        a = f.coeffs
        b = a if self.other is None else self.other.coeffs
        size = min(len(a), len(b))
        radial = a[:size] * b[:size]
        shift = 1 if self.payload == "energy_integrand" else 0
        out = np.zeros_like(s)
        for k in np.flatnonzero(radial):
            out += radial[k] * np.exp((k + shift) * log_s + log_w)
        return out


@dataclass(frozen=True)
class SummedIntegrand:
    """Pointwise sum of integrands sharing an integration variable."""

    parts: tuple

    def __post_init__(self):
        kinds = {p.radial_variable for p in self.parts}
        if len(kinds) != 1:
            raise DomainError("summed integrands must share an integration variable")

    @property
    def radial_variable(self) -> bool:
        return self.parts[0].radial_variable

    def breakpoints(self) -> list[float]:
        return sorted({b for p in self.parts for b in p.breakpoints()})

    def __call__(self, x) -> np.ndarray:
        return sum(p(x) for p in self.parts)


def _tail_cut(h, radial: bool, cfg: QuadratureConfig) -> tuple[float, float]:
    """Truncation point in the integration variable and a bound on the dropped tail."""
    to_var = (lambda r: r * r) if radial else (lambda r: r)
    cap = to_var(math.sqrt(_SQUARED_RADIUS_CAP))
    if cfg.tail_cut is not None:
        cut = min(to_var(cfg.tail_cut), cap)
    else:
        r = _TAIL_START_RADIUS
        while True:
            probes = np.array([to_var(r), to_var(1.5 * r), to_var(2.0 * r)])
            probes = np.minimum(probes, cap)
            vals = np.abs(np.asarray(h(probes), dtype=float))
            if not np.all(np.isfinite(vals)):
                raise QuadratureError("non-finite integrand sample while locating the tail cut")
            if np.all(vals < cfg.abs_tol) or probes[-1] >= cap:
                cut = float(probes[-1])
                break
            r *= 2.0
    edge = abs(float(np.asarray(h(np.array([cut])), dtype=float)[0]))
    # integrands decay at least like exp(-x) past the cut; edge * cut bounds the tail generously
    return cut, edge * max(cut, 1.0)


def integrate_semi_infinite(
    integrand,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    *,
    radial_variable: bool | None = None,
    breakpoints: Iterable[float] | None = None,
) -> tuple[float, float]:
    """Integral of ``integrand`` over (0, inf).

    Parameters
    ----------
    integrand : IntegrandSpec, SummedIntegrand or callable
        Vectorised in its single variable.  Plain callables are treated as
        functions of t (or of s = r**2 when ``radial_variable`` is true).
    cfg : QuadratureConfig

    Returns
    -------
    value, err_est : float
        ``err_est`` includes a bound on the truncated tail.
    """
    if radial_variable is None:
        radial_variable = bool(getattr(integrand, "radial_variable", False))
    if breakpoints is None:
        getter = getattr(integrand, "breakpoints", None)
        breakpoints = getter() if callable(getter) else ()
    cut, tail = _tail_cut(integrand, radial_variable, cfg)
    seeds = [p for p in breakpoints if 0 < p < cut]
    if 1.0 < cut:
        seeds.append(1.0)
    value, err = integrate(integrand, 0.0, cut, cfg, seeds)
    return value, err + tail


def _space_measures(space: str, mu: float):
    if space == "ground":
        return None
    if space == "phase":
        return MeasureDensity("even_phase", mu), MeasureDensity("odd_phase", mu)
    raise DomainError(f"space must be 'ground' or 'phase', got {space!r}")


def _as_poly(f) -> DensePolynomial:
    return f if isinstance(f, DensePolynomial) else DensePolynomial(f)


def _finish(value: float, err: float, with_error: bool):
    return (value, err) if with_error else value


def inner_product_oracle(f, g, space: str, mu: MuLike, cfg: QuadratureConfig = DEFAULT_CONFIG,
                         *, with_error: bool = False):
    """Real inner product of two real polynomials by quadrature.

    In phase space the even and odd parts are paired under their own measures.
    """
    m = as_mu(mu)
    f, g = _as_poly(f), _as_poly(g)
    measures = _space_measures(space, m)
    if measures is None:
        spec = IntegrandSpec(MeasureDensity("ground_state", m), "product", f, g, cfg.angular_nodes)
        return _finish(*integrate_semi_infinite(spec, cfg), with_error)
    value = err = 0.0
    for parity, measure in enumerate(measures):
        fp, gp = f.parity_part(parity), g.parity_part(parity)
        if fp.is_zero or gp.is_zero:
            continue
        v, e = integrate_semi_infinite(IntegrandSpec(measure, "product", fp, gp, cfg.angular_nodes), cfg)
        value += v
        err += e
    return _finish(value, err, with_error)


def _part_norms(f: DensePolynomial, measures, cfg):
    out = []
    for parity, measure in enumerate(measures):
        fp = f.parity_part(parity)
        if fp.is_zero:
            out.append((measure, fp, 0.0, 0.0))
            continue
        n, e = integrate_semi_infinite(IntegrandSpec(measure, "norm_sq", fp, None, cfg.angular_nodes), cfg)
        out.append((measure, fp, n, e))
    return out


def norm_sq_oracle(f, space: str, mu: MuLike, cfg: QuadratureConfig = DEFAULT_CONFIG,
                   *, with_error: bool = False):
    """Squared norm of a polynomial in the ground-state or phase space, by quadrature."""
    m = as_mu(mu)
    f = _as_poly(f)
    if f.is_zero:
        raise DomainError("norm of the zero polynomial requested")
    measures = _space_measures(space, m)
    if measures is None:
        spec = IntegrandSpec(MeasureDensity("ground_state", m), "norm_sq", f, None, cfg.angular_nodes)
        return _finish(*integrate_semi_infinite(spec, cfg), with_error)
    parts = _part_norms(f, measures, cfg)
    return _finish(sum(p[2] for p in parts), sum(p[3] for p in parts), with_error)


def _entropy_from(integral: float, i_err: float, norm: float, n_err: float) -> tuple[float, float]:
    if norm == 0.0:
        # x log x -> 0; only reachable when every sample underflowed
        return integral, i_err + n_err
    value = integral - norm * math.log(norm)
    return value, i_err + abs(math.log(norm) + 1.0) * n_err


def entropy_oracle(f, space: str, mu: MuLike, cfg: QuadratureConfig = DEFAULT_CONFIG,
                   *, method: str = "decomposed", with_error: bool = False):
    """Shannon entropy of a polynomial, integral of |f|^2 log|f|^2 minus ||f||^2 log ||f||^2.

    Parameters
    ----------
    f : DensePolynomial or coefficient sequence
    space : {'ground', 'phase'}
    mu : float or MuParameter
    method : {'decomposed', 'direct'}
        Phase space only.  'decomposed' combines the entropies and norms of
        the even and odd parts; 'direct' integrates the entropy density of
        the whole function over both copies of the plane in one pass.
    """
    m = as_mu(mu)
    f = _as_poly(f)
    if f.is_zero:
        raise DomainError("entropy of the zero polynomial requested")
    measures = _space_measures(space, m)
    if measures is None:
        ground = MeasureDensity("ground_state", m)
        i, ie = integrate_semi_infinite(IntegrandSpec(ground, "entropy_integrand", f, None, cfg.angular_nodes), cfg)
        n, ne = integrate_semi_infinite(IntegrandSpec(ground, "norm_sq", f, None, cfg.angular_nodes), cfg)
        return _finish(*_entropy_from(i, ie, n, ne), with_error)
    # a part whose squared norm underflows contributes x log x -> 0
    parts = [p for p in _part_norms(f, measures, cfg) if not p[1].is_zero and p[2] > 0.0]
    if not parts:
        raise DomainError("squared norm underflows; rescale the polynomial")
    total = sum(p[2] for p in parts)
    total_err = sum(p[3] for p in parts)
    specs = [IntegrandSpec(meas, "entropy_integrand", fp, None, cfg.angular_nodes) for meas, fp, _, _ in parts]
    if method == "direct":
        i, ie = integrate_semi_infinite(SummedIntegrand(tuple(specs)), cfg)
        return _finish(*_entropy_from(i, ie, total, total_err), with_error)
    if method != "decomposed":
        raise DomainError(f"method must be 'decomposed' or 'direct', got {method!r}")
    value = err = 0.0
    for spec, (_, _, n, ne) in zip(specs, parts):
        i, ie = integrate_semi_infinite(spec, cfg)
        s, se = _entropy_from(i, ie, n, ne)
        value += s + n * math.log(n / total)
        err += se + (abs(math.log(n / total)) + 1.0) * ne
    return _finish(value, err + total_err, with_error)


def energy_oracle(f, mu: MuLike, cfg: QuadratureConfig = DEFAULT_CONFIG, *, with_error: bool = False):
    """Second radial moment of |f|^2, each parity part against its own phase-space measure."""
    m = as_mu(mu)
    f = _as_poly(f)
    if f.is_zero:
        raise DomainError("energy of the zero polynomial requested")
    value = err = 0.0
    for parity, measure in enumerate(_space_measures("phase", m)):
        fp = f.parity_part(parity)
        if fp.is_zero:
            continue
        v, e = integrate_semi_infinite(IntegrandSpec(measure, "energy_integrand", fp, None, cfg.angular_nodes), cfg)
        value += v
        err += e
    return _finish(value, err, with_error)


def measure_mass_oracle(measure: MeasureDensity, cfg: QuadratureConfig = DEFAULT_CONFIG,
                        *, with_error: bool = False):
    """Total mass of a reference measure by quadrature."""
    factor = 2.0 if measure.kind == "ground_state" else 1.0

    def h(x):
        return factor * np.exp(_log_weight(measure, np.asarray(x, dtype=float)))

    radial = measure.kind != "ground_state"
    return _finish(*integrate_semi_infinite(h, cfg, radial_variable=radial), with_error)


def k_moment_oracle(alpha: float, beta: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    *, with_error: bool = False):
    """Integral of K_alpha(s) s**(beta - 1) over (0, inf) by quadrature."""
    if not beta > abs(alpha):
        raise DomainError(f"moment diverges unless beta > |alpha|; got alpha={alpha}, beta={beta}")

    def h(s):
        s = np.asarray(s, dtype=float)
        return np.exp(np.array([log_bessel_k(alpha, si) for si in s]) + (beta - 1.0) * np.log(s))

    return _finish(*integrate_semi_infinite(h, cfg, radial_variable=True), with_error)
