"""Command-line front end: verification reports, tables, sweeps and a smoke test.

Machine-readable output (CSV or JSON) goes to stdout or ``--out``; log
lines go to stderr.  Exit codes: 0 all checks pass, 1 a numerical check
failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Callable, Iterable, Sequence

import numpy as np

from . import entropy_energy as ee
from .exceptions import DomainError, QuadratureError, RangeError
from .mu_core import (
    DensePolynomial,
    MeasureDensity,
    MuParameter,
    density,
    e_mu,
    gamma_mu,
    hermite_mu,
    log_gamma_mu,
    measure_mass,
    xi_mu,
    zeta_mu,
)
from .quadrature import (
    QuadratureConfig,
    energy_oracle,
    entropy_oracle,
    measure_mass_oracle,
    norm_sq_oracle,
)
from .special_functions import EULER_GAMMA, bessel_k, digamma
from .transform import ComplexGrid, bargmann_transform, bargmann_transform_exact, verify_basis_transform

log = logging.getLogger("mubargmann")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
THREADS_ENV = "MU_BARGMANN_THREADS"
# closed-form entropy of t**n overflows a double near n = 170
MONOMIAL_ENTROPY_MAX_N = 150
# |t**n|**2 at the quadrature tail cut overflows near n = 108
MONOMIAL_ORACLE_MAX_N = 60


@dataclass(frozen=True)
class ReportRow:
    """One closed-form versus oracle comparison."""

    kind: str
    n: int
    mu: float
    closed_form: float
    oracle: float
    abs_err: float
    rel_err: float
    quadrature_err_est: float
    passed: bool

    @classmethod
    def build(cls, kind, n, mu, closed, oracle, err_est, abs_band, rel_band) -> "ReportRow":
        abs_err = abs(closed - oracle)
        # relative to |closed_form|; falls back to the absolute error when the closed form is 0
        rel_err = abs_err / abs(closed) if closed != 0 else abs_err
        ok = abs_err <= max(abs_band, rel_band * abs(closed))
        return cls(kind, n, mu, closed, oracle, abs_err, rel_err, err_est, ok)

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["pass"] = rec.pop("passed")
        return rec


REPORT_FIELDS = [f.name if f.name != "passed" else "pass" for f in fields(ReportRow)]


# ---------------------------------------------------------------- formatting


def _fmt_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _json_value(x) -> str:
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if isinstance(x, float) and not math.isfinite(x):
        return "null"
    return _fmt_number(x)


def render(records: Sequence[dict], columns: Sequence[str], fmt: str) -> str:
    """Serialise records deterministically as CSV (header always present) or a JSON array."""
    if fmt == "json":
        items = []
        for rec in records:
            body = ", ".join(f"{json.dumps(c)}: {_json_value(rec[c])}" for c in columns)
            items.append("  {" + body + "}")
        return "[\n" + ",\n".join(items) + ("\n" if items else "") + "]\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for rec in records:
        cells = []
        for c in columns:
            v = rec[c]
            cell = v if isinstance(v, str) else _fmt_number(v)
            if any(ch in cell for ch in ',"\n'):
                cell = '"' + cell.replace('"', '""') + '"'
            cells.append(cell)
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def emit(records: Sequence[dict], columns: Sequence[str], args) -> None:
    text = render(records, columns, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


# ---------------------------------------------------------------- workers


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    try:
        n = int(raw) if raw else 0
    except ValueError:
        log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        n = 0
    if n <= 0:
        n = len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
    return max(1, n)


def ordered_map(func: Callable, items: Sequence) -> list:
    """map() over a bounded process pool; results keep the input order."""
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


# ---------------------------------------------------------------- verify


def _verify_task(task) -> list[ReportRow]:
    mu, n, cfg, abs_band, rel_band = task
    rows = []
    f = xi_mu(n, mu)
    s_val, s_err = entropy_oracle(f, "phase", mu, cfg, with_error=True)
    kind = "entropy_odd" if n % 2 else "entropy_even"
    rows.append(ReportRow.build(kind, n, mu, ee.entropy_xi(n, mu).value, s_val, s_err, abs_band, rel_band))
    e_val, e_err = energy_oracle(f, mu, cfg, with_error=True)
    rows.append(ReportRow.build("energy", n, mu, ee.energy_xi(n, mu).value, e_val, e_err, abs_band, rel_band))
    if n <= MONOMIAL_ORACLE_MAX_N:
        m_val, m_err = entropy_oracle(DensePolynomial.monomial(n), "ground", mu, cfg, with_error=True)
        closed = ee.entropy_monomial_ground(n, mu).value
        rows.append(ReportRow.build("monomial_entropy", n, mu, closed, m_val, m_err, abs_band, rel_band))
    return rows


def cmd_verify(args) -> int:
    cfg = _config(args)
    tasks = [(mu, n, cfg, args.abs_band, args.rel_band) for mu in args.mu for n in range(args.n_max + 1)]
    log.info("verify: %d (mu, n) pairs", len(tasks))
    rows = [row for chunk in ordered_map(_verify_task, tasks) for row in chunk]
    emit([r.as_record() for r in rows], REPORT_FIELDS, args)
    failed = [r for r in rows if not r.passed]
    for r in failed:
        log.error("FAIL %s n=%d mu=%g abs_err=%.3e", r.kind, r.n, r.mu, r.abs_err)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------- table

_TABLE_FUNCS = {
    "entropy": lambda n, mu: ee.entropy_xi(n, mu).value,
    "energy": lambda n, mu: ee.energy_xi(n, mu).value,
    "monomial-entropy": lambda n, mu: ee.entropy_monomial_ground(n, mu).value,
}


def cmd_table(args) -> int:
    if args.kind == "monomial-entropy" and args.n_max + 1 > MONOMIAL_ENTROPY_MAX_N:
        raise UsageError(f"--n-max for monomial-entropy must be below {MONOMIAL_ENTROPY_MAX_N}")
    func = _TABLE_FUNCS[args.kind]
    records = []
    for mu in args.mu:
        values = [func(n, mu) for n in range(args.n_max + 2)]
        for n in range(args.n_max + 1):
            records.append({"kind": args.kind, "n": n, "mu": mu, "value": values[n],
                            "next_difference": values[n + 1] - values[n]})
    emit(records, ["kind", "n", "mu", "value", "next_difference"], args)
    return EXIT_OK


# ---------------------------------------------------------------- sharpness

SHARPNESS_FIELDS = ["parity", "mu", "c", "n_max", "argmax", "max_gap", "growth", "predicted_growth",
                    "verdict", "expected", "pass"]


def _sharpness_task(task) -> dict:
    parity, c, mu, n_max = task
    s = ee.sharpness_verdict(parity, c, mu, n_max)
    expected = "bounded" if c > 1 else "unbounded"
    return {"parity": "odd" if s.parity else "even", "mu": mu, "c": c, "n_max": n_max, "argmax": s.argmax,
            "max_gap": s.max_gap, "growth": s.growth, "predicted_growth": s.predicted_growth,
            "verdict": s.verdict, "expected": expected, "pass": s.verdict == expected}


def cmd_sharpness(args) -> int:
    parities = ["even", "odd"] if args.parity == "both" else [args.parity]
    tasks = [(p, c, mu, args.n_max) for mu in args.mu for p in parities for c in args.c]
    records = ordered_map(_sharpness_task, tasks)
    emit(records, SHARPNESS_FIELDS, args)
    return EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL


# ---------------------------------------------------------------- limits

LIMIT_FIELDS = ["which", "mu", "n", "value", "limit", "error"]
_LIMIT_DEFAULTS = {
    "diff1": ([20, 200, 2000], 0.01),
    "diff2": ([10, 100, 1000], 0.01),
    "cesaro": ([100, 1000, 10000], 0.02),
    "lemma32": ([100, 1000, 10000], 3e-3),
    "mu-infinity": ([], 1e-3),
}


def _limit_value(which: str, mu: float, n: int) -> tuple[float, float]:
    if which == "diff1":
        return ee.entropy_xi(n + 1, mu).value - ee.entropy_xi(n, mu).value, 1.0
    if which == "diff2":
        return ee.entropy_xi_even(n + 1, mu).value - ee.entropy_xi_even(n, mu).value, 2.0
    if which == "cesaro":
        return ee.entropy_xi(n, mu).value / n, 1.0
    if which == "lemma32":
        return math.exp(log_gamma_mu(n, mu) / n) / n, math.exp(-1.0)
    raise ValueError(which)


def cmd_limits(args) -> int:
    default_n, default_band = _LIMIT_DEFAULTS[args.which]
    band = args.band if args.band is not None else default_band
    records = []
    ok = True
    if args.which == "mu-infinity":
        mus = sorted(args.mu)
        values = ee.entropy_limit_mu_infinity(args.index, mus)
        odd = args.index % 2 == 1
        for mu, v in zip(mus, values):
            records.append({"which": args.which, "mu": mu, "n": args.index, "value": v,
                            "limit": -math.inf if odd else 0.0, "error": v if odd else abs(v)})
        trend = [r["value"] if odd else r["error"] for r in records]
        ok = all(b < a for a, b in zip(trend, trend[1:]))
        if not odd:
            ok = ok and trend[-1] <= band
    else:
        ns = args.n or default_n
        if min(ns) < 1:
            raise UsageError("--n values must be positive")
        for mu in args.mu:
            errs = []
            for n in sorted(ns):
                value, limit = _limit_value(args.which, mu, n)
                errs.append(abs(value - limit))
                records.append({"which": args.which, "mu": mu, "n": n, "value": value, "limit": limit,
                                "error": errs[-1]})
            ok = ok and all(b < a for a, b in zip(errs, errs[1:])) and errs[-1] <= band
    emit(records, LIMIT_FIELDS, args)
    if not ok:
        log.error("limit check %s failed (band %g)", args.which, band)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- transform-check

CHECK_FIELDS = ["check", "mu", "n", "value", "expected", "abs_err", "band", "pass"]


def _transform_task(task) -> list[dict]:
    mu, n_max, cfg = task
    dev = verify_basis_transform(n_max, mu, ComplexGrid.default(), cfg)
    rows = [{"check": "basis_transform", "mu": mu, "n": n_max, "value": dev, "expected": 0.0,
             "abs_err": dev, "band": 1e-7, "pass": dev <= 1e-7}]
    image = bargmann_transform_exact(zeta_mu(1, mu), mu)
    gap = entropy_oracle(image, "phase", mu, cfg) - entropy_oracle(zeta_mu(1, mu), "ground", mu, cfg)
    expected = ee.entropy_gap_zeta1(mu)
    err = abs(gap - expected)
    rows.append({"check": "entropy_gap", "mu": mu, "n": 1, "value": gap, "expected": expected,
                 "abs_err": err, "band": 1e-6, "pass": err <= 1e-6 and gap < 0})
    return rows


def cmd_transform_check(args) -> int:
    if args.n_max > 12:
        raise UsageError("--n-max is capped at 12 for transform-check")
    cfg = _config(args)
    records = [r for chunk in ordered_map(_transform_task, [(mu, args.n_max, cfg) for mu in args.mu])
               for r in chunk]
    emit(records, CHECK_FIELDS, args)
    return EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL


# ---------------------------------------------------------------- selftest


def _selftest_cases(cfg: QuadratureConfig, rng: np.random.Generator) -> list[tuple[str, float, float, float]]:
    g = EULER_GAMMA
    cases = [
        ("digamma(1)", digamma(1.0), -g, 1e-12),
        ("digamma(1/2)", digamma(0.5), -g - 2 * math.log(2), 1e-12),
        ("digamma(4)", digamma(4.0), -g + 1 + 1 / 2 + 1 / 3, 1e-12),
        ("bessel_k(1/2, 1)", bessel_k(0.5, 1.0), math.sqrt(math.pi / 2) * math.exp(-1), 1e-12),
        ("bessel_k(-1/2, 2)", bessel_k(-0.5, 2.0), math.sqrt(math.pi / 4) * math.exp(-2), 1e-12),
        ("gamma_mu(0, 0.3)", gamma_mu(0, 0.3), 1.0, 0.0),
        ("gamma_mu(4, 0)", gamma_mu(4, 0.0), 24.0, 1e-12),
        ("e_mu(1, 0)", e_mu(1.0, 0.0).real, math.e, 1e-14),
        ("hermite_mu(0, 0.7)[0]", hermite_mu(0, 0.7).coeffs[0], 1.0, 0.0),
        ("hermite_mu(1, 0.7)[1]", hermite_mu(1, 0.7).coeffs[1], 2 / 2.4, 1e-14),
        ("hermite_mu(2, 0.7)[2]", hermite_mu(2, 0.7).coeffs[2], 4 / 2.4, 1e-14),
        ("hermite_mu(2, 0.7)[0]", hermite_mu(2, 0.7).coeffs[0], -2.0, 1e-14),
        ("zeta_mu(1, 0.7)[1]", zeta_mu(1, 0.7).coeffs[1], math.sqrt(2 / 2.4), 1e-14),
        ("ground density mu=0 t=0", density(MeasureDensity("ground_state", 0.0), 0.0), 1 / math.sqrt(math.pi), 1e-14),
        ("even density mu=0 r=1", density(MeasureDensity("even_phase", 0.0), 1.0), math.exp(-1) / math.pi, 1e-12),
        ("odd density mu=0 r=1", density(MeasureDensity("odd_phase", 0.0), 1.0), math.exp(-1) / math.pi, 1e-12),
        ("entropy S_0^mu", ee.entropy_xi(0, 1.7).value, 0.0, 0.0),
        ("classical S(1)", ee.entropy_classical(0).value, 0.0, 0.0),
        ("monomial entropy S(1)", ee.entropy_monomial_ground(0, 0.4).value, 0.0, 0.0),
        ("monomial entropy S(t), mu=0.4", ee.entropy_monomial_ground(1, 0.4).value,
         0.9 * (digamma(1.9) - math.log(0.9)), 1e-12),
        ("entropy of zeta_1 at mu=0", ee.entropy_zeta1(0.0).value, 2 - math.log(2) - g, 1e-12),
        ("energy E_4^0", ee.energy_xi(4, 0.0).value, 5.0, 1e-12),
        ("energy E_3^0", ee.energy_xi(3, 0.0).value, 4.0, 1e-12),
        ("oracle energy of xi_0 at mu=0", energy_oracle(xi_mu(0, 0.0), 0.0, cfg), 1.0, 1e-8),
        ("oracle norm of t, mu=0.4", norm_sq_oracle([0.0, 1.0], "ground", 0.4, cfg), 0.9, 1e-8),
        ("oracle entropy of 1 (ground)", entropy_oracle([1.0], "ground", 0.4, cfg), 0.0, 1e-9),
        ("oracle entropy of 1 (phase)", entropy_oracle([1.0], "phase", 0.4, cfg), 0.0, 1e-9),
        ("even phase mass mu=0.4", measure_mass_oracle(MeasureDensity("even_phase", 0.4), cfg), 1.0, 1e-8),
        ("odd phase mass mu=0", measure_mass_oracle(MeasureDensity("odd_phase", 0.0), cfg), 1.0, 1e-8),
        ("odd phase mass mu=0.4", measure_mass_oracle(MeasureDensity("odd_phase", 0.4), cfg),
         measure_mass(MeasureDensity("odd_phase", 0.4)), 1e-8),
        ("transform of zeta_1, mu=0.5, z=1", abs(bargmann_transform(zeta_mu(1, 0.5), 0.5, 1.0, cfg)),
         2 ** -0.5, 1e-8),
        ("transform of zeta_0 on grid", verify_basis_transform(0, 0.3, None, cfg), 0.0, 1e-8),
    ]
    for n in range(5):
        cases.append((f"energy E_{n}^0 = n + 1", ee.energy_xi(n, 0.0).value, n + 1.0, 1e-12))
    # randomised: decomposed and direct mixed-parity entropies agree
    for k in range(2):
        coeffs = rng.normal(size=4)
        a = entropy_oracle(coeffs, "phase", 0.0, cfg)
        b = entropy_oracle(coeffs, "phase", 0.0, cfg, method="direct")
        cases.append((f"mixed-parity entropy routes agree #{k}", a, b, 1e-6 * max(1.0, abs(b))))
    return cases


def cmd_selftest(args) -> int:
    start = time.perf_counter()
    cfg = _config(args)
    rng = np.random.default_rng(args.seed)
    records = []
    for name, got, want, tol in _selftest_cases(cfg, rng):
        err = abs(got - want)
        records.append({"check": name, "value": float(got), "expected": float(want), "abs_err": float(err),
                        "band": tol, "pass": bool(err <= tol)})
    emit(records, ["check", "value", "expected", "abs_err", "band", "pass"], args)
    log.info("selftest: %d checks in %.1f s", len(records), time.perf_counter() - start)
    return EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL


# ---------------------------------------------------------------- parsing


class UsageError(Exception):
    """Invalid combination of arguments detected after parsing."""


def _mu_value(text: str) -> float:
    try:
        return MuParameter(float(text)).mu
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _list_of(conv: Callable[[str], object]) -> Callable[[str], list]:
    def parse(text: str) -> list:
        items = [t.strip() for t in text.split(",") if t.strip()]
        if not items:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        out = []
        for item in items:
            try:
                out.append(conv(item))
            except (TypeError, ValueError) as exc:
                raise argparse.ArgumentTypeError(str(exc)) from None
        return out

    return parse


def _nonneg_int(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return x


def _config(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--rel-tol", type=_positive_float, default=1e-10)
    common.add_argument("--abs-tol", type=_positive_float, default=1e-14)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="store_true", help="info-level logging on stderr")

    parser = argparse.ArgumentParser(
        prog="mu-bargmann",
        description="Entropies, energies and transforms in the deformed Segal-Bargmann setting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    mu_list = _list_of(_mu_value)

    p = sub.add_parser("verify", parents=[common], help="closed forms against quadrature oracles")
    p.add_argument("--mu", type=mu_list, default=[0.0])
    p.add_argument("--n-max", type=_nonneg_int, default=10)
    p.add_argument("--abs-band", type=_positive_float, default=1e-7)
    p.add_argument("--rel-band", type=_positive_float, default=1e-7)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", parents=[common], help="tabulate closed-form values")
    p.add_argument("kind", choices=sorted(_TABLE_FUNCS))
    p.add_argument("--mu", type=mu_list, default=[0.0])
    p.add_argument("--n-max", type=_nonneg_int, default=10)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("sharpness", parents=[common], help="boundedness of energy minus c times entropy")
    p.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    p.add_argument("--c", type=_list_of(float), default=[0.5, 0.95, 1.0, 1.05, 1.2, 2.0])
    p.add_argument("--mu", type=mu_list, default=[0.0])
    p.add_argument("--n-max", type=_nonneg_int, default=10_000)
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("limits", parents=[common], help="finite-index convergence tables")
    p.add_argument("which", choices=sorted(_LIMIT_DEFAULTS))
    p.add_argument("--mu", type=mu_list, default=None)
    p.add_argument("--n", type=_list_of(int), default=None)
    p.add_argument("--index", type=_nonneg_int, default=2, help="basis index for mu-infinity")
    p.add_argument("--band", type=_positive_float, default=None)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("transform-check", parents=[common], help="transform of the Hermite basis")
    p.add_argument("--mu", type=mu_list, default=[0.0])
    p.add_argument("--n-max", type=_nonneg_int, default=6)
    p.set_defaults(func=cmd_transform_check)

    p = sub.add_parser("selftest", parents=[common], help="fast smoke suite of reference values")
    p.set_defaults(func=cmd_selftest)
    return parser


_LIST_FLAGS = ("--mu", "--c", "--n")


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--mu -0.25,0`` as ``--mu=-0.25,0`` so argparse does not read a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2] in set("0123456789."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_attach_negative_values(argv))
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if getattr(args, "mu", "unset") is None:
        args.mu = [1.0, 10.0, 100.0, 1000.0] if args.which == "mu-infinity" else [0.0]
    if args.command == "sharpness" and args.n_max < 10:
        parser.error("--n-max must be at least 10 for sharpness")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (DomainError, RangeError, QuadratureError) as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
