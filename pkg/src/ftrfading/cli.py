"""Command-line interface: every library capability as a CSV/JSON emitting verb.

Exit codes: 0 on success, 2 on invalid input (one-line diagnostic on
stderr), 3 when a numerical method misses its accuracy target (the error
estimate is printed).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from typing import Sequence

import numpy as np

from . import fit as _fit
from . import metrics as _metrics
from . import sampler as _sampler
from .errors import FtrError, NoFit, NonConvergence, PrecisionWarning
from .model import (
    SPECIAL_CASES,
    TARGETS,
    FtrParams,
    ReductionCase,
    check_reduction,
    cdf,
    envelope_pdf,
    mgf,
    mgf_independent,
    mixture_coeffs,
    pdf,
    poly_coeffs,
)
from .specfn import DEFAULT_INVERSION, LaplaceInversion

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

# Options whose values may legitimately start with '-'.
_NUMERIC_VALUE_OPTS = ("--grid", "--gamma-db", "--gamma-bar", "--s")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def fmt(v) -> str:
    """Byte-stable number formatting (17 significant digits)."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.17g}"


def _json(obj) -> str:
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json(v) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return json.dumps(fmt(obj))
    return fmt(obj)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:points`` (inclusive, points >= 2) or a single number."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise _UsageError(f"bad grid {text!r}; expected start:stop:points") from None
    if n < 2:
        raise _UsageError(f"grid needs at least 2 points, got {n}")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise _UsageError("grid bounds must be finite")
    return np.linspace(start, stop, n)


def _m_value(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    v = float(text)
    return int(v) if v.is_integer() else v


def _add_params(sp, gamma=True):
    g = sp.add_argument_group("model parameters")
    g.add_argument("--K", type=float, required=True, help="specular-to-diffuse power ratio (linear)")
    g.add_argument("--Delta", type=float, required=True, help="specular similarity in [0, 1]")
    g.add_argument("--m", type=_m_value, required=True, help="fluctuation index (> 0, or 'inf')")
    if gamma:
        ex = g.add_mutually_exclusive_group()
        ex.add_argument("--gamma-bar", help="average SNR, linear (default 1)")
        ex.add_argument("--gamma-db", help="average SNR in dB")


def _add_output(sp):
    sp.add_argument("--output", choices=("csv", "json"), default="csv")


def _add_inversion(sp):
    sp.add_argument("--inversion", choices=("euler-summation", "fixed-talbot"), default="euler-summation")
    sp.add_argument("--terms", type=int, default=DEFAULT_INVERSION.terms, help="inversion terms (>= 10)")
    sp.add_argument("--tolerance", type=float, default=DEFAULT_INVERSION.target_rel_error, help="target relative inversion error")


def _inversion(args) -> LaplaceInversion:
    return LaplaceInversion(args.inversion, args.terms, args.tolerance)


def _gammas(args, default_grid: str | None = None):
    """Average-SNR values (linear) and their dB labels from the exclusive flags."""
    if args.gamma_db is not None:
        db = parse_grid(args.gamma_db)
        return db, 10.0 ** (db / 10.0)
    if args.gamma_bar is not None:
        lin = parse_grid(args.gamma_bar)
        if np.any(lin <= 0):
            raise _UsageError("--gamma-bar values must be positive")
        return 10.0 * np.log10(lin), lin
    if default_grid is None:
        return np.array([0.0]), np.array([1.0])
    db = parse_grid(default_grid)
    return db, 10.0 ** (db / 10.0)


def _single_gamma(args) -> float:
    _, lin = _gammas(args)
    if lin.size != 1:
        raise _UsageError("this command takes a single average SNR value")
    return float(lin[0])


def _params(args, gamma_bar=None) -> FtrParams:
    g = _single_gamma(args) if gamma_bar is None else gamma_bar
    return FtrParams(args.K, args.Delta, args.m, g)


def _emit_table(out, args, columns: Sequence[str], rows) -> None:
    if getattr(args, "output", "csv") == "json":
        data = {c: [r[i] for r in rows] for i, c in enumerate(columns)}
        out.write(_json(data) + "\n")
        return
    out.write(",".join(columns) + "\n")
    for r in rows:
        out.write(",".join(v if isinstance(v, str) else fmt(v) for v in r) + "\n")


# -- verbs --------------------------------------------------------------------


def cmd_pdf(args, out):
    p = _params(args)
    x = parse_grid(args.grid)
    vals = pdf(p, x, args.method, _inversion(args), args.M)
    _emit_table(out, args, ("x", "pdf"), list(zip(x, np.atleast_1d(vals))))


def cmd_cdf(args, out):
    p = _params(args)
    x = parse_grid(args.grid)
    vals = cdf(p, x, args.method, _inversion(args), args.M)
    _emit_table(out, args, ("x", "cdf"), list(zip(x, np.atleast_1d(vals))))


def cmd_mgf(args, out):
    p = _params(args)
    s = parse_grid(args.grid)
    fn = mgf_independent if args.independent else mgf
    _emit_table(out, args, ("s", "mgf"), list(zip(s, np.atleast_1d(fn(p, s)))))


def cmd_envelope_pdf(args, out):
    p = _params(args)
    r = parse_grid(args.grid)
    omega = args.omega if args.omega is not None else p.gamma_bar
    vals = envelope_pdf(p, r, omega, args.method, _inversion(args))
    _emit_table(out, args, ("r", "pdf"), list(zip(r, np.atleast_1d(vals))))


def cmd_sample(args, out):
    p = _params(args)
    cfg = _sampler.SampleConfig(args.seed, args.n, args.es_over_n0)
    fn = _sampler.sample_independent if args.independent else _sampler.sample_ftr
    batch = fn(p, cfg)
    if args.format == "binary":
        if not args.out:
            raise _UsageError("--format binary needs --out PATH")
        _sampler.write_binary(batch, args.out, args.seed)
        return
    if args.out:
        _sampler.write_csv(batch, args.out)
        return
    out.write("snr,envelope\n")
    for a, b in zip(batch.snr, batch.envelope):
        out.write(f"{fmt(a)},{fmt(b)}\n")


def _sweep(args, out, exact_fn, asym_fn, mc_fn, exact_label="exact"):
    db, lin = _gammas(args, default_grid="0:40:41")
    base = FtrParams(args.K, args.Delta, args.m, 1.0)
    rows = []
    for d, g in zip(db, lin):
        rows.append((float(d), exact_fn(base.with_gamma_bar(float(g))), exact_label))
        if args.with_asymptote:
            rows.append((float(d), asym_fn(base.with_gamma_bar(float(g))), "asymptotic"))
    if args.with_mc:
        if args.seed is None:
            raise _UsageError("--with-mc needs --seed")
        mc = _metrics.monte_carlo_sweep(
            base, mc_fn, lin, _sampler.SampleConfig(args.seed, args.mc_samples), unit="linear"
        )
        # Label with the grid's own dB values so rows group by grid point.
        rows.extend((float(db[i // 2]), r.value, r.method) for i, r in enumerate(mc))
    order = {"exact": 0, "quadrature": 0, "asymptotic": 1, "mc": 2, "mc_se": 3}
    rows.sort(key=lambda r: (r[0], order[r[2]]))
    _emit_table(out, args, ("gamma_bar_db", "value", "method"), rows)


def cmd_ber(args, out):
    cep = _metrics.CepFamily.named(args.mod)
    if args.path == "lauricella":
        fn, label = (lambda q: _metrics.ber_exact(q, cep)), "exact"
    else:
        inv = _inversion(args)
        fn, label = (lambda q: _metrics.ber_quadrature(q, cep, inv)), "quadrature"
    _sweep(
        args,
        out,
        fn,
        lambda q: _metrics.ber_asymptotic(q, cep),
        lambda b: _metrics.ber_monte_carlo(b, cep),
        label,
    )


def cmd_outage(args, out):
    spec = _metrics.OutageSpec(args.rate)
    inv = _inversion(args)
    _sweep(
        args,
        out,
        lambda q: _metrics.outage_probability(q, spec, inv),
        lambda q: _metrics.outage_asymptotic(q, spec),
        lambda b: _metrics.outage_monte_carlo(b, spec),
    )


def cmd_fit(args, out):
    with open(args.input, newline="") as fh:
        emp = _fit.EmpiricalCdf.from_csv(fh, args.omega)
    ms = None
    if args.m_candidates:
        try:
            ms = tuple(int(v) for v in args.m_candidates.split(","))
        except ValueError:
            raise _UsageError(f"bad --m-candidates {args.m_candidates!r}") from None
    search = _fit.SearchConfig(refine=not args.no_refine)
    results = {}
    if args.model in ("ftr", "both"):
        results["ftr"] = _fit.fit_ftr(emp, ms, search)
    if args.model in ("rician", "both"):
        results["rician"] = _fit.fit_rician(emp, search)
    if len(results) == 1:
        out.write(_json(next(iter(results.values())).to_dict()) + "\n")
    else:
        out.write(_json({k: v.to_dict() for k, v in results.items()}) + "\n")


def cmd_reduce_check(args, out):
    if args.K is None:
        cases = [c for c in SPECIAL_CASES if args.target in (None, c.target)]
    else:
        if args.Delta is None or args.m is None or args.target is None:
            raise _UsageError("a custom reduction check needs --K, --Delta, --m and --target")
        p = FtrParams(args.K, args.Delta, args.m, args.gamma_bar)
        cases = [ReductionCase(args.target, "custom", p, args.tol)]
    rows = []
    for c in cases:
        err = check_reduction(c)
        rows.append((c.target, c.label, c.params.K, c.params.Delta, c.params.m, err, c.tol, "pass" if err <= c.tol else "fail"))
    _emit_table(out, args, ("target", "case", "K", "Delta", "m", "max_abs_error", "tolerance", "status"), rows)
    return EXIT_OK if all(r[-1] == "pass" for r in rows) else 1


def cmd_coeffs(args, out):
    p = FtrParams(args.K, args.Delta, args.m, args.gamma_bar)
    if args.kind == "poly":
        c = poly_coeffs(p)
        _emit_table(out, args, ("name", "value"), [(n, getattr(c, n)) for n in ("a1", "a2", "a3", "a4")])
        return
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", PrecisionWarning)
        c = mixture_coeffs(p, args.M)
    for w in caught:
        sys.stderr.write(f"warning: {w.message}\n")
    rows = [(i + 1, a, d) for i, (a, d) in enumerate(zip(c.alpha, c.delta))]
    _emit_table(out, args, ("i", "alpha", "delta"), rows)


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ftr",
        description="Fluctuating two-ray fading: distributions, sampling, link metrics and fitting.",
        epilog="Grids are start:stop:points (inclusive). Numbers are printed with 17 significant "
        "digits. FTR_THREADS caps sampler threads. Exit codes: 0 ok, 2 bad input, 3 accuracy target missed.",
    )
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    for verb, helptext, col in (
        ("pdf", "SNR density on an x grid", "x"),
        ("cdf", "SNR distribution on an x grid", "x"),
    ):
        sp = sub.add_parser(verb, help=helptext, description=f"{helptext}. Columns: {col},{verb}.")
        _add_params(sp)
        sp.add_argument("--grid", required=True, help="x grid start:stop:points")
        sp.add_argument("--method", choices=("exact", "approx", "auto"), default="auto")
        sp.add_argument("--M", type=int, help="mixture order for --method approx (default ceil(K*Delta)+1)")
        _add_inversion(sp)
        _add_output(sp)

    sp = sub.add_parser("mgf", help="MGF on an s grid (s <= 0)", description="Columns: s,mgf.")
    _add_params(sp)
    sp.add_argument("--grid", required=True, help="s grid start:stop:points, all <= 0")
    sp.add_argument("--independent", action="store_true", help="independently fluctuating specular waves")
    _add_output(sp)

    sp = sub.add_parser("envelope-pdf", help="amplitude density on an r grid", description="Columns: r,pdf.")
    _add_params(sp)
    sp.add_argument("--grid", required=True, help="r grid start:stop:points")
    sp.add_argument("--omega", type=float, help="E{r^2} (default: the average SNR value)")
    sp.add_argument("--method", choices=("exact", "approx", "auto"), default="auto")
    _add_inversion(sp)
    _add_output(sp)

    sp = sub.add_parser("sample", help="Monte Carlo channel realizations", description="Columns: snr,envelope.")
    _add_params(sp)
    sp.add_argument("--n", type=int, required=True, help="number of realizations")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--es-over-n0", type=float, help="override the energy-to-noise scaling")
    sp.add_argument("--independent", action="store_true")
    sp.add_argument("--format", choices=("csv", "binary"), default="csv")
    sp.add_argument("--out", help="output file (required for binary)")

    for verb, helptext in (("ber", "average bit error rate sweep"), ("outage", "outage probability sweep")):
        sp = sub.add_parser(
            verb,
            help=helptext,
            description=f"{helptext}. Long-format CSV: gamma_bar_db,value,method "
            "(method in exact, asymptotic, mc, mc_se).",
        )
        _add_params(sp)
        if verb == "ber":
            sp.add_argument("--mod", default="bpsk", help="modulation: bpsk or bfsk")
            sp.add_argument("--path", choices=("lauricella", "quadrature"), default="lauricella")
        else:
            sp.add_argument("--rate", type=float, default=2.0, help="rate threshold R_S in bit/s/Hz")
        sp.add_argument("--with-asymptote", action="store_true")
        sp.add_argument("--with-mc", action="store_true")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--mc-samples", type=int, default=1_000_000)
        _add_inversion(sp)
        _add_output(sp)

    sp = sub.add_parser(
        "fit",
        help="fit FTR/Rician to an empirical amplitude CDF",
        description="Input CSV with header amplitude,cdf. The error factor is the largest "
        "|log10 F_emp - log10 F_model| over the empirical support points. Output JSON keys: "
        "K, Delta, m, Omega, epsilon, evaluations.",
    )
    sp.add_argument("--input", required=True)
    sp.add_argument("--omega", type=float, help="E{r^2} if known (default: estimated from the points)")
    sp.add_argument("--model", choices=("ftr", "rician", "both"), default="ftr")
    sp.add_argument("--m-candidates", help="comma-separated integer m values")
    sp.add_argument("--no-refine", action="store_true", help="grid search only")

    sp = sub.add_parser(
        "reduce-check",
        help="compare the MGF with classical special cases",
        description=f"Targets: {', '.join(TARGETS)}. Without parameters all built-in cases run.",
    )
    sp.add_argument("--target", choices=TARGETS)
    sp.add_argument("--K", type=float)
    sp.add_argument("--Delta", type=float)
    sp.add_argument("--m", type=_m_value)
    sp.add_argument("--gamma-bar", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-9)
    _add_output(sp)

    sp = sub.add_parser("coeffs", help="mixture weights/offsets or factorisation constants")
    sp.add_argument("--K", type=float, required=True)
    sp.add_argument("--Delta", type=float, required=True)
    sp.add_argument("--m", type=_m_value, required=True)
    sp.add_argument("--gamma-bar", type=float, default=1.0)
    sp.add_argument("--kind", choices=("mixture", "poly"), default="mixture")
    sp.add_argument("--M", type=int, help="mixture order (default ceil(K*Delta)+1)")
    _add_output(sp)
    return parser


_COMMANDS = {
    "pdf": cmd_pdf,
    "cdf": cmd_cdf,
    "mgf": cmd_mgf,
    "envelope-pdf": cmd_envelope_pdf,
    "sample": cmd_sample,
    "ber": cmd_ber,
    "outage": cmd_outage,
    "fit": cmd_fit,
    "reduce-check": cmd_reduce_check,
    "coeffs": cmd_coeffs,
}


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Glue ``--grid -5:0:11`` into ``--grid=-5:0:11`` so argparse keeps the value."""
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok in _NUMERIC_VALUE_OPTS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, execute the verb and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else argv
    buf = io.StringIO()
    try:
        args = build_parser().parse_args(_join_negative_values(argv))
        code = _COMMANDS[args.verb](args, buf) or EXIT_OK
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except NonConvergence as exc:
        est = "unknown" if exc.estimate is None else fmt(exc.estimate)
        stderr.write(f"ftr: numerical error: {_one_line(exc)} (error estimate {est})\n")
        return EXIT_NUMERIC
    except (_UsageError, FtrError, ValueError, OSError) as exc:
        kind = "no fit" if isinstance(exc, NoFit) else "error"
        stderr.write(f"ftr: {kind}: {_one_line(exc)}\n")
        return EXIT_INPUT
    stdout.write(buf.getvalue())
    return code


def _one_line(exc) -> str:
    return " ".join(str(exc).split())


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
