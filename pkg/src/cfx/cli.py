"""Command-line frontend.

Subcommands: ``quantile``, ``cdf``, ``density`` evaluate expansions for a
cumulant model about a normal or skew-matched gamma base; ``coeffs`` dumps
symbolic coefficient tables; ``terms`` prints the term-count comparison
matrix; ``validate`` runs the built-in verification suite.

Exit codes: 0 success, 2 configuration error, 3 model-order error, 4 numeric
error, 5 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import basedist, cumulants, engine, oracle

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MODEL_ORDER = 3
EXIT_NUMERIC = 4
EXIT_VALIDATION = 5


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# model resolution
# ---------------------------------------------------------------------------

def _build_model(args):
    if args.model_json:
        try:
            cfg = json.loads(args.model_json)
        except json.JSONDecodeError:
            with open(args.model_json) as fh:
                cfg = json.load(fh)
        return cumulants.model_from_config(cfg)
    if args.model == "lnF":
        if args.n1 is None or args.n2 is None:
            raise ConfigError("model lnF requires --n1 and --n2")
        return cumulants.model_lnF(args.n1, args.n2)
    if args.model == "studentized_mean":
        if args.nu3 is None:
            raise ConfigError("model studentized_mean requires --nu3")
        return cumulants.model_studentized_mean(
            _frac(args.nu3), _frac(args.nu4), _frac(args.nu5))
    if args.model == "sample_variance":
        if not args.mu:
            raise ConfigError("model sample_variance requires --mu R=VALUE pairs")
        mu = {}
        for tok in args.mu:
            r, v = tok.split("=", 1)
            mu[int(r)] = _frac(v)
        return cumulants.model_sample_variance(mu)
    if args.model == "gamma":
        return cumulants.model_gamma()
    raise ConfigError("no model given (use --model or --model-json)")


def _frac(v):
    if v is None:
        return None
    try:
        return Fraction(v)
    except ValueError:
        return float(v)


def _model_n(args, table):
    if args.model == "lnF" or (table.label or "").startswith("lnF"):
        n1 = args.n1
        n2 = args.n2
        if n1 and n2:
            return Fraction(2 * n1 * n2, n1 + n2)
    if args.n is None:
        raise ConfigError("this model requires --n (sample-size parameter)")
    return _frac(args.n)


def _build_context(args, table, n):
    if args.base == "gamma" or args.match_skew:
        return engine.ExpansionContext.matched_gamma(table, n, J=args.J, K=args.K)
    return engine.ExpansionContext.raw(table, n)


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def fmt_grouped(v):
    """Grouped-digit table style: .2809 1224, -.0196 0643."""
    sign = "-" if v < 0 else " "
    s = f"{abs(v):.8f}"
    whole, frac = s.split(".")
    grouped = f"{frac[:4]} {frac[4:]}"
    if whole == "0":
        return f"{sign}.{grouped}"
    return f"{sign}{whole}.{grouped}"


def _emit(args, payload, table_text):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(table_text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_quantile(args):
    table = _build_model(args)
    n = _model_n(args, table)
    ctx = _build_context(args, table, n)
    p = args.p
    if ctx.flipped:
        p_eval = 1.0 - p
    else:
        p_eval = p
    exact = None
    if args.model == "lnF" and not args.no_exact:
        exact = oracle.exact_lnF_quantile(args.n1, args.n2, p)
        exact_eval = -exact if ctx.flipped else exact
    else:
        exact_eval = None
    res = engine.quantile_expand(ctx, p_eval, args.order, exact=exact_eval)
    rows = []
    for row in res["rows"]:
        out = {"order": row["order"],
               "term": -row["term"] if ctx.flipped else row["term"],
               "total": -row["total"] if ctx.flipped else row["total"]}
        if "error" in row:
            out["error"] = -row["error"] if ctx.flipped else row["error"]
        rows.append(out)
    payload = {"command": "quantile", "model": cumulants.table_to_config(table),
               "p": p, "order": args.order, "base": ctx.base.kind,
               "n": float(n), "rows": rows,
               "value": rows[-1]["total"],
               "diverges_at": res["diverges_at"]}
    if ctx.tau is not None:
        payload["tau"] = float(ctx.tau)
        payload["m"] = ctx.m
    lines = ["order  term        total" + ("       error" if exact is not None else "")]
    for row in rows:
        line = f"{row['order']:>5}  {fmt_grouped(row['term'])}  {fmt_grouped(row['total'])}"
        if "error" in row:
            line += f"  {fmt_grouped(row['error'])}"
        lines.append(line)
    if exact is not None:
        lines.append(f"exact  {fmt_grouped(exact)}")
    if res["diverges_at"] is not None:
        lines.append(f"warning: series divergence detected at order {res['diverges_at']}"
                     " (term magnitudes stopped decreasing)")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_cdf(args):
    table = _build_model(args)
    n = _model_n(args, table)
    ctx = _build_context(args, table, n)
    x = args.x
    x_eval = -x if ctx.flipped else x
    res = engine.cdf_expand(ctx, x_eval, args.order)
    value = 1.0 - res["value"] if ctx.flipped else res["value"]
    base = 1.0 - res["base"] if ctx.flipped else res["base"]
    payload = {"command": "cdf", "x": x, "order": args.order,
               "base_cdf": base, "terms": res["terms"], "value": value,
               "flipped": ctx.flipped}
    lines = [f"P_n(Y <= {x}) ~ {value:.10f}", f"base cdf: {base:.10f}"]
    for r, t in enumerate(res["terms"], start=1):
        lines.append(f"order {r} correction: {t:+.10f}")
    if args.mc:
        spec = _mc_spec(args)
        est, se = oracle.mc_cdf(spec, float(n), x, args.mc, seed=args.seed)
        payload["mc"] = {"estimate": est, "stderr": se, "N": args.mc,
                         "seed": args.seed,
                         "within_3se": bool(abs(value - est) <= 3 * se)}
        lines.append(f"simulation: {est:.6f} (se {se:.6f}, N={args.mc}, "
                     f"seed={args.seed}); |diff|/se = {abs(value - est) / se:.2f}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _mc_spec(args):
    if args.model == "lnF":
        return {"model": "lnF", "n1": args.n1, "n2": args.n2}
    if args.model == "studentized_mean":
        return {"model": "studentized_mean",
                "population": args.population}
    if args.model == "sample_variance":
        return {"model": "sample_variance", "population": args.population}
    raise ConfigError(f"no sampler available for model {args.model!r}")


def cmd_density(args):
    table = _build_model(args)
    n = _model_n(args, table)
    ctx = _build_context(args, table, n)
    res = engine.density_expand(ctx, args.x, args.i, args.order)
    payload = {"command": "density", "x": args.x, "i": args.i,
               "order": args.order, "terms": res["terms"], "value": res["value"]}
    lines = [f"(-D)^{args.i} density at {args.x}: {res['value']:.10f}"]
    for r, t in enumerate(res["terms"]):
        lines.append(f"order {r} term: {t:+.10f}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_coeffs(args):
    basis = {"H": "H", "a": "a", "normal": "x"}[args.basis]
    payload = engine.export_table_json(args.kind, args.r, basis=basis)
    lines = [f"{args.kind}_{args.r} coefficient table ({args.basis} basis)"]
    for term in payload["terms"]:
        pi = term["partition"]
        if basis == "H":
            lines.append(f"  {args.kind}({pi}) = {term['coeff_H']}")
        elif basis == "a":
            lines.append(f"  {args.kind}({pi}) = {term['coeff_a']}")
        else:
            lines.append(f"  {args.kind}({pi}) = {term.get('coeff_x', '0')}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_terms(args):
    rows = engine.term_count_table(args.rmax)
    payload = {"command": "terms", "rows": rows}
    lines = ["kind r  (J,K)  raw N+M   matched N+M   cum raw   cum matched  saving"]
    for row in rows:
        lines.append("%4s %d  (%d,%d)  %3d+%-3d    %3d+%-3d      %3d+%-3d    %3d+%-3d     %d%%" % (
            row["kind"], row["r"], row["J"], row["K"],
            row["raw"][0], row["raw"][1], row["matched"][0], row["matched"][1],
            row["cum_raw"][0], row["cum_raw"][1],
            row["cum_matched"][0], row["cum_matched"][1], row["saving"]))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_validate(args):
    checks = run_validation(deep=args.deep)
    payload = {"command": "validate", "checks": checks,
               "passed": all(c["pass"] for c in checks)}
    lines = []
    for c in checks:
        lines.append(("PASS " if c["pass"] else "FAIL ") + c["check"])
    lines.append("all checks passed" if payload["passed"] else "VALIDATION FAILED")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload["passed"] else EXIT_VALIDATION


def run_validation(deep=False):
    """The built-in verification suite (a fast subset of the acceptance
    tests; ``deep`` adds the full symbolic reversion)."""
    from . import hbasis
    checks = []

    # reference quantile table
    table = cumulants.model_lnF(24, 60)
    n = Fraction(2 * 24 * 60, 84)
    ctx = engine.ExpansionContext.raw(table, n)
    res = engine.quantile_expand(ctx, 0.95, 6)
    expected = [0.28091224, -0.01960643, 0.00446851, -0.00048004,
                0.00005645, -0.00000154, -0.00000102]
    for row, want in zip(res["rows"], expected):
        checks.append(oracle.check(f"quantile term r={row['order']}",
                                   want, row["term"], 5e-8))
    checks.append(oracle.check("quantile total r=6", 0.26534817,
                               res["value"], 5e-8))
    exact = oracle.exact_lnF_quantile(24, 60, 0.95)
    checks.append(oracle.check("total vs exact", exact, res["value"], 5e-7))

    # symbolic spot values
    H = hbasis.H
    f4 = engine.coefficient_lookup("f", 4)
    from .partitions import Partition
    checks.append(oracle.check(
        "f(4^2)", H(7) - H(1) * H(3) ** 2, f4[Partition.of(4, 4)]))
    g3 = engine.coefficient_lookup("g", 3)
    checks.append(oracle.check(
        "g(34)", H(6) - H(2) * H(4) - H(3) ** 2 + H(1) * H(2) * H(3),
        g3[Partition.of(3, 4)]))

    # recurrence cross-check
    ok = all(engine.crk_sym(r, k) == engine.crk_recurrence(r, k)
             for r in range(1, 6) for k in range(r, 3 * r + 1))
    checks.append({"check": "C_rk partition path == recurrence path",
                   "expected": True, "got": ok, "tolerance": 0, "pass": ok})

    # special function round trips
    worst = 0.0
    for m in (0.5, 3.0, 48.0):
        g = basedist.gamma(m)
        for p in (1e-6, 0.01, 0.3, 0.7, 0.99, 1 - 1e-6):
            worst = max(worst, abs(g.cdf(g.inv_cdf(p)) - p))
    checks.append(oracle.check("gamma cdf/inv round trip", 0.0, worst, 1e-12))
    worst = max(abs(basedist.normal_cdf(basedist.normal_inv_cdf(p)) - p)
                for p in (1e-6, 0.01, 0.5, 0.99, 1 - 1e-6))
    checks.append(oracle.check("normal cdf/inv round trip", 0.0, worst, 1e-12))

    # term-count headlines
    checks.append(oracle.check(
        "term count g cumulative raw", (48, 29),
        engine.term_count_cumulative("g", 6, schedule={r: (0, 1) for r in range(7)},
                                     matched=False, base="normal")))
    checks.append(oracle.check(
        "term count g cumulative matched", (11, 7),
        engine.term_count_cumulative("g", 6, matched=True, base="general",
                                     drop_multi3=True)))

    if deep:
        fs, gs = oracle.reversion_fg(6)
        ok = all(fs[r - 1] == engine.fg_formal("f", r)
                 and gs[r - 1] == engine.fg_formal("g", r) for r in range(1, 7))
        checks.append({"check": "reversion oracle == ladder tables (r<=6)",
                       "expected": True, "got": ok, "tolerance": 0, "pass": ok})
    return checks


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_model_args(sp):
    sp.add_argument("--model", choices=["lnF", "sample_variance",
                                        "studentized_mean", "gamma"])
    sp.add_argument("--model-json", help="inline JSON or a file path")
    sp.add_argument("--n1", type=int, help="numerator degrees of freedom (lnF)")
    sp.add_argument("--n2", type=int, help="denominator degrees of freedom (lnF)")
    sp.add_argument("--nu3", help="population skewness (studentized_mean)")
    sp.add_argument("--nu4", help="population kurtosis moment")
    sp.add_argument("--nu5", help="population fifth standardized moment")
    sp.add_argument("--mu", nargs="*", metavar="R=VALUE",
                    help="central moments (sample_variance), e.g. 2=6/5")
    sp.add_argument("--n", help="sample-size parameter")
    sp.add_argument("--base", choices=["normal", "gamma"], default="normal")
    sp.add_argument("--match-skew", action="store_true",
                    help="skew-matched gamma pipeline (implied by --base gamma)")
    sp.add_argument("--J", type=int, default=1, help="mean-series truncation")
    sp.add_argument("--K", type=int, default=1, help="variance-series truncation")
    sp.add_argument("--order", type=int, default=4, help="truncation order R")
    sp.add_argument("--format", choices=["table", "json"], default="table")
    sp.add_argument("--seed", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cfx",
        description="Series expansions for distributions and quantiles of "
                    "standardized estimates about normal and gamma bases.")
    sub = ap.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quantile", help="successive quantile terms and totals")
    _add_model_args(q)
    q.add_argument("--p", type=float, required=True)
    q.add_argument("--no-exact", action="store_true",
                   help="suppress the exact reference column")
    q.set_defaults(func=cmd_quantile)

    c = sub.add_parser("cdf", help="distribution expansion at a point")
    _add_model_args(c)
    c.add_argument("--x", type=float, required=True)
    c.add_argument("--mc", type=int, default=0, metavar="N",
                   help="cross-check against an N-replication simulation")
    c.add_argument("--population", default="standardized_exponential",
                   choices=["standardized_exponential", "normal"],
                   help="sampling population for the simulation cross-check")
    c.set_defaults(func=cmd_cdf)

    d = sub.add_parser("density", help="density / derivative expansion")
    _add_model_args(d)
    d.add_argument("--x", type=float, required=True)
    d.add_argument("--i", type=int, default=0, help="derivative order")
    d.set_defaults(func=cmd_density)

    k = sub.add_parser("coeffs", help="symbolic coefficient tables")
    k.add_argument("--kind", choices=["h", "f", "g"], required=True)
    k.add_argument("--r", type=int, required=True)
    k.add_argument("--basis", choices=["H", "a", "normal"], default="H")
    k.add_argument("--format", choices=["table", "json"], default="table")
    k.set_defaults(func=cmd_coeffs)

    t = sub.add_parser("terms", help="term-count comparison matrix")
    t.add_argument("--rmax", type=int, default=6)
    t.add_argument("--format", choices=["table", "json"], default="table")
    t.set_defaults(func=cmd_terms)

    v = sub.add_parser("validate", help="run the built-in verification suite (the complete acceptance suite lives in tests/test_acceptance.py)")
    v.add_argument("--deep", action="store_true",
                   help="include the full symbolic reversion cross-check")
    v.add_argument("--format", choices=["table", "json"], default="table")
    v.set_defaults(func=cmd_validate)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except cumulants.ModelOrderError as e:
        print(f"model-order error: {e}", file=sys.stderr)
        return EXIT_MODEL_ORDER
    except (cumulants.ModelError, engine.OrderError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (basedist.DomainError, basedist.NumericError) as e:
        print(f"numeric error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
