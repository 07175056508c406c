"""Command-line front end.

Subcommands::

    mean            weighted means on a grid of n
    limit           finite-n mean, accelerated estimate and quadrature oracle side by side
    oracle          b * p * int_0^1 x^(p-1) f(x) dx by adaptive quadrature
    multi nested    nested multi-index means
    multi tail      tail multi-index means
    counterexample  reproduce a named case (blocks, riemann-failure, lemma-failure,
                    noninvariant-tail, family:<weight>:<sequence>)
    hypotheses      probe the integrability conditions on f

Grids are ``A:B:xR`` (geometric from A to B with ratio R), a comma list of
integers, or ``auto``.  Exit status: 0 success, 2 completed with hypothesis
warnings, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import analysis, cases
from .core import ONE, MeanSeries, geometric_grid, mean_series, p_mean, product_sequence
from .errors import CesaroError, ParameterError
from .expr import constant_from_source, evaluate, parse_expr, sequence_from_source, weight_from_source
from .multiindex import MultiIndexSequence, box_mean, nested_mean, predicted_nested_limit, predicted_tail_limit, tail_mean
from .oracle import check_hypotheses, weighted_limit

AUTO_GRIDS = {
    "mean": "16:1048576:x2",
    "limit": "64:1048576:x2",
    "multi": "64:4096:x2",
    "riemann-failure": "2:1048576:x2",
    "lemma-failure": "64:2097152:x2",
    "noninvariant-tail": "250:4000:x2",
    "family": "64:1048576:x2",
}
MONOTONE = {"inc": "increasing", "dec": "decreasing", "none": "none"}


class Table:
    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, **row):
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append(row)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _complex_text(z) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render(table: Table, fmt: str, spec: dict) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_fmt(row.get(c)) for c in table.columns])
        return buf.getvalue()
    rows = [{c: _json_value(row.get(c)) for c in table.columns} for row in table.rows]
    return json.dumps({"spec": spec, "rows": rows}, indent=2) + "\n"


def parse_grid(text: str) -> list[int]:
    """``A:B:xR`` geometric grid or a comma-separated list of integers."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3 or not parts[2].startswith("x"):
            raise ParameterError(f"grid {text!r} is not of the form A:B:xR")
        try:
            lo, hi, ratio = float(parts[0]), float(parts[1]), float(parts[2][1:])
        except ValueError:
            raise ParameterError(f"grid {text!r} has non-numeric fields") from None
        if lo != int(lo) or hi != int(hi):
            raise ParameterError(f"grid bounds must be integers: {text!r}")
        return geometric_grid(int(lo), int(hi), ratio)
    try:
        grid = [int(float(tok)) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ParameterError(f"cannot read grid {text!r}") from None
    if not grid or any(n < 1 for n in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError(f"grid must be a strictly ascending list of positive integers: {text!r}")
    return grid


def _grid(args, key):
    return parse_grid(AUTO_GRIDS[key] if args.grid == "auto" else args.grid)


def split_top_level(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


class Run:
    """Collects warnings; exit status 2 when any were raised."""

    def __init__(self, err):
        self.err = err
        self.warned = False

    def warn(self, message):
        self.warned = True
        print(f"warning: {message}", file=self.err)


def _re_im(z):
    z = complex(z)
    return float(z.real), float(z.imag)


# ---------------------------------------------------------------------------
# subcommands


def cmd_mean(args, run):
    b = sequence_from_source(args.b)
    f = weight_from_source(args.f, MONOTONE[args.f_monotone])
    series = mean_series(b, f, args.p, _grid(args, "mean"))
    table = Table(["n", "value_re", "value_im", "rounding_bound"])
    for n, v, r in zip(series.grid, series.values, series.rounding_bound):
        re, im = _re_im(v)
        table.add(n=n, value_re=re, value_im=im, rounding_bound=float(r))
    return table


def _b_limit(args, b, grid, run):
    if args.b_limit is not None:
        return constant_from_source(args.b_limit)
    series = mean_series(b, ONE, args.p, grid)
    est = analysis.estimate_limit(series, args.tol)
    if est.verdict != "converges":
        run.warn(f"the p-means of b do not settle on the grid (verdict {est.verdict}); pass --b-limit")
        return None
    return est.value


def _monotone_weight(args, run):
    f = weight_from_source(args.f, MONOTONE[args.f_monotone])
    if f.monotonicity == "none":
        run.warn("f has no declared monotonicity (--f-monotone); the oracle limit is not guaranteed")
    elif not f.check_monotone():
        run.warn(f"f is not {f.monotonicity} on the sampled grid")
    return f


def cmd_limit(args, run):
    b = sequence_from_source(args.b)
    f = _monotone_weight(args, run)
    grid = _grid(args, "limit")
    series = mean_series(b, f, args.p, grid)
    est = analysis.estimate_limit(series, args.tol)
    mcza = analysis.diagnose_mcza(b, args.p, grid)
    if not mcza.bounded:
        run.warn(f"the p-means of |b| grow like n^{mcza.growth_exponent:.3g}; the boundedness hypothesis fails")

    table = Table(["quantity", "value_re", "value_im", "detail"])
    values = {"mean": series.values[-1]}
    table.add(quantity="mean", value_re=_re_im(series.values[-1])[0], value_im=_re_im(series.values[-1])[1],
              detail=f"n={series.grid[-1]}")
    if est.value is not None:
        values["estimate"] = est.value
        re, im = _re_im(est.value)
        table.add(quantity="estimate", value_re=re, value_im=im,
                  detail=f"verdict=converges error_estimate={_fmt(float(est.error_estimate))}")
    else:
        table.add(quantity="estimate", detail=f"verdict={est.verdict}")
    b_lim = _b_limit(args, b, grid, run)
    if b_lim is not None:
        res = weighted_limit(b_lim, f, args.p, args.oracle_tol)
        values["oracle"] = res.value
        re, im = _re_im(res.value)
        table.add(quantity="oracle", value_re=re, value_im=im,
                  detail=f"b_limit={_complex_text(b_lim)} "
                         f"abs_error_estimate={_fmt(res.abs_error_estimate)}")
    names = list(values)
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            table.add(quantity=f"abs_diff({x},{y})", value_re=abs(values[x] - values[y]), value_im=0.0)
    return table


def cmd_oracle(args, run):
    f = _monotone_weight(args, run)
    b = constant_from_source(args.b_limit or "1")
    res = weighted_limit(b, f, args.p, args.tol)
    table = Table(["value_re", "value_im", "abs_error_estimate", "subdivisions"])
    re, im = _re_im(res.value)
    table.add(value_re=re, value_im=im, abs_error_estimate=res.abs_error_estimate, subdivisions=res.subdivisions)
    return table


def _multi_sequence(args, run):
    if args.a is not None:
        if args.a_factors is not None:
            raise ParameterError("give either --a or --a-factors, not both")
        if args.m is None:
            raise ParameterError("--a needs --m")
        names = tuple(f"k{i}" for i in range(1, args.m + 1))
        tree = parse_expr(args.a, variables=names)
        q = args.q if args.q is not None else float(args.m)

        def func(*ks):
            return evaluate(tree, dict(zip(names, ks)))

        if args.a_structure == "translation-invariant":
            a = MultiIndexSequence.translation_invariant(func, args.m, q, label=args.a)
            if not a.spot_check():
                raise ParameterError(f"{args.a!r} is not translation invariant on sampled tuples")
            return a
        if args.a_structure == "separable":
            raise ParameterError("separable sequences are given with --a-factors")
        return MultiIndexSequence.opaque(func, args.m, q, label=args.a)

    if args.a_factors is None:
        raise ParameterError("give --a-factors or --a")
    sources = split_top_level(args.a_factors)
    if args.m is not None:
        if len(sources) == 1:
            sources = sources * args.m
        elif len(sources) != args.m:
            raise ParameterError(f"--m {args.m} does not match {len(sources)} factors")
    factors = [sequence_from_source(s) for s in sources]
    q = args.q if args.q is not None else float(len(factors))
    label = "*".join(f"({s})" for s in sources)
    a = MultiIndexSequence.separable(factors, q, label=label)
    if args.a_structure == "translation-invariant":
        a = MultiIndexSequence.translation_invariant(a.evaluate, a.m, q, label=label)
        if not a.spot_check():
            raise ParameterError("the factor product is not translation invariant on sampled tuples")
    elif args.a_structure == "opaque":
        a = MultiIndexSequence.opaque(a.evaluate, a.m, q, label=label)
    return a


def cmd_multi(args, run):
    b = sequence_from_source(args.b)
    a = _multi_sequence(args, run)
    grid = _grid(args, "multi")
    mcza = analysis.diagnose_mcza(b, args.p, grid)
    if not mcza.bounded:
        run.warn("the p-means of |b| look unbounded; the limit formula may not apply")
    fn = nested_mean if args.kind == "nested" else tail_mean
    predicted = None
    if args.a_limit is not None and args.b_limit is not None:
        a_lim, b_lim = constant_from_source(args.a_limit), constant_from_source(args.b_limit)
        if args.kind == "nested":
            predicted = predicted_nested_limit(a_lim, b_lim, args.p, a.q)
        else:
            predicted = predicted_tail_limit(a_lim, b_lim, args.p, a.q)
            if a.structure != "translation_invariant":
                run.warn("the tail prediction assumes translation invariance, which was not declared")
    table = Table(["n", "value_re", "value_im", "predicted_re", "predicted_im"])
    for n in grid:
        re, im = _re_im(fn(b, a, args.p, n))
        row = dict(n=n, value_re=re, value_im=im)
        if predicted is not None:
            row["predicted_re"], row["predicted_im"] = _re_im(predicted)
        table.add(**row)
    return table


def _counter_blocks(args, run):
    b = cases.blocks_sequence()
    if args.grid == "auto":
        grid = cases.interleaved_block_grid(10)
    else:
        grid = parse_grid(args.grid)
    series = mean_series(b, ONE, 1, grid)
    table = Table(["n", "label", "value_re", "value_im", "target"])
    m_ends = {cases.m_index(j): j for j in range(1, 40)}
    h_ends = {cases.h_index(j): j for j in range(1, 40)}
    for n, v in zip(series.grid, series.values):
        exact = cases.blocks_mean_exact(n)
        label = f"m_{m_ends[n]}" if n in m_ends else f"h_{h_ends[n]}" if n in h_ends else "n"
        re, im = _re_im(v)
        table.add(n=n, label=label, value_re=re, value_im=im, target=float(exact))
    for n in (grid[0], grid[-1]):
        table.add(n=n, label="abs_mean", value_re=p_mean(b.abs(), 1, n).real, value_im=0.0, target=1.0)
    if len(grid) >= analysis.MIN_POINTS:
        est = analysis.estimate_limit(series, args.tol)
        if est.verdict == "oscillates":
            even, odd = est.evidence["subsequence_limits"]
            for name, z in (("even", even), ("odd", odd)):
                re, im = _re_im(z)
                table.add(label=f"oscillates:{name}_subsequence_limit", value_re=re, value_im=im)
        else:
            table.add(label=f"verdict={est.verdict}")
    return table


def _counter_riemann(args, run):
    grid = _grid(args, "riemann-failure")
    table = Table(["n", "label", "value_re", "value_im", "target"])
    values = []
    for n in grid:
        r = cases.riemann_failure_sums(n)
        values.append(r)
        table.add(n=n, label="R_n", value_re=r, value_im=0.0, target=str(Fraction(cases.riemann_failure_sum_exact(n), n)))
    if len(grid) >= analysis.MIN_POINTS:
        est = analysis.estimate_limit(MeanSeries(tuple(grid), tuple(values), (0.0,) * len(grid)), args.tol)
        table.add(label=f"verdict={est.verdict}", value_re=est.evidence.get("growth_exponent"))
    return table


def _counter_lemma(args, run):
    a, b = cases.lemma_failure_pair()
    ab = product_sequence(a, b)
    grid = _grid(args, "lemma-failure")
    table = Table(["n", "label", "value_re", "value_im", "target"])
    for n in grid:
        for label, seq, target in (("p_mean(b)", b, 0.5), ("p_mean(ab)", ab, 1.0), ("p_mean(|b|)", b.abs(), None)):
            re, im = _re_im(p_mean(seq, 1, n))
            table.add(n=n, label=label, value_re=re, value_im=im, target=target)
    mcza = analysis.diagnose_mcza(b, 1, grid)
    table.add(label=f"mcza={mcza.verdict}", value_re=mcza.growth_exponent)
    return table


def _counter_noninvariant(args, run):
    case = cases.noninvariant_tail_case()
    a, b = case.objects["a"], case.objects["b"]
    grid = _grid(args, "noninvariant-tail")
    table = Table(["n", "label", "value_re", "value_im", "target"])
    for n in grid:
        re, im = _re_im(tail_mean(b, a, 1, n))
        table.add(n=n, label="tail_mean", value_re=re, value_im=im, target=8 / 45)
    for n in grid:
        re, im = _re_im(box_mean(a, n))
        table.add(n=n, label="box_mean", value_re=re, value_im=im, target=2 / 3)
    table.add(label="predicted_tail_limit", value_re=predicted_tail_limit(2 / 3, 1, 1, 2).real, value_im=0.0)
    return table


def _counter_family(args, run):
    case = cases.get_case(args.name, p=args.p)
    b, f = case.objects["b"], case.objects["f"]
    grid = _grid(args, "family")
    series = mean_series(b, f, case.params["p"], grid)
    table = Table(["n", "label", "value_re", "value_im", "target"])
    limit = complex(case.params["limit"])
    for n, v in zip(series.grid, series.values):
        re, im = _re_im(v)
        table.add(n=n, label="mean", value_re=re, value_im=im, target=_complex_text(limit))
    res = weighted_limit(case.params["b_limit"], f, case.params["p"], 1e-10)
    re, im = _re_im(res.value)
    table.add(label="oracle", value_re=re, value_im=im, target=_complex_text(limit))
    return table


def cmd_counterexample(args, run):
    handlers = {
        "blocks": _counter_blocks,
        "riemann-failure": _counter_riemann,
        "lemma-failure": _counter_lemma,
        "noninvariant-tail": _counter_noninvariant,
    }
    if args.name in handlers:
        return handlers[args.name](args, run)
    if args.name.startswith("family:"):
        return _counter_family(args, run)
    raise ParameterError(f"unknown case {args.name!r}; known: {', '.join(cases.case_names())}")


def cmd_hypotheses(args, run):
    f = weight_from_source(args.f, MONOTONE[args.f_monotone])
    if f.monotonicity == "none":
        raise ParameterError("hypothesis checks need --f-monotone inc|dec")
    report = check_hypotheses(f, args.p)
    table = Table(["hypothesis", "status", "decay_ratio"])
    table.add(hypothesis="x^(p-1) f in L1", status=report.integrability.status,
              decay_ratio=report.integrability.decay_ratio)
    table.add(hypothesis="x^p in L1(|df|)", status=report.stieltjes.status, decay_ratio=report.stieltjes.decay_ratio)
    if not report.ok:
        run.warn("at least one integrability hypothesis did not pass")
    return table


# ---------------------------------------------------------------------------


def _positive(text):
    value = float(text)
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"expected a finite positive number, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cesaro", description="High-order weighted Cesaro means.",
                                     epilog="auto grids: " + ", ".join(f"{k}={v}" for k, v in AUTO_GRIDS.items())
                                     + "; blocks uses the interleaved ends m_j, h_j for j=1..10")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=True, b=True, f=True):
        if b:
            p.add_argument("--b", default="1", help="sequence b(k), e.g. '1+(-1)^k/sqrt(k)'")
        if f:
            p.add_argument("--f", default="1", help="weight f(x) on (0,1], e.g. '(1-x)^2'")
            p.add_argument("--f-monotone", choices=sorted(MONOTONE), default="none")
        p.add_argument("--p", type=_positive, default=1.0)
        if grid:
            p.add_argument("--grid", default="auto", help="A:B:xR, comma list, or auto")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_mean_cmd = sub.add_parser("mean", help="weighted means on a grid")
    common(p_mean_cmd)

    p_limit = sub.add_parser("limit", help="mean, accelerated estimate and oracle side by side")
    common(p_limit)
    p_limit.add_argument("--tol", type=_positive, default=1e-4, help="agreement tolerance for the estimate")
    p_limit.add_argument("--oracle-tol", type=_positive, default=1e-10)
    p_limit.add_argument("--b-limit", help="p-mean limit of b; estimated from the grid when omitted")

    p_oracle = sub.add_parser("oracle", help="quadrature limit")
    common(p_oracle, grid=False, b=False)
    p_oracle.add_argument("--b-limit", default="1")
    p_oracle.add_argument("--tol", type=_positive, default=1e-10)

    p_multi = sub.add_parser("multi", help="multi-index nested or tail means")
    p_multi.add_argument("kind", choices=("nested", "tail"))
    common(p_multi, f=False)
    p_multi.add_argument("--a-factors", help="comma-separated factor expressions in k (separable a)")
    p_multi.add_argument("--a", help="expression in k1..km for a non-separable a (needs --m)")
    p_multi.add_argument("--a-structure", choices=("separable", "translation-invariant", "opaque"),
                         default="separable")
    p_multi.add_argument("--m", type=int)
    p_multi.add_argument("--q", type=_positive)
    p_multi.add_argument("--a-limit")
    p_multi.add_argument("--b-limit")

    p_counter = sub.add_parser("counterexample", help="reproduce a named case")
    p_counter.add_argument("name")
    common(p_counter, b=False, f=False)
    p_counter.add_argument("--tol", type=_positive, default=1e-6)

    p_hyp = sub.add_parser("hypotheses", help="probe the integrability conditions")
    common(p_hyp, grid=False, b=False)
    return parser


COMMANDS = {
    "mean": cmd_mean,
    "limit": cmd_limit,
    "oracle": cmd_oracle,
    "multi": cmd_multi,
    "counterexample": cmd_counterexample,
    "hypotheses": cmd_hypotheses,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    run = Run(err)
    try:
        table = COMMANDS[args.command](args, run)
    except (CesaroError, KeyError, ValueError, ArithmeticError) as exc:
        print(f"error: {args.command}: {exc}", file=err)
        return 1
    spec = {k: v for k, v in sorted(vars(args).items())}
    out.write(render(table, args.format, spec))
    return 2 if run.warned else 0


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
