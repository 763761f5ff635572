"""``wdstab`` command line: ingest, fit, pca, search, synth.

Exit codes: 0 success, 1 error, 2 quality warning (ill-conditioned design or
two-PC share below 0.5). Errors print one ``error[CODE]: message`` line on
stderr.
"""
import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, diagnostics, panel as panel_mod, pca, report, search, svg, synth
from .errors import UnknownIndicator, WdstabError
from .ols import Conditioning, build_design, ols_fit
from .panel import CaseTable, complete_cases
from .transforms import boxcox_mle, standardize

EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2


class UsageError(WdstabError):
    code = "E_USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _names(text):
    return [t.strip() for t in text.split(",") if t.strip()] if text else None


def _forced(values):
    out = []
    for v in values or ():
        out.extend(_names(v))
    return out


def _read_input(path):
    data = Path(path).read_bytes()
    text = data.decode("utf-8")
    if path.endswith(".json"):
        doc = json.loads(text)
        return panel_mod.IndicatorPanel.from_json_dict(doc.get("panel", doc)), data
    return panel_mod.parse_panel(text), data


def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path, body, manifest):
    path.write_text(report.canonical_json(report.with_manifest(body, manifest)), encoding="utf-8")


def _echo(args, skip=("func", "out", "output", "sidecar")):
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _use_color(mode):
    if os.environ.get("WDSTAB_NO_COLOR"):
        return False
    if mode == "always":
        return True
    if mode == "never":
        return False
    return sys.stdout.isatty()


def _boxcox_table(table, columns):
    """Replace ``columns`` by their ML Box-Cox transforms; return (table, lambdas)."""
    data = table.data.copy()
    lambdas = {}
    for name in columns:
        j = table.names.index(name)
        res = boxcox_mle(data[:, j])
        data[:, j] = res.transformed
        lambdas[name] = res.lam
    return CaseTable(table.keys, table.names, data), lambdas


def _fmt(x, width=11):
    if x is None or (isinstance(x, float) and not np.isfinite(x)):
        return f"{'nan' if x is None or np.isnan(x) else ('inf' if x > 0 else '-inf'):>{width}}"
    ax = abs(x)
    if ax != 0 and (ax < 1e-3 or ax >= 1e5):
        return f"{x:>{width}.3e}"
    return f"{x:>{width}.4f}"


def format_table(rep, color=False):
    """Coefficient table followed by the summary statistics block."""
    lo, hi = rep.alpha / 2, 1 - rep.alpha / 2
    name_w = max(12, *(len(r.name) for r in rep.rows))
    head = (
        f"{'':<{name_w}}{'coef':>11}{'std err':>11}{'t':>11}{'P>|t|':>11}"
        f"{f'[{lo:g}':>11}{f'{hi:g}]':>11}"
    )
    lines = [head, "-" * len(head)]
    for r in rep.rows:
        line = (
            f"{r.name:<{name_w}}{_fmt(r.coef)}{_fmt(r.std_err)}{_fmt(r.t_stat)}"
            f"{_fmt(r.p_value)}{_fmt(r.ci_low)}{_fmt(r.ci_high)}"
        )
        if color and r.p_value == r.p_value and r.p_value < rep.alpha:
            line = f"\x1b[32m{line}\x1b[0m"
        lines.append(line)
    lines.append("-" * len(head))
    stats = [
        ("R-squared:", rep.r2),
        ("Adj. R-squared:", rep.adj_r2),
        ("Omnibus:", rep.omnibus),
        ("Prob(Omnibus):", rep.prob_omnibus),
        ("Skew:", rep.skew),
        ("Kurtosis:", rep.kurtosis),
        ("Durbin-Watson:", rep.durbin_watson),
        ("Jarque-Bera (JB):", rep.jarque_bera),
        ("Prob(JB):", rep.prob_jb),
    ]
    for label, v in stats:
        lines.append(f"{label:<20}{'n/a' if v is None else f'{v:.3f}':>12}")
    cond = f"{rep.cond_number:.3g}"
    if color and rep.conditioning != Conditioning.WELL.value:
        cond = f"\x1b[33m{cond}\x1b[0m"
    lines.append(f"{'Cond. No.':<20}{cond:>12}  ({rep.conditioning})")
    lines.append(f"{'No. Observations:':<20}{rep.n:>12}")
    return "\n".join(lines)


# -- subcommands ------------------------------------------------------------
def cmd_ingest(args):
    panel, raw = _read_input(args.input)
    out = _out_dir(args)
    manifest = report.RunManifest.create("ingest", _echo(args), raw)
    _write_json(out / "panel.json", {"panel": panel.to_json_dict()}, manifest)
    print(
        f"countries={len(panel.countries)} years={panel.years.start}-{panel.years.stop - 1} "
        f"indicators={len(panel.indicators)} cells={len(panel.values)} missing={panel.n_missing}"
    )
    if args.histograms:
        hists, skipped = [], []
        for c in panel.countries:
            for ind in panel.indicators:
                series = [v for v in panel_mod.extract_series(panel, c, ind) if v is not None]
                try:
                    h = panel_mod.bin_series(series, args.bins)
                except WdstabError as exc:
                    skipped.append({"country": c, "indicator": ind, "reason": exc.code})
                    continue
                hists.append({"country": c, "indicator": ind, **h.to_json_dict()})
                if args.svg:
                    safe = "".join(ch if ch.isalnum() else "_" for ch in ind)
                    (out / f"hist_{c}_{safe}.svg").write_text(svg.histogram_svg(h, f"{c} {ind}"))
        _write_json(out / "histograms.json", {"histograms": hists, "skipped": skipped}, manifest)
    return EXIT_OK


def _fit_inputs(args, panel):
    indicators = _names(args.indicators) or [i for i in panel.indicators if i != args.response]
    if not indicators:
        raise UnknownIndicator("no indicators to regress on")
    return indicators


def cmd_fit(args):
    panel, raw = _read_input(args.input)
    indicators = _fit_inputs(args, panel)
    table, dropped = complete_cases(panel, indicators, args.response, _names(args.countries))
    lambdas = None
    if args.boxcox:
        table, lambdas = _boxcox_table(table, indicators + [args.response])
    fit = ols_fit(build_design(table, indicators, args.response))
    rep = diagnostics.summarize(fit, args.alpha)
    body = diagnostics.report_to_dict(rep)
    body.update(
        response=args.response,
        indicators=indicators,
        rows_dropped=dropped,
        boxcox_lambdas=lambdas,
    )
    if rep.skew is not None:
        verdict = diagnostics.classify_normality(rep.skew, rep.kurtosis)
        body["normality"] = {
            "skew_ok": verdict.skew_ok,
            "kurtosis_class": verdict.kurtosis_class.value,
            "passes": verdict.passes,
        }
    else:
        body["normality"] = None
    out = _out_dir(args)
    _write_json(out / "fit.json", body, report.RunManifest.create("fit", _echo(args), raw))
    print(format_table(rep, _use_color(args.color)))
    if rep.conditioning == Conditioning.ILL.value:
        _warn(f"design is ill-conditioned (cond. no. {rep.cond_number:.3g} > 1e6)")
        return EXIT_WARN
    return EXIT_OK


def cmd_pca(args):
    panel, raw = _read_input(args.input)
    indicators = _names(args.indicators) or [i for i in panel.indicators if i != args.response]
    if len(indicators) < 2:
        raise UnknownIndicator("PCA needs at least two indicators")
    table, dropped = complete_cases(panel, indicators, args.response, _names(args.countries))
    lambdas = None
    if args.boxcox:
        table, lambdas = _boxcox_table(table, indicators)
    std = standardize(table.columns(indicators))
    model = pca.pca_fit(std, args.components)
    sc = pca.scree(model)
    color = table.column(args.response) if args.response else None
    proj = pca.pca_project(model, std, color, table.countries)

    out = _out_dir(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["component", "explained_variance", "ratio", "relative_to_pc1", "cumulative"])
    cum = np.cumsum(sc.ratios)
    for i in range(model.c):
        w.writerow([f"PC{i + 1}", repr(float(model.explained_variance[i])), repr(float(sc.ratios[i])),
                    repr(float(sc.relative_to_pc1[i])), repr(float(cum[i]))])
    (out / "scree.csv").write_text(buf.getvalue())

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["country", "year", "color"] + [f"PC{i + 1}" for i in range(model.c)])
    for (c, y), col, row in zip(table.keys, proj.color_values, proj.scores):
        w.writerow([c, y, "" if np.isnan(col) else repr(float(col))] + [repr(float(v)) for v in row])
    (out / "projection.csv").write_text(buf.getvalue())

    body = {
        "indicators": indicators,
        "response": args.response,
        "n": int(std.shape[0]),
        "rows_dropped": dropped,
        "boxcox_lambdas": lambdas,
        "n_components": model.c,
        "explained_variance": model.explained_variance.tolist(),
        "explained_variance_ratio": model.explained_variance_ratio.tolist(),
        "relative_to_pc1": sc.relative_to_pc1.tolist(),
        "total_variance": model.total_variance,
        "two_pc_share": sc.two_pc_share,
        "robust": sc.robust,
        "components": model.components.tolist(),
        "pc1_loadings": [{"name": n, "score": s} for n, s in pca.loading_scores(model, 0, indicators)],
    }
    _write_json(out / "pca.json", body, report.RunManifest.create("pca", _echo(args), raw))
    if args.svg:
        (out / "scree.svg").write_text(svg.scree_svg(sc))
        (out / "scatter.svg").write_text(svg.scatter_svg(proj))

    print(f"two-PC share {sc.two_pc_share:.4f}")
    for i, r in enumerate(sc.ratios, start=1):
        print(f"PC{i:<3}{r:8.4f}")
    if not sc.robust:
        _warn(f"robustness threshold not met (two-PC share {sc.two_pc_share:.3f} < 0.5)")
        return EXIT_WARN
    return EXIT_OK


def cmd_search(args):
    panel, raw = _read_input(args.input)
    config = search.SearchConfig(
        seed=args.seed,
        min_size=args.min_size,
        max_size=args.max_size,
        samples=args.samples,
        forced_indicators=tuple(_forced(args.force)),
        vif_threshold=args.vif_threshold,
        score=search.Score.R2 if args.score == "r2" else search.Score.ADJUSTED_R2,
    )
    pool = _names(args.indicators)
    run = search.search_pipeline(panel, args.response, config, pool, _names(args.countries), args.workers)
    out = _out_dir(args)
    _write_json(out / "search.json", run.to_dict(), report.RunManifest.create("search", _echo(args), raw))
    for name, v in run.vif_dropped:
        print(f"vif-dropped {name} (VIF {v:.3g})")
    print(f"pool={len(run.pool)} subsets={len(run.results)} of {run.total_subsets}")
    for i, r in enumerate(run.results[: args.top], start=1):
        print(f"{i:>4} {r.score:>10.6f}  {r.cond_classification or r.error:<16} {','.join(r.indicators)}")
    if run.results and run.results[0].cond_classification == Conditioning.ILL.value:
        _warn("top-ranked subset is ill-conditioned")
        return EXIT_WARN
    return EXIT_OK


def cmd_synth(args):
    beta = tuple(float(b) for b in _names(args.beta)) if args.beta else None
    spec = synth.SynthSpec(
        n=args.n,
        p=args.p,
        seed=args.seed,
        collinearity_eps=args.eps,
        hetero_gamma=args.gamma,
        noise_sd=args.noise_sd,
        skew_lambda=args.skew_lambda,
        true_beta=beta,
    )
    text, true_beta = synth.synth_csv(spec)
    spec_doc = {
        "n": spec.n,
        "p": spec.p,
        "seed": spec.seed,
        "collinearity_eps": spec.collinearity_eps,
        "hetero_gamma": spec.hetero_gamma,
        "noise_sd": spec.noise_sd,
        "skew_lambda": spec.skew_lambda,
    }
    truth = {
        "spec": spec_doc,
        "true_beta": true_beta.tolist(),
        "feature_names": list(spec.feature_names),
        "response": synth.RESPONSE,
        "country": synth.COUNTRY,
    }
    csv_path, sidecar = args.output, args.sidecar
    if args.out:
        out = _out_dir(args)
        csv_path = csv_path if csv_path not in (None, "-") else str(out / "synth.csv")
        sidecar = sidecar or str(out / "synth.truth.json")
    if csv_path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(csv_path).write_text(text)
        sidecar = sidecar or csv_path + ".truth.json"
    if sidecar:
        manifest = report.RunManifest.create("synth", _echo(args), report.canonical_json(spec_doc))
        _write_json(Path(sidecar), truth, manifest)
    return EXIT_OK


# -- parser -----------------------------------------------------------------
def build_parser():
    p = _Parser(prog="wdstab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"wdstab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--input", required=True, help="long CSV (or panel JSON) input")
        sp.add_argument("--out", default=".", help="output directory")
        return sp

    sp = data_cmd("ingest", "parse a panel; optionally bin every series")
    sp.add_argument("--histograms", action="store_true")
    sp.add_argument("--bins", type=int, default=None, help="bin count (default: Sturges)")
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_ingest)

    def model_flags(sp):
        sp.add_argument("--response", required=True)
        sp.add_argument("--indicators", help="comma-separated; default: all but the response")
        sp.add_argument("--countries", help="comma-separated country filter")
        sp.add_argument("--boxcox", action="store_true", help="ML Box-Cox each column first")

    sp = data_cmd("fit", "OLS fit with diagnostics")
    model_flags(sp)
    sp.add_argument("--alpha", type=float, default=0.05)
    sp.add_argument("--color", choices=("auto", "always", "never"), default="auto")
    sp.set_defaults(func=cmd_fit)

    sp = data_cmd("pca", "PCA scree, loadings and projection")
    sp.add_argument("--response", help="colour points by this indicator")
    sp.add_argument("--indicators")
    sp.add_argument("--countries")
    sp.add_argument("--boxcox", action="store_true")
    sp.add_argument("--components", type=int, default=None)
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_pca)

    sp = data_cmd("search", "stochastic indicator-subset search")
    model_flags(sp)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--force", action="append", help="indicator every subset must contain")
    sp.add_argument("--min-size", type=int, default=4)
    sp.add_argument("--max-size", type=int, default=7)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--vif-threshold", type=float, default=5.0)
    sp.add_argument("--score", choices=("adj_r2", "r2"), default="adj_r2")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--top", type=int, default=10, help="rows to print")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("synth", help="emit synthetic panel CSV")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--eps", type=float, default=None, help="collinearity noise scale")
    sp.add_argument("--gamma", type=float, default=0.0, help="heteroscedasticity exponent")
    sp.add_argument("--noise-sd", type=float, default=1.0)
    sp.add_argument("--skew-lambda", type=float, default=0.0)
    sp.add_argument("--beta", help="comma-separated intercept and slopes")
    sp.add_argument("--output", default="-", help="CSV path, '-' for stdout")
    sp.add_argument("--sidecar", help="true-beta JSON path")
    sp.add_argument("--out", default=None, help="directory for synth.csv and synth.truth.json")
    sp.set_defaults(func=cmd_synth)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except WdstabError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        print(f"error[E_IO]: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
