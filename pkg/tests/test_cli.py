import json
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from wdstab import report
from wdstab.cli import main
from wdstab.synth import SynthSpec, synth_csv

GOLDEN = Path(__file__).parent / "golden"


def write_synth(tmp_path, name="data.csv", **kw):
    text, beta = synth_csv(SynthSpec(**kw))
    path = tmp_path / name
    path.write_text(text)
    return str(path), beta


def load(path, schema):
    doc = json.loads(Path(path).read_text())
    jsonschema.validate(doc, report.load_schema(schema))
    return doc


def strip_volatile(doc):
    doc = json.loads(json.dumps(doc))
    doc["manifest"].pop("timestamp")
    doc["manifest"].pop("tool_version")
    # a hash over floats; the floats themselves are compared at tolerance
    doc["manifest"].pop("result_digest")
    doc["manifest"]["config"].pop("input")
    return doc


def assert_close_tree(a, b, path="$"):
    if isinstance(a, dict):
        assert set(a) == set(b), path
        for k in a:
            assert_close_tree(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            assert_close_tree(x, y, f"{path}[{i}]")
    elif isinstance(a, float) or isinstance(b, float):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-12), path
    else:
        assert a == b, path


# -- synth -------------------------------------------------------------------
def test_synth_stdout_rows(capsys):
    assert main(["synth", "--n", "50", "--p", "4", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "country,year,indicator,value"
    # n * p feature cells plus the n response cells
    assert len(lines) - 1 == 50 * 5
    assert sum(",y," in ln for ln in lines) == 50


def test_synth_repeatable_bytes(capsys):
    main(["synth", "--n", "30", "--p", "3", "--seed", "7"])
    first = capsys.readouterr().out
    main(["synth", "--n", "30", "--p", "3", "--seed", "7"])
    assert capsys.readouterr().out == first


def test_synth_invalid_spec(capsys):
    assert main(["synth", "--n", "5", "--p", "10", "--seed", "1"]) == 1
    assert "error[E_INVALID_SPEC]" in capsys.readouterr().err


def test_synth_out_dir_and_sidecar(tmp_path):
    assert main(["synth", "--n", "20", "--p", "2", "--seed", "3", "--beta", "1,2,3", "--out", str(tmp_path)]) == 0
    truth = load(tmp_path / "synth.truth.json", "synth_truth")
    assert truth["true_beta"] == [1.0, 2.0, 3.0]
    assert (tmp_path / "synth.csv").read_text().startswith("country,year")


# -- fit ---------------------------------------------------------------------
def test_fit_noiseless(tmp_path, capsys):
    path, _ = write_synth(tmp_path, n=30, p=3, seed=2, noise_sd=0.0)
    assert main(["fit", "--input", path, "--response", "y", "--out", str(tmp_path)]) == 0
    doc = load(tmp_path / "fit.json", "fit_report")
    assert doc["r2"] == pytest.approx(1.0, abs=1e-12)
    assert [c["name"] for c in doc["coefficients"]] == ["Intercept", "x1", "x2", "x3"]
    out = capsys.readouterr().out
    assert "P>|t|" in out and "Cond. No." in out


def test_fit_ill_conditioned_warns(tmp_path, capsys):
    path, _ = write_synth(tmp_path, n=60, p=4, seed=2, collinearity_eps=1e-9)
    assert main(["fit", "--input", path, "--response", "y", "--out", str(tmp_path)]) == 2
    doc = load(tmp_path / "fit.json", "fit_report")
    assert doc["conditioning"] == "IllConditioned" and doc["cond_no"] > 1e6
    assert "ill-conditioned" in capsys.readouterr().err


def test_fit_missing_response_is_usage_error(tmp_path, capsys):
    path, _ = write_synth(tmp_path, n=20, p=2, seed=1)
    assert main(["fit", "--input", path, "--out", str(tmp_path)]) == 1
    assert "error[E_USAGE]" in capsys.readouterr().err


def test_fit_unknown_input(tmp_path, capsys):
    assert main(["fit", "--input", str(tmp_path / "nope.csv"), "--response", "y"]) == 1
    assert "error[E_IO]" in capsys.readouterr().err


def test_fit_boxcox_records_lambdas(tmp_path):
    path, _ = write_synth(tmp_path, n=40, p=2, seed=4, true_beta=(20.0, 1.0, 1.0))
    # shift every value by +10 so all columns are positive
    text = Path(path).read_text().splitlines()
    shifted = [text[0]] + [
        ",".join(r.split(",")[:3] + [repr(float(r.split(",")[3]) + 10.0)]) for r in text[1:]
    ]
    Path(path).write_text("\n".join(shifted) + "\n")
    assert main(["fit", "--input", path, "--response", "y", "--boxcox", "--out", str(tmp_path)]) in (0, 2)
    doc = load(tmp_path / "fit.json", "fit_report")
    assert set(doc["boxcox_lambdas"]) == {"x1", "x2", "y"}


def test_color_toggle(tmp_path, capsys, monkeypatch):
    path, _ = write_synth(tmp_path, n=40, p=2, seed=5, true_beta=(0.0, 5.0, 5.0))
    main(["fit", "--input", path, "--response", "y", "--color", "always", "--out", str(tmp_path)])
    assert "\x1b[" in capsys.readouterr().out
    monkeypatch.setenv("WDSTAB_NO_COLOR", "1")
    main(["fit", "--input", path, "--response", "y", "--color", "always", "--out", str(tmp_path)])
    assert "\x1b[" not in capsys.readouterr().out


def test_fit_golden_report(tmp_path):
    path, _ = write_synth(tmp_path, n=31, p=3, seed=11, noise_sd=0.8, true_beta=(8.0, 1.5, -0.7, 0.3))
    assert main(["fit", "--input", path, "--response", "y", "--out", str(tmp_path)]) == 0
    got = strip_volatile(load(tmp_path / "fit.json", "fit_report"))
    for key in ("omnibus", "prob_omnibus", "skew", "kurtosis", "durbin_watson", "jarque_bera", "prob_jb", "cond_no"):
        assert key in got
    want = json.loads((GOLDEN / "fit_report.json").read_text())
    assert_close_tree(got, want)


# -- pca ---------------------------------------------------------------------
def _write_matrix_panel(path, data, names):
    rows = ["country,year,indicator,value"]
    for t, row in enumerate(data, start=1):
        for n, v in zip(names, row):
            rows.append(f"SYN,{t},{n},{float(v)!r}")
    Path(path).write_text("\n".join(rows) + "\n")


def test_pca_rank_one(tmp_path):
    t = np.linspace(-1, 1, 30)
    _write_matrix_panel(tmp_path / "r1.csv", np.column_stack([t, 2 * t + 1]), ["a", "b"])
    assert main(["pca", "--input", str(tmp_path / "r1.csv"), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "scree.csv").read_text().splitlines()
    assert lines[0].startswith("component,")
    assert float(lines[1].split(",")[2]) == pytest.approx(1.0, abs=1e-10)
    doc = load(tmp_path / "pca.json", "pca_report")
    assert doc["robust"] is True


def test_pca_isotropic_two_bars(tmp_path):
    data = np.random.default_rng(0).standard_normal((10_000, 2))
    _write_matrix_panel(tmp_path / "iso.csv", data, ["a", "b"])
    assert main(["pca", "--input", str(tmp_path / "iso.csv"), "--out", str(tmp_path), "--svg"]) == 0
    ratios = [float(r.split(",")[2]) for r in (tmp_path / "scree.csv").read_text().splitlines()[1:]]
    assert len(ratios) == 2 and abs(ratios[0] - ratios[1]) < 0.06
    assert (tmp_path / "scree.svg").read_text().startswith("<svg")
    assert (tmp_path / "scatter.svg").exists()


def test_pca_robustness_warning(tmp_path, capsys):
    data = np.random.default_rng(1).standard_normal((500, 10))
    _write_matrix_panel(tmp_path / "iso10.csv", data, [f"f{j}" for j in range(10)])
    assert main(["pca", "--input", str(tmp_path / "iso10.csv"), "--out", str(tmp_path)]) == 2
    assert "robustness threshold not met" in capsys.readouterr().err
    doc = load(tmp_path / "pca.json", "pca_report")
    assert doc["two_pc_share"] < 0.5 and doc["robust"] is False
    proj = (tmp_path / "projection.csv").read_text().splitlines()
    assert len(proj) == 501


# -- search ------------------------------------------------------------------
def test_search_full_enumeration(tmp_path):
    path, _ = write_synth(tmp_path, n=60, p=8, seed=3)
    assert main(["search", "--input", path, "--response", "y", "--seed", "1", "--out", str(tmp_path)]) == 0
    doc = load(tmp_path / "search.json", "search_result")
    assert len(doc["results"]) == 162 == doc["total_subsets"]


def test_search_deterministic_modulo_timestamp(tmp_path):
    path, _ = write_synth(tmp_path, n=60, p=9, seed=3)
    docs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert main(["search", "--input", path, "--response", "y", "--seed", "42",
                     "--samples", "100", "--out", str(out)]) == 0
        docs.append(json.loads((out / "search.json").read_text()))
    for d in docs:
        d["manifest"].pop("timestamp")
    assert report.canonical_json(docs[0]) == report.canonical_json(docs[1])
    assert docs[0]["manifest"]["result_digest"] == docs[1]["manifest"]["result_digest"]


def test_search_force_unknown(tmp_path, capsys):
    path, _ = write_synth(tmp_path, n=40, p=8, seed=3)
    code = main(["search", "--input", path, "--response", "y", "--seed", "1",
                 "--force", "patents", "--out", str(tmp_path)])
    assert code == 1
    assert "error[E_UNKNOWN_INDICATOR]" in capsys.readouterr().err


def test_search_requires_seed(tmp_path, capsys):
    path, _ = write_synth(tmp_path, n=40, p=8, seed=3)
    assert main(["search", "--input", path, "--response", "y", "--out", str(tmp_path)]) == 1


# -- ingest ------------------------------------------------------------------
def test_ingest_histograms(tmp_path, capsys):
    path, _ = write_synth(tmp_path, n=31, p=2, seed=1)
    assert main(["ingest", "--input", path, "--histograms", "--svg", "--out", str(tmp_path)]) == 0
    assert "countries=1 years=1-31" in capsys.readouterr().out
    panel = load(tmp_path / "panel.json", "panel")
    hists = load(tmp_path / "histograms.json", "histograms")
    assert len(hists["histograms"]) == 3
    assert all(sum(h["counts"]) == 31 and len(h["counts"]) == 6 for h in hists["histograms"])
    assert (tmp_path / "hist_SYN_x1.svg").exists()
    # the emitted panel JSON is itself a valid input
    assert main(["fit", "--input", str(tmp_path / "panel.json"), "--response", "y", "--out", str(tmp_path)]) == 0
    assert panel["panel"]["countries"] == ["SYN"]


def test_ingest_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("country,year,indicator,value\nKOR,2000,a\n")
    assert main(["ingest", "--input", str(bad), "--out", str(tmp_path)]) == 1
    assert "error[E_MALFORMED_ROW]" in capsys.readouterr().err


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "wdstab", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("wdstab ")
