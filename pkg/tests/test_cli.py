import csv
import io
import math
import subprocess
import sys

import pytest

from nonclassicality.cli import main
from nonclassicality.moments import provider_for
from nonclassicality.states import CatParams, NonGaussianOp
from nonclassicality.sweep import (
    CSV_HEADER,
    PRESETS,
    SweepSpec,
    csv_lines,
    fmt,
    parse_number,
    parse_range,
    preset,
    range_values,
    run_sweep,
)
from nonclassicality.witnesses import hillery2, hoa


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    assert body[0] == CSV_HEADER
    return list(csv.DictReader(io.StringIO("\n".join(body))))


@pytest.mark.parametrize("text, value", [
    ("1.5", 1.5), ("pi", math.pi), ("2pi", 2 * math.pi), ("pi/2", math.pi / 2),
    ("-pi/4", -math.pi / 4), ("0.5*pi", 0.5 * math.pi), ("3pi/4", 3 * math.pi / 4),
])
def test_parse_number(text, value):
    assert parse_number(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["abc", "1..2", ""])
def test_parse_number_rejects(text):
    with pytest.raises(ValueError):
        parse_number(text)


def test_parse_range_and_values():
    assert parse_range("0:1:0.25") == (0.0, 1.0, 0.25)
    assert range_values(0.0, 1.0, 0.25) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(range_values(0.05, 2.0, 0.05)) == 40
    with pytest.raises(ValueError):
        parse_range("0:1")


@pytest.mark.parametrize("x, s", [(0.5, "0.5"), (1 / 3, "0.333333333333"),
                                  (float("nan"), "NaN"), (-0.0, "-0")])
def test_fmt(x, s):
    assert fmt(x) == s


def test_witness_hoa_line(capsys):
    code, out, _ = run(capsys, "witness", "--state", "cat", "--alpha", "1", "--phi", "pi",
                       "--witness", "hoa", "--order", "1")
    assert code == 0
    assert "witness=hoa order=1 value=-0.724061660966 nonclassical=true" in out
    assert out.count("\n") == 1


def test_witness_hillery_fields(capsys):
    code, out, _ = run(capsys, "witness", "--state", "squeezed", "--xi", "0.5",
                       "--witness", "hillery2")
    assert code == 0
    assert "A1=0.555555555556 A1_nonclassical=false" in out
    assert "A2=-0.333333333333 A2_nonclassical=true" in out


def test_witness_hong_mandel(capsys):
    code, out, _ = run(capsys, "witness", "--state", "squeezed", "--xi", "0.5",
                       "--witness", "hong-mandel", "--order", "4", "--angle", "pi/2")
    assert code == 0
    assert "value=-0.888888888889 nonclassical=true" in out


@pytest.mark.parametrize("argv, needle", [
    (("--state", "squeezed", "--xi", "1.2", "--witness", "hoa"), "xi must be < 1"),
    (("--state", "cat", "--alpha", "0", "--phi", "pi", "--witness", "hoa"), "error:"),
    (("--state", "cat", "--witness", "hoa", "--order", "0"), "error:"),
    (("--state", "cat", "--witness", "hoa", "--add", "0", "--sub", "3", "--alpha", "0"),
     "error:"),
])
def test_witness_usage_errors(capsys, argv, needle):
    code, _, err = run(capsys, "witness", *argv)
    assert code == 2
    assert needle in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["witness", "--witness", "nope"])
    assert exc.value.code == 2


def _sweep(capsys, *extra):
    return run(capsys, "sweep", "--state", "cat", "--phi", "pi", "--witness", "hoa",
               "--param", "alpha", "--range", "0.2:1.0:0.2", "--orders", "1,2", *extra)


def test_sweep_csv_shape(capsys):
    code, out, _ = _sweep(capsys)
    assert code == 0
    assert out.startswith("# tool: nonclassicality")
    assert "# truncation_dim: none (closed-form moments)" in out
    rows = rows_of(out)
    assert len(rows) == 10
    vals = [float(r["param_value"]) for r in rows]
    assert vals == sorted(vals)
    assert all(r["nonclassical"] == "true" for r in rows)


def test_sweep_deterministic_and_parallel(capsys):
    _, serial, _ = _sweep(capsys, "--jobs", "1")
    _, again, _ = _sweep(capsys, "--jobs", "1")
    _, parallel, _ = _sweep(capsys, "--jobs", "4")
    assert serial == again == parallel


def test_sweep_values_match_library(capsys):
    _, out, _ = _sweep(capsys)
    for r in rows_of(out):
        m = provider_for("cat", CatParams(float(r["param_value"]), math.pi))
        assert r["value"] == fmt(hoa(m, int(r["order"])).value)


def test_sweep_nan_row(capsys):
    code, out, err = run(capsys, "sweep", "--state", "cat", "--phi", "pi", "--witness", "hoa",
                         "--param", "alpha", "--range", "0:0.4:0.2")
    assert code == 0
    rows = rows_of(out)
    assert rows[0]["value"] == "NaN" and rows[0]["nonclassical"] == "false"
    assert rows[1]["value"] != "NaN"
    assert "alpha=0 gave NaN" in err


def test_sweep_all_points_fail(capsys):
    code, out, _ = run(capsys, "sweep", "--state", "cat", "--alpha", "0", "--witness", "hoa",
                       "--param", "phi", "--range", "pi:pi:1")
    assert code == 1
    assert rows_of(out)[0]["value"] == "NaN"


def test_sweep_nmax_warning(capsys):
    code, out, err = run(capsys, "sweep", "--state", "cat", "--phi", "pi", "--witness", "hoa",
                         "--param", "alpha", "--range", "1.5:2:0.5", "--nmax", "12")
    assert code == 0
    assert "# WARNING: nmax override below automatic truncation" in out
    assert err.count("warning:") <= 2


def test_sweep_output_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = _sweep(capsys, "-o", str(path))
    assert code == 0 and out == ""
    assert len(rows_of(path.read_text())) == 10


def test_oracle_check_pass_and_fail(capsys):
    code, out, _ = run(capsys, "oracle-check", "--family", "cat")
    assert code == 0
    assert "k l max_abs_dev" in out and "PASS" in out
    code, out, _ = run(capsys, "oracle-check", "--family", "cat", "--tol", "1e-16")
    assert code == 1
    assert "FAIL worst" in out


def test_figdata_list(capsys):
    code, out, _ = run(capsys, "figdata", "--list")
    assert code == 0
    assert len(out.splitlines()) == len(PRESETS)


def test_figdata_requires_name(capsys):
    code, _, err = run(capsys, "figdata")
    assert code == 2 and "error:" in err


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_run(name):
    spec = preset(name, start=PRESETS[name].start, stop=PRESETS[name].start)
    rows = run_sweep(spec)
    lines = csv_lines(spec, rows)
    assert f"# preset: {name}" in lines
    assert all(r.error is None for r in rows)


def test_fig4a_trend(capsys):
    code, out, _ = run(capsys, "figdata", "fig4a")
    assert code == 0
    a1 = [float(r["value"]) for r in rows_of(out) if r["witness"].endswith("1")]
    assert len(a1) == 6
    assert all(b < a for a, b in zip(a1, a1[1:]))
    m1 = provider_for("cat", CatParams(1.5, 0.0), NonGaussianOp(1, 0))
    assert a1[0] == pytest.approx(hillery2(m1)[0].value, abs=1e-11)


def test_fig2a_sign_region(capsys):
    code, out, _ = run(capsys, "figdata", "fig2a", "--range", "0.1:0.9:0.1")
    assert code == 0
    rows = rows_of(out)
    # order 2 collapses to D(1), positive (bunched); order 3 carries the sign region
    assert all(r["nonclassical"] == ("true" if r["order"] == "3" else "false") for r in rows)


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec("cat", {}, "xi", 0, 1, 0.1, "hoa")
    with pytest.raises(ValueError):
        SweepSpec("cat", {}, "alpha", 1, 0, 0.1, "hoa")
    with pytest.raises(ValueError):
        SweepSpec("cat", {}, "alpha", 0, 1, 0, "hoa")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nonclassicality", "witness", "--witness",
                           "hoa", "--alpha", "1", "--phi", "pi/2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "nonclassical=false" in proc.stdout
