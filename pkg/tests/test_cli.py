import csv
import io
import json

import numpy as np
import pytest

from spiked.cli import emit_table, format_number, parse_grid, run
from spiked.errors import NumericalFailure
from spiked.fredholm import build_nystrom, characteristic_values_oracle
from spiked.oscillator import PotentialSpec


def _csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_emit_table_canonical(tmp_path):
    p = tmp_path / "t.csv"
    emit_table(["index", "energy"], [(1, 3.0)], "csv", str(p))
    assert p.read_bytes() == b"index,energy\n1,3\n"
    emit_table(["index", "energy"], [], "csv", str(p))
    assert p.read_text() == "index,energy\n"


def test_emit_table_round_trip(tmp_path):
    vals = [0.1, 1 / 3, 2.0 ** -40, 1e300, -7.25]
    p = tmp_path / "t.csv"
    emit_table(["v"], [(v,) for v in vals], "csv", str(p))
    back = [float(r["v"]) for r in _csv(p)]
    assert back == vals
    pj = tmp_path / "t.json"
    emit_table(["v"], [(v,) for v in vals], "json", str(pj))
    assert [o["v"] for o in json.loads(pj.read_text())] == vals


def test_emit_table_rejects_non_finite(tmp_path):
    with pytest.raises(NumericalFailure):
        emit_table(["v"], [(float("nan"),)], "csv", str(tmp_path / "x.csv"))
    assert not (tmp_path / "x.csv").exists()


def test_emit_table_io_error_has_path(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        emit_table(["v"], [(1.0,)], "csv", str(bad))


def test_format_number():
    assert format_number(3.0) == "3"
    assert format_number(7) == "7"
    assert format_number(0.5) == "0.5"


def test_parse_grid():
    assert list(parse_grid("1e-6:1e-3:log10")) == [1e-6, 1e-5, 1e-4, 1e-3]
    assert len(parse_grid("1e-3:1e-1:log10:9")) == 9
    assert np.allclose(parse_grid("0:1:lin:5"), [0, 0.25, 0.5, 0.75, 1])


def test_spectrum_example(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["spectrum", "--alpha", "4", "--lambda", "0", "--k", "3", "--output", str(out)]) == 0
    rows = _csv(out)
    assert [int(r["index"]) for r in rows] == [1, 2, 3]
    assert np.allclose([float(r["energy"]) for r in rows], [3, 7, 11], atol=1e-8)


def test_compare_difference_scales_like_lambda(tmp_path):
    out = tmp_path / "c.csv"
    assert run(["compare", "--alpha", "4", "--lambda-grid", "1e-6:1e-3:log10", "--state", "1",
                "--output", str(out)]) == 0
    rows = _csv(out)
    assert list(rows[0]) == ["lambda", "E_exact", "E_expansion", "difference"]
    lam = np.array([float(r["lambda"]) for r in rows])
    diff = np.array([abs(float(r["difference"])) for r in rows])
    assert np.polyfit(np.log(lam), np.log(diff), 1)[0] == pytest.approx(1.0, abs=0.1)


def test_transform_command(tmp_path):
    out = tmp_path / "t.csv"
    # generic parameters (a = 2) so the eps^4 term does not cancel
    assert run(["transform", "--E", "1", "--a", "2", "--b", "1", "--p", "4", "--rho", "2",
                "--eps-grid", "1e-3:1e-1", "--output", str(out)]) == 0
    rows = _csv(out)
    eps = np.array([float(r["epsilon"]) for r in rows])
    rem = np.array([abs(float(r["remainder"])) for r in rows])
    assert np.polyfit(np.log(eps), np.log(rem), 1)[0] == pytest.approx(4.0, abs=0.2)


@pytest.mark.parametrize("argv", [
    ["kernel", "--xi", "1,2"],
    ["fredholm", "--n", "64"],
    ["fredholm", "--mode", "characteristic", "--n", "64", "--kappa-min", "-1", "--kappa-max", "-0.5"],
    ["fredholm", "--mode", "b-limit", "--b-values", "10,20"],
    ["perturb", "--lambda", "1e-4"],
    ["factorize", "--points", "201"],
])
def test_other_commands(tmp_path, argv):
    out = tmp_path / "o.json"
    assert run(argv + ["--format", "json", "--output", str(out)]) == 0
    data = json.loads(out.read_text())
    assert isinstance(data, list) and data


def test_exit_codes(tmp_path, capsys):
    assert run(["spectrum", "--alpha", "2"]) == 2
    assert "alpha" in capsys.readouterr().err
    assert run(["spectrum", "--bogus"]) == 2
    assert "usage" in capsys.readouterr().err
    assert run(["nonsense"]) == 2
    # kappa on a characteristic value: numerical failure
    op = build_nystrom(PotentialSpec(alpha=4.0, lam=1.0), 10.0, 128)
    kstar = characteristic_values_oracle(op, -1.0, -0.5)[0]
    assert run(["fredholm", "--n", "128", "--kappa", repr(float(kstar)),
                "--output", str(tmp_path / "f.csv")]) == 3
    assert "characteristic value" in capsys.readouterr().err


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# spectrum bundle\nalpha = 4\nlambda = 0\nk = 2\nx-max = 12\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["spectrum", "--config", str(cfg), "--output", str(a)]) == 0
    assert len(_csv(a)) == 2
    assert run(["spectrum", "--config", str(cfg), "--k", "3", "--output", str(b)]) == 0
    assert len(_csv(b)) == 3
    cfg.write_text("nope = 1\n")
    assert run(["spectrum", "--config", str(cfg)]) == 2


def test_determinism_and_workers(tmp_path):
    outs = []
    for workers in ("1", "1", "3"):
        p = tmp_path / f"d{len(outs)}.csv"
        assert run(["compare", "--lambda-grid", "1e-5:1e-3:log10", "--n", "20000",
                    "--workers", workers, "--output", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_stdout_output(capsys):
    assert run(["perturb", "--lambda", "0"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("state,alpha,lambda,e0,coefficient,exponent,energy\n")
    assert list(csv.reader(io.StringIO(text)))[1][:2] == ["1", "4"]


def test_transform_example_parameters_are_degenerate(tmp_path):
    # E = a = 1, p = 4 cancels the eps^4 term, leaving order 5
    out = tmp_path / "t.csv"
    assert run(["transform", "--E", "1", "--a", "1", "--b", "1", "--p", "4", "--rho", "2",
                "--eps-grid", "1e-3:1e-1", "--output", str(out)]) == 0
    rows = _csv(out)
    eps = np.array([float(r["epsilon"]) for r in rows])
    rem = np.array([abs(float(r["remainder"])) for r in rows])
    assert np.polyfit(np.log(eps), np.log(rem), 1)[0] == pytest.approx(5.0, abs=0.2)
