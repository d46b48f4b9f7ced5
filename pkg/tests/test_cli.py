import csv
import io
import json
import subprocess
import sys

import pytest

from infoorder.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table_uniform_row(capsys):
    code, out, _ = run(["table", "unif:0,1"], capsys)
    assert code == 0
    (r,) = rows(out)
    got = [r[c] for c in ("e2H_f", "e2H_fstar", "e2H_ftilde", "HstarInv2_f", "HstarInv2_fstar", "HstarInv2_ftilde")]
    assert [float(g) for g in got] == pytest.approx([1.0, 1.0, 0.703, 1.0, 1.0, 0.567], abs=5e-3)
    assert r["e2H_ftilde_full"].startswith("0.7025")


def test_table_normal_lognormal_same_power(capsys):
    code, out, _ = run(["table", "norm:0,1", "lognorm:0,1"], capsys)
    a, b = rows(out)
    assert a["e2H_f"] == b["e2H_f"] == "17.079"


def test_table_bad_spec(capsys):
    code, _, err = run(["table", "norm:0,1", "cauchy:1"], capsys)
    assert code == 2 and "cauchy" in err


def test_table_to_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    assert main(["table", "--out", str(path), "laplace:1"]) == 0
    assert rows(path.read_text())[0]["HstarInv2_f"] == "16.000"


def test_sweep_panel_c_endpoints(capsys):
    code, out, _ = run(["sweep", "--panel", "c", "--range", "0,1,0.5", "--repr", "ftilde"], capsys)
    assert code == 0
    r = rows(out)
    assert [float(x["w"]) for x in r] == [0.0, 0.5, 1.0]
    for key in ("epow_ftilde", "hstar_inv_sq_ftilde"):
        assert float(r[0][key]) == pytest.approx(1.0, abs=5e-3)


def test_sweep_panel_a_f_increasing(capsys):
    _, out, _ = run(["sweep", "--panel", "a", "--range", "0,6,1", "--repr", "f", "--measures", "epow"], capsys)
    vals = [float(r["epow_f"]) for r in rows(out)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_sweep_custom(capsys):
    code, out, _ = run(["sweep", "--vary", "sigma2", "--range", "0.5,2,0.5", "--fixed", "0,2,1,1,0.5"], capsys)
    assert code == 0 and len(rows(out)) == 4


@pytest.mark.parametrize("argv", [
    ["sweep"],
    ["sweep", "--vary", "w", "--range", "0,2,0.5"],
    ["sweep", "--panel", "a", "--range", "1,0,0.5"],
    ["sweep", "--panel", "a", "--repr", "g"],
    ["sweep", "--panel", "a", "--vary", "w"],
])
def test_sweep_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_transform_curves(capsys):
    _, out, _ = run(["transform", "unif:0,1", "--grid", "256"], capsys)
    lines = out.splitlines()
    assert lines[0] == "u,value" and len(lines) == 257
    assert all(abs(float(l.split(",")[1]) - 1) < 1e-12 for l in lines[1:])
    _, out, _ = run(["transform", "norm:0,1", "--which", "ftilde", "--grid", "128"], capsys)
    assert all(abs(float(l.split(",")[1]) - 1) < 1e-9 for l in out.splitlines()[1:])


def test_transform_normal_fstar_peak(capsys):
    _, out, _ = run(["transform", "norm:0,1", "--grid", "1001"], capsys)
    vals = [float(l.split(",")[1]) for l in out.splitlines()[1:]]
    assert vals[500] == pytest.approx(2**0.5, rel=1e-4)
    assert vals == pytest.approx(vals[::-1], rel=1e-9)


def test_transform_fcolong(capsys):
    assert run(["transform", "norm:0,1", "--which", "fcolong"], capsys)[0] == 2
    code, out, _ = run(["transform", "norm:0,1", "--which", "fcolong", "--ref", "laplace:1"], capsys)
    assert code == 0
    code, _, _ = run(["transform", "norm:0,1", "--which", "fcolong", "--ref", "unif:0,1"], capsys)
    assert code == 4
    assert run(["transform", "norm:0,1", "--grid", "64"], capsys)[0] == 2


def test_order_exit_codes(capsys):
    assert run(["order", "norm:0,1", "norm:0,2", "--check", "dispersion"], capsys)[0] == 0
    code, out, _ = run(["order", "norm:0,2", "norm:0,1", "--check", "dispersion"], capsys)
    assert code == 3 and "does not hold" in out
    assert run(["order", "unif:-1.7320508,1.7320508", "laplace:1", "--check", "kurtosis"], capsys)[0] == 0
    code, out, _ = run(["order", "norm:0,1", "norm:0,1", "--check", "location"], capsys)
    assert code == 0 and "margin 0" in out
    assert run(["order", "unif:0,1", "norm:0,1", "--check", "information"], capsys)[0] == 0
    assert run(["order", "norm:0,2", "norm:0,1", "--check", "dilation"], capsys)[0] == 3


def test_order_majorization(capsys):
    assert run(["order", "--pvec", "0.25,0.25,0.25,0.25", "--pvec", "0.7,0.1,0.1,0.1"], capsys)[0] == 0
    assert run(["order", "--pvec", "0.7,0.1,0.1,0.1", "--pvec", "0.25,0.25,0.25,0.25"], capsys)[0] == 3
    assert run(["order", "--pvec", "0.5,0.6", "--pvec", "0.5,0.5"], capsys)[0] == 2
    assert run(["order", "norm:0,1"], capsys)[0] == 2


def test_measures_json(capsys):
    code, out, _ = run(["measures", "unif:0,1"], capsys)
    d = json.loads(out)
    assert code == 0 and d["fisher"] == "inf" and d["h_star_inv_sq"] == pytest.approx(1.0)
    _, out, _ = run(["measures", "--pvec", "0.5,0.25,0.25"], capsys)
    d = json.loads(out)
    assert d["H_bits"] == pytest.approx(1.5) and d["H_star"] == pytest.approx(0.375)
    assert run(["measures"], capsys)[0] == 2


def test_ica_deterministic(tmp_path, capsys):
    argv = ["ica", "--sources", "unif:0,1,laplace:1", "--n", "20000", "--seed", "3"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(["--seed", "3", "--out", str(b)] + argv[:-2]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["amari"] < 0.05


def test_ica_from_data(tmp_path, capsys):
    import numpy as np

    from infoorder import dist, ica

    X, _, _ = ica.simulate_mixture([dist.Uniform(0, 1), dist.Laplace(1)], "random", 5000, 1)
    path = tmp_path / "x.csv"
    ica.write_matrix(path, X)
    code, out, _ = run(["ica", "--data", str(path), "--index", "quart"], capsys)
    assert code == 0 and "amari" not in json.loads(out)
    assert np.array(json.loads(out)["unmixing"]).shape == (2, 2)


def test_ica_bad_index(capsys):
    assert run(["ica", "--index", "negentropy", "--n", "1000"], capsys)[0] == 2


def test_argparse_usage_exit():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "infoorder", "measures", "--pvec", "1"], capture_output=True, text=True)
    assert r.returncode == 0 and '"H": 0.0' in r.stdout
