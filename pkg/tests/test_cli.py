import json
import shutil
import subprocess

import pytest

from quantum3 import diagram as D
from quantum3 import surgery as S
from quantum3 import triangulation as T
from quantum3.cli import main


@pytest.fixture
def files(tmp_path):
    assert main(["builtin", "fibonacci", "--emit", str(tmp_path / "fib.json")]) == 0
    T.save_triangulation(T.sphere_s3(), tmp_path / "s3.json")
    S.save_presentation(S.corpus()["hopf_with_wilson"], tmp_path / "wilson.json")
    D.save_diagram(D.hopf_link(None, 1), tmp_path / "hopf.json")
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, err = run(["--json", *argv], capsys)
    obj = json.loads(out)
    assert obj["schema_version"] == 1
    return code, obj


def test_emit_then_validate(files, capsys):
    code, out, _ = run(["validate", files / "fib.json"], capsys)
    assert code == 0 and out.strip().endswith("OK")


def test_validate_perturbed(files, capsys):
    obj = json.loads((files / "fib.json").read_text())
    row = next(r for r in obj["sixj"] if r[:6] == [1, 1, 1, 1, 1, 1])
    row[6] += 0.01
    (files / "broken.json").write_text(json.dumps(obj))
    code, out, _ = run(["validate", files / "broken.json"], capsys)
    assert code == 1
    assert "pentagon residual" in out and "FAIL" in out


def test_tv_sphere(files, capsys):
    code, out, _ = run(["tv", files / "fib.json", files / "s3.json"], capsys)
    assert code == 0
    assert abs(float(out) - 0.2763932) < 1e-7


def test_tv_json_and_determinism(files, capsys):
    argv = ["tv", files / "fib.json", files / "s3.json", "--method", "enumerate"]
    _, a = run_json(argv, capsys)
    _, b = run_json(argv, capsys)
    assert {"value", "method", "width", "states", "wall_time"} <= a.keys()
    assert a["states"] == 52
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


def test_tv_builtin_names(capsys):
    code, out, _ = run(["tv", "vec_z2", "lens_4", "--strategy", "min-degree"], capsys)
    assert code == 0 and abs(float(out) - 1.0) < 1e-9


def test_tv_width_cap(capsys):
    code, _, err = run(["tv", "ising", "s3", "--cap-width", "4"], capsys)
    assert code == 1 and "variable" in err


def test_tri_commands(files, capsys):
    code, obj = run_json(["tri", "info", files / "s3.json"], capsys)
    assert code == 0 and obj["counts"] == {"vertices": 5, "edges": 10, "triangles": 10, "tetrahedra": 5}
    raw = json.loads((files / "s3.json").read_text())
    raw["gluings"].pop()
    (files / "bad_tri.json").write_text(json.dumps(raw))
    code, out, _ = run(["tri", "validate", files / "bad_tri.json"], capsys)
    assert code == 1 and "unglued face" in out and "bad_tri.json" in out


def test_eval(files, capsys):
    code, obj = run_json(["eval", "fibonacci", files / "hopf.json", "--omega", "L1"], capsys)
    assert code == 0 and obj["omega"] == ["L1"]
    code, _, err = run(["eval", "fibonacci", files / "hopf.json"], capsys)
    assert code == 1 and "no color" in err


def test_wrt(files, capsys):
    code, obj = run_json(["wrt", "fibonacci", files / "wilson.json", "--tau"], capsys)
    assert code == 0
    assert (obj["e_plus"], obj["e_minus"], obj["nullity"]) == (1, 0, 0)
    assert {"bracket", "value", "tau", "sqrt_dim"} <= obj.keys()
    code, _, _ = run(["wrt", "fibonacci", files / "wilson.json", "--sqrt-dim", "1,1"], capsys)
    assert code == 1
    code, _, _ = run(["wrt", "fibonacci", files / "wilson.json", "--sqrt-dim", "x"], capsys)
    assert code == 2
    code, _, err = run(["wrt", "vec_z2", files / "wilson.json"], capsys)
    assert code == 1 and "braided" in err


def test_pachner_fuzz(files, capsys):
    argv = ["pachner-fuzz", files / "s3.json", "--moves", 12, "--seed", 4, "--category", "fibonacci"]
    code, a = run_json(argv, capsys)
    assert code == 0 and a["ok"] and len(a["moves"]) == 12 and a["max_deviation"] < 1e-9
    _, b = run_json(argv, capsys)
    assert a == b
    out_file = files / "out.json"
    assert main(["pachner-fuzz", str(files / "s3.json"), "--moves", "5", "--output", str(out_file)]) == 0
    assert T.load_triangulation(out_file).euler_characteristic() == 0


def test_verlinde(capsys):
    code, obj = run_json(["verlinde", "fibonacci", "--genus", "1", "2"], capsys)
    assert code == 0 and obj["values"]["1"][0] == pytest.approx(2) and obj["values"]["2"][0] == pytest.approx(5)


def test_usage_errors(files, capsys):
    assert run(["frobnicate"], capsys)[0] == 2
    assert run(["tv", "fibonacci"], capsys)[0] == 2
    code, _, err = run(["validate", files / "missing.json"], capsys)
    assert code == 2 and "missing.json" in err
    assert run(["--tol", "-1", "validate", "fibonacci"], capsys)[0] == 2


def test_malformed_file_names_field(files, capsys):
    obj = json.loads((files / "fib.json").read_text())
    obj["qdim"][1] = "golden"
    (files / "mal.json").write_text(json.dumps(obj))
    code, out = run_json(["validate", files / "mal.json"], capsys)
    assert code == 1
    assert "mal.json" in out["error"] and "qdim" in out["error"] and "index 1" in out["error"]


def test_console_script(tmp_path):
    exe = shutil.which("quantum3")
    if exe is None:
        pytest.skip("console script not installed")
    res = subprocess.run([exe, "--json", "verlinde", "ising"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["values"]["1"] == [3.0, 0.0]
