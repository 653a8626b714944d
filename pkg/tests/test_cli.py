import json
import subprocess
import sys

import pytest

from klrpbw.cli import EXIT_BUDGET, EXIT_CHECK, EXIT_OK, EXIT_USAGE, main
from klrpbw.klr import g2_five_dim_module


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_kp(capsys):
    code, out, _ = run(capsys, "kp", "--type", "A2", "--nu", "1,1")
    assert code == EXIT_OK and out.strip() == "2"
    code, out, _ = run(capsys, "kp", "--type", "G2", "--nu", "3,2", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["kostant_partition"] == 7


def test_cuspidal_g2_good_words(capsys):
    code, out, _ = run(capsys, "cuspidal", "--type", "G2", "--format", "json")
    assert code == EXIT_OK
    words = [r["good_word"] for r in json.loads(out)["rows"]]
    assert words == ["1", "0", "01", "001", "0001", "00101"]


def test_selftest_b2(capsys):
    code, _, err = run(capsys, "selftest", "--type", "B2", "--quick")
    assert code == EXIT_OK
    assert "seed 0" in err


@pytest.mark.parametrize("argv", [
    ["kp", "--nu", "1,1"],                                    # no Cartan datum
    ["kp", "--type", "Z9", "--nu", "1"],                      # unknown type
    ["kp", "--type", "A2", "--nu", "1,x"],                    # bad vector
    ["convex-order", "--type", "A2", "--word", "0,0,1"],      # not reduced
    ["nf", "--type", "A2", "e(01", ],                         # parse error
    ["nf", "--type", "A2", "e(01)", "--label-order", "0,0"],  # bad label order
    ["verify-module", "--type", "G2", "/nonexistent.json"],
    ["kp", "--type", "A2", "--nu", "1,1", "--characteristic", "4"],
    ["bogus-command"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == "" and err


def test_usage_error_json(capsys):
    code, _, err = run(capsys, "kp", "--type", "Z9", "--nu", "1", "--format", "json")
    assert code == EXIT_USAGE
    assert json.loads(err)["error"] == "usage"


def test_budget_exit(capsys):
    code, _, err = run(capsys, "nf", "--type", "A2", "--max-letters", "3", "e(0101)")
    assert code == EXIT_BUDGET and "budget" in err


def test_budget_from_env(capsys, monkeypatch):
    monkeypatch.setenv("KLRPBW_MAX_LETTERS", "3")
    assert run(capsys, "nf", "--type", "A2", "e(0101)")[0] == EXIT_BUDGET
    # flag beats env
    assert run(capsys, "nf", "--type", "A2", "--max-letters", "8", "e(0101)")[0] == EXIT_OK


def test_verify_module_pass_and_fail(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(g2_five_dim_module().dumps())
    code, out, _ = run(capsys, "verify-module", "--type", "G2", str(good))
    assert code == EXIT_OK and out.startswith("PASS")

    data = json.loads(good.read_text())
    data["action"]["y_1"] = [[_neg(x) for x in row] for row in data["action"]["y_1"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify-module", "--type", "G2", "--format", "json", str(bad))
    assert code == EXIT_CHECK
    rels = {e["relation"] for e in json.loads(out)["relation_errors"]}
    assert rels == {"s1 y1 - y2 s1", "s1 y2 - y1 s1"}
    # the residual is even, so it vanishes in characteristic 2 only
    assert run(capsys, "verify-module", "--type", "G2", "--characteristic", "2", str(bad))[0] == EXIT_OK
    assert run(capsys, "verify-module", "--type", "G2", "--characteristic", "3", str(bad))[0] == EXIT_CHECK


def _neg(x):
    if isinstance(x, str):
        return x[1:] if x.startswith("-") else "-" + x
    return -x


def test_json_is_deterministic(capsys):
    argv = ["cuspidal", "--type", "B2", "--format", "json"]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv)[1]
    c = run(capsys, *argv, "--no-cache")[1]
    assert a == b == c


def test_output_file(capsys, tmp_path):
    path = tmp_path / "sub" / "roots.json"
    code, out, _ = run(capsys, "roots", "--type", "B2", "--output", str(path))
    assert code == EXIT_OK
    data = json.loads(path.read_text())
    assert len(data["roots"]) == 4


def test_toml_config(capsys, tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text('[cartan]\ntype = "A3"\n\n[budgets]\nmax_letters = 3\n')
    assert run(capsys, "kp", "--config", str(cfg), "--nu", "1,1,1")[1].strip() == "4"
    assert run(capsys, "nf", "--config", str(cfg), "e(0101)")[0] == EXIT_BUDGET
    cfg.write_text("[cartan]\npairing = [[2, -1], [-1, 2]]\nname = \"mine\"\n")
    assert run(capsys, "kp", "--config", str(cfg), "--nu", "1,1")[1].strip() == "2"
    cfg.write_text("[cartan\n")
    assert run(capsys, "kp", "--config", str(cfg), "--nu", "1")[0] == EXIT_USAGE


def test_explicit_word_changes_order(capsys):
    _, a, _ = run(capsys, "convex-order", "--type", "A2", "--word", "0,1,0", "--format", "json")
    _, b, _ = run(capsys, "convex-order", "--type", "A2", "--word", "1,0,1", "--format", "json")
    assert json.loads(a) != json.loads(b)


def test_nf_label_order(capsys):
    _, a, _ = run(capsys, "nf", "--type", "A2", "s1 s1 e(01)")
    assert a.strip()
    code, b, _ = run(capsys, "nf", "--type", "A2", "--label-order", "1,0", "s1 s1 e(01)", "--format", "json")
    assert code == EXIT_OK and json.loads(b)["label_order"] == [1, 0]


def test_chevalley_check(capsys):
    code, out, _ = run(capsys, "chevalley-check", "--type", "B2", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["ok"] is True


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "klrpbw", "kp", "--type", "A2", "--nu", "1,1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout.strip() == "2"
