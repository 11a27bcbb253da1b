import json
import subprocess
import sys

import pytest

from pwrideal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_json(capsys):
    code, out, _ = run(capsys, "gen", "--k", "3", "--l", "5", "--json")
    obj = json.loads(out)
    assert code == 0 and obj["d1"] == "17" and obj["d2"] == "47" and obj["n"] == 0


def test_gen_classes(capsys):
    code, out, _ = run(capsys, "gen", "--k", "8", "--l", "10", "--class", "1mod4-even", "--json")
    assert json.loads(out)["d1"] == "71"
    code, out, _ = run(capsys, "gen", "--k", "3", "--class", "1mod4-odd", "--json")
    assert json.loads(out)["d2"] == "119"


def test_pell(capsys):
    assert run(capsys, "pell", "7", "13", "--json")[1].strip() == '{"k": "11", "l": "15", "t": "-2"}'
    assert json.loads(run(capsys, "pell", "5", "13", "--json")[1]) == {"solution": None}


def test_unit_principal_wr_verify(capsys):
    assert "1574 + 165*sqrt(91)" in run(capsys, "unit", "91")[1]
    assert json.loads(run(capsys, "principal", "91", "14", "14", "--json")[1])["principal"] is True
    rows = [json.loads(x) for x in run(capsys, "wr", "65", "--json")[1].splitlines()]
    assert [r["norm"] for r in rows] == ["5", "13"]
    obj = json.loads(run(capsys, "verify", "91", "--json")[1])
    assert obj["has_pwr"] and obj["pairs"][0]["generator"] == "105 - 11*sqrt(91)"
    obj = json.loads(run(capsys, "verify", "5", "13", "--json")[1])
    assert obj["pwr"] is False


def test_scan_scatter_prime_density(capsys, tmp_path):
    obj = json.loads(run(capsys, "scan", "--kmax", "50", "--json")[1])
    assert sum(obj["histogram"].values()) == obj["total"]
    path = tmp_path / "rows.csv"
    code, _, err = run(capsys, "scatter", "--d1max", "20", "--klmax", "8", "--csv", str(path))
    assert code == 0 and "rows" in err
    lines = path.read_text().splitlines()
    assert lines[0] == "d1,d2,k,l,t" and "17,47,3,5,-2" in lines
    out = run(capsys, "prime", "--limit", "10", "--json")[1]
    assert any(json.loads(x)["d"] == "133" for x in out.splitlines())
    obj = json.loads(run(capsys, "density", "--k", "3", "--l", "5", "--bound", "1000", "--json")[1])
    assert obj["correction"] == "192/161"


def test_bigdemo(capsys):
    obj = json.loads(run(capsys, "bigdemo", "--digits", "12", "--json", "--seed", "3")[1])
    assert len(obj["mod3"]["d1"]) == 25


@pytest.mark.parametrize(
    "argv,code",
    [
        (["gen", "--k", "3", "--l", "4"], 2),
        (["gen", "--k", "4"], 2),
        (["pell", "4", "6"], 2),
        (["wr", "12"], 2),
        (["principal", "91", "5", "1"], 2),
        (["scatter", "--csv", "/nonexistent/dir/x.csv"], 2),
        (["gen", "--k", "5", "--l", "7", "--nmax", "0"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_argparse_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["gen"])
    assert exc.value.code == 2


def test_invariant_exit_code(capsys, monkeypatch):
    from pwrideal import cli
    from pwrideal.errors import InvariantViolation

    def boom(*a, **k):
        raise InvariantViolation("forced")

    monkeypatch.setitem(cli.ALGORITHMS, cli.GenClass.MOD3, boom)
    assert run(capsys, "gen", "--k", "3")[0] == 4


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "pwrideal.cli", "gen", "--k", "5", "--json"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["d1"] == "77"
