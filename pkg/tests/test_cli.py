import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from tridice.cli import main
from tridice.dice import build_G
from tridice.linalg import parse_rational
from tridice.polytope import read_polytope

REFERENCE_THREE_DICE = [
    "vol(Q3) = 1/512",
    "P(E123) = 23/1800 = 0.0127777778",
    "P(E132) = 3133/115200 = 0.0271961806",
    "P(A>B>C>A) = P(E) = 307/2560 = 0.119921875",
    "P(intransitive) = 307/1280 = 0.239843750",
]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rationals_in(obj):
    if isinstance(obj, dict):
        if "exact" in obj:
            yield obj["exact"]
        for v in obj.values():
            yield from rationals_in(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from rationals_in(v)


def test_volume_command(tmp_path, capsys):
    q = tmp_path / "q.txt"
    q.write_text("# region Q\ndim 2\n0 1 0\n0 -1 1\n-1 2 2\n3 -2 -4\n")
    code, out, _ = run(capsys, "volume", str(q))
    assert code == 0
    assert out.splitlines()[0] == "dim 2, volume 1/8"

    cube = tmp_path / "cube.txt"
    cube.write_text("dim 3\n0 1 0 0\n1 -1 0 0\n0 0 1 0\n1 0 -1 0\n0 0 0 1\n1 0 0 -1\n")
    assert run(capsys, "volume", str(cube))[1].startswith("dim 3, volume 1\n")

    empty = tmp_path / "empty.txt"
    empty.write_text("dim 1\n-1 1\n0 -1\n")
    assert run(capsys, "volume", str(empty))[1].startswith("dim -1, volume 0\n")


def test_volume_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("dim 2\n0 1 0\n0 1\n")
    code, out, err = run(capsys, "volume", str(bad))
    assert code != 0 and out == ""
    assert "line 3" in err

    ray = tmp_path / "ray.txt"
    ray.write_text("dim 2\n0 1 0\n0 0 1\n")
    code, _, err = run(capsys, "volume", str(ray))
    assert code != 0 and "extreme ray" in err

    code, _, err = run(capsys, "volume", str(tmp_path / "missing.txt"))
    assert code != 0 and err


def test_three_dice_reference_output(capsys):
    code, out, _ = run(capsys, "three-dice")
    assert code == 0
    lines = out.splitlines()
    assert lines[:5] == REFERENCE_THREE_DICE
    assert lines[5] == "P(transitive) = 973/1280 = 0.760156250"


def test_four_dice(capsys):
    code, out, _ = run(capsys, "four-dice")
    assert code == 0
    assert "G(1,1,2,3)     229/322560" in out
    assert "P(4-cycle) = 99930571/258048000" in out
    assert "P(transitive chain) = 110413771/258048000 = 0.427880747" in out


def test_four_dice_full_json(capsys):
    code, out, _ = run(capsys, "four-dice", "--full", "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["results"]["G"]) == 36
    assert doc["results"]["P_G"]["exact"] == "99930571/1548288000"


@pytest.mark.parametrize(
    "word,prob,dim",
    [("1212", "0", None), ("1323", "40913/15482880", 8), ("123", "23/1800", 6)],
)
def test_sigma(capsys, word, prob, dim):
    code, out, _ = run(capsys, "--json", "sigma", word)
    assert code == 0
    res = json.loads(out)["results"]
    assert res["probability"]["exact"] == prob
    if dim is None:
        assert res["dimension"] < res["ambient_dim"] == 8
    else:
        assert res["dimension"] == dim


def test_sigma_dump(tmp_path, capsys):
    path = tmp_path / "g.txt"
    code, _, _ = run(capsys, "sigma", "1123", "--dump", str(path))
    assert code == 0
    assert read_polytope(path) == build_G("1123")
    lines = path.read_text().splitlines()
    assert lines[1] == "dim 8"
    assert lines[2] == "0 1 0 0 0 0 0 0 0"


@pytest.mark.parametrize("word", ["12", "1204", "x123"])
def test_sigma_usage_error(capsys, word):
    with pytest.raises(SystemExit) as exc:
        main(["sigma", word])
    assert exc.value.code != 0
    assert "sigma" in capsys.readouterr().err


def test_simulate(capsys):
    code, out, _ = run(capsys, "--json", "simulate", "--dice", "4", "--trials", "1", "--seed", "3")
    assert code == 0
    doc = json.loads(out)
    assert sum(c["count"] for c in doc["results"]["classes"]) + doc["results"]["ties"] == 1
    with pytest.raises(SystemExit):
        main(["simulate", "--dice", "5"])
    with pytest.raises(SystemExit):
        main(["simulate", "--trials", "0"])


def test_json_rationals_round_trip(capsys):
    _, out, _ = run(capsys, "three-dice", "--json")
    doc = json.loads(out)
    assert set(doc) == {"command", "inputs", "results", "duration_seconds"}
    values = list(rationals_in(doc))
    assert values
    for text in values:
        assert str(parse_rational(text)) == text
    assert parse_rational(doc["results"]["p_triangle"]["exact"]) == F(307, 1280)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tridice", "sigma", "1123"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "229/322560" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "tridice", "sigma", "99"], capture_output=True, text=True)
    assert proc.returncode != 0 and proc.stderr
