import re
from importlib import resources
from pathlib import Path

import pytest

from cohoma.cli import main

GOLDEN = Path(__file__).parent / "golden"
SCRIPTS = sorted(p for p in resources.files("cohoma.scripts").iterdir() if p.name.endswith(".cohoma"))
JSON_GOLDEN = sorted(p.stem for p in GOLDEN.glob("*.json"))


def expected_exit(path):
    m = re.match(r"# expect: exit (\d)", path.read_text())
    assert m, f"{path.name} lacks an expect header"
    return int(m.group(1))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("path", SCRIPTS, ids=lambda p: p.name[:-7])
def test_script_matches_golden(path, capsys):
    code, out, _ = run(capsys, "run", str(path), "--deterministic")
    assert code == expected_exit(path)
    assert out == (GOLDEN / f"{path.name[:-7]}.txt").read_text()


@pytest.mark.parametrize("name", JSON_GOLDEN)
def test_script_json_golden(name, capsys):
    path = resources.files("cohoma.scripts").joinpath(f"{name}.cohoma")
    code, out, _ = run(capsys, "run", str(path), "--json", "--deterministic")
    assert code == expected_exit(path)
    assert out == (GOLDEN / f"{name}.json").read_text()


def test_exit_code_spread():
    codes = {expected_exit(p) for p in SCRIPTS}
    assert codes == {0, 1, 2}


def test_nf_command(capsys):
    assert run(capsys, "nf", "KQK") == (0, "K L - K^2 Q\n", "")
    assert run(capsys, "nf", "K^3", "--n", "2")[1] == "0\n"
    code, _, err = run(capsys, "nf", "Q X")
    assert code == 2 and err.startswith("error:")


def test_preset_command(capsys):
    code, out, _ = run(capsys, "preset", "weil(su2)", "--list-generators")
    assert code == 0
    assert out.startswith("weil(su2): 6 generators, convention first\n")
    assert "theta[1]" in out and "derivations: d (0, 1)" in out
    code, _, err = run(capsys, "preset", "nosuch(1)")
    assert code == 2 and err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "run", str(tmp_path / "none.cohoma"))
    assert code == 2 and "cannot read" in err
