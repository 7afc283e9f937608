import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import polyfeq.verify as verify_mod
from polyfeq.cli import main
from polyfeq.verify import CLI_FIXTURES, cli_contract_cases, golden_specs

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def specdir(tmp_path):
    for name, text in {**golden_specs(), **CLI_FIXTURES}.items():
        (tmp_path / name).write_text(text)
    return tmp_path


def run(*argv):
    return subprocess.run([sys.executable, "-m", "polyfeq.cli", *map(str, argv)], capture_output=True, text=True)


def test_exit_code_contract(tmp_path, capsys):
    for argv, expected in cli_contract_cases(tmp_path):
        assert main(argv) == expected, argv


def test_subprocess_solve_text(specdir):
    p = run("solve", specdir / "knw_13_3.feq")
    assert p.returncode == 0
    assert "degree f <= 3\t3\tholds" in p.stdout
    assert "rank\t3" in p.stdout


def test_false_claim_exits_two(specdir):
    p = run("solve", specdir / "wilson_false_claim.feq")
    assert p.returncode == 2
    assert "degree f1 <= 0\t0\tFAILS" in p.stdout


def test_missing_file_and_parse_error(specdir):
    assert run("solve", specdir / "nope.feq").returncode == 1
    (specdir / "bad.feq").write_text("group G = Z5;\nhom c : G -> G = [[2, 0]];\n")
    p = run("solve", specdir / "bad.feq")
    assert p.returncode == 1
    assert "2:18: shape error" in p.stderr


@pytest.mark.parametrize("name", ["knw_13_3", "wilson_false_claim", "cube_split_z7"])
def test_json_report_matches_golden(specdir, name, capsys):
    main(["solve", "--json", str(specdir / f"{name}.feq")])
    report = json.loads(capsys.readouterr().out)
    assert list(report)[-1] == "timing"
    report.pop("timing")
    assert report == json.loads((GOLDEN / f"{name}.json").read_text())


def test_json_is_deterministic(specdir, capsys):
    outs = []
    for _ in range(2):
        main(["solve", "--json", str(specdir / "lsd_z5.feq")])
        rep = json.loads(capsys.readouterr().out)
        rep.pop("timing")
        outs.append(json.dumps(rep))
    assert outs[0] == outs[1]


def test_degree_command(specdir, capsys):
    assert main(["degree", str(specdir / "square_z5.feq"), "--fn", "sq"]) == 0
    assert "degree\t2" in capsys.readouterr().out
    assert main(["degree", str(specdir / "square_z5.feq"), "--fn", "one", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["degree"] == 0
    main(["degree", str(specdir / "square_z5.feq"), "--fn", "zero"])
    assert "minus-infinity" in capsys.readouterr().out


def test_decompose_command(specdir, capsys):
    assert main(["decompose", str(specdir / "identity_z2.feq"), "--fn", "id", "--order", "1"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "part\tvalues"
    assert main(["decompose", str(specdir / "square_z3.feq"), "--fn", "sq", "--order", "1"]) == 0
    assert capsys.readouterr().out.strip() == "none"
    assert main(["decompose", str(specdir / "identity_z2.feq"), "--fn", "id", "--order", "5"]) == 1
    assert "above the bound" in capsys.readouterr().err


def test_figure_output(specdir, tmp_path):
    fig = tmp_path / "out" / "degrees.png"
    assert main(["solve", str(specdir / "wilson_false_claim.feq"), "--figure", str(fig)]) == 2
    assert fig.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_verify_single_suite_and_unknown(capsys):
    assert main(["verify", "--suite", "knw,attainment"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 2 and all(line.startswith("[PASS]") for line in out)
    assert main(["verify", "--suite", "unknown"]) == 1


def test_verify_detects_corrupted_linear_algebra(monkeypatch, capsys):
    real_solve = verify_mod.solve

    def corrupted(sys):
        cs = real_solve(sys)
        if cs.particular is not None:
            object.__setattr__(cs, "particular", (cs.particular + 1) % np.array(sys.value_group.moduli))
        return cs

    monkeypatch.setattr(verify_mod, "solve", corrupted)
    assert main(["verify", "--suite", "linalg-oracle"]) == 2
    assert capsys.readouterr().out.startswith("[FAIL]")


def test_usage_errors_exit_one(capsys):
    assert main([]) == 1
    assert main(["solve"]) == 1
    assert main(["degree", "x.feq"]) == 1
    assert main(["--help"]) == 0
