import hashlib
import importlib
import json

import pytest

from cli_cases import CASES, run_cli
from renormlab.cli import OP_TO_SUBCOMMAND, main
from renormlab.serialize import read_ppm

# library operations and where they live
OPS = {
    "maps": ["evaluate", "orbit", "turning_point"],
    "symbolic": [
        "itinerary",
        "covering_graph",
        "misiurewicz_certificate",
        "graph_entropy",
        "lap_entropy",
        "separation_count",
    ],
    "renorm": ["zero_entropy_dichotomy", "renorm_operator", "renorm_depth", "period_set_validator"],
    "periodic": ["localize_periodic", "find_periods", "superstable_parameters", "find_a_star"],
    "henon": [
        "henon_step",
        "classify_orbit_fate",
        "henon_periodic_orbits",
        "henon_cascade",
        "mild_dissipation",
        "attractor_sample",
    ],
    "prototype": [
        "build_prototype_chain",
        "chain_period_set",
        "adic_successor",
        "cylinder_frequency",
        "odometer_conjugacy_check",
    ],
    "kernels": ["bifurcation"],
}

GOLDEN_PPM = "4b68716817a4e46bcbdf29ce9247147d260c930bf0e4946b1bc9e240456e227f"


def test_every_op_has_exactly_one_subcommand():
    ops = [op for names in OPS.values() for op in names]
    for mod, names in OPS.items():
        m = importlib.import_module(f"renormlab.{mod}")
        for name in names:
            assert callable(getattr(m, name)), name
    assert sorted(OP_TO_SUBCOMMAND) == sorted(ops)
    subs = list(OP_TO_SUBCOMMAND.values())
    assert len(set(subs)) == len(subs)
    assert set(subs) == set(CASES)


@pytest.mark.parametrize("name", sorted(CASES))
def test_subcommand_runs(name):
    code, out, err = run_cli(CASES[name])
    assert code == 0, err
    assert out


def test_exit_code_input_error():
    code, out, err = run_cli(["orbit", "--a", "5", "--x0", "0.5", "--n", "3"])
    assert code == 2 and not out
    diag = json.loads(err.strip().splitlines()[-1])
    assert diag["error"] == "input_error"


def test_exit_code_numerical_failure():
    code, _, err = run_cli(["dichotomy", "--a", "3.9"])
    assert code == 3
    assert "entropy" in json.loads(err.strip().splitlines()[-1])["message"]


@pytest.mark.parametrize("argv", [["orbit", "--bogus", "1"], ["nonsense"], ["henon", "fly"]])
def test_unknown_input_rejected(argv):
    code, _, err = run_cli(argv)
    assert code == 2
    assert json.loads(err.strip().splitlines()[-1])["error"] == "input_error"


def test_help_shows_defaults(capsys):
    assert main(["bifurcation", "--help"]) == 0
    text = capsys.readouterr().out
    for flag, default in [("--a-min", "2.9"), ("--a-max", "4.0"), ("--width", "800"), ("--height", "600")]:
        assert flag in text and f"(default: {default})" in text


@pytest.mark.parametrize("name", sorted(CASES))
def test_help_every_option_has_default(name, capsys):
    assert main([*name.split(), "--help"]) == 0
    section = capsys.readouterr().out.split("options:")[1]
    # one block per option: its line plus wrapped continuation lines
    blocks = []
    for ln in section.splitlines():
        if ln.strip().startswith("-"):
            blocks.append(ln)
        elif blocks and ln.strip():
            blocks[-1] += " " + ln.strip()
    blocks = [b for b in blocks if "--help" not in b]
    assert blocks
    for b in blocks:
        assert "(default:" in b, b


def test_cascade_csv_first_row(tmp_path):
    out = tmp_path / "cascade.csv"
    code, _, _ = run_cli(["cascade", "--family", "quadratic", "--levels", "8", "--format", "csv"], out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,a_n,delta_n"
    assert lines[1].split(",")[:2] == ["0", "2"]


def test_prototype_chain_json(tmp_path):
    out = tmp_path / "chain.json"
    assert run_cli(["prototype", "chain", "--k", "001"], out)[0] == 0
    data = json.loads(out.read_text())
    # figure 11 lists five orbits: periods 1, 2, 4, 12, 12
    assert data["periods"] == [1, 2, 4, 12, 12]


def test_bifurcation_ppm(tmp_path):
    out = tmp_path / "bif.ppm"
    argv = ["bifurcation", "--a-min", "2.9", "--a-max", "4.0", "--width", "800", "--height", "600"]
    assert run_cli(argv, out)[0] == 0
    data = out.read_bytes()
    assert data.startswith(b"P6\n800 600\n255\n")
    assert len(data) - len(b"P6\n800 600\n255\n") == 800 * 600 * 3
    w, h, pix = read_ppm(data)
    assert set(pix.reshape(-1, 3).sum(axis=1).tolist()) <= {0, 765}
    assert hashlib.sha256(data).hexdigest() == GOLDEN_PPM


def test_out_matches_stdout(tmp_path):
    out = tmp_path / "o.json"
    _, stdout, _ = run_cli(CASES["periods"])
    run_cli(CASES["periods"], out)
    assert out.read_bytes() == stdout


def test_backends_agree():
    for name in ("bifurcation", "entropy", "henon attractor"):
        a = run_cli(CASES[name])[1]
        b = run_cli(CASES[name], env={"RENORMLAB_NO_NUMBA": "1"})[1]
        assert a == b, name


def test_csv_not_available_for_json_only():
    code, _, err = run_cli(["dichotomy", "--a", "2.8", "--format", "csv"])
    assert code == 2
