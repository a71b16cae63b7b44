"""Command-line tool: golden outputs, exit codes and flag handling."""

import json

import pytest

from dpblogs.cli import main

from cli_cases import CASES, check_case, run_case


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_golden(case, tmp_path):
    check_case(case, tmp_path)


def test_reruns_are_byte_identical(tmp_path):
    case = next(c for c in CASES if c.name == "shuffle_two_steps")
    a = run_case(case, tmp_path)
    first = (tmp_path / "out.csv").read_bytes()
    b = run_case(case, tmp_path)
    assert a.stdout == b.stdout and first == (tmp_path / "out.csv").read_bytes()


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_every_output_echoes_inputs(capsys):
    code, out, _ = _run(capsys, "compose", "--mode", "per-step", "--epsilon", "1", "--t", "5", "--delta-prime", "1e-5")
    assert code == 0
    assert json.loads(out)["inputs"] == {"epsilon": 1, "t": 5, "delta_prime": 1e-05}


def test_validation_errors_exit_one(capsys):
    code, _, err = _run(capsys, "compose", "--mode", "basic", "--epsilon", "-1", "--delta", "1e-6", "--t", "10")
    assert code == 1 and "epsilon" in err


def test_stray_flags_are_rejected(capsys):
    code, _, err = _run(capsys, "bounds", "--which", "mi", "--dims", "8", "--betas", "2", "--beta", "3")
    assert code == 1 and "--beta is not used" in err


def test_missing_mode_flag(capsys):
    code, _, err = _run(capsys, "compose", "--mode", "basic", "--epsilon", "1")
    assert code == 1 and "--t is required" in err


def test_train_requires_seed(capsys):
    code, _, err = _run(capsys, "train", "--dim", "4")
    assert code == 1 and "--seed" in err


def test_json_out_mirrors_stdout(capsys, tmp_path):
    dest = tmp_path / "o.json"
    code, out, _ = _run(capsys, "oracle", "--gradient", "1,2", "--block-size", "1", "--json-out", str(dest))
    assert code == 0 and dest.read_text() == out


def test_seed_must_fit_64_bits(capsys):
    code, _, err = _run(capsys, "train", "--dim", "2", "--seed", str(2**64))
    assert code == 1 and "seed" in err
