"""Command-line surface: exit codes, JSON schemas, determinism."""

import json

import numpy as np
import pytest

import qwalk as qw
from qwalk import json_io
from qwalk.cli import main
from qwalk.sampling import random_walk_state


@pytest.fixture()
def cycle5_path(tmp_path):
    path = tmp_path / "cycle5.json"
    json_io.write_json(json_io.spec_to_dict(qw.cycle_shift(5)), str(path))
    return str(path)


@pytest.fixture()
def cycle4_path(tmp_path):
    path = tmp_path / "cycle4.json"
    json_io.write_json(json_io.spec_to_dict(qw.cycle_shift(4)), str(path))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_validate_ok(capsys, cycle5_path):
    code, out = run_cli(capsys, "validate", "--spec", cycle5_path)
    doc = json.loads(out)
    assert code == 0
    assert doc == {"schema": 1, "valid": True, "n": 5, "d": 2, "shift_order": 5}


def test_validate_bad_spec(capsys, tmp_path):
    path = tmp_path / "bad.json"
    json_io.write_json({"n": 4, "perms": [[0, 1, 2, 3], [1, 2, 3, 0]]}, str(path))
    code, out = run_cli(capsys, "validate", "--spec", str(path))
    doc = json.loads(out)
    assert code == 1
    assert doc["valid"] is False and doc["error"] == "SelfLoopError"


def test_missing_file_is_io_error(capsys):
    assert main(["analyze", "--spec", "/nonexistent/x.json"]) == 3


def test_unparsable_json_is_io_error(capsys, tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{not json")
    assert main(["analyze", "--spec", str(path)]) == 3


def test_analyze_report(capsys, cycle5_path):
    code, out = run_cli(capsys, "analyze", "--spec", cycle5_path)
    doc = json.loads(out)
    assert code == 0
    assert doc == {
        "schema": 1,
        "m": 1,
        "components": [[0, 1, 2, 3, 4]],
        "controllable": True,
        "predicted_lie_dim": 100,
        "kappa": 4,
        "step_bound": 13,
        "verdicts_agree": True,
    }


def test_analyze_uncontrollable_report(capsys, cycle4_path):
    code, out = run_cli(capsys, "analyze", "--spec", cycle4_path)
    doc = json.loads(out)
    assert code == 0  # criteria agree; not being controllable is not a failure
    assert doc["m"] == 2
    assert doc["components"] == [[0, 2], [1, 3]]
    assert doc["controllable"] is False
    assert doc["kappa"] is None and doc["step_bound"] is None


def test_output_is_byte_identical(capsys, cycle5_path):
    _, first = run_cli(capsys, "analyze", "--spec", cycle5_path)
    _, second = run_cli(capsys, "analyze", "--spec", cycle5_path)
    assert first == second


def test_reach_sets(capsys, cycle5_path):
    code, out = run_cli(capsys, "reach", "--spec", cycle5_path, "--node", "0", "--k", "4")
    doc = json.loads(out)
    assert code == 0
    assert doc["sets"][0] == [0]
    assert doc["sets"][1] == [1, 4]
    assert doc["sets"][4] == [0, 1, 2, 3, 4]


def test_lie_check(capsys, cycle4_path):
    code, out = run_cli(capsys, "lie-check", "--spec", cycle4_path)
    doc = json.loads(out)
    assert code == 0
    assert doc["dim"] == doc["predicted"] == 32
    assert doc["match"] is True and doc["block_diagonal_ok"] is True


def test_lie_check_cap(capsys, tmp_path):
    path = tmp_path / "torus.json"
    json_io.write_json(json_io.spec_to_dict(qw.torus(3, 3)), str(path))
    code, out = run_cli(capsys, "lie-check", "--spec", str(path))
    assert code == 1
    assert json.loads(out)["error"] == "CapExceededError"


def test_synthesize_then_simulate(capsys, tmp_path, cycle5_path):
    c5 = qw.cycle_shift(5)
    rng = np.random.default_rng(7)
    psi1 = qw.basis_state(c5, 0, 0)
    psi2 = random_walk_state(rng, c5)
    p1, p2 = tmp_path / "psi1.json", tmp_path / "psi2.json"
    json_io.write_json(json_io.state_to_dict(psi1), str(p1))
    json_io.write_json(json_io.state_to_dict(psi2), str(p2))
    seq_path = tmp_path / "seq.json"

    code, out = run_cli(
        capsys,
        "synthesize",
        "--spec", cycle5_path,
        "--state", str(p1),
        "--target", str(p2),
        "--out", str(seq_path),
    )
    doc = json.loads(out)
    assert code == 0
    assert doc["bound"] == 13
    assert len(doc["steps"]) <= 13
    assert doc["achieved_fidelity"] >= 1 - 1e-9

    code, out = run_cli(
        capsys,
        "simulate",
        "--spec", cycle5_path,
        "--state", str(p1),
        "--seq", str(seq_path),
    )
    sim = json.loads(out)
    assert code == 0
    final = json_io.state_from_dict(sim["state"])
    assert qw.state_fidelity(psi2, final) >= 1 - 1e-9
    expected = qw.position_probabilities(psi2)
    assert np.abs(np.array(sim["probabilities"]) - expected).max() < 1e-9


def test_synthesize_not_controllable(capsys, tmp_path, cycle4_path):
    c4 = qw.cycle_shift(4)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    json_io.write_json(json_io.state_to_dict(qw.basis_state(c4, 0, 0)), str(p1))
    json_io.write_json(json_io.state_to_dict(qw.basis_state(c4, 0, 1)), str(p2))
    code, out = run_cli(
        capsys, "synthesize", "--spec", cycle4_path, "--state", str(p1), "--target", str(p2)
    )
    assert code == 1
    assert json.loads(out)["error"] == "NotControllableError"


def test_simulate_figure1_uniform_spread(capsys, tmp_path):
    # replaying a three-step spread sequence spreads the walker uniformly
    fig = qw.figure1()
    target = qw.TargetSpread(tuple(range(6)), np.full(6, 1 / np.sqrt(6)))
    seq, _ = qw.spread_from_node(fig, 0, 0, target, 3)
    spec_path = tmp_path / "figure1.json"
    psi0_path = tmp_path / "psi0.json"
    seq_path = tmp_path / "seq.json"
    json_io.write_json(json_io.spec_to_dict(fig), str(spec_path))
    json_io.write_json(json_io.state_to_dict(qw.basis_state(fig, 0, 0)), str(psi0_path))
    json_io.write_json(json_io.sequence_to_dict(seq), str(seq_path))
    code, out = run_cli(
        capsys,
        "simulate",
        "--spec", str(spec_path),
        "--state", str(psi0_path),
        "--seq", str(seq_path),
    )
    assert code == 0
    probs = np.array(json.loads(out)["probabilities"])
    assert np.abs(probs - 1 / 6).max() < 1e-9


def test_replay_survives_rounded_coin_blocks(tmp_path):
    # serialized coin blocks are rounded to 12 significant digits; replaying
    # many such steps must not drift the state norm past its tolerance
    c5 = qw.cycle_shift(5)
    rng = np.random.default_rng(20)
    state = qw.basis_state(c5, 0, 0)
    from qwalk.sampling import random_coin_op

    for _ in range(40):
        coin = json_io.coin_from_list(json_io.coin_to_list(random_coin_op(rng, c5)))
        state = qw.step(state, coin, c5)
    assert abs(np.linalg.norm(state.amps) - 1) < 1e-12


def test_json_round_trips(tmp_path):
    fig = qw.figure1()
    assert json_io.spec_from_dict(json_io.spec_to_dict(fig)).adjacency.tolist() == (
        fig.adjacency.tolist()
    )
    rng = np.random.default_rng(0)
    state = random_walk_state(rng, fig)
    back = json_io.state_from_dict(json_io.state_to_dict(state))
    assert np.abs(back.amps - state.amps).max() < 1e-11
    target = qw.TargetSpread(tuple(range(6)), np.full(6, 1 / np.sqrt(6)))
    seq, _ = qw.spread_from_node(fig, 0, 0, target, 3)
    seq2 = json_io.sequence_from_dict(json_io.sequence_to_dict(seq))
    assert seq2.meta == seq.meta
    out1 = qw.apply_sequence(qw.basis_state(fig, 0, 0), seq, fig)
    out2 = qw.apply_sequence(qw.basis_state(fig, 0, 0), seq2, fig)
    assert qw.state_fidelity(out1, out2) > 1 - 1e-9


def test_demo_passes_cross_checks(capsys):
    code, out = run_cli(capsys, "demo", "--seed", "0")
    assert code == 0
    assert "all cross-checks passed" in out
    assert "figure1 reachable from 0 in exactly 3 steps: [0, 1, 2, 3, 4, 5]" in out


def test_out_flag_writes_file(capsys, tmp_path, cycle5_path):
    out_path = tmp_path / "report.json"
    _, printed = run_cli(capsys, "analyze", "--spec", cycle5_path, "--out", str(out_path))
    assert out_path.read_text() == printed
