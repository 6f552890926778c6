import json

import pytest

from boolgames.cli import run
from boolgames.game import parse_game, profile_from_json
from boolgames.reductions import immediate_acceptor

MP_TEXT = """\
players: 2
vars 1: x
vars 2: y
goal 1: ~(x <-> y)
goal 2: x <-> y
"""

BOS_JSON = json.dumps(
    {"payoffs": [[[3, 0], [0, 2]], [[2, 0], [0, 3]]]}
)


@pytest.fixture
def mp_file(tmp_path):
    path = tmp_path / "mp.bg"
    path.write_text(MP_TEXT)
    return str(path)


@pytest.fixture
def bos_file(tmp_path):
    path = tmp_path / "bos.nf"
    path.write_text(BOS_JSON)
    return str(path)


@pytest.fixture
def machine_file(tmp_path):
    path = tmp_path / "acc.json"
    path.write_text(immediate_acceptor().to_json())
    return str(path)


def run_json(argv, capsys, expect_code=0):
    code = run(argv)
    out = capsys.readouterr().out
    assert code == expect_code, out
    return json.loads(out)


def test_value(mp_file, capsys):
    data = run_json(["value", "--game", mp_file], capsys)
    assert data["value"] == "1/2"


def test_check(mp_file, capsys):
    data = run_json(["check", "--game", mp_file], capsys)
    assert data["ok"] and data["players"] == 2


def test_nash_unique_answers_match_exit_codes(mp_file, bos_file, capsys):
    data = run_json(["nash", "unique", "--game", mp_file], capsys, 0)
    assert data["answer"] == "yes"
    data = run_json(["nash", "unique", "--game", bos_file], capsys, 1)
    assert data["answer"] == "no"


def test_nash_find_and_guarantee(bos_file, capsys):
    data = run_json(["nash", "find", "--game", bos_file], capsys)
    assert data["answer"] == "yes" and data["witness"] is not None
    data = run_json(["nash", "guarantee", "--game", bos_file,
                     "--payoffs", "4,0"], capsys, 1)
    assert data["answer"] == "no"


def test_nash_pure(bos_file, capsys):
    data = run_json(["nash", "pure", "--game", bos_file], capsys)
    assert data["equilibria"] == [[0, 0], [1, 1]]


def test_normal_form_payoffs_as_strings(mp_file, capsys):
    data = run_json(["normal-form", "--game", mp_file], capsys)
    assert data["shape"] == [2, 2]
    assert data["payoffs"][0][0][0] == "0"


def test_eval_formula(capsys):
    data = run_json(["eval", "--formula", "p -> q", "--assign", "p=1,q=1"],
                    capsys)
    assert data["value"] is True


def test_gadget_build_artifact_reparses(capsys):
    data = run_json(["gadget", "build", "--value", "2/5"], capsys)
    g = parse_game(data["game"])
    assert g.players == 2
    # bundled equilibrium re-validates against the re-parsed game
    profile_from_json(json.dumps(data["equilibrium"]), g)
    assert data["value"] == "2/5"


def test_encode_output_reparses(capsys):
    from boolgames.formula import parse_formula
    data = run_json(["encode", "less", "--width", "3", "--args", "x,y"],
                    capsys)
    parse_formula(data["formula"])
    assert "x1" in data["vars"]


def test_reduce_emits_reparsable_artifacts(machine_file, tmp_path, capsys):
    out = str(tmp_path / "red")
    data = run_json(["reduce", "nexptm", "--machine", machine_file,
                     "--input", "", "--bound", "2", "--emit-witness",
                     "--out", out], capsys)
    assert data["v2"] == "7/16"
    g = parse_game(open(out + ".game").read())
    prof = profile_from_json(open(out + ".witness.json").read(), g)
    assert prof.players == 2
    json.loads(open(out + ".vars.json").read())


def test_verify_cover_matrix(capsys):
    data = run_json(["verify", "cover-matrix", "--m", "3"], capsys)
    assert data["answer"] == "yes"


def test_verify_squares_sampled_mode(machine_file, capsys):
    data = run_json(["verify", "squares", "--machine", machine_file,
                     "--bound", "2", "--trials", "300"], capsys)
    assert data["answer"] == "yes"
    assert data["mode"] == "sampled"


def test_nash_is_with_sample_flag(machine_file, tmp_path, capsys):
    out = str(tmp_path / "red")
    run_json(["reduce", "nexptm", "--machine", machine_file, "--bound", "2",
              "--emit-witness", "--out", out], capsys)
    data = run_json(["nash", "is", "--game", out + ".game",
                     "--profile", out + ".witness.json",
                     "--sample", "200"], capsys)
    assert data["answer"] == "yes" and data["mode"] == "sampled"


def test_transform_formula_verbatim(mp_file, capsys):
    data = run_json(["reduce", "transform", "--kind", "forall-nash-sat",
                     "--game", mp_file, "--payoffs", "1/2,1/2"], capsys)
    assert data["phi"] == "t.Play1 | t.Play2"
    parse_game(data["game"])


def test_usage_errors_exit_2(mp_file, capsys):
    assert run(["value", "--game", "/does/not/exist"]) == 2
    assert run(["value"]) == 2
    assert run(["nash", "bogus", "--game", mp_file]) == 2
    # unknown flags are errors
    assert run(["value", "--game", mp_file, "--frobnicate"]) == 2


def test_cap_exceeded_exits_3(tmp_path, capsys):
    path = tmp_path / "wide.bg"
    path.write_text("players: 2\nvars 1: a b c d e\nvars 2: f\n"
                    "goal 1: a\ngoal 2: f\n")
    assert run(["normal-form", "--game", str(path), "--cap-cells", "8"]) == 3


def test_text_format(mp_file, capsys):
    assert run(["value", "--game", mp_file, "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "value: 1/2" in out
