import json
import math
import re

import pytest

from cuephrase.cli import main
from cuephrase.corpus import dumps, load, with_judges, SyntheticSpec, generate
from cuephrase.baselines import classifier
from cuephrase.evaluator import error_rate
from cuephrase.learners import parse_model, render_model


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def synth(tmp_path, capsys):
    path = tmp_path / "synth.csv"
    code, out, _ = run(capsys, "gen", "--n", 400, "--labeler", "prosodic", "--noise", 0.1,
                       "--seed", 1, "--out", path)
    assert code == 0 and "400" in out
    return path


def test_baseline_sample_rows(tmp_path, capsys, sample_csv):
    path = tmp_path / "sample_rows.csv"
    path.write_text(sample_csv)
    code, out, _ = run(capsys, "baseline", "--model", "prosodic", "--in", path)
    assert code == 0
    assert "n=2 errors=0" in out
    assert re.findall(r"line (\S+): (\d+)", out) == [("1", "1"), ("6", "1")]


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        run(capsys, "gen", "--n", 50, "--labeler", "textual", "--noise", 0.3, "--seed", 9, "--out", p)
    assert a.read_bytes() == b.read_bytes()


def test_gen_with_rule_labeler(tmp_path, capsys):
    rules = tmp_path / "planted.txt"
    rules.write_text("if accent = L* then discourse\ndefault is sentential\n")
    out = tmp_path / "c.csv"
    code, _, _ = run(capsys, "gen", "--n", 60, "--labeler", f"rules:{rules}", "--out", out)
    assert code == 0
    assert all((e["A"] == "L*") == (e.label.value == "discourse") for e in load(out))


def test_crossval_deterministic(tmp_path, capsys, synth):
    outputs = []
    for name in ("r1.jsonl", "r2.jsonl"):
        report = tmp_path / name
        code, out, _ = run(capsys, "crossval", "--learner", "both", "--sets", "P-P,prosody",
                           "--in", synth, "--seed", 1, "--report", report)
        assert code == 0
        outputs.append((out, report.read_bytes()))
    assert outputs[0] == outputs[1]
    lines = outputs[0][0].splitlines()
    assert [ln.split()[:2] for ln in lines[1:]] == [
        ["P-P", "rules"], ["P-P", "tree"], ["prosody", "rules"], ["prosody", "tree"]]
    records = [json.loads(ln) for ln in outputs[0][1].decode().splitlines()]
    assert all(len(r["runs"]) == 10 for r in records)


def test_train_eval_within_crossval_band(tmp_path, capsys, synth):
    held_out = tmp_path / "held.csv"
    run(capsys, "gen", "--n", 400, "--labeler", "prosodic", "--noise", 0.1, "--seed", 2, "--out", held_out)
    model = tmp_path / "model.txt"
    code, _, _ = run(capsys, "train", "--learner", "rules", "--set", "position+", "--in", synth,
                     "--out", model, "--seed", 1)
    assert code == 0
    _, out, _ = run(capsys, "eval", "--model", model, "--in", held_out)
    held_err = float(re.search(r"error=([\d.]+)%", out).group(1)) / 100
    report = tmp_path / "r.jsonl"
    run(capsys, "crossval", "--learner", "rules", "--sets", "position+", "--in", synth,
        "--seed", 1, "--report", report)
    rec = json.loads(report.read_text())
    band = 3 * rec["stderr"] * math.sqrt(len(rec["runs"]))
    assert abs(held_err - rec["mean_error"]) <= band


@pytest.mark.parametrize("learner", ["tree", "rules"])
def test_model_file_round_trip(tmp_path, capsys, synth, learner):
    model = tmp_path / "m.txt"
    run(capsys, "train", "--learner", learner, "--set", "speech-text+", "--in", synth, "--out", model)
    parsed = parse_model(model.read_text())
    again = tmp_path / "again.txt"
    run(capsys, "train", "--learner", learner, "--set", "speech-text+", "--in", synth, "--out", again)
    assert model.read_bytes() == again.read_bytes()
    assert render_model(parsed) == model.read_text()
    _, out, _ = run(capsys, "eval", "--model", model, "--in", synth)
    direct = error_rate(parsed, load(synth))
    assert out.startswith(f"n=400 errors={direct.errors} ")
    code, text, _ = run(capsys, "explain", "--model", model)
    assert code == 0 and text.strip()


def test_explain_long_names(tmp_path, capsys):
    model = tmp_path / "m.txt"
    model.write_text("if p_pos >= 2 then sentential\ndefault is discourse\n")
    _, out, _ = run(capsys, "explain", "--model", model)
    assert "p_pos" not in out
    assert out.endswith("then sentential\ndefault is discourse\n")


def test_prepare(tmp_path, capsys):
    base = generate(SyntheticSpec(120, classifier("prosodic"), seed=3))
    judged = tmp_path / "judged.csv"
    judged.write_text(dumps(with_judges(base, 100, seed=1)))
    out = tmp_path / "prepared.csv"
    code, msg, _ = run(capsys, "prepare", "--in", judged, "--combine-judges", "--drop-conjuncts", "--out", out)
    assert code == 0
    c = load(out)
    assert len(c) <= 100
    assert not any(e["T"] in ("and", "or", "but") for e in c)
    assert f"wrote {len(c)} examples" in msg


def test_judged_corpus_needs_combining(tmp_path, capsys):
    base = generate(SyntheticSpec(20, classifier("prosodic"), seed=3))
    judged = tmp_path / "judged.csv"
    judged.write_text(dumps(with_judges(base, 10, seed=1)))
    code, _, err = run(capsys, "baseline", "--model", "majority", "--in", judged)
    assert code == 1 and "combine-judges" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["crossval", "--bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "eval", "--model", tmp_path / "nope.txt", "--in", tmp_path / "x.csv")
    assert code == 1
    assert len(err.strip().splitlines()) == 1


def test_bad_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("nonsense\n")
    code, _, err = run(capsys, "baseline", "--model", "textual", "--in", bad)
    assert code == 1 and "line 1" in err


def test_unknown_set(capsys, synth):
    code, _, err = run(capsys, "crossval", "--learner", "tree", "--sets", "nonsense", "--in", synth)
    assert code == 1 and "nonsense" in err
