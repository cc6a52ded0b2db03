import json

import pytest

from rpcalc.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_echoes_canonical(tmp_path, capsys):
    f = tmp_path / "in.pc"
    f.write_text("# comment\np=>q\np , q|-r\n")
    code, out, _ = run_cli(capsys, "parse", str(f))
    assert code == 0
    assert out.splitlines() == ["~p | q", "p, q |- r"]


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "in.pc"
    f.write_text("p &\n")
    code, _, err = run_cli(capsys, "parse", str(f))
    assert code == 2
    assert "error" in err


def test_eval(tmp_path, capsys, data_dir):
    code, out, _ = run_cli(
        capsys,
        "eval",
        str(data_dir / "formulas" / "validity.pc"),
        "--structure",
        str(data_dir / "structures" / "example.json"),
    )
    assert code == 0
    assert out.strip() == "1"


def test_sat_and_valid(tmp_path, capsys):
    f = tmp_path / "f.pc"
    f.write_text("R(p) & ~R(1)\n")
    code, out, _ = run_cli(capsys, "sat", str(f))
    assert code == 0
    assert out.splitlines()[0] == "SAT"
    witness = json.loads(out.splitlines()[1])
    assert witness == {"atoms": {"p": 0}, "oracle": ["0"]}

    g = tmp_path / "g.pc"
    g.write_text("0\n")
    code, out, _ = run_cli(capsys, "sat", str(g))
    assert code == 1
    assert out.strip() == "UNSAT"


def test_valid_on_shipped_example(capsys, data_dir):
    code, out, _ = run_cli(capsys, "valid", str(data_dir / "formulas" / "validity.pc"))
    assert code == 0
    assert out.strip() == "VALID"


def test_valid_negative(tmp_path, capsys):
    f = tmp_path / "f.pc"
    f.write_text("R(p)\n")
    code, out, _ = run_cli(capsys, "valid", str(f))
    assert code == 1
    assert out.splitlines()[0] == "INVALID"


def test_sat_pi1_exit_codes(tmp_path, capsys):
    f = tmp_path / "f.qpc"
    f.write_text("all s. ~R(s)\n")
    code, out, _ = run_cli(capsys, "sat-pi1", str(f))
    assert code == 0 and out.splitlines()[0] == "SAT"

    f.write_text("(all s. ~R(s)) & R(1)\n")
    code, out, _ = run_cli(capsys, "sat-pi1", str(f))
    assert code == 1 and out.strip() == "UNSAT"

    f.write_text("all a. all b. all c. (R(a, b) | ~R(b, c))\n")
    code, out, _ = run_cli(capsys, "sat-pi1", str(f), "--max-universal", "2")
    assert code == 3
    assert out.startswith("BUDGET_EXCEEDED")


def test_prove_check_roundtrip(tmp_path, capsys):
    seq = tmp_path / "s.sq"
    seq.write_text("|- (R(p) & R(~p)) => (R(q) | R(~q))\n")
    proof = tmp_path / "proof.json"
    stats = tmp_path / "stats.json"
    code, out, _ = run_cli(capsys, "prove", str(seq), "--out", str(proof), "--stats", str(stats))
    assert code == 0
    stats_data = json.loads(stats.read_text())
    assert set(stats_data) == {"counted_sequents", "cost", "bound", "max_line"}
    assert stats_data["counted_sequents"] <= stats_data["bound"]

    code, out, _ = run_cli(capsys, "check", str(proof))
    assert code == 0 and out.strip() == "OK"


def test_prove_invalid(tmp_path, capsys):
    seq = tmp_path / "s.sq"
    seq.write_text("R(p) |-\n")
    code, out, _ = run_cli(capsys, "prove", str(seq))
    assert code == 1
    assert out.splitlines()[0] == "INVALID"


def test_gprove_and_quantified_check(tmp_path, capsys):
    seq = tmp_path / "s.sq"
    seq.write_text("all x. R(x) |- R(0)\n")
    proof = tmp_path / "proof.json"
    code, _, _ = run_cli(capsys, "gprove", str(seq), "--out", str(proof), "--stats", "/dev/null")
    assert code == 0
    code, out, _ = run_cli(capsys, "check", str(proof), "--quantified")
    assert code == 0 and out.strip() == "OK"
    # without --quantified the checker rejects the quantifier rules
    code, out, _ = run_cli(capsys, "check", str(proof))
    assert code == 1


def test_check_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run_cli(capsys, "check", str(bad))
    assert code == 2


def test_check_shipped_axiom(capsys, data_dir):
    code, out, _ = run_cli(capsys, "check", str(data_dir / "proofs" / "axid.json"))
    assert code == 0 and out.strip() == "OK"


def test_compile_simulate_family_bench(tmp_path, capsys, data_dir):
    machine = str(data_dir / "machines" / "first1.json")
    out_f = tmp_path / "f.qpc"
    code, _, err = run_cli(
        capsys, "compile-tm", machine, "--input", "10", "--time-exp", "2", "--out", str(out_f)
    )
    assert code == 0
    summary = json.loads(err.strip().splitlines()[-1])
    assert summary["length"] > 0
    # the emitted file re-parses to a pi1 formula
    code, out, _ = run_cli(capsys, "parse", str(out_f))
    assert code == 0

    code, out, _ = run_cli(capsys, "simulate", machine, "--input", "10", "--max-steps", "8")
    assert code == 0
    assert "qacc" in out

    code, out, _ = run_cli(capsys, "simulate", machine, "--input", "0", "--max-steps", "8")
    assert code == 1 and out.strip() == "none"

    wf = tmp_path / "wphp.qpc"
    code, _, _ = run_cli(capsys, "family", "wphp", "--n", "2", "--out", str(wf))
    assert code == 0
    code, out, _ = run_cli(capsys, "parse", str(wf))
    assert code == 0

    code, out, _ = run_cli(capsys, "bench-size", machine, "--inputs", "4,8")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "n\tlength\tratio"
    assert len(rows) == 3


def test_family_unknown(capsys):
    code, _, err = run_cli(capsys, "family", "iter", "--n", "2")
    assert code == 2


def test_outputs_are_deterministic(tmp_path, capsys, data_dir):
    seq = tmp_path / "s.sq"
    seq.write_text("R(p & q) |- R(q & p)\n")
    outputs = []
    for _ in range(2):
        code, out, err = run_cli(capsys, "prove", str(seq))
        assert code == 0
        outputs.append((out, err))
    assert outputs[0] == outputs[1]


def test_version_lists_constants(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "d = 20" in out
    assert "E4" in out
    assert "c_alpha" in out
