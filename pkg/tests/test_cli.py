from fltl.cli import main
from fltl.minsky import format_machine


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def machine_file(tmp_path, machine):
    path = tmp_path / "machine.mm"
    path.write_text(format_machine(machine))
    return str(path)


def test_eval_true_and_false(capsys):
    code, out = run(capsys, "eval", "a U{1/2} b", "c b a a b b ; c")
    assert code == 0
    assert "true" in out.splitlines()
    code, out = run(capsys, "eval", "a U{3/4} b", "c b a a b b ; c")
    assert code == 1
    assert "false" in out.splitlines()
    code, out = run(capsys, "eval", "true", "x ; x")
    assert code == 0


def test_eval_witness_and_table(capsys):
    code, out = run(capsys, "eval", "a U{1/2} b", "c b a a b b ; c", "--witness")
    assert code == 0
    assert "witness: j=4 count=2 threshold=2/1" in out
    code, out = run(capsys, "eval", "a U{1/2} b", "c b a a b b ; c", "--table")
    assert "table: FTFFTTF  b" in out
    assert any(line.startswith("table: ") for line in out.splitlines())


def test_eval_parse_error_exit_code(capsys):
    assert main(["eval", "a U{3/2} b", "a ; b"]) == 2
    assert main(["eval", "a &", "a ; b"]) == 2
    assert main(["eval", "a", "a b"]) == 2  # missing word separator


def test_eval_formula_from_file(tmp_path, capsys):
    path = tmp_path / "phi.fltl"
    path.write_text("a U{1/2} b\n")
    code, out = run(capsys, "eval", str(path), "c b a a b b ; c")
    assert code == 0


def test_simulate(machine, tmp_path, capsys):
    mfile = machine_file(tmp_path, machine)
    code, out = run(capsys, "simulate", mfile, "t1", "t2", "t3", "t4", "t5", "t6")
    assert code == 0
    assert "(1,2)" in out
    assert "successful: yes" in out
    code, out = run(capsys, "simulate", mfile, "t2")
    assert code == 1
    assert "invalid computation" in out


def test_encode_decode_check_pipeline(machine, tmp_path, capsys):
    mfile = machine_file(tmp_path, machine)
    code, out = run(capsys, "encode", mfile, "--search", "10", "4")
    assert code == 0
    word = out.strip().splitlines()[-1]
    assert word.endswith("; #")

    code, out = run(capsys, "check", mfile, word)
    assert code == 0 and "true" in out

    code, decode_out = run(capsys, "decode", mfile, word)
    assert code == 0

    code, sim_out = run(capsys, "simulate", mfile, "t1", "t2", "t3", "t4", "t5", "t6")
    assert decode_out == sim_out  # pipeline identity

    # a mutated word is flagged by check and refused by decode
    broken = word.replace("$z", "$1")
    code, out = run(capsys, "check", mfile, broken)
    assert code == 1 and "false" in out
    code, out = run(capsys, "decode", mfile, broken)
    assert code == 1


def test_encode_with_ids(machine, tmp_path, capsys):
    mfile = machine_file(tmp_path, machine)
    code, out = run(capsys, "encode", mfile, "--ids", "t1", "t2", "t3", "t4", "t5", "t6")
    assert code == 0
    code, _ = run(capsys, "encode", mfile, "--ids", "t1", "t2")
    assert code == 1  # not successful
    assert main(["encode", mfile]) == 2  # neither --ids nor --search


def test_encode_search_exhausted(tmp_path, capsys):
    blocked = (
        "loc l0 l1 l2\ntrans t1 l0 dec1 l1\ntrans t2 l1 inc1 l2\n"
        "init t1\nfinal t2\n"
    )
    path = tmp_path / "blocked.mm"
    path.write_text(blocked)
    code, out = run(capsys, "encode", str(path), "--search", "8", "3")
    assert code == 1
    assert "no successful computation" in out


def test_decode_reports_violation(machine, tmp_path, capsys):
    mfile = machine_file(tmp_path, machine)
    _, out = run(capsys, "encode", mfile, "--search", "10", "4")
    tokens = out.strip().split()
    tokens.insert(5, "a")  # duplicate the first carryover letter
    code, out = run(capsys, "decode", mfile, " ".join(tokens))
    assert code == 1
    assert "kind=carryover i=1 expected=(1,0) actual=(2,0)" in out


def test_reduce_output_is_parseable(machine, tmp_path, capsys):
    from fltl.evaluator import models
    from fltl.reduction import build_alphabet, encode_computation
    from fltl.minsky import find_successful_computation
    from fltl.syntax import parse
    from fltl.words import parse_word

    mfile = machine_file(tmp_path, machine)
    code, out = run(capsys, "reduce", mfile)
    assert code == 0
    sigma = build_alphabet(machine)
    phi = parse(out.strip(), sigma)
    comp = find_successful_computation(machine, 10, 4)
    word = encode_computation(comp, machine).word
    assert models(word, phi, sigma)
    assert not models(parse_word("$0 a ; #"), phi, sigma)


def test_reduce_to_file(machine, tmp_path, capsys):
    mfile = machine_file(tmp_path, machine)
    out_path = tmp_path / "formula.fltl"
    code, _ = run(capsys, "reduce", mfile, "-o", str(out_path))
    assert code == 0
    assert out_path.read_text().strip()


def test_usage_errors(tmp_path, capsys):
    assert main(["decode", str(tmp_path / "missing.mm"), "a ; #"]) == 2
    bad = tmp_path / "bad.mm"
    bad.write_text("loc l0\ntrans t1 l0 warp l0\ninit t1\nfinal t1")
    assert main(["check", str(bad), "a ; #"]) == 2


def test_selftest_small_budget_passes(capsys):
    code, out = run(capsys, "selftest", "--seed", "42", "--budget", "small")
    assert code == 0
    assert "FAILED" not in out
    for needle in (
        "letter-balance implications",
        "evaluator-vs-brute-force",
        "shape formula vs membership checker",
        "encode/decode round trip",
        "block mutations are killed and blamed",
    ):
        assert needle in out


def test_selftest_reports_counterexamples(capsys, monkeypatch):
    from fltl.campaigns import SuiteResult

    broken = SuiteResult("forced", checked=1)
    broken.record(False, "synthetic counterexample")
    monkeypatch.setattr(
        "fltl.campaigns.selftest_suites", lambda seed, budget: [broken]
    )
    code, out = run(capsys, "selftest")
    assert code == 3
    assert "synthetic counterexample" in out


def test_determinism(machine, tmp_path, capsys):
    mfile = machine_file(tmp_path, machine)
    outputs = set()
    for _ in range(2):
        _, out = run(capsys, "eval", "a U{1/2} b", "c b a a b b ; c", "--table", "--witness")
        outputs.add(out)
    assert len(outputs) == 1
    for _ in range(2):
        _, out = run(capsys, "reduce", mfile)
        outputs.add(out)
    assert len(outputs) == 2
