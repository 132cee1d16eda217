import json

import pytest

from afflang.cli import main
from afflang.library import corpus_names, corpus_text


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", corpus_names())
def test_check_corpus(capsys, name):
    code, out, _ = run_cli(capsys, "check", f"examples/{name}")
    assert code == 0 and out.startswith("ok: ")


def test_run_flip_loop(capsys):
    assert run_cli(capsys, "run", "examples/flip_loop.afl", "--fuel", "100")[:2] == (0, "b = ff\n")


def test_run_out_of_fuel(capsys):
    assert run_cli(capsys, "run", "diverge.afl", "--fuel", "50")[:2] == (2, "OUT_OF_FUEL\n")


def test_denote(capsys):
    assert run_cli(capsys, "denote", "flip_loop.afl", "--fuel", "12")[:2] == (2, "BOTTOM\n")
    assert run_cli(capsys, "denote", "flip_loop.afl", "--fuel", "2", "--unit", "unfoldings")[:2] == (0, "b = ff\n")


@pytest.mark.parametrize("name", [n for n in corpus_names() if n != "diverge.afl"])
def test_run_and_denote_print_the_same_store(capsys, name):
    ran = run_cli(capsys, "run", name)
    denoted = run_cli(capsys, "denote", name)
    assert ran[0] == denoted[0] == 0
    assert ran[1] == denoted[1]


def test_records_format(capsys):
    code, out, _ = run_cli(capsys, "run", "flip_loop.afl", "--format", "records")
    assert code == 0
    assert json.loads(out) == {"store": {"b": "ff"}, "status": "terminated", "steps": 13}


def test_trace(capsys):
    code, out, _ = run_cli(capsys, "trace", "flip_loop.afl")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 14
    assert lines[-1] == "(skip | {b = ff})"
    code, out, _ = run_cli(capsys, "trace", "diverge.afl", "--fuel", "5", "--format", "records")
    assert code == 2 and [json.loads(x)["step"] for x in out.splitlines()] == list(range(6))


def test_enumerate(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "mu X. I + X", "--size-bound", "7")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = run_cli(capsys, "enumerate", "bit", "--size-bound", "2")
    assert out.splitlines() == ["ff", "tt"]
    code, out, _ = run_cli(capsys, "enumerate", "List(bit)", "--file", "list_bit.afl", "--size-bound", "8")
    assert code == 0 and len(out.splitlines()) == 3


def test_verify(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "discardability", "--seed", "7")
    assert code == 0
    assert "[PASS] discardability" in out and " 0 failures" in out


def test_verify_records(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "fold-unfold", "--format", "records")
    recs = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and recs[-1]["summary"]["passed"] is True
    assert all(r["ok"] for r in recs[:-1])


def test_type_error(capsys, tmp_path):
    f = tmp_path / "bad.afl"
    f.write_text("input x : I;\nnew unit x")
    code, _, err = run_cli(capsys, "check", str(f))
    assert code == 1 and "[E002]" in err and ":2:1:" in err


def test_missing_input_value(capsys, tmp_path):
    f = tmp_path / "noval.afl"
    f.write_text("input x : I;\ndiscard x")
    assert run_cli(capsys, "check", str(f))[0] == 0
    code, _, err = run_cli(capsys, "run", str(f))
    assert code == 1 and "[E008]" in err


def test_parse_error(capsys, tmp_path):
    f = tmp_path / "bad.afl"
    f.write_text("y = left x")
    code, _, err = run_cli(capsys, "check", str(f))
    assert code == 65 and "1:10" in err


def test_usage_errors(capsys):
    assert run_cli(capsys)[0] == 64
    assert run_cli(capsys, "frobnicate")[0] == 64
    assert run_cli(capsys, "run", "x.afl", "--fuel", "many")[0] == 64
    assert run_cli(capsys, "run", "flip_loop.afl", "--fuel", "-1")[0] == 64
    assert run_cli(capsys, "verify", "--suite", "nope")[0] == 64
    assert run_cli(capsys, "enumerate", "X")[0] == 64
    assert run_cli(capsys, "--help")[0] == 0


def test_missing_file(capsys):
    assert run_cli(capsys, "check", "no/such/file.afl")[0] == 66


def test_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(corpus_text("swap")))
    assert run_cli(capsys, "run", "-")[:2] == (0, "p = (*, tt)\n")
