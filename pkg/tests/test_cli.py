import json
import math
from fractions import Fraction

import click
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from kampe.cli import PARAM_NAMES, main, parse_scalar
from kampe.kdf import KdFParams, eval_kdf

from conftest import eighths

RES1_FLAGS = "--a 1 --b 2 --c 1 --e 4 --a-p 4 --b-p 3 --c-p -1 --e-p 5 --d 5".split()


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_scalar():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-2") == -2
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert parse_scalar("1+2j") == 1 + 2j
    with pytest.raises(click.BadParameter):
        parse_scalar("abc")


def test_eval_kdf_plain_and_json(capsys):
    code, out, _ = run(capsys, "eval-kdf", *RES1_FLAGS)
    assert code == 0
    assert float(out.split()[1]) == pytest.approx(0.6, abs=1e-10)
    code, out, _ = run(capsys, "eval-kdf", *RES1_FLAGS, "--json")
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "converged"
    assert rec["value"][0] == pytest.approx(0.6, abs=1e-10)


def test_eval_kdf_exact(capsys):
    flags = "--a 1 --b 2 --c -1 --e 3 --a-p 4 --b-p 3 --c-p 0 --e-p 5 --d 5".split()
    code, out, _ = run(capsys, "eval-kdf", *flags, "--json")
    rec = json.loads(out)
    assert code == 0
    assert Fraction(rec["value"]) == Fraction(13, 15)
    assert rec["status"] == "terminated_exactly"


def test_eval_kdf_exit_codes(capsys):
    bad_pole = RES1_FLAGS[:6] + ["--e", "-2"] + RES1_FLAGS[8:]
    assert run(capsys, "eval-kdf", *bad_pole)[0] == 3
    # first margin zero: series diverges at (1, 1)
    div = "--a 1 --b 1 --c 1 --e 1 --a-p 1 --b-p 1 --c-p 1 --e-p 3 --d 2".split()
    assert run(capsys, "eval-kdf", *div)[0] == 2
    assert run(capsys, "eval-kdf", *RES1_FLAGS, "--x", "2")[0] == 3
    assert run(capsys, "eval-kdf", "--a", "1")[0] == 3
    assert run(capsys, "eval-kdf", *RES1_FLAGS, "--method", "bogus")[0] == 3


def test_eval_pfq(capsys):
    code, out, _ = run(capsys, "eval-pfq", "-n", "-2", "-n", "1", "-d", "3", "--json")
    assert code == 0 and json.loads(out)["value"] == "1/2"
    code, out, _ = run(capsys, "eval-pfq", "-n", "1/2", "-n", "1/3", "-d", "2")
    assert code == 0
    assert float(out.split()[1]) == pytest.approx(1.15959526696392836577, rel=1e-13)
    assert run(capsys, "eval-pfq", "-n", "1", "-n", "2", "-d", "-3")[0] == 3
    assert run(capsys, "eval-pfq", "-n", "1", "-n", "1", "-d", "2")[0] == 2


def test_verify_codes(capsys):
    assert run(capsys, "verify", "-i", "res1", *RES1_FLAGS)[0] == 0
    wrong = RES1_FLAGS[:12] + ["--c-p", "-2"] + RES1_FLAGS[14:]
    code, out, _ = run(capsys, "verify", "-i", "res1", *wrong)
    assert code == 4 and "c' = -c" in out + _
    assert run(capsys, "verify", "-i", "nope", *RES1_FLAGS)[0] == 3


def test_verify_exact(capsys):
    flags = "--a 1 --b 2 --c -1 --e -2 --a-p 4 --b-p 3 --c-p 0 --e-p 3 --d 5".split()
    assert run(capsys, "verify", "-i", "fi1", "--exact", *flags)[0] == 0
    complex_a = ["--a", "1+0j"] + flags[2:]
    assert run(capsys, "verify", "-i", "fi1", "--exact", *complex_a)[0] == 3


def test_sweep_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(capsys, "sweep", "-i", "kdf3", "--samples", "5", "--seed", "7", "--out", str(a))[0] == 0
    assert run(capsys, "sweep", "-i", "kdf3", "--samples", "5", "--seed", "7", "--out", str(b), "--jobs", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    records = [json.loads(line) for line in a.read_text().splitlines()]
    assert len(records) == 5
    assert list(records[0]) == ["identity", "params", "lhs", "rhs", "rel_err", "status", "terms_lhs", "message"]
    assert all(r["status"] == "ok" and r["rel_err"] <= 1e-9 for r in records)


def test_sweep_rejects_zero_samples(tmp_path, capsys):
    assert run(capsys, "sweep", "-i", "res1", "--samples", "0", "--out", str(tmp_path / "x"))[0] == 3


def test_list_identities(capsys):
    code, out, _ = run(capsys, "list-identities")
    assert code == 0
    heads = [line for line in out.splitlines() if line and not line.startswith(" ")]
    assert len(heads) == 14
    assert "a' = d - a" in out
    assert "N != 0" in out


# capsys is drained by run() on every example, so sharing it is safe
@settings(max_examples=15, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.lists(eighths(4, 40), min_size=9, max_size=9), eighths(1, 6), eighths(1, 6))
def test_printed_value_round_trips(capsys, params, x, y):
    kw = dict(zip(PARAM_NAMES, params))
    flags = [f for name, v in kw.items() for f in ("--" + name.replace("_", "-"), str(v))]
    code, out, _ = run(capsys, "eval-kdf", *flags, "--x", str(x), "--y", str(y))
    assert code == 0
    printed = float(out.split()[1])
    internal = complex(eval_kdf(KdFParams(**kw, x=x, y=y))).real
    # 16 significant digits: within one unit in the last printed place
    ulp = 10.0 ** (math.floor(math.log10(abs(internal))) - 15)
    assert abs(printed - internal) <= ulp
