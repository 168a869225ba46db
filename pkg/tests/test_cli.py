import json
import subprocess
import sys
from pathlib import Path

import pytest

from kaninj.cli import ERROR, FALSE, OK, main, parse_workspace, run_command
from kaninj.errors import ParseError, ValidationError

SHAPES = str(Path(__file__).parent / "data" / "shapes.txt")


@pytest.fixture(scope="module")
def env():
    return parse_workspace([SHAPES])


def run(env, line):
    return run_command(env, line.split())


# workspaces ----------------------------------------------------------------------------------


def test_workspace_contents(env):
    assert {"V", "diamond", "emb_2_V", "collapse"} <= set(env)
    assert env.ends["f_ab"] == ("antichain2", "diamond")


def test_single_poset_file(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text("poset V { elements: a b t ; order: a<t b<t }\n")
    assert list(parse_workspace([p])) == ["V"]


def test_workspace_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("poset P { elements: a b ; order: a<b }\nmap f : P -> P { a->b b->a }\n")
    with pytest.raises(ValidationError):
        parse_workspace([bad])
    twice = tmp_path / "twice.txt"
    twice.write_text("poset P { elements: a }\n")
    with pytest.raises(ValidationError):
        parse_workspace([twice, twice])
    broken = tmp_path / "broken.txt"
    broken.write_text("poset P { elements: a ; order: a<b \n")
    with pytest.raises(ParseError) as info:
        parse_workspace([broken])
    assert "broken.txt" in str(info.value) and info.value is not None


def test_maps_may_refer_across_files(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    a.write_text("map g : Q -> Q { x->x }\n")
    b.write_text("poset Q { elements: x }\n")
    assert set(parse_workspace([a, b])) == {"Q", "g"}


# golden commands ---------------------------------------------------------------------------


GOLDEN = [
    ("check diamond -H emb_2_V", OK),
    ("check antichain2 -H emb_2_V", FALSE),
    ("check V -H collapse --side weak-left", OK),
    ("check V -H collapse", FALSE),
    ("check V -H emb_2_V --side right", OK),
    ("check id2 -H emb_2_V", FALSE),
    ("lan -h emb_2_V -f f_ab", OK),
    ("lan -h emb_2_V -f id2", FALSE),
    ("lan -h emb_2_V -f f_ab --right", OK),
    ("lan -h collapse -f f_ab --weak", OK),
    ("lan -h collapse -f f_ab", FALSE),
    ("reflect antichain2 -H emb_2_V", OK),
    ("reflect antichain2 -H collapse --weak", OK),
    ("reflect antichain2 -H emb_2_V --budget 2", ERROR),
    ("colimit inserter id2 sym", OK),
    ("colimit coinserter id2 sym", OK),
    ("colimit pushout emb_2_V id2", OK),
    ("colimit cocomma collapse collapse", OK),
    ("colimit product V one", OK),
    ("colimit coproduct V one", OK),
    ("monad laws V", OK),
    ("monad kz diamond", OK),
    ("monad algebra diamond", OK),
    ("monad algebra antichain2", FALSE),
    ("verify antichain2 -H emb_2_V --targets V,diamond,chain3,one", OK),
    ("verify diamond -H emb_2_V --targets V,diamond --unit f_ab", ERROR),
    ("bogus", ERROR),
    ("check nothing -H emb_2_V", ERROR),
    ("check V -H diamond", ERROR),
    ("colimit inserter id2", ERROR),
    ("verify V -H emb_2_V --targets antichain2", ERROR),
    ("", ERROR),
]


@pytest.mark.parametrize("line, code", GOLDEN)
def test_exit_status_contract(env, line, code):
    text, got = run(env, line)
    assert got == code, text


def test_reflect_prints_the_reflection(env):
    text, code = run(env, "reflect antichain2 -H emb_2_V")
    assert code == OK
    assert "converged at stage 2" in text
    reflection = [line for line in text.splitlines() if line.startswith("poset R")][0]
    assert len(reflection.split(";")[0].split(":")[1].split()) == 3


def test_budget_report_names_the_error(env):
    text, code = run(env, "reflect antichain2 -H emb_2_V --budget 2")
    assert code == ERROR and "BudgetExceeded" in text


def test_check_shows_a_counterexample(env):
    text, _ = run(env, "check antichain2 -H emb_2_V")
    assert "emb_2_V: no  (f = a->a b->b" in text


def test_lan_report(env):
    text, _ = run(env, "lan -h emb_2_V -f f_ab")
    assert "Lan: a->a b->b t->top" in text and "restricts back to f: yes" in text


def test_algebra_witness(env):
    text, _ = run(env, "monad algebra antichain2")
    assert "{a b}" in text


# json --------------------------------------------------------------------------------------


def test_json_fields(env):
    text, code = run(env, "reflect antichain2 -H emb_2_V --json")
    data = json.loads(text)
    assert code == OK
    assert {"verdict", "counterexample", "stages", "converged_at"} <= set(data)
    assert data["verdict"] is True and data["converged_at"] == 2
    assert [s["size"] for s in data["stages"]][0] == 2


def test_json_on_failure(env):
    data = json.loads(run(env, "check antichain2 -H emb_2_V --json")[0])
    assert data["verdict"] is False and data["counterexample"] == "a->a b->b"
    data = json.loads(run(env, "reflect antichain2 -H emb_2_V --budget 2 --json")[0])
    assert data["error"] == "BudgetExceeded" and data["converged_at"] is None
    assert len(data["stages"]) == 3


def test_json_verify(env):
    data = json.loads(run(env, "verify antichain2 -H emb_2_V --targets V,diamond --json")[0])
    assert data["verdict"] is True and data["converged_at"] == 2


# traces and main ---------------------------------------------------------------------------------


def test_trace_dump(env, tmp_path):
    out = tmp_path / "trace"
    _, code = run(env, f"reflect antichain2 -H emb_2_V --dump-trace {out}")
    assert code == OK
    trace = (out / "trace.txt").read_text()
    assert trace.startswith("poset X0 { elements: a b ; order: }")
    assert "connect 0 1 :" in trace
    assert sorted(p.name for p in out.glob("*.dot")) == ["X0.dot", "X1.dot", "X2.dot", "X3.dot", "X4.dot"]


def test_trace_dump_on_budget_failure(env, tmp_path):
    out = tmp_path / "partial"
    _, code = run(env, f"reflect antichain2 -H emb_2_V --budget 2 --dump-trace {out}")
    assert code == ERROR and (out / "trace.txt").exists()


def test_main(capsys):
    assert main(["-w", SHAPES, "check", "diamond", "-H", "emb_2_V"]) == OK
    assert "member (left): yes" in capsys.readouterr().out
    assert main(["-w", SHAPES, "reflect", "antichain2", "-H", "emb_2_V", "--budget", "2"]) == ERROR
    assert "BudgetExceeded" in capsys.readouterr().err
    assert main(["-w", "/nonexistent/file.txt", "monad", "laws", "V"]) == ERROR
    assert main(["-w"]) == ERROR


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kaninj", "-w", SHAPES, "monad", "algebra", "antichain2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == FALSE and "no algebra structure" in proc.stdout
