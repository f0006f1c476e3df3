import json
import subprocess
import sys

import pytest

from conftest import JOIN, MEET
from lawvere.cli import main
from lawvere.documents import load_theory, theory_doc
from lawvere.rigs import bool2, mat_aff_theory, mat_theory
from lawvere.theories import equal_upto


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out) if out.strip() else None


@pytest.fixture
def ops(tmp_json):
    return {
        "join": tmp_json("join.json", {"carrier": 2, "arity": 2, "table": [0, 1, 1, 1]}),
        "and": tmp_json("and.json", {"carrier": 2, "arity": 2, "table": [0, 0, 0, 1]}),
        "or": tmp_json("or.json", {"carrier": 2, "arity": 2, "table": [0, 1, 1, 1]}),
        "proj": tmp_json("proj.json", {"carrier": 2, "arity": 2, "table": [0, 1, 0, 1]}),
        "neg": tmp_json("neg.json", {"carrier": 2, "arity": 1, "table": [1, 0]}),
    }


# --- kron and commutes -------------------------------------------------------------------------


def test_kron_join_twice(capsys, ops):
    code, doc = run_json(capsys, "kron", ops["join"], ops["join"], "--both")
    assert code == 0
    assert doc["product"]["arity"] == 4
    assert doc["product"]["table"] == [0] + [1] * 15
    assert doc["commute"] is True


def test_kron_text_output(capsys, ops):
    code, out, _ = run(capsys, "kron", ops["join"], ops["join"], "--both")
    assert code == 0
    assert "commute: true" in out


def test_commutes_and_or_has_witness(capsys, ops):
    code, out, _ = run(capsys, "commutes", ops["and"], ops["or"])
    assert code == 1
    assert "commute: false" in out
    code, doc = run_json(capsys, "commutes", ops["and"], ops["or"])
    w = doc["witness"]
    assert len(w) == 2 and len(w[0]) == 2


def test_projection_commutes_with_anything(capsys, ops):
    for other in ("join", "and", "neg", "proj"):
        code, out, _ = run(capsys, "commutes", ops["proj"], ops[other])
        assert code == 0
        assert "commute: true" in out


def test_kron_multi(capsys, tmp_json):
    a = tmp_json("a.json", {"carrier": 2, "in_arity": 2, "components": [{"arity": 2, "table": [0, 0, 0, 1]}]})
    b = tmp_json("b.json", {"carrier": 2, "in_arity": 2, "components": [{"arity": 2, "table": [0, 1, 1, 1]}]})
    code, doc = run_json(capsys, "kron", a, b, "--both")
    assert code == 0
    assert doc["commute"] is False
    assert len(doc["product"]["components"]) == 1


# --- theories ----------------------------------------------------------------------------------------


def test_commutant_builtin_counts(capsys):
    code, doc = run_json(capsys, "commutant", "--builtin", "mat:bool2", "--arity", "3")
    assert code == 0
    assert doc["arity_counts"] == [1, 2, 4, 8]
    code, doc = run_json(capsys, "commutant", "--builtin", "mat_aff:bool2", "--arity", "3")
    assert doc["arity_counts"] == [2, 3, 5, 9]


def test_commutant_of_empty_generators(capsys, tmp_json):
    path = tmp_json("empty.json", {"carrier": 2, "max_arity": 3, "generators": []})
    code, doc = run_json(capsys, "commutant", path)
    assert code == 0
    assert doc["arity_counts"] == [2, 4, 16, 256]


def test_theory_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "commutant", "--builtin", "mat_aff:bool2", "--arity", "3", "--json")
    doc = json.loads(out)
    T = load_theory(doc)
    assert equal_upto(T, load_theory(json.loads(json.dumps(theory_doc(T)))))
    path = tmp_path / "c.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "commutant", str(path), "--json")
    assert code == 0
    # the commutant of the commutant of mat_aff is mat_aff again
    assert json.loads(out2)["arity_counts"] == [0, 1, 3, 7]


@pytest.mark.parametrize("T", [mat_theory(bool2(), 3), mat_aff_theory(bool2(), 2)], ids=repr)
def test_theory_documents_round_trip(T):
    doc = json.loads(json.dumps(theory_doc(T)))
    back = load_theory(doc)
    assert equal_upto(back, T)
    assert back.max_arity == T.max_arity
    assert theory_doc(back) == theory_doc(T)


def test_generators_document(capsys, tmp_json):
    path = tmp_json("sl.json", {"carrier": 2, "max_arity": 3, "generators": [
        {"arity": 2, "table": [0, 1, 1, 1]}, {"arity": 0, "table": [0]}]})
    code, doc = run_json(capsys, "is-balanced", path)
    assert code == 0
    assert doc["balanced"] and doc["saturated"]


def test_is_commutative_exit_codes(capsys):
    assert run(capsys, "is-commutative", "--builtin", "mat:bool2")[0] == 0
    assert run(capsys, "is-commutative", "--builtin", "mat:UT2_F2", "--arity", "2")[0] == 1
    code, doc = run_json(capsys, "is-commutative", "--builtin", "clone:and,not", "--mode", "all")
    assert code == 1 and doc["commutative"] is False


def test_center(capsys):
    code, doc = run_json(capsys, "center", "--builtin", "clone:and,not")
    assert code == 0
    assert doc["arity_counts"] == [0, 1, 2, 3]


def test_is_balanced_reports_not_balanced(capsys):
    code, doc = run_json(capsys, "is-balanced", "--builtin", "projections:2")
    assert code == 1
    assert doc["balanced"] is False
    assert doc["saturated"] is True


def test_ambient(capsys):
    code, doc = run_json(capsys, "commutant", "--builtin", "clone:and", "--ambient", "mat:bool2", "--arity", "2")
    assert code == 0
    # 0, then 0 and x, then 0, x and y; the join does not commute with the meet
    assert doc["arity_counts"] == [1, 2, 3]


def test_output_is_deterministic(capsys):
    outs = set()
    for threads in ("1", "3"):
        for _ in range(2):
            code, out, _ = run(capsys, "commutant", "--builtin", "mat_aff:bool2", "--json", "--threads", threads)
            outs.add(out)
    assert len(outs) == 1


# --- monad and ring subcommands --------------------------------------------------------------------------


def test_monad_subcommands(capsys, tmp_json):
    code, doc = run_json(capsys, "monad", "apply", "--builtin", "mat:bool2", "--size", "2")
    assert code == 0 and len(doc["elements"]) == 4
    code, doc = run_json(capsys, "monad", "unit", "--builtin", "mat:bool2", "--size", "3", "--point", "2")
    assert doc["anchor"] == [2]
    assert run(capsys, "monad", "check", "--builtin", "mat:bool2")[0] == 0
    assert run(capsys, "monad", "check", "--builtin", "clone:and,not")[0] == 1
    code, doc = run_json(capsys, "monad", "commute", "--builtin", "clone:and", "--other", "clone:or")
    assert code == 1 and doc["commute"] is False and doc["theories_commute"] is False
    term = tmp_json("term.json", {"op": {"arity": 2, "table": [0, 1, 1, 1]}, "args": [
        {"op": {"arity": 0, "table": [0]}, "anchor": [], "size": 1},
        {"op": {"arity": 1, "table": [0, 1]}, "anchor": [0], "size": 1}]})
    code, doc = run_json(capsys, "monad", "mult", "--builtin", "mat:bool2", "--term", term)
    assert code == 0 and doc["op"]["table"] == [0, 1]
    code, doc = run_json(capsys, "monad", "kock", "--builtin", "mat:bool2", "--v", "2", "--w", "2", "--left", "3", "--right", "1")
    assert code == 0 and doc["equal"] is True


def test_ring_subcommands(capsys):
    code, doc = run_json(capsys, "ring", "center", "ring:M2_F2")
    assert code == 0 and doc["size"] == 2
    code, doc = run_json(capsys, "ring", "centralizer", "M2_F2", "--elements", "0,9")
    assert doc["size"] == 16
    code, doc = run_json(capsys, "ring", "end", "Z2xZ2")
    assert doc["size"] == 16 and doc["method"] == "structural"
    code, doc = run_json(capsys, "ring", "module-commutant", "matrix:M2_F2")
    assert doc["size"] == 2
    code, doc = run_json(capsys, "ring", "double-property", "matrix:M2_F2")
    assert code == 0 and doc["double_centralizer_property"] is True
    assert run(capsys, "ring", "double-property", "scalar:Z4:Z2")[0] == 1
    code, doc = run_json(capsys, "ring", "regular-opposite", "UT2_F2")
    assert code == 0 and doc["centralizer_size"] == 8
    assert run(capsys, "ring", "maximal", "M2_F2", "--elements", "0,9")[0] == 1


def test_ring_maximal_diagonal(capsys):
    from lawvere.rings import builtin_ring

    M = builtin_ring("M2_F2")
    e11 = M.labels.index("1,0;0,0")
    code, doc = run_json(capsys, "ring", "maximal", "M2_F2", "--elements", str(e11))
    assert code == 0 and doc["maximal_commutative"] is True and doc["size"] == 4


# --- verify-examples ----------------------------------------------------------------------------------


def test_verify_filter(capsys):
    code, doc = run_json(capsys, "verify-examples", "--filter", "galois")
    assert code == 0
    assert [c["name"] for c in doc["checks"]] == ["galois"]
    assert doc["checks"][0]["status"] == "pass"


def test_verify_no_match(capsys):
    code, out, _ = run(capsys, "verify-examples", "--filter", "nothing-matches-this")
    assert code == 1
    assert "no checks matched" in out


def test_verify_corrupt_builtin_fails_with_diff(capsys):
    code, doc = run_json(capsys, "verify-examples", "--filter", "mat2-balanced", "--corrupt-builtin", "bool2")
    assert code == 1
    check = doc["checks"][0]
    assert check["status"] == "fail"
    assert "arity" in check["details"]


# --- errors and exit codes ----------------------------------------------------------------------------


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "commutant")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "commutant", "--builtin", "mat:nonsense")[0] == 2
    assert run(capsys, "commutant", "--builtin", "bogus")[0] == 2
    missing = tmp_path / "missing.json"
    assert run(capsys, "commutes", str(missing), str(missing))[0] == 2


def test_parse_error_names_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"carrier": 2,\n "arity": }')
    code, _, err = run(capsys, "commutes", str(bad), str(bad))
    assert code == 2
    assert f"{bad}:2:" in err


def test_malformed_table(capsys, tmp_json):
    p = tmp_json("bad_table.json", {"carrier": 2, "arity": 2, "table": [0, 1, 2, 1]})
    code, _, err = run(capsys, "commutes", p, p)
    assert code == 2
    assert "table" in err


def test_intractable_exit_code(capsys):
    code, _, err = run(capsys, "commutant", "--builtin", "projections:3", "--arity", "3", "--node-budget", "100")
    assert code == 3
    assert "intractable at arity" in err
    code, _, _ = run(capsys, "commutant", "--builtin", "mat:bool2", "--strategy", "exhaustive", "--cap", "10")
    assert code == 3


def test_cap_environment_variable(capsys, monkeypatch):
    monkeypatch.setenv("CLONE_COMMUTANT_CAP", "10")
    code, _, err = run(capsys, "commutant", "--builtin", "mat:bool2", "--strategy", "exhaustive")
    assert code == 3
    code, doc = run_json(capsys, "commutant", "--builtin", "mat:bool2")
    assert code == 0 and doc["arity_counts"] == [1, 2, 4, 8]
    monkeypatch.setenv("CLONE_COMMUTANT_CAP", "1000")
    code, doc = run_json(capsys, "commutant", "--builtin", "mat:bool2", "--strategy", "exhaustive")
    assert code == 0


def test_module_entry_point(tmp_path):
    p = tmp_path / "join.json"
    p.write_text(json.dumps({"carrier": 2, "arity": 2, "table": list(JOIN.table)}))
    q = tmp_path / "meet.json"
    q.write_text(json.dumps({"carrier": 2, "arity": 2, "table": list(MEET.table)}))
    r = subprocess.run([sys.executable, "-m", "lawvere", "commutes", str(p), str(q)], capture_output=True, text=True)
    assert r.returncode == 1
    assert "commute: false" in r.stdout
