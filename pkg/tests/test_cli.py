import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nplop.cli import evaluate, load_golden, main, render_text
from nplop.registry import STRUCTURES, UnknownName, get_structure
from nplop.serialize import dumps, lincomb_document, parse_document

from . import strategies as gen

GOLDEN_TEXT = {
    "arrow-pi-global": " + ".join([
        "{1|3|4|2, 7|8|9|6|5}", "{1|3|4|2, 7|9|8|6|5}", "{1|3|4|2, 8|7|9|6|5}",
        "{3|1|4|2, 7|8|9|6|5}", "{3|1|4|2, 7|9|8|6|5}", "{3|1|4|2, 8|7|9|6|5}",
        "{3|4|1|2, 7|8|9|6|5}", "{3|4|1|2, 7|9|8|6|5}", "{3|4|1|2, 8|7|9|6|5}",
        "{3|4|2|1, 7|8|9|6|5}", "{3|4|2|1, 7|9|8|6|5}", "{3|4|2|1, 8|7|9|6|5}",
    ]),
    "exp-npl": "3 · {{2,3,4,5}}",
    "cycles-npl": "(2 3 4) + (2 4 3)",
    "pi-square": "{{2,4,5},{3}}",
    "pi-npl": "{{2,4},{3},{5}} + {{2,5},{3},{4}}",
    "arrow-pi-npl": "{1|3, 4|5} + {1|4|5, 3}",
    "permutations-npl": "2 · (2)(3 4)",
    "polymap-npl": "(2*x1_1^2)",
    "end-compose": "(2*x1_1*x3_1)",
}


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_manifest(tmp_path, checks):
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"checks": checks}))
    return str(path)


class TestEval:
    def test_golden_examples(self):
        examples = load_golden()
        assert {e["name"] for e in examples} == set(GOLDEN_TEXT)
        for e in examples:
            doc = evaluate(e["structure"], e["op"], e["input"], e.get("at"))
            assert render_text(doc) == GOLDEN_TEXT[e["name"]], e["name"]

    def test_exp_text(self, capsys):
        code, out, _ = run(["eval", "--structure", "exp", "--op", "npl", "--at", "1",
                            "--input", "[[1,2],[3,4,5]]", "--format", "text"], capsys)
        assert code == 0
        assert out == "3 · {{2,3,4,5}}\n"

    def test_exp_json(self, capsys):
        code, out, _ = run(["eval", "--structure", "exp", "--op", "npl", "--at", "1",
                            "--input", "[[1,2],[3,4,5]]"], capsys)
        assert code == 0
        assert json.loads(out) == {"structure": "exp", "terms": [{"coeff": "3", "term": [2, 3, 4, 5]}]}

    def test_cycles_text(self, capsys):
        code, out, _ = run(["eval", "--structure", "cycles", "--op", "npl", "--at", "1",
                            "--input", "[[1,2],[3,4]]", "--format", "text"], capsys)
        assert (code, out) == (0, "(2 3 4) + (2 4 3)\n")

    def test_input_from_file(self, tmp_path, capsys):
        path = tmp_path / "in.json"
        path.write_text("[[1, 2], [3]]")
        code, out, _ = run(["eval", "--structure", "com+", "--op", "compose", "--at", "2",
                            "--input", str(path), "--format", "text"], capsys)
        assert (code, out) == (0, "*{1,3}\n")

    def test_other_ops(self):
        assert render_text(evaluate("cycles", "lin", [[1, 2, 3]])) == "1|2|3 + 2|3|1 + 3|1|2"
        assert render_text(evaluate("as+", "cyc", [[3, 1, 2]])) == "(1 2 3)"
        assert render_text(evaluate("as+", "shuffle", [[1, 2], [3]])) == "1|2|3 + 1|3|2 + 3|1|2"
        assert render_text(evaluate("pi", "unit", [], at=4)) == "{{4}}"
        assert render_text(evaluate("pi", "transport", [[[1, 2], [3]], {"1": 5, "2": 6, "3": 7}])) == "{{5,6},{7}}"
        assert render_text(evaluate("pi", "global", {"pi": [[1], [2], [3]], "tau": [[[1], [2]], [[3]]]})) == \
            "{{1,2},{3}}"

    def test_free_commutative_ops(self):
        nested = {"pi": [[1, 2], [3]],
                  "outer": [{"block": [1, 3], "structure": [1, 3]}],
                  "inner": [{"block": [1], "structure": [1]}, {"block": [2], "structure": [2]},
                            {"block": [3], "structure": [3]}]}
        gamma = evaluate("E(com+)", "global", nested)
        assert len(gamma["terms"]) == 2
        folded = evaluate("E(com+)/concat-E", "global", nested)
        assert folded["terms"] == [{"coeff": "1", "term": [{"block": [1, 2, 3], "structure": [1, 2, 3]}]}]
        npl = evaluate("E(com+)/concat-E", "npl", [[{"block": [1], "structure": [1]}],
                                                    [{"block": [2], "structure": [2]},
                                                     {"block": [3], "structure": [3]}]], at=1)
        assert npl["structure"] == "E(com+)"
        assert npl["terms"] == [{"coeff": "2", "term": [{"block": [2], "structure": [2]},
                                                         {"block": [3], "structure": [3]}]}]

    def test_polymap_ops(self):
        x = {"slots": [1], "dim": 1, "components": [[{"coeff": "1", "exponents": {"1.1": 1}}]]}
        sq = {"slots": [1], "dim": 1, "components": [[{"coeff": "1", "exponents": {"1.1": 2}}]]}
        assert render_text(evaluate("polymap", "prelie", [x, sq])) == "(2*x1_1^2)"
        assert render_text(evaluate("polymap", "evaluate", [sq, {"1": [3]}])) == "(9)"

    def test_output_is_byte_stable(self):
        cmd = [sys.executable, "-m", "nplop", "golden", "--format", "json"]
        first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
        second = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
        assert first == second
        assert first.count("\n") == len(GOLDEN_TEXT)


class TestErrors:
    def test_unknown_structure(self, capsys):
        code, _, err = run(["eval", "--structure", "nope", "--op", "npl", "--at", "1", "--input", "[]"], capsys)
        assert code == 2
        assert "unknown structure" in err

    def test_bad_json(self, capsys):
        code, _, err = run(["eval", "--structure", "exp", "--op", "npl", "--at", "1", "--input", "[[1,2]"], capsys)
        assert code == 2
        assert "JSON" in err

    def test_precondition_text_is_surfaced(self, capsys):
        code, _, err = run(["eval", "--structure", "com+", "--op", "compose", "--at", "2",
                            "--input", "[[1,2],[1]]"], capsys)
        assert code == 2
        assert "overlaps" in err

    def test_missing_point(self, capsys):
        code, _, err = run(["eval", "--structure", "exp", "--op", "npl", "--input", "[[1],[2]]"], capsys)
        assert code == 2
        assert "--at" in err

    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--structure", "exp"])
        assert exc.value.code == 2
        capsys.readouterr()

    def test_bad_manifest(self, tmp_path, capsys):
        path = write_manifest(tmp_path, [{"structure": "com+", "axiom": "A1", "expect": "maybe"}])
        code, _, err = run(["check", "--manifest", path], capsys)
        assert code == 2
        assert "expect" in err


class TestCheck:
    def test_empty_manifest(self, tmp_path, capsys):
        code, out, _ = run(["check", "--manifest", write_manifest(tmp_path, [])], capsys)
        assert code == 0
        assert out.strip() == "0 checks, 0 mismatches"

    def test_wrong_expectation_is_reported(self, tmp_path, capsys):
        path = write_manifest(tmp_path, [{"structure": "exp", "axiom": "A2", "expect": "pass", "max_size": 4}])
        code, out, _ = run(["check", "--manifest", path], capsys)
        assert code == 1
        assert "MISMATCH" in out
        assert "lhs - rhs = 2 · *{3,4}" in out

    def test_json_report(self, tmp_path, capsys):
        path = write_manifest(tmp_path, [
            {"structure": "exp", "axiom": "A2", "expect": "fail", "max_size": 4},
            {"structure": "com+", "axiom": "MU-COMPAT", "product": "concat-E", "expect": "pass", "max_size": 3},
        ])
        code, out, _ = run(["check", "--manifest", path, "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["mismatches"] == 0
        assert doc["checks"][0]["witness"]["difference"] == [{"coeff": "2", "term": [3, 4]}]

    def test_instance_cap_flag(self, tmp_path, capsys):
        path = write_manifest(tmp_path, [{"structure": "as+", "axiom": "A1", "expect": "pass"}])
        code, out, _ = run(["check", "--manifest", path, "--max-instances", "10"], capsys)
        assert code == 0
        assert "10 instances" in out and "[truncated]" in out

    def test_default_manifest(self, capsys):
        code, out, _ = run(["check", "--jobs", "4"], capsys)
        assert code == 0, out
        assert out.strip().endswith(" 0 mismatches")


class TestRegistry:
    @pytest.mark.parametrize("name", list(STRUCTURES) + ["E(com+)", "E(E(cycles))", "E(as+)/shuffle-L"])
    def test_names_resolve_to_themselves(self, name):
        P = get_structure(name)
        assert get_structure(P.name).name == P.name

    def test_parametrised_names(self):
        P = get_structure("polymap", dim=3, degree=1, average=False)
        assert P.name == "polymap[d=3,deg<=1][sum]"
        assert get_structure(P.name).dim == 3

    def test_unknown(self):
        with pytest.raises(UnknownName):
            get_structure("E(nope)")
        with pytest.raises(UnknownName):
            get_structure("E(com+)/nope")
        with pytest.raises(ValueError):
            get_structure("com+", dim=2)


# Canonicalisation oracles, written from the grammar rather than the classes.
def canon_set(xs):
    return sorted(xs)


def canon_partition(blocks):
    return sorted(sorted(b) for b in blocks)


def canon_cycle(seq):
    i = seq.index(min(seq))
    return seq[i:] + seq[:i]


def canon_chains(chains):
    return sorted((list(c) for c in chains), key=min)


GRAMMAR = [
    ("com+", gen.label_sets().map(list), canon_set),
    ("exp", gen.label_sets().map(list), canon_set),
    ("as+", gen.words(), list),
    ("cycles", gen.words(), canon_cycle),
    ("pi", gen.blocks(), canon_partition),
    ("arrow-pi", gen.blocks(), canon_chains),
    ("permutations", gen.blocks(), lambda bs: sorted((canon_cycle(b) for b in bs), key=min)),
    ("E(cycles)", gen.blocks(), None),
]


def monomial_payload(blocks):
    return [{"block": list(reversed(b)), "structure": list(b)} for b in reversed(blocks)]


@pytest.mark.parametrize("name, payloads, canon", GRAMMAR, ids=[g[0] for g in GRAMMAR])
@given(data=st.data())
def test_round_trip(name, payloads, canon, data):
    raw = data.draw(payloads)
    if canon is None:
        raw, expected = monomial_payload(raw), sorted(
            ({"block": sorted(b), "structure": canon_cycle(b)} for b in raw), key=lambda e: e["block"][0])
    else:
        expected = canon(raw)
    P, term = parse_document({"structure": name, "term": raw})
    out = {"structure": P.name, "term": term.to_json()}
    assert out == {"structure": name, "term": expected}
    assert parse_document(out)[1] == term


@given(st.lists(st.tuples(gen.words(), st.fractions(min_value=-3, max_value=3, max_denominator=5)), max_size=5))
def test_lincomb_round_trip(items):
    raw = [{"coeff": str(c), "term": w} for w, c in items]
    P, comb = parse_document({"structure": "as+", "terms": raw})
    doc = lincomb_document(P, comb)
    assert parse_document(doc)[1] == comb
    assert [e["term"] for e in doc["terms"]] == sorted(e["term"] for e in doc["terms"])
    assert dumps(doc) == dumps(lincomb_document(P, parse_document(json.loads(dumps(doc)))[1]))


def test_map_and_basis_documents():
    f = {"slots": [2, 1], "dim": 1, "components": [[{"coeff": "1/2", "exponents": {"1.1": 1, "2.1": 1}}]]}
    P, value = parse_document({"structure": "polymap", "map": f})
    assert value.to_json()["slots"] == [1, 2]
    basis = {"slots": [1], "out": 2, "exponents": {"1.2": 1}}
    _, term = parse_document({"structure": "end[d=2]", "term": basis})
    assert term.to_json() == basis


def test_document_errors():
    with pytest.raises(ValueError):
        parse_document({"term": [1]})
    with pytest.raises(ValueError):
        parse_document({"structure": "com+", "term": [1], "terms": []})
    with pytest.raises(ValueError):
        parse_document({"structure": "pi", "term": [[1, 2], [2]]})
