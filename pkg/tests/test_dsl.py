import json
import random
from fractions import Fraction

import pytest

from cohoma import dsl
from cohoma.dsl import (AlgebraDecl, BinOp, Bracket, Call, Command, DerDecl, GenDecl, GenSpec, Imag, IndexDecl,
                        Int, Let, Neg, Pow, PresetDecl, Rational, Ref, Rule, Script, Sum)
from cohoma.errors import ScriptSyntaxError
from cohoma.session import execute, render_json

NAMES = ["x", "theta", "phi", "Q", "K", "f", "u", "A_h", "w'"]
VARS = ["a", "b", "c"]


def rand_ref(rng):
    name = rng.choice(NAMES)
    k = rng.randrange(4)
    if k == 0:
        return Ref(name)
    idx = tuple(rng.choice([rng.randrange(1, 5), rng.choice(VARS)]) for _ in range(rng.randrange(1, 3)))
    jet = tuple(rng.randrange(1, 5) for _ in range(rng.randrange(3))) if k == 3 else None
    return Ref(name, idx, jet)


def rand_expr(rng, depth=3):
    if depth == 0 or rng.random() < 0.3:
        k = rng.randrange(5)
        if k == 0:
            return Int(rng.randrange(10))
        if k == 1:
            q = rng.randrange(2, 7)
            return Rational(Fraction(rng.choice([p for p in range(1, 13) if p % q]), q))
        if k == 2:
            return Imag()
        return rand_ref(rng)
    k = rng.randrange(8)
    sub = lambda: rand_expr(rng, depth - 1)  # noqa: E731
    if k <= 2:
        return BinOp(rng.choice("+-*"), sub(), sub())
    if k == 3:
        return BinOp("/", sub(), rand_ref(rng))
    if k == 4:
        return Neg(sub())
    if k == 5:
        return Pow(rand_ref(rng), rng.randrange(1, 6))
    if k == 6:
        return Call(rand_ref(rng), tuple(sub() for _ in range(rng.randrange(3))))
    if rng.random() < 0.5:
        return Bracket(sub(), sub())
    vs = tuple((v, rng.choice([None, (1, rng.randrange(1, 5))])) for v in rng.sample(VARS, rng.randrange(1, 3)))
    return Sum(vs, sub())


def rand_degree(rng):
    return (rng.randrange(-2, 3), rng.randrange(-2, 3))


def rand_stmt(rng):
    k = rng.randrange(10)
    if k == 0:
        return AlgebraDecl(rng.choice(NAMES), rng.choice([None, "first", "second"]))
    if k == 1:
        return IndexDecl(tuple(rng.sample(VARS, rng.randrange(1, 3))), 1, rng.randrange(1, 5))
    if k == 2:
        specs = tuple(GenSpec(rng.choice(NAMES), tuple(rng.choice([rng.randrange(1, 4), ("a", 1, 3)])
                                                       for _ in range(rng.randrange(3))))
                      for _ in range(rng.randrange(1, 3)))
        return GenDecl(specs, rand_degree(rng))
    if k == 3:
        return Let(rand_ref(rng), rand_expr(rng))
    if k == 4:
        return PresetDecl(Call(Ref(rng.choice(["weil", "jet", "gauge"])), (rand_ref(rng),)))
    if k == 5:
        rules = tuple(Rule(rand_ref(rng), rand_expr(rng)) for _ in range(rng.randrange(3)))
        ranges = tuple([("a", 1, 3)] if rng.random() < 0.5 else [])
        return DerDecl(rng.choice(NAMES), ranges, rand_degree(rng), rules)
    if k == 6:
        return Command("check", (rand_expr(rng), rand_expr(rng)))
    if k == 7:
        return Command("nilpotent", (rand_ref(rng),))
    if k == 8:
        return Command(rng.choice(["exp", "bracket", "commute"]), (rand_expr(rng), rand_expr(rng)))
    return Command(rng.choice(["show", "curvature"]), (rand_expr(rng),))


def test_round_trip_random_asts():
    rng = random.Random(2024)
    for _ in range(250):
        script = Script([rand_stmt(rng) for _ in range(rng.randrange(1, 6))])
        text = dsl.render(script)
        assert dsl.parse(text) == script, text
        assert dsl.render(dsl.parse(text)) == text


def test_round_trip_bundled_scripts():
    from importlib import resources
    for path in resources.files("cohoma.scripts").iterdir():
        if not path.name.endswith(".cohoma") or path.name == "syntax_error.cohoma":
            continue
        s = dsl.parse(path.read_text())
        assert dsl.parse(dsl.render(s)) == s, path.name


def test_gen_range_expansion():
    s = dsl.parse("gen theta[a=1..3] deg (0,1);")
    assert s.statements[0].generators == [("theta", (1,)), ("theta", (2,)), ("theta", (3,))]
    assert s.statements[0].degree == (0, 1)


def test_bad_degree_reports_position():
    with pytest.raises(ScriptSyntaxError) as e:
        dsl.parse("algebra W;\ngen theta[a=1..3] deg (0);")
    assert (e.value.line, e.value.col) == (2, 25)
    assert "')'" in str(e.value)


def test_unexpected_end():
    with pytest.raises(ScriptSyntaxError) as e:
        dsl.parse("check Q ==")
    assert e.value.line == 1


def test_rational_literal_zero_denominator():
    with pytest.raises(ScriptSyntaxError):
        dsl.parse("show 1/0;")


def test_hand_written_weil_differential():
    reports, code = execute(
        "preset weil(su2);\n"
        "der Q deg (0,1) {\n"
        "  theta[a] -> phi[a] - 1/2*sum(b,c) f[a,b,c]*theta[b]*theta[c];\n"
        "  phi[a] -> sum(b,c) f[a,b,c]*phi[b]*theta[c];\n"
        "}\n"
        "check Q == d;\n")
    assert code == 0 and all(r.ok for r in reports)


def test_json_for_passing_check():
    reports, code = execute("preset weil(su2);\ncheck nilpotent d;\n")
    doc = json.loads(render_json(reports, deterministic=True))
    assert doc["schema"] == 1 and code == 0
    (r,) = doc["reports"]
    assert r["status"] == "pass" and r["witnesses"] == []


def test_empty_script():
    reports, code = execute("")
    assert code == 0
    assert json.loads(render_json(reports, deterministic=True)) == {"schema": 1, "reports": []}


def test_failing_check_exit_code_and_witness():
    from importlib import resources
    text = resources.files("cohoma.scripts").joinpath("negative_q2.cohoma").read_text()
    reports, code = execute(text)
    assert code == 1
    doc = json.loads(render_json(reports, deterministic=True))
    failing = [r for r in doc["reports"] if r["status"] == "fail"]
    assert failing and failing[0]["witnesses"][0]["generator"] == "y"


@pytest.mark.parametrize("text,exc", [
    ("preset weil(su2);\ncheck iota[4] == 0;", "UnknownName"),
    ("gen x deg (0,0);\ngen t deg (0,1);\nder D deg (0,1) { x -> x; }", "DegreeMismatch"),
])
def test_script_errors_exit_two(text, exc):
    reports, code = execute(text)
    assert code == 2
    doc = json.loads(render_json(reports, deterministic=True))
    assert doc["reports"][-1]["status"] == "error"
    assert exc in doc["reports"][-1]["error"]
