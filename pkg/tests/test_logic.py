import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcnident.logic import (
    BinOp,
    Const,
    Not,
    NetworkSyntaxError,
    Var,
    compile_network,
    evaluate,
    parse_expr,
    parse_network,
    structure_matrix,
)
from bcnident.network import simulate
from bcnident.stp import DeltaVector, LogicalMatrix, stp

from conftest import LAC_F, NETWORKS

x1, x2, x3 = Var("x", 1), Var("x", 2), Var("x", 3)


def bits_to_index(bits):
    # TRUE is delta_2^1, so a True bit contributes 0
    return 1 + sum((0 if b else 1) << (len(bits) - 1 - i) for i, b in enumerate(bits))


def test_precedence():
    assert parse_expr("x1 | x2 & x3") == BinOp("OR", x1, BinOp("AND", x2, x3))
    assert parse_expr("!x1 & x2") == BinOp("AND", Not(x1), x2)
    assert parse_expr("x1 ^ x2 | x3") == BinOp("OR", BinOp("XOR", x1, x2), x3)
    assert parse_expr("x1 -> x2 -> x3") == BinOp("IMPLIES", x1, BinOp("IMPLIES", x2, x3))
    assert parse_expr("x1 <-> x2 -> x3") == BinOp("IFF", x1, BinOp("IMPLIES", x2, x3))
    assert parse_expr("x1 & x2 & x3") == BinOp("AND", BinOp("AND", x1, x2), x3)
    assert parse_expr("¬x1 ∧ (x2 ∨ 1)") == BinOp("AND", Not(x1), BinOp("OR", x2, Const(True)))


def test_evaluate():
    e = parse_expr("x1 -> x2")
    assert [evaluate(e, {"x1": a, "x2": b}) for a, b in itertools.product((True, False), repeat=2)] == [
        True, False, True, True
    ]


def test_structure_matrix_examples():
    assert structure_matrix(parse_expr("!x1"), [x1]) == LogicalMatrix(2, (2, 1))
    assert structure_matrix(parse_expr("x1 & x2"), [x1, x2]) == LogicalMatrix(2, (1, 2, 2, 2))
    with pytest.raises(ValueError):
        structure_matrix(parse_expr("x3"), [x1])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["x1 & !x2", "x1 ^ x2 ^ x3", "(x1 -> x2) <-> x3", "!(x1 | x2) | x3 & 0"]), st.data())
def test_structure_matrix_matches_truth_table(text, data):
    e = parse_expr(text)
    order = [x1, x2, x3]
    M = structure_matrix(e, order)
    bits = data.draw(st.tuples(st.booleans(), st.booleans(), st.booleans()))
    v = stp(M, *(DeltaVector(2, 1 if b else 2) for b in bits))
    truth = evaluate(e, {"x1": bits[0], "x2": bits[1], "x3": bits[2]})
    assert v == DeltaVector(2, 1 if truth else 2)


def test_lac_declaration():
    spec = parse_network((NETWORKS / "lac_operon.bnl").read_text())
    assert (spec.n, spec.m, spec.l) == (3, 3, 3)


def test_lac_dynamics_compile_exactly():
    sys = compile_network((NETWORKS / "lac_operon.bnl").read_text())
    assert list(sys.F.cols) == LAC_F


def test_lac_outputs_follow_the_formulas():
    # H is checked against direct evaluation of the output equations
    sys = compile_network((NETWORKS / "lac_operon.bnl").read_text())
    formulas = [
        lambda a, b, c: a or not b or c,
        lambda a, b, c: (not a) or (b and not c),
        lambda a, b, c: (not a and not b) or c,
    ]
    for bits in itertools.product((True, False), repeat=3):
        y = tuple(f(*bits) for f in formulas)
        assert sys.output(bits_to_index(bits)) == bits_to_index(y)


def test_identity_network():
    sys = compile_network("x1' = x1\n")
    assert (sys.n, sys.m, sys.l) == (1, 0, 0)
    assert list(sys.F.cols) == [1, 2]
    sys = compile_network("x1' = x1\ny1 = x1\n")
    assert list(sys.F.cols) == [1, 2] and list(sys.H.cols) == [1, 2]


def test_declaration_pads_inputs():
    sys = compile_network("states 1 inputs 1 outputs 0\nx1' = u1\n")
    assert list(sys.F.cols) == [1, 1, 2, 2]


def test_random_network_matches_truth_tables():
    rng = random.Random(7)
    ops = ["&", "|", "^"]
    for _ in range(20):
        names = ["u1", "x1", "x2"]
        exprs = [f"{rng.choice(names)} {rng.choice(ops)} !{rng.choice(names)}" for _ in range(2)]
        sys = compile_network(f"states 2 inputs 1 outputs 1\nx1' = {exprs[0]}\nx2' = {exprs[1]}\ny1 = x1 & x2\n")
        parsed = [parse_expr(e) for e in exprs]
        for u, a, b in itertools.product((True, False), repeat=3):
            env = {"u1": u, "x1": a, "x2": b}
            nxt = tuple(evaluate(e, env) for e in parsed)
            got = simulate(sys, bits_to_index((a, b)), [bits_to_index((u,))]).states[1]
            assert got == bits_to_index(nxt)


@pytest.mark.parametrize(
    "text, line",
    [
        ("x1' = x1 &\n", 1),
        ("x1' = x1\nx1' = !x1\n", 2),
        ("states 2 inputs 0 outputs 0\nx1' = x2\n", None),
        ("x1' = x2\nx2' = x1\ny1 = u1\n", 3),
        ("x1' = x1\ny1 = (x1\n", 2),
        ("states 1 inputs 0 outputs 0\nx1' = x4\n", 2),
        ("x1' x1\n", 1),
    ],
)
def test_syntax_errors(text, line):
    with pytest.raises(NetworkSyntaxError) as err:
        parse_network(text)
    if line is not None:
        assert err.value.line == line


def test_dangling_operator_position():
    with pytest.raises(NetworkSyntaxError) as err:
        parse_network("x1' = x1 &")
    assert err.value.line == 1
    assert err.value.column >= 10
