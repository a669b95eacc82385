import pytest
from hypothesis import given, settings, strategies as st

from kleinperm.catalogue import REG, TRIV, construct, format_label, parse_label
from kleinperm.decomp import decompose, is_isomorphic
from kleinperm.errors import DslError, DslSyntaxError, DuplicateNode, RelationViolation, UnknownNode
from kleinperm.gf2k import GF2, field_make
from kleinperm.kv4mod import zero_module
from kleinperm.moddsl import (DiagramAst, ascii, catalogue_ast, lower, parse, render, render_ast,
                              to_ast)
from kleinperm.permdim import sweep_labels

from oracles import rng_for, scrambled

GF4 = field_make(2, 0x7)

M3_SRC = """
module m3 over gf2 {
  basis u1 v0 v1;
  a: u1 -> v0;
  b: u1 -> v1;
}
"""


def test_parse_example():
    ast = parse(M3_SRC)
    assert ast.name == "m3" and ast.field == GF2 and ast.nodes == ("u1", "v0", "v1")
    assert ast.edge_map("a") == {"u1": {"v0": 1}}
    m = lower(ast)
    assert decompose(m).labels == (parse_label("M3"),)


def test_trivial_module_and_empty_sections():
    m = lower(parse("module t over gf2 { basis theta; }"))
    assert m.dim == 1 and m.A.is_zero() and m.B.is_zero()
    assert lower(parse("module t over gf2 { basis theta; a: ; b: theta -> 0; }")) == m


def test_bytes_and_comments():
    src = b"# leading\nmodule m over gf2 { basis x y; # nodes\n b: x -> y; }"
    assert parse(src).edge_map("b") == {"x": {"y": 1}}


def test_sections_in_any_order_and_repeated_targets_cancel():
    ast = parse("module m over gf2 { basis x y z; b: x -> z; a: x -> y + z + z; }")
    assert ast.edge_map("a") == {"x": {"y": 1}}
    assert ast.edge_map("b") == {"x": {"z": 1}}


def test_extension_field_coefficients():
    ast = parse("module m over gf2^2:7 { basis x y; a: x -> 3*y; }")
    assert ast.edge_map("a") == {"x": {"y": 3}}
    assert lower(ast).field == GF4


@pytest.mark.parametrize("src,cls,line,col", [
    ("module m over gf2 { basis x y; a: x -> z; }", UnknownNode, 1, 40),
    ("module m over gf2 { basis x x; }", DuplicateNode, 1, 29),
    ("module m over gf2 {\n basis x y;\n a: x -> y\n}  junk", DslSyntaxError, 4, 4),
    ("module m over gf2^2:7 { basis x y; a: x -> 4*y; }", DslSyntaxError, 1, 44),
    ("module m over gf2^17 { basis x; }", DslSyntaxError, 1, 15),
    ("module m over gf2 { basis x y; a: x -> y; a: y -> 0; }", DslSyntaxError, 1, 43),
    ("module m over gf2 { basis x y; a: x -> y, x -> y; }", DslSyntaxError, None, None),
    ("modul m over gf2 { }", DslSyntaxError, 1, 1),
    (b"module \xff", DslSyntaxError, 1, 8),
    ("", DslSyntaxError, 1, 1),
])
def test_errors_carry_positions(src, cls, line, col):
    with pytest.raises(cls) as exc:
        parse(src)
    if line is not None:
        assert (exc.value.line, exc.value.col) == (line, col)
    assert str(exc.value).startswith(f"{exc.value.line}:{exc.value.col}: ")


def test_relation_violation_on_lowering():
    ast = parse("module m over gf2 { basis x y z; a: x -> y, y -> z; }")
    with pytest.raises(RelationViolation):
        lower(ast)


@pytest.mark.parametrize("label", sweep_labels(15), ids=str)
def test_catalogue_round_trip(label):
    ast, groups = catalogue_ast([label])
    text = render_ast(ast, groups)
    back = parse(text)
    assert back.normalized() == ast.normalized()
    assert decompose(lower(back)).labels == (label,)


@pytest.mark.parametrize("text", ["E[t+2,2]", "E[t^2+t+2,2]", "W5", "kV4"])
def test_round_trip_over_gf4(text):
    lab = parse_label(text, GF4)
    m = construct(lab, GF4)
    back = lower(parse(render(m)))
    assert is_isomorphic(back, m)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from(["k", "kV4", "M3", "W5", "E[t,2]", "Einf[1]", "E[t^2+t+1,1]"]),
                min_size=1, max_size=4), st.integers(0, 10 ** 6))
def test_render_parse_lower_is_isomorphic(names, seed):
    m = scrambled([parse_label(x) for x in names], GF2, rng_for(seed))
    back = lower(parse(render(m)))
    assert is_isomorphic(back, m)
    assert sorted(format_label(x) for x in decompose(back).labels) == sorted(names)


def test_to_ast_keeps_basis():
    m = scrambled([TRIV, REG], GF2, rng_for("to_ast"))
    assert lower(parse(render_ast(to_ast(m)))) == m


def test_multi_summand_names_are_suffixed():
    ast, groups = catalogue_ast([TRIV, REG])
    assert [g[0] for g in groups] == ["k", "kV4"]
    assert ast.nodes == ("theta_1", "w_2", "x_2", "y_2", "z_2")


def test_zero_module_renders():
    text = render(zero_module())
    assert lower(parse(text)).dim == 0


def test_ascii_w3():
    pic = ascii(construct(parse_label("W3")))
    lines = pic.splitlines()
    assert lines[0] == "[W3]"
    assert "u0" in lines[1] and "u1" in lines[1] and "v1" in lines[3]
    assert "\\" in lines[2] and "/" in lines[2]


def test_ascii_regular_and_zero():
    pic = ascii(construct(REG)).splitlines()
    assert pic[0] == "[kV4]" and pic[1].strip() == "w" and pic[-1].strip() == "z"
    assert ascii(zero_module()).strip() == "(zero module)"


def test_ascii_sum_places_summands_side_by_side():
    m = scrambled([TRIV, parse_label("M3")], GF2, rng_for("side"))
    head = ascii(m).splitlines()[0]
    assert "[k]" in head and "[M3]" in head


def test_ascii_marks_dashed_edge_with_note():
    pic = ascii(construct(parse_label("E[t^2+t+1,1]")))
    assert ":" in pic and "o =" in pic


TOKENS = ["module", "over", "gf2", "gf2^2:7", "basis", "a:", "b:", "->", "+", "*", ";", ",", "{", "}",
          "x", "y", "z", "0", "1", "3", "#", "\n", " ", "ff", "gf2^99"]


@settings(max_examples=400, deadline=None)
@given(st.one_of(st.binary(max_size=60),
                 st.lists(st.sampled_from(TOKENS), max_size=30).map(" ".join),
                 st.text(max_size=60)))
def test_fuzz_never_crashes(src):
    try:
        ast = parse(src)
    except DslError as exc:
        text = src.decode("utf-8", "replace") if isinstance(src, bytes) else src
        assert 1 <= exc.line <= text.count("\n") + 1
        assert exc.col >= 1
        return
    assert isinstance(ast, DiagramAst)
    try:
        lower(ast)
    except RelationViolation:
        pass
