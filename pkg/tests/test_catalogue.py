import pytest

from kleinperm.catalogue import (REG, TRIV, E, E_T, E_T1, EInf, IndecompLabel, M, W, construct,
                                 format_label, generator_words, parse_label, perm_indecomposables,
                                 perm_labels, recipe_for, resolution_catalogue_sources)
from kleinperm.errors import FNotMonic, LabelSyntaxError, ReducibleF
from kleinperm.gf2k import GF2, FieldPoly, field_make, irreducibles, poly_power
from kleinperm.kv4mod import relation_failures
from kleinperm.permdim import is_permutation

from oracles import Ref, relations_hold

GF4 = field_make(2, 0x7)


def edges(m):
    """{(letter, source name, target name): coefficient} read off the matrices."""
    out = {}
    for letter, X in (("a", m.A), ("b", m.B)):
        for r, c, x in X.entries():
            out[(letter, m.labels[c], m.labels[r])] = x
    return out


def expected_edges(label, field=GF2):
    """Edge set written down from the diagram rules, independently of construct."""
    k, n = label.kind, label.n
    e = {}
    if k == "Reg":
        e = {("a", "1", "a"): 1, ("a", "b", "ab"): 1, ("b", "1", "b"): 1, ("b", "a", "ab"): 1}
    elif k == "M":
        for i in range(1, n + 1):
            e[("a", f"u{i}", f"v{i-1}")] = 1
            e[("b", f"u{i}", f"v{i}")] = 1
    elif k == "W":
        for i in range(1, n + 1):
            e[("a", f"u{i}", f"v{i}")] = 1
        for i in range(n):
            e[("b", f"u{i}", f"v{i+1}")] = 1
    elif k == "EInf":
        for i in range(n):
            e[("b", f"u{i}", f"v{i}")] = 1
            if i:
                e[("a", f"u{i}", f"v{i-1}")] = 1
    elif k == "E":
        m = n * label.f.degree
        fn = label.f ** n
        for i in range(m):
            e[("a", f"u{i}", f"v{i}")] = 1
            if i < m - 1:
                e[("b", f"u{i}", f"v{i+1}")] = 1
        for i in range(m):
            if fn.coeff(i):
                e[("b", f"u{m-1}", f"v{i}")] = fn.coeff(i)
    return e


def sweep(max_dim, field=GF2, max_deg=4):
    labs = [TRIV, REG]
    for n in range(1, max_dim):
        if 2 * n + 1 <= max_dim:
            labs += [M(n), W(n)]
        if 2 * n <= max_dim:
            labs.append(EInf(n))
        for d in range(1, max_deg + 1):
            if 2 * n * d <= max_dim:
                labs += [IndecompLabel("E", n, f) for f in irreducibles(field, d)]
    return labs


def test_construct_examples():
    m3 = construct(M(1))
    assert m3.dim == 3 and edges(m3) == {("a", "u1", "v0"): 1, ("b", "u1", "v1"): 1}
    e = construct(E("t+1", 2))
    assert e.dim == 4 and edges(e)[("b", "u1", "v0")] == 1
    assert ("b", "u1", "v2") not in edges(e)
    q = construct(E("t^2+t+1", 1))
    assert q.dim == 4
    assert {k: v for k, v in edges(q).items() if k[1] == "u1" and k[0] == "b"} == {
        ("b", "u1", "v0"): 1, ("b", "u1", "v1"): 1}


@pytest.mark.parametrize("label", sweep(200, max_deg=4), ids=str)
def test_relations_and_edges_over_gf2(label):
    m = construct(label)
    assert m.dim == label.dim
    assert not relation_failures(m.A, m.B)
    assert edges(m) == expected_edges(label)


@pytest.mark.parametrize("label", sweep(24, GF4, max_deg=2), ids=str)
def test_relations_and_edges_over_gf4(label):
    m = construct(label, GF4)
    assert edges(m) == expected_edges(label, GF4)
    assert relations_hold(Ref(GF4), m.A.to_lists(), m.B.to_lists())


@pytest.mark.parametrize("label,dim", [(TRIV, 1), (REG, 4), (M(5), 11), (W(2), 5),
                                       (E("t^3+t+1", 2), 12), (EInf(7), 14)])
def test_dimensions(label, dim):
    assert label.dim == dim == construct(label).dim


def test_small_permutation_diagrams():
    assert edges(construct(E_T())) == {("a", "u0", "v0"): 1}
    assert edges(construct(E_T1())) == {("a", "u0", "v0"): 1, ("b", "u0", "v0"): 1}
    assert edges(construct(EInf(1))) == {("b", "u0", "v0"): 1}


def test_perm_indecomposables():
    pairs = perm_indecomposables()
    assert [format_label(lab) for lab, _ in pairs] == ["k", "E[t,1]", "E[t+1,1]", "Einf[1]", "kV4"]
    assert [m.dim for _, m in pairs] == [1, 2, 2, 2, 4]
    assert sum(m.dim for _, m in pairs) == 11
    for _, m in pairs:
        assert is_permutation(m)[0]
    assert len(perm_labels(GF4)) == 5


def test_generator_words_reach_every_basis_vector():
    for lab in perm_labels():
        m = construct(lab)
        words = generator_words(lab)
        for j, w in enumerate(words):
            v = 1
            for letter in reversed(w):
                v = (m.A if letter == "a" else m.B).apply(v)
            assert v == 1 << j


def test_construct_rejects_bad_polynomials():
    with pytest.raises(ReducibleF):
        construct(IndecompLabel("E", 1, FieldPoly(GF2, (1, 0, 1))))
    with pytest.raises(FNotMonic):
        construct(IndecompLabel("E", 1, FieldPoly(GF4, (1, 2))), GF4)
    with pytest.raises(ReducibleF):
        construct(E("t^2+t+1", 1), GF4)


@pytest.mark.parametrize("text", ["k", "kV4", "M7", "W3", "E[t^2+t+1,2]", "Einf[3]", "E[t+1,1]"])
def test_label_round_trip(text):
    assert format_label(parse_label(text)) == text


@pytest.mark.parametrize("text", ["M4", "M1", "Q3", "E[t,0]", "Einf[]", "E[t^2,", "W"])
def test_label_errors(text):
    with pytest.raises(LabelSyntaxError):
        parse_label(text)


def test_label_ordering():
    labs = [EInf(1), E_T(), W(1), M(2), M(1), REG, TRIV]
    assert sorted(labs) == [TRIV, REG, M(1), M(2), W(1), E_T(), EInf(1)]


def test_recipe_examples():
    r = recipe_for(M(1))
    assert r.length == 1 and r.summands == ((REG, ("u1",)),)
    r = recipe_for(W(2))
    assert [(format_label(lab), names) for lab, names in r.summands] == [
        ("Einf[1]", ("u0",)), ("E[t+1,1]", ("u0", "u1", "u2")), ("E[t,1]", ("u2",))]
    r = recipe_for(E("t^2+t+1", 2))
    assert r.length == 2 and r.pattern == "E(f,n)"
    assert [format_label(lab) for lab, _ in r.summands] == ["k"] * 4 + ["kV4"] * 4
    assert recipe_for(TRIV).length == 0
    assert "M(n)" in resolution_catalogue_sources()


def test_alphas_match_poly_power():
    f = FieldPoly(GF2, (1, 1, 0, 1))
    m = construct(IndecompLabel("E", 2, f))
    alphas = poly_power(f, 2).lower_coeffs()
    last = m.dim // 2 - 1
    assert [m.B[m.dim // 2 + i, last] for i in range(len(alphas))] == list(alphas)
