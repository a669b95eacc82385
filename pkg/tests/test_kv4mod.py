import itertools

import pytest
from hypothesis import given, settings, strategies as st

from kleinperm.catalogue import E_T, E_T1, REG, TRIV, EInf, M, W, construct, parse_label
from kleinperm.decomp import decompose
from kleinperm.errors import (DimensionMismatch, FieldMismatch, FormatError, NotEquivariant,
                              NotStable, RelationViolation)
from kleinperm.exactmat import ExactMatrix, Subspace, vfrom_list
from kleinperm.gf2k import GF2, field_make
from kleinperm.kv4mod import (KV4Module, direct_sum, dual, element_kernel, format_module, head_dim,
                              hom_space, ker_sum, map_dual, map_from_images, map_image, map_kernel,
                              map_make, module_make, parse_module, quotient, radical, socle,
                              submodule_generated, zero_module)

from oracles import Ref, relations_hold, rng_for, scrambled

GF4 = field_make(2, 0x7)
SMALL = ["k", "kV4", "M3", "M5", "W3", "W5", "E[t,1]", "E[t+1,1]", "Einf[1]", "E[t,2]",
         "E[t^2+t+1,1]", "Einf[2]", "M7"]


def labels_of(m):
    return sorted(str(x) for x in decompose(m).labels)


def test_module_make_examples():
    k = module_make(GF2, [[0]], [[0]])
    assert k.dim == 1
    reg = construct(REG)
    assert module_make(GF2, reg.A, reg.B) == reg
    J3 = [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
    with pytest.raises(RelationViolation) as exc:
        module_make(GF2, J3, [[0] * 3] * 3)
    assert "a^2" in exc.value.failed


def test_commutator_violation():
    A = [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
    B = [[0, 0, 0], [0, 0, 0], [0, 1, 0]]
    with pytest.raises(RelationViolation):
        module_make(GF2, A, B)


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        module_make(GF2, [[0, 0], [0, 0]], [[0]])


def test_direct_sum_examples():
    z, inc, proj = direct_sum([], GF2)
    assert z.dim == 0 and inc == [] and proj == []
    assert direct_sum([construct(TRIV), construct(REG)])[0].dim == 5
    s = direct_sum([construct(E_T()), construct(EInf(1))])[0]
    assert s.dim == 4 and labels_of(s) == ["E[t,1]", "Einf[1]"]
    with pytest.raises(FieldMismatch):
        direct_sum([construct(TRIV), construct(TRIV, GF4)])


@pytest.mark.parametrize("label,expected", [("k", "k"), ("M5", "W5"), ("E[t,3]", "E[t,3]"),
                                            ("W7", "M7"), ("Einf[2]", "Einf[2]")])
def test_dual_examples(label, expected):
    assert labels_of(dual(construct(parse_label(label)))) == [expected]


@pytest.mark.parametrize("label,expected", [("k", 1), ("kV4", 3), ("E[t,4]", 5), ("M9", 5)])
def test_ker_sum_examples(label, expected):
    assert ker_sum(construct(parse_label(label))).dim == expected


def test_kernel_sum_of_regular_is_radical():
    reg = construct(REG)
    assert ker_sum(reg) == radical(reg)


@pytest.mark.parametrize("label,soc,rad,head", [("kV4", 1, 3, 1), ("M7", 4, 4, 3), ("k", 1, 0, 1),
                                                ("W5", 2, 2, 3), ("E[t,2]", 2, 2, 2)])
def test_radical_socle_head(label, soc, rad, head):
    m = construct(parse_label(label))
    assert (socle(m).dim, radical(m).dim, head_dim(m)) == (soc, rad, head)


def test_regular_socle_is_ab():
    assert socle(construct(REG)) == Subspace.span(GF2, 4, [vfrom_list(GF2, [0, 0, 0, 1])])


def test_submodule_generated_examples():
    reg = construct(REG)
    sub, _ = submodule_generated(reg, [0])
    assert sub.dim == 0
    sub, inc = submodule_generated(reg, [vfrom_list(GF2, [0, 1, 0, 0])])
    assert sub.dim == 2 and labels_of(sub) == ["Einf[1]"]
    assert inc.is_equivariant()
    m3 = construct(M(1))
    assert submodule_generated(m3, [vfrom_list(GF2, [1, 0, 0])])[0].dim == 3


def test_quotient_examples():
    m = construct(M(2))
    q, proj = quotient(m, Subspace.zero(GF2, m.dim))
    assert q == m and proj.is_equivariant()
    et3 = construct(parse_label("E[t,3]"))
    # u2, v2 span an embedded E_t (b kills u2, a sends it to v2)
    s = Subspace.span(GF2, 6, [1 << 2, 1 << 5])
    assert labels_of(quotient(et3, s)[0]) == ["E[t,2]"]
    w7 = construct(W(3))  # u0..u3, v1..v3
    gen = sum(1 << i for i in range(4))
    sub, inc = submodule_generated(w7, [gen])
    assert labels_of(sub) == ["E[t+1,1]"]
    assert labels_of(quotient(w7, map_image(inc))[0]) == ["W5"]
    with pytest.raises(NotStable):
        quotient(m, Subspace.span(GF2, m.dim, [1]))


def test_map_examples():
    m3 = construct(M(1))
    I = map_make(m3, m3, ExactMatrix.identity(GF2, 3))
    assert map_kernel(I)[0].dim == 0
    reg = construct(REG)
    phi = map_from_images(reg, m3, [1, 0b010, 0b100, 0])  # w -> u1, a -> v0, b -> v1, ab -> 0
    K, _ = map_kernel(phi)
    assert labels_of(K) == ["k"]
    dphi = map_dual(phi)
    assert labels_of(dphi.source) == ["W3"]
    assert dphi.matrix.rank == 3 and dphi.is_equivariant()
    with pytest.raises(NotEquivariant):
        map_make(reg, m3, ExactMatrix.from_lists(GF2, [[0, 1, 0, 0], [0] * 4, [0] * 4]))


def brute_hom_count(m, n):
    ref = Ref(m.field)
    Am, Bm, An, Bn = (x.to_lists() for x in (m.A, m.B, n.A, n.B))
    count = 0
    for bits in itertools.product((0, 1), repeat=m.dim * n.dim):
        X = [list(bits[i * m.dim:(i + 1) * m.dim]) for i in range(n.dim)]
        if ref.matmul(X, Am) == ref.matmul(An, X) and ref.matmul(X, Bm) == ref.matmul(Bn, X):
            count += 1
    return count


@pytest.mark.parametrize("src,tgt,dim", [("k", "k", 1), ("kV4", "kV4", 4), ("k", "M3", 2),
                                         ("M3", "k", 1), ("E[t,1]", "Einf[1]", 1),
                                         ("W3", "M3", None), ("k", "W3", 1)])
def test_hom_space_dimension(src, tgt, dim):
    m, n = construct(parse_label(src)), construct(parse_label(tgt))
    basis = hom_space(m, n)
    assert all(f.is_equivariant() for f in basis)
    if dim is not None:
        assert len(basis) == dim
    if m.dim * n.dim <= 12:
        assert 2 ** len(basis) == brute_hom_count(m, n)


@pytest.mark.parametrize("label", SMALL)
def test_file_format_round_trip(label):
    m = construct(parse_label(label))
    text = format_module(m)
    back = parse_module(text)
    assert back == m and back.labels == m.labels
    assert format_module(back) == text


def test_file_format_extension_field():
    m = construct(parse_label("E[t^2+t+2,2]", GF4), GF4)
    assert parse_module(format_module(m)) == m


@pytest.mark.parametrize("text", ["kv4mod v2 field=gf2 dim=1\n", "kv4mod v1 field=gf2 dim=2\nA 0 5 1\n",
                                  "kv4mod v1 field=gf2 dim=2\nC 0 1 1\n", ""])
def test_file_format_errors(text):
    with pytest.raises(FormatError):
        parse_module(text)


def test_zero_module_operations():
    z = zero_module()
    assert z.dim == 0 and dual(z).dim == 0 and ker_sum(z).dim == 0 and head_dim(z) == 0


label_lists = st.lists(st.sampled_from(SMALL), min_size=1, max_size=4)


@settings(max_examples=40, deadline=None)
@given(label_lists, st.integers(0, 10 ** 6))
def test_structural_invariants(names, seed):
    m = scrambled([parse_label(x) for x in names], GF2, rng_for(seed))
    ref = Ref(GF2)
    assert relations_hold(ref, m.A.to_lists(), m.B.to_lists())
    assert labels_of(dual(dual(m))) == labels_of(m)
    assert socle(m).issubspace(ker_sum(m))
    for e in ("a", "b", "a+b"):
        assert element_kernel(m, e).dim + m.action(e).rank == m.dim


@pytest.mark.parametrize("label", [x for x in SMALL if x != "k"] + ["W9", "E[t+1,3]", "Einf[4]"])
def test_socle_inside_radical_for_nontrivial_indecomposables(label):
    m = construct(parse_label(label))
    assert socle(m).issubspace(radical(m))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.integers(0, 10 ** 6))
def test_image_plus_kernel_is_source(src, tgt, seed):
    m, n = construct(parse_label(src)), construct(parse_label(tgt))
    basis = hom_space(m, n)
    rng = rng_for(seed)
    mat = ExactMatrix.zeros(GF2, n.dim, m.dim)
    for f in basis:
        if rng.random() < 0.5:
            mat = mat + f.matrix
    phi = map_make(m, n, mat)
    assert map_image(phi).dim + map_kernel(phi)[0].dim == m.dim


def test_module_equality_and_relabel():
    m = construct(M(1))
    assert m.relabel(["x", "y", "z"]) == m
    assert isinstance(m, KV4Module) and m.labels == ("u1", "v0", "v1")


def test_permutation_modules_in_kernel_sum_have_expected_kernels():
    for lab in (TRIV, E_T(), E_T1(), EInf(1)):
        m = construct(lab)
        assert ker_sum(m).dim == m.dim
