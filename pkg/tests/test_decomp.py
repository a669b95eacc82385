import pytest
from hypothesis import given, settings, strategies as st

from kleinperm.catalogue import (REG, TRIV, E, EInf, IndecompLabel, M, W, construct, dual_label,
                                 format_label, parse_label)
from kleinperm.decomp import decompose, identify_indecomposable, is_indecomposable, is_isomorphic
from kleinperm.errors import FieldMismatch, NotIndecomposable
from kleinperm.exactmat import ExactMatrix
from kleinperm.gf2k import GF2, field_make, irreducibles
from kleinperm.homalg import heller
from kleinperm.kv4mod import direct_sum, dual, map_image, quotient, submodule_generated

from oracles import Ref, random_invertible, conjugate, rng_for, scrambled

GF4 = field_make(2, 0x7)
GF8 = field_make(3, 0xB)


def block_form_lists(labels, F):
    ms = [construct(lab, F) for lab in labels]
    s = direct_sum(ms, F)[0]
    return s.A.to_lists(), s.B.to_lists()


def certificate_holds(m, d):
    """C A C^-1 and C B C^-1 equal the catalogue block form, checked with list arithmetic."""
    ref = Ref(m.field)
    C, T = d.change_of_basis.to_lists(), d.basis.to_lists()
    n = m.dim
    if n == 0:
        return not d.labels
    if ref.matmul(C, T) != [[int(i == j) for j in range(n)] for i in range(n)]:
        return False
    A, B = block_form_lists(d.labels, m.field)
    return (ref.matmul(ref.matmul(C, m.A.to_lists()), T) == A
            and ref.matmul(ref.matmul(C, m.B.to_lists()), T) == B)


def names(labels):
    return [format_label(x) for x in labels]


def test_decompose_examples():
    assert decompose(construct(M(3))).labels == (M(3),)
    rng = rng_for("example")
    m = scrambled([TRIV, M(1), REG], GF2, rng)
    d = decompose(m)
    assert sorted(d.labels) == sorted([TRIV, M(1), REG])
    assert certificate_holds(m, d)
    assert decompose(dual(construct(M(3)))).labels == (W(3),)


def test_zero_module():
    z = direct_sum([], GF2)[0]
    d = decompose(z)
    assert d.labels == () and certificate_holds(z, d)


@pytest.mark.parametrize("label", ["M3", "W3", "E[t,2]", "E[t^2+t+1,1]", "Einf[3]", "kV4", "k",
                                   "E[t+1,4]", "W11"])
def test_identify_catalogue(label):
    lab = parse_label(label)
    assert identify_indecomposable(construct(lab)) == lab


def test_identify_reads_invariants():
    # P = I and Q a single nilpotent shift: E(t, 2)
    assert identify_indecomposable(construct(E("t", 2))) == E("t", 2)
    # minimal polynomial of P^-1 Q is t^2+t+1
    assert identify_indecomposable(construct(E("t^2+t+1", 1))) == E("t^2+t+1", 1)


def test_identify_rejects_decomposable():
    s = direct_sum([construct(M(1)), construct(W(1))])[0]
    with pytest.raises(NotIndecomposable):
        identify_indecomposable(s)


def test_is_isomorphic_examples():
    m = construct(W(2))
    assert is_isomorphic(m, m)
    assert is_isomorphic(heller(construct(TRIV)), construct(W(1)))
    assert not is_isomorphic(construct(E("t", 2)), construct(EInf(2)))
    with pytest.raises(FieldMismatch):
        is_isomorphic(construct(TRIV), construct(TRIV, GF4))


@pytest.mark.parametrize("label", ["M5", "W5", "E[t,3]", "E[t^2+t+1,1]", "Einf[2]", "kV4"])
def test_is_indecomposable(label):
    m = construct(parse_label(label))
    assert is_indecomposable(m)
    assert not is_indecomposable(direct_sum([m, construct(TRIV)])[0])


def dual_table(label):
    """Expected dual written out from the duality rules: M and W swap, all else fixed."""
    return {"M": W, "W": M}.get(label.kind, lambda n: label)(label.n)


def catalogue_upto(max_dim, F=GF2, max_deg=3):
    out = [TRIV, REG]
    for n in range(1, max_dim):
        if 2 * n + 1 <= max_dim:
            out += [M(n), W(n)]
        if 2 * n <= max_dim:
            out.append(EInf(n))
        for d in range(1, max_deg + 1):
            if 2 * n * d <= max_dim:
                out += [IndecompLabel("E", n, f) for f in irreducibles(F, d)]
    return out


@pytest.mark.parametrize("label", catalogue_upto(101), ids=str)
def test_dual_table(label):
    expected = dual_table(label)
    assert dual_label(label) == expected
    assert decompose(dual(construct(label))).labels == (expected,)


@pytest.mark.parametrize("f", ["t", "t+1"])
@pytest.mark.parametrize("n", range(2, 21))
def test_quotient_by_embedded_kind(f, n):
    # u_{n-1} generates an embedded E_t (f = t); sum of gamma_i u_i an E_{t+1}
    lab = E(f, n)
    m = construct(lab)
    if f == "t":
        gen = 1 << (n - 1)
    else:
        alphas = (lab.f ** n).lower_coeffs()
        acc, gen = 0, 0
        for i, a in enumerate(alphas):
            acc ^= a
            gen |= acc << i
    sub, inc = submodule_generated(m, [gen])
    assert sub.dim == 2
    q = quotient(m, map_image(inc))[0]
    assert decompose(q).labels == (E(f, n - 1),)


@pytest.mark.parametrize("n", range(2, 21))
def test_quotient_einf_by_embedded_einf(n):
    m = construct(EInf(n))
    sub, inc = submodule_generated(m, [1])  # u0
    assert decompose(quotient(m, map_image(inc))[0]).labels == (EInf(n - 1),)


PALETTE = ["k", "kV4", "M3", "M5", "M9", "W3", "W7", "E[t,1]", "E[t+1,1]", "Einf[1]", "E[t,3]",
           "E[t+1,2]", "E[t^2+t+1,1]", "E[t^2+t+1,2]", "E[t^3+t+1,1]", "Einf[4]", "W13"]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(PALETTE), min_size=1, max_size=6), st.integers(0, 2 ** 32))
def test_random_round_trip_gf2(names_, seed):
    labels = [parse_label(x) for x in names_]
    m = scrambled(labels, GF2, rng_for(seed))
    d = decompose(m, seed % 7)
    assert sorted(d.labels) == sorted(labels)
    assert certificate_holds(m, d)


GF4_PALETTE = ["k", "kV4", "M5", "W3", "E[t,2]", "E[t+2,1]", "E[t+3,2]", "E[t^2+t+2,1]", "Einf[2]"]


@pytest.mark.parametrize("F,palette", [(GF4, GF4_PALETTE), (GF8, ["k", "M3", "E[t+2,2]", "E[t+5,1]",
                                                                 "Einf[1]", "kV4"])], ids=str)
@pytest.mark.parametrize("seed", range(6))
def test_random_round_trip_extension_fields(F, palette, seed):
    rng = rng_for("ext", seed, str(F))
    labels = [parse_label(rng.choice(palette), F) for _ in range(rng.randrange(1, 5))]
    m = scrambled(labels, F, rng)
    d = decompose(m, seed)
    assert sorted(d.labels) == sorted(labels)
    assert certificate_holds(m, d)


def test_block_spans_partition_space():
    m = scrambled([M(2), W(1), REG], GF2, rng_for(3))
    d = decompose(m)
    assert sum(s.dim for s in d.block_spans) == m.dim
    assert [s.dim for s in d.block_spans] == [lab.dim for lab in d.labels]


def test_decompose_is_deterministic():
    m = scrambled([M(2), E("t", 2), EInf(2)], GF2, rng_for(11))
    a, b = decompose(m, 5), decompose(m, 5)
    assert a.labels == b.labels and a.change_of_basis == b.change_of_basis


@pytest.mark.parametrize("F", [GF2, GF4], ids=str)
def test_conjugation_helper_is_invertible(F):
    T = random_invertible(F, 5, rng_for(1))
    assert T.rank == 5
    m = conjugate(construct(M(2), F), T)
    assert m != construct(M(2), F) or T == ExactMatrix.identity(F, 5)
    assert decompose(m).labels == (M(2),)
