"""Permutation modules, minimal permutation resolutions and permutation dimension."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .catalogue import (REG, TRIV, E_T, W, E_T1, EInf, IndecompLabel, M, basis_index, construct,
                        format_label, is_perm_label, recipe_for, catalogue_ppdim)
from .decomp import Decomposition, decompose
from .errors import CertificateFailure, EnumerationBudgetExceeded
from .exactmat import ExactMatrix, Subspace, kernel, subspace_intersect, vscale, vunit
from .gf2k import GF2, FieldSpec, irreducibles, parse_poly
from .homalg import (Resolution, ShortExact, check_exact, cyclic_map, degreewise_sum,
                     heller, identity_resolution, splice, transport)
from .kv4mod import KV4Module, ModuleMap, map_kernel, quotient

DEFAULT_BUDGET = 1 << 22


def allowed_submodule_labels(field: FieldSpec = GF2):
    """Summands that can occur in submodules of projective-free permutation modules."""
    return {TRIV, E_T(1, field), E_T1(1, field), EInf(1), M(1), M(2)}


# ---------------------------------------------------------------- tests

def is_permutation(m: KV4Module, seed: int = 0):
    """(verdict, decomposition witness)."""
    d = decompose(m, seed)
    return all(is_perm_label(lab) for lab in d.labels), d


def is_projective_free(m: KV4Module) -> bool:
    # a free summand is present exactly when ab acts non-trivially
    return m.AB.is_zero()


# ------------------------------------------------------------ resolutions

def _named_vector(label, names, field):
    v = 0
    for name in names:
        v ^= vunit(field, basis_index(label, name, field))
    return v


def first_step(label: IndecompLabel, field: FieldSpec = GF2):
    """Short exact sequence ker -> P -> construct(label) from the recipe table."""
    target = construct(label, field)
    recipe = recipe_for(label)
    labels = [lab for lab, _ in recipe.summands]
    images = [_named_vector(label, names, field) for _, names in recipe.summands]
    phi = cyclic_map(labels, images, target)
    K, incl = map_kernel(phi)
    return ShortExact(incl, phi), labels


def build_resolution(label: IndecompLabel, field: FieldSpec = GF2, seed: int = 0) -> Resolution:
    """Minimal permutation resolution of an indecomposable, with explicit matrices."""
    if is_perm_label(label):
        return identity_resolution(construct(label, field))
    seq, _ = first_step(label, field)
    kd = decompose(seq.left, seed)
    inner = degreewise_sum([build_resolution(lab, field, seed) for lab in kd.labels], field)
    ident = ModuleMap(inner.target, seq.left, kd.basis)
    return splice(seq, inner, ident)


def resolution_for_module(m: KV4Module, seed: int = 0, decomposition: Decomposition | None = None):
    """Degree-wise sum of summand resolutions, transported back to m."""
    d = decomposition or decompose(m, seed)
    r = degreewise_sum([build_resolution(lab, m.field, seed) for lab in d.labels], m.field)
    return transport(r, ModuleMap(r.target, m, d.basis))


# ----------------------------------------------------------- ppdim results

@dataclass
class PpdimResult:
    lower: int
    upper: int
    upper_witness: Resolution
    lower_certificate: object = None
    exact: bool = True
    open_question_flag: bool = False
    labels: tuple = ()

    @property
    def value(self):
        return self.upper if self.exact else (self.lower, self.upper)

    def describe(self) -> str:
        if self.exact:
            return f"ppdim = {self.upper}"
        return f"ppdim in [{self.lower},{self.upper}]"


def ppdim_indecomposable(label: IndecompLabel, field: FieldSpec = GF2, seed: int = 0,
                         certify: bool = True, method: str = "images",
                         budget: int = DEFAULT_BUDGET) -> PpdimResult:
    value = catalogue_ppdim(label)
    witness = build_resolution(label, field, seed)
    report = check_exact(witness)
    if not report.ok or witness.length != value:
        raise CertificateFailure(f"upper witness for {format_label(label)} failed: {report.failures}")
    if value == 0:
        cert = {"kind": "permutation", "labels": [format_label(label)]}
    elif value == 1:
        cert = {"kind": "not-permutation", "labels": [format_label(label)]}
    else:
        cert = certify_lower(label, field, method=method, budget=budget, seed=seed) if certify else None
    return PpdimResult(value, value, witness, cert, True, False, (label,))


def ppdim(m: KV4Module, seed: int = 0, certify: bool = True, method: str = "images",
          budget: int = DEFAULT_BUDGET) -> PpdimResult:
    d = decompose(m, seed)
    if len(d.labels) == 1:
        r = ppdim_indecomposable(d.labels[0], m.field, seed, certify, method, budget)
        witness = transport(r.upper_witness, ModuleMap(r.upper_witness.target, m, d.basis))
        return PpdimResult(r.lower, r.upper, witness, r.lower_certificate, True, False, d.labels)
    witness = resolution_for_module(m, seed, d)
    values = [catalogue_ppdim(lab) for lab in d.labels]
    top = max(values, default=0)
    if top == 0:
        return PpdimResult(0, 0, witness, {"kind": "permutation"}, True, False, d.labels)
    if top == 1:
        return PpdimResult(1, 1, witness, {"kind": "not-permutation"}, True, False, d.labels)
    return PpdimResult(1, 2, witness, {"kind": "not-permutation"}, False, True, d.labels)


# --------------------------------------------------------- kernel sums

def kersum_span_expected(label: IndecompLabel) -> int:
    k, n = label.kind, label.n
    if k == "Triv":
        return 1
    if k == "Reg":
        return 3
    if k == "M":
        return n + 1
    if k == "W":
        # u_0, the sum of all u_i and u_n coincide up to span when n = 1
        return 3 if n == 1 else n + 3
    if k == "EInf":
        return n + 1
    f = label.f
    if f.degree == 1 and f.coeffs[0] in (0, 1):
        return n + 1
    return label.dim // 2


# ------------------------------------------------------ E-type submodules

E_KINDS = ("E_t", "E_t+1", "E_inf")


def _kind_label(kind, field):
    return {"E_t": E_T(1, field), "E_t+1": E_T1(1, field), "E_inf": EInf(1)}[kind]


def e_submodules(m: KV4Module, kind: str, budget: int = DEFAULT_BUDGET):
    """All submodules isomorphic to E_t, E_{t+1} or E_inf, with embeddings."""
    F = m.field
    A, B = m.A, m.B
    if kind == "E_t":
        killer, mover = B, A
    elif kind == "E_t+1":
        killer, mover = A + B, A
    elif kind == "E_inf":
        killer, mover = A, B
    else:
        raise ValueError(f"kind must be one of {E_KINDS}")
    K = kernel(killer)
    needed = F.order ** K.dim
    if needed > budget:
        raise EnumerationBudgetExceeded(needed, budget)
    seen = {}
    src = construct(_kind_label(kind, F), F)
    for coeffs in itertools.product(range(F.order), repeat=K.dim):
        w = 0
        for c, b in zip(coeffs, K.basis):
            if c:
                w ^= vscale(F, b, c)
        y = mover.apply(w)
        if not y:
            continue
        S = Subspace.span(F, m.dim, [w, y])
        if S in seen:
            continue
        seen[S] = ModuleMap(src, m, ExactMatrix.from_columns(F, m.dim, [w, y]))
    return list(seen.items())


# -------------------------------------------------------- lower bounds

@dataclass
class LowerCertificate:
    label: IndecompLabel
    method: str
    omega_label: object
    verified: bool
    witness: object = None
    counts: dict = dc_field(default_factory=dict)
    quotients: list = dc_field(default_factory=list)

    def to_dict(self):
        return {
            "label": format_label(self.label),
            "method": self.method,
            "omega": self.omega_label,
            "verified": self.verified,
            "counts": self.counts,
            "quotients": self.quotients,
        }


def image_triple_obstruction(omega: KV4Module):
    """(T, Y) with T = aX cap bX cap (a+b)X and Y = a ker b + b ker a + a ker(a+b)."""
    F = omega.field
    A, B = omega.A, omega.B
    AB = A + B

    def img(M):
        return Subspace.span(F, omega.dim, M.columns)

    T = subspace_intersect(subspace_intersect(img(A), img(B)), img(AB))
    gens = []
    gens += A.apply_all(kernel(B).basis)
    gens += B.apply_all(kernel(A).basis)
    gens += A.apply_all(kernel(AB).basis)
    Y = Subspace.span(F, omega.dim, gens)
    return T, Y


def certify_lower(label: IndecompLabel, field: FieldSpec = GF2, method: str = "images",
                  budget: int = DEFAULT_BUDGET, seed: int = 0) -> LowerCertificate:
    """Evidence that no length-one permutation resolution exists."""
    m = construct(label, field)
    omega = heller(m)
    od = decompose(omega, seed)
    om_lab = [format_label(x) for x in od.labels]
    if method == "images":
        if not omega.AB.is_zero():
            raise CertificateFailure("Heller shift has a free summand")
        T, Y = image_triple_obstruction(omega)
        witness = next((t for t in T.basis if not Y.contains(t)), None)
        return LowerCertificate(label, method, om_lab, witness is not None, witness,
                                {"T": T.dim, "Y": Y.dim})
    if method != "enumerate":
        raise ValueError("method must be 'images' or 'enumerate'")
    allowed = allowed_submodule_labels(field)
    singles = []
    counts = {}
    for kind in E_KINDS:
        subs = e_submodules(omega, kind, budget)
        counts[kind] = len(subs)
        singles.extend(S for S, _ in subs)
    families = [()]
    for size in (1, 2, 3):
        for combo in itertools.combinations(range(len(singles)), size):
            spaces = [singles[i] for i in combo]
            total = Subspace.span(field, omega.dim, [b for S in spaces for b in S.basis])
            if total.dim == 2 * size:
                families.append(combo)
    counts["families"] = len(families)
    quotients = []
    verified = True
    for combo in families:
        S = Subspace.span(field, omega.dim, [b for i in combo for b in singles[i].basis])
        q, _ = quotient(omega, S)
        labs = decompose(q, seed).labels
        bad = [format_label(x) for x in labs if x not in allowed]
        quotients.append({"submodule_dim": S.dim,
                          "quotient": [format_label(x) for x in labs],
                          "disallowed": bad})
        if not bad:
            verified = False
    return LowerCertificate(label, method, om_lab, verified, None, counts, quotients)


# -------------------------------------------------------------- sweeps

SWEEP_POLYS = ("t", "t+1", "t^2+t+1", "t^3+t+1", "t^3+t^2+1")


def sweep_labels(max_dim: int, field: FieldSpec = GF2, polys=None) -> list:
    """Every indecomposable label of dimension <= max_dim, in canonical order.

    E-type labels use ``polys`` (default: all monic irreducibles of degree <= 3
    over the field, which over GF(2) is exactly SWEEP_POLYS).
    """
    if polys is None:
        fs = [p for deg in (1, 2, 3) for p in irreducibles(field, deg)]
    else:
        fs = [parse_poly(p, field) if isinstance(p, str) else p for p in polys]
    out = [lab for lab in (TRIV, REG) if lab.dim <= max_dim]
    n = 1
    while 2 * n <= max_dim:
        if 2 * n + 1 <= max_dim:
            out += [M(n), W(n)]
        out.append(EInf(n))
        out += [IndecompLabel("E", n, f) for f in fs if 2 * n * f.degree <= max_dim]
        n += 1
    return sorted(out)


@dataclass
class SweepRow:
    label: IndecompLabel
    value: int
    witness_ok: bool
    lower_ok: bool
    terms: list

    def to_dict(self):
        return {"label": format_label(self.label), "dim": self.label.dim, "ppdim": self.value,
                "witness_ok": self.witness_ok, "lower_ok": self.lower_ok, "terms": self.terms}


def sweep_row(label: IndecompLabel, field: FieldSpec = GF2, seed: int = 0,
              method: str = "images", budget: int = DEFAULT_BUDGET) -> SweepRow:
    """Full pipeline for one label: witness resolution plus the lower-bound evidence."""
    r = ppdim_indecomposable(label, field, seed, True, method, budget)
    witness_ok = check_exact(r.upper_witness).ok and r.upper_witness.length == r.upper
    if r.upper == 2:
        lower_ok = bool(r.lower_certificate and r.lower_certificate.verified)
    elif r.upper == 1:
        lower_ok = not is_perm_label(decompose(construct(label, field), seed).labels[0])
    else:
        lower_ok = True
    terms = [" + ".join(format_label(x) for x in decompose(t, seed).labels) or "0"
             for t in r.upper_witness.terms]
    return SweepRow(label, r.upper, witness_ok, lower_ok, terms)
