"""Projective covers, Heller shifts, exactness checks and resolution splicing."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .catalogue import IndecompLabel, construct, generator_words
from .errors import FormatError, IdentificationMismatch, NotEssential
from .exactmat import ExactMatrix, Subspace, image, kernel, vunit
from .gf2k import GF2
from .kv4mod import (KV4Module, ModuleMap, direct_sum, format_module, head_dim,
                     is_surjective, map_kernel, parse_module, radical, submodule_on,
                     zero_module)


# ------------------------------------------------------------ resolutions

@dataclass
class Resolution:
    """terms[i] is P_i; maps[i] is d_i : P_i -> P_{i-1} for i >= 1; maps[0] is the augmentation."""

    target: KV4Module
    terms: list
    maps: list

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    @property
    def augmentation(self) -> ModuleMap:
        return self.maps[0]

    def check(self) -> "ExactnessReport":
        return check_exact(self)


@dataclass
class ExactnessReport:
    """Positions count from the target: 0 is surjectivity onto M, i >= 1 is exactness at P_{i-1}."""

    ok: bool
    failures: list = dc_field(default_factory=list)
    dims: list = dc_field(default_factory=list)

    @property
    def position(self):
        return self.failures[0][0] if self.failures else None

    def __bool__(self):
        return self.ok


def check_exact(r: Resolution) -> ExactnessReport:
    failures = []
    F = r.target.field
    n = len(r.terms)
    # shape and equivariance
    for i, d in enumerate(r.maps):
        src = r.terms[i]
        tgt = r.target if i == 0 else r.terms[i - 1]
        if d.matrix.shape != (tgt.dim, src.dim):
            failures.append((i, "map has wrong shape"))
            return ExactnessReport(False, failures)
        if not d.is_equivariant():
            failures.append((i, "map is not equivariant"))
    # position 0: the augmentation is onto
    if image(r.maps[0].matrix).dim != r.target.dim:
        failures.append((0, "augmentation is not surjective"))
    dims = []
    for i in range(n):
        ker = kernel(r.maps[i].matrix)
        if i + 1 < n:
            im = image(r.maps[i + 1].matrix)
        else:
            im = Subspace.zero(F, r.terms[i].dim)
        dims.append((ker.dim, im.dim))
        if ker != im:
            failures.append((i + 1, f"image has dim {im.dim}, kernel has dim {ker.dim} at P_{i}"))
    failures.sort(key=lambda x: x[0])
    return ExactnessReport(not failures, failures, dims)


def identity_resolution(m: KV4Module) -> Resolution:
    return Resolution(m, [m], [ModuleMap(m, m, ExactMatrix.identity(m.field, m.dim))])


def cyclic_map(labels, images, target: KV4Module):
    """Map from the direct sum of cyclic permutation indecomposables.

    images[i] is where the generator of the i-th summand goes.
    """
    F = target.field
    mods = [construct(lab, F) for lab in labels]
    src, _, _ = direct_sum(mods, F)
    cols = []
    for lab, x in zip(labels, images):
        for word in generator_words(lab):
            v = x
            for letter in reversed(word):
                v = (target.A if letter == "a" else target.B).apply(v)
            cols.append(v)
    return ModuleMap(src, target, ExactMatrix.from_columns(F, target.dim, cols))


# ----------------------------------------------------------- projective cover

def projective_cover(m: KV4Module):
    """(P, phi) with P free of rank head_dim(m) and phi essential."""
    R = radical(m)
    gens = [vunit(m.field, j) for j in R.complement_indices()]
    phi = cyclic_map([IndecompLabel("Reg")] * len(gens), gens, m)
    return phi.source, phi


def heller(m: KV4Module) -> KV4Module:
    return heller_with_maps(m)[0]


def heller_with_maps(m: KV4Module):
    """(Omega(m), inclusion into P, projective cover P -> m)."""
    P, phi = projective_cover(m)
    omega, incl = map_kernel(phi)
    return omega, incl, phi


def is_essential_surjection(phi: ModuleMap) -> bool:
    return is_surjective(phi) and head_dim(phi.source) == head_dim(phi.target)


# --------------------------------------------------------------- splicing

@dataclass
class ShortExact:
    """0 -> left --incl--> middle --proj--> right -> 0."""

    incl: ModuleMap
    proj: ModuleMap

    @property
    def left(self):
        return self.incl.source

    @property
    def middle(self):
        return self.incl.target

    @property
    def right(self):
        return self.proj.target

    def is_exact(self) -> bool:
        if not (self.incl.is_equivariant() and self.proj.is_equivariant()):
            return False
        if self.incl.matrix.rank != self.left.dim:
            return False
        if not is_surjective(self.proj):
            return False
        return kernel(self.proj.matrix) == image(self.incl.matrix)


def splice(outer: ShortExact, inner: Resolution, ident: ModuleMap | None = None) -> Resolution:
    """Resolution of outer.right from a resolution of (something isomorphic to) outer.left.

    ident : inner.target -> outer.left must be an isomorphism of modules.
    """
    N = inner.target
    K = outer.left
    if ident is None:
        if N.dim != K.dim or N.A != K.A or N.B != K.B:
            raise IdentificationMismatch("inner target differs from the kernel; supply ident")
        ident = ModuleMap(N, K, ExactMatrix.identity(N.field, N.dim))
    if ident.source.dim != N.dim or ident.target.dim != K.dim:
        raise IdentificationMismatch("identification has the wrong shape")
    if not ident.is_equivariant() or ident.matrix.rank != N.dim or N.dim != K.dim:
        raise IdentificationMismatch("identification is not an isomorphism of modules")
    first = ModuleMap(inner.terms[0], outer.middle,
                      outer.incl.matrix @ ident.matrix @ inner.augmentation.matrix)
    terms = [outer.middle] + list(inner.terms)
    maps = [outer.proj, first] + list(inner.maps[1:])
    return Resolution(outer.right, terms, maps)


def degreewise_sum(resolutions, field=GF2) -> Resolution:
    """Term-wise direct sum; shorter resolutions are padded with zero modules."""
    resolutions = list(resolutions)
    if not resolutions:
        z = zero_module(field)
        return identity_resolution(z)
    F = resolutions[0].target.field
    length = max(r.length for r in resolutions)
    target, _, _ = direct_sum([r.target for r in resolutions], F)
    terms = []
    for i in range(length + 1):
        parts = [r.terms[i] if i <= r.length else zero_module(F) for r in resolutions]
        terms.append(direct_sum(parts, F)[0])
    maps = []
    for i in range(length + 1):
        blocks = []
        for r in resolutions:
            src_dim = r.terms[i].dim if i <= r.length else 0
            if i == 0:
                tgt_dim = r.target.dim
            else:
                tgt_dim = r.terms[i - 1].dim if i - 1 <= r.length else 0
            if i <= r.length:
                blocks.append(r.maps[i].matrix)
            else:
                blocks.append(ExactMatrix.zeros(F, tgt_dim, src_dim))
        mat = _block_rect(F, blocks)
        src = terms[i]
        tgt = target if i == 0 else terms[i - 1]
        maps.append(ModuleMap(src, tgt, mat))
    return Resolution(target, terms, maps)


def _block_rect(F, blocks):
    """Block diagonal of possibly non-square blocks."""
    nrows = sum(b.nrows for b in blocks)
    rows = []
    col_off = 0
    for b in blocks:
        rows.extend(r << (col_off * F.e) for r in b.rows)
        col_off += b.ncols
    return ExactMatrix(F, nrows, col_off, rows)


def transport(r: Resolution, iso: ModuleMap) -> Resolution:
    """Resolution of iso.target from one of iso.source, for an isomorphism iso."""
    eps = ModuleMap(r.terms[0], iso.target, iso.matrix @ r.augmentation.matrix)
    return Resolution(iso.target, list(r.terms), [eps] + list(r.maps[1:]))


# ------------------------------------------------------------------ snake

@dataclass
class SnakeSequence:
    """0 -> Omega(M') -> Omega(M) -> ker(phi) -> 0 built from a shared cover."""

    seq: ShortExact
    kernel_incl: ModuleMap
    cover: ModuleMap

    def dims_ok(self) -> bool:
        return self.seq.left.dim + self.seq.right.dim == self.seq.middle.dim


def snake_sequence(phi: ModuleMap) -> SnakeSequence:
    if not is_essential_surjection(phi):
        raise NotEssential("map is not an essential surjection")
    P, psi = projective_cover(phi.source)
    comp = ModuleMap(P, phi.target, phi.matrix @ psi.matrix)
    omega_m, incl_m = map_kernel(comp)
    ker_psi = kernel(psi.matrix)
    F = phi.source.field
    # Omega(M') inside Omega(M), in Omega(M) coordinates
    om_sub = Subspace.span(F, P.dim, incl_m.matrix.columns)
    left_cols = [om_sub.coords(v) for v in ker_psi.basis]
    left, _ = submodule_on(P, ker_psi)
    incl = ModuleMap(left, omega_m, ExactMatrix.from_columns(F, omega_m.dim, left_cols))
    kphi, kincl = map_kernel(phi)
    ksub = Subspace.span(F, phi.source.dim, kincl.matrix.columns)
    proj_cols = [ksub.coords(psi.matrix.apply(v)) for v in incl_m.matrix.columns]
    proj = ModuleMap(omega_m, kphi, ExactMatrix.from_columns(F, kphi.dim, proj_cols))
    seq = ShortExact(incl, proj)
    return SnakeSequence(seq, kincl, comp)


# ------------------------------------------------------------------ file io

def format_resolution(r: Resolution) -> str:
    out = [f"kv4res v1 length={r.length}", "target", format_module(r.target).rstrip("\n"), "end"]
    for i, t in enumerate(r.terms):
        out += [f"term {i}", format_module(t).rstrip("\n"), "end"]
    for i, d in enumerate(r.maps):
        mat = d.matrix
        out.append(f"map {i} rows={mat.nrows} cols={mat.ncols}")
        out.extend(f"{a} {b} {x:x}" for a, b, x in mat.entries())
        out.append("end")
    return "\n".join(out) + "\n"


def parse_resolution(text: str) -> Resolution:
    lines = text.splitlines()
    pos = 0

    def nxt():
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise FormatError("unexpected end of resolution document")
        pos += 1
        return pos, lines[pos - 1].strip()

    def block():
        start = pos + 1
        body = []
        while True:
            ln, s = nxt()
            if s == "end":
                return start, body
            body.append(s)

    ln, head = nxt()
    parts = head.split()
    if len(parts) != 3 or parts[:2] != ["kv4res", "v1"] or not parts[2].startswith("length="):
        raise FormatError("expected header 'kv4res v1 length=<l>'", ln)
    try:
        length = int(parts[2][7:])
    except ValueError:
        raise FormatError("bad length", ln) from None
    if length < 0:
        raise FormatError("negative length", ln)
    ln, s = nxt()
    if s != "target":
        raise FormatError("expected 'target'", ln)
    start, body = block()
    target = parse_module("\n".join(body), start)
    terms = []
    for i in range(length + 1):
        ln, s = nxt()
        if s != f"term {i}":
            raise FormatError(f"expected 'term {i}'", ln)
        start, body = block()
        terms.append(parse_module("\n".join(body), start))
    F = target.field
    maps = []
    for i in range(length + 1):
        ln, s = nxt()
        p = s.split()
        if len(p) != 4 or p[:2] != ["map", str(i)]:
            raise FormatError(f"expected 'map {i} rows=<r> cols=<c>'", ln)
        try:
            nr, nc = int(p[2].split("=")[1]), int(p[3].split("=")[1])
        except (IndexError, ValueError):
            raise FormatError("bad map header", ln) from None
        src = terms[i]
        tgt = target if i == 0 else terms[i - 1]
        if (nr, nc) != (tgt.dim, src.dim):
            raise FormatError(f"map {i} has shape {nr}x{nc}, expected {tgt.dim}x{src.dim}", ln)
        start, body = block()
        ents = []
        for k, row in enumerate(body):
            q = row.split()
            try:
                a, b, x = int(q[0]), int(q[1]), int(q[2], 16)
                if len(q) != 3 or not (0 <= a < nr and 0 <= b < nc) or not 0 <= x < F.order:
                    raise ValueError
            except (ValueError, IndexError):
                raise FormatError(f"bad matrix entry {row!r}", start + k) from None
            ents.append((a, b, x))
        maps.append(ModuleMap(src, tgt, ExactMatrix.from_entries(F, nr, nc, ents)))
    return Resolution(target, terms, maps)
