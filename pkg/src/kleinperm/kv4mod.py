"""Modules over k[a,b]/(a^2, b^2) as pairs of commuting square-zero matrices."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import (DimensionMismatch, FieldMismatch, FormatError, NotEquivariant,
                     NotStable, RelationViolation)
from .exactmat import (Echelon, ExactMatrix, Subspace, block_diag, image, kernel,
                       subspace_intersect, vget, vsupport, vunit)
from .gf2k import GF2, FieldSpec, parse_field

ELEMENTS = ("a", "b", "a+b")


def _as_matrix(field, m, d=None):
    if isinstance(m, ExactMatrix):
        if m.field != field:
            raise FieldMismatch(f"matrix over {m.field}, module over {field}")
        return m
    return ExactMatrix.from_lists(field, m, ncols=d)


class KV4Module:
    """A finite-dimensional module; A and B are the actions of a and b."""

    __slots__ = ("field", "dim", "A", "B", "labels", "_AB")

    def __init__(self, field: FieldSpec, A: ExactMatrix, B: ExactMatrix, labels=None):
        self.field = field
        self.dim = A.nrows
        self.A = A
        self.B = B
        if labels is None:
            labels = tuple(f"e{i}" for i in range(self.dim))
        self.labels = tuple(labels)
        self._AB = None

    @property
    def AB(self) -> ExactMatrix:
        if self._AB is None:
            self._AB = self.A @ self.B
        return self._AB

    def action(self, elem: str) -> ExactMatrix:
        if elem == "a":
            return self.A
        if elem == "b":
            return self.B
        if elem in ("a+b", "b+a"):
            return self.A + self.B
        if elem == "ab":
            return self.AB
        raise ValueError(f"unknown algebra element {elem!r}")

    def __eq__(self, other):
        return (isinstance(other, KV4Module) and self.field == other.field
                and self.A == other.A and self.B == other.B)

    def __hash__(self):
        return hash((self.field, self.A, self.B))

    def __repr__(self):
        return f"KV4Module(dim={self.dim}, field={self.field})"

    def relabel(self, labels) -> "KV4Module":
        return KV4Module(self.field, self.A, self.B, labels)


def relation_failures(A: ExactMatrix, B: ExactMatrix) -> list[str]:
    failed = []
    if not (A @ A).is_zero():
        failed.append("a^2")
    if not (B @ B).is_zero():
        failed.append("b^2")
    if A @ B != B @ A:
        failed.append("ab-ba")
    return failed


def module_make(field: FieldSpec, A, B, labels=None) -> KV4Module:
    A = _as_matrix(field, A)
    B = _as_matrix(field, B, A.ncols)
    if A.nrows != A.ncols or B.shape != A.shape:
        raise DimensionMismatch(f"actions must be square of equal size, got {A.shape}, {B.shape}")
    failed = relation_failures(A, B)
    if failed:
        raise RelationViolation(failed)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != A.nrows:
            raise DimensionMismatch("label count does not match dimension")
    return KV4Module(field, A, B, labels)


def zero_module(field: FieldSpec = GF2) -> KV4Module:
    z = ExactMatrix.zeros(field, 0, 0)
    return KV4Module(field, z, z, ())


# ---------------------------------------------------------------------- maps

class ModuleMap:
    """Equivariant linear map; matrix is target.dim x source.dim."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: KV4Module, target: KV4Module, matrix: ExactMatrix):
        self.source = source
        self.target = target
        self.matrix = matrix

    def __call__(self, v: int) -> int:
        return self.matrix.apply(v)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition self after other."""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def __repr__(self):
        return f"ModuleMap({self.source.dim} -> {self.target.dim})"

    def is_equivariant(self) -> bool:
        s, t, m = self.source, self.target, self.matrix
        return m @ s.A == t.A @ m and m @ s.B == t.B @ m


def map_make(src: KV4Module, tgt: KV4Module, matrix) -> ModuleMap:
    if src.field != tgt.field:
        raise FieldMismatch("source and target over different fields")
    matrix = _as_matrix(src.field, matrix, src.dim)
    if matrix.shape != (tgt.dim, src.dim):
        raise DimensionMismatch(f"map matrix {matrix.shape}, expected {(tgt.dim, src.dim)}")
    phi = ModuleMap(src, tgt, matrix)
    if not phi.is_equivariant():
        raise NotEquivariant("matrix does not commute with the actions of a and b")
    return phi


def map_from_images(src: KV4Module, tgt: KV4Module, images: Sequence[int]) -> ModuleMap:
    """Map given by the image of every source basis vector (packed vectors)."""
    return map_make(src, tgt, ExactMatrix.from_columns(src.field, tgt.dim, list(images)))


def identity_map(m: KV4Module) -> ModuleMap:
    return ModuleMap(m, m, ExactMatrix.identity(m.field, m.dim))


def zero_map(src: KV4Module, tgt: KV4Module) -> ModuleMap:
    return ModuleMap(src, tgt, ExactMatrix.zeros(src.field, tgt.dim, src.dim))


def map_image(phi: ModuleMap) -> Subspace:
    return image(phi.matrix)


def map_kernel(phi: ModuleMap):
    """(kernel module, inclusion into the source)."""
    return submodule_on(phi.source, kernel(phi.matrix))


def map_dual(phi: ModuleMap) -> ModuleMap:
    return ModuleMap(dual(phi.target), dual(phi.source), phi.matrix.T)


def is_injective(phi: ModuleMap) -> bool:
    return phi.matrix.rank == phi.source.dim


def is_surjective(phi: ModuleMap) -> bool:
    return phi.matrix.rank == phi.target.dim


# --------------------------------------------------------------- structure

def direct_sum(ms: Sequence[KV4Module], field: FieldSpec | None = None):
    """(sum, inclusions, projections)."""
    ms = list(ms)
    if not ms:
        z = zero_module(field or GF2)
        return z, [], []
    F = ms[0].field
    for m in ms:
        if m.field != F:
            raise FieldMismatch("summands over different fields")
    labels = []
    for i, m in enumerate(ms):
        labels.extend(f"{name}.{i}" for name in m.labels)
    total = KV4Module(F, block_diag([m.A for m in ms]), block_diag([m.B for m in ms]), labels)
    incl, proj = [], []
    off = 0
    for m in ms:
        cols = [vunit(F, off + j) for j in range(m.dim)]
        incl.append(ModuleMap(m, total, ExactMatrix.from_columns(F, total.dim, cols)))
        proj.append(ModuleMap(total, m, ExactMatrix(F, m.dim, total.dim, cols)))
        off += m.dim
    return total, incl, proj


def dual(m: KV4Module) -> KV4Module:
    return KV4Module(m.field, m.A.T, m.B.T, [f"{x}*" for x in m.labels])


def element_kernel(m: KV4Module, elem: str) -> Subspace:
    if elem not in ELEMENTS and elem != "b+a":
        raise ValueError(f"element must be one of {ELEMENTS}")
    return kernel(m.action(elem))


def ker_sum(m: KV4Module) -> Subspace:
    ka, kb, kab = (element_kernel(m, e) for e in ELEMENTS)
    return Subspace.span(m.field, m.dim, ka.basis + kb.basis + kab.basis)


def radical(m: KV4Module) -> Subspace:
    return Subspace.span(m.field, m.dim, m.A.columns + m.B.columns)


def socle(m: KV4Module) -> Subspace:
    return subspace_intersect(kernel(m.A), kernel(m.B))


def head_dim(m: KV4Module) -> int:
    return m.dim - radical(m).dim


def is_stable(m: KV4Module, s: Subspace) -> bool:
    return all(s.contains(m.A.apply(b)) and s.contains(m.B.apply(b)) for b in s.basis)


def stable_closure(m: KV4Module, vectors: Iterable[int]) -> Subspace:
    ech = Echelon(m.field)
    todo = list(vectors)
    while todo:
        v = todo.pop()
        if ech.insert(v):
            todo.append(m.A.apply(v))
            todo.append(m.B.apply(v))
    return Subspace._from_echelon(m.field, m.dim, ech)


def submodule_on(m: KV4Module, s: Subspace):
    """Module structure on a stable subspace, in its RREF basis, plus inclusion."""
    F = m.field
    basis = s.basis

    def induced(M):
        cols = [s.coords(M.apply(b)) for b in basis]
        return ExactMatrix.from_columns(F, s.dim, cols)

    sub = KV4Module(F, induced(m.A), induced(m.B))
    return sub, ModuleMap(sub, m, ExactMatrix.from_columns(F, m.dim, list(basis)))


def submodule_generated(m: KV4Module, vectors: Iterable[int]):
    return submodule_on(m, stable_closure(m, vectors))


def quotient(m: KV4Module, s: Subspace):
    """(m/s, projection), using the non-pivot coordinates of s as basis."""
    if s.ambient != m.dim:
        raise DimensionMismatch("subspace ambient does not match module")
    if not is_stable(m, s):
        raise NotStable("subspace is not invariant under a and b")
    F = m.field
    comp = s.complement_indices()

    def restrict(v):
        v = s.reduce(v)
        out = 0
        for j, c in enumerate(comp):
            x = vget(F, v, c)
            if x:
                out |= x << (j * F.e)
        return out

    proj_cols = [restrict(vunit(F, i)) for i in range(m.dim)]
    proj = ExactMatrix.from_columns(F, len(comp), proj_cols)

    def induced(M):
        return ExactMatrix.from_columns(F, len(comp), [restrict(M.columns[c]) for c in comp])

    q = KV4Module(F, induced(m.A), induced(m.B), [m.labels[c] for c in comp])
    return q, ModuleMap(m, q, proj)


def change_basis(m: KV4Module, T: ExactMatrix, Tinv: ExactMatrix, labels=None) -> KV4Module:
    """Module whose i-th basis vector is column i of T (so actions become Tinv A T)."""
    return KV4Module(m.field, Tinv @ m.A @ T, Tinv @ m.B @ T, labels)


def hom_space(m: KV4Module, n: KV4Module) -> list[ModuleMap]:
    """Basis of equivariant maps m -> n."""
    if m.field != n.field:
        raise FieldMismatch("modules over different fields")
    F = m.field
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return []
    e = F.e
    rows = []
    # unknown X[i, j] sits at index i*dm + j
    for Am, An in ((m.A, n.A), (m.B, n.B)):
        cols_m = Am.columns
        for i in range(dn):
            for j in range(dm):
                r = 0
                # (X Am)[i, j] = sum_k X[i, k] Am[k, j]
                col = cols_m[j]
                r ^= col << (i * dm * e)
                # (An X)[i, j] = sum_k An[i, k] X[k, j]
                for k, x in vsupport(F, An.rows[i]):
                    r ^= x << ((k * dm + j) * e)
                if r:
                    rows.append(r)
    eqs = ExactMatrix(F, len(rows), dn * dm, rows)
    out = []
    mask = (1 << (dm * e)) - 1
    for v in kernel(eqs).basis:
        mrows = [(v >> (i * dm * e)) & mask for i in range(dn)]
        out.append(ModuleMap(m, n, ExactMatrix(F, dn, dm, mrows)))
    return out


# -------------------------------------------------------------------- file io

def _hex(x: int) -> str:
    return format(x, "x")


def format_module(m: KV4Module) -> str:
    lines = [f"kv4mod v1 field={m.field} dim={m.dim}"]
    for tag, M in (("A", m.A), ("B", m.B)):
        for r, c, x in M.entries():
            lines.append(f"{tag} {r} {c} {_hex(x)}")
    default = tuple(f"e{i}" for i in range(m.dim))
    if m.labels != default:
        for i, name in enumerate(m.labels):
            lines.append(f"label {i} {name}")
    return "\n".join(lines) + "\n"


def parse_module(text: str, first_line: int = 1) -> KV4Module:
    lines = [(i + first_line, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise FormatError("empty module document")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 4 or parts[:2] != ["kv4mod", "v1"]:
        raise FormatError("expected header 'kv4mod v1 field=<f> dim=<d>'", lineno)
    try:
        kv = dict(p.split("=", 1) for p in parts[2:])
        field = parse_field(kv["field"])
        dim = int(kv["dim"])
    except Exception as exc:
        raise FormatError(f"bad header: {exc}", lineno) from None
    if dim < 0:
        raise FormatError("negative dimension", lineno)
    entries = {"A": [], "B": []}
    labels = [f"e{i}" for i in range(dim)]
    for lineno, ln in lines[1:]:
        p = ln.split()
        try:
            if p[0] in entries and len(p) == 4:
                r, c, x = int(p[1]), int(p[2]), int(p[3], 16)
                if not (0 <= r < dim and 0 <= c < dim):
                    raise ValueError(f"index ({r}, {c}) out of range")
                if not 0 <= x < field.order:
                    raise ValueError(f"entry {p[3]} outside {field}")
                entries[p[0]].append((r, c, x))
            elif p[0] == "label" and len(p) == 3:
                i = int(p[1])
                if not 0 <= i < dim:
                    raise ValueError(f"label index {i} out of range")
                labels[i] = p[2]
            else:
                raise ValueError(f"unrecognised line {ln!r}")
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
    A = ExactMatrix.from_entries(field, dim, dim, entries["A"])
    B = ExactMatrix.from_entries(field, dim, dim, entries["B"])
    try:
        return module_make(field, A, B, labels)
    except RelationViolation as exc:
        raise FormatError(str(exc)) from None


def save_module(m: KV4Module, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_module(m))


def load_module(path) -> KV4Module:
    with open(path, encoding="utf-8") as fh:
        return parse_module(fh.read())
