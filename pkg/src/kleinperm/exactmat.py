"""Exact dense linear algebra over GF(2^e).

Vectors and matrix rows are Python ints holding packed e-bit limbs: entry j of
a vector lives in bits [j*e, (j+1)*e).  Over GF(2) this is plain bit packing,
so adding rows is a single XOR on arbitrarily wide words.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import AmbientMismatch, DimensionMismatch
from .gf2k import GF2, FieldPoly, FieldSpec


# ---------------------------------------------------------------- limb helpers

def vget(F: FieldSpec, v: int, j: int) -> int:
    if F.e == 1:
        return (v >> j) & 1
    return (v >> (j * F.e)) & F.mask


def vunit(F: FieldSpec, j: int, c: int = 1) -> int:
    return c << (j * F.e)


def vscale(F: FieldSpec, v: int, c: int) -> int:
    if c == 1 or not v:
        return v
    if c == 0:
        return 0
    e, mask = F.e, F.mask
    out, shift = 0, 0
    while v:
        x = v & mask
        if x:
            out |= F.mul(x, c) << shift
        v >>= e
        shift += e
    return out


def vlead(F: FieldSpec, v: int) -> int:
    """Index of the lowest nonzero entry (v != 0)."""
    return ((v & -v).bit_length() - 1) // F.e


def vfrom_list(F: FieldSpec, xs: Iterable[int]) -> int:
    v = 0
    for j, x in enumerate(xs):
        if x:
            v |= x << (j * F.e)
    return v


def vto_list(F: FieldSpec, v: int, n: int) -> list[int]:
    return [vget(F, v, j) for j in range(n)]


def vsupport(F: FieldSpec, v: int):
    """Yield (index, entry) for nonzero entries in increasing index order."""
    e, mask = F.e, F.mask
    while v:
        low = v & -v
        j = (low.bit_length() - 1) // e
        x = (v >> (j * e)) & mask
        yield j, x
        v ^= x << (j * e)


def vdot(F: FieldSpec, u: int, v: int) -> int:
    if F.e == 1:
        return (u & v).bit_count() & 1
    acc = 0
    for j, x in vsupport(F, u):
        y = vget(F, v, j)
        if y:
            acc ^= F.mul(x, y)
    return acc


def vcombine(F: FieldSpec, vectors: Sequence[int], coeffs: int) -> int:
    """sum_j coeffs[j] * vectors[j], with coeffs given as a packed vector."""
    acc = 0
    if F.e == 1:
        while coeffs:
            low = coeffs & -coeffs
            acc ^= vectors[low.bit_length() - 1]
            coeffs ^= low
        return acc
    for j, c in vsupport(F, coeffs):
        acc ^= vscale(F, vectors[j], c)
    return acc


# ------------------------------------------------------------------- echelon

class Echelon:
    """Incremental row echelon basis keyed by lowest nonzero column.

    Stored rows have leading entry 1.  Columns at or beyond ``limit`` are
    never used as pivots, which lets callers carry a tag in high limbs and
    read off the combination that produced each row.
    """

    __slots__ = ("F", "limit", "piv", "_lim_mask")

    def __init__(self, F: FieldSpec, limit: int | None = None):
        self.F = F
        self.limit = limit
        self.piv: dict[int, int] = {}
        self._lim_mask = -1 if limit is None else (1 << (limit * F.e)) - 1

    @property
    def rank(self) -> int:
        return len(self.piv)

    def reduce(self, v: int) -> int:
        """Eliminate every pivot column from v (tag limbs ride along)."""
        F, piv, lm = self.F, self.piv, self._lim_mask
        if F.e == 1:
            data = v & lm
            while data:
                low = data & -data
                p = piv.get(low.bit_length() - 1)
                if p is not None:
                    v ^= p
                    data = v & lm
                    data &= ~((low << 1) - 1)
                else:
                    data ^= low
            return v
        e, mask = F.e, F.mask
        data = v & lm
        while data:
            low = data & -data
            j = (low.bit_length() - 1) // e
            p = piv.get(j)
            if p is not None:
                c = (v >> (j * e)) & mask
                v ^= vscale(F, p, c)
                data = v & lm
            data &= ~((1 << ((j + 1) * e)) - 1)
        return v

    def insert(self, v: int) -> int:
        """Reduce v; store it if the data part survives.  Returns the residual."""
        v = self.reduce(v)
        data = v & self._lim_mask
        if data:
            F = self.F
            j = vlead(F, data)
            if F.e != 1:
                v = vscale(F, v, F.inv(vget(F, v, j)))
            self.piv[j] = v
        return v

    def contains(self, v: int) -> bool:
        return not (self.reduce(v) & self._lim_mask)

    def reduced_rows(self) -> list[tuple[int, int]]:
        """(pivot, row) pairs in RREF, ascending pivot order."""
        F = self.F
        cols = sorted(self.piv)
        rows = {c: self.piv[c] for c in cols}
        for idx in range(len(cols) - 1, -1, -1):
            pc = cols[idx]
            prow = rows[pc]
            for jdx in range(idx):
                qc = cols[jdx]
                c = vget(F, rows[qc], pc)
                if c:
                    rows[qc] ^= vscale(F, prow, c)
        return [(c, rows[c]) for c in cols]


# -------------------------------------------------------------------- matrix

class ExactMatrix:
    """Immutable nrows x ncols matrix; rows stored as packed ints."""

    __slots__ = ("field", "nrows", "ncols", "rows", "_cols")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, rows: Sequence[int]):
        if len(rows) != nrows:
            raise DimensionMismatch(f"expected {nrows} rows, got {len(rows)}")
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(rows)
        self._cols = None

    # constructors
    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols, [0] * nrows)

    @classmethod
    def identity(cls, field, n):
        return cls(field, n, n, [vunit(field, i) for i in range(n)])

    @classmethod
    def from_lists(cls, field, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for r in data:
            if len(r) != ncols:
                raise DimensionMismatch("ragged matrix rows")
            for x in r:
                if not 0 <= x < field.order:
                    raise ValueError(f"entry {x} outside {field}")
        return cls(field, len(data), ncols, [vfrom_list(field, r) for r in data])

    @classmethod
    def from_columns(cls, field, nrows, columns: Sequence[int]):
        return cls(field, len(columns), nrows, list(columns)).T

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries):
        rows = [0] * nrows
        for r, c, x in entries:
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise DimensionMismatch(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            rows[r] ^= (vget(field, rows[r], c) ^ x) << (c * field.e)
        return cls(field, nrows, ncols, rows)

    # access
    def __getitem__(self, rc):
        r, c = rc
        return vget(self.field, self.rows[r], c)

    def to_lists(self):
        return [vto_list(self.field, r, self.ncols) for r in self.rows]

    def entries(self):
        """Nonzero entries as (row, col, value), row-major."""
        for i, r in enumerate(self.rows):
            for j, x in vsupport(self.field, r):
                yield i, j, x

    @property
    def columns(self) -> tuple[int, ...]:
        if self._cols is None:
            self._cols = _transpose_rows(self.field, self.rows, self.ncols)
        return self._cols

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def T(self) -> "ExactMatrix":
        t = ExactMatrix(self.field, self.ncols, self.nrows, self.columns)
        t._cols = self.rows
        return t

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.field == other.field
                and self.shape == other.shape and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return f"ExactMatrix({self.field}, {self.nrows}x{self.ncols})"

    def is_zero(self) -> bool:
        return not any(self.rows)

    # arithmetic
    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return ExactMatrix(self.field, self.nrows, self.ncols,
                           [a ^ b for a, b in zip(self.rows, other.rows)])

    __sub__ = __add__

    def scale(self, c: int) -> "ExactMatrix":
        F = self.field
        return ExactMatrix(F, self.nrows, self.ncols, [vscale(F, r, c) for r in self.rows])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        F, brows = self.field, other.rows
        return ExactMatrix(F, self.nrows, other.ncols,
                           [vcombine(F, brows, r) for r in self.rows])

    def apply(self, v: int) -> int:
        """Matrix times column vector (both packed)."""
        return vcombine(self.field, self.columns, v)

    def apply_all(self, vs: Iterable[int]) -> list[int]:
        cols, F = self.columns, self.field
        return [vcombine(F, cols, v) for v in vs]

    def row_apply(self, v: int) -> int:
        """Row vector times matrix."""
        return vcombine(self.field, self.rows, v)

    def select_rows(self, idx):
        return ExactMatrix(self.field, len(idx), self.ncols, [self.rows[i] for i in idx])

    def select_columns(self, idx):
        cols = self.columns
        return ExactMatrix.from_columns(self.field, self.nrows, [cols[j] for j in idx])

    @property
    def rank(self) -> int:
        ech = Echelon(self.field)
        for r in self.rows:
            ech.insert(r)
        return ech.rank


def _transpose_rows(F: FieldSpec, rows: Sequence[int], ncols: int) -> tuple[int, ...]:
    cols = [0] * ncols
    if F.e == 1:
        for i, r in enumerate(rows):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return tuple(cols)
    for i, r in enumerate(rows):
        for j, x in vsupport(F, r):
            cols[j] |= x << (i * F.e)
    return tuple(cols)


def hstack(ms: Sequence[ExactMatrix]) -> ExactMatrix:
    F = ms[0].field
    n = ms[0].nrows
    rows = [0] * n
    shift = 0
    for m in ms:
        if m.nrows != n:
            raise DimensionMismatch("hstack row counts differ")
        for i, r in enumerate(m.rows):
            rows[i] |= r << (shift * F.e)
        shift += m.ncols
    return ExactMatrix(F, n, shift, rows)


def vstack(ms: Sequence[ExactMatrix]) -> ExactMatrix:
    F = ms[0].field
    nc = ms[0].ncols
    rows = []
    for m in ms:
        if m.ncols != nc:
            raise DimensionMismatch("vstack column counts differ")
        rows.extend(m.rows)
    return ExactMatrix(F, len(rows), nc, rows)


def block_diag(ms: Sequence[ExactMatrix], field: FieldSpec = GF2) -> ExactMatrix:
    if not ms:
        return ExactMatrix.zeros(field, 0, 0)
    F = ms[0].field
    rows, shift = [], 0
    total = sum(m.ncols for m in ms)
    for m in ms:
        rows.extend(r << (shift * F.e) for r in m.rows)
        shift += m.ncols
    return ExactMatrix(F, len(rows), total, rows)


# ------------------------------------------------------------------ subspace

class Subspace:
    """Subspace of F^ambient with canonical RREF row basis."""

    __slots__ = ("field", "ambient", "basis", "pivots", "_ech")

    def __init__(self, field: FieldSpec, ambient: int, basis=(), pivots=()):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)
        self._ech = None

    @classmethod
    def span(cls, field, ambient, vectors: Iterable[int]) -> "Subspace":
        ech = Echelon(field)
        for v in vectors:
            ech.insert(v)
        return cls._from_echelon(field, ambient, ech)

    @classmethod
    def _from_echelon(cls, field, ambient, ech: Echelon) -> "Subspace":
        pr = ech.reduced_rows()
        return cls(field, ambient, [r for _, r in pr], [p for p, _ in pr])

    @classmethod
    def zero(cls, field, ambient):
        return cls(field, ambient)

    @classmethod
    def full(cls, field, ambient):
        return cls(field, ambient, [vunit(field, i) for i in range(ambient)], range(ambient))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def _echelon(self) -> Echelon:
        if self._ech is None:
            ech = Echelon(self.field)
            ech.piv = dict(zip(self.pivots, self.basis))
            self._ech = ech
        return self._ech

    def reduce(self, v: int) -> int:
        return self._echelon().reduce(v)

    def contains(self, v: int) -> bool:
        return not self._echelon().reduce(v)

    def __contains__(self, v: int) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def coords(self, v: int) -> int:
        """Coordinates of v (assumed inside) w.r.t. the RREF basis."""
        F = self.field
        return vfrom_list(F, [vget(F, v, p) for p in self.pivots])

    def from_coords(self, c: int) -> int:
        return vcombine(self.field, self.basis, c)

    def complement_indices(self) -> list[int]:
        pv = set(self.pivots)
        return [j for j in range(self.ambient) if j not in pv]

    def matrix(self) -> ExactMatrix:
        return ExactMatrix(self.field, self.dim, self.ambient, self.basis)


def _check_ambient(u: Subspace, v: Subspace):
    if u.ambient != v.ambient or u.field != v.field:
        raise AmbientMismatch(f"ambient {u.ambient} vs {v.ambient}")


# ------------------------------------------------------------ core algorithms

def rref(m: ExactMatrix):
    """(RREF matrix, rank, pivot columns); zero rows are dropped to the bottom."""
    ech = Echelon(m.field)
    for r in m.rows:
        ech.insert(r)
    pr = ech.reduced_rows()
    rows = [r for _, r in pr] + [0] * (m.nrows - len(pr))
    return ExactMatrix(m.field, m.nrows, m.ncols, rows), len(pr), [p for p, _ in pr]


def dependencies(F: FieldSpec, vectors: Sequence[int], width: int) -> list[int]:
    """Basis of {c : sum c_j vectors[j] = 0}, each c packed over len(vectors)."""
    ech = Echelon(F, limit=width)
    out = []
    shift = width * F.e
    for j, v in enumerate(vectors):
        r = ech.insert(v | (1 << (shift + j * F.e)))
        if not r & ech._lim_mask:
            out.append(r >> shift)
    return out


def kernel(m: ExactMatrix) -> Subspace:
    return Subspace.span(m.field, m.ncols, dependencies(m.field, m.columns, m.nrows))


def image(m: ExactMatrix) -> Subspace:
    return Subspace.span(m.field, m.nrows, m.columns)


def preimage(m: ExactMatrix, s: Subspace) -> Subspace:
    if s.ambient != m.nrows:
        raise DimensionMismatch(f"subspace ambient {s.ambient} vs {m.nrows} rows")
    res = [s.reduce(c) for c in m.columns]
    return Subspace.span(m.field, m.ncols, dependencies(m.field, res, m.nrows))


def solve(m: ExactMatrix, rhs: int):
    """Some x with m x = rhs, or None."""
    F = m.field
    width = m.nrows
    shift = width * F.e
    ech = Echelon(F, limit=width)
    for j, c in enumerate(m.columns):
        ech.insert(c | (1 << (shift + j * F.e)))
    r = ech.reduce(rhs)
    if r & ech._lim_mask:
        return None
    return r >> shift


def solve_rows(F: FieldSpec, rows: Sequence[int], nvars: int):
    """Solve a system given as rows packing [coefficients | rhs] (rhs at limb nvars).

    Returns one solution as a packed vector, or None if inconsistent.
    """
    ech = Echelon(F)
    rhs_col = nvars
    for r in rows:
        res = ech.insert(r)
        if res and vlead(F, res) == rhs_col:
            return None
    # back substitution: free variables set to zero
    x = 0
    for p, row in reversed(ech.reduced_rows()):
        c = vget(F, row, rhs_col)
        if c:
            x |= c << (p * F.e)
    return x


def inverse(m: ExactMatrix) -> ExactMatrix:
    if m.nrows != m.ncols:
        raise DimensionMismatch("inverse of non-square matrix")
    F, n = m.field, m.nrows
    shift = n * F.e
    ech = Echelon(F, limit=n)
    for i, r in enumerate(m.rows):
        ech.insert(r | (1 << (shift + i * F.e)))
    if ech.rank != n:
        raise ZeroDivisionError("matrix is singular")
    rows = [r >> shift for _, r in ech.reduced_rows()]
    return ExactMatrix(F, n, n, rows)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace.span(u.field, u.ambient, u.basis + v.basis)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    res = [v.reduce(b) for b in u.basis]
    deps = dependencies(u.field, res, u.ambient)
    return Subspace.span(u.field, u.ambient, [vcombine(u.field, u.basis, c) for c in deps])


def map_subspace(m: ExactMatrix, s: Subspace) -> Subspace:
    """Image m(s)."""
    return Subspace.span(m.field, m.nrows, m.apply_all(s.basis))


# ------------------------------------------------------- matrix polynomials

def flatten(m: ExactMatrix) -> int:
    shift = m.ncols * m.field.e
    out = 0
    for i, r in enumerate(m.rows):
        out |= r << (i * shift)
    return out


def minimal_polynomial(m: ExactMatrix):
    """Minimal polynomial of a square matrix, found by Krylov on its powers."""
    F, n = m.field, m.nrows
    width = n * n
    shift = width * F.e
    ech = Echelon(F, limit=width)
    power = ExactMatrix.identity(F, n)
    k = 0
    while True:
        r = ech.insert(flatten(power) | (1 << (shift + k * F.e)))
        if not r & ech._lim_mask:
            tag = r >> shift
            coeffs = [vget(F, tag, j) for j in range(k + 1)]
            lead = coeffs[-1]
            if lead != 1:
                inv = F.inv(lead)
                coeffs = [F.mul(c, inv) for c in coeffs]
            return FieldPoly(F, coeffs)
        power = power @ m
        k += 1


def poly_eval_matrix(f, m: ExactMatrix) -> ExactMatrix:
    """f(m) by Horner's rule."""
    F, n = m.field, m.nrows
    acc = ExactMatrix.zeros(F, n, n)
    ident = ExactMatrix.identity(F, n)
    for c in reversed(f.coeffs):
        acc = acc @ m
        if c:
            acc = acc + ident.scale(c)
    return acc


def matrix_power(m: ExactMatrix, k: int) -> ExactMatrix:
    out = ExactMatrix.identity(m.field, m.nrows)
    base = m
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out
