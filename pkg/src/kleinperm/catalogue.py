"""Constructors for every indecomposable module and the permutation indecomposables.

Basis order is always the u-row followed by the v-row, each ascending by index.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FNotMonic, LabelSyntaxError, ReducibleF
from .exactmat import ExactMatrix
from .gf2k import GF2, FieldPoly, FieldSpec, format_poly, is_irreducible, parse_poly, poly_power
from .kv4mod import KV4Module

KINDS = ("Triv", "Reg", "M", "W", "E", "EInf")
_RANK = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class IndecompLabel:
    kind: str
    n: int = 0
    f: FieldPoly | None = None

    def __post_init__(self):
        if self.kind not in _RANK:
            raise LabelSyntaxError(f"unknown kind {self.kind!r}")
        if self.kind in ("Triv", "Reg"):
            if self.n or self.f is not None:
                raise LabelSyntaxError(f"{self.kind} takes no parameters")
        elif self.n < 1:
            raise LabelSyntaxError(f"{self.kind} needs n >= 1")
        if (self.kind == "E") != (self.f is not None):
            raise LabelSyntaxError("exactly the E kind carries a polynomial")

    @property
    def dim(self) -> int:
        if self.kind == "Triv":
            return 1
        if self.kind == "Reg":
            return 4
        if self.kind in ("M", "W"):
            return 2 * self.n + 1
        if self.kind == "E":
            return 2 * self.n * self.f.degree
        return 2 * self.n

    def sort_key(self):
        fk = () if self.f is None else (self.f.degree, tuple(reversed(self.f.coeffs)))
        return (_RANK[self.kind], self.n, fk)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_label(self)

    def __repr__(self):
        return f"IndecompLabel({format_label(self)})"


TRIV = IndecompLabel("Triv")
REG = IndecompLabel("Reg")


def M(n):
    return IndecompLabel("M", n)


def W(n):
    return IndecompLabel("W", n)


def E(f, n, field: FieldSpec = GF2):
    if isinstance(f, str):
        f = parse_poly(f, field)
    return IndecompLabel("E", n, f)


def EInf(n):
    return IndecompLabel("EInf", n)


def E_T(n=1, field=GF2):
    return IndecompLabel("E", n, FieldPoly.t(field))


def E_T1(n=1, field=GF2):
    return IndecompLabel("E", n, FieldPoly(field, (1, 1)))


# ----------------------------------------------------------------- strings

_LABEL_RE = re.compile(r"^(?:(k|kV4)|([MW])(\d+)|E\[([^,\]]+),(\d+)\]|Einf\[(\d+)\])$")


def parse_label(text: str, field: FieldSpec = GF2) -> IndecompLabel:
    s = text.strip().replace(" ", "")
    m = _LABEL_RE.match(s)
    if not m:
        raise LabelSyntaxError(f"cannot parse label {text!r}")
    try:
        if m.group(1):
            return TRIV if m.group(1) == "k" else REG
        if m.group(2):
            d = int(m.group(3))
            if d < 3 or d % 2 == 0:
                raise LabelSyntaxError(f"{m.group(2)} needs an odd dimension >= 3, got {d}")
            return IndecompLabel(m.group(2), (d - 1) // 2)
        if m.group(4):
            f = parse_poly(m.group(4), field)
            return IndecompLabel("E", int(m.group(5)), f)
        return IndecompLabel("EInf", int(m.group(6)))
    except ValueError as exc:
        raise LabelSyntaxError(str(exc)) from None


def format_label(label: IndecompLabel) -> str:
    k = label.kind
    if k == "Triv":
        return "k"
    if k == "Reg":
        return "kV4"
    if k in ("M", "W"):
        return f"{k}{2 * label.n + 1}"
    if k == "E":
        return f"E[{format_poly(label.f)},{label.n}]"
    return f"Einf[{label.n}]"


def dual_label(label: IndecompLabel) -> IndecompLabel:
    if label.kind == "M":
        return W(label.n)
    if label.kind == "W":
        return M(label.n)
    return label


def heller_label(label: IndecompLabel) -> IndecompLabel | None:
    """Label of the kernel of the projective cover (None for the zero module)."""
    k = label.kind
    if k == "Reg":
        return None
    if k == "Triv":
        return W(1)
    if k == "M":
        return TRIV if label.n == 1 else M(label.n - 1)
    if k == "W":
        return W(label.n + 1)
    return label


# ------------------------------------------------------------- construction

def _coerce_poly(f: FieldPoly, field: FieldSpec) -> FieldPoly:
    if f.field == field:
        return f
    if any(c > 1 for c in f.coeffs):
        raise ValueError(f"polynomial {f} is not defined over {field}")
    return FieldPoly(field, f.coeffs)


def _basis_names(label: IndecompLabel, field: FieldSpec):
    k, n = label.kind, label.n
    if k == "Triv":
        return ["theta"]
    if k == "Reg":
        return ["1", "a", "b", "ab"]
    if k == "M":
        return [f"u{i}" for i in range(1, n + 1)] + [f"v{i}" for i in range(n + 1)]
    if k == "W":
        return [f"u{i}" for i in range(n + 1)] + [f"v{i}" for i in range(1, n + 1)]
    m = label.dim // 2
    return [f"u{i}" for i in range(m)] + [f"v{i}" for i in range(m)]


def construct(label: IndecompLabel, field: FieldSpec = GF2) -> KV4Module:
    k, n = label.kind, label.n
    names = _basis_names(label, field)
    idx = {name: i for i, name in enumerate(names)}
    d = len(names)
    a_ent, b_ent = [], []

    def edge(ent, src, tgt, c=1):
        ent.append((idx[tgt], idx[src], c))

    if k == "Reg":
        edge(a_ent, "1", "a")
        edge(a_ent, "b", "ab")
        edge(b_ent, "1", "b")
        edge(b_ent, "a", "ab")
    elif k == "M":
        for i in range(1, n + 1):
            edge(a_ent, f"u{i}", f"v{i - 1}")
            edge(b_ent, f"u{i}", f"v{i}")
    elif k == "W":
        for i in range(n + 1):
            if i >= 1:
                edge(a_ent, f"u{i}", f"v{i}")
            if i <= n - 1:
                edge(b_ent, f"u{i}", f"v{i + 1}")
    elif k == "E":
        f = _coerce_poly(label.f, field)
        if not f.is_monic:
            raise FNotMonic(f"{f} is not monic")
        if not is_irreducible(f):
            raise ReducibleF(f"{f} is reducible over {field}")
        m = d // 2
        alphas = poly_power(f, n).lower_coeffs()
        for i in range(m):
            edge(a_ent, f"u{i}", f"v{i}")
            if i < m - 1:
                edge(b_ent, f"u{i}", f"v{i + 1}")
        for i, c in enumerate(alphas):
            if c:
                edge(b_ent, f"u{m - 1}", f"v{i}", c)
    elif k == "EInf":
        for i in range(n):
            if i >= 1:
                edge(a_ent, f"u{i}", f"v{i - 1}")
            edge(b_ent, f"u{i}", f"v{i}")
    A = ExactMatrix.from_entries(field, d, d, a_ent)
    B = ExactMatrix.from_entries(field, d, d, b_ent)
    return KV4Module(field, A, B, names)


def basis_index(label: IndecompLabel, name: str, field: FieldSpec = GF2) -> int:
    return _basis_names(label, field).index(name)


# ----------------------------------------------------- permutation modules

def perm_labels(field: FieldSpec = GF2) -> list[IndecompLabel]:
    return [TRIV, E_T(1, field), E_T1(1, field), EInf(1), REG]


def perm_indecomposables(field: FieldSpec = GF2):
    return [(lab, construct(lab, field)) for lab in perm_labels(field)]


def is_perm_label(label: IndecompLabel) -> bool:
    if label.kind in ("Triv", "Reg"):
        return True
    if label.kind == "EInf":
        return label.n == 1
    if label.kind == "E":
        return label.n == 1 and label.f.degree == 1 and label.f.coeffs[0] in (0, 1)
    return False


def generator_words(label: IndecompLabel) -> list[str]:
    """For a cyclic permutation indecomposable: basis vector j = word_j . generator."""
    if label.kind == "Triv":
        return [""]
    if label.kind == "Reg":
        return ["", "a", "b", "ab"]
    if label.kind == "EInf":
        return ["", "b"]
    return ["", "a"]


# -------------------------------------------------------- resolution recipes

@dataclass(frozen=True)
class Recipe:
    """Generator images for a surjection from a permutation module.

    ``summands`` lists (permutation label, target basis names summed to give the
    image of that summand's generator), in direct-sum order.  ``length`` is the
    length of the resulting minimal permutation resolution.
    """

    pattern: str
    length: int
    summands: tuple


def _gens(kind_label, names):
    return (kind_label, tuple(names))


def _recipe_table():
    k, R = TRIV, REG
    et, et1, einf = E_T(1), E_T1(1), EInf(1)
    return {
        "M3": (1, lambda n: [_gens(R, ["u1"])]),
        "M5": (1, lambda n: [_gens(R, ["u1"]), _gens(k, ["v1"]), _gens(R, ["u2"])]),
        "M7": (1, lambda n: [_gens(k, ["v1", "v2"])] + [_gens(R, [f"u{i}"]) for i in (1, 2, 3)]),
        "W3": (1, lambda n: [_gens(einf, ["u0"]), _gens(et, ["u1"])]),
        "W5": (1, lambda n: [_gens(einf, ["u0"]), _gens(et1, ["u0", "u1", "u2"]), _gens(et, ["u2"])]),
        "E[t,2]": (1, lambda n: [_gens(R, ["u0"]), _gens(et, ["u1"])]),
        "E[t+1,2]": (1, lambda n: [_gens(R, ["u0"]), _gens(et1, ["u0", "u1"])]),
        "Einf[2]": (1, lambda n: [_gens(einf, ["u0"]), _gens(R, ["u1"])]),
        "M(n)": (2, lambda n: [_gens(k, [f"v{i}"]) for i in range(n + 1)]
                 + [_gens(R, [f"u{i}"]) for i in range(1, n + 1)]),
        "W(n)": (2, lambda n: [_gens(k, [f"v{i}"]) for i in range(1, n + 1)]
                 + [_gens(R, [f"u{i}"]) for i in range(n + 1)]),
        "E(f,n)": (2, lambda m: [_gens(k, [f"v{i}"]) for i in range(m)]
                   + [_gens(R, [f"u{i}"]) for i in range(m)]),
        "Einf(n)": (2, lambda n: [_gens(R, [f"u{i}"]) for i in range(n)]
                    + [_gens(k, [f"v{i}"]) for i in range(n)]),
    }


def resolution_catalogue_sources() -> dict:
    """Pattern name -> (resolution length, summand builder taking n or m)."""
    return dict(_recipe_table())


def recipe_for(label: IndecompLabel) -> Recipe:
    """Recipe for the first step of a minimal permutation resolution."""
    if is_perm_label(label):
        return Recipe(format_label(label), 0, ((label, None),))
    table = _recipe_table()
    key = format_label(label)
    if key in table:
        length, build = table[key]
        return Recipe(key, length, tuple(build(label.n)))
    pattern = {"M": "M(n)", "W": "W(n)", "E": "E(f,n)", "EInf": "Einf(n)"}[label.kind]
    length, build = table[pattern]
    arg = label.dim // 2 if label.kind == "E" else label.n
    return Recipe(pattern, length, tuple(build(arg)))


def catalogue_ppdim(label: IndecompLabel) -> int:
    """Permutation dimension of an indecomposable from the classification table."""
    return recipe_for(label).length
