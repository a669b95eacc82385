"""Text language for module diagrams, plus an ASCII renderer.

A document describes one module by its basis nodes and, for each of ``a``
and ``b``, where every node is sent::

    module m3 over gf2 {
      basis u1 v0 v1;
      a: u1 -> v0;
      b: u1 -> v1;
    }

Targets are linear combinations ``c*name + ...`` with hexadecimal field
coefficients (a coefficient must start with a decimal digit, so ``0a*x``
rather than ``a*x``); ``0`` is the empty combination.  ``#`` starts a
comment.  Nodes absent from a section are sent to zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .catalogue import IndecompLabel, construct, format_label
from .decomp import decompose
from .errors import DslSyntaxError, DuplicateNode, UnknownNode
from .exactmat import ExactMatrix
from .gf2k import GF2, FieldSpec, parse_field
from .kv4mod import KV4Module, direct_sum, module_make, zero_module

MAX_FIELD_DEGREE = 16

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")
_HEX = re.compile(r"[0-9][0-9a-fA-F]*")
_FIELD = re.compile(r"gf2(?:\^[0-9]+(?::[0-9a-fA-F]+)?)?(?![A-Za-z0-9_.^:])")
_SPACE = re.compile(r"(?:\s+|#[^\n]*)*")


@dataclass(frozen=True)
class DiagramAst:
    """Parsed diagram: edges are (source, ((coef, target), ...)) in source order."""

    name: str
    field: FieldSpec
    nodes: tuple
    a_edges: tuple = ()
    b_edges: tuple = ()

    def edge_map(self, which: str) -> dict:
        """{source: {target: coef}} with repeated targets summed and zeros dropped."""
        out = {}
        for src, terms in (self.a_edges if which == "a" else self.b_edges):
            acc = {}
            for c, tgt in terms:
                acc[tgt] = acc.get(tgt, 0) ^ c
            acc = {t: c for t, c in acc.items() if c}
            if acc:
                out[src] = acc
        return out

    def normalized(self):
        """Order-free form used to compare diagrams up to node ordering."""
        return (self.field, frozenset(self.nodes),
                frozenset((s, frozenset(t.items())) for s, t in self.edge_map("a").items()),
                frozenset((s, frozenset(t.items())) for s, t in self.edge_map("b").items()))


# ------------------------------------------------------------------ parser

class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def where(self, i=None):
        i = self.i if i is None else i
        line = self.s.count("\n", 0, i) + 1
        col = i - (self.s.rfind("\n", 0, i) + 1) + 1
        return line, col

    def fail(self, message, i=None, cls=DslSyntaxError):
        raise cls(message, *self.where(i))

    def skip(self):
        self.i = _SPACE.match(self.s, self.i).end()

    def peek(self, lit):
        self.skip()
        return self.s.startswith(lit, self.i)

    def expect(self, lit, what=None):
        if not self.peek(lit):
            self.fail(f"expected {what or repr(lit)}{self._found()}")
        self.i += len(lit)

    def _found(self):
        if self.i >= len(self.s):
            return ", found end of input"
        return f", found {self.s[self.i]!r}"

    def ident(self, what="a name"):
        self.skip()
        m = _IDENT.match(self.s, self.i)
        if not m:
            self.fail(f"expected {what}{self._found()}")
        self.i = m.end()
        return m.group(), m.start()

    def keyword(self, word):
        start = self.i
        name, pos = self.ident(repr(word))
        if name != word:
            self.fail(f"expected {word!r}, found {name!r}", pos)
        return start

    def field(self):
        self.skip()
        m = _FIELD.match(self.s, self.i)
        if not m:
            self.fail(f"expected a field such as gf2 or gf2^2:7{self._found()}")
        text = m.group()
        if "^" in text and int(text.split("^")[1].split(":")[0][:6]) > MAX_FIELD_DEGREE:
            self.fail(f"field degree above {MAX_FIELD_DEGREE} is not supported")
        try:
            F = parse_field(text)
        except Exception as exc:  # any invalid modulus is a diagnostic, not a crash
            self.fail(f"invalid field {text!r}: {exc}")
        self.i = m.end()
        return F

    def document(self) -> DiagramAst:
        self.keyword("module")
        name, _ = self.ident("a module name")
        self.keyword("over")
        F = self.field()
        self.expect("{")
        self.keyword("basis")
        nodes, seen = [], set()
        while not self.peek(";"):
            node, pos = self.ident("a node name or ';'")
            if node in seen:
                self.fail(f"node {node!r} declared twice", pos, DuplicateNode)
            seen.add(node)
            nodes.append(node)
        self.i += 1
        sections = {}
        while not self.peek("}"):
            which, pos = self.ident("'a', 'b' or '}'")
            if which not in ("a", "b"):
                self.fail(f"expected 'a', 'b' or '}}', found {which!r}", pos)
            if which in sections:
                self.fail(f"section {which!r} given twice", pos)
            self.expect(":")
            sections[which] = self.section(F, seen)
        self.i += 1
        self.skip()
        if self.i < len(self.s):
            self.fail("unexpected text after the closing brace")
        return DiagramAst(name, F, tuple(nodes), sections.get("a", ()), sections.get("b", ()))

    def section(self, F, nodes):
        edges, sources = [], set()
        if self.peek(";"):
            self.i += 1
            return ()
        if self.peek("}"):
            return ()
        while True:
            src, pos = self.ident("a source node")
            if src not in nodes:
                self.fail(f"unknown node {src!r}", pos, UnknownNode)
            if src in sources:
                self.fail(f"source {src!r} listed twice in one section", pos)
            sources.add(src)
            self.expect("->")
            edges.append((src, self.lincomb(F, nodes)))
            if self.peek(","):
                self.i += 1
                continue
            if self.peek(";"):
                self.i += 1
                return tuple(edges)
            if self.peek("}"):
                return tuple(edges)
            self.fail(f"expected ',', ';' or '}}'{self._found()}")

    def lincomb(self, F, nodes):
        terms = []
        while True:
            self.skip()
            m = _HEX.match(self.s, self.i)
            if m:
                if len(m.group()) > 2 * MAX_FIELD_DEGREE:
                    self.fail("coefficient too long", m.start())
                c = int(m.group(), 16)
                if c >= F.order:
                    self.fail(f"coefficient {m.group()} is not an element of {F}", m.start())
                self.i = m.end()
                if self.peek("*"):
                    self.i += 1
                    tgt, pos = self.ident("a target node")
                elif c == 0:
                    tgt = None
                else:
                    self.fail(f"expected '*' after coefficient{self._found()}")
            else:
                c = 1
                tgt, pos = self.ident("a target node or coefficient")
            if tgt is not None:
                if tgt not in nodes:
                    self.fail(f"unknown node {tgt!r}", pos, UnknownNode)
                terms.append((c, tgt))
            if not self.peek("+"):
                return tuple(terms)
            self.i += 1


def parse(text) -> DiagramAst:
    """Parse a diagram from str or UTF-8 bytes; errors carry line and column."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            head = bytes(text[:exc.start])
            line = head.count(b"\n") + 1
            col = exc.start - (head.rfind(b"\n") + 1) + 1
            raise DslSyntaxError("input is not valid UTF-8", line, col) from None
    return _Parser(text).document()


# ------------------------------------------------------------------ lowering

def lower(ast: DiagramAst) -> KV4Module:
    """Module with basis the declared nodes; raises RelationViolation on bad actions."""
    idx = {name: i for i, name in enumerate(ast.nodes)}
    d = len(ast.nodes)
    mats = []
    for which in ("a", "b"):
        entries = [(idx[t], idx[s], c) for s, terms in ast.edge_map(which).items()
                   for t, c in terms.items()]
        mats.append(ExactMatrix.from_entries(ast.field, d, d, entries))
    return module_make(ast.field, mats[0], mats[1], ast.nodes)


def to_ast(m: KV4Module, name: str = "m", nodes=None) -> DiagramAst:
    """Diagram of m in its own basis, without any change of basis."""
    nodes = tuple(nodes or m.labels)
    edges = []
    for M in (m.A, m.B):
        out = []
        for j in range(m.dim):
            terms = tuple((M[i, j], nodes[i]) for i in range(m.dim) if M[i, j])
            if terms:
                out.append((nodes[j], terms))
        edges.append(tuple(out))
    return DiagramAst(name, m.field, nodes, edges[0], edges[1])


def _coef(c: int) -> str:
    s = f"{c:x}"
    return s if s[0].isdigit() else "0" + s


def _lincomb(terms) -> str:
    if not terms:
        return "0"
    return " + ".join(t if c == 1 else f"{_coef(c)}*{t}" for c, t in terms)


def render_ast(ast: DiagramAst, groups=None) -> str:
    """Canonical text of a diagram.

    ``groups`` optionally splits the nodes into (caption, node names) blocks,
    each printed on its own basis line with a comment caption.
    """
    lines = [f"module {ast.name} over {ast.field} {{"]
    if groups:
        lines.append("  basis")
        for caption, names in groups:
            lines.append(f"    # {caption}")
            lines.append("    " + " ".join(names))
        lines.append("  ;")
    else:
        lines.append("  basis " + " ".join(ast.nodes) + ";")
    for which, edges in (("a", ast.a_edges), ("b", ast.b_edges)):
        if not edges:
            lines.append(f"  {which}: ;")
            continue
        lines.append(f"  {which}:")
        body = [f"    {src} -> {_lincomb(terms)}" for src, terms in edges]
        lines.append(",\n".join(body) + ";")
    lines.append("}")
    return "\n".join(lines) + "\n"


_REG_NAMES = ("w", "x", "y", "z")


def _diagram_names(label: IndecompLabel, field: FieldSpec):
    if label.kind == "Reg":
        return list(_REG_NAMES)
    return list(construct(label, field).labels)


def catalogue_ast(labels, field: FieldSpec = GF2, name: str = "m"):
    """AST of the direct sum of catalogue modules, plus per-summand node groups."""
    ms = [construct(lab, field) for lab in labels]
    total = direct_sum(ms, field)[0] if ms else zero_module(field)
    nodes, groups = [], []
    for i, lab in enumerate(labels):
        names = _diagram_names(lab, field)
        if len(labels) > 1:
            names = [f"{x}_{i + 1}" for x in names]
        nodes += names
        groups.append((format_label(lab), names))
    return to_ast(total, name, nodes), groups


def render(m: KV4Module, name: str = "m", seed: int = 0) -> str:
    """Decompose m and print the diagrams of its summands side by side in one module."""
    labels = decompose(m, seed).labels
    ast, groups = catalogue_ast(labels, m.field, name)
    return render_ast(ast, groups if groups else None)


# ------------------------------------------------------------------ ascii

def _layout(label: IndecompLabel, field: FieldSpec):
    """(rows, edges, notes): rows map (row, col) -> name, edges (r, c, r2, c2, char)."""
    k, n = label.kind, label.n
    nodes, edges, notes = {}, [], []
    if k == "Triv":
        nodes[(0, 0)] = "theta"
    elif k == "Reg":
        nodes.update({(0, 1): "w", (1, 0): "x", (1, 2): "y", (2, 1): "z"})
        edges += [(0, 1, 1, 0, "/"), (0, 1, 1, 2, "\\"), (1, 0, 2, 1, "\\"), (1, 2, 2, 1, "/")]
    elif k == "M":
        for i in range(n + 1):
            nodes[(1, 2 * i)] = f"v{i}"
        for i in range(1, n + 1):
            nodes[(0, 2 * i - 1)] = f"u{i}"
            edges += [(0, 2 * i - 1, 1, 2 * i - 2, "/"), (0, 2 * i - 1, 1, 2 * i, "\\")]
    elif k == "W":
        for i in range(n + 1):
            nodes[(0, 2 * i)] = f"u{i}"
            if i >= 1:
                nodes[(1, 2 * i - 1)] = f"v{i}"
                edges.append((0, 2 * i, 1, 2 * i - 1, "/"))
            if i < n:
                edges.append((0, 2 * i, 1, 2 * i + 1, "\\"))
    elif k == "EInf":
        for i in range(n):
            nodes[(0, 2 * i)] = f"u{i}"
            nodes[(1, 2 * i + 1)] = f"v{i}"
            edges.append((0, 2 * i, 1, 2 * i + 1, "\\"))
            if i >= 1:
                edges.append((0, 2 * i, 1, 2 * i - 1, "/"))
    else:
        m = construct(label, field)
        half = m.dim // 2
        for i in range(half):
            nodes[(1, 2 * i)] = f"v{i}"
            nodes[(0, 2 * i + 1)] = f"u{i}"
            edges.append((0, 2 * i + 1, 1, 2 * i, "/"))
            if i < half - 1:
                edges.append((0, 2 * i + 1, 1, 2 * i + 2, "\\"))
        last = m.B.columns[half - 1]
        terms = [(m.B[r, half - 1], m.labels[r]) for r in range(m.dim) if m.B[r, half - 1]]
        if last:
            nodes[(1, 2 * half)] = "o"
            edges.append((0, 2 * half - 1, 1, 2 * half, ":"))
            notes.append(f"o = {_lincomb(terms)}")
    return nodes, edges, notes


def _draw(label: IndecompLabel, field: FieldSpec):
    nodes, edges, notes = _layout(label, field)
    width = max(3, max(len(x) for x in nodes.values()) + 1)
    nrows = 1 + max(r for r, _ in nodes)
    ncols = 1 + max(c for _, c in nodes)
    grid = [[" "] * (ncols * width + width) for _ in range(2 * nrows - 1)]
    for (r, c), name in nodes.items():
        x = c * width + (width - len(name)) // 2
        grid[2 * r][x:x + len(name)] = list(name)
    for r, c, _, c2, ch in edges:
        grid[2 * r + 1][(c + c2) * width // 2 + width // 2] = ch
    lines = [f"[{format_label(label)}]"] + ["".join(row).rstrip() for row in grid]
    return lines, notes


def ascii(m: KV4Module, seed: int = 0) -> str:
    """Two-row node/branch drawing of each summand, drawn next to each other.

    ``/`` is the action of a, ``\\`` the action of b and ``:`` marks the
    combined image of the last head node of an E-type summand, spelled out
    below the drawing.
    """
    labels = decompose(m, seed).labels
    if not labels:
        return "(zero module)\n"
    blocks = [_draw(lab, m.field) for lab in labels]
    height = max(len(lines) for lines, _ in blocks)
    widths = [max(len(x) for x in lines) for lines, _ in blocks]
    out = []
    for row in range(height):
        parts = [(lines[row] if row < len(lines) else "").ljust(w)
                 for (lines, _), w in zip(blocks, widths)]
        out.append("   ".join(parts).rstrip())
    for (lines, notes) in blocks:
        for note in notes:
            out.append(f"{lines[0]} {note}")
    return "\n".join(out) + "\n"
