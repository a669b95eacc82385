"""Finite fields of characteristic 2 and polynomials over them.

Field elements are plain ints in ``range(2**e)``: bit i is the coefficient of
x^i in the polynomial basis of GF(2)[x]/(modulus).  Addition is XOR.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import FNotMonic, ReducibleModulus

# Smallest irreducible of each degree, bit i = coefficient of t^i.
BUILTIN_MODULI = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11B,
    9: 0x203, 10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201B, 14: 0x4021,
    15: 0x8003, 16: 0x1002B,
}


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _clmod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a and a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _binary_irreducible(m: int) -> bool:
    """Rabin test for a polynomial over GF(2) given as a bitmask."""
    d = m.bit_length() - 1
    if d < 1:
        return False
    if d == 1:
        return True

    def frob(x, k):
        for _ in range(k):
            x = _clmod(_clmul(x, x), m)
        return x

    if frob(2, d) != 2:
        return False
    for p in _prime_factors(d):
        g, h = m, frob(2, d // p) ^ 2
        while h:
            g, h = h, _clmod(g, h)
        if g.bit_length() > 1:
            return False
    return True


@lru_cache(maxsize=None)
def _tables(e: int, modulus: int):
    q = 1 << e
    order = q - 1
    for g in range(2, q):
        powers = [0] * order
        x = 1
        for i in range(order):
            powers[i] = x
            x = _clmod(_clmul(x, g), modulus)
        if len(set(powers)) == order:
            break
    else:  # pragma: no cover - unreachable for irreducible moduli
        raise ReducibleModulus(hex(modulus))
    exp = powers + powers
    log = [0] * q
    for i, v in enumerate(powers):
        log[v] = i
    return exp, log


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^e) presented as GF(2)[t]/(modulus)."""

    e: int
    modulus: int

    @property
    def order(self) -> int:
        return 1 << self.e

    @property
    def mask(self) -> int:
        return (1 << self.e) - 1

    def mul(self, x: int, y: int) -> int:
        if self.e == 1:
            return x & y
        if not x or not y:
            return 0
        exp, log = _tables(self.e, self.modulus)
        return exp[log[x] + log[y]]

    def inv(self, x: int) -> int:
        if not x:
            raise ZeroDivisionError("inverse of 0 in " + str(self))
        if self.e == 1:
            return 1
        exp, log = _tables(self.e, self.modulus)
        return exp[(self.order - 1 - log[x]) % (self.order - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def sqrt(self, x: int) -> int:
        # Frobenius is bijective; its inverse is x -> x^(2^(e-1)).
        return self.pow(x, 1 << (self.e - 1))

    def elements(self):
        return range(self.order)

    def __str__(self) -> str:
        if self.e == 1:
            return "gf2"
        return f"gf2^{self.e}:{self.modulus:x}"


GF2 = FieldSpec(1, 0x3)


def field_make(e: int, modulus: "int | FieldPoly | None" = None) -> FieldSpec:
    """Validated GF(2^e); the modulus is a bitmask or a binary FieldPoly."""
    if e < 1:
        raise ValueError("extension degree must be positive")
    if isinstance(modulus, FieldPoly):
        if modulus.field.e != 1:
            raise ValueError("modulus must have coefficients in GF(2)")
        modulus = sum(c << i for i, c in enumerate(modulus.coeffs))
    if modulus is None:
        if e == 1:
            return GF2
        if e not in BUILTIN_MODULI:
            raise ValueError(f"no built-in modulus for e = {e}; pass one explicitly")
        modulus = BUILTIN_MODULI[e]
    if modulus.bit_length() - 1 != e:
        raise ValueError(f"modulus {modulus:#x} does not have degree {e}")
    if not _binary_irreducible(modulus):
        raise ReducibleModulus(f"{modulus:#x} is reducible over GF(2)")
    if e == 1:
        return GF2
    return FieldSpec(e, modulus)


_FIELD_RE = re.compile(r"^gf2(?:\^(\d+)(?::([0-9a-fA-F]+))?)?$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``gf2`` or ``gf2^e:<hex bitmask>``."""
    m = _FIELD_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad field spec {text!r}")
    if m.group(1) is None:
        return GF2
    e = int(m.group(1))
    modulus = int(m.group(2), 16) if m.group(2) else None
    return field_make(e, modulus)


class FieldPoly:
    """Univariate polynomial over a FieldSpec, coefficients low degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, [0] * k + [c])

    @classmethod
    def t(cls, field):
        return cls(field, (0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def lower_coeffs(self) -> tuple:
        """(alpha_0, ..., alpha_{m-1}) of a monic t^m + sum alpha_i t^i."""
        if not self.is_monic:
            raise FNotMonic(str(self))
        return self.coeffs[:-1]

    def __eq__(self, other):
        return (isinstance(other, FieldPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __lt__(self, other):
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return FieldPoly(self.field, [self.coeff(i) ^ other.coeff(i) for i in range(n)])

    __sub__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return FieldPoly(self.field, [self.field.mul(c, other) for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return FieldPoly(self.field)
        F = self.field
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] ^= F.mul(a, b)
        return FieldPoly(F, out)

    def __divmod__(self, other):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return FieldPoly(F), self
        q = [0] * (dq + 1)
        lead_inv = F.inv(other.coeffs[-1])
        for k in range(dq, -1, -1):
            c = r[k + len(other.coeffs) - 1]
            if c:
                c = F.mul(c, lead_inv)
                q[k] = c
                for j, b in enumerate(other.coeffs):
                    if b:
                        r[k + j] ^= F.mul(c, b)
        return FieldPoly(F, q), FieldPoly(F, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int):
        r, b = FieldPoly(self.field, (1,)), self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def monic(self):
        if not self.coeffs:
            return self
        return self * self.field.inv(self.coeffs[-1])

    def derivative(self):
        # In characteristic 2 only odd-degree terms survive.
        return FieldPoly(self.field, [c if i % 2 == 1 else 0
                                      for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = self.field.mul(acc, x) ^ c
        return acc

    def __repr__(self):
        return f"FieldPoly({self.field}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def poly_gcd(f: FieldPoly, g: FieldPoly) -> FieldPoly:
    while g.coeffs:
        f, g = g, f % g
    return f.monic()


def poly_powmod(base: FieldPoly, n: int, mod: FieldPoly) -> FieldPoly:
    r = FieldPoly(base.field, (1,)) % mod
    b = base % mod
    while n:
        if n & 1:
            r = (r * b) % mod
        b = (b * b) % mod
        n >>= 1
    return r


def _frobenius(x: FieldPoly, mod: FieldPoly, times: int) -> FieldPoly:
    """x^(2^times) mod mod."""
    for _ in range(times):
        x = (x * x) % mod
    return x


def poly_power(f: FieldPoly, n: int) -> FieldPoly:
    if not f.is_monic:
        raise FNotMonic(str(f))
    if n < 1:
        raise ValueError("exponent must be positive")
    return f ** n


def gamma_prefix_sums(alphas) -> list[int]:
    """Running XOR sums gamma_i = alpha_0 + ... + alpha_i."""
    out, acc = [], 0
    for a in alphas:
        acc ^= a
        out.append(acc)
    return out


def is_irreducible(f: FieldPoly) -> bool:
    """Rabin's test over GF(q), q = 2^e."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    e = f.field.e
    t = FieldPoly.t(f.field)
    if _frobenius(t, f, e * d) != t % f:
        return False
    for p in _prime_factors(d):
        h = _frobenius(t, f, e * (d // p)) - t
        if poly_gcd(f, h).degree > 0:
            return False
    return True


def _sqrt_poly(f: FieldPoly) -> FieldPoly:
    F = f.field
    return FieldPoly(F, [F.sqrt(c) for c in f.coeffs[::2]])


def squarefree_factors(f: FieldPoly) -> list[tuple[FieldPoly, int]]:
    """Yun-style square-free decomposition for characteristic 2: [(g, mult)]."""
    f = f.monic()
    if f.degree < 1:
        return []
    out = []
    d = f.derivative()
    if d.is_zero():
        return [(g, 2 * k) for g, k in squarefree_factors(_sqrt_poly(f))]
    c = poly_gcd(f, d)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w, c = y, c // y
    if c.degree > 0:
        out.extend((g, 2 * k) for g, k in squarefree_factors(_sqrt_poly(c)))
    merged: dict = {}
    for g, k in out:
        merged[g] = merged.get(g, 0) + k
    return sorted(merged.items(), key=lambda gk: (gk[1], gk[0].degree, gk[0].coeffs))


def _distinct_degree(f: FieldPoly) -> list[tuple[FieldPoly, int]]:
    e = f.field.e
    t = FieldPoly.t(f.field)
    out, h, d = [], t % f, 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = _frobenius(h, f, e)
        g = poly_gcd(f, h - t)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _equal_degree(f: FieldPoly, d: int, rng: random.Random) -> list[FieldPoly]:
    if f.degree == d:
        return [f]
    F = f.field
    k = F.e * d
    while True:
        a = FieldPoly(F, [rng.randrange(F.order) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        # absolute trace map a + a^2 + ... + a^(2^(k-1)) mod f
        tr, x = FieldPoly(F), a % f
        for _ in range(k):
            tr = tr + x
            x = (x * x) % f
        g = poly_gcd(f, tr)
        if 0 < g.degree < f.degree:
            return _equal_degree(g, d, rng) + _equal_degree(f // g, d, rng)


def factor(f: FieldPoly, seed: int = 0) -> list[tuple[FieldPoly, int]]:
    """Monic irreducible factorisation [(p, multiplicity)], sorted canonically."""
    rng = random.Random(seed)
    out = []
    for g, mult in squarefree_factors(f):
        for h, d in _distinct_degree(g):
            for p in _equal_degree(h, d, rng):
                out.append((p, mult))
    merged: dict = {}
    for p, k in out:
        merged[p] = merged.get(p, 0) + k
    return sorted(merged.items(), key=lambda pk: (pk[0].degree, pk[0].coeffs[::-1]))


def irreducibles(field: FieldSpec, degree: int) -> list[FieldPoly]:
    """All monic irreducibles of the given degree, in canonical order."""
    q = field.order
    out = []
    for code in range(q ** degree):
        cs, c = [], code
        for _ in range(degree):
            cs.append(c % q)
            c //= q
        p = FieldPoly(field, cs + [1])
        if is_irreducible(p):
            out.append(p)
    return sorted(out)


def format_poly(f: FieldPoly) -> str:
    """t-notation, highest degree first; non-unit coefficients in hex."""
    if not f.coeffs:
        return "0"
    parts = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            parts.append(f"{c:x}")
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c:x}*{mono}")
    return "+".join(parts)


_TERM_RE = re.compile(r"^(?:([0-9a-fA-F]+)\*)?t(?:\^(\d+))?$|^([0-9a-fA-F]+)$")


def parse_poly(text: str, field: FieldSpec = GF2) -> FieldPoly:
    """Inverse of format_poly; accepts terms like ``t^3``, ``3*t``, ``1``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, int] = {}
    for term in s.split("+"):
        m = _TERM_RE.match(term)
        if not m:
            raise ValueError(f"bad polynomial term {term!r}")
        if m.group(3) is not None:
            c, k = int(m.group(3), 16), 0
        else:
            c = int(m.group(1), 16) if m.group(1) else 1
            k = int(m.group(2)) if m.group(2) else 1
        if c >= field.order:
            raise ValueError(f"coefficient {c:x} outside {field}")
        coeffs[k] = coeffs.get(k, 0) ^ c
    top = max(coeffs) if coeffs else 0
    return FieldPoly(field, [coeffs.get(i, 0) for i in range(top + 1)])
