"""Decomposition of modules into indecomposable summands.

Strategy: split off a maximal free summand with a Frobenius-form retraction.
What remains has J^2 = 0, so it is determined by the pair of linear maps
(a, b) from a head complement into the radical.  That pair is a Kronecker
pencil, decomposed here with canonical subspace filtrations:

* W-type summands (and trivial ones) form a canonical submodule found from
  the filtration K_0 = ker b, K_{i+1} = b^-1(a K_i).
* M-type summands are the canonical quotient left after removing the
  W-type and regular parts; they are found on the dual pencil and lifted.
* The regular part splits into the a-invertible part (E-type, classified by
  the rational canonical form of a^-1 b) and the b-invertible part (E_inf).

Every result is checked by conjugating the actions into block form.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .catalogue import REG, TRIV, EInf, IndecompLabel, M, W, construct
from .errors import CertificateFailure, FieldMismatch, NotIndecomposable
from .exactmat import (Echelon, ExactMatrix, Subspace, block_diag, inverse, kernel,
                       matrix_power, minimal_polynomial, poly_eval_matrix, preimage,
                       solve, subspace_intersect, vcombine, vscale, vsupport, vunit)
from .gf2k import FieldPoly, factor, poly_power
from .kv4mod import KV4Module, head_dim, hom_space, radical, socle, submodule_on


@dataclass(frozen=True)
class Decomposition:
    """labels[i] is the i-th block; change_of_basis C has C A C^-1 block diagonal."""

    labels: tuple
    change_of_basis: ExactMatrix
    basis: ExactMatrix
    block_spans: tuple

    def multiset(self):
        return sorted(self.labels)


# ------------------------------------------------------------------ helpers

def _span_matrix(F, nrows, vectors):
    return ExactMatrix.from_columns(F, nrows, list(vectors))


def _solve_in(F, P, sub: Subspace, target):
    """x in sub with P x = target (or None)."""
    if not sub.dim:
        return 0 if not target else None
    c = solve(_span_matrix(F, P.nrows, P.apply_all(sub.basis)), target)
    return None if c is None else vcombine(F, sub.basis, c)


def _stable(step, start):
    seq = [start]
    while True:
        nxt = step(seq[-1])
        if nxt == seq[-1]:
            return seq
        seq.append(nxt)


def _image(F, M, sub: Subspace):
    return Subspace.span(F, M.nrows, M.apply_all(sub.basis))


class _Quot:
    """Coordinates on U/S for subspaces S <= U of a common ambient."""

    def __init__(self, F, ambient, U_vectors, S: Subspace):
        self.S = S
        self.Up = Subspace.span(F, ambient, [S.reduce(u) for u in U_vectors])
        self.dim = self.Up.dim

    def proj(self, x):
        return self.Up.coords(self.S.reduce(x))

    def lift(self, c):
        return self.Up.from_coords(c)


def _quotient_pencil(F, P, Q, hq: _Quot, rq: _Quot):
    cols_p, cols_q = [], []
    for j in range(hq.dim):
        x = hq.lift(vunit(F, j))
        cols_p.append(rq.proj(P.apply(x)))
        cols_q.append(rq.proj(Q.apply(x)))
    return _span_matrix(F, rq.dim, cols_p), _span_matrix(F, rq.dim, cols_q)


def _w_chains(F, P, Q):
    """Chains x_0..x_n with P x_0 = 0, P x_{j+1} = Q x_j, Q x_n = 0.

    One chain per W-type summand of the pencil; n = 0 gives trivial summands.
    """
    h = P.ncols
    ks = _stable(lambda K: preimage(Q, _image(F, P, K)), kernel(Q))
    ker_p = kernel(P)
    chains = []
    prev = Subspace.zero(F, h)
    for n, K in enumerate(ks):
        Fn = subspace_intersect(ker_p, K)
        ech = Echelon(F)
        for b in prev.basis:
            ech.insert(b)
        for x0 in Fn.basis:
            if not ech.reduce(x0):
                continue
            ech.insert(x0)
            chain = [x0]
            for j in range(n):
                x = _solve_in(F, P, ks[n - j - 1], Q.apply(chain[-1]))
                if x is None:
                    raise CertificateFailure("W-chain continuation failed")
                chain.append(x)
            chains.append((n, chain))
        prev = Fn
    return chains


def _lift(F, P, Q, reps, sub: Subspace, relations, rdim):
    """Correct reps[i] by elements of sub so that every relation holds.

    A relation is a list of (coefficient, 'P' or 'Q', index) whose sum,
    applied to the corrected vectors, must vanish.
    """
    if not relations:
        return list(reps)
    mats = {"P": P, "Q": Q}
    e = F.e
    block = rdim * e
    nb = sub.dim
    rhs = 0
    cols = [0] * (len(reps) * nb)
    images = {}
    for r, rel in enumerate(relations):
        for c, which, i in rel:
            mat = mats[which]
            v = mat.apply(reps[i])
            if c != 1:
                v = vscale(F, v, c)
            rhs ^= v << (r * block)
            for k in range(nb):
                key = (which, k)
                if key not in images:
                    images[key] = mat.apply(sub.basis[k])
                w = images[key]
                if c != 1:
                    w = vscale(F, w, c)
                cols[i * nb + k] ^= w << (r * block)
    if not rhs:
        return list(reps)
    if not nb:
        raise CertificateFailure("no room to lift summand relations")
    sol = solve(_span_matrix(F, rdim * len(relations), cols), rhs)
    if sol is None:
        raise CertificateFailure("summand relations cannot be lifted")
    out = []
    for i, x in enumerate(reps):
        c = (sol >> (i * nb * e)) & ((1 << (nb * e)) - 1)
        out.append(x ^ vcombine(F, sub.basis, c))
    return out


def _operator(F, src: Subspace, P, Q):
    """Matrix (in src coordinates) of y = P^-1 Q x restricted to src."""
    pm = _span_matrix(F, P.nrows, P.apply_all(src.basis))
    cols = []
    for b in src.basis:
        c = solve(pm, Q.apply(b))
        if c is None:
            raise CertificateFailure("pencil operator is not defined on subspace")
        cols.append(c)
    return _span_matrix(F, src.dim, cols)


def _cyclic_blocks(F, X: ExactMatrix, f: FieldPoly, k: int):
    """Generators of the f-primary cyclic decomposition of the operator X.

    Returns (level j, generator) pairs; each generator spans a cyclic
    submodule isomorphic to k[t]/(f^j).
    """
    N = poly_eval_matrix(f, X)
    powers = [ExactMatrix.identity(F, X.nrows)]
    for _ in range(k + 1):
        powers.append(powers[-1] @ N)
    L = [kernel(p) for p in powers]
    d = f.degree
    out = []
    for j in range(k, 0, -1):
        ech = Echelon(F)
        for b in L[j - 1].basis:
            ech.insert(b)
        for b in N.apply_all(L[min(j + 1, k)].basis):
            ech.insert(b)
        for w in L[j].basis:
            if not ech.reduce(w):
                continue
            out.append((j, w))
            x = w
            for _ in range(d):
                ech.insert(x)
                x = X.apply(x)
    return out


# ------------------------------------------------------------- free splitting

def _free_split(m: KV4Module):
    F, d = m.field, m.dim
    AB = m.AB
    ech = Echelon(F)
    gens = []
    for j, c in enumerate(AB.columns):
        if c and ech.reduce(c):
            ech.insert(c)
            gens.append(vunit(F, j))
    if not gens:
        return [], Subspace.full(F, d)
    vecs = []
    for x in gens:
        vecs.extend([x, m.A.apply(x), m.B.apply(x), AB.apply(x)])
    full = Echelon(F)
    for v in vecs:
        full.insert(v)
    basis = list(vecs)
    for j in range(d):
        u = vunit(F, j)
        if full.reduce(u):
            full.insert(u)
            basis.append(u)
    Tinv = inverse(_span_matrix(F, d, basis))
    rows = []
    for i in range(len(gens)):
        lam = Tinv.rows[4 * i + 3]
        rows.extend([AB.row_apply(lam), m.B.row_apply(lam), m.A.row_apply(lam), lam])
    C = kernel(ExactMatrix(F, len(rows), d, rows))
    blocks = [(REG, vecs[4 * i:4 * i + 4]) for i in range(len(gens))]
    return blocks, C


# ----------------------------------------------------------- pencil splitting

def _pencil_blocks(F, P, Q, seed):
    """Blocks of a pencil P, Q : k^h -> k^r as (label, head vectors, rad vectors)."""
    h, r = P.ncols, P.nrows
    blocks = []

    # W-type and trivial summands: a canonical submodule
    wchains = _w_chains(F, P, Q)
    HI, RI = [], []
    for n, xs in wchains:
        vs = [P.apply(x) for x in xs[1:]]
        blocks.append((W(n) if n else TRIV, xs, vs))
        HI.extend(xs)
        RI.extend(vs)
    HI = Subspace.span(F, h, HI)
    RI = Subspace.span(F, r, RI)

    # head of the regular plus W-type part
    full_h = Subspace.full(F, h)
    vstar = _stable(lambda V: preimage(Q, _image(F, P, V)), full_h)[-1]
    vprime = _stable(lambda V: preimage(P, _image(F, Q, V)), full_h)[-1]
    HRI = Subspace.span(F, h, vstar.basis + vprime.basis)
    RRI = Subspace.span(F, r, P.apply_all(HRI.basis) + Q.apply_all(HRI.basis))

    # M-type summands from the dual of the quotient pencil
    hq = _Quot(F, h, [vunit(F, j) for j in range(h)], HRI)
    rq = _Quot(F, r, [vunit(F, j) for j in range(r)], RRI)
    if hq.dim or rq.dim:
        Pb, Qb = _quotient_pencil(F, P, Q, hq, rq)
        dual_chains = _w_chains(F, Qb.T, Pb.T)
        ys, etas = [], []
        for n, yc in dual_chains:
            ys.extend(yc)
            etas.extend(Qb.T.apply(y) for y in yc[1:])
        if len(ys) != rq.dim or len(etas) != hq.dim:
            raise CertificateFailure("quotient pencil is not of M-type")
        Ud = inverse(_span_matrix(F, hq.dim, etas).T) if etas else None
        ei = 0
        for n, _ in dual_chains:
            u_bar = [Ud.columns[ei + j] for j in range(n)]
            ei += n
            reps = [hq.lift(u) for u in u_bar]
            rels = [[(1, "Q", i), (1, "P", i + 1)] for i in range(n - 1)]
            us = _lift(F, P, Q, reps, HRI, rels, r)
            vs = [P.apply(us[0])] + [Q.apply(u) for u in us]
            blocks.append((M(n), us, vs))

    # regular summands: quotient of the R+I part by the W-type part
    hq = _Quot(F, h, HRI.basis, HI)
    rq = _Quot(F, r, RRI.basis, RI)
    if hq.dim != rq.dim:
        raise CertificateFailure("regular part is not square")
    if hq.dim:
        Pb, Qb = _quotient_pencil(F, P, Q, hq, rq)
        n_reg = hq.dim
        full = Subspace.full(F, n_reg)
        fin = _stable(lambda V: preimage(Qb, _image(F, Pb, V)), full)[-1]
        inf = _stable(lambda V: preimage(Pb, _image(F, Qb, V)), kernel(Pb))[-1]
        if fin.dim + inf.dim != n_reg:
            raise CertificateFailure("regular pencil does not split")
        if fin.dim:
            X = _operator(F, fin, Pb, Qb)
            for f, k in factor(minimal_polynomial(X), seed=seed):
                for j, w in _cyclic_blocks(F, X, f, k):
                    mdeg = j * f.degree
                    coords = [w]
                    for _ in range(mdeg - 1):
                        coords.append(X.apply(coords[-1]))
                    reps = [hq.lift(fin.from_coords(c)) for c in coords]
                    alphas = poly_power(f, j).lower_coeffs()
                    rels = [[(1, "P", i + 1), (1, "Q", i)] for i in range(mdeg - 1)]
                    rels.append([(1, "Q", mdeg - 1)] + [(c, "P", i) for i, c in enumerate(alphas) if c])
                    us = _lift(F, P, Q, reps, HI, rels, r)
                    blocks.append((IndecompLabel("E", j, f), us, [P.apply(u) for u in us]))
        if inf.dim:
            Y = _operator(F, inf, Qb, Pb)
            k = 0
            while not matrix_power(Y, k).is_zero():
                k += 1
            t = FieldPoly.t(F)
            for j, w in _cyclic_blocks(F, Y, t, k):
                coords = [w]
                for _ in range(j - 1):
                    coords.append(Y.apply(coords[-1]))
                coords.reverse()
                reps = [hq.lift(inf.from_coords(c)) for c in coords]
                rels = [[(1, "P", 0)]] + [[(1, "P", i), (1, "Q", i - 1)] for i in range(1, j)]
                us = _lift(F, P, Q, reps, HI, rels, r)
                blocks.append((EInf(j), us, [Q.apply(u) for u in us]))
    return blocks


# ---------------------------------------------------------------- decompose

def decompose(m: KV4Module, seed: int = 0) -> Decomposition:
    F, d = m.field, m.dim
    free_blocks, C = _free_split(m)
    blocks = [(lab, vecs) for lab, vecs in free_blocks]

    cmod, _ = submodule_on(m, C)
    R = radical(cmod)
    hidx = R.complement_indices()
    P = _span_matrix(F, R.dim, [R.coords(cmod.A.columns[j]) for j in hidx])
    Q = _span_matrix(F, R.dim, [R.coords(cmod.B.columns[j]) for j in hidx])

    def head_vec(x):
        cv = 0
        for k, c in vsupport(F, x):
            cv |= c << (hidx[k] * F.e)
        return vcombine(F, C.basis, cv)

    def rad_vec(y):
        return vcombine(F, C.basis, R.from_coords(y))

    for lab, us, vs in _pencil_blocks(F, P, Q, seed):
        blocks.append((lab, [head_vec(u) for u in us] + [rad_vec(v) for v in vs]))

    blocks.sort(key=lambda b: b[0].sort_key())
    labels = tuple(b[0] for b in blocks)
    cols = [v for _, vecs in blocks for v in vecs]
    if len(cols) != d:
        raise CertificateFailure(f"blocks cover {len(cols)} of {d} dimensions")
    T = _span_matrix(F, d, cols)
    try:
        Tinv = inverse(T)
    except ZeroDivisionError:
        raise CertificateFailure("block bases are linearly dependent") from None
    mods = [construct(lab, F) for lab in labels]
    bA = block_diag([x.A for x in mods], F)
    bB = block_diag([x.B for x in mods], F)
    if m.A @ T != T @ bA or m.B @ T != T @ bB:
        raise CertificateFailure("conjugated actions differ from catalogue blocks")
    spans, off = [], 0
    for lab in labels:
        spans.append(Subspace.span(F, d, cols[off:off + lab.dim]))
        off += lab.dim
    return Decomposition(labels, Tinv, T, tuple(spans))


# ---------------------------------------------------------- identification

def _split_form(m: KV4Module):
    """Induced maps from head coordinates into socle coordinates."""
    S = socle(m)
    comp = S.complement_indices()
    P = _span_matrix(m.field, S.dim, [S.coords(m.A.columns[j]) for j in comp])
    Q = _span_matrix(m.field, S.dim, [S.coords(m.B.columns[j]) for j in comp])
    return S, P, Q


def identify_indecomposable(m: KV4Module, seed: int = 0) -> IndecompLabel:
    """Label of an indecomposable module read off from invariants."""
    d = m.dim
    if d == 0:
        raise NotIndecomposable("zero module")
    if d == 1:
        return TRIV
    rab = m.AB.rank
    if rab:
        if d == 4 and rab == 1:
            return REG
        raise NotIndecomposable("free part present in a non-regular module")
    hd = head_dim(m)
    sd = socle(m).dim
    if d % 2:
        n = d // 2
        if hd == n and sd == n + 1:
            return M(n)
        if hd == n + 1 and sd == n:
            return W(n)
        raise NotIndecomposable(f"odd dimension {d} with head {hd}, socle {sd}")
    half = d // 2
    if hd != half or sd != half:
        raise NotIndecomposable("even-dimensional module without balanced head and socle")
    _, P, Q = _split_form(m)
    if P.rank == half:
        X = inverse(P) @ Q
        mp = minimal_polynomial(X)
        facs = factor(mp, seed=seed)
        if mp.degree == half and len(facs) == 1:
            f, n = facs[0]
            return IndecompLabel("E", n, f)
        raise NotIndecomposable("a^-1 b is not cyclic primary")
    if Q.rank == half:
        Y = inverse(Q) @ P
        if matrix_power(Y, half).is_zero() and not matrix_power(Y, half - 1).is_zero():
            return EInf(half)
    raise NotIndecomposable("pencil is neither a- nor b-invertible with one block")


def is_isomorphic(m1: KV4Module, m2: KV4Module, seed: int = 0) -> bool:
    if m1.field != m2.field:
        raise FieldMismatch("modules over different fields")
    if m1.dim != m2.dim:
        return False
    return decompose(m1, seed).multiset() == decompose(m2, seed).multiset()


def is_indecomposable(m: KV4Module, seed: int = 0, samples: int = 256) -> bool:
    """Local-ring test on End(m): every endomorphism is nilpotent or invertible.

    Exhaustive when the field is small and End(m) has dimension at most 12;
    otherwise checks the basis, pairwise sums and seeded random combinations.
    """
    if m.dim == 0:
        return False
    basis = hom_space(m, m)
    F = m.field
    mats = [phi.matrix for phi in basis]

    def bad(x):
        if x.rank == m.dim:
            return False
        return not matrix_power(x, m.dim).is_zero()

    if F.order ** len(mats) <= 4096:
        for coeffs in itertools.product(range(F.order), repeat=len(mats)):
            x = ExactMatrix.zeros(F, m.dim, m.dim)
            for c, b in zip(coeffs, mats):
                if c:
                    x = x + b.scale(c)
            if bad(x):
                return False
        return True
    for b in mats:
        if bad(b):
            return False
    for b1, b2 in itertools.combinations(mats, 2):
        if bad(b1 + b2):
            return False
    rng = random.Random(seed)
    for _ in range(samples):
        x = ExactMatrix.zeros(F, m.dim, m.dim)
        for b in mats:
            c = rng.randrange(F.order)
            if c:
                x = x + b.scale(c)
        if bad(x):
            return False
    return True
