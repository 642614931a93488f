"""Bases of norm generators (BONGs): verification, good-BONG extraction, and
the binary invariants a(L) and g(a).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InternalVerificationFailure, MalformedInput, RankError
from .field import (INF, DyadicField, FieldElement, defect_order, hilbert, in_A,
                    same_square_class)
from .lattice import (GramLattice, Vector, gram_of, jordan_split, mat_inv, norm_order,
                      s_lattice, scale_order)


@dataclass
class BongSymbol:
    """Values a_i = Q(x_i) of a BONG, with orders R_i and optional witnesses."""

    a: list
    witness: list | None = None

    def __post_init__(self):
        self.a = list(self.a)
        if not self.a:
            raise RankError("empty symbol")
        if any(x.is_zero for x in self.a):
            raise MalformedInput("BONG values must be nonzero")

    @property
    def field(self) -> DyadicField:
        return self.a[0].field

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def R(self) -> list:
        return [int(x.valuation) for x in self.a]

    @classmethod
    def of(cls, field: DyadicField, values: Sequence) -> "BongSymbol":
        return cls([field.element(v) for v in values])

    def violations(self) -> list[str]:
        """Good-BONG conditions that fail (empty for a valid symbol)."""
        R, e, out = self.R, self.field.e, []
        for i in range(self.n - 2):
            if R[i] > R[i + 2]:
                out.append(f"R[{i}] > R[{i + 2}]")
        for i in range(self.n - 1):
            gap = R[i + 1] - R[i]
            if gap + 2 * e < 0:
                out.append(f"gap {i} below -2e")
            if gap + defect_order(-self.a[i] * self.a[i + 1]) < 0:
                out.append(f"ratio {i} outside the admissible set")
            if gap % 2 and gap < 0:
                out.append(f"negative odd gap at {i}")
        return out

    def is_good(self) -> bool:
        return not self.violations()

    def scaled(self, c: FieldElement) -> "BongSymbol":
        return BongSymbol([c * x for x in self.a])

    def to_json(self) -> dict:
        f = self.field
        dets, acc = [], f.one
        for x in self.a:
            acc = acc * x
            dets.append(f.class_key(acc))
        return {"R": self.R, "units": [f.unit_literal(x) for x in self.a], "dets": dets}


def dual(s: BongSymbol) -> BongSymbol:
    """Symbol of the dual lattice: a_n^-1, ..., a_1^-1."""
    return BongSymbol([x.inverse() for x in reversed(s.a)])


# -- verification -----------------------------------------------------------

def _coords(L: GramLattice, basis: list, x: Vector) -> list | None:
    G = gram_of(L, basis)
    rhs = [L.B(b, x) for b in basis]
    Ginv = mat_inv(G, L.field)
    f = L.field
    c = [sum((Ginv[i][j] * rhs[j] for j in range(len(basis))), f.zero) for i in range(len(basis))]
    back = [sum((c[i] * basis[i][k] for i in range(len(basis))), f.zero) for k in range(L.n)]
    if back != list(x):
        return None
    return c


def verify_bong(L: GramLattice, X: Sequence[Vector]) -> bool:
    """Check that X (coordinate vectors) is a BONG of L.

    Recursively x_1 must lie in the current lattice, generate its norm, and
    the rest must be a BONG of the projection onto x_1's complement.
    """
    if len(X) != L.n:
        return False
    X = [[L.field.element(c) for c in x] for x in X]
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            if not L.B(X[i], X[j]).is_zero:
                return False
    basis = [L.unit_vector(i) for i in range(L.n)]
    for x in X:
        q = L.Q(x)
        if q.is_zero:
            return False
        c = _coords(L, basis, x)
        if c is None or any(ci.valuation < 0 for ci in c):
            return False
        if q.valuation != norm_order(gram_of(L, basis), L.field):
            return False
        p = next((i for i, ci in enumerate(c) if ci.valuation == 0), None)
        if p is None:
            return False
        qinv = q.inverse()
        basis = [[bk - L.B(b, x) * qinv * xk for bk, xk in zip(b, x)]
                 for i, b in enumerate(basis) if i != p]
    return True


# -- good BONG extraction ---------------------------------------------------

class _Piece:
    __slots__ = ("vecs", "scale", "norm", "gram")

    def __init__(self, L: GramLattice, vecs: list):
        self.vecs = vecs
        self.gram = gram_of(L, vecs)
        self.scale = int(scale_order(self.gram))
        self.norm = int(norm_order(self.gram, L.field))

    def witness(self, L: GramLattice) -> Vector:
        """Norm generator: a basis vector if possible, else the sum."""
        for v, row in zip(self.vecs, range(len(self.vecs))):
            if self.gram[row][row].valuation == self.norm:
                return v
        s = [x + y for x, y in zip(self.vecs[0], self.vecs[1])]
        assert L.Q(s).valuation == self.norm
        return s


def _resplit(L: GramLattice, vecs: list) -> list:
    sub = GramLattice(L.field, gram_of(L, vecs), check=False)
    js = jordan_split(sub)
    out = []
    for pc in js.pieces:
        new = []
        for k in range(pc.start, pc.start + pc.size):
            col = [row[k] for row in js.U]
            new.append([sum((col[i] * vecs[i][c] for i in range(len(vecs))), L.field.zero)
                        for c in range(L.n)])
        out.append(_Piece(L, new))
    return out


def _u_values(pieces: list) -> list:
    return [min(q.norm + 2 * max(0, p.scale - q.scale) for q in pieces) for p in pieces]


def _project_out(L: GramLattice, span: list, y: Vector) -> Vector:
    G = gram_of(L, span)
    Ginv = mat_inv(G, L.field)
    b = [L.B(v, y) for v in span]
    coef = [sum((Ginv[i][j] * b[j] for j in range(len(span))), L.field.zero) for i in range(len(span))]
    out = list(y)
    for c, v in zip(coef, span):
        if not c.is_zero:
            out = [o - c * vk for o, vk in zip(out, v)]
    return out


def maximal_norm_splitting(L: GramLattice) -> list:
    """Pieces (rank <= 2, modular) whose norms equal the norms of the
    corresponding rescaled lattices L^{s}.  Returns _Piece objects sorted by
    scale.
    """
    js = jordan_split(L)
    pieces = [_Piece(L, [js.basis_vector(k) for k in range(pc.start, pc.start + pc.size)])
              for pc in js.pieces]

    # A component holding a unary piece is proper: make it fully diagonal.
    changed = True
    while changed:
        changed = False
        for P in pieces:
            if len(P.vecs) != 2:
                continue
            Z = next((q for q in pieces if len(q.vecs) == 1 and q.scale == P.scale), None)
            if Z is None:
                continue
            x, y = P.vecs
            z = Z.vecs[0]
            xz = [a + b for a, b in zip(x, z)]
            new = _resplit(L, [xz, y, z])
            pieces = [q for q in pieces if q is not P and q is not Z] + new
            changed = True
            break
    pieces.sort(key=lambda p: p.scale)

    # Each fix lowers one piece's norm to its target and leaves every other
    # norm unchanged, so at most len(pieces) rounds are needed.
    for _ in range(len(pieces) + 1):
        us = _u_values(pieces)
        bad = next((i for i, p in enumerate(pieces) if p.norm > us[i]), None)
        if bad is None:
            break
        P = pieces[bad]
        j = next(j for j, q in enumerate(pieces)
                 if j != bad and q.norm + 2 * max(0, P.scale - q.scale) == us[bad])
        Qp = pieces[j]
        shift = max(0, P.scale - Qp.scale)
        z = Qp.witness(L)
        c = L.field.pi_power(shift)
        x0 = [a + c * b for a, b in zip(P.vecs[0], z)]
        newP = _Piece(L, [x0] + P.vecs[1:])
        newQ = _Piece(L, [_project_out(L, newP.vecs, y) for y in Qp.vecs])
        if newP.scale != P.scale or newQ.scale != Qp.scale or newP.norm != us[bad]:
            raise InternalVerificationFailure("norm correction changed a piece's scale")
        pieces[bad], pieces[j] = newP, newQ
        pieces.sort(key=lambda p: p.scale)
    else:
        raise InternalVerificationFailure("norm corrections did not converge")
    us = _u_values(pieces)
    if any(p.norm != u for p, u in zip(pieces, us)):
        raise InternalVerificationFailure("splitting is not norm-maximal")
    return pieces


def expected_R(L: GramLattice) -> list:
    """R-sequence predicted by the Jordan invariants (t, dims, r_k, u_k)."""
    js = jordan_split(L)
    out = []
    for k, blk in enumerate(js.data.blocks, start=1):
        u = int(s_lattice(L, js, k).norm_order())
        if u == blk.r:
            out += [blk.r] * blk.dim
        else:
            out += [u, 2 * blk.r - u] * (blk.dim // 2)
    return out


def good_bong(L: GramLattice) -> BongSymbol:
    """A good BONG of L, checked against its own contract before returning."""
    pieces = maximal_norm_splitting(L)
    X = []
    for P in pieces:
        if len(P.vecs) == 1:
            X.append(P.vecs[0])
            continue
        v = P.witness(L)
        w = P.vecs[1] if v is P.vecs[0] else P.vecs[0]
        qv = L.Q(v)
        t = L.B(w, v) * qv.inverse()
        X.append(v)
        X.append([wk - t * vk for wk, vk in zip(w, v)])
    sym = BongSymbol([L.Q(x) for x in X], witness=X)
    if not verify_bong(L, X):
        raise InternalVerificationFailure("constructed vectors are not a BONG")
    bad = sym.violations()
    if bad:
        raise InternalVerificationFailure("constructed BONG is not good: " + "; ".join(bad))
    if sym.R != expected_R(L):
        raise InternalVerificationFailure("R-sequence disagrees with the Jordan invariants")
    return sym


# -- binary invariants ------------------------------------------------------

def a_invariant(obj: "GramLattice | BongSymbol") -> tuple[FieldElement, int]:
    """(a(L), R(L)) for a binary lattice or a two-term symbol."""
    if isinstance(obj, GramLattice):
        if obj.n != 2:
            raise RankError("a(L) needs a binary lattice")
        obj = good_bong(obj)
    if obj.n != 2:
        raise RankError("a(L) needs a two-term symbol")
    a = obj.a[1] / obj.a[0]
    return a, int(a.valuation)


def g_exponent2(a: FieldElement) -> float:
    """Twice min(R/2 + e, R + d(-a)) for a in the admissible set."""
    R = int(a.valuation)
    return min(R + 2 * a.field.e, 2 * R + 2 * defect_order(-a))


def g_membership(eta: FieldElement, a: FieldElement) -> bool:
    """Whether the unit eta lies in g(a)."""
    if eta.is_zero or eta.valuation != 0:
        raise MalformedInput("eta must be a unit")
    if not in_A(a):
        raise MalformedInput("a must lie in the admissible set")
    return 2 * defect_order(eta) >= g_exponent2(a) and hilbert(eta, -a) == 1


def binary_isometric(s: BongSymbol, t: BongSymbol) -> bool:
    if s.n != 2 or t.n != 2:
        raise RankError("binary_isometric needs two-term symbols")
    if s.R != t.R:
        return False
    a, _ = a_invariant(s)
    b, _ = a_invariant(t)
    if not same_square_class(a, b):
        return False
    return g_membership(t.a[0] / s.a[0], a)
