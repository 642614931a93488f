"""Gram-matrix lattices, Jordan splittings and the classical ideal orders.

Ideals are always represented by their pi-adic orders.  For a Jordan
splitting L = L_1 + ... + L_t with scales r_1 < ... < r_t we compute

* u_k, the norm order of L^{s_k} (blocks before k rescaled up to scale r_k),
* a_k, a norm generator value of L^{s_k},
* w_k, the weight order of L^{s_k},
* f_k, the order of the fundamental ideal linking blocks k and k+1.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import Degenerate, MalformedInput, RankError, ZeroNorm
from .field import INF, DyadicField, FieldElement, defect_order

Vector = list  # list[FieldElement]
Matrix = list  # list[list[FieldElement]]


# -- small exact linear algebra ------------------------------------------

def mat_det(m: Matrix, field: DyadicField) -> FieldElement:
    n = len(m)
    if n == 0:
        return field.one
    a = [row[:] for row in m]
    det = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero), None)
        if piv is None:
            return field.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            if not a[r][col].is_zero:
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def mat_inv(m: Matrix, field: DyadicField) -> Matrix:
    n = len(m)
    a = [row[:] + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero), None)
        if piv is None:
            raise Degenerate("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def mat_mul(a: Matrix, b: Matrix, field: DyadicField) -> Matrix:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), field.zero)
             for j in range(len(b[0]))] for i in range(len(a))]


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def scale_order(gram: Matrix) -> float:
    return min((x.valuation for row in gram for x in row), default=INF)


def norm_order(gram: Matrix, field: DyadicField) -> float:
    """ord nL = min(min ord G_ii, e + min_{i != j} ord G_ij)."""
    n = len(gram)
    diag = min((gram[i][i].valuation for i in range(n)), default=INF)
    off = min((gram[i][j].valuation for i in range(n) for j in range(i + 1, n)), default=INF)
    return min(diag, field.e + off)


# -- lattices -------------------------------------------------------------

class GramLattice:
    """A lattice given by a symmetric nondegenerate Gram matrix."""

    def __init__(self, field: DyadicField, gram: Sequence[Sequence], check: bool = True):
        rows = [[field.element(x) for x in row] for row in gram]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise MalformedInput("Gram matrix must be square")
        self.field = field
        self.gram: Matrix = rows
        self.n = n
        if check:
            for i in range(n):
                for j in range(i + 1, n):
                    if rows[i][j] != rows[j][i]:
                        raise MalformedInput("Gram matrix must be symmetric")
            if mat_det(rows, field).is_zero:
                raise Degenerate("Gram matrix is singular")

    def __repr__(self) -> str:
        return f"GramLattice({[[x.literal() for x in r] for r in self.gram]})"

    @classmethod
    def diagonal(cls, field: DyadicField, entries: Sequence) -> "GramLattice":
        n = len(entries)
        return cls(field, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_json(cls, obj: dict, guard: int = 12) -> "GramLattice":
        if not isinstance(obj, dict) or "gram" not in obj:
            raise MalformedInput("lattice JSON needs a 'gram' entry")
        field = DyadicField.from_descriptor(obj.get("field", {"e": 1}), guard)
        gram = obj["gram"]
        if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
            raise MalformedInput("'gram' must be a list of rows")
        return cls(field, [[field.element(x) if not isinstance(x, str) else _lit(x, field)
                            for x in row] for row in gram])

    def to_json(self) -> dict:
        return {"field": self.field.descriptor(),
                "gram": [[x.literal() for x in row] for row in self.gram]}

    # -- forms ----------------------------------------------------------
    def B(self, x: Vector, y: Vector) -> FieldElement:
        f = self.field
        total = f.zero
        for i, xi in enumerate(x):
            if xi.is_zero:
                continue
            row = self.gram[i]
            for j, yj in enumerate(y):
                if not yj.is_zero and not row[j].is_zero:
                    total = total + xi * row[j] * yj
        return total

    def Q(self, x: Vector) -> FieldElement:
        return self.B(x, x)

    def det(self) -> FieldElement:
        return mat_det(self.gram, self.field)

    def unit_vector(self, i: int) -> Vector:
        f = self.field
        return [f.one if j == i else f.zero for j in range(self.n)]

    def transform(self, U: Matrix) -> "GramLattice":
        """Gram matrix U^T G U (columns of U are the new basis)."""
        f = self.field
        G2 = mat_mul(mat_mul(transpose(U), self.gram, f), U, f)
        return GramLattice(f, G2, check=False)

    def scaled(self, c) -> "GramLattice":
        c = self.field.element(c)
        return GramLattice(self.field, [[c * x for x in row] for row in self.gram], check=False)

    def scale_order(self) -> float:
        return scale_order(self.gram)

    def norm_order(self) -> float:
        return norm_order(self.gram, self.field)


def _lit(s: str, field: DyadicField) -> FieldElement:
    from .field import parse_element

    return parse_element(s, field)


def gram_of(L: GramLattice, vecs: Sequence[Vector]) -> Matrix:
    return [[L.B(x, y) for y in vecs] for x in vecs]


# -- norm generators and weights -----------------------------------------

def norm_generator(L: GramLattice) -> tuple[FieldElement, Vector]:
    """Return (Q(x), x) for a norm generator x.

    Diagonal basis vectors are tried first in index order, then sums
    e_i + e_j in lexicographic order.
    """
    target = L.norm_order()
    for i in range(L.n):
        if L.gram[i][i].valuation == target:
            return L.gram[i][i], L.unit_vector(i)
    f = L.field
    for i in range(L.n):
        for j in range(i + 1, L.n):
            v = [f.one if k in (i, j) else f.zero for k in range(L.n)]
            q = L.Q(v)
            if q.valuation == target:
                return q, v
    raise AssertionError("no norm generator among basis vectors and pair sums")


def _nonisotropic_basis(L: GramLattice) -> list[Vector]:
    """A basis of L (unimodular change) with every Q(b_i) nonzero."""
    f = L.field
    basis = [L.unit_vector(i) for i in range(L.n)]
    for i in range(L.n):
        if not L.Q(basis[i]).is_zero:
            continue
        done = False
        for j in range(L.n):
            if j == i:
                continue
            for c in (1, 2):
                cand = [x + c * y for x, y in zip(basis[i], basis[j])]
                if not L.Q(cand).is_zero:
                    basis[i] = cand
                    done = True
                    break
            if done:
                break
        if not done:
            raise Degenerate("isotropic vector orthogonal to the lattice")
    return basis


def weight_order(L: GramLattice) -> float:
    """ord wL from rank-one summands.

    With a basis b_i (all Q(b_i) nonzero) and a norm generator value a,
    ord wL = min(e + ord sL, min_i ord Q(b_i) + d(a Q(b_i))).
    """
    e = L.field.e
    a, _ = norm_generator(L)
    best = e + L.scale_order()
    for b in _nonisotropic_basis(L):
        q = L.Q(b)
        best = min(best, q.valuation + defect_order(a * q))
    return best


# -- Jordan splitting -----------------------------------------------------

@dataclass
class Piece:
    start: int
    size: int
    scale: int
    norm: int


@dataclass
class JordanBlock:
    indices: list
    r: int
    dim: int
    norm: int


@dataclass
class JordanData:
    """Jordan invariants; the lists u, a, w, f are filled by jordan_invariants."""

    t: int
    blocks: list
    n_cum: list
    u: list = dc_field(default_factory=list)
    a: list = dc_field(default_factory=list)
    w: list = dc_field(default_factory=list)
    f: list = dc_field(default_factory=list)

    @property
    def r(self) -> list:
        return [b.r for b in self.blocks]

    @property
    def dims(self) -> list:
        return [b.dim for b in self.blocks]


@dataclass
class JordanSplit:
    lattice: GramLattice
    U: Matrix  # columns are the new basis in original coordinates
    M: Matrix  # U^T G U, block diagonal
    pieces: list
    data: JordanData

    def basis_vector(self, k: int) -> Vector:
        return [row[k] for row in self.U]

    def leading_gram(self, n: int) -> Matrix:
        return [row[:n] for row in self.M[:n]]


def _piece_norm(M: Matrix, start: int, size: int, field: DyadicField) -> int:
    return norm_order([row[start:start + size] for row in M[start:start + size]], field)


def jordan_split(L: GramLattice) -> JordanSplit:
    """Block-diagonalize L by unimodular congruence into pieces of rank <= 2.

    The pivot is an entry of minimal order, preferring diagonal entries, so a
    rank-2 piece appears only when no remaining diagonal entry reaches the
    scale.  Pieces come out in nondecreasing scale; consecutive pieces of
    equal scale form one Jordan component.
    """
    f = L.field
    n = L.n
    M = [row[:] for row in L.gram]
    U = [[f.one if i == j else f.zero for j in range(n)] for i in range(n)]

    def swap(i, j):
        if i == j:
            return
        for row in U:
            row[i], row[j] = row[j], row[i]
        M[i], M[j] = M[j], M[i]
        for row in M:
            row[i], row[j] = row[j], row[i]

    def colop(k, p, c):
        if c.is_zero:
            return
        for row in U:
            row[k] = row[k] + c * row[p]
        for row in M:
            row[k] = row[k] + c * row[p]
        M[k] = [x + c * y for x, y in zip(M[k], M[p])]

    pieces = []
    pos = 0
    while pos < n:
        best = INF
        best_diag = None
        best_off = None
        for i in range(pos, n):
            v = M[i][i].valuation
            if v < best or (v == best and best_diag is None):
                best, best_diag, best_off = v, i, None
        for i in range(pos, n):
            for j in range(i + 1, n):
                v = M[i][j].valuation
                if v < best:
                    best, best_diag, best_off = v, None, (i, j)
        if best == INF:
            raise Degenerate("Gram matrix is singular")
        if best_diag is not None:
            swap(pos, best_diag)
            inv = M[pos][pos].inverse()
            for k in range(pos + 1, n):
                if not M[pos][k].is_zero:
                    colop(k, pos, -(M[pos][k] * inv))
            pieces.append(Piece(pos, 1, int(best), int(best)))
            pos += 1
        else:
            i, j = best_off
            swap(pos, i)
            swap(pos + 1, j if j != pos else i)
            P = [[M[pos][pos], M[pos][pos + 1]], [M[pos + 1][pos], M[pos + 1][pos + 1]]]
            Pinv = mat_inv(P, f)
            for k in range(pos + 2, n):
                b0, b1 = M[pos][k], M[pos + 1][k]
                if b0.is_zero and b1.is_zero:
                    continue
                c0 = -(Pinv[0][0] * b0 + Pinv[0][1] * b1)
                c1 = -(Pinv[1][0] * b0 + Pinv[1][1] * b1)
                colop(k, pos, c0)
                colop(k, pos + 1, c1)
            pieces.append(Piece(pos, 2, int(best), int(_piece_norm(M, pos, 2, f))))
            pos += 2
    blocks = []
    for pc in pieces:
        idx = list(range(pc.start, pc.start + pc.size))
        if blocks and blocks[-1].r == pc.scale:
            blk = blocks[-1]
            blk.indices += idx
            blk.dim += pc.size
            blk.norm = min(blk.norm, pc.norm)
        else:
            blocks.append(JordanBlock(idx, pc.scale, pc.size, pc.norm))
    n_cum = []
    acc = 0
    for b in blocks:
        acc += b.dim
        n_cum.append(acc)
    data = JordanData(len(blocks), blocks, n_cum)
    return JordanSplit(L, U, M, pieces, data)


# -- classical invariants -------------------------------------------------

def s_lattice(L: GramLattice, jd: "JordanSplit | None", k: int) -> GramLattice:
    """Gram of L^{s_k} in the Jordan basis (k is 1-based).

    Blocks j < k are multiplied by pi^(2(r_k - r_j)); the rest are unchanged.
    """
    js = jd if jd is not None else jordan_split(L)
    t = js.data.t
    if not 1 <= k <= t:
        raise RankError(f"block index {k} outside 1..{t}")
    f = L.field
    M = [row[:] for row in js.M]
    rk = js.data.blocks[k - 1].r
    for j in range(k - 1):
        blk = js.data.blocks[j]
        c = f.pi_power(2 * (rk - blk.r))
        for a in blk.indices:
            for b in blk.indices:
                M[a][b] = c * M[a][b]
    return GramLattice(f, M, check=False)


def fundamental_order(u1: int, u2: int, r1: int, w1: float, w2: float,
                      d12: float, e: int) -> float:
    """ord f_k from u_k, u_{k+1}, r_k, w_k, w_{k+1} and d(a_k a_{k+1})."""
    if (u1 + u2) % 2:
        return u1 + u2 - 2 * r1
    return min(u1 + u2 + d12, u2 + w1, u1 + w2, e + (u1 + u2) // 2 + r1) - 2 * r1


def jordan_invariants(L: GramLattice, js: JordanSplit | None = None) -> JordanData:
    """Jordan data with u_k, a_k, w_k (all k) and f_k (k < t) populated."""
    js = js if js is not None else jordan_split(L)
    jd = js.data
    e = L.field.e
    us, avals, ws = [], [], []
    for k in range(1, jd.t + 1):
        Lk = s_lattice(L, js, k)
        a, _ = norm_generator(Lk)
        us.append(int(Lk.norm_order()))
        avals.append(a)
        ws.append(weight_order(Lk))
    fs = []
    for k in range(jd.t - 1):
        d12 = defect_order(avals[k] * avals[k + 1])
        fs.append(fundamental_order(us[k], us[k + 1], jd.blocks[k].r, ws[k], ws[k + 1], d12, e))
    jd.u, jd.a, jd.w, jd.f = us, avals, ws, fs
    return jd


def project_orthogonal(L: GramLattice, x: Vector) -> GramLattice:
    """Gram of the projection of L onto the orthogonal complement of x.

    x is a primitive coordinate vector; the basis vector at the first unit
    coordinate of x is dropped and the others are projected.
    """
    q = L.Q(x)
    if q.is_zero:
        raise ZeroNorm("cannot project along an isotropic vector")
    p = next((i for i, c in enumerate(x) if c.valuation == 0), None)
    if p is None:
        raise MalformedInput("vector is not primitive in the lattice")
    keep = [i for i in range(L.n) if i != p]
    bx = [L.B(L.unit_vector(i), x) for i in range(L.n)]
    qinv = q.inverse()
    gram = [[L.gram[i][j] - bx[i] * bx[j] * qinv for j in keep] for i in keep]
    return GramLattice(L.field, gram, check=False)
