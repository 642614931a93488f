"""Isometry deciders for lattices and the binary-transformation search.

Three independent procedures decide whether two lattices are isometric:

* ``isometric_bong`` compares good-BONG data (R_i, alpha_i, defects of
  partial products, and a representation test),
* ``isometric_jordan`` compares Jordan data (fundamental type, linking
  orders f_k and two representation tests),
* ``isometric_2adic`` is the alpha-free shortcut valid over Q2.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field

from .bong import BongSymbol, g_membership, good_bong
from .errors import FieldMismatch, RankMismatch, RMismatch
from .field import INF, defect_order, in_A, unit_square_classes
from .invariants import AlphaVector, alpha_vector
from .lattice import GramLattice, JordanData, JordanSplit, jordan_split, mat_det, jordan_invariants
from .search import isotropy_search
from .spaces import SpaceInvariants, lattice_space, represents, space_invariants

__all__ = [
    "Verdict", "isometric_bong", "isometric_jordan", "isometric_2adic",
    "binary_transform_reachable", "reachable_states", "isotropy_search", "profile",
]


@dataclass
class Verdict:
    isometric: bool
    failing_condition: str | None = None
    invariant_dump: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"isometric": self.isometric, "failing_condition": self.failing_condition,
                "invariants": self.invariant_dump}


def _fail(tag: str, dump: dict) -> Verdict:
    return Verdict(False, tag, dump)


class _Profile:
    """Lazily computed invariants of one lattice."""

    def __init__(self, L: GramLattice):
        self.L = L
        self._bong: BongSymbol | None = None
        self._alpha: AlphaVector | None = None
        self._js: JordanSplit | None = None
        self._jd: JordanData | None = None
        self._space: SpaceInvariants | None = None

    @property
    def bong(self) -> BongSymbol:
        if self._bong is None:
            self._bong = good_bong(self.L)
        return self._bong

    @property
    def alpha(self) -> AlphaVector:
        if self._alpha is None:
            self._alpha = alpha_vector(self.bong)
        return self._alpha

    @property
    def js(self) -> JordanSplit:
        if self._js is None:
            self._js = jordan_split(self.L)
        return self._js

    @property
    def jd(self) -> JordanData:
        if self._jd is None:
            self._jd = jordan_invariants(self.L, self.js)
        return self._jd

    @property
    def space(self) -> SpaceInvariants:
        if self._space is None:
            self._space = lattice_space(self.L)
        return self._space

    def leading_space(self, n: int) -> SpaceInvariants:
        sub = GramLattice(self.L.field, self.js.leading_gram(n), check=False)
        return lattice_space(sub)

    def leading_det(self, n: int):
        return mat_det(self.js.leading_gram(n), self.L.field)


def profile(L: GramLattice) -> _Profile:
    p = getattr(L, "_profile", None)
    if p is None:
        p = _Profile(L)
        L._profile = p
    return p


def _check_pair(L: GramLattice, K: GramLattice) -> None:
    if L.field != K.field:
        raise FieldMismatch("lattices live over different fields")
    if L.n != K.n:
        raise RankMismatch(f"ranks differ: {L.n} vs {K.n}")


def _bong_dump(P: _Profile) -> dict:
    return {"R": P.bong.R, "alpha2": [_num(a) for a in P.alpha.alpha2]}


def _num(x):
    return "inf" if x == INF else x


def isometric_bong(L: GramLattice, K: GramLattice) -> Verdict:
    """Decide L ~ K from good BONGs; reports the first failed condition."""
    _check_pair(L, K)
    P, Q = profile(L), profile(K)
    s, t = P.bong, Q.bong
    e = L.field.e
    dump = {"L": _bong_dump(P), "K": _bong_dump(Q)}
    if space_invariants(s.a) != space_invariants(t.a):
        return _fail("space", dump)
    if s.R != t.R:
        return _fail("R", dump)
    A, B = P.alpha.alpha2, Q.alpha.alpha2
    if A != B:
        return _fail("alpha", dump)
    n = s.n
    pa, pb = L.field.one, L.field.one
    for i in range(1, n):
        pa, pb = pa * s.a[i - 1], pb * t.a[i - 1]
        if 2 * defect_order(pa * pb) < A[i - 1]:
            return _fail(f"defect({i})", dump)
    for i in range(2, n):
        if A[i - 2] + A[i - 1] > 4 * e:
            if not represents(space_invariants(t.a[:i - 1]), space_invariants(s.a[:i])):
                return _fail(f"representation({i})", dump)
    return Verdict(True, None, dump)


def _jordan_dump(jd: JordanData) -> dict:
    return {"r": jd.r, "dims": jd.dims, "u": jd.u, "w": [_num(w) for w in jd.w],
            "f": [_num(f) for f in jd.f]}


def isometric_jordan(L: GramLattice, K: GramLattice) -> Verdict:
    """Decide L ~ K from Jordan chains and the linking orders f_k."""
    _check_pair(L, K)
    P, Q = profile(L), profile(K)
    e = L.field.e
    jl, jk = P.jd, Q.jd
    dump = {"L": _jordan_dump(jl), "K": _jordan_dump(jk)}
    if P.space != Q.space:
        return _fail("space", dump)
    if (jl.t, jl.dims, jl.r, jl.u, jl.w) != (jk.t, jk.dims, jk.r, jk.u, jk.w):
        return _fail("fundamental_type", dump)
    for k in range(jl.t):
        if defect_order(jl.a[k] * jk.a[k]) < jl.w[k] - jl.u[k]:
            return _fail("fundamental_type", dump)
    for k in range(jl.t - 1):
        nk = jl.n_cum[k]
        if defect_order(P.leading_det(nk) * Q.leading_det(nk)) < jl.f[k]:
            return _fail(f"leading_det({k + 1})", dump)
    for k in range(jl.t - 1):
        nk = jl.n_cum[k]
        fl = jl.f[k]
        if fl + jl.w[k + 1] - jl.u[k + 1] > 2 * e:
            target = space_invariants([jl.a[k + 1]])
            if not represents(P.leading_space(nk), _plus(Q.leading_space(nk), target)):
                return _fail(f"leading_space_next({k + 1})", dump)
        if fl + jl.w[k] - jl.u[k] > 2 * e:
            target = space_invariants([jl.a[k]])
            if not represents(P.leading_space(nk), _plus(Q.leading_space(nk), target)):
                return _fail(f"leading_space_own({k + 1})", dump)
    return Verdict(True, None, dump)


def _plus(U: SpaceInvariants, V: SpaceInvariants) -> SpaceInvariants:
    from .spaces import orthogonal_sum

    return orthogonal_sum(U, V)


def isometric_2adic(L: GramLattice, K: GramLattice) -> Verdict:
    """Decide L ~ K over Q2 using only R_i, partial products and spaces."""
    if L.field.e != 1 or K.field.e != 1:
        raise FieldMismatch("the 2-adic shortcut needs e = 1")
    _check_pair(L, K)
    P, Q = profile(L), profile(K)
    s, t = P.bong, Q.bong
    f = L.field
    dump = {"L": {"R": s.R}, "K": {"R": t.R}}
    if space_invariants(s.a) != space_invariants(t.a):
        return _fail("space", dump)
    R = s.R
    if R != t.R:
        return _fail("R", dump)
    n = s.n
    delta_key = f.class_key(f.delta)
    pa, pb = f.one, f.one
    for i in range(1, n):
        pa, pb = pa * s.a[i - 1], pb * t.a[i - 1]
        gap = R[i] - R[i - 1]
        key = f.class_key(pa * pb)
        if gap == 2 and key not in (0, delta_key):
            return _fail(f"defect({i})", dump)
        if gap > 2 and key != 0:
            return _fail(f"defect({i})", dump)
    for i in range(2, n):
        lo, hi = R[i - 1] - R[i - 2], R[i] - R[i - 1]
        if R[i - 2] < R[i] and (lo, hi) not in ((0, 1), (1, 0), (1, 1)):
            if not represents(space_invariants(t.a[:i - 1]), space_invariants(s.a[:i])):
                return _fail(f"representation({i})", dump)
    return Verdict(True, None, dump)


# -- binary transformations -------------------------------------------------

def _state(s: BongSymbol) -> tuple:
    f = s.field
    return tuple(f.class_key(x.unit_part()) for x in s.a)


def reachable_states(s: BongSymbol) -> set:
    """Unit-class tuples reachable by binary transformations from s.

    A move at position j multiplies a_j and a_{j+1} by a unit eta lying in
    g(a_{j+1}/a_j), evaluated in the current state.
    """
    f = s.field
    R = s.R
    etas = [(f.class_key(u), u) for u in unit_square_classes(f)]
    start = _state(s)

    def value(state, i):
        return f.pi_power(R[i]) * f.from_key(state[i])

    seen = {start}
    todo = deque([start])
    while todo:
        st = todo.popleft()
        for j in range(len(R) - 1):
            ratio = value(st, j + 1) / value(st, j)
            if not in_A(ratio):
                continue
            for key, eta in etas:
                if key == 0 or not g_membership(eta, ratio):
                    continue
                nxt = list(st)
                nxt[j] ^= key
                nxt[j + 1] ^= key
                nxt = tuple(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return seen


def binary_transform_reachable(s: BongSymbol, t: BongSymbol) -> bool:
    if s.field != t.field:
        raise FieldMismatch("symbols over different fields")
    if s.R != t.R:
        raise RMismatch("symbols have different R-sequences")
    return _state(t) in reachable_states(s)
