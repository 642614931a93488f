"""Invariants of quadratic spaces and the representation test.

A space is described by (dim, det mod squares, Hasse symbol) with the Hasse
symbol of a diagonal form [a_1, ..., a_m] taken as prod_{i<j} (a_i, a_j).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .field import DyadicField, FieldElement, hilbert, is_square
from .lattice import GramLattice, jordan_split


@dataclass(frozen=True)
class SpaceInvariants:
    dim: int
    det: FieldElement
    hasse: int

    @property
    def field(self) -> DyadicField:
        return self.det.field

    def det_key(self) -> int:
        return self.field.class_key(self.det)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpaceInvariants):
            return NotImplemented
        return (self.dim, self.det_key(), self.hasse) == (other.dim, other.det_key(), other.hasse)

    def __hash__(self) -> int:
        return hash((self.dim, self.det_key(), self.hasse))

    def to_json(self) -> dict:
        return {"dim": self.dim, "det_class": self.det_key(), "hasse": self.hasse}


def space_invariants(diag: Sequence[FieldElement], field: DyadicField | None = None) -> SpaceInvariants:
    diag = list(diag)
    if field is None:
        if not diag:
            raise ValueError("field required for the zero space")
        field = diag[0].field
    det = field.one
    h = 1
    for i, a in enumerate(diag):
        for b in diag[i + 1:]:
            h *= hilbert(a, b)
        det = det * a
    return SpaceInvariants(len(diag), det, h)


def hyperbolic_plane(field: DyadicField) -> SpaceInvariants:
    return space_invariants([field.one, -field.one])


def orthogonal_sum(U: SpaceInvariants, V: SpaceInvariants) -> SpaceInvariants:
    if U.dim == 0:
        return V
    if V.dim == 0:
        return U
    return SpaceInvariants(U.dim + V.dim, U.det * V.det, U.hasse * V.hasse * hilbert(U.det, V.det))


def negate(U: SpaceInvariants) -> SpaceInvariants:
    """Invariants of the space with every value negated."""
    m = U.dim
    f = U.field
    minus = -f.one
    h = U.hasse
    if (m * (m - 1) // 2) % 2:
        h *= hilbert(minus, minus)
    if (m - 1) % 2 and m > 0:
        h *= hilbert(minus, U.det)
    det = U.det if m % 2 == 0 else -U.det
    return SpaceInvariants(m, det, h)


def isometric_spaces(U: SpaceInvariants, V: SpaceInvariants) -> bool:
    return U == V


def anisotropic_dim(V: SpaceInvariants) -> int:
    """Dimension of the anisotropic kernel of V."""
    f = V.field
    m, d, h = V.dim, V.det, V.hasse
    minus = -f.one
    while m >= 5:
        # split off a hyperbolic plane: the rest has det -d, hasse h*(-1,-d)
        h *= hilbert(minus, -d)
        d = -d
        m -= 2
    if m <= 1:
        return m
    if m == 2:
        return 0 if is_square(-d) else 2
    if m == 3:
        return 1 if h == hilbert(minus, -d) else 3
    if is_square(d):
        return 0 if h == hilbert(minus, minus) else 4
    return 2


def witt_index(V: SpaceInvariants) -> int:
    return (V.dim - anisotropic_dim(V)) // 2


def represents(U: SpaceInvariants, V: SpaceInvariants) -> bool:
    """Whether U embeds isometrically into V."""
    if U.dim == 0:
        return True
    if U.dim > V.dim:
        return False
    return witt_index(orthogonal_sum(V, negate(U))) >= U.dim


def binary_diagonal(gram: list) -> list:
    """A diagonal form [p, det/p] of a nondegenerate 2x2 Gram matrix."""
    a, b = gram[0][0], gram[0][1]
    d = gram[1][1]
    det = a * d - b * b
    for x, y in ((1, 0), (0, 1), (1, 1), (1, 2)):
        q = a * (x * x) + b * (2 * x * y) + d * (y * y)
        if not q.is_zero:
            return [q, det / q]
    raise ValueError("degenerate binary form")


def diagonalize(L: GramLattice) -> list:
    """Diagonal entries of a form isometric to FL."""
    js = jordan_split(L)
    out = []
    for pc in js.pieces:
        block = [row[pc.start:pc.start + pc.size] for row in js.M[pc.start:pc.start + pc.size]]
        out += [block[0][0]] if pc.size == 1 else binary_diagonal(block)
    return out


def lattice_space(L: GramLattice) -> SpaceInvariants:
    return space_invariants(diagonalize(L), L.field)
