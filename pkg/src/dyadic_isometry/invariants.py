"""The alpha invariants of a good BONG and their links to weights.

All alphas are kept doubled (2*alpha_i) so that half-integers stay exact.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bong import BongSymbol
from .field import INF, defect_order


@dataclass
class AlphaVector:
    alpha2: list
    source: BongSymbol

    @property
    def values(self) -> list:
        """alpha_i as exact numbers (int or x.5 floats)."""
        return [a // 2 if a % 2 == 0 else a / 2 for a in self.alpha2]

    def __eq__(self, other) -> bool:
        if isinstance(other, AlphaVector):
            return self.alpha2 == other.alpha2
        return NotImplemented


def _pair_defects(s: BongSymbol) -> list:
    return [defect_order(-s.a[j] * s.a[j + 1]) for j in range(s.n - 1)]


def alpha_vector(s: BongSymbol) -> AlphaVector:
    """alpha_i as the minimum over the half term and all shifted defects."""
    R, e, n = s.R, s.field.e, s.n
    d = _pair_defects(s)
    out = []
    for i in range(n - 1):
        best = R[i + 1] - R[i] + 2 * e
        for j in range(i + 1):
            if d[j] != INF:
                best = min(best, 2 * (R[i + 1] - R[j] + d[j]))
        for j in range(i, n - 1):
            if d[j] != INF:
                best = min(best, 2 * (R[j + 1] - R[i] + d[j]))
        out.append(int(best))
    return AlphaVector(out, s)


def alpha_recursive(s: BongSymbol) -> AlphaVector:
    """alpha_i as the fixed point of the neighbour recursion."""
    R, e, n = s.R, s.field.e, s.n
    d = _pair_defects(s)
    gaps = [R[i + 1] - R[i] for i in range(n - 1)]
    A = [min(g + 2 * e, 2 * (g + d[i])) for i, g in enumerate(gaps)]
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(gaps):
            cand = A[i]
            if i > 0:
                cand = min(cand, 2 * g + A[i - 1])
            if i < n - 2:
                cand = min(cand, 2 * g + A[i + 1])
            if cand < A[i]:
                A[i] = cand
                changed = True
    return AlphaVector([int(a) for a in A], s)


@dataclass
class RBlock:
    start: int  # 0-based position of the block's first entry
    dim: int
    r: int
    u: int

    @property
    def proper(self) -> bool:
        return self.r == self.u


def blocks_from_R(R: list) -> list:
    """Split an R-sequence into Jordan blocks.

    A proper block is a run r, ..., r; an improper one repeats the pair
    u, 2r - u with u > r.
    """
    out, p, n = [], 0, len(R)
    while p < n:
        if p + 1 < n and R[p + 1] < R[p]:
            q = p
            while q + 1 < n and R[q] == R[p] and R[q + 1] == R[p + 1]:
                q += 2
            out.append(RBlock(p, q - p, (R[p] + R[p + 1]) // 2, R[p]))
            p = q
        else:
            q = p
            while q < n and R[q] == R[p]:
                q += 1
            out.append(RBlock(p, q - p, R[p], R[p]))
            p = q
    return out


def lattice_weight_order(s: BongSymbol, alpha: AlphaVector | None = None) -> int:
    """ord wL = min(R_1 + alpha_1, R_1 + e)."""
    R, e = s.R, s.field.e
    if s.n == 1:
        return R[0] + e
    a2 = (alpha or alpha_vector(s)).alpha2[0]
    return (2 * R[0] + min(a2, 2 * e)) // 2


@dataclass
class FOrder:
    k: int
    value: int
    above_2e: bool


def bong_weight_orders(s: BongSymbol, alpha: AlphaVector | None = None) -> tuple[list, list]:
    """Per-block weight orders w_k and linking orders f_k read off the symbol.

    Returns ([(k, w_k)], [FOrder]) with 1-based k.
    """
    alpha = alpha or alpha_vector(s)
    A, R, e, n = alpha.alpha2, s.R, s.field.e, s.n
    blocks = blocks_from_R(R)
    ws = []
    for k, b in enumerate(blocks, start=1):
        p = b.start
        if b.dim == 1:
            terms = [2 * e]
            if p >= 1:
                terms.append(A[p - 1])
            if p <= n - 2:
                terms.append(A[p])
            w2 = 2 * b.r + min(terms)
        else:
            w2 = 2 * R[p] + A[p]
        if w2 % 2:
            raise ArithmeticError("weight order came out fractional")
        ws.append((k, w2 // 2))
    fs = []
    for k, b in enumerate(blocks[:-1], start=1):
        q = b.start + b.dim - 1
        gap = R[q + 1] - R[q]
        if gap % 2 == 0 or gap <= 2 * e:
            if A[q] % 2:
                raise ArithmeticError("linking order came out fractional")
            fs.append(FOrder(k, A[q] // 2, A[q] > 4 * e))
        else:
            fs.append(FOrder(k, gap, True))
    return ws, fs
