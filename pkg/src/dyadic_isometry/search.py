"""Exhaustive isotropy test for diagonal quadratic forms.

The form sum a_i x_i^2 is isotropic iff it has a primitive zero.  We walk
pi-adic digit expansions of primitive vectors (first unit coordinate pinned
to 1), pruning any truncation whose value is not divisible by the matching
power of pi, and accept a truncation x once

    ord Q(x) > 2 * min_j ord(2 a_j x_j),

which lets Newton's method in one coordinate lift x to a true zero.  After
normalizing every a_i to order 0 or 1, the pinned coordinate alone gives
min_j ord(2 a_j x_j) <= e + 1, so any truncation surviving to depth 2e+3 is
accepted: that depth makes the search complete.
"""
from __future__ import annotations

from itertools import product
from typing import Sequence

from .field import DyadicField, FieldElement


def _normalized(diag: Sequence[FieldElement]) -> list[FieldElement]:
    out = []
    for a in diag:
        v = int(a.valuation)
        out.append(a * a.field.pi_power(-2 * (v // 2)))
    return out


def default_bound(field: DyadicField) -> int:
    return 2 * field.e + 3


def isotropy_search(diag: Sequence[FieldElement], bound: int | None = None) -> bool:
    """True iff the diagonal form has a nontrivial zero.

    ``bound`` is the digit depth; the default is complete.  A smaller bound
    can only turn a True into a False.
    """
    diag = list(diag)
    n = len(diag)
    if n == 0:
        return False
    if any(a.is_zero for a in diag):
        return True
    if n == 1:
        return False
    field = diag[0].field
    e = field.e
    depth = default_bound(field) if bound is None else bound
    if field.ring_precision < depth + 2:
        work = field.with_guard(field.guard + depth + 2)
    else:
        work = field
    coeffs = [FieldElement(work, a.c) for a in _normalized(diag)]
    A = [work.residue(a) for a in coeffs]
    ordA = [int(a.valuation) for a in coeffs]
    zero = (0,) * e
    pis = [work.rpi_power(k) for k in range(depth + 1)]
    cap = work.ring_precision

    def add(x, y):
        return tuple((u + v) % work.modulus for u, v in zip(x, y))

    def qval(xs):
        total = zero
        for a, x in zip(A, xs):
            total = add(total, work.rmul(a, work.rmul(x, x)))
        return work.rval(total)

    def certified(xs, oq):
        m0 = min(e + ordA[j] + work.rval(x) for j, x in enumerate(xs) if any(x))
        return 2 * m0 < cap and oq > 2 * m0

    def dfs(xs, k, free):
        # xs known modulo pi^k; extend with digit k on the free coordinates
        for digits in product((0, 1), repeat=len(free)):
            ys = list(xs)
            for i, b in zip(free, digits):
                if b:
                    ys[i] = add(ys[i], pis[k])
            oq = qval(ys)
            if oq < k + 1:
                continue
            if certified(ys, oq):
                return True
            if k + 1 < depth and dfs(ys, k + 1, free):
                return True
        return False

    for p in range(n):
        xs = [zero] * n
        xs[p] = work.rone()
        tail = list(range(p + 1, n))
        # digit 0: coordinates before p are non-units, p is 1, the rest free
        for digits in product((0, 1), repeat=len(tail)):
            ys = list(xs)
            for i, b in zip(tail, digits):
                if b:
                    ys[i] = work.rone()
            oq = qval(ys)
            if oq < 1:
                continue
            if certified(ys, oq):
                return True
            if depth > 1 and dfs(ys, 1, [i for i in range(n) if i != p]):
                return True
    return False
