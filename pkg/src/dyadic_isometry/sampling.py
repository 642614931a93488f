"""Random fields elements, lattices, unimodular matrices and symbols for
fuzzing.  Every sampler takes an explicit ``random.Random``.
"""
from __future__ import annotations

import random

from .bong import BongSymbol
from .errors import Degenerate
from .field import DyadicField, FieldElement, defect_order
from .lattice import GramLattice, Matrix, mat_det


def random_unit(rng: random.Random, field: DyadicField) -> FieldElement:
    coeffs = [rng.choice((-7, -5, -3, -1, 1, 3, 5, 7))]
    coeffs += [rng.randint(-3, 3) for _ in range(field.e - 1)]
    return field.element(coeffs)


def random_integral(rng: random.Random, field: DyadicField) -> FieldElement:
    return field.element([rng.randint(-3, 3) for _ in range(field.e)])


def random_element(rng: random.Random, field: DyadicField, lo: int = -2, hi: int = 6) -> FieldElement:
    return random_unit(rng, field) * field.pi_power(rng.randint(lo, hi))


def random_unimodular(rng: random.Random, field: DyadicField, n: int, steps: int | None = None) -> Matrix:
    """Product of a permutation, unit scalings and integral shears."""
    U = [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    U = [[U[i][perm[j]] for j in range(n)] for i in range(n)]
    for j in range(n):
        if rng.random() < 0.5:
            u = random_unit(rng, field)
            for i in range(n):
                U[i][j] = U[i][j] * u
    for _ in range(steps if steps is not None else 2 * n):
        if n < 2:
            break
        k, p = rng.sample(range(n), 2)
        c = random_integral(rng, field)
        if c.is_zero:
            continue
        for i in range(n):
            U[i][k] = U[i][k] + c * U[i][p]
    return U


def random_lattice(rng: random.Random, field: DyadicField, n: int,
                   lo: int = -2, hi: int = 6, zero_prob: float = 0.4) -> GramLattice:
    """Symmetric Gram with entry orders in [lo, hi] (off-diagonals may be 0)."""
    while True:
        G = [[field.zero] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = random_element(rng, field, lo, hi)
            for j in range(i + 1, n):
                if rng.random() >= zero_prob:
                    G[i][j] = G[j][i] = random_element(rng, field, lo, hi)
        if not mat_det(G, field).is_zero:
            return GramLattice(field, G, check=False)


def random_block_lattice(rng: random.Random, field: DyadicField, n: int,
                         lo: int = -2, hi: int = 6) -> GramLattice:
    """Orthogonal sum of unary and binary pieces, then a random basis change.

    Binary pieces are biased toward improper ones, which exercise the
    harder parts of the invariants.
    """
    blocks = []
    left = n
    while left:
        if left >= 2 and rng.random() < 0.5:
            r = rng.randint(lo, hi - 1)
            b = random_unit(rng, field) * field.pi_power(r)
            a = random_unit(rng, field) * field.pi_power(rng.randint(r + 1, r + 2 * field.e + 1))
            d = random_unit(rng, field) * field.pi_power(rng.randint(r + 1, r + 2 * field.e + 1))
            if rng.random() < 0.3:
                a = field.zero
            blocks.append([[a, b], [b, d]])
            left -= 2
        else:
            blocks.append([[random_element(rng, field, lo, hi)]])
            left -= 1
    G = [[field.zero] * n for _ in range(n)]
    pos = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, x in enumerate(row):
                G[pos + i][pos + j] = x
        pos += len(blk)
    if mat_det(G, field).is_zero:
        return random_block_lattice(rng, field, n, lo, hi)
    L = GramLattice(field, G, check=False)
    return L.transform(random_unimodular(rng, field, n, steps=n))


def perturb(rng: random.Random, L: GramLattice) -> GramLattice:
    """A nearby lattice: one diagonal entry moved by a unit factor or a
    small additive term.  Often, but not always, non-isometric."""
    f = L.field
    G = [row[:] for row in L.gram]
    i = rng.randrange(L.n)
    if rng.random() < 0.6 or G[i][i].is_zero:
        G[i][i] = G[i][i] * random_unit(rng, f) if not G[i][i].is_zero else random_element(rng, f)
    else:
        G[i][i] = G[i][i] + f.pi_power(int(G[i][i].valuation) + rng.randint(1, 2 * f.e + 2))
    if mat_det(G, f).is_zero:
        return perturb(rng, L)
    return GramLattice(f, G, check=False)


def perturb_same_space(rng: random.Random, L: GramLattice, tries: int = 40) -> GramLattice:
    """A perturbation with the same quadratic space as L, when one is found
    within ``tries`` attempts (otherwise a plain perturbation)."""
    from .spaces import lattice_space

    target = lattice_space(L)
    K = perturb(rng, L)
    for _ in range(tries):
        if lattice_space(K) == target:
            return K
        K = perturb(rng, L if rng.random() < 0.5 else K)
    return K


def twist(rng: random.Random, L: GramLattice, tries: int = 40) -> GramLattice:
    """Block-diagonalize L and multiply one or two pieces by a common unit,
    keeping the quadratic space when possible.  These pairs share R-data and
    differ only in finer unit information."""
    from .lattice import jordan_split
    from .spaces import lattice_space

    f = L.field
    js = jordan_split(L)
    target = lattice_space(L)
    K = L
    for _ in range(tries):
        M = [row[:] for row in js.M]
        chosen = rng.sample(js.pieces, min(len(js.pieces), rng.choice((1, 2))))
        eta = random_unit(rng, f)
        for pc in chosen:
            for i in range(pc.start, pc.start + pc.size):
                for j in range(pc.start, pc.start + pc.size):
                    M[i][j] = M[i][j] * eta
        K = GramLattice(f, M, check=False)
        if lattice_space(K) == target:
            break
    return K


def random_pair(rng: random.Random, field: DyadicField, max_rank: int = 5,
                lo: int = -2, hi: int = 6) -> tuple[GramLattice, GramLattice, str]:
    """A pair of same-rank lattices: isometric, perturbed or independent."""
    n = rng.randint(1, max_rank)
    if rng.random() < 0.35:
        L, K = random_symbol_pair(rng, field, n)
        return L, K, "symbol"
    maker = random_block_lattice if rng.random() < 0.6 else random_lattice
    L = maker(rng, field, n, lo, hi)
    kind = rng.choices(("isometric", "perturbed", "independent"), (0.4, 0.45, 0.15))[0]
    if kind == "isometric":
        K = L.transform(random_unimodular(rng, field, n))
    elif kind == "perturbed":
        K0 = twist(rng, L) if rng.random() < 0.5 else perturb_same_space(rng, L)
        K = K0.transform(random_unimodular(rng, field, n))
    else:
        K = maker(rng, field, n, lo, hi)
    return L, K, kind


def random_good_symbol(rng: random.Random, field: DyadicField, n: int,
                       r0: tuple = (-3, 3)) -> BongSymbol:
    """A random sequence satisfying every good-BONG condition."""
    e = field.e
    while True:
        R = [rng.randint(*r0)]
        a = [field.pi_power(R[0]) * random_unit(rng, field)]
        ok = True
        for i in range(1, n):
            for _ in range(50):
                gap = rng.randint(-2 * e, 2 * e + 3)
                if gap < 0 and gap % 2:
                    continue
                Rn = R[-1] + gap
                if i >= 2 and Rn < R[-2]:
                    continue
                x = field.pi_power(Rn) * random_unit(rng, field)
                if gap + defect_order(-a[-1] * x) < 0:
                    continue
                R.append(Rn)
                a.append(x)
                break
            else:
                ok = False
                break
        if ok:
            return BongSymbol(a)


def _approx_sqrt(u: FieldElement, k: int) -> FieldElement:
    """A unit s with ord(s^2 - u) >= k, by search over digit expansions."""
    from itertools import product

    f = u.field
    for digits in product((0, 1), repeat=max(k, 1) - 1):
        s = f.one
        for i, b in enumerate(digits, start=1):
            if b:
                s = s + f.pi_power(i)
        if (s * s - u).valuation >= k:
            return s
    raise ValueError("no square root to the requested precision")


def lattice_from_symbol(s: BongSymbol) -> GramLattice:
    """A lattice with a good BONG having the values of ``s``.

    Each improper pair (a, b) with ord b < ord a becomes the binary lattice
    spanned by x and y = x' + t x, where x, x' are orthogonal with Q = a, b
    and t^2 is close to -b/a; proper entries become unary summands.
    """
    from .invariants import blocks_from_R

    f = s.field
    R = s.R
    pieces = []
    for blk in blocks_from_R(R):
        if blk.proper:
            pieces += [[[s.a[i]]] for i in range(blk.start, blk.start + blk.dim)]
            continue
        for i in range(blk.start, blk.start + blk.dim, 2):
            a, b = s.a[i], s.a[i + 1]
            m = (R[i] - R[i + 1]) // 2
            eps = -(b / a) * f.pi_power(2 * m)
            t = _approx_sqrt(eps, 2 * m) * f.pi_power(-m)
            pieces.append([[a, t * a], [t * a, b + t * t * a]])
    n = len(R)
    G = [[f.zero] * n for _ in range(n)]
    pos = 0
    for blk in pieces:
        for i, row in enumerate(blk):
            for j, x in enumerate(row):
                G[pos + i][pos + j] = x
        pos += len(blk)
    return GramLattice(f, G, check=False)


def random_symbol_pair(rng: random.Random, field: DyadicField, n: int) -> tuple[GramLattice, GramLattice]:
    """Lattices built from two good symbols with equal R and equal space,
    differing by unit factors; they often agree on all coarse invariants."""
    from .spaces import space_invariants

    from .field import unit_square_classes

    units = unit_square_classes(field)
    s = random_good_symbol(rng, field, n, r0=(-2, 2))
    target = space_invariants(s.a)
    for _ in range(60):
        b = list(s.a)
        for _ in range(rng.randint(1, 2)):
            j = rng.randrange(n)
            if n > 1 and rng.random() < 0.5:
                # same unit on a consecutive pair: keeps all but one partial product
                j = min(j, n - 2)
                eta = rng.choice(units)
                b[j], b[j + 1] = b[j] * eta, b[j + 1] * eta
                continue
            b[j] = b[j] * random_unit(rng, field)
            if rng.random() < 0.5 and j + 1 < n:
                b[j + 1] = b[j + 1] * random_unit(rng, field)
        t = BongSymbol(b)
        if t.is_good() and space_invariants(t.a) == target:
            break
    else:
        t = s
    L = lattice_from_symbol(s)
    K = lattice_from_symbol(t)
    U = random_unimodular(rng, field, n, steps=n)
    return L.transform(U), K.transform(random_unimodular(rng, field, n, steps=n))
