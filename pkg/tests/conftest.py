import pytest

from dyadic_isometry import DyadicField, GramLattice

Q2 = DyadicField(1)
E2 = DyadicField(2)  # pi^2 + 2 = 0


@pytest.fixture(scope="session")
def q2():
    return Q2


@pytest.fixture(scope="session")
def e2():
    return E2


def diag(field, values):
    return GramLattice.diagonal(field, [field.element(v) for v in values])


def gram(field, rows):
    return GramLattice(field, [[field.element(x) for x in row] for row in rows])


def brute_defect(a, digits: int = 12):
    """d(a) as max over b of ord(a - b^2) - ord(a), scanning b modulo pi^digits.

    Anything beyond ord(a) + 2e is reported as infinity (local square theorem).
    """
    from itertools import product
    import math

    f = a.field
    va = int(a.valuation)
    best = -1
    if f.e == 1:
        cands = (f.element(b) for b in range(1 << digits))
    else:
        pis = [f.pi_power(i) for i in range(digits)]

        def build(bits):
            x = f.zero
            for bit, p in zip(bits, pis):
                if bit:
                    x = x + p
            return x
        cands = (build(bits) for bits in product((0, 1), repeat=digits))
    for b in cands:
        best = max(best, (a - b * b).valuation)
    d = best - va
    return math.inf if d > 2 * f.e else d
