"""Acceptance criteria, one test each.  Every test prints a single
PASS/FAIL line (also when run as ``python3 tests/test_acceptance.py``)."""
import collections
import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import E2, Q2, brute_defect, diag  # noqa: E402
from dyadic_isometry import (BongSymbol, all_square_classes, alpha_vector,  # noqa: E402
                             anisotropic_dim, binary_transform_reachable, defect_order,
                             g_membership, good_bong, hilbert, isometric_2adic, isometric_bong,
                             isometric_jordan, isotropy_search, reachable_states,
                             space_invariants)
from dyadic_isometry.sampling import (random_block_lattice, random_element,  # noqa: E402
                                      random_good_symbol, random_lattice, random_pair,
                                      random_unimodular)
from properties import alpha_violations, bridge_violations, representation_violations  # noqa: E402

FIELDS = [(Q2, "Q2"), (E2, "x^2+2")]


def report(name, ok, detail, capsys=None):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


# -- 1 ----------------------------------------------------------------------

def crit_counterexample():
    t0 = time.perf_counter()
    problems = []
    L, K = diag(Q2, [1, 1, 1, 1]), diag(Q2, [7, 7, 7, 7])
    for d in (isometric_bong, isometric_jordan, isometric_2adic):
        if not d(L, K).isometric:
            problems.append(d.__name__)
    s, t = BongSymbol.of(Q2, [1, 1, 1, 1]), BongSymbol.of(Q2, [7, 7, 7, 7])
    if binary_transform_reachable(s, t):
        problems.append("reachable")
    states = reachable_states(s)
    five = Q2.class_key(Q2.element(5))
    if len(states) != 8 or any(set(x) - {0, five} or x.count(five) % 2 for x in states):
        problems.append(f"states {sorted(states)}")
    dt = time.perf_counter() - t0
    if dt >= 1:
        problems.append(f"took {dt:.2f}s")
    return not problems, f"{len(states)} reachable states, {dt:.3f}s {problems or ''}".strip()


# -- 2 ----------------------------------------------------------------------

def crit_g_group():
    got = {a: [u for u in (1, 3, 5, 7) if g_membership(Q2.element(u), Q2.element(a))]
           for a in (1, 5)}
    return got == {1: [1, 5], 5: [1, 5]}, f"g(1)={got[1]} g(5)={got[5]}"


# -- 3 ----------------------------------------------------------------------

def _in_window(L, lo=-2, hi=6):
    return all(x.is_zero or lo <= x.valuation <= hi for row in L.gram for x in row)


def crit_fuzz(pairs=500, budget=300.0):
    t0 = time.perf_counter()
    parts, ok = [], True
    for f, name in FIELDS:
        rng = random.Random(f"agreement-{f.e}")
        done = bad = 0
        tags = collections.Counter()
        while done < pairs:
            L, K, _ = random_pair(rng, f, max_rank=5)
            if not (_in_window(L) and _in_window(K)):
                continue
            done += 1
            b, o = isometric_bong(L, K), isometric_jordan(L, K)
            answers = {b.isometric, o.isometric}
            if f.e == 1:
                answers.add(isometric_2adic(L, K).isometric)
            bad += len(answers) > 1
            tags[(b.failing_condition or "isometric").split("(")[0]] += 1
        ok &= bad == 0
        parts.append(f"{name}: {done} pairs, {bad} disagreements {dict(sorted(tags.items()))}")
    dt = time.perf_counter() - t0
    ok &= dt <= budget
    return ok, "; ".join(parts) + f"; {dt:.1f}s"


# -- 4 ----------------------------------------------------------------------

def crit_basis_change(trials=200):
    rng = random.Random("basis-change")
    bad = 0
    for i in range(trials):
        f = FIELDS[i % 2][0]
        n = rng.randint(1, 5)
        L = (random_block_lattice if i % 3 else random_lattice)(rng, f, n)
        K = L.transform(random_unimodular(rng, f, n))
        s, t = good_bong(L), good_bong(K)
        same = s.R == t.R and alpha_vector(s).alpha2 == alpha_vector(t).alpha2
        verdicts = [isometric_bong(L, K).isometric, isometric_jordan(L, K).isometric]
        if f.e == 1:
            verdicts.append(isometric_2adic(L, K).isometric)
        bad += not (same and all(verdicts))
    return bad == 0, f"{trials} trials, {bad} failures"


# -- 5 ----------------------------------------------------------------------

def crit_alpha(symbols=1000):
    rng = random.Random("alpha")
    bad, first = 0, None
    for i in range(symbols):
        f = FIELDS[i % 2][0]
        s = random_good_symbol(rng, f, rng.randint(1, 8))
        v = alpha_violations(s, rng)
        if v:
            bad += 1
            first = first or (s.R, v)
    return bad == 0, f"{symbols} symbols, {bad} with violations" + (f" e.g. {first}" if first else "")


# -- 6 ----------------------------------------------------------------------

def crit_bridge(lattices=200):
    rng = random.Random("bridge")
    bad, first = 0, None
    for i in range(lattices):
        f = FIELDS[i % 2][0]
        L = (random_block_lattice if i % 3 else random_lattice)(rng, f, rng.randint(1, 5))
        v = bridge_violations(L)
        if v:
            bad += 1
            first = first or v
    return bad == 0, f"{lattices} lattices, {bad} violations" + (f" e.g. {first}" if first else "")


# -- 7 ----------------------------------------------------------------------

def crit_field(pairs=10_000):
    problems = []
    cls = [Q2.element(x) for x in (1, 3, 5, 7, 2, 6, 10, 14)]
    for a, b in itertools.product(cls, repeat=2):
        if (hilbert(a, b) == 1) != isotropy_search([a, b, -Q2.one]):
            problems.append(f"hilbert({a.literal()},{b.literal()})")
    for a in cls:
        if defect_order(a) != brute_defect(a, 12):
            problems.append(f"d({a.literal()})")
    rng = random.Random("domination")
    for f, name in FIELDS:
        allowed = {0, 2 * f.e, math.inf} | set(range(1, 2 * f.e, 2))
        for _ in range(pairs):
            a, b = random_element(rng, f, -3, 3), random_element(rng, f, -3, 3)
            da, db, dab = defect_order(a), defect_order(b), defect_order(a * b)
            if not {da, db, dab} <= allowed or dab < min(da, db):
                problems.append(f"{name}: {a.literal()}, {b.literal()}")
                break
    return not problems, f"64 symbols, 8 defects, {pairs} pairs per field; problems: {problems or 'none'}"


# -- 8 ----------------------------------------------------------------------

def crit_representation(instances=1000):
    problems = []
    rng = random.Random("representation")
    for f, name in FIELDS:
        bad = sum(bool(representation_violations(rng, f)) for _ in range(instances))
        if bad:
            problems.append(f"{name}: {bad} failing instances")
    forms = 0
    for n in (2, 3, 4, 5):
        for combo in itertools.combinations_with_replacement(all_square_classes(Q2), n):
            forms += 1
            if (anisotropic_dim(space_invariants(list(combo))) < n) != isotropy_search(list(combo)):
                problems.append(str([c.literal() for c in combo]))
    return not problems, f"{instances} instances per field, {forms} diagonal forms; problems: {problems or 'none'}"


CRITERIA = [
    ("1 four-squares counterexample", crit_counterexample),
    ("2 g-group of 1 and 5 over Q2", crit_g_group),
    ("3 decider agreement fuzz", crit_fuzz),
    ("4 basis-change invariance", crit_basis_change),
    ("5 alpha property suite", crit_alpha),
    ("6 weight and linking order bridge", crit_bridge),
    ("7 Hilbert, defect and domination", crit_field),
    ("8 representation equivalences and anisotropic dimension", crit_representation),
]


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, detail = fn()
    report(name, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    results = [report(name, *fn()) for name, fn in CRITERIA]
    sys.exit(0 if all(results) else 1)
