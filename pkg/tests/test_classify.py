import collections
import itertools
import random

import pytest

from conftest import E2, Q2, diag, gram
from dyadic_isometry import (BongSymbol, FieldMismatch, RankMismatch, RMismatch,
                             binary_transform_reachable, defect_order, isometric_2adic,
                             isometric_bong, isometric_jordan, reachable_states,
                             space_invariants, unit_square_classes)
from dyadic_isometry.classify import profile
from dyadic_isometry.sampling import (lattice_from_symbol, random_block_lattice, random_pair,
                                      random_unimodular)

DECIDERS = [isometric_bong, isometric_jordan]


def all_verdicts(L, K):
    out = [d(L, K) for d in DECIDERS]
    if L.field.e == 1:
        out.append(isometric_2adic(L, K))
    return out


class TestFixtures:
    def test_four_squares_counterexample(self):
        L, K = diag(Q2, [1, 1, 1, 1]), diag(Q2, [7, 7, 7, 7])
        assert all(v.isometric for v in all_verdicts(L, K))

    def test_space_failure(self):
        L, K = diag(Q2, [1, 1, 1, 1]), diag(Q2, [1, 1, 1, 5])
        for v in all_verdicts(L, K):
            assert not v.isometric and v.failing_condition == "space"

    def test_two_scales(self):
        assert all(v.isometric for v in all_verdicts(diag(Q2, [1, 4]), diag(Q2, [5, 20])))
        answers = {v.isometric for v in all_verdicts(diag(Q2, [1, 4]), diag(Q2, [3, 12]))}
        assert answers == {False}

    def test_rank_one(self):
        assert isometric_bong(diag(Q2, [3]), diag(Q2, [27])).isometric
        assert not isometric_bong(diag(Q2, [3]), diag(Q2, [7])).isometric
        assert not isometric_jordan(diag(E2, [1]), diag(E2, [4])).isometric

    def test_hyperbolic_vs_diagonal(self):
        # <1,-1> is odd, the hyperbolic plane is even: same space, different R
        L, K = diag(Q2, [1, -1]), gram(Q2, [[0, 1], [1, 0]])
        for v in all_verdicts(L, K):
            assert not v.isometric

    def test_verdict_json(self):
        v = isometric_bong(diag(Q2, [1, 1]), diag(Q2, [1, 5]))
        out = v.to_json()
        assert set(out) == {"isometric", "failing_condition", "invariants"}
        assert out["isometric"] is False and out["failing_condition"] is not None


class TestErrors:
    def test_rank_mismatch(self):
        with pytest.raises(RankMismatch):
            isometric_bong(diag(Q2, [1]), diag(Q2, [1, 1]))

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatch):
            isometric_jordan(diag(Q2, [1]), diag(E2, [1]))

    def test_2adic_needs_q2(self):
        with pytest.raises(FieldMismatch):
            isometric_2adic(diag(E2, [1]), diag(E2, [1]))


class TestStructural:
    def test_reflexive_symmetric_and_verdict_shape(self):
        rng = random.Random(0)
        for i in range(60):
            f = (Q2, E2)[i % 2]
            L, K, _ = random_pair(rng, f, max_rank=4)
            for d in DECIDERS + ([isometric_2adic] if f.e == 1 else []):
                assert d(L, L).isometric
                v, w = d(L, K), d(K, L)
                assert v.isometric == w.isometric
                assert (v.failing_condition is None) == v.isometric

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_basis_change(self, n):
        rng = random.Random(n)
        for i in range(50):
            f = (Q2, E2)[i % 2]
            L = random_block_lattice(rng, f, n)
            K = L.transform(random_unimodular(rng, f, n))
            assert all(v.isometric for v in all_verdicts(L, K))

    def test_first_failing_condition_is_reported(self):
        rng = random.Random(1)
        seen = collections.Counter()
        for i in range(300):
            f = (Q2, E2)[i % 2]
            L, K, _ = random_pair(rng, f)
            v = isometric_bong(L, K)
            tag = v.failing_condition
            seen[tag and tag.split("(")[0]] += 1
            if tag in (None, "space"):
                continue
            P, Q = profile(L), profile(K)
            s, t = P.bong, Q.bong
            assert space_invariants(s.a) == space_invariants(t.a)
            if tag == "R":
                assert s.R != t.R
                continue
            assert s.R == t.R
            if tag == "alpha":
                assert P.alpha.alpha2 != Q.alpha.alpha2
                continue
            A = P.alpha.alpha2
            assert A == Q.alpha.alpha2
            i = int(tag.split("(")[1].rstrip(")"))
            pa, pb = f.one, f.one
            first_bad = None
            for j in range(1, s.n):
                pa, pb = pa * s.a[j - 1], pb * t.a[j - 1]
                if 2 * defect_order(pa * pb) < A[j - 1]:
                    first_bad = j
                    break
            if tag.startswith("defect"):
                assert first_bad == i
            else:
                assert first_bad is None
        assert seen["defect"] and seen["R"] and seen["space"]


class TestReachability:
    def test_four_squares(self):
        s, t = BongSymbol.of(Q2, [1, 1, 1, 1]), BongSymbol.of(Q2, [7, 7, 7, 7])
        assert not binary_transform_reachable(s, t)
        assert binary_transform_reachable(s, s)
        states = reachable_states(s)
        five = Q2.class_key(Q2.element(5))
        assert len(states) == 8
        for st in states:
            assert set(st) <= {0, five} and st.count(five) % 2 == 0

    def test_R_mismatch(self):
        with pytest.raises(RMismatch):
            binary_transform_reachable(BongSymbol.of(Q2, [1, 1]), BongSymbol.of(Q2, [1, 4]))

    def test_reachable_implies_isometric(self):
        rng = random.Random(2)
        for i in range(40):
            f = (Q2, E2)[i % 2]
            n = rng.randint(2, 4)
            R = [0]
            for _ in range(n - 1):
                R.append(R[-1] + rng.randint(0, 2 * f.e + 1))
            units = unit_square_classes(f)
            s = BongSymbol([f.pi_power(r) * rng.choice(units) for r in R])
            if not s.is_good():
                continue
            L = lattice_from_symbol(s)
            for st in list(reachable_states(s))[:6]:
                t = BongSymbol([f.pi_power(r) * f.from_key(k) for r, k in zip(R, st)])
                assert isometric_bong(L, lattice_from_symbol(t)).isometric


ENUMERATED = [(Q2, [0, 0, 2, 3]), (Q2, [0, 2, 2, 4]), (Q2, [0, 1, 1, 2]), (E2, [0, 2, 4]),
              (E2, [0, 3, 4])]


@pytest.mark.parametrize("field,R", ENUMERATED, ids=[f"e{f.e}-{R}" for f, R in ENUMERATED])
def test_enumerated_symbols(field, R):
    """Every unit pattern for a fixed R: deciders agree, reachability implies
    isometry, and the verdicts form an equivalence relation."""
    syms = [BongSymbol([field.pi_power(r) * u for r, u in zip(R, us)])
            for us in itertools.product(unit_square_classes(field), repeat=len(R))]
    syms = [s for s in syms if s.is_good()]
    groups = collections.defaultdict(list)
    for s in syms:
        groups[space_invariants(s.a)].append(s)
    rng = random.Random(len(R))
    tags = collections.Counter()
    for members in groups.values():
        picked = rng.sample(members, min(6, len(members)))
        lats = [lattice_from_symbol(s) for s in picked]
        n = len(picked)
        rel = [[None] * n for _ in range(n)]
        for i in range(n):
            reach = reachable_states(picked[i])
            for j in range(n):
                vs = all_verdicts(lats[i], lats[j])
                assert len({v.isometric for v in vs}) == 1
                rel[i][j] = vs[0].isometric
                tags[vs[0].failing_condition and vs[0].failing_condition.split("(")[0]] += 1
                if tuple(field.class_key(x.unit_part()) for x in picked[j].a) in reach:
                    assert rel[i][j]
        for i, j, k in itertools.product(range(n), repeat=3):
            if rel[i][j] and rel[j][k]:
                assert rel[i][k]
    assert tags[None] > 0
