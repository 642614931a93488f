import math
import random
from fractions import Fraction

import pytest

from conftest import E2, Q2, brute_defect
from dyadic_isometry import (DyadicField, EvenDenominator, MalformedInput, ZeroElement,
                             all_square_classes, defect_order, hilbert, in_A, in_norm_group,
                             is_square, ord_, parse_element, same_square_class,
                             unit_square_classes)
from dyadic_isometry.sampling import random_element


class TestFieldConstruction:
    def test_default_q2_descriptor(self):
        assert Q2.descriptor() == {"e": 1}
        assert DyadicField.from_descriptor({"e": 1}) == Q2

    def test_extension_round_trip(self):
        assert DyadicField.from_descriptor(E2.descriptor()) == E2

    def test_delta_has_maximal_defect(self):
        for f in (Q2, E2, DyadicField(3)):
            assert defect_order(f.delta) == 2 * f.e

    @pytest.mark.parametrize("poly", [[1, 0], [2, 1], [4, 2], [2], [2, 0, 0]])
    def test_rejects_bad_polynomial(self, poly):
        with pytest.raises(MalformedInput):
            DyadicField(2, poly)

    def test_accepts_other_eisenstein(self):
        f = DyadicField(2, [-2, 2])  # pi^2 + 2 pi - 2
        assert ord_(f.element(2)) == 2
        assert not f.element(2).is_zero


class TestParsing:
    def test_integer(self):
        x = parse_element("7", Q2)
        assert x.valuation == 0 and x == Q2.element(7)

    def test_odd_fraction_inverse(self):
        x = parse_element("1/3", Q2)
        assert x.valuation == 0
        assert Q2.residue(x)[0] % 8 == 3

    def test_coefficient_list_is_pi(self):
        x = parse_element("[0,1]", E2)
        assert x.valuation == 1 and x == E2.pi

    def test_even_denominator_strict(self):
        with pytest.raises(EvenDenominator):
            parse_element("1/2", Q2, strict=True)
        assert parse_element("1/2", Q2).valuation == -1

    def test_zero_literal(self):
        assert parse_element("0", Q2).is_zero
        assert ord_(parse_element("0", Q2)) == math.inf

    @pytest.mark.parametrize("bad", ["abc", "1/0", "[1,2,3]", "[", ""])
    def test_garbage(self, bad):
        with pytest.raises(MalformedInput):
            parse_element(bad, E2)

    def test_literal_round_trip(self):
        rng = random.Random(3)
        for f in (Q2, E2):
            for _ in range(50):
                x = random_element(rng, f)
                assert parse_element(x.literal(), f) == x


class TestOrder:
    def test_examples(self):
        assert ord_(Q2.element(8)) == 3
        assert ord_(E2.element(2)) == 2
        assert ord_(E2.pi) == 1

    def test_multiplicative(self):
        rng = random.Random(0)
        for f in (Q2, E2):
            for _ in range(100):
                a, b = random_element(rng, f), random_element(rng, f)
                assert ord_(a * b) == ord_(a) + ord_(b)


class TestDefect:
    def test_examples(self):
        assert defect_order(Q2.pi) == 0
        assert defect_order(Q2.element(5)) == 2
        assert defect_order(Q2.element(3)) == 1
        assert defect_order(Q2.element(7)) == 1
        assert defect_order(Q2.element(17)) == math.inf
        assert defect_order(E2.pi) == 0

    @pytest.mark.parametrize("f", [Q2, E2], ids=["Q2", "E2"])
    def test_matches_brute_force_on_class_reps(self, f):
        for a in all_square_classes(f):
            assert defect_order(a) == brute_defect(a, 12 if f.e == 1 else 10)

    def test_matches_brute_force_on_random_rationals(self):
        rng = random.Random(11)
        for _ in range(60):
            a = Q2.element(Fraction(rng.randrange(1, 500), rng.randrange(1, 60, 2)))
            assert defect_order(a) == brute_defect(a, 10)

    def test_zero_rejected(self):
        with pytest.raises(ZeroElement):
            defect_order(Q2.zero)


class TestSquareClasses:
    def test_q2_units(self):
        assert sorted(int(u.literal()) for u in unit_square_classes(Q2)) == [1, 3, 5, 7]

    @pytest.mark.parametrize("f", [Q2, E2, DyadicField(3)], ids=["Q2", "E2", "E3"])
    def test_complete_and_distinct(self, f):
        reps = unit_square_classes(f)
        assert len(reps) == 2 ** (f.e + 1)
        for i, a in enumerate(reps):
            assert a.valuation == 0
            for b in reps[i + 1:]:
                assert not same_square_class(a, b)

    def test_examples(self):
        assert same_square_class(Q2.element(1), Q2.element(17))
        assert not same_square_class(Q2.element(1), Q2.element(5))
        assert not same_square_class(Q2.element(1), Q2.element(4 * 2))

    def test_class_key_is_homomorphism(self):
        rng = random.Random(5)
        for f in (Q2, E2):
            for _ in range(200):
                a, b = random_element(rng, f), random_element(rng, f)
                assert f.class_key(a * b) == f.class_key(a) ^ f.class_key(b)

    def test_from_key_inverts_class_key(self):
        for f in (Q2, E2):
            for key in range(1 << (f.e + 2)):
                assert f.class_key(f.from_key(key)) == key

    def test_unit_perturbation_beyond_2e_plus_1(self):
        rng = random.Random(8)
        for f in (Q2, E2):
            shift = f.pi_power(2 * f.e + 1)
            for _ in range(100):
                u = random_element(rng, f, 0, 0)
                t = random_element(rng, f, 0, 3)
                v = u * (f.one + shift * t)
                w = random_element(rng, f)
                assert defect_order(u) == defect_order(v)
                assert same_square_class(u, v)
                assert hilbert(u, w) == hilbert(v, w)


class TestHilbert:
    def test_examples(self):
        assert hilbert(Q2.element(5), Q2.element(3)) == 1
        assert hilbert(Q2.element(-1), Q2.element(-1)) == -1
        assert hilbert(Q2.element(7), Q2.one) == 1

    def test_norm_group(self):
        assert not in_norm_group(Q2.element(3), Q2.element(-1))
        assert in_norm_group(Q2.element(9), Q2.element(3))

    @pytest.mark.parametrize("f", [Q2, E2], ids=["Q2", "E2"])
    def test_nondegenerate(self, f):
        classes = all_square_classes(f)
        for c in classes:
            if is_square(c):
                continue
            assert any(hilbert(c, b) == -1 for b in classes)

    @pytest.mark.parametrize("f", [Q2, E2], ids=["Q2", "E2"])
    def test_partner_with_complementary_defect(self, f):
        classes = all_square_classes(f)
        for a in classes:
            if is_square(a):
                continue
            da = defect_order(a)
            assert any(defect_order(b) == 2 * f.e - da and hilbert(a, b) == -1 for b in classes)

    def test_large_defect_sum_is_trivial(self):
        for f in (Q2, E2):
            classes = all_square_classes(f)
            for a in classes:
                for b in classes:
                    if defect_order(a) + defect_order(b) > 2 * f.e:
                        assert hilbert(a, b) == 1


class TestAdmissibleSet:
    def test_examples(self):
        assert in_A(Q2.one)
        assert not in_A(Q2.pi_power(-3))
        for f in (Q2, E2):
            a = -f.delta / 4
            assert in_A(a)
            assert a.valuation + defect_order(-a) == 0

    def test_boundary_only_for_delta_class(self):
        for f in (Q2, E2):
            for u in unit_square_classes(f):
                a = -u * f.pi_power(-2 * f.e)
                if in_A(a):
                    assert a.valuation + defect_order(-a) >= 0
                    if a.valuation + defect_order(-a) == 0:
                        assert same_square_class(u, f.delta)
