import pytest

from hqcf.fields import GF
from hqcf.laurent import Laurent
from hqcf.perfect import all_quotients_odd
from hqcf.polynomials import Polynomial
from hqcf.rootcf import (
    RootState,
    alpha_series,
    cf_from_series,
    dominance_holds,
    expand_quartic_fixed,
    expand_root,
    quartic_state,
    series_root_quartic,
    step,
)

F5, F7, F11, F13 = GF(5), GF(7), GF(11), GF(13)


def poly(field, *coeffs):
    return Polynomial(field, coeffs)


class TestDominance:
    def test_quartic_satisfies_star(self):
        assert dominance_holds(quartic_state(F13))

    def test_constructed_violation(self):
        # X^2 - T^2 X + T^4: |a_0| = |T^4| >= |T^2|
        st = RootState(
            (Polynomial.monomial(F7, 1, 4), -Polynomial.monomial(F7, 1, 2), Polynomial.one(F7))
        )
        assert not dominance_holds(st)

    def test_quadratic_satisfies_star(self):
        st = RootState((Polynomial.one(F7), -Polynomial.x(F7), Polynomial.one(F7)))
        assert dominance_holds(st)

    def test_expand_rejects_violation(self):
        st = RootState(
            (Polynomial.monomial(F7, 1, 4), -Polynomial.monomial(F7, 1, 2), Polynomial.one(F7))
        )
        with pytest.raises(ValueError, match="dominance"):
            expand_root(st, 5)


class TestStep:
    def test_first_quartic_step(self):
        q, _ = step(quartic_state(F13))
        assert q == poly(F13, 0, 1)  # T
        q, _ = step(quartic_state(F7))
        assert q == poly(F7, 0, 2)  # 2T
        q, _ = step(quartic_state(F5))
        assert q == poly(F5, 0, 3)  # 3T

    def test_quadratic_is_periodic(self):
        # X^2 - TX + 1: expansion [T, -T, T, -T, ...]
        st = RootState((Polynomial.one(F5), -Polynomial.x(F5), Polynomial.one(F5)))
        cf = expand_root(st, 6)
        assert [q.format() for q in cf] == ["T", "4*T", "T", "4*T", "T", "4*T"]

    def test_taylor_shift_by_hand(self):
        # P(X) = X^2 - TX + 1, q = T: X^2 P(T + 1/X) = X^2 + TX + 1
        st = RootState((Polynomial.one(F7), -Polynomial.x(F7), Polynomial.one(F7)))
        q, nxt = step(st)
        assert q == Polynomial.x(F7)
        assert nxt.coeffs == (Polynomial.one(F7), Polynomial.x(F7), Polynomial.one(F7))

    def test_rational_root_terminates(self):
        # T X^2 - (T^4+1) X + T^3 has the polynomial root T^3 (other root 1/T)
        st = RootState(
            (
                Polynomial.monomial(F7, 1, 3),
                -poly(F7, 1, 0, 0, 0, 1),
                Polynomial.x(F7),
            )
        )
        assert dominance_holds(st)
        cf = expand_root(st, 10)
        assert len(cf) == 1
        assert cf[0] == Polynomial.monomial(F7, 1, 3)

    def test_zero_count(self):
        assert len(expand_root(quartic_state(F7), 0)) == 0


class TestQuarticExpansion:
    def test_published_prefix_p13(self):
        cf = expand_root(quartic_state(F13), 6)
        assert [q.format() for q in cf] == ["T", "12*T", "7*T", "11*T", "8*T", "5*T"]

    def test_published_prefix_p7(self):
        cf = expand_root(quartic_state(F7), 3)
        assert [q.format() for q in cf] == ["2*T", "6*T", "6*T"]

    def test_fixed_recurrences_match_generic(self):
        for F in (F5, F7, F13):
            assert expand_quartic_fixed(F, 40) == expand_root(quartic_state(F), 40)

    def test_reduction_does_not_change_quotients(self):
        for F in (F7, F13):
            with_red = expand_root(quartic_state(F), 50, reduce_content=True)
            without = expand_root(quartic_state(F), 50, reduce_content=False)
            assert with_red == without

    def test_all_quotients_odd(self):
        for F in (F5, F7, F11, F13):
            cf = expand_root(quartic_state(F), 50)
            assert all_quotients_odd(cf)

    def test_dominance_and_degree_after_every_step(self):
        cur = quartic_state(F13)
        for _ in range(30):
            q, cur = step(cur)
            assert q.degree >= 1
            assert cur is None or dominance_holds(cur)


class TestSeriesOracle:
    def test_leading_coefficient(self):
        assert series_root_quartic(F13, 4).coefficient(-1) == 1  # -1/12 = 1 mod 13
        assert series_root_quartic(F7, 4).coefficient(-1) == 4  # -1/12 = 4 mod 7
        # second nonzero coefficient: 1/12^2
        s = series_root_quartic(F13, 4)
        assert s.coefficient(-3) == F13.embed_rational(1, 144)

    def test_even_coefficients_vanish(self):
        for F in (F5, F7, F13):
            s = series_root_quartic(F, 40)
            for e in range(-2, -40, -2):
                assert s.coefficient(e) == 0

    def test_series_satisfies_the_quartic(self):
        # independent residual check: u^4 + u^2 - T u - 1/12 = O(precision)
        for F in (F5, F7, F13):
            u = series_root_quartic(F, 50)
            u2 = u * u
            lhs = (
                u2 * u2
                + u2
                - Laurent.from_polynomial(Polynomial.x(F)) * u
                - Laurent.from_polynomial(poly(F, F.embed_rational(1, 12)))
            )
            assert lhs.is_zero_to_precision()

    def test_min_terms(self):
        with pytest.raises(ValueError):
            series_root_quartic(F7, 0)


class TestCfFromSeries:
    def test_oracle_equivalence(self):
        # the certified prefix of the series route matches the direct expansion
        for F in (F5, F7, F11, F13):
            direct = expand_root(quartic_state(F), 25)
            total = sum(int(q.degree) for q in direct.quotients)
            a = alpha_series(F, -(2 * total + 4))
            oracle = cf_from_series(a)
            overlap = min(len(oracle), 25)
            assert overlap >= 20
            assert list(oracle.quotients[:overlap]) == list(direct.quotients[:overlap])

    def test_two_term_precision_certifies_first_quotient(self):
        a = alpha_series(F13, -1)  # coefficients at T^1, T^0 known
        cf = cf_from_series(a)
        assert len(cf) >= 1
        assert cf[0] == poly(F13, 0, 1)  # -12T = T mod 13

    def test_exact_rational_full_cf(self):
        from hqcf.cf import rational_to_cf
        from hqcf.laurent import rational_series

        num, den = poly(F7, 1, 0, 3, 1), poly(F7, 2, 1)
        s = rational_series(num, den, -30)
        cf = cf_from_series(s, exact=True)
        # with exact=True the whole Euclidean expansion of the truncation is
        # returned; for a deep enough truncation it starts with the true CF
        true_cf = rational_to_cf(num, den)
        assert list(cf.quotients[: len(true_cf)]) == list(true_cf.quotients)

    def test_zero_series_rejected(self):
        with pytest.raises(ValueError):
            cf_from_series(Laurent.zero(F7, -5))
