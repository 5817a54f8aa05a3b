#include "doctest.h"

#include <random>

#include "ftlab/bilaurent.hpp"

using namespace ftlab;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

BiLaurentSeries mono(std::int64_t c, std::int64_t e1, std::int64_t e2, Rational qexp = 0, Rational order = 10,
                     Region region = Region::Inner)
{
    return BiLaurentSeries::monomial(Rational(c), Key{e1, e2}, qexp, order, region);
}

BiLaurentSeries one(Rational order, Region region = Region::Inner) { return mono(1, 0, 0, 0, order, region); }

// (1 - c z^dir q^s) as a two-term series
BiLaurentSeries binomial(int c, Key dir, Rational s, Rational order, Region region)
{
    return one(order, region) - BiLaurentSeries::monomial(Rational(c), dir, s, order, region);
}

// every key inside the window of `a`, compared with `b` there
bool agree_in_window(const BiLaurentSeries &a, const BiLaurentSeries &b)
{
    Rational order = min(a.qorder(), b.qorder());
    for (const auto *s : {&a, &b})
        for (const auto &[k, c] : s->terms()) {
            if (!a.in_window(k) || !b.in_window(k)) continue;
            if (bl_coeff(a, k.e1, k.e2).truncated(order) != bl_coeff(b, k.e1, k.e2).truncated(order)) return false;
        }
    return true;
}

} // namespace

TEST_CASE("add, mul and region tags")
{
    auto a = mono(1, 1, 0) + mono(1, 0, 1);
    auto b = mono(1, 1, 0) - mono(1, 0, 1);
    CHECK(a * b == mono(1, 2, 0) - mono(1, 0, 2));
    CHECK(a * one(100) == a);
    CHECK_THROWS_AS(a + mono(1, 0, 0, 0, 10, Region::Outer), RegionMismatch);
    CHECK_THROWS_AS(a * mono(1, 0, 0, 0, 10, Region::Outer), RegionMismatch);
}

TEST_CASE("bl_coeff")
{
    auto s = BiLaurentSeries::from_terms({{Key{2, 0}, PuiseuxSeries::from_terms({{0, 1}, {1, -1}}, 10)}}, 10, Region::Inner);
    CHECK(bl_coeff(s, 2, 0) == PuiseuxSeries::from_terms({{0, 1}, {1, -1}}, 10));
    CHECK(bl_coeff(s, 5, -3).is_zero());
    CHECK(bl_coeff(s, 5, -3).order() == 10);
    CHECK_THROWS_AS(bl_coeff(s.restricted(3), 4, 0), PreconditionError);
}

TEST_CASE("geometric expansions")
{
    // INNER, z2, n = 1: sum_{k>=0} q^k z2^k
    auto e = expand_inverse_one_minus(Unit::Z2, 1, Region::Inner, 12);
    CHECK(e.terms().size() == 12);
    for (std::int64_t k = 0; k < 12; ++k) CHECK(bl_coeff(e, 0, k) == PuiseuxSeries::monomial(1, k, 12));
    CHECK(bl_coeff(e, 0, -1).is_zero());

    // INNER, n = 0 needs a window
    CHECK_THROWS_AS(expand_inverse_one_minus(Unit::Z1, 0, Region::Inner, 10), PreconditionError);
    auto e0 = expand_inverse_one_minus(Unit::Z1, 0, Region::Inner, 10, R(6));
    CHECK(e0.terms().size() == 7);
    CHECK(bl_coeff(e0, 6, 0) == PuiseuxSeries::one(10));

    // INNER, n = -1 is large: -sum_{k>=1} z^-k q^k
    auto en = expand_inverse_one_minus(Unit::Z12, -1, Region::Inner, 9);
    CHECK(bl_coeff(en, -3, -3) == PuiseuxSeries::monomial(-1, 3, 9));
    CHECK(bl_coeff(en, 0, 0).is_zero());

    // WIDE forbids n = 0 but allows n = +-1
    CHECK_THROWS_AS(expand_inverse_one_minus(Unit::Z1, 0, Region::Wide, 10, R(5)), PreconditionError);
    CHECK_NOTHROW(expand_inverse_one_minus(Unit::Z12, 1, Region::Wide, 10));
    // OUTER with n > 0 has no single expansion
    CHECK_THROWS_AS(expand_inverse_one_minus(Unit::Z1, 1, Region::Outer, 10), PreconditionError);

    std::mt19937 rng(7);
    const Unit units[] = {Unit::Z1, Unit::Z2, Unit::Z12};
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 20; ++trial) {
        Unit u = units[rng() % 3];
        std::int64_t n = static_cast<std::int64_t>(rng() % 7) - 3;
        Region region = std::array{Region::Inner, Region::Outer, Region::Wide}[rng() % 3];
        BiLaurentSeries ex(0, region);
        try {
            ex = expand_inverse_one_minus(u, n, region, 15, n == 0 ? std::optional<Rational>(8) : std::nullopt);
        } catch (const PreconditionError &) {
            continue;
        }
        auto prod = ex * binomial(1, unit_key(u), Rational(n), 15, region);
        BiLaurentSeries expect = one(prod.qorder(), region);
        CHECK(agree_in_window(prod, expect));
        ++checked;
    }
    CHECK(checked == 20);
}

TEST_CASE("weyl denominator")
{
    auto w = expand_weyl_denominator(10, 8);
    CHECK(bl_coeff(w, -2, -3) == PuiseuxSeries::monomial(3, 0, 10));
    CHECK(bl_coeff(w, 0, 0) == PuiseuxSeries::one(10));
    for (std::int64_t a = 0; a <= 8; ++a)
        for (std::int64_t b = 0; b <= 8; ++b) CHECK(bl_coeff(w, -a, -b) == bl_coeff(w, -b, -a));
    auto d = binomial(1, {-1, 0}, 0, 10, Region::Outer) * binomial(1, {0, -1}, 0, 10, Region::Outer) *
             binomial(1, {-1, -1}, 0, 10, Region::Outer);
    auto p = d * w;
    CHECK(*p.window() == 6);
    CHECK(agree_in_window(p, one(10, Region::Outer)));
}

TEST_CASE("elliptic shift")
{
    auto z = mono(1, 1, 0).restricted(3);
    auto s = bl_elliptic_shift(z, 1, 0);
    CHECK(bl_coeff(s, 1, 0) == PuiseuxSeries::monomial(1, 1, 7));
    CHECK(s.qorder() == 7);
    auto t = bl_elliptic_shift(mono(1, -3, 0).restricted(3), 2, 0);
    CHECK(t.qorder() == 4);
    CHECK(bl_coeff(t, -3, 0) == PuiseuxSeries::monomial(1, -6, 4));
    CHECK_THROWS_AS(bl_elliptic_shift(mono(1, 1, 0), 1, 0), PreconditionError);
}

TEST_CASE("integer shift")
{
    auto s = mono(1, 0, 0) + BiLaurentSeries::monomial(1, Key{R(1, 2), 0}, 0, 10, Region::Inner);
    auto t = bl_integer_shift(s, 1, 0);
    CHECK(bl_coeff(t, R(1, 2), 0) == PuiseuxSeries::monomial(-1, 0, 10));
    CHECK(bl_coeff(t, 0, 0) == PuiseuxSeries::one(10));
    CHECK_THROWS_AS(bl_integer_shift(BiLaurentSeries::monomial(1, Key{R(1, 3), 0}, 0, 10, Region::Inner), 1, 0),
                    PreconditionError);
}

TEST_CASE("monomial substitution")
{
    auto s = mono(2, 1, 2) + mono(1, -1, 3);
    CHECK(bl_monomial_substitution(s, {{{1, 0}, {0, 1}}}) == s);
    auto t = bl_monomial_substitution(s, {{{1, 1}, {2, -1}}});
    CHECK(bl_coeff(t, 3, 0) == PuiseuxSeries::monomial(2, 0, 10));
    CHECK(bl_coeff(t, 2, -5) == PuiseuxSeries::monomial(1, 0, 10));
    auto back = bl_monomial_substitution(bl_monomial_substitution(s, {{{2, 1}, {1, 1}}}), {{{1, -1}, {-1, 2}}});
    CHECK(back == s);
    CHECK_THROWS_AS(bl_monomial_substitution(s, {{{1, 2}, {2, 4}}}), PreconditionError);
    auto w = bl_monomial_substitution(s.restricted(6), {{{1, 1}, {2, -1}}});
    // M^-1 = (1/3)((1,1),(2,-1)), row sums 2/3 and 1
    CHECK(*w.window() == 6);
}

TEST_CASE("exact Laurent division")
{
    auto num = mono(1, 2, 0) - mono(1, 0, 2);
    auto den = mono(1, 1, 0) - mono(1, 0, 1);
    CHECK(laurent_poly_exact_divide(num, den) == mono(1, 1, 0) + mono(1, 0, 1));
    try {
        laurent_poly_exact_divide(mono(1, 1, 0) - mono(1, 0, 0), mono(1, 0, 1) - mono(1, 0, 0));
        FAIL("expected NonExactDivision");
    } catch (const NonExactDivision &e) {
        CHECK(e.monomial() == Key{1, 0});
    }
    CHECK_THROWS_AS(laurent_poly_exact_divide(mono(1, 0, 0, 1), den), PreconditionError);
}

TEST_CASE("coeff is linear and convolves")
{
    std::mt19937 rng(99);
    auto rnd = [&] {
        BiLaurentSeries s(8, Region::Inner);
        for (int i = 0; i < 5; ++i)
            s = s + mono(static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2,
                         static_cast<int>(rng() % 4), 8);
        return s;
    };
    for (int trial = 0; trial < 20; ++trial) {
        auto a = rnd(), b = rnd();
        auto sum = a + b, prod = a * b;
        for (std::int64_t i = -4; i <= 4; ++i)
            for (std::int64_t j = -4; j <= 4; ++j) {
                CHECK(bl_coeff(sum, i, j) == bl_coeff(a, i, j) + bl_coeff(b, i, j));
                PuiseuxSeries conv(prod.qorder());
                for (const auto &[k, c] : a.terms()) conv = conv + c * bl_coeff(b, Rational(i) - k.e1, Rational(j) - k.e2);
                CHECK(bl_coeff(prod, i, j) == conv.truncated(prod.qorder()));
            }
    }
}

TEST_CASE("json")
{
    auto s = (mono(1, 1, 0, R(1, 3)) + mono(-2, 0, -1, 2)).restricted(4);
    auto j = to_json(s);
    CHECK(j["region"] == "INNER");
    CHECK(j["window"] == 4);
    CHECK(bilaurent_from_json(j) == s);
    CHECK(to_json(mono(1, 0, 0))["window"].is_null());
}
