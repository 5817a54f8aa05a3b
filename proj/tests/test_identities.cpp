#include "doctest.h"

#include "ftlab/identities.hpp"

using namespace ftlab;
using json = nlohmann::json;

TEST_CASE("single identities at reduced orders")
{
    auto r = verify_identity("E1", json{{"k", 1}, {"unit", "z1"}}, Rational(12));
    CHECK(r.equal);
    CHECK(r.params["k"] == 1);
    CHECK(verify_identity("E7", json{{"p", 2}, {"r", json::array({1, -1})}}, Rational(10)).equal);
    CHECK(verify_identity("E8", json{{"lambda", json::array({"1/3", "2/3"})}}, Rational(10)).equal);
}

TEST_CASE("every registered identity holds at its default order")
{
    for (const auto &c : identity_registry()) {
        auto r = verify_identity(c.id);
        INFO(c.id << " " << to_json(r).dump());
        CHECK(r.equal);
        CHECK(r.order == c.default_order);
    }
}

TEST_CASE("a planted mutation is found where it was planted")
{
    for (const auto &c : identity_registry()) {
        auto r = verify_identity(c.id, nullptr, std::nullopt, true);
        INFO(c.id << " " << to_json(r).dump());
        REQUIRE(r.mutation.has_value());
        CHECK_FALSE(r.equal);
        REQUIRE(r.discrepancy.has_value());
        CHECK(*r.discrepancy == *r.mutation);
        CHECK(r.discrepancy->rhs - r.discrepancy->lhs == 1);
    }
}

TEST_CASE("engine: first discrepancy is the lowest exponent")
{
    auto a = PuiseuxSeries::from_terms({{0, 1}, {2, 5}, {3, 1}}, 6);
    auto b = PuiseuxSeries::from_terms({{0, 1}, {2, 4}, {1, 7}}, 8);
    Comparison c{"x", a, b};
    auto d = first_discrepancy(c, 6);
    REQUIRE(d);
    CHECK(d->exp == 1);
    CHECK(d->lhs == 0);
    CHECK(d->rhs == 7);
    CHECK_THROWS_AS(first_discrepancy(c, 7), std::logic_error);

    auto A = BiLaurentSeries::monomial(1, {1, 0}, 2, 5, Region::Inner) + BiLaurentSeries::monomial(1, {0, 3}, 1, 5, Region::Inner);
    auto B = BiLaurentSeries::monomial(1, {1, 0}, 2, 5, Region::Inner).restricted(2);
    auto e = first_discrepancy({"y", A, B}, 5);
    CHECK_FALSE(e); // (0,3) lies outside B's window
    auto C = BiLaurentSeries::monomial(1, {1, 0}, 2, 5, Region::Inner) + BiLaurentSeries::monomial(3, {-1, 0}, 4, 5, Region::Inner);
    e = first_discrepancy({"z", C, B}, 5);
    REQUIRE(e);
    CHECK(e->key == Key{-1, 0});
    CHECK(e->exp == 4);
}

TEST_CASE("suite filtering and errors")
{
    auto two = run_suite("E5|E6", {{"E5", Rational(10)}, {"E6", Rational(8)}});
    REQUIRE(two.size() == 2);
    CHECK(two[0].id == "E5");
    CHECK(two[1].order == 8);
    CHECK(run_suite("nothing").empty());
    CHECK_THROWS_AS(run_suite("("), PreconditionError);
    CHECK_THROWS_AS(verify_identity("E99"), UnknownIdentity);
    CHECK_THROWS_AS(verify_identity("E7", json{{"q", 1}}), PreconditionError);
    CHECK_THROWS_AS(verify_identity("E7", json{{"p", 1}}), PreconditionError);
    CHECK_THROWS_AS(verify_identity("E1", json{{"unit", "z3"}}), PreconditionError);

    auto j = to_json(verify_identity("E20", json{{"k", 0}}, Rational(10)));
    CHECK(j["verdict"] == "equal");
    CHECK(j["order"] == "10/1");
    CHECK(j["discrepancy"].is_null());
}
