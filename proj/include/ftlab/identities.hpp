#pragma once

// Registry of identities as pairs of independently built series, and the
// engine that compares them below a requested q-order.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ftlab/bilaurent.hpp"

namespace ftlab {

class UnknownIdentity : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using AnySeries = std::variant<PuiseuxSeries, BiLaurentSeries>;

/// One side-by-side comparison produced by an identity builder.
struct Comparison {
    std::string label;
    AnySeries lhs;
    AnySeries rhs;
};

struct IdentityCase {
    std::string id;
    std::string description;
    nlohmann::json default_params; ///< the full default parameter grid
    Rational default_order;
    /// Builds every comparison for `params` exact below `order`.
    std::function<std::vector<Comparison>(const nlohmann::json &params, const Rational &order)> build;
};

/// Where two sides first differ (or where a mutation was planted).
struct Discrepancy {
    std::string label;
    std::optional<Key> key; ///< absent for one-variable comparisons
    Rational exp;
    Rational lhs;
    Rational rhs;

    friend bool operator==(const Discrepancy &, const Discrepancy &) = default;
};

struct IdentityReport {
    std::string id;
    nlohmann::json params;
    Rational order;
    bool equal = false;
    std::optional<Discrepancy> discrepancy;
    std::optional<Discrepancy> mutation; ///< set when the run was a mutation self-test
    std::int64_t ms = 0;
};

/// All registered cases, in id order (E1, E2, ..., E20).
const std::vector<IdentityCase> &identity_registry();
/// Throws UnknownIdentity.
const IdentityCase &find_identity(const std::string &id);

/// First difference below `order`: earliest comparison, then lowest
/// exponent, then key. Throws std::logic_error if a side is not exact to
/// `order`.
std::optional<Discrepancy> first_discrepancy(const Comparison &c, const Rational &order);

/// Adds +1 to one coefficient of the rhs at a mid-order exponent and
/// returns where.
Discrepancy plant_mutation(Comparison &c, const Rational &order);

/// params: null or {} selects the default grid; given keys override it.
/// Throws UnknownIdentity, or PreconditionError for invalid parameters.
IdentityReport verify_identity(const std::string &id, const nlohmann::json &params = nullptr,
                               std::optional<Rational> order = std::nullopt, bool mutate = false);

/// Runs every case whose id fully matches `filter` ("*" or "" matches all).
/// Cases run concurrently, capped by FTLAB_JOBS when set; the result keeps
/// registry order.
std::vector<IdentityReport> run_suite(const std::string &filter,
                                      const std::map<std::string, Rational> &order_overrides = {},
                                      std::optional<Rational> order = std::nullopt, bool mutate = false);

nlohmann::json to_json(const Discrepancy &d);
nlohmann::json to_json(const IdentityReport &r);

} // namespace ftlab
