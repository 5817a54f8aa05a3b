#pragma once

// Truncated formal series in q with rational exponents.
//
// A PuiseuxSeries stores finitely many nonzero terms c * q^e together with a
// truncation order N: every coefficient with exponent < N is exact, nothing
// is claimed at or beyond N. Values are immutable once built.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ftlab/rational.hpp"

namespace ftlab {

/// A violated operation precondition (bad parameters, non-unit inversion...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Term {
    Rational exp;
    Rational coeff;

    friend bool operator==(const Term &, const Term &) = default;
};

class PuiseuxSeries {
public:
    /// The zero series, exact below `order`.
    explicit PuiseuxSeries(Rational order = Rational(0)) : order_{std::move(order)} {}

    /// Sums duplicate exponents, drops zero coefficients and anything at or
    /// beyond `order`.
    static PuiseuxSeries from_terms(std::vector<Term> terms, Rational order);
    static PuiseuxSeries monomial(Rational coeff, Rational exp, Rational order);
    static PuiseuxSeries one(Rational order) { return monomial(1, 0, std::move(order)); }

    [[nodiscard]] const Rational &order() const { return order_; }
    [[nodiscard]] std::span<const Term> terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }

    /// Minimum stored exponent; the order for the empty series.
    [[nodiscard]] Rational valuation() const { return terms_.empty() ? order_ : terms_.front().exp; }
    /// Coefficient of q^e (zero when absent). Throws if e >= order.
    [[nodiscard]] Rational coeff(const Rational &e) const;

    /// Keeps only exponents below min(order, new_order).
    [[nodiscard]] PuiseuxSeries truncated(const Rational &new_order) const;
    /// Multiplies by q^e: exponents and order shift by e.
    [[nodiscard]] PuiseuxSeries shifted(const Rational &e) const;
    [[nodiscard]] PuiseuxSeries scaled(const Rational &c) const;

    PuiseuxSeries operator-() const { return scaled(Rational(-1)); }
    friend PuiseuxSeries operator+(const PuiseuxSeries &a, const PuiseuxSeries &b);
    friend PuiseuxSeries operator-(const PuiseuxSeries &a, const PuiseuxSeries &b);
    friend PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b);
    PuiseuxSeries &operator+=(const PuiseuxSeries &o) { return *this = *this + o; }
    PuiseuxSeries &operator*=(const PuiseuxSeries &o) { return *this = *this * o; }

    /// Structural equality: same order and same terms.
    friend bool operator==(const PuiseuxSeries &, const PuiseuxSeries &) = default;

    /// Human-readable "1 - q + q^(3/2) + O(q^5)".
    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Term> terms_; // ascending exponent, nonzero coefficients, exp < order_
    Rational order_;
};

/// Product truncated at min(natural order, cap).
PuiseuxSeries mul_truncated(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &cap);

PuiseuxSeries series_add(const PuiseuxSeries &a, const PuiseuxSeries &b);
/// Result order: min(a.order + val(b), b.order + val(a)).
PuiseuxSeries series_mul(const PuiseuxSeries &a, const PuiseuxSeries &b);
/// Inverse of a unit c q^v (1 + h), val(h) > 0. Exact below order(a) - 2v.
PuiseuxSeries series_invert(const PuiseuxSeries &a);
/// q -> q^k for positive rational k.
PuiseuxSeries series_scale_q(const PuiseuxSeries &a, const Rational &k);
PuiseuxSeries series_pow(const PuiseuxSeries &a, unsigned n);

/// Number of factors in a Pochhammer symbol; nullopt means infinitely many.
using PochhammerLength = std::optional<std::int64_t>;
inline constexpr PochhammerLength kInfinite = std::nullopt;

/// (sign * q^s; q^t)_n = prod_{j<n} (1 - sign * q^{s + j t}), exact below `order`.
PuiseuxSeries pochhammer(int sign, const Rational &s, const Rational &t, PochhammerLength n, const Rational &order);

/// eta(k tau) = q^{k/24} (q^k; q^k)_inf, exact below `order`.
PuiseuxSeries eta_series(std::int64_t k, const Rational &order);

/// eta(tau)^a / eta(2 tau)^b style quotients: prod eta(k tau)^{power}.
struct EtaFactor {
    std::int64_t scale;
    int power;
};
PuiseuxSeries eta_quotient(std::span<const EtaFactor> factors, const Rational &order);

nlohmann::json to_json(const PuiseuxSeries &s);
PuiseuxSeries series_from_json(const nlohmann::json &j);

} // namespace ftlab
