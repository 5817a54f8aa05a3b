#pragma once

// Two-variable Laurent series in zeta1, zeta2 with q-series coefficients.
//
// Every value carries the annulus (Region) in which it is a Laurent
// expansion; mixing regions is an error. A series is exact below its global
// q-order, and, when a window W is set, only for keys with |e1|, |e2| <= W.
// Keys outside the window are never stored.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ftlab/series.hpp"

namespace ftlab {

enum class Region {
    Inner, ///< |q| < |u| < 1 for u in {zeta1, zeta2, zeta1 zeta2}
    Outer, ///< |zeta1|, |zeta2| > 1 (and hence |zeta1 zeta2| > 1)
    Wide,  ///< |q| < |u| < |q|^-1; only for expansions unique there
};

std::string_view to_string(Region r);
Region parse_region(std::string_view s);

class RegionMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Exponent pair (e1, e2) of zeta1^e1 zeta2^e2.
struct Key {
    Rational e1;
    Rational e2;

    friend bool operator==(const Key &, const Key &) = default;
    friend auto operator<=>(const Key &a, const Key &b)
    {
        if (auto c = a.e1 <=> b.e1; c != 0) return c;
        return a.e2 <=> b.e2;
    }
    Key operator+(const Key &o) const { return {e1 + o.e1, e2 + o.e2}; }
    Key operator-(const Key &o) const { return {e1 - o.e1, e2 - o.e2}; }
    [[nodiscard]] Rational reach() const { return max(e1.abs(), e2.abs()); }
    [[nodiscard]] std::string to_string() const;
};

class BiLaurentSeries {
public:
    using TermMap = std::map<Key, PuiseuxSeries>;

    BiLaurentSeries(Rational qorder, Region region, std::optional<Rational> window = std::nullopt);

    /// Builds from raw terms: coefficients are truncated to `qorder`, zero
    /// coefficients and keys outside the window are dropped, duplicate keys
    /// must not occur.
    static BiLaurentSeries from_terms(TermMap terms, Rational qorder, Region region,
                                      std::optional<Rational> window = std::nullopt);
    /// c * zeta^key * q^qexp.
    static BiLaurentSeries monomial(const Rational &c, const Key &key, const Rational &qexp, Rational qorder, Region region);
    /// A one-variable series placed at key (0, 0).
    static BiLaurentSeries constant(const PuiseuxSeries &s, Region region);

    [[nodiscard]] const Rational &qorder() const { return qorder_; }
    [[nodiscard]] Region region() const { return region_; }
    [[nodiscard]] const std::optional<Rational> &window() const { return window_; }
    [[nodiscard]] const TermMap &terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    /// Minimum q-valuation over all keys (qorder when empty).
    [[nodiscard]] Rational valuation() const;
    /// Largest |e1|, |e2| over stored keys (0 when empty).
    [[nodiscard]] Rational reach() const;
    [[nodiscard]] bool in_window(const Key &k) const { return !window_ || k.reach() <= *window_; }
    /// All coefficients are constants (exponent 0 only).
    [[nodiscard]] bool is_laurent_polynomial() const;

    [[nodiscard]] BiLaurentSeries truncated(const Rational &qorder) const;
    /// Same series claimed only inside the window W (and the existing one).
    [[nodiscard]] BiLaurentSeries restricted(const Rational &window) const;
    /// Multiplies every coefficient by c q^e.
    [[nodiscard]] BiLaurentSeries scaled(const Rational &c, const Rational &qexp = Rational(0)) const;
    /// Multiplies by zeta^key; the window shrinks by key.reach().
    [[nodiscard]] BiLaurentSeries times_monomial(const Key &key) const;
    /// Re-tags the region. Only for builders whose expansion is the same in
    /// both regions (see f_series).
    [[nodiscard]] BiLaurentSeries retagged(Region region) const;

    BiLaurentSeries operator-() const { return scaled(Rational(-1)); }

    friend bool operator==(const BiLaurentSeries &, const BiLaurentSeries &) = default;

private:
    TermMap terms_;
    Rational qorder_;
    Region region_;
    std::optional<Rational> window_;
};

BiLaurentSeries bl_add(const BiLaurentSeries &a, const BiLaurentSeries &b);
BiLaurentSeries bl_sub(const BiLaurentSeries &a, const BiLaurentSeries &b);
/// Convolution product. qorder = min(a.qorder + val(b), b.qorder + val(a)).
/// A window on one operand shrinks by the other operand's reach; two
/// windowed operands are rejected.
BiLaurentSeries bl_mul(const BiLaurentSeries &a, const BiLaurentSeries &b);
/// Multiplies every coefficient by a one-variable series.
BiLaurentSeries bl_scale(const BiLaurentSeries &a, const PuiseuxSeries &s);
/// Coefficient of zeta1^r1 zeta2^r2; the zero series (order qorder) if absent.
PuiseuxSeries bl_coeff(const BiLaurentSeries &a, const Rational &r1, const Rational &r2);
/// bl_coeff(bl_mul(a, b), r1, r2) without forming the product.
PuiseuxSeries bl_coeff_of_product(const BiLaurentSeries &a, const BiLaurentSeries &b, const Rational &r1,
                                  const Rational &r2);
/// q -> q^k on every coefficient (k > 0).
BiLaurentSeries bl_scale_q(const BiLaurentSeries &a, const Rational &k);

inline BiLaurentSeries operator+(const BiLaurentSeries &a, const BiLaurentSeries &b) { return bl_add(a, b); }
inline BiLaurentSeries operator-(const BiLaurentSeries &a, const BiLaurentSeries &b) { return bl_sub(a, b); }
inline BiLaurentSeries operator*(const BiLaurentSeries &a, const BiLaurentSeries &b) { return bl_mul(a, b); }

/// The three expansion units.
enum class Unit { Z1, Z2, Z12 };
Key unit_key(Unit u);
std::string_view to_string(Unit u);
Unit parse_unit(std::string_view s);

/// 1 / (1 - c zeta^dir q^s), c = +-1, expanded in the given region.
///
/// The monomial must be uniformly small (expansion sum_{k>=0} m^k) or
/// uniformly large (-sum_{k>=1} m^-k) over the region; otherwise the
/// expansion is not defined and PreconditionError is thrown. When the
/// expansion has infinite support at fixed q-order (s = 0) a window is
/// mandatory.
BiLaurentSeries expand_geometric(int c, const Key &dir, const Rational &s, Region region, const Rational &qorder,
                                 std::optional<Rational> window = std::nullopt);

/// 1 / (1 - u q^n) in region; INNER coefficients are rho_{k,n} q^{kn} on u^k.
BiLaurentSeries expand_inverse_one_minus(Unit u, std::int64_t n, Region region, const Rational &qorder,
                                         std::optional<Rational> window = std::nullopt);

/// OUTER expansion of 1 / ((1 - z1^-1)(1 - z2^-1)(1 - z1^-1 z2^-1)):
/// coefficient min(l1 + 1, l2 + 1) at z1^-l1 z2^-l2, for l1, l2 <= W.
BiLaurentSeries expand_weyl_denominator(const Rational &qorder, const Rational &window);

/// z_j -> z_j + m_j tau, i.e. zeta_j -> zeta_j q^{m_j}. Needs a finite
/// window W; the q-order drops by (|m1| + |m2|) W.
BiLaurentSeries bl_elliptic_shift(const BiLaurentSeries &a, std::int64_t m1, std::int64_t m2);

/// z -> z + l with integer l: multiplies key e by exp(2 pi i e.l). Defined
/// when every e.l lies in (1/2)Z (sign +-1); otherwise PreconditionError.
BiLaurentSeries bl_integer_shift(const BiLaurentSeries &a, std::int64_t l1, std::int64_t l2);

using IntMatrix2 = std::array<std::array<std::int64_t, 2>, 2>;
/// Remaps key e -> M e. M must be invertible.
BiLaurentSeries bl_monomial_substitution(const BiLaurentSeries &a, const IntMatrix2 &m);

class NonExactDivision : public std::domain_error {
public:
    NonExactDivision(const std::string &what, Key monomial) : std::domain_error(what), monomial_(std::move(monomial)) {}
    [[nodiscard]] const Key &monomial() const { return monomial_; }

private:
    Key monomial_;
};

/// Exact quotient of two Laurent polynomials (constant coefficients).
/// Throws NonExactDivision with the offending remainder monomial.
BiLaurentSeries laurent_poly_exact_divide(const BiLaurentSeries &numer, const BiLaurentSeries &denom);

nlohmann::json to_json(const BiLaurentSeries &s);
BiLaurentSeries bilaurent_from_json(const nlohmann::json &j);

} // namespace ftlab
