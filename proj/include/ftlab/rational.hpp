#pragma once

// Exact rational numbers.
//
// Values that fit in 64-bit numerator/denominator are kept inline; anything
// larger falls back to a GMP rational. Both representations are always in
// lowest terms with a positive denominator, and a value is stored inline
// whenever it fits, so equality and hashing never need to normalize.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace ftlab {

class Rational {
public:
    Rational() = default;
    Rational(std::int64_t n) : num_{n} {} // NOLINT: implicit from integers is intended
    Rational(int n) : num_{n} {}          // NOLINT
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class &q);

    /// Parses "n", "-n" or "n/d" (decimal, no whitespace).
    static Rational parse(std::string_view text);

    [[nodiscard]] bool is_zero() const { return !big_ && num_ == 0; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] int sign() const;

    [[nodiscard]] mpq_class to_mpq() const;
    [[nodiscard]] double to_double() const;
    [[nodiscard]] mpz_class numerator() const;
    [[nodiscard]] mpz_class denominator() const;

    /// Exact conversion; throws std::overflow_error when the value is not a
    /// 64-bit integer.
    [[nodiscard]] std::int64_t to_int64() const;
    [[nodiscard]] Rational floor() const;
    [[nodiscard]] Rational ceil() const;
    [[nodiscard]] Rational abs() const { return sign() < 0 ? -*this : *this; }

    /// "n/d" always, the JSON wire form.
    [[nodiscard]] std::string to_fraction_string() const;
    /// "n" for integers, "n/d" otherwise.
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] std::size_t hash() const;

    Rational operator-() const;
    friend Rational operator+(const Rational &a, const Rational &b);
    friend Rational operator-(const Rational &a, const Rational &b);
    friend Rational operator*(const Rational &a, const Rational &b);
    friend Rational operator/(const Rational &a, const Rational &b);
    Rational &operator+=(const Rational &o) { return *this = *this + o; }
    Rational &operator-=(const Rational &o) { return *this = *this - o; }
    Rational &operator*=(const Rational &o) { return *this = *this * o; }
    Rational &operator/=(const Rational &o) { return *this = *this / o; }

    friend bool operator==(const Rational &a, const Rational &b);
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

private:
    static Rational from_mpq(mpq_class q);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

std::ostream &operator<<(std::ostream &os, const Rational &r);

inline Rational min(const Rational &a, const Rational &b) { return b < a ? b : a; }
inline Rational max(const Rational &a, const Rational &b) { return a < b ? b : a; }

} // namespace ftlab

template <>
struct std::hash<ftlab::Rational> {
    std::size_t operator()(const ftlab::Rational &r) const noexcept { return r.hash(); }
};
