#include "ftlab/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ftlab {

namespace {

using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
constexpr i128 kMin = std::numeric_limits<std::int64_t>::min();

bool fits(i128 v) { return v >= kMin && v <= kMax; }

i128 gcd128(i128 a, i128 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

mpz_class mpz_from_i64(std::int64_t v)
{
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), v);
    return z;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den)
{
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    i128 n = num, d = den;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (fits(n) && fits(d)) {
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    } else {
        // only reachable for num == INT64_MIN with den == -1
        *this = from_mpq(mpq_class(mpz_from_i64(num), mpz_from_i64(den)));
    }
}

Rational::Rational(const mpq_class &q) { *this = from_mpq(q); }

Rational Rational::from_mpq(mpq_class q)
{
    q.canonicalize();
    Rational r;
    if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
        r.num_ = mpz_get_si(q.get_num_mpz_t());
        r.den_ = mpz_get_si(q.get_den_mpz_t());
    } else {
        r.big_ = std::make_shared<const mpq_class>(std::move(q));
    }
    return r;
}

Rational Rational::parse(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("Rational::parse: empty string");
    auto valid_int = [](std::string_view s) {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    auto slash = text.find('/');
    std::string_view ns = text.substr(0, slash);
    std::string_view ds = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!valid_int(ns) || !valid_int(ds) || ds[0] == '-' || ds[0] == '+')
        throw std::invalid_argument("Rational::parse: malformed rational '" + std::string(text) + "'");
    std::string nstr(ns[0] == '+' ? ns.substr(1) : ns);
    mpz_class n(nstr, 10), d(std::string(ds), 10);
    if (d == 0) throw std::invalid_argument("Rational::parse: zero denominator");
    return from_mpq(mpq_class(n, d));
}

bool Rational::is_integer() const
{
    if (big_) return big_->get_den() == 1;
    return den_ == 1;
}

int Rational::sign() const
{
    if (big_) return sgn(*big_);
    return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const
{
    if (big_) return *big_;
    return mpq_class(mpz_from_i64(num_), mpz_from_i64(den_));
}

double Rational::to_double() const
{
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_from_i64(num_); }
mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : mpz_from_i64(den_); }

std::int64_t Rational::to_int64() const
{
    if (big_ || den_ != 1) throw std::overflow_error("Rational::to_int64: not a 64-bit integer: " + to_string());
    return num_;
}

Rational Rational::floor() const
{
    if (big_) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
        return from_mpq(mpq_class(f));
    }
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return Rational(q);
}

Rational Rational::ceil() const { return -(-*this).floor(); }

std::string Rational::to_fraction_string() const
{
    if (big_) return big_->get_num().get_str() + "/" + big_->get_den().get_str();
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_string() const
{
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t Rational::hash() const
{
    if (big_) return std::hash<std::string>{}(big_->get_str());
    std::size_t h = std::hash<std::int64_t>{}(num_);
    return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Rational Rational::operator-() const
{
    if (big_ || num_ == std::numeric_limits<std::int64_t>::min()) return from_mpq(-to_mpq());
    Rational r = *this;
    r.num_ = -num_;
    return r;
}

namespace {

// Normalizes n/d (d > 0) computed in 128-bit arithmetic. Returns false when
// the reduced value does not fit.
bool reduce_small(i128 n, i128 d, std::int64_t &out_n, std::int64_t &out_d)
{
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (!fits(n) || !fits(d)) return false;
    out_n = static_cast<std::int64_t>(n);
    out_d = static_cast<std::int64_t>(d);
    return true;
}

} // namespace

Rational operator+(const Rational &a, const Rational &b)
{
    if (!a.big_ && !b.big_) {
        Rational r;
        if (a.den_ == 1 && b.den_ == 1) {
            i128 s = static_cast<i128>(a.num_) + b.num_;
            if (fits(s)) {
                r.num_ = static_cast<std::int64_t>(s);
                return r;
            }
        } else {
            i128 n = static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_;
            i128 d = static_cast<i128>(a.den_) * b.den_;
            if (reduce_small(n, d, r.num_, r.den_)) return r;
        }
    }
    return Rational::from_mpq(a.to_mpq() + b.to_mpq());
}

Rational operator-(const Rational &a, const Rational &b) { return a + (-b); }

Rational operator*(const Rational &a, const Rational &b)
{
    if (!a.big_ && !b.big_) {
        Rational r;
        i128 n = static_cast<i128>(a.num_) * b.num_;
        if (a.den_ == 1 && b.den_ == 1) {
            if (fits(n)) {
                r.num_ = static_cast<std::int64_t>(n);
                return r;
            }
        } else {
            i128 d = static_cast<i128>(a.den_) * b.den_;
            if (reduce_small(n, d, r.num_, r.den_)) return r;
        }
    }
    return Rational::from_mpq(a.to_mpq() * b.to_mpq());
}

Rational operator/(const Rational &a, const Rational &b)
{
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    if (!a.big_ && !b.big_) {
        Rational r;
        i128 n = static_cast<i128>(a.num_) * b.den_;
        i128 d = static_cast<i128>(a.den_) * b.num_;
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (reduce_small(n, d, r.num_, r.den_)) return r;
    }
    return Rational::from_mpq(a.to_mpq() / b.to_mpq());
}

bool operator==(const Rational &a, const Rational &b)
{
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false; // canonical form: a big value never equals a small one
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b)
{
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return a.num_ <=> b.num_;
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

} // namespace ftlab
