#include "ftlab/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ftlab {

namespace {

// Sorts by exponent, merges duplicates and drops zeros / out-of-range terms.
std::vector<Term> normalize(std::vector<Term> terms, const Rational &order)
{
    std::erase_if(terms, [&](const Term &t) { return t.exp >= order || t.coeff.is_zero(); });
    std::sort(terms.begin(), terms.end(), [](const Term &a, const Term &b) { return a.exp < b.exp; });
    std::vector<Term> out;
    out.reserve(terms.size());
    for (auto &t : terms) {
        if (!out.empty() && out.back().exp == t.exp) {
            out.back().coeff += t.coeff;
            if (out.back().coeff.is_zero()) out.pop_back();
        } else {
            out.push_back(std::move(t));
        }
    }
    return out;
}

} // namespace

PuiseuxSeries PuiseuxSeries::from_terms(std::vector<Term> terms, Rational order)
{
    PuiseuxSeries s(std::move(order));
    s.terms_ = normalize(std::move(terms), s.order_);
    return s;
}

PuiseuxSeries PuiseuxSeries::monomial(Rational coeff, Rational exp, Rational order)
{
    PuiseuxSeries s(std::move(order));
    if (!coeff.is_zero() && exp < s.order_) s.terms_.push_back({std::move(exp), std::move(coeff)});
    return s;
}

Rational PuiseuxSeries::coeff(const Rational &e) const
{
    if (e >= order_)
        throw PreconditionError("PuiseuxSeries::coeff: exponent " + e.to_string() + " is not below the order " +
                                order_.to_string());
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e, [](const Term &t, const Rational &x) { return t.exp < x; });
    if (it != terms_.end() && it->exp == e) return it->coeff;
    return Rational(0);
}

PuiseuxSeries PuiseuxSeries::truncated(const Rational &new_order) const
{
    if (new_order >= order_) return *this;
    PuiseuxSeries s(new_order);
    for (const auto &t : terms_) {
        if (t.exp >= new_order) break;
        s.terms_.push_back(t);
    }
    return s;
}

PuiseuxSeries PuiseuxSeries::shifted(const Rational &e) const
{
    PuiseuxSeries s(order_ + e);
    s.terms_.reserve(terms_.size());
    for (const auto &t : terms_) s.terms_.push_back({t.exp + e, t.coeff});
    return s;
}

PuiseuxSeries PuiseuxSeries::scaled(const Rational &c) const
{
    PuiseuxSeries s(order_);
    if (c.is_zero()) return s;
    s.terms_.reserve(terms_.size());
    for (const auto &t : terms_) s.terms_.push_back({t.exp, t.coeff * c});
    return s;
}

PuiseuxSeries operator+(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    PuiseuxSeries s(min(a.order_, b.order_));
    auto &out = s.terms_;
    out.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    const auto ea = a.terms_.end(), eb = b.terms_.end();
    while (true) {
        bool has_a = ia != ea && ia->exp < s.order_;
        bool has_b = ib != eb && ib->exp < s.order_;
        if (!has_a && !has_b) break;
        if (has_a && (!has_b || ia->exp < ib->exp)) {
            out.push_back(*ia++);
        } else if (has_b && (!has_a || ib->exp < ia->exp)) {
            out.push_back(*ib++);
        } else {
            Rational c = ia->coeff + ib->coeff;
            if (!c.is_zero()) out.push_back({ia->exp, std::move(c)});
            ++ia;
            ++ib;
        }
    }
    return s;
}

PuiseuxSeries operator-(const PuiseuxSeries &a, const PuiseuxSeries &b) { return a + (-b); }

PuiseuxSeries mul_truncated(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &cap)
{
    Rational order = min(a.order() + b.valuation(), b.order() + a.valuation());
    order = min(order, cap);
    std::vector<Term> prod;
    prod.reserve(a.size() * b.size());
    for (const auto &ta : a.terms()) {
        if (ta.exp + b.valuation() >= order) break;
        for (const auto &tb : b.terms()) {
            Rational e = ta.exp + tb.exp;
            if (e >= order) break;
            prod.push_back({std::move(e), ta.coeff * tb.coeff});
        }
    }
    return PuiseuxSeries::from_terms(std::move(prod), std::move(order));
}

PuiseuxSeries operator*(const PuiseuxSeries &a, const PuiseuxSeries &b)
{
    return mul_truncated(a, b, min(a.order() + b.valuation(), b.order() + a.valuation()));
}

PuiseuxSeries series_add(const PuiseuxSeries &a, const PuiseuxSeries &b) { return a + b; }
PuiseuxSeries series_mul(const PuiseuxSeries &a, const PuiseuxSeries &b) { return a * b; }

PuiseuxSeries series_invert(const PuiseuxSeries &a)
{
    if (a.is_zero()) throw PreconditionError("series_invert: the zero series is not invertible");
    const Rational v = a.valuation();
    const Rational c = a.terms().front().coeff;
    // u = a / (c q^v) = 1 + h, exact below order - v
    const Rational uorder = a.order() - v;
    const Rational target = uorder; // inverse of u is exact to the same order
    if (target <= 0) return PuiseuxSeries(a.order() - 2 * v);

    // Work on the lattice (1/D) Z spanned by the exponents of h.
    std::int64_t den = 1;
    for (const auto &t : a.terms()) {
        mpz_class d = (t.exp - v).denominator();
        std::int64_t dd = static_cast<std::int64_t>(d.get_si());
        den = std::lcm(den, dd);
    }
    const std::int64_t len = ((target * Rational(den)).ceil()).to_int64();
    std::vector<Rational> h(static_cast<std::size_t>(len));
    for (const auto &t : a.terms()) {
        Rational idx = (t.exp - v) * Rational(den);
        std::int64_t i = idx.to_int64();
        if (i >= len) break;
        h[static_cast<std::size_t>(i)] = t.coeff / c;
    }
    std::vector<std::size_t> support;
    for (std::size_t i = 1; i < h.size(); ++i)
        if (!h[i].is_zero()) support.push_back(i);

    std::vector<Rational> g(static_cast<std::size_t>(len));
    g[0] = Rational(1);
    for (std::size_t n = 1; n < g.size(); ++n) {
        Rational acc;
        for (std::size_t j : support) {
            if (j > n) break;
            if (!g[n - j].is_zero()) acc -= h[j] * g[n - j];
        }
        g[n] = std::move(acc);
    }
    std::vector<Term> out;
    const Rational inv_c = Rational(1) / c;
    for (std::size_t n = 0; n < g.size(); ++n)
        if (!g[n].is_zero()) out.push_back({Rational(static_cast<std::int64_t>(n), den) - v, g[n] * inv_c});
    return PuiseuxSeries::from_terms(std::move(out), a.order() - 2 * v);
}

PuiseuxSeries series_scale_q(const PuiseuxSeries &a, const Rational &k)
{
    if (k.sign() <= 0) throw PreconditionError("series_scale_q: scale must be positive");
    std::vector<Term> out;
    out.reserve(a.size());
    for (const auto &t : a.terms()) out.push_back({t.exp * k, t.coeff});
    return PuiseuxSeries::from_terms(std::move(out), a.order() * k);
}

PuiseuxSeries series_pow(const PuiseuxSeries &a, unsigned n)
{
    if (n == 0) return PuiseuxSeries::one(a.order() - a.valuation());
    PuiseuxSeries result = a;
    for (unsigned i = 1; i < n; ++i) result = result * a;
    return result;
}

namespace {

// s * (1 - sign q^e), truncated at s.order().
PuiseuxSeries times_binomial(const PuiseuxSeries &s, int sign, const Rational &e)
{
    if (e >= s.order()) return s;
    return s + s.shifted(e).scaled(Rational(-sign)).truncated(s.order());
}

} // namespace

PuiseuxSeries pochhammer(int sign, const Rational &s, const Rational &t, PochhammerLength n, const Rational &order)
{
    if (sign != 1 && sign != -1) throw PreconditionError("pochhammer: sign must be +1 or -1");
    if (t.sign() <= 0) throw PreconditionError("pochhammer: step t must be positive");
    if (!n && s.sign() <= 0) throw PreconditionError("pochhammer: infinite product needs s > 0");
    if (n && *n < 0) throw PreconditionError("pochhammer: negative length");
    if (n && *n > 0 && s.sign() < 0) throw PreconditionError("pochhammer: finite product needs s + j t >= 0");
    PuiseuxSeries result = PuiseuxSeries::one(order);
    for (std::int64_t j = 0; !n || j < *n; ++j) {
        Rational e = s + Rational(j) * t;
        if (e >= order) break;
        result = times_binomial(result, sign, e);
    }
    return result;
}

PuiseuxSeries eta_series(std::int64_t k, const Rational &order)
{
    if (k <= 0) throw PreconditionError("eta_series: scale must be positive");
    const Rational v(k, 24);
    return pochhammer(1, Rational(k), Rational(k), kInfinite, order - v).shifted(v);
}

PuiseuxSeries eta_quotient(std::span<const EtaFactor> factors, const Rational &order)
{
    Rational v;
    for (const auto &f : factors) v += Rational(f.scale * f.power, 24);
    const Rational unit_order = order - v;
    PuiseuxSeries unit = PuiseuxSeries::one(unit_order);
    for (const auto &f : factors) {
        if (f.scale <= 0) throw PreconditionError("eta_quotient: scale must be positive");
        PuiseuxSeries p = pochhammer(1, Rational(f.scale), Rational(f.scale), kInfinite, unit_order);
        if (f.power < 0) p = series_invert(p);
        for (int i = 0; i < std::abs(f.power); ++i) unit = mul_truncated(unit, p, unit_order);
    }
    return unit.shifted(v);
}

std::string PuiseuxSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms_) {
        Rational c = t.coeff;
        bool neg = c.sign() < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        bool unit = c == Rational(1);
        if (t.exp.is_zero()) {
            os << c;
            continue;
        }
        if (!unit) os << c << "*";
        os << "q";
        if (t.exp != Rational(1)) {
            if (t.exp.is_integer() && t.exp.sign() > 0)
                os << "^" << t.exp;
            else
                os << "^(" << t.exp << ")";
        }
    }
    if (!first) os << " + ";
    os << "O(q^" << (order_.is_integer() && order_.sign() >= 0 ? order_.to_string() : "(" + order_.to_string() + ")") << ")";
    return os.str();
}

nlohmann::json to_json(const PuiseuxSeries &s)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &t : s.terms())
        terms.push_back({{"exp", t.exp.to_fraction_string()}, {"coeff", t.coeff.to_fraction_string()}});
    return {{"order", s.order().to_fraction_string()}, {"terms", std::move(terms)}};
}

PuiseuxSeries series_from_json(const nlohmann::json &j)
{
    Rational order = Rational::parse(j.at("order").get<std::string>());
    std::vector<Term> terms;
    for (const auto &t : j.at("terms"))
        terms.push_back({Rational::parse(t.at("exp").get<std::string>()), Rational::parse(t.at("coeff").get<std::string>())});
    return PuiseuxSeries::from_terms(std::move(terms), std::move(order));
}

} // namespace ftlab
