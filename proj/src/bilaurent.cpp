#include "ftlab/bilaurent.hpp"

#include <algorithm>
#include <limits>

namespace ftlab {

std::string_view to_string(Region r)
{
    switch (r) {
    case Region::Inner: return "INNER";
    case Region::Outer: return "OUTER";
    case Region::Wide: return "WIDE";
    }
    return "?";
}

Region parse_region(std::string_view s)
{
    if (s == "INNER") return Region::Inner;
    if (s == "OUTER") return Region::Outer;
    if (s == "WIDE") return Region::Wide;
    throw std::invalid_argument("unknown region '" + std::string(s) + "'");
}

std::string Key::to_string() const { return "(" + e1.to_string() + "," + e2.to_string() + ")"; }

Key unit_key(Unit u)
{
    switch (u) {
    case Unit::Z1: return {1, 0};
    case Unit::Z2: return {0, 1};
    case Unit::Z12: return {1, 1};
    }
    return {0, 0};
}

std::string_view to_string(Unit u)
{
    switch (u) {
    case Unit::Z1: return "z1";
    case Unit::Z2: return "z2";
    case Unit::Z12: return "z12";
    }
    return "?";
}

Unit parse_unit(std::string_view s)
{
    if (s == "z1" || s == "zeta1") return Unit::Z1;
    if (s == "z2" || s == "zeta2") return Unit::Z2;
    if (s == "z12" || s == "zeta1zeta2") return Unit::Z12;
    throw std::invalid_argument("unknown unit '" + std::string(s) + "' (expected z1, z2 or z12)");
}

BiLaurentSeries::BiLaurentSeries(Rational qorder, Region region, std::optional<Rational> window)
    : qorder_{std::move(qorder)}, region_{region}, window_{std::move(window)}
{
    if (window_ && window_->sign() < 0) throw PreconditionError("BiLaurentSeries: negative window");
}

BiLaurentSeries BiLaurentSeries::from_terms(TermMap terms, Rational qorder, Region region, std::optional<Rational> window)
{
    for (const auto &[k, c] : terms) qorder = min(qorder, c.order());
    BiLaurentSeries s(std::move(qorder), region, std::move(window));
    for (auto &[k, c] : terms) {
        if (!s.in_window(k)) continue;
        PuiseuxSeries t = c.truncated(s.qorder_);
        if (!t.is_zero()) s.terms_.emplace(k, std::move(t));
    }
    return s;
}

BiLaurentSeries BiLaurentSeries::monomial(const Rational &c, const Key &key, const Rational &qexp, Rational qorder,
                                          Region region)
{
    BiLaurentSeries s(std::move(qorder), region);
    PuiseuxSeries t = PuiseuxSeries::monomial(c, qexp, s.qorder_);
    if (!t.is_zero()) s.terms_.emplace(key, std::move(t));
    return s;
}

BiLaurentSeries BiLaurentSeries::constant(const PuiseuxSeries &c, Region region)
{
    BiLaurentSeries s(c.order(), region);
    if (!c.is_zero()) s.terms_.emplace(Key{0, 0}, c);
    return s;
}

Rational BiLaurentSeries::valuation() const
{
    Rational v = qorder_;
    for (const auto &[k, c] : terms_) v = min(v, c.valuation());
    return v;
}

Rational BiLaurentSeries::reach() const
{
    Rational r;
    for (const auto &[k, c] : terms_) r = max(r, k.reach());
    return r;
}

bool BiLaurentSeries::is_laurent_polynomial() const
{
    for (const auto &[k, c] : terms_)
        for (const auto &t : c.terms())
            if (!t.exp.is_zero()) return false;
    return true;
}

BiLaurentSeries BiLaurentSeries::truncated(const Rational &qorder) const
{
    if (qorder >= qorder_) return *this;
    BiLaurentSeries s(qorder, region_, window_);
    for (const auto &[k, c] : terms_) {
        PuiseuxSeries t = c.truncated(qorder);
        if (!t.is_zero()) s.terms_.emplace(k, std::move(t));
    }
    return s;
}

BiLaurentSeries BiLaurentSeries::restricted(const Rational &window) const
{
    Rational w = window_ ? min(*window_, window) : window;
    BiLaurentSeries s(qorder_, region_, w);
    for (const auto &[k, c] : terms_)
        if (s.in_window(k)) s.terms_.emplace(k, c);
    return s;
}

BiLaurentSeries BiLaurentSeries::scaled(const Rational &c, const Rational &qexp) const
{
    BiLaurentSeries s(qorder_ + qexp, region_, window_);
    if (c.is_zero()) return s;
    for (const auto &[k, v] : terms_) s.terms_.emplace(k, v.scaled(c).shifted(qexp));
    return s;
}

BiLaurentSeries BiLaurentSeries::times_monomial(const Key &key) const
{
    std::optional<Rational> w;
    if (window_) {
        w = *window_ - key.reach();
        if (w->sign() < 0) throw PreconditionError("times_monomial: shift " + key.to_string() + " leaves no exact window");
    }
    BiLaurentSeries s(qorder_, region_, w);
    for (const auto &[k, c] : terms_) {
        Key nk = k + key;
        if (s.in_window(nk)) s.terms_.emplace(nk, c);
    }
    return s;
}

BiLaurentSeries BiLaurentSeries::retagged(Region region) const
{
    BiLaurentSeries s = *this;
    s.region_ = region;
    return s;
}

namespace {

void require_same_region(const BiLaurentSeries &a, const BiLaurentSeries &b, const char *op)
{
    if (a.region() != b.region())
        throw RegionMismatch(std::string(op) + ": region mismatch (" + std::string(to_string(a.region())) + " vs " +
                             std::string(to_string(b.region())) + ")");
}

std::optional<Rational> min_window(const std::optional<Rational> &a, const std::optional<Rational> &b)
{
    if (!a) return b;
    if (!b) return a;
    return min(*a, *b);
}

} // namespace

BiLaurentSeries bl_add(const BiLaurentSeries &a, const BiLaurentSeries &b)
{
    require_same_region(a, b, "bl_add");
    BiLaurentSeries::TermMap terms;
    for (const auto &[k, c] : a.terms()) terms.emplace(k, c);
    for (const auto &[k, c] : b.terms()) {
        auto [it, fresh] = terms.emplace(k, c);
        if (!fresh) it->second = it->second + c;
    }
    return BiLaurentSeries::from_terms(std::move(terms), min(a.qorder(), b.qorder()), a.region(),
                                       min_window(a.window(), b.window()));
}

BiLaurentSeries bl_sub(const BiLaurentSeries &a, const BiLaurentSeries &b) { return bl_add(a, -b); }

BiLaurentSeries bl_mul(const BiLaurentSeries &a, const BiLaurentSeries &b)
{
    require_same_region(a, b, "bl_mul");
    if (a.window() && b.window())
        throw PreconditionError("bl_mul: both operands are windowed; the product would not be exact anywhere");
    const Rational va = a.valuation(), vb = b.valuation();
    const Rational order = min(a.qorder() + vb, b.qorder() + va);
    std::optional<Rational> w;
    if (a.window()) w = *a.window() - b.reach();
    if (b.window()) w = *b.window() - a.reach();
    if (w && w->sign() < 0)
        throw PreconditionError("bl_mul: the unwindowed factor reaches beyond the window of the other");

    std::map<Key, std::vector<Term>> acc;
    for (const auto &[ka, ca] : a.terms()) {
        const Rational vca = ca.valuation();
        if (vca + vb >= order) continue;
        for (const auto &[kb, cb] : b.terms()) {
            if (vca + cb.valuation() >= order) continue;
            Key k = ka + kb;
            if (w && k.reach() > *w) continue;
            auto &bucket = acc[k];
            for (const auto &ta : ca.terms()) {
                if (ta.exp + cb.valuation() >= order) break;
                for (const auto &tb : cb.terms()) {
                    Rational e = ta.exp + tb.exp;
                    if (e >= order) break;
                    bucket.push_back({std::move(e), ta.coeff * tb.coeff});
                }
            }
        }
    }
    BiLaurentSeries::TermMap terms;
    for (auto &[k, v] : acc) {
        PuiseuxSeries s = PuiseuxSeries::from_terms(std::move(v), order);
        if (!s.is_zero()) terms.emplace(k, std::move(s));
    }
    return BiLaurentSeries::from_terms(std::move(terms), order, a.region(), w);
}

BiLaurentSeries bl_scale(const BiLaurentSeries &a, const PuiseuxSeries &s)
{
    const Rational order = min(a.qorder() + s.valuation(), s.order() + a.valuation());
    BiLaurentSeries::TermMap terms;
    for (const auto &[k, c] : a.terms()) terms.emplace(k, mul_truncated(c, s, order));
    return BiLaurentSeries::from_terms(std::move(terms), order, a.region(), a.window());
}

PuiseuxSeries bl_coeff(const BiLaurentSeries &a, const Rational &r1, const Rational &r2)
{
    Key k{r1, r2};
    if (!a.in_window(k))
        throw PreconditionError("bl_coeff: key " + k.to_string() + " lies outside the exact window " +
                                a.window()->to_string());
    auto it = a.terms().find(k);
    if (it == a.terms().end()) return PuiseuxSeries(a.qorder());
    return it->second;
}

PuiseuxSeries bl_coeff_of_product(const BiLaurentSeries &a, const BiLaurentSeries &b, const Rational &r1,
                                  const Rational &r2)
{
    require_same_region(a, b, "bl_coeff_of_product");
    if (a.window() && b.window()) throw PreconditionError("bl_coeff_of_product: both operands are windowed");
    const Key r{r1, r2};
    const BiLaurentSeries &windowed = a.window() ? a : b;
    const BiLaurentSeries &other = a.window() ? b : a;
    if (windowed.window() && r.reach() + other.reach() > *windowed.window())
        throw PreconditionError("bl_coeff_of_product: key " + r.to_string() + " is not exact in the product");
    const Rational order = min(a.qorder() + b.valuation(), b.qorder() + a.valuation());
    PuiseuxSeries acc(order);
    for (const auto &[k, c] : other.terms()) {
        auto it = windowed.terms().find(r - k);
        if (it == windowed.terms().end()) continue;
        acc = acc + mul_truncated(c, it->second, order);
    }
    return acc;
}

BiLaurentSeries bl_scale_q(const BiLaurentSeries &a, const Rational &k)
{
    BiLaurentSeries::TermMap terms;
    for (const auto &[key, c] : a.terms()) terms.emplace(key, series_scale_q(c, k));
    return BiLaurentSeries::from_terms(std::move(terms), a.qorder() * k, a.region(), a.window());
}

namespace {

// Range (lo, hi) of dir.t + s over the region, where t_j = log|zeta_j| / log|q|.
// nullopt bounds stand for -inf / +inf.
struct Range {
    std::optional<Rational> lo, hi;
};

Range monomial_range(const Key &dir, const Rational &s, Region region)
{
    auto eval = [&](int t1, int t2) { return dir.e1 * Rational(t1) + dir.e2 * Rational(t2) + s; };
    auto hull = [&](std::initializer_list<std::pair<int, int>> verts) {
        Range r;
        for (auto [t1, t2] : verts) {
            Rational v = eval(t1, t2);
            r.lo = r.lo ? min(*r.lo, v) : v;
            r.hi = r.hi ? max(*r.hi, v) : v;
        }
        return r;
    };
    switch (region) {
    case Region::Inner: return hull({{0, 0}, {1, 0}, {0, 1}});
    case Region::Wide: return hull({{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}});
    case Region::Outer: {
        // t1, t2 range over (-inf, 0)
        Range r;
        bool any_pos = dir.e1.sign() > 0 || dir.e2.sign() > 0;
        bool any_neg = dir.e1.sign() < 0 || dir.e2.sign() < 0;
        if (!any_pos) r.lo = s;
        if (!any_neg) r.hi = s;
        return r;
    }
    }
    return {};
}

} // namespace

BiLaurentSeries expand_geometric(int c, const Key &dir, const Rational &s, Region region, const Rational &qorder,
                                 std::optional<Rational> window)
{
    if (c != 1 && c != -1) throw PreconditionError("expand_geometric: c must be +1 or -1");
    if (dir.e1.is_zero() && dir.e2.is_zero()) throw PreconditionError("expand_geometric: zero direction");
    const Range r = monomial_range(dir, s, region);
    const bool small = r.lo && r.lo->sign() >= 0;
    const bool large = r.hi && r.hi->sign() <= 0;
    if (!small && !large)
        throw PreconditionError("expand_geometric: 1/(1 - z^" + dir.to_string() + " q^" + s.to_string() +
                                ") has no single Laurent expansion in region " + std::string(to_string(region)));
    // small: sum_{k>=0} (c m)^k; large: -sum_{k>=1} (c m)^{-k}
    const int sgn = small ? 1 : -1;
    const Key step = small ? dir : Key{-dir.e1, -dir.e2};
    const Rational qstep = small ? s : -s;
    if (qstep.is_zero() && !window)
        throw PreconditionError("expand_geometric: a window is required when the expansion has unbounded support");

    if (qstep.sign() < 0) throw std::logic_error("expand_geometric: inconsistent region range");

    BiLaurentSeries::TermMap terms;
    const Rational dir_reach = step.reach();
    Key k{0, 0};
    Rational e = 0;
    for (std::int64_t j = small ? 0 : 1;; ++j) {
        if (j > 0) {
            k = k + step;
            e += qstep;
        }
        if (e >= qorder) break;
        if (window && Rational(j) * dir_reach > *window) break;
        const Rational coeff = Rational(sgn * ((c == -1 && (j % 2)) ? -1 : 1));
        terms.emplace(k, PuiseuxSeries::monomial(coeff, e, qorder));
    }
    return BiLaurentSeries::from_terms(std::move(terms), qorder, region, std::move(window));
}

BiLaurentSeries expand_inverse_one_minus(Unit u, std::int64_t n, Region region, const Rational &qorder,
                                         std::optional<Rational> window)
{
    return expand_geometric(1, unit_key(u), Rational(n), region, qorder, std::move(window));
}

BiLaurentSeries expand_weyl_denominator(const Rational &qorder, const Rational &window)
{
    if (window.sign() < 0) throw PreconditionError("expand_weyl_denominator: negative window");
    if (qorder.sign() <= 0) return BiLaurentSeries(qorder, Region::Outer, window);
    const std::int64_t w = window.floor().to_int64();
    BiLaurentSeries::TermMap terms;
    for (std::int64_t l1 = 0; l1 <= w; ++l1)
        for (std::int64_t l2 = 0; l2 <= w; ++l2)
            terms.emplace(Key{-l1, -l2}, PuiseuxSeries::monomial(Rational(std::min(l1, l2) + 1), 0, qorder));
    return BiLaurentSeries::from_terms(std::move(terms), qorder, Region::Outer, window);
}

BiLaurentSeries bl_elliptic_shift(const BiLaurentSeries &a, std::int64_t m1, std::int64_t m2)
{
    if (!a.window()) throw PreconditionError("bl_elliptic_shift: a finite window is required");
    const Rational w = *a.window();
    // every key in the window box may move down by at most (|m1| + |m2|) W
    const Rational order = a.qorder() - Rational(std::abs(m1) + std::abs(m2)) * w;
    BiLaurentSeries::TermMap terms;
    for (const auto &[k, c] : a.terms()) terms.emplace(k, c.shifted(Rational(m1) * k.e1 + Rational(m2) * k.e2));
    return BiLaurentSeries::from_terms(std::move(terms), order, a.region(), w);
}

BiLaurentSeries bl_integer_shift(const BiLaurentSeries &a, std::int64_t l1, std::int64_t l2)
{
    BiLaurentSeries::TermMap terms;
    for (const auto &[k, c] : a.terms()) {
        Rational twice = Rational(2) * (k.e1 * Rational(l1) + k.e2 * Rational(l2));
        if (!twice.is_integer())
            throw PreconditionError("bl_integer_shift: phase at key " + k.to_string() + " is not a sign");
        bool odd = twice.to_int64() % 2 != 0;
        terms.emplace(k, odd ? -c : c);
    }
    return BiLaurentSeries::from_terms(std::move(terms), a.qorder(), a.region(), a.window());
}

BiLaurentSeries bl_monomial_substitution(const BiLaurentSeries &a, const IntMatrix2 &m)
{
    const std::int64_t det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (det == 0) throw PreconditionError("bl_monomial_substitution: singular matrix");
    std::optional<Rational> w;
    if (a.window()) {
        // ||M^-1||_inf = max row sum of |adj(M)| / |det|
        Rational r0 = Rational(std::abs(m[1][1]) + std::abs(m[0][1]), std::abs(det));
        Rational r1 = Rational(std::abs(m[1][0]) + std::abs(m[0][0]), std::abs(det));
        w = *a.window() / max(r0, r1);
    }
    BiLaurentSeries::TermMap terms;
    for (const auto &[k, c] : a.terms()) {
        Key nk{Rational(m[0][0]) * k.e1 + Rational(m[0][1]) * k.e2, Rational(m[1][0]) * k.e1 + Rational(m[1][1]) * k.e2};
        terms.emplace(nk, c);
    }
    return BiLaurentSeries::from_terms(std::move(terms), a.qorder(), a.region(), w);
}

BiLaurentSeries laurent_poly_exact_divide(const BiLaurentSeries &numer, const BiLaurentSeries &denom)
{
    require_same_region(numer, denom, "laurent_poly_exact_divide");
    if (!numer.is_laurent_polynomial() || !denom.is_laurent_polynomial())
        throw PreconditionError("laurent_poly_exact_divide: arguments must have constant coefficients");
    if (denom.is_zero()) throw PreconditionError("laurent_poly_exact_divide: division by zero");
    const Rational order = min(numer.qorder(), denom.qorder());
    if (order.sign() <= 0) throw PreconditionError("laurent_poly_exact_divide: q-order must be positive");

    std::map<Key, Rational> rem, den, quo;
    for (const auto &[k, c] : numer.terms()) rem.emplace(k, c.coeff(0));
    for (const auto &[k, c] : denom.terms()) den.emplace(k, c.coeff(0));

    auto bounds = [](const std::map<Key, Rational> &p) {
        Rational lo1 = p.begin()->first.e1, hi1 = lo1, lo2 = p.begin()->first.e2, hi2 = lo2;
        for (const auto &[k, c] : p) {
            lo1 = min(lo1, k.e1), hi1 = max(hi1, k.e1);
            lo2 = min(lo2, k.e2), hi2 = max(hi2, k.e2);
        }
        return std::array<Rational, 4>{lo1, hi1, lo2, hi2};
    };
    const auto db = bounds(den);
    std::optional<std::array<Rational, 4>> box;
    if (!rem.empty()) {
        auto nb = bounds(rem);
        box = std::array<Rational, 4>{nb[0] - db[0], nb[1] - db[1], nb[2] - db[2], nb[3] - db[3]};
    }
    const auto &[dlead_key, dlead] = *den.rbegin();
    while (!rem.empty()) {
        const auto [rk, rc] = *rem.rbegin();
        Key qk = rk - dlead_key;
        const auto &b = *box;
        if (qk.e1 < b[0] || qk.e1 > b[1] || qk.e2 < b[2] || qk.e2 > b[3])
            throw NonExactDivision("laurent_poly_exact_divide: nonzero remainder at monomial " + rk.to_string(), rk);
        Rational qc = rc / dlead;
        quo[qk] += qc;
        for (const auto &[dk, dc] : den) {
            Key t = qk + dk;
            Rational &slot = rem[t];
            slot -= qc * dc;
            if (slot.is_zero()) rem.erase(t);
        }
    }
    BiLaurentSeries::TermMap terms;
    for (const auto &[k, c] : quo)
        if (!c.is_zero()) terms.emplace(k, PuiseuxSeries::monomial(c, 0, order));
    return BiLaurentSeries::from_terms(std::move(terms), order, numer.region());
}

nlohmann::json to_json(const BiLaurentSeries &s)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[k, c] : s.terms())
        terms.push_back({{"e1", k.e1.to_fraction_string()}, {"e2", k.e2.to_fraction_string()}, {"series", to_json(c)}});
    nlohmann::json window = nullptr;
    if (s.window()) {
        if (s.window()->is_integer())
            window = s.window()->to_int64();
        else
            window = s.window()->to_fraction_string();
    }
    return {{"region", std::string(to_string(s.region()))},
            {"qorder", s.qorder().to_fraction_string()},
            {"window", std::move(window)},
            {"terms", std::move(terms)}};
}

BiLaurentSeries bilaurent_from_json(const nlohmann::json &j)
{
    Region region = parse_region(j.at("region").get<std::string>());
    Rational qorder = Rational::parse(j.at("qorder").get<std::string>());
    std::optional<Rational> window;
    const auto &w = j.at("window");
    if (w.is_number_integer())
        window = Rational(w.get<std::int64_t>());
    else if (w.is_string())
        window = Rational::parse(w.get<std::string>());
    BiLaurentSeries::TermMap terms;
    for (const auto &t : j.at("terms")) {
        Key k{Rational::parse(t.at("e1").get<std::string>()), Rational::parse(t.at("e2").get<std::string>())};
        if (!terms.emplace(k, series_from_json(t.at("series"))).second)
            throw std::invalid_argument("bilaurent_from_json: duplicate key " + k.to_string());
    }
    return BiLaurentSeries::from_terms(std::move(terms), std::move(qorder), region, std::move(window));
}

} // namespace ftlab
