#include "ftlab/falsetheta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "ftlab/thetas.hpp"

namespace ftlab {

namespace {

const Rational kHalf(1, 2);

// Smallest R with m R^2 - lin R >= rhs, rounded up, plus one shell.
std::int64_t radius(double m, double lin, const Rational &rhs)
{
    const double c = std::max(0.0, rhs.to_double());
    const double r = (lin + std::sqrt(lin * lin + 4.0 * m * c)) / (2.0 * m);
    return static_cast<std::int64_t>(std::ceil(r)) + 1;
}

std::int64_t ceil_int(const Rational &x) { return x.ceil().to_int64(); }
std::int64_t floor_int(const Rational &x) { return x.floor().to_int64(); }

void require_p(int p)
{
    if (p < 2) throw PreconditionError("p must be at least 2");
}

struct Acc {
    std::vector<Term> terms;
    Rational order;

    void add(const Rational &exp, const Rational &c)
    {
        if (exp < order && !c.is_zero()) terms.push_back({exp, c});
    }
    PuiseuxSeries done() { return PuiseuxSeries::from_terms(std::move(terms), order); }
};

// Dense integer-exponent series below L.
using Dense = std::vector<Rational>;

Dense dense_mul(const Dense &a, const Dense &b)
{
    const std::size_t n = a.size();
    Dense out(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < n; ++j)
            if (!b[j].is_zero()) out[i + j] = out[i + j] + a[i] * b[j];
    }
    return out;
}

// 1/(q;q)_k for k = 0..L-1; beyond L-1 the truncation no longer changes.
std::vector<Dense> inverse_pochhammers(std::size_t L)
{
    std::vector<Dense> out;
    Dense cur(L);
    cur[0] = 1;
    out.push_back(cur);
    for (std::size_t k = 1; k < std::max<std::size_t>(L, 1); ++k) {
        for (std::size_t e = k; e < L; ++e) cur[e] = cur[e] + cur[e - k];
        out.push_back(cur);
    }
    return out;
}

} // namespace

void LatticeParams::validate() const { require_p(p); }

int sgn_star(std::int64_t n) { return n >= 0 ? 1 : -1; }

int rho(std::int64_t a, std::int64_t b) { return (sgn_star(a) + sgn_star(b)) / 2; }

Rational Q(const Rational &n1, const Rational &n2) { return n1 * n1 + n2 * n2 - n1 * n2; }

Rational Qstar(const Rational &z1, const Rational &z2) { return z1 * z1 + z2 * z2 + z1 * z2; }

PuiseuxSeries G_frak(const Rational &l1, const Rational &l2, int p, const Rational &order)
{
    require_p(p);
    const Rational ip(1, p);
    // exponent >= (p/2)|y|^2 - 3|y| with y = n + lambda - 1/p
    const std::int64_t R = radius(p / 2.0, 3.0, order);
    Acc acc{{}, order};
    for (std::int64_t n1 = 1; n1 <= R + ceil_int(ip - l1); ++n1)
        for (std::int64_t n2 = 1; n2 <= R + ceil_int(ip - l2); ++n2) {
            const Rational a = Rational(n1) + l1, b = Rational(n2) + l2;
            const Rational E = Rational(p) * Q(a - ip, b - ip);
            const Rational w(std::min(n1, n2));
            acc.add(E, w);
            acc.add(E + 2 * a - b, -w);
            acc.add(E + 2 * b - a, -w);
            acc.add(E + 3 * a, w);
            acc.add(E + 3 * b, w);
            acc.add(E + 2 * a + 2 * b, -w);
        }
    return acc.done();
}

PuiseuxSeries G_frak_rewrite_p2(const Rational &l1, const Rational &l2, const Rational &order)
{
    // 2Q(y) >= |y|^2
    const std::int64_t R = radius(1.0, 0.0, order);
    Acc acc{{}, order};
    const std::int64_t top1 = R + ceil_int(l1.abs()) + 1, top2 = R + ceil_int(l2.abs()) + 1;
    for (std::int64_t n1 = 0; n1 <= top1; ++n1)
        for (std::int64_t n2 = 0; n2 <= top2; ++n2) {
            const Rational a = Rational(n1) + l1, b = Rational(n2) + l2;
            acc.add(2 * Q(a + kHalf, b + kHalf), 1);
            if (n2 > n1) acc.add(2 * Q(a + kHalf, b), -1);
            if (n1 > n2) acc.add(2 * Q(a, b + kHalf), -1);
        }
    return acc.done();
}

PuiseuxSeries G_frak_closed_p2(std::int64_t r1, std::int64_t r2, const Rational &order, ClosedForm form)
{
    // quadratic part n1^2/2 + n1 n2 + 2 n2^2 has smallest eigenvalue (5 - sqrt 13)/4
    const double m = (5.0 - std::sqrt(13.0)) / 4.0;
    const double lin = std::abs(0.5 + r1) + std::abs(2.0 * r2 + 2.0);
    const Rational c = Rational(r2) + kHalf;
    const std::int64_t R = radius(m, lin, order - c);
    Acc acc{{}, order};
    for (std::int64_t n1 = -R; n1 <= R; ++n1)
        for (std::int64_t n2 = -R; n2 <= R; ++n2) {
            int w = 0;
            switch (form) {
            case ClosedForm::Rho: w = n1 >= 0 ? rho(n2, n2 + r2) : 0; break;
            case ClosedForm::RhoRho: w = rho(n1, n2 + r1) * rho(n2 + r2, n2); break;
            case ClosedForm::Split: w = (n1 >= 0 && n2 >= 0) || (n1 < 0 && n2 < -r2) ? 1 : 0; break;
            }
            if (w == 0) continue;
            if (n1 % 2 != 0) w = -w;
            const Rational e = Rational(n1 * (n1 + 1), 2) + Rational(n1 * n2 + 2 * n2 * n2 + r1 * n1 + 2 * r2 * n2 + 2 * n2) + c;
            acc.add(e, w);
        }
    return acc.done();
}

PuiseuxSeries coeff_F(std::int64_t r1, std::int64_t r2, int p, const Rational &order)
{
    require_p(p);
    const Rational ip(1, p);
    const std::int64_t R = radius(p / 2.0, 0.0, order);
    static constexpr std::array<int, 6> sign{1, -1, -1, 1, 1, -1};
    Acc acc{{}, order};
    for (std::int64_t n1 = -R; n1 <= R + 1; ++n1)
        for (std::int64_t n2 = -R; n2 <= R + 1; ++n2) {
            const Rational E = Rational(p) * Q(Rational(n1) - ip, Rational(n2) - ip);
            if (E >= order) continue;
            const std::array<std::array<std::int64_t, 2>, 6> a{{
                {n1 - 1, n2 - 1},
                {-n1 + n2 - 1, n2 - 1},
                {n1 - 1, -n2 + n1 - 1},
                {-n2 - 1, -n2 + n1 - 1},
                {-n1 + n2 - 1, -n1 - 1},
                {-n2 - 1, -n1 - 1},
            }};
            for (std::size_t j = 0; j < 6; ++j) {
                const std::int64_t l1 = a[j][0] - r1, l2 = a[j][1] - r2;
                if (l1 < 0 || l2 < 0) continue;
                acc.add(E, Rational(sign[j] * (std::min(l1, l2) + 1)));
            }
        }
    return acc.done();
}

PuiseuxSeries F_constant_term(int p, const Rational &order)
{
    require_p(p);
    // (p/3) Q*(n) - n1 - n2 >= (p/6)|n|^2 - sqrt(2)|n|
    const std::int64_t R = radius(p / 6.0, 1.5, order);
    Acc acc{{}, order};
    for (std::int64_t n1 = 1; n1 <= R; ++n1)
        for (std::int64_t n2 = 1; n2 <= R; ++n2) {
            if ((n1 - n2) % 3 != 0) continue;
            const Rational base = Rational(p, 3) * Qstar(n1, n2) - Rational(n1 + n2) + Rational(1, p);
            const std::int64_t parts[3] = {n1, n2, n1 + n2};
            for (int mask = 0; mask < 8; ++mask) {
                std::int64_t extra = 0;
                int s = 1;
                for (int i = 0; i < 3; ++i)
                    if (mask & (1 << i)) extra += parts[i], s = -s;
                acc.add(base + Rational(extra), Rational(s * std::min(n1, n2)));
            }
        }
    return acc.done();
}

PuiseuxSeries partial_theta_A2(const Rational &l1, const Rational &l2, int p, const Rational &order)
{
    require_p(p);
    const Rational ip(1, p);
    const std::int64_t R = radius(p / 2.0, 0.0, order);
    Acc acc{{}, order};
    for (std::int64_t n1 = 0; n1 <= R + ceil_int(ip - l1); ++n1)
        for (std::int64_t n2 = 0; n2 <= R + ceil_int(ip - l2); ++n2)
            acc.add(Rational(p) * Q(Rational(n1) + l1 - ip, Rational(n2) + l2 - ip), Rational(std::min(n1, n2)));
    return acc.done();
}

namespace {

class HyperS {
public:
    explicit HyperS(const Rational &order) : L_{static_cast<std::size_t>(std::max<std::int64_t>(ceil_int(order), 1))}
    {
        inv_ = inverse_pochhammers(L_);
    }

    std::size_t size() const { return L_; }

    const Dense &operator()(std::int64_t m)
    {
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
        Dense s(L_);
        for (std::size_t n = 0; n < L_; ++n) {
            Dense t = dense_mul(inv(n), inv(n + static_cast<std::size_t>(m)));
            for (std::size_t e = 0; e + n < L_; ++e) s[e + n] = s[e + n] + t[e];
        }
        return cache_.emplace(m, std::move(s)).first->second;
    }

private:
    const Dense &inv(std::size_t k) const { return inv_[std::min(k, L_ - 1)]; }

    std::size_t L_;
    std::vector<Dense> inv_;
    std::map<std::int64_t, Dense> cache_;
};

PuiseuxSeries from_dense(const Dense &d, const Rational &shift, const Rational &order)
{
    std::vector<Term> v;
    for (std::size_t e = 0; e < d.size(); ++e)
        if (!d[e].is_zero()) v.push_back({Rational(static_cast<std::int64_t>(e)) + shift, d[e]});
    return PuiseuxSeries::from_terms(std::move(v), order);
}

} // namespace

PuiseuxSeries hyper_S(std::int64_t m, const Rational &order)
{
    if (m < 0) throw PreconditionError("hyper_S: m must be non-negative");
    HyperS S(order);
    return from_dense(S(m), 0, order);
}

PuiseuxSeries G_hyper(std::int64_t r1, std::int64_t r2, const Rational &order)
{
    HyperS S(order);
    // (|n4-r1| + |n4-r2| + |n4|)/2 < order bounds n4
    const std::int64_t B = floor_int((2 * order + Rational(std::abs(r1) + std::abs(r2))) / 3) + 1;
    std::vector<Term> v;
    for (std::int64_t n4 = -B; n4 <= B; ++n4) {
        const std::int64_t a = std::abs(n4 - r1), b = std::abs(n4 - r2), c = std::abs(n4);
        const Rational shift(a + b + c, 2);
        if (shift >= order) continue;
        Dense prod = dense_mul(dense_mul(S(a), S(b)), S(c));
        for (std::size_t e = 0; e < prod.size(); ++e)
            if (!prod[e].is_zero()) v.push_back({Rational(static_cast<std::int64_t>(e)) + shift, prod[e]});
    }
    return PuiseuxSeries::from_terms(std::move(v), order);
}

namespace {

void require_h_index(const Rational &r1, const Rational &r2)
{
    if ((r1 - kHalf).is_integer() && r2.is_integer()) return;
    throw PreconditionError("H_frak needs r1 in 1/2 + Z and r2 in Z");
}

} // namespace

PuiseuxSeries H_frak(const Rational &r1, const Rational &r2, const Rational &order)
{
    require_h_index(r1, r2);
    const Rational W = max(r1.abs().ceil(), r2.abs()) + 1;
    for (Rational extra = 0; extra <= 8; extra = extra + 2) {
        // f in the wide annulus, then zeta2 -> zeta2 / q lands in the inner one
        const BiLaurentSeries f = f_series(order + Rational(3, 8) + W + extra, W, Region::Wide);
        BiLaurentSeries s = bl_elliptic_shift(f, 0, -1).retagged(Region::Inner);
        s = s.times_monomial({kHalf, 1}).scaled(1, -1);
        const PuiseuxSeries c = bl_coeff(s, r1, r2).shifted(kHalf);
        // a negative valuation of c eats into the eta factor's precision
        const PuiseuxSeries eta = eta5_over_eta2(order - min(c.valuation(), Rational(0)));
        PuiseuxSeries h = mul_truncated(c, eta, order);
        if (h.order() >= order) return h;
    }
    throw std::logic_error("H_frak: could not reach the requested order");
}

namespace {

// One theta quotient factor along a single variable u, without u^{1/2}/(1-u):
// numer(u) q^{-1/8} / ((u q, u^-1 q; q)_inf (q;q)_inf), keyed by the u exponent.
std::map<Rational, PuiseuxSeries> quotient_factor(bool odd, const Rational &order)
{
    const Rational inner = order + Rational(1, 8);
    BiLaurentSeries denom = BiLaurentSeries::monomial(1, {0, 0}, 0, inner, Region::Inner);
    for (std::int64_t n = 1; Rational(n) < inner; ++n) {
        denom = denom * expand_inverse_one_minus(Unit::Z1, n, Region::Inner, inner);
        denom = denom * expand_geometric(1, {-1, 0}, Rational(n), Region::Inner, inner);
    }
    const PuiseuxSeries scale = series_invert(pochhammer(1, 1, 1, kInfinite, inner)).shifted(Rational(-1, 8));
    denom = bl_scale(denom, scale);
    const BiLaurentSeries numer = odd ? theta_hat(Unit::Z1, 2, inner) : theta01(Unit::Z1, 2, inner);
    std::map<Rational, PuiseuxSeries> out;
    const BiLaurentSeries t = numer * denom;
    for (const auto &[k, c] : t.terms()) out.emplace(k.e1, c);
    return out;
}

// coefficient of u^m in u^{1/2}/(1-u) T(u), expanded in non-negative powers of u
PuiseuxSeries with_pole(const std::map<Rational, PuiseuxSeries> &T, const Rational &m, const Rational &order)
{
    PuiseuxSeries acc(order);
    const Rational top = m - kHalf;
    for (const auto &[e, c] : T) {
        if (e > top) break;
        if ((top - e).is_integer()) acc = acc + c;
    }
    return acc;
}

} // namespace

PuiseuxSeries H_frak_direct(const Rational &r1, const Rational &r2, const Rational &order)
{
    require_h_index(r1, r2);
    const Rational inner = order + 1;
    const auto T1 = quotient_factor(true, inner);
    const auto T2 = quotient_factor(false, inner);
    const auto &T12 = T2;
    if (T1.empty() || T2.empty()) return PuiseuxSeries(order);
    const Rational lo = T12.begin()->first + kHalf;
    const Rational hi = min(r1 - T1.begin()->first, r2 - T2.begin()->first) - kHalf;
    PuiseuxSeries acc(inner);
    for (Rational k = lo; k <= hi; k = k + 1) {
        PuiseuxSeries c = with_pole(T12, k, inner);
        if (c.is_zero()) continue;
        c = c * with_pole(T1, r1 - k, inner);
        if (c.is_zero()) continue;
        acc = acc + c * with_pole(T2, r2 - k, inner);
    }
    PuiseuxSeries h = mul_truncated(acc, eta5_over_eta2(inner), order);
    if (h.order() < order) throw std::logic_error("H_frak_direct: internal order shortfall");
    return h;
}

std::string_view to_string(F0Form f) { return f == F0Form::General ? "GENERAL" : "P2SIMPLIFIED"; }

F0Form parse_f0_form(std::string_view s)
{
    if (s == "GENERAL") return F0Form::General;
    if (s == "P2SIMPLIFIED") return F0Form::P2Simplified;
    throw PreconditionError("unknown F0 form: " + std::string(s));
}

PuiseuxSeries F0_series(int p, const Rational &order, F0Form form)
{
    require_p(p);
    if (form == F0Form::P2Simplified && p != 2) throw PreconditionError("P2SIMPLIFIED form requires p = 2");
    const Rational ip(1, p);
    const std::int64_t R = radius(p / 2.0, 0.0, order);
    Acc acc{{}, order};
    for (std::int64_t n1 = -R; n1 <= R + 1; ++n1)
        for (std::int64_t n2 = -R; n2 <= R + 1; ++n2) {
            const Rational E = Rational(p) * Q(Rational(n1) - ip, Rational(n2) - ip);
            if (form == F0Form::General)
                acc.add(E, Rational((2 * n1 - n2) * (2 * n2 - n1) * (n1 + n2), 2));
            else
                acc.add(E, Rational(12 * n1 * n2 - 3 * n1 * n1 - 3 * n2 * n2 - n1 - n2, 4));
        }
    return acc.done();
}

PuiseuxSeries f0_vanishing_sum(const Rational &order)
{
    const std::int64_t R = radius(1.0, 0.0, order);
    Acc acc{{}, order};
    for (std::int64_t n1 = -R; n1 <= R + 1; ++n1)
        for (std::int64_t n2 = -R; n2 <= R + 1; ++n2)
            acc.add(2 * Q(Rational(n1) - kHalf, Rational(n2) - kHalf), Rational(n1 + n2 - 1));
    return acc.done();
}

PuiseuxSeries rank_one_coeff(int p, std::int64_t r, const Rational &order)
{
    require_p(p);
    const Rational c(p - 1, 2 * p);
    // p(n + c)^2 >= p(|n| - 1)^2
    const std::int64_t B = radius(static_cast<double>(p), 0.0, order) + 1;
    const std::int64_t ar = std::abs(r);
    Acc acc{{}, order};
    for (std::int64_t n = -B; n <= B; ++n) {
        const Rational x = Rational(n) + c;
        if (n >= ar) acc.add(Rational(p) * x * x, 1);
        else if (n <= -ar - 1) acc.add(Rational(p) * x * x, -1);
    }
    return acc.done();
}

PuiseuxSeries rogers_false_theta(const Rational &order)
{
    Acc acc{{}, order};
    for (std::int64_t n = 0; Rational(n * (n + 1), 2) < order; ++n) acc.add(Rational(n * (n + 1), 2), n % 2 == 0 ? 1 : -1);
    return acc.done();
}

PuiseuxSeries vanishing_sum(std::int64_t k, const Rational &order)
{
    const double a = std::abs(static_cast<double>(k)) + 0.5;
    const double o = std::max(0.0, order.to_double());
    const auto B = static_cast<std::int64_t>(std::ceil(a + std::sqrt(a * a + 2.0 * o))) + 1;
    Acc acc{{}, order};
    for (std::int64_t n = -B; n <= B; ++n) acc.add(Rational(n * (n + 1), 2) + Rational(k * n), n % 2 == 0 ? 1 : -1);
    return acc.done();
}

} // namespace ftlab
