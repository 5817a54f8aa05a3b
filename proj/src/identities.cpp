#include "ftlab/identities.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <set>
#include <thread>

#include "ftlab/falsetheta.hpp"
#include "ftlab/thetas.hpp"

namespace ftlab {

using json = nlohmann::json;

namespace {

const Rational kHalf(1, 2);

// ---- parameter decoding -------------------------------------------------

Rational rat_of(const json &j)
{
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception &e) {
            throw PreconditionError(std::string("bad rational parameter: ") + e.what());
        }
    }
    throw PreconditionError("parameter value " + j.dump() + " is not an integer or \"n/d\" string");
}

std::int64_t int_of(const json &j)
{
    Rational r = rat_of(j);
    if (!r.is_integer()) throw PreconditionError("parameter value " + j.dump() + " must be an integer");
    return r.to_int64();
}

const json &field(const json &p, const char *key)
{
    if (!p.contains(key)) throw PreconditionError(std::string("missing parameter '") + key + "'");
    return p.at(key);
}

// A scalar or a list of scalars.
std::vector<json> items(const json &v)
{
    if (v.is_array()) return {v.begin(), v.end()};
    return {v};
}

std::vector<std::int64_t> ints(const json &p, const char *key)
{
    std::vector<std::int64_t> out;
    for (const auto &x : items(field(p, key))) out.push_back(int_of(x));
    return out;
}

std::vector<std::string> strings(const json &p, const char *key)
{
    std::vector<std::string> out;
    for (const auto &x : items(field(p, key))) {
        if (!x.is_string()) throw PreconditionError(std::string("parameter '") + key + "' expects strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

// One pair [a, b] or a list of pairs.
std::vector<std::pair<Rational, Rational>> pairs(const json &p, const char *key)
{
    const json &v = field(p, key);
    auto one = [&](const json &x) {
        if (!x.is_array() || x.size() != 2) throw PreconditionError(std::string("parameter '") + key + "' expects pairs");
        return std::pair{rat_of(x[0]), rat_of(x[1])};
    };
    std::vector<std::pair<Rational, Rational>> out;
    if (v.is_array() && v.size() == 2 && !v[0].is_array()) {
        out.push_back(one(v));
        return out;
    }
    if (!v.is_array()) throw PreconditionError(std::string("parameter '") + key + "' expects pairs");
    for (const auto &x : v) out.push_back(one(x));
    return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> int_pairs(const json &p, const char *key)
{
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (const auto &[a, b] : pairs(p, key)) {
        if (!a.is_integer() || !b.is_integer()) throw PreconditionError(std::string("parameter '") + key + "' expects integer pairs");
        out.emplace_back(a.to_int64(), b.to_int64());
    }
    return out;
}

Unit unit_of(const std::string &s)
{
    try {
        return parse_unit(s);
    } catch (const std::invalid_argument &e) {
        throw PreconditionError(e.what());
    }
}

json int_grid(std::int64_t lo, std::int64_t hi)
{
    json g = json::array();
    for (std::int64_t a = lo; a <= hi; ++a)
        for (std::int64_t b = lo; b <= hi; ++b) g.push_back({a, b});
    return g;
}

json int_range(std::int64_t lo, std::int64_t hi)
{
    json g = json::array();
    for (std::int64_t a = lo; a <= hi; ++a) g.push_back(a);
    return g;
}

std::string pair_label(const Rational &a, const Rational &b) { return "(" + a.to_string() + "," + b.to_string() + ")"; }

Comparison cmp(std::string label, AnySeries lhs, AnySeries rhs) { return {std::move(label), std::move(lhs), std::move(rhs)}; }

// ---- shared builders ----------------------------------------------------

PuiseuxSeries eta5_times(const PuiseuxSeries &c, const Rational &order)
{
    return mul_truncated(c, eta5_over_eta2(order), order);
}

std::int64_t crude_bound(const Rational &order) { return static_cast<std::int64_t>(4.0 * std::sqrt(order.to_double() + 4.0)) + 8; }

// sum_{n1 >= 0, n2} sgn*(n2) (-1)^n1 q^{n1(n1+1)/2 + n1 n2 + 2 n2^2 + 2 n2 + shift},
// summed over a fixed generous box.
PuiseuxSeries sgn_double_sum(const Rational &shift, const Rational &order)
{
    const std::int64_t B = crude_bound(order);
    std::vector<Term> t;
    for (std::int64_t n1 = 0; n1 <= B; ++n1)
        for (std::int64_t n2 = -B; n2 <= B; ++n2) {
            Rational e = Rational(n1 * (n1 + 1), 2) + Rational(n1 * n2 + 2 * n2 * n2 + 2 * n2) + shift;
            if (e >= order) continue;
            int s = (n2 >= 0 ? 1 : -1) * (n1 % 2 ? -1 : 1);
            t.push_back({e, s});
        }
    return PuiseuxSeries::from_terms(std::move(t), order);
}

// G_r(q^2), exact below `order`.
PuiseuxSeries G_hyper_q2(std::int64_t r1, std::int64_t r2, const Rational &order)
{
    return series_scale_q(G_hyper(r1, r2, order / 2), 2);
}

// sum_n zeta1^n / (1 - zeta2 q^n) over |n| <= W.
BiLaurentSeries jk_geometric(const Rational &order, const Rational &W)
{
    BiLaurentSeries acc = expand_inverse_one_minus(Unit::Z2, 0, Region::Inner, order, W);
    const std::int64_t w = W.floor().to_int64();
    for (std::int64_t n = -w; n <= w; ++n) {
        if (n == 0) continue;
        acc = acc + expand_inverse_one_minus(Unit::Z2, n, Region::Inner, order).times_monomial({n, 0}).restricted(W);
    }
    return acc;
}

BiLaurentSeries jk_rho(const Rational &order, const Rational &W)
{
    const std::int64_t w = W.floor().to_int64();
    BiLaurentSeries::TermMap t;
    for (std::int64_t a = -w; a <= w; ++a)
        for (std::int64_t b = -w; b <= w; ++b) {
            int s = rho(a, b);
            if (s == 0 || Rational(a * b) >= order) continue;
            t.emplace(Key{a, b}, PuiseuxSeries::monomial(s, a * b, order));
        }
    return BiLaurentSeries::from_terms(std::move(t), order, Region::Inner, W);
}

// sum_n (-1)^n q^{n(n+1)/2} / (1 - zeta q^n) in zeta1.
BiLaurentSeries pf_geometric(const Rational &order, const Rational &W)
{
    BiLaurentSeries acc = expand_inverse_one_minus(Unit::Z1, 0, Region::Inner, order, W);
    for (std::int64_t n = 1;; ++n) {
        bool any = false;
        for (std::int64_t m : {n, -n}) {
            Rational e(m * (m + 1), 2);
            if (e >= order) continue;
            any = true;
            auto g = expand_inverse_one_minus(Unit::Z1, m, Region::Inner, order - e);
            acc = acc + g.scaled(m % 2 ? -1 : 1, e).restricted(W);
        }
        if (!any) break;
    }
    return acc;
}

BiLaurentSeries pf_rho(const Rational &order, const Rational &W)
{
    const std::int64_t w = W.floor().to_int64();
    const std::int64_t B = static_cast<std::int64_t>(std::sqrt(2.0 * order.to_double())) + 2;
    BiLaurentSeries::TermMap t;
    for (std::int64_t m = -w; m <= w; ++m) {
        std::vector<Term> c;
        for (std::int64_t n = -B; n <= B; ++n) {
            int s = rho(n, m);
            if (s == 0) continue;
            Rational e = Rational(n * (n + 1), 2) + Rational(n * m);
            if (e < order) c.push_back({e, n % 2 ? -s : s});
        }
        auto cs = PuiseuxSeries::from_terms(std::move(c), order);
        if (!cs.is_zero()) t.emplace(Key{m, 0}, std::move(cs));
    }
    return BiLaurentSeries::from_terms(std::move(t), order, Region::Inner, W);
}

BiLaurentSeries weyl_denominator_poly(const Rational &order)
{
    auto bin = [&](const Key &k) {
        return BiLaurentSeries::monomial(1, {0, 0}, 0, order, Region::Inner) -
               BiLaurentSeries::monomial(1, k, 0, order, Region::Inner);
    };
    return bin({-1, 0}) * bin({0, -1}) * bin({-1, -1});
}

// The six-term numerator of F's summand at n.
BiLaurentSeries f_summand_numerator(std::int64_t n1, std::int64_t n2, const Rational &order)
{
    const std::array<std::pair<Key, int>, 6> parts{{
        {{n1 - 1, n2 - 1}, 1},
        {{-n1 + n2 - 1, n2 - 1}, -1},
        {{n1 - 1, -n2 + n1 - 1}, -1},
        {{-n2 - 1, -n2 + n1 - 1}, 1},
        {{-n1 + n2 - 1, -n1 - 1}, 1},
        {{-n2 - 1, -n1 - 1}, -1},
    }};
    BiLaurentSeries acc(order, Region::Inner);
    for (const auto &[k, s] : parts) acc = acc + BiLaurentSeries::monomial(s, k, 0, order, Region::Inner);
    return acc;
}

// ---- the cases ----------------------------------------------------------

std::vector<Comparison> e1(const json &P, const Rational &N)
{
    std::vector<Comparison> out;
    for (auto k : ints(P, "k")) {
        if (k < 1) throw PreconditionError("k must be positive");
        for (const auto &us : strings(P, "unit")) {
            Unit u = unit_of(us);
            std::string tag = " k=" + std::to_string(k) + " " + us;
            out.push_back(cmp("theta_hat" + tag, theta_hat(u, int(k), N, std::nullopt, ThetaForm::Sum),
                              theta_hat(u, int(k), N)));
            out.push_back(cmp("theta01" + tag, theta01(u, int(k), N, std::nullopt, ThetaForm::Sum),
                              theta01(u, int(k), N)));
        }
    }
    return out;
}

std::vector<Comparison> e2(const json &P, const Rational &N)
{
    const Rational W = rat_of(field(P, "window"));
    std::vector<Comparison> out;
    for (auto m : ints(P, "m"))
        for (auto l : ints(P, "l")) {
            if (W < Rational(std::abs(m))) throw PreconditionError("window must be at least |m|");
            const Rational M = N + Rational(std::abs(m)) * W + Rational(m * m, 2) + 1;
            auto th = theta_hat(Unit::Z1, 1, M, W);
            auto lhs = bl_integer_shift(bl_elliptic_shift(th, m, 0), l, 0);
            int s = (m + l) % 2 ? -1 : 1;
            auto rhs = th.times_monomial({-m, 0}).scaled(s, Rational(-m * m, 2));
            out.push_back(cmp("m=" + std::to_string(m) + " l=" + std::to_string(l), lhs, rhs));
        }
    return out;
}

std::vector<Comparison> e3(const json &P, const Rational &N)
{
    const Rational margin = rat_of(field(P, "margin"));
    const Rational M = N + 1;
    auto th12 = theta_hat(Unit::Z1, 1, M) * theta_hat(Unit::Z2, 1, M);
    const Rational W = th12.reach().ceil() + margin;
    auto geo = jk_geometric(M, W);
    auto dbl = jk_rho(M, W);
    auto eta3 = series_pow(eta_series(1, M), 3);
    std::vector<Comparison> out;
    out.push_back(cmp("geometric = rho double sum", geo, dbl));
    out.push_back(cmp("theta1 theta2 * sum = eta^3 theta12", th12 * dbl, bl_scale(theta_hat(Unit::Z12, 1, M), eta3)));
    return out;
}

std::vector<Comparison> e4(const json &P, const Rational &N)
{
    const Rational margin = rat_of(field(P, "margin"));
    const Rational M = N + 1;
    auto th = theta_hat(Unit::Z1, 1, M);
    const Rational W = th.reach().ceil() + margin;
    auto geo = pf_geometric(M, W);
    auto dbl = pf_rho(M, W);
    auto eta3 = series_pow(eta_series(1, M), 3);
    auto rhs = bl_scale(BiLaurentSeries::monomial(1, {-kHalf, 0}, 0, M, Region::Inner), eta3);
    std::vector<Comparison> out;
    out.push_back(cmp("geometric = rho double sum", geo, dbl));
    out.push_back(cmp("theta * sum = eta^3 zeta^-1/2", th * dbl, rhs));
    return out;
}

std::vector<Comparison> e5(const json &P, const Rational &N)
{
    std::vector<Comparison> out;
    for (const auto &us : strings(P, "unit")) {
        Unit u = unit_of(us);
        Key dir = unit_key(u);
        out.push_back(cmp("ratio " + us, theta_hat(u, 2, N), theta_hat(u, 1, N) * theta_ratio(dir, PairForm::Geometric, N)));
        out.push_back(cmp("cross-multiplied " + us, theta_hat(u, 2, N) * pair_product(dir, N),
                          bl_scale(theta_hat(u, 1, N), theta_ratio_prefactor(N))));
    }
    const EtaFactor fs[] = {{2, 1}, {1, -1}};
    out.push_back(cmp("prefactor", theta_ratio_prefactor(N), eta_quotient(fs, N - Rational(1, 12)).shifted(Rational(1, 12))));
    return out;
}

std::vector<Comparison> pair_forms(const json &P, const Rational &N, PairForm other)
{
    std::vector<Comparison> out;
    for (const auto &us : strings(P, "unit")) {
        Key dir = unit_key(unit_of(us));
        auto g = inverse_pair(dir, PairForm::Geometric, N);
        out.push_back(cmp(std::string(to_string(other)) + " " + us, g, inverse_pair(dir, other, N)));
        if (other == PairForm::Pochhammer)
            out.push_back(cmp("MIDDLE " + us, g, inverse_pair(dir, PairForm::Middle, N)));
    }
    out.push_back(cmp("f", f_series(N), f_series(N, std::nullopt, Region::Inner, other)));
    return out;
}

std::vector<Comparison> e6(const json &P, const Rational &N) { return pair_forms(P, N, PairForm::Pochhammer); }
std::vector<Comparison> e6b(const json &P, const Rational &N) { return pair_forms(P, N, PairForm::Quadratic); }

std::vector<Comparison> e7(const json &P, const Rational &N)
{
    std::vector<Comparison> out;
    for (auto p : ints(P, "p")) {
        if (p < 2) throw PreconditionError("p must be at least 2");
        for (auto [r1, r2] : int_pairs(P, "r"))
            out.push_back(cmp("p=" + std::to_string(p) + " r=" + pair_label(r1, r2), coeff_F(r1, r2, int(p), N),
                              G_frak(r1, r2, int(p), N)));
    }
    return out;
}

std::vector<Comparison> e8(const json &P, const Rational &N)
{
    std::vector<Comparison> out;
    for (const auto &[a, b] : pairs(P, "lambda"))
        out.push_back(cmp("lambda=" + pair_label(a, b), G_frak_rewrite_p2(a, b, N), G_frak(a, b, 2, N)));
    return out;
}

std::vector<Comparison> e9(const json &P, const Rational &N)
{
    auto f = f_series(N);
    std::vector<Comparison> out;
    for (auto [r1, r2] : int_pairs(P, "r"))
        out.push_back(cmp("r=" + pair_label(r1, r2), eta5_times(bl_coeff(f, r1, r2), N), G_frak_closed_p2(r1, r2, N)));
    return out;
}

std::vector<Comparison> e10(const json &P, const Rational &N)
{
    auto f = f_series(N);
    std::vector<Comparison> out;
    for (auto [r1, r2] : int_pairs(P, "r")) {
        const Rational shift = Rational(2, 3) * Q(r1, r2);
        const Rational l1 = Rational(r1 + r2, 3), l2 = Rational(2 * r2 - r1, 3);
        out.push_back(cmp("r=" + pair_label(r1, r2), G_frak(l1, l2, 2, N + shift).shifted(-shift),
                          eta5_times(bl_coeff(f, r1, r2), N)));
    }
    return out;
}

std::vector<Comparison> e11(const json &P, const Rational &N)
{
    auto f = f_series(N);
    std::vector<Comparison> out;
    for (auto [r1, r2] : int_pairs(P, "r")) {
        const Rational s = 2 * Q(r1, r2);
        auto rhs = eta5_times(bl_coeff(f, 2 * r1 - r2, r1 + r2), N).shifted(s).truncated(N);
        out.push_back(cmp("r=" + pair_label(r1, r2), coeff_F(r1, r2, 2, N), rhs));
    }
    return out;
}

std::vector<Comparison> e12(const json &P, const Rational &N)
{
    std::vector<Comparison> out;
    for (const auto &a : items(field(P, "r1")))
        for (auto b : ints(P, "r2")) {
            const Rational r1 = rat_of(a), r2(b);
            if ((r1 - kHalf).is_integer() == false) throw PreconditionError("r1 must lie in 1/2 + Z");
            const Rational shift = Rational(2, 3) * Q(r1, r2);
            const Rational l1 = (r1 + r2) / 3 - kHalf, l2 = (2 * r2 - r1) / 3 - kHalf;
            auto g = G_frak(l1, l2, 2, N + shift).shifted(-shift);
            out.push_back(cmp("shifted f r=" + pair_label(r1, r2), H_frak(r1, r2, N), g));
            out.push_back(cmp("direct quotient r=" + pair_label(r1, r2), H_frak_direct(r1, r2, N), g));
        }
    return out;
}

std::vector<Comparison> e12b(const json &P, const Rational &N)
{
    const Rational margin = rat_of(field(P, "margin"));
    const Rational M = N + 2;
    auto th3 = theta_hat(Unit::Z1, 1, M) * theta_hat(Unit::Z2, 1, M) * theta_hat(Unit::Z12, 1, M);
    const Rational W = th3.reach().ceil() + margin + 1;
    auto f = f_series(M + W + 1, W, Region::Wide);
    auto shifted = bl_elliptic_shift(f, 0, -1).retagged(Region::Inner).times_monomial({kHalf, 1}).scaled(-1, -kHalf);
    auto rhs = -(theta_hat(Unit::Z1, 2, M) * theta01(Unit::Z2, 2, M) * theta01(Unit::Z12, 2, M));
    std::vector<Comparison> out;
    out.push_back(cmp("shifted f * theta^3 = theta(2tau) theta01 theta01", shifted * th3, rhs));
    return out;
}

std::vector<Comparison> e13(const json &, const Rational &N)
{
    std::vector<Comparison> out;
    out.push_back(cmp("constant term", eta5_times(f_coeff(0, 0, N), N), sgn_double_sum(kHalf, N)));
    return out;
}

std::vector<Comparison> e14(const json &P, const Rational &N)
{
    const EtaFactor inv_fs[] = {{1, -2}, {2, -2}};
    const EtaFactor f_fs[] = {{1, 3}, {2, -3}};
    auto inv = eta_quotient(inv_fs, N + 1);
    auto e33 = eta_quotient(f_fs, N + 1);
    const Rational M2 = 2 * N;
    auto six = inverse_pair({1, 0}, PairForm::Geometric, M2) * inverse_pair({0, 1}, PairForm::Geometric, M2) *
               inverse_pair({1, 1}, PairForm::Geometric, M2);
    auto f = f_series(N + 1);
    std::vector<Comparison> out;
    for (auto [r1, r2] : int_pairs(P, "r")) {
        const std::string tag = " r=" + pair_label(r1, r2);
        const Rational s = Rational(2, 3) * Q(r1, r2) + Rational(1, 4);
        const Rational l1 = Rational(r1 + r2, 3), l2 = Rational(2 * r2 - r1, 3);
        auto g = G_frak(l1, l2, 2, N + s + 1).shifted(-s);
        auto Gq2 = G_hyper_q2(r1, r2, N);
        out.push_back(cmp("G_frak normalization" + tag, mul_truncated(g, inv, N), Gq2));
        out.push_back(cmp("six-fold product" + tag, series_scale_q(bl_coeff(six, r1, r2), kHalf), G_hyper(r1, r2, N)));
        out.push_back(cmp("coefficient of f" + tag,
                          mul_truncated(bl_coeff(f, r1, r2), e33, N + Rational(1, 4)).shifted(-Rational(1, 4)).truncated(N), Gq2));
    }
    return out;
}

std::vector<Comparison> e15(const json &, const Rational &N)
{
    auto p1 = series_invert(pochhammer(1, 1, 1, kInfinite, N));
    auto p2 = series_invert(pochhammer(1, 2, 2, kInfinite, N));
    auto lhs = mul_truncated(sgn_double_sum(0, N), p1 * p1 * p2 * p2, N);
    auto rhs = G_hyper_q2(0, 0, N);
    // the proof's form: both sides multiplied by (q;q)^2 (q^2;q^2)^2
    const EtaFactor fs[] = {{1, 2}, {2, 2}};
    auto cleared = mul_truncated(G_hyper_q2(0, 0, N + 1), eta_quotient(fs, N + 1), N + 1).shifted(-Rational(1, 4));
    auto ct = eta5_times(f_coeff(0, 0, N + 1), N + 1).shifted(-kHalf);
    std::vector<Comparison> out;
    out.push_back(cmp("double sum = quadruple sum (q^2)", lhs, rhs));
    out.push_back(cmp("cleared quadruple sum = constant term of f", cleared, ct));
    return out;
}

std::vector<Comparison> e15b(const json &P, const Rational &N)
{
    const EtaFactor fs[] = {{1, 2}, {2, 2}};
    auto eta = eta_quotient(fs, N + 1);
    std::vector<Comparison> out;
    for (auto [r1, r2] : int_pairs(P, "r")) {
        const Rational s = 2 * Q(r1, r2);
        const Rational need = max(N - s, Rational(0)) + 1;
        auto rhs = mul_truncated(G_hyper_q2(2 * r1 - r2, r1 + r2, need), eta, need).shifted(s).truncated(N);
        auto lhs = coeff_F(r1, r2, 2, N + Rational(1, 4)).shifted(-Rational(1, 4)).truncated(N);
        out.push_back(cmp("r=" + pair_label(r1, r2), lhs, rhs));
    }
    return out;
}

// w is zeta1; every w-power comes with at least the same power of q.
std::vector<Comparison> e16(const json &, const Rational &N)
{
    const Region I = Region::Inner;
    auto one = BiLaurentSeries::monomial(1, {0, 0}, 0, N, I);
    auto binom = [&](int c, std::int64_t we, std::int64_t qe) {
        return one - BiLaurentSeries::monomial(c, {we, 0}, qe, N, I);
    };
    auto inv_plus = [&](std::int64_t j) { return expand_geometric(-1, {1, 0}, j, I, N); };

    BiLaurentSeries A = one;
    BiLaurentSeries D = inv_plus(1);
    BiLaurentSeries lhs(N, I);
    for (std::int64_t n = 0; Rational(n) < N; ++n) {
        if (n > 0) {
            A = A * binom(1, 0, 2 * n - 1) * binom(1, 1, 2 * n - 1);
            D = D * inv_plus(2 * n) * inv_plus(2 * n + 1);
        }
        lhs = lhs + (A * D).times_monomial({n, 0}).scaled(1, n).truncated(N);
    }
    BiLaurentSeries::TermMap t;
    for (std::int64_t n = 0; Rational(n * n + n) < N; ++n)
        t.emplace(Key{n, 0}, PuiseuxSeries::monomial(n % 2 ? -1 : 1, n * n + n, N));
    std::vector<Comparison> out;
    out.push_back(cmp("Warnaar", lhs, BiLaurentSeries::from_terms(std::move(t), N, I)));
    return out;
}

std::vector<Comparison> e17(const json &, const Rational &N)
{
    std::vector<Comparison> out;
    out.push_back(cmp("F0 = CT J", F0_series(2, N), bl_coeff(J_series(N), 0, 0)));
    return out;
}

std::vector<Comparison> e18(const json &, const Rational &N)
{
    std::vector<Comparison> out;
    out.push_back(cmp("GENERAL = P2SIMPLIFIED", F0_series(2, N), F0_series(2, N, F0Form::P2Simplified)));
    out.push_back(cmp("auxiliary sum vanishes", f0_vanishing_sum(N), PuiseuxSeries(N)));
    return out;
}

std::vector<Comparison> e19(const json &P, const Rational &N)
{
    const std::int64_t box = int_of(field(P, "box"));
    auto den = weyl_denominator_poly(N);
    std::vector<Comparison> out;
    for (std::int64_t n1 = -box; n1 <= box; ++n1)
        for (std::int64_t n2 = -box; n2 <= box; ++n2) {
            auto num = f_summand_numerator(n1, n2, N);
            out.push_back(cmp("divisible n=" + pair_label(n1, n2), laurent_poly_exact_divide(num, den) * den, num));
        }

    for (auto p : ints(P, "p")) {
        if (p < 2) throw PreconditionError("p must be at least 2");
        const Rational ip(1, p);
        const std::int64_t B = static_cast<std::int64_t>(std::sqrt(2.0 * N.to_double() / double(p))) + 3;
        BiLaurentSeries F(N, Region::Inner);
        for (std::int64_t n1 = -B; n1 <= B; ++n1)
            for (std::int64_t n2 = -B; n2 <= B; ++n2) {
                const Rational E = Rational(p) * Q(Rational(n1) - ip, Rational(n2) - ip);
                if (E >= N) continue;
                auto quo = laurent_poly_exact_divide(f_summand_numerator(n1, n2, N), den);
                F = F + quo.scaled(1, E).truncated(N);
            }
        for (auto [r1, r2] : int_pairs(P, "r"))
            out.push_back(cmp("assembled F p=" + std::to_string(p) + " r=" + pair_label(r1, r2), bl_coeff(F, r1, r2),
                              coeff_F(r1, r2, int(p), N)));
    }
    return out;
}

std::vector<Comparison> e20(const json &P, const Rational &N)
{
    std::vector<Comparison> out;
    for (auto k : ints(P, "k")) out.push_back(cmp("k=" + std::to_string(k), vanishing_sum(k, N), PuiseuxSeries(N)));
    return out;
}

std::vector<IdentityCase> make_registry()
{
    const json units = {"z1", "z2", "z12"};
    const json r2 = int_grid(-2, 2), r1 = int_grid(-1, 1);
    const json none = json::object();
    std::vector<IdentityCase> v;
    v.push_back({"E1", "theta sum form equals the triple product (theta_hat = i theta and theta01)",
                 {{"k", {1, 2}}, {"unit", units}}, 30, e1});
    v.push_back({"E2", "elliptic and integer shift of theta_hat: (-1)^(m+l) q^(-m^2/2) zeta^(-m) theta_hat",
                 {{"m", int_range(-2, 2)}, {"l", {0, 1}}, {"window", 6}}, 30, e2});
    v.push_back({"E3", "Jordan-Kronecker in INNER, theta_hat normalized: eta^3 theta_hat12/(theta_hat1 theta_hat2) = "
                       "sum zeta1^n/(1-zeta2 q^n) = rho double sum",
                 {{"margin", 3}}, 20, e3});
    v.push_back({"E4", "partial fraction in INNER: theta_hat * sum (-1)^n q^(n(n+1)/2)/(1-zeta q^n) = eta^3 zeta^(-1/2)",
                 {{"margin", 4}}, 20, e4});
    v.push_back({"E5", "theta(z;2tau)/theta(z;tau) closed form and q^(1/8)(-q;q) = q^(1/12) eta(2tau)/eta(tau)",
                 {{"unit", units}}, 30, e5});
    v.push_back({"E6", "inverse pair (q^2 normalization): geometric factors = closed double sum = middle form; f both ways",
                 {{"unit", units}}, 20, e6});
    v.push_back({"E6b", "inverse pair via the Ramanujan-type form; f both ways", {{"unit", units}}, 20, e6b});
    v.push_back({"E7", "coefficients of F equal the bracket sum G_frak_r", {{"p", {2, 3}}, {"r", r2}}, 20, e7});
    v.push_back({"E8", "three-sum rewrite of G_frak for p = 2",
                 {{"lambda", json::array({{0, 0}, {"1/3", "2/3"}, {"-1/2", "-1/2"}, {1, 0}, {"2/3", "1/3"}, {2, -1}})}},
                 20, e8});
    v.push_back({"E9", "eta^5/eta(2tau) coeff_r f equals the rho-weighted double sum", {{"r", r2}}, 20, e9});
    v.push_back({"E10", "q^(-2/3 Q(r)) G_frak at ((r1+r2)/3, (2r2-r1)/3) equals eta^5/eta(2tau) coeff_r f", {{"r", r2}}, 20, e10});
    v.push_back({"E11", "coeff_r F = q^(2Q(r)) eta^5/eta(2tau) coeff_(2r1-r2, r1+r2) f", {{"r", r2}}, 20, e11});
    v.push_back({"E12", "H_r through the shifted f and the direct quotient equals q^(-2/3 Q(r)) G_frak",
                 {{"r1", {"-3/2", "-1/2", "1/2", "3/2"}}, {"r2", int_range(-2, 2)}}, 15, e12});
    v.push_back({"E12b", "zeta2 -> q^-1 zeta2 shifted f times theta_hat^3 = -theta_hat(z1;2tau) theta01 theta01 (theta_hat normalized)",
                 {{"margin", 2}}, 10, e12b});
    v.push_back({"E13", "constant term of eta^5/eta(2tau) f as a sgn* double sum", none, 20, e13});
    v.push_back({"E14", "G_frak normalization = six-fold Pochhammer coefficient = G_r, with the q^2 scaling made explicit",
                 {{"r", r1}}, 15, e14});
    v.push_back({"E15", "double sgn* sum over (q;q)^2 (q^2;q^2)^2 = G_0(q^2); cleared of the products it is q^(-1/2) eta^5/eta(2tau) CT f", none, 30, e15});
    v.push_back({"E15b", "q^(-1/4) coeff_r F = eta^2 eta(2tau)^2 q^(2Q(r)) G_(2r1-r2, r1+r2)(q^2)", {{"r", r2}}, 30, e15b});
    v.push_back({"E16", "Warnaar's identity with w = zeta1; right side sum (-1)^n q^(n^2+n) w^n", none, 20, e16});
    v.push_back({"E17", "F0 = constant term of J", none, 15, e17});
    v.push_back({"E18", "p = 2 simplification of F0 and the vanishing auxiliary sum", none, 25, e18});
    v.push_back({"E19", "F's summand is a Laurent polynomial; assembling F from the quotients gives coeff_F",
                 {{"box", 6}, {"p", {2, 3}}, {"r", r1}}, 15, e19});
    v.push_back({"E20", "sum (-1)^n q^(n(n+1)/2 + k n) vanishes", {{"k", int_range(-10, 10)}}, 40, e20});
    return v;
}

// ---- comparison engine --------------------------------------------------

std::optional<std::pair<Rational, Rational>> first_diff(const PuiseuxSeries &a, const PuiseuxSeries &b, const Rational &N)
{
    std::map<Rational, std::pair<Rational, Rational>> m;
    for (const auto &t : a.terms())
        if (t.exp < N) m[t.exp].first = t.coeff;
    for (const auto &t : b.terms())
        if (t.exp < N) m[t.exp].second = t.coeff;
    for (const auto &[e, c] : m)
        if (c.first != c.second) return std::pair{e, e};
    return std::nullopt;
}

void require_exact(const Rational &have, const Rational &N, const std::string &label)
{
    if (have < N)
        throw std::logic_error("comparison '" + label + "' is exact only below q^" + have.to_string() + ", requested " +
                               N.to_string());
}

Rational coeff_or_zero(const PuiseuxSeries &s, const Rational &e) { return e < s.order() ? s.coeff(e) : Rational(0); }

json key_json(const std::optional<Key> &k, const Rational &e)
{
    json j = {{"exp", e.to_fraction_string()}};
    if (k) j["zeta"] = {k->e1.to_fraction_string(), k->e2.to_fraction_string()};
    return j;
}

} // namespace

const std::vector<IdentityCase> &identity_registry()
{
    static const std::vector<IdentityCase> reg = make_registry();
    return reg;
}

const IdentityCase &find_identity(const std::string &id)
{
    for (const auto &c : identity_registry())
        if (c.id == id) return c;
    throw UnknownIdentity("unknown identity '" + id + "'");
}

std::optional<Discrepancy> first_discrepancy(const Comparison &c, const Rational &order)
{
    if (c.lhs.index() != c.rhs.index()) throw std::logic_error("comparison '" + c.label + "' mixes series kinds");

    if (const auto *a = std::get_if<PuiseuxSeries>(&c.lhs)) {
        const auto &b = std::get<PuiseuxSeries>(c.rhs);
        require_exact(a->order(), order, c.label);
        require_exact(b.order(), order, c.label);
        auto d = first_diff(*a, b, order);
        if (!d) return std::nullopt;
        return Discrepancy{c.label, std::nullopt, d->first, a->coeff(d->first), b.coeff(d->first)};
    }

    const auto &a = std::get<BiLaurentSeries>(c.lhs);
    const auto &b = std::get<BiLaurentSeries>(c.rhs);
    if (a.region() != b.region()) throw RegionMismatch("comparison '" + c.label + "' mixes regions");
    require_exact(a.qorder(), order, c.label);
    require_exact(b.qorder(), order, c.label);
    std::set<Key> keys;
    for (const auto &[k, _] : a.terms()) keys.insert(k);
    for (const auto &[k, _] : b.terms()) keys.insert(k);
    std::optional<Discrepancy> best;
    const PuiseuxSeries zero(order);
    for (const auto &k : keys) {
        if (!a.in_window(k) || !b.in_window(k)) continue;
        auto ia = a.terms().find(k), ib = b.terms().find(k);
        const PuiseuxSeries &ca = ia == a.terms().end() ? zero : ia->second;
        const PuiseuxSeries &cb = ib == b.terms().end() ? zero : ib->second;
        auto d = first_diff(ca, cb, order);
        if (!d) continue;
        if (!best || d->first < best->exp) // keys ascend, so ties keep the smaller key
            best = Discrepancy{c.label, k, d->first, coeff_or_zero(ca, d->first), coeff_or_zero(cb, d->first)};
    }
    return best;
}

Discrepancy plant_mutation(Comparison &c, const Rational &order)
{
    auto pick = [&](const PuiseuxSeries &s) {
        const Rational half = order / 2;
        for (const auto &t : s.terms())
            if (t.exp >= half && t.exp < order) return t.exp;
        return half.floor();
    };
    if (auto *b = std::get_if<PuiseuxSeries>(&c.rhs)) {
        const Rational e = pick(*b);
        const auto &a = std::get<PuiseuxSeries>(c.lhs);
        *b = *b + PuiseuxSeries::monomial(1, e, b->order());
        return {c.label, std::nullopt, e, coeff_or_zero(a, e), coeff_or_zero(*b, e)};
    }
    auto &b = std::get<BiLaurentSeries>(c.rhs);
    const auto &a = std::get<BiLaurentSeries>(c.lhs);
    const Key k{0, 0};
    auto coeff_at = [&](const BiLaurentSeries &s) {
        auto it = s.terms().find(k);
        return it == s.terms().end() ? PuiseuxSeries(s.qorder()) : it->second;
    };
    const Rational e = pick(coeff_at(b));
    b = b + BiLaurentSeries::monomial(1, k, e, b.qorder(), b.region());
    return {c.label, k, e, coeff_or_zero(coeff_at(a), e), coeff_or_zero(coeff_at(b), e)};
}

IdentityReport verify_identity(const std::string &id, const json &params, std::optional<Rational> order, bool mutate)
{
    const auto &c = find_identity(id);
    json eff = c.default_params;
    if (!params.is_null()) {
        if (!params.is_object()) throw PreconditionError("params must be a JSON object");
        for (const auto &[k, v] : params.items()) {
            if (!eff.contains(k)) throw PreconditionError("identity " + id + " has no parameter '" + k + "'");
            eff[k] = v;
        }
    }
    const Rational N = order.value_or(c.default_order);
    if (N.sign() <= 0) throw PreconditionError("order must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    IdentityReport rep;
    rep.id = c.id;
    rep.params = eff;
    rep.order = N;
    std::vector<Comparison> comps;
    try {
        comps = c.build(eff, N);
    } catch (const std::invalid_argument &e) {
        throw PreconditionError(id + ": " + e.what());
    }
    if (mutate && !comps.empty()) rep.mutation = plant_mutation(comps.front(), N);
    for (const auto &cm : comps) {
        rep.discrepancy = first_discrepancy(cm, N);
        if (rep.discrepancy) break;
    }
    rep.equal = !rep.discrepancy;
    rep.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::vector<IdentityReport> run_suite(const std::string &filter, const std::map<std::string, Rational> &order_overrides,
                                      std::optional<Rational> order, bool mutate)
{
    std::vector<const IdentityCase *> sel;
    if (filter.empty() || filter == "*") {
        for (const auto &c : identity_registry()) sel.push_back(&c);
    } else {
        std::regex re;
        try {
            re = std::regex(filter);
        } catch (const std::regex_error &e) {
            throw PreconditionError("bad filter '" + filter + "': " + e.what());
        }
        for (const auto &c : identity_registry())
            if (std::regex_match(c.id, re)) sel.push_back(&c);
    }

    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("FTLAB_JOBS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) jobs = static_cast<std::size_t>(v);
    }
    jobs = std::min(jobs, std::max<std::size_t>(sel.size(), 1));

    std::vector<IdentityReport> out(sel.size());
    std::vector<std::exception_ptr> errs(sel.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < sel.size();) {
            try {
                std::optional<Rational> o = order;
                if (auto it = order_overrides.find(sel[i]->id); it != order_overrides.end()) o = it->second;
                out[i] = verify_identity(sel[i]->id, nullptr, o, mutate);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto &t : pool) t.join();
    for (auto &e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

json to_json(const Discrepancy &d)
{
    return {{"label", d.label},
            {"key", key_json(d.key, d.exp)},
            {"lhs", d.lhs.to_fraction_string()},
            {"rhs", d.rhs.to_fraction_string()}};
}

json to_json(const IdentityReport &r)
{
    json j = {{"id", r.id},
              {"params", r.params},
              {"order", r.order.to_fraction_string()},
              {"verdict", r.equal ? "equal" : "unequal"},
              {"discrepancy", r.discrepancy ? to_json(*r.discrepancy) : json(nullptr)},
              {"ms", r.ms}};
    if (r.mutation) j["mutation"] = to_json(*r.mutation);
    return j;
}

} // namespace ftlab
