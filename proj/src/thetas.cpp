#include "ftlab/thetas.hpp"

#include <cmath>
#include <map>

namespace ftlab {

namespace {

Key scaled_key(const Key &dir, const Rational &n) { return {dir.e1 * n, dir.e2 * n}; }

BiLaurentSeries one(const Rational &order, Region region) { return BiLaurentSeries::monomial(1, {0, 0}, 0, order, region); }

// s * (1 - c zeta^key q^e)
BiLaurentSeries times_binomial(const BiLaurentSeries &s, int c, const Key &key, const Rational &e)
{
    if (e + s.valuation() >= s.qorder()) return s;
    return s - s.times_monomial(key).scaled(Rational(c), e);
}

BiLaurentSeries finish(BiLaurentSeries s, const std::optional<Rational> &window)
{
    return window ? s.restricted(*window) : s;
}

std::int64_t isqrt_bound(const Rational &x)
{
    if (x.sign() <= 0) return 1;
    return static_cast<std::int64_t>(std::ceil(std::sqrt(x.to_double()))) + 2;
}

// 1/(q^2;q^2)_m for m = 0..count-1, exact below `order`
std::vector<PuiseuxSeries> inverse_q2_pochhammers(std::int64_t count, const Rational &order)
{
    std::vector<PuiseuxSeries> out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(PuiseuxSeries::one(order));
    for (std::int64_t m = 1; m < count; ++m) {
        std::vector<Term> geo;
        for (std::int64_t e = 0; Rational(e) < order; e += 2 * m) geo.push_back({e, 1});
        out.push_back(mul_truncated(out.back(), PuiseuxSeries::from_terms(std::move(geo), order), order));
    }
    return out;
}

PuiseuxSeries q2_pochhammer_inf_inverse(const Rational &order)
{
    return series_invert(pochhammer(1, 2, 2, kInfinite, order));
}

void require_scale(int k)
{
    if (k != 1 && k != 2) throw PreconditionError("theta scale k must be 1 or 2");
}

void require_pair_region(Region region)
{
    if (region == Region::Outer)
        throw PreconditionError("1/(u q, u^-1 q; q^2) has no expansion valid for all of OUTER");
}

} // namespace

BiLaurentSeries theta_hat(Unit u, int k, const Rational &qorder, std::optional<Rational> window, ThetaForm form,
                          Region region)
{
    require_scale(k);
    const Key dir = unit_key(u);
    const Rational K(k);
    if (form == ThetaForm::Sum) {
        BiLaurentSeries::TermMap terms;
        const std::int64_t bound = isqrt_bound(Rational(2) * qorder / K);
        for (std::int64_t m = -bound; m <= bound; ++m) {
            Rational n = Rational(2 * m + 1, 2);
            Rational e = K * n * n / Rational(2);
            if (e >= qorder) continue;
            int sign = (m % 2 == 0) ? -1 : 1; // (-1)^{n + 1/2}, n + 1/2 = m + 1
            terms.emplace(scaled_key(dir, n), PuiseuxSeries::monomial(Rational(sign), e, qorder));
        }
        return finish(BiLaurentSeries::from_terms(std::move(terms), qorder, region), window);
    }
    const Rational inner = qorder - K / Rational(8);
    BiLaurentSeries s = one(inner, region);
    for (std::int64_t j = 0; Rational(j * k) < inner; ++j) s = times_binomial(s, 1, dir, Rational(j * k));
    const Key inv{-dir.e1, -dir.e2};
    for (std::int64_t j = 1; Rational(j * k) < inner; ++j) s = times_binomial(s, 1, inv, Rational(j * k));
    s = bl_scale(s, pochhammer(1, K, K, kInfinite, inner));
    s = s.times_monomial(scaled_key(dir, Rational(-1, 2))).scaled(1, K / Rational(8));
    return finish(std::move(s), window);
}

BiLaurentSeries theta01(Unit u, int k, const Rational &qorder, std::optional<Rational> window, ThetaForm form,
                        Region region)
{
    require_scale(k);
    const Key dir = unit_key(u);
    const Rational K(k);
    if (form == ThetaForm::Sum) {
        BiLaurentSeries::TermMap terms;
        const std::int64_t bound = isqrt_bound(Rational(2) * qorder / K);
        for (std::int64_t n = -bound; n <= bound; ++n) {
            Rational e = K * Rational(n * n, 2);
            if (e >= qorder) continue;
            terms.emplace(scaled_key(dir, n), PuiseuxSeries::monomial(Rational(n % 2 == 0 ? 1 : -1), e, qorder));
        }
        return finish(BiLaurentSeries::from_terms(std::move(terms), qorder, region), window);
    }
    BiLaurentSeries s = one(qorder, region);
    const Key inv{-dir.e1, -dir.e2};
    for (std::int64_t j = 0;; ++j) {
        Rational e = K / Rational(2) + Rational(j * k);
        if (e >= qorder) break;
        s = times_binomial(s, 1, dir, e);
        s = times_binomial(s, 1, inv, e);
    }
    s = bl_scale(s, pochhammer(1, K, K, kInfinite, qorder));
    return finish(std::move(s), window);
}

BiLaurentSeries theta_A2(const Rational &qorder, std::optional<Rational> window, Region region)
{
    BiLaurentSeries::TermMap terms;
    const std::int64_t b = isqrt_bound(Rational(2) * qorder);
    for (std::int64_t n1 = -b; n1 <= b; ++n1)
        for (std::int64_t n2 = -b; n2 <= b; ++n2) {
            Rational e(n1 * n1 + n2 * n2 - n1 * n2);
            if (e < qorder) terms.emplace(Key{n1, n2}, PuiseuxSeries::monomial(1, e, qorder));
        }
    return BiLaurentSeries::from_terms(std::move(terms), qorder, region, std::move(window));
}

BiLaurentSeries calT(const Rational &qorder, std::optional<Rational> window, Region region)
{
    BiLaurentSeries::TermMap terms;
    const std::int64_t b = isqrt_bound(qorder);
    for (std::int64_t n1 = -b; n1 <= b; ++n1)
        for (std::int64_t n2 = -b; n2 <= b; ++n2) {
            Rational e(2 * (n1 * n1 + n2 * n2 - n1 * n2));
            if (e < qorder) terms.emplace(Key{n1 + n2, 2 * n1 - n2}, PuiseuxSeries::monomial(1, e, qorder));
        }
    return BiLaurentSeries::from_terms(std::move(terms), qorder, region, std::move(window));
}

std::string_view to_string(PairForm f)
{
    switch (f) {
    case PairForm::Geometric: return "GEOMETRIC";
    case PairForm::Pochhammer: return "POCHHAMMER";
    case PairForm::Middle: return "MIDDLE";
    case PairForm::Quadratic: return "QUADRATIC";
    }
    return "?";
}

PairForm parse_pair_form(std::string_view s)
{
    if (s == "GEOMETRIC") return PairForm::Geometric;
    if (s == "POCHHAMMER") return PairForm::Pochhammer;
    if (s == "MIDDLE") return PairForm::Middle;
    if (s == "QUADRATIC") return PairForm::Quadratic;
    throw std::invalid_argument("unknown pair form '" + std::string(s) + "'");
}

BiLaurentSeries inverse_pair(const Key &dir, PairForm form, const Rational &qorder, Region region)
{
    require_pair_region(region);
    if (form == PairForm::Geometric) {
        BiLaurentSeries s = one(qorder, region);
        const Key inv{-dir.e1, -dir.e2};
        for (std::int64_t j = 0; Rational(2 * j + 1) < qorder; ++j) {
            s = s * expand_geometric(1, dir, Rational(2 * j + 1), region, qorder);
            s = s * expand_geometric(1, inv, Rational(2 * j + 1), region, qorder);
        }
        return s;
    }

    const std::int64_t n_max = qorder.sign() > 0 ? qorder.ceil().to_int64() + 1 : 1;
    std::map<std::int64_t, std::vector<Term>> acc;
    if (form == PairForm::Middle) {
        for (std::int64_t n1 = -n_max; n1 <= n_max; ++n1) {
            const std::int64_t a = std::abs(n1);
            for (std::int64_t n2 = a;; ++n2) {
                Rational e(n2 * (n2 + 1) - n1 * n1);
                if (e >= qorder) break;
                acc[n1].push_back({e, Rational((n1 + n2) % 2 == 0 ? 1 : -1)});
            }
        }
        PuiseuxSeries pre = q2_pochhammer_inf_inverse(qorder);
        pre = mul_truncated(pre, pre, qorder);
        BiLaurentSeries::TermMap terms;
        for (auto &[n1, v] : acc)
            terms.emplace(scaled_key(dir, n1), mul_truncated(PuiseuxSeries::from_terms(std::move(v), qorder), pre, qorder));
        return BiLaurentSeries::from_terms(std::move(terms), qorder, region);
    }

    // Pochhammer and Quadratic share the (q^2;q^2)_{n2} (q^2;q^2)_{|n1|+n2} denominators
    const auto inv = inverse_q2_pochhammers(2 * n_max + 2, qorder);
    BiLaurentSeries::TermMap terms;
    for (std::int64_t n1 = -n_max; n1 <= n_max; ++n1) {
        const std::int64_t a = std::abs(n1);
        PuiseuxSeries c(qorder);
        for (std::int64_t n2 = 0;; ++n2) {
            Rational e = form == PairForm::Pochhammer ? Rational(a + 2 * n2) : Rational(2 * n2 * n2 + 2 * n2 * (a + 1) + a);
            if (e >= qorder) break;
            PuiseuxSeries t = mul_truncated(inv[static_cast<std::size_t>(n2)], inv[static_cast<std::size_t>(a + n2)],
                                            qorder - e);
            c = c + t.shifted(e).truncated(qorder);
        }
        if (!c.is_zero()) terms.emplace(scaled_key(dir, n1), std::move(c));
    }
    BiLaurentSeries s = BiLaurentSeries::from_terms(std::move(terms), qorder, region);
    if (form == PairForm::Quadratic) s = bl_scale(s, q2_pochhammer_inf_inverse(qorder));
    return s;
}

BiLaurentSeries pair_product(const Key &dir, const Rational &qorder, Region region)
{
    BiLaurentSeries s = one(qorder, region);
    const Key inv{-dir.e1, -dir.e2};
    for (std::int64_t j = 0; Rational(2 * j + 1) < qorder; ++j) {
        s = times_binomial(s, 1, dir, Rational(2 * j + 1));
        s = times_binomial(s, 1, inv, Rational(2 * j + 1));
    }
    return s;
}

PuiseuxSeries theta_ratio_prefactor(const Rational &order)
{
    const Rational v(1, 8);
    return pochhammer(-1, 1, 1, kInfinite, order - v).shifted(v);
}

BiLaurentSeries theta_ratio(const Key &dir, PairForm form, const Rational &qorder, Region region)
{
    return bl_scale(inverse_pair(dir, form, qorder - Rational(1, 8), region), theta_ratio_prefactor(qorder));
}

namespace {

PuiseuxSeries f_prefactor(const Rational &order)
{
    // (q^{1/8} (-q;q)_inf)^3
    const Rational v(3, 8);
    PuiseuxSeries p = pochhammer(-1, 1, 1, kInfinite, order - v);
    return mul_truncated(mul_truncated(p, p, order - v), p, order - v).shifted(v);
}

} // namespace

BiLaurentSeries f_series(const Rational &qorder, std::optional<Rational> window, Region region, PairForm form)
{
    const Rational inner = qorder - Rational(3, 8);
    BiLaurentSeries s = inverse_pair({1, 0}, form, inner, region) * inverse_pair({0, 1}, form, inner, region);
    s = s * inverse_pair({1, 1}, form, inner, region);
    return finish(bl_scale(s, f_prefactor(qorder)), window);
}

PuiseuxSeries f_coeff(const Rational &r1, const Rational &r2, const Rational &order, PairForm form)
{
    const Rational inner = order - Rational(3, 8);
    if (!r1.is_integer() || !r2.is_integer()) return PuiseuxSeries(order);
    const BiLaurentSeries ip = inverse_pair({1, 0}, form, inner);
    auto at = [&](const Rational &n) -> const PuiseuxSeries * {
        auto it = ip.terms().find(Key{n, 0});
        return it == ip.terms().end() ? nullptr : &it->second;
    };
    PuiseuxSeries acc(inner);
    for (const auto &[k, c12] : ip.terms()) {
        const PuiseuxSeries *a = at(r1 - k.e1), *b = at(r2 - k.e1);
        if (!a || !b) continue;
        acc = acc + mul_truncated(mul_truncated(*a, *b, inner), c12, inner);
    }
    return mul_truncated(acc, f_prefactor(order), order);
}

PuiseuxSeries eta5_over_eta2(const Rational &order)
{
    const EtaFactor fs[] = {{1, 5}, {2, -1}};
    return eta_quotient(fs, order);
}

BiLaurentSeries J_series(const Rational &qorder, std::optional<Rational> window, PairForm form)
{
    // valuations: eta^5/eta(2tau) 1/8, calT 0, f 3/8
    BiLaurentSeries f = f_series(qorder - Rational(1, 8), std::nullopt, Region::Inner, form);
    BiLaurentSeries tf = calT(qorder - Rational(1, 2)) * f;
    return finish(bl_scale(tf, eta5_over_eta2(qorder)), window);
}

BiLaurentSeries kw_character_N3(const Rational &qorder, std::optional<Rational> window)
{
    // eta/eta(2 tau) has valuation -1/24, f has 3/8
    const EtaFactor fs[] = {{1, 1}, {2, -1}};
    BiLaurentSeries f = f_series(qorder + Rational(1, 24));
    return finish(bl_scale(f, eta_quotient(fs, qorder - Rational(3, 8))), window);
}

BiLaurentSeries kw_character_generic(int N, const Rational &qorder, std::optional<Rational> window)
{
    if (N != 3) throw PreconditionError("kw_character_generic: only N = 3 is implemented");
    const Rational target = qorder + Rational(1, 24);
    const Rational ratio_order = target - Rational(1, 4);
    // q^{1/12} eta(2 tau) / eta(tau)
    const EtaFactor rf[] = {{2, 1}, {1, -1}};
    const PuiseuxSeries ratio_pre = eta_quotient(rf, ratio_order).shifted(Rational(1, 12));

    BiLaurentSeries prod = one(target, Region::Inner);
    for (int j = 1; j <= N - 1; ++j)
        for (int k = j; k <= N - 1; ++k) {
            Key dir{0, 0};
            for (int r = j; r <= k; ++r) dir = dir + (r == 1 ? Key{1, 0} : Key{0, 1});
            BiLaurentSeries ratio =
                bl_scale(inverse_pair(dir, PairForm::Pochhammer, ratio_order - Rational(1, 8)), ratio_pre);
            prod = prod * ratio;
        }
    const int power = (N - 1) * (N - 2) / 2;
    const EtaFactor qf[] = {{1, power}, {2, -power}};
    const PuiseuxSeries eta_ratio = eta_quotient(qf, qorder - Rational(3, 8));
    return finish(bl_scale(prod, eta_ratio), window);
}

} // namespace ftlab
