#include "ftlab/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "ftlab/falsetheta.hpp"

namespace ftlab {

namespace {

using std::numbers::pi;
constexpr cplx I{0, 1};

cplx e2pi(cplx x) { return std::exp(2 * pi * I * x); }

void require_tau(cplx tau)
{
    if (!(tau.imag() > 0)) throw PreconditionError("tau must lie in the upper half-plane");
}

double rel(cplx lhs, cplx rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }

// (-3/d) extended to negative d by (-3/-1) = -1, so that g and -g agree.
int kronecker_m3(std::int64_t d) { return d > 0 ? jacobi_symbol(-3, d) : -jacobi_symbol(-3, -d); }

void require_even_shift(const EllipticShift &s)
{
    if (s.m1 % 2 != 0 || s.m2 % 2 != 0) throw PreconditionError("this law needs m in 2Z^2, got " + s.to_string());
}

cplx qstar(cplx a, cplx b) { return a * a + b * b + a * b; }

} // namespace

void SamplePoint::validate() const { require_tau(tau); }

void ModularMatrix::validate() const
{
    if (a * d - b * c != 1) throw PreconditionError("matrix " + to_string() + " does not have determinant 1");
}

ModularMatrix ModularMatrix::halved() const
{
    if (c % 2 != 0) throw PreconditionError("matrix " + to_string() + " is not in Gamma0(2)");
    ModularMatrix h{a, 2 * b, c / 2, d};
    h.validate();
    return h;
}

std::string ModularMatrix::to_string() const
{
    return "(" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) + "," + std::to_string(d) + ")";
}

std::string EllipticShift::to_string() const
{
    return "m=(" + std::to_string(m1) + "," + std::to_string(m2) + ") l=(" + std::to_string(l1) + "," + std::to_string(l2) + ")";
}

cplx eval_theta(cplx z, cplx tau, int k)
{
    require_tau(tau);
    const cplx t = double(k) * tau;
    const double peak = std::abs(z.imag()) / t.imag() + 1;
    cplx s = 0;
    for (std::int64_t j = 0;; ++j) {
        double m = 0;
        for (double n : {j + 0.5, -(j + 0.5)}) {
            cplx term = std::exp(pi * I * (n * n * t + 2.0 * n * z + n));
            s += term;
            m = std::max(m, std::abs(term));
        }
        if (j + 0.5 > peak && m < kTailBound * std::max(1.0, std::abs(s))) break;
    }
    return s;
}

cplx eval_theta_product(cplx z, cplx tau, int k)
{
    require_tau(tau);
    const cplx Q = e2pi(double(k) * tau);
    const cplx zeta = e2pi(z);
    const double scale = std::max({1.0, std::abs(zeta), 1.0 / std::abs(zeta)});
    cplx prod = -I * e2pi(double(k) * tau / 8.0) * std::exp(-pi * I * z);
    cplx Qm = 1;
    for (;;) {
        prod *= (1.0 - zeta * Qm) * (1.0 - Qm * Q / zeta) * (1.0 - Qm * Q);
        Qm *= Q;
        if (std::abs(Qm) * scale < kTailBound) break;
    }
    return prod;
}

cplx eval_eta(cplx tau)
{
    require_tau(tau);
    const cplx q = e2pi(tau);
    cplx prod = e2pi(tau / 24.0);
    cplx qn = q;
    while (std::abs(qn) >= kTailBound) {
        prod *= 1.0 - qn;
        qn *= q;
    }
    return prod;
}

cplx eval_f(cplx z1, cplx z2, cplx tau)
{
    cplx num = 1, den = 1;
    for (cplx z : {z1, z2, z1 + z2}) {
        cplx d = eval_theta(z, tau, 1);
        if (std::abs(d) < 1e-6) throw NearPoleError("f: theta(z; tau) vanishes to 1e-6 at z = " + format_complex(z));
        den *= d;
        num *= eval_theta(z, tau, 2);
    }
    return num / den;
}

cplx eval_T(cplx z1, cplx z2, cplx tau)
{
    require_tau(tau);
    const cplx w1 = z1 + 2.0 * z2, w2 = z1 - z2;
    const double y = tau.imag();
    const double S = std::abs(w1.imag()) + std::abs(w2.imag());
    // Q(n) >= |n|_inf^2 / 2, so a term on the shell |n|_inf = R is at most
    // exp(-2 pi y R^2 + 2 pi R S)
    std::int64_t R = 0;
    for (;; ++R) {
        double b = std::exp(-2 * pi * y * double(R) * R + 2 * pi * double(R) * S) * (8.0 * R + 8);
        if (R > S / y && b < kTailBound) break;
    }
    cplx s = 0;
    for (std::int64_t n1 = -R; n1 <= R; ++n1)
        for (std::int64_t n2 = -R; n2 <= R; ++n2) {
            double Qn = double(n1 * n1 + n2 * n2 - n1 * n2);
            s += std::exp(2 * pi * I * (2.0 * tau * Qn + double(n1) * w1 + double(n2) * w2));
        }
    return s;
}

cplx eval_J(cplx z1, cplx z2, cplx tau)
{
    cplx e = eval_eta(tau);
    return std::pow(e, 5) / eval_eta(2.0 * tau) * eval_T(z1, z2, tau) * eval_f(z1, z2, tau);
}

cplx eval_series(const PuiseuxSeries &s, cplx tau)
{
    cplx acc = 0;
    for (const auto &t : s.terms()) acc += t.coeff.to_double() * e2pi(t.exp.to_double() * tau);
    return acc;
}

cplx eval_bilaurent(const BiLaurentSeries &s, cplx z1, cplx z2, cplx tau)
{
    cplx acc = 0;
    for (const auto &[k, c] : s.terms()) acc += eval_series(c, tau) * e2pi(k.e1.to_double() * z1 + k.e2.to_double() * z2);
    return acc;
}

Rational dedekind_sum(std::int64_t d, std::int64_t c)
{
    if (c <= 0) throw PreconditionError("dedekind_sum: c must be positive");
    if (std::gcd(c, d) != 1) throw PreconditionError("dedekind_sum: gcd(c, d) must be 1");
    // ((k/c)) ((kd/c)) = (2k - c)(2 (kd mod c) - c) / (4 c^2) for 0 < k < c
    __int128 acc = 0;
    const std::int64_t dm = ((d % c) + c) % c;
    for (std::int64_t k = 1; k < c; ++k) {
        std::int64_t r = static_cast<std::int64_t>((static_cast<__int128>(k) * dm) % c);
        acc += static_cast<__int128>(2 * k - c) * (2 * r - c);
    }
    mpz_class num;
    {
        bool neg = acc < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-acc) : static_cast<unsigned __int128>(acc);
        mpz_class hi(static_cast<unsigned long>(u >> 64)), lo(static_cast<unsigned long>(u & ~0ULL));
        num = (hi << 64) + lo;
        if (neg) num = -num;
    }
    mpq_class q(num, mpz_class(4) * c * c);
    q.canonicalize();
    return Rational(q);
}

cplx eta_multiplier(const ModularMatrix &g)
{
    g.validate();
    if (g.c == 0) {
        // d = +-1; for d = -1 the (c tau + d)^{1/2} = i branch contributes -i
        cplx t = std::exp(pi * I * (double(g.d * g.b) / 12.0));
        return g.d == 1 ? t : -I * t;
    }
    if (g.c < 0) return I * eta_multiplier({-g.a, -g.b, -g.c, -g.d});
    Rational phase = Rational(g.a + g.d, 12 * g.c) - dedekind_sum(g.d, g.c) - Rational(1, 4);
    phase = phase - 2 * (phase / 2).floor(); // into [0, 2)
    return std::exp(pi * I * phase.to_double());
}

double validate_eta_multiplier(const ModularMatrix &g, const std::function<cplx(const ModularMatrix &)> &chi)
{
    static const cplx taus[] = {{0, 1}, {0.31, 0.77}, {-0.42, 1.3}};
    const cplx x = chi(g);
    double worst = 0;
    for (cplx tau : taus) {
        cplx lhs = eval_eta(g.act(tau));
        cplx rhs = x * std::sqrt(g.j(tau)) * eval_eta(tau);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    if (!(worst < 1e-9))
        throw MultiplierValidationError("eta multiplier fails the eta functional equation at " + g.to_string() +
                                        " (residual " + std::to_string(worst) + ")");
    return worst;
}

int jacobi_symbol(std::int64_t a, std::int64_t n)
{
    if (n <= 0 || n % 2 == 0) throw PreconditionError("jacobi_symbol: n must be odd and positive");
    a %= n;
    if (a < 0) a += n;
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            std::int64_t r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

std::string_view to_string(Law l)
{
    switch (l) {
    case Law::ThetaMod: return "THETA_MOD";
    case Law::ThetaEll: return "THETA_ELL";
    case Law::FMod: return "F_MOD";
    case Law::FEll: return "F_ELL";
    case Law::TMod: return "T_MOD";
    case Law::TEll: return "T_ELL";
    case Law::JMod: return "J_MOD";
    case Law::JEll: return "J_ELL";
    }
    return "?";
}

Law parse_law(std::string_view s)
{
    for (Law l : {Law::ThetaMod, Law::ThetaEll, Law::FMod, Law::FEll, Law::TMod, Law::TEll, Law::JMod, Law::JEll})
        if (to_string(l) == s) return l;
    throw PreconditionError("unknown law '" + std::string(s) + "'");
}

bool is_modular(Law l) { return l == Law::ThetaMod || l == Law::FMod || l == Law::TMod || l == Law::JMod; }

TransformationResidual check_transformation(Law law, const LawArgument &arg, const SamplePoint &p, double tolerance)
{
    p.validate();
    TransformationResidual out{law, p, arg, 0, tolerance};
    const cplx tau = p.tau, z1 = p.z1, z2 = p.z2;

    if (is_modular(law)) {
        const auto *gp = std::get_if<ModularMatrix>(&arg);
        if (!gp) throw PreconditionError(std::string(to_string(law)) + " needs a matrix");
        const ModularMatrix &g = *gp;
        g.validate();
        const cplx t2 = g.act(tau), j = g.j(tau), c = double(g.c);
        const cplx w1 = z1 / j, w2 = z2 / j;
        switch (law) {
        case Law::ThetaMod: {
            validate_eta_multiplier(g);
            cplx rhs = std::pow(eta_multiplier(g), 3) * std::sqrt(j) * std::exp(pi * I * c * z1 * z1 / j) * eval_theta(z1, tau);
            out.residual = rel(eval_theta(w1, t2), rhs);
            break;
        }
        case Law::FMod: {
            if (!g.in_gamma0(2)) throw PreconditionError("F_MOD needs a matrix in Gamma0(2), got " + g.to_string());
            const ModularMatrix h = g.halved();
            validate_eta_multiplier(g);
            validate_eta_multiplier(h);
            cplx nu = std::pow(eta_multiplier(h), 9) * std::pow(eta_multiplier(g), -9);
            cplx rhs = nu * std::exp(-pi * I * c * qstar(z1, z2) / j) * eval_f(z1, z2, tau);
            out.residual = rel(eval_f(w1, w2, t2), rhs);
            break;
        }
        case Law::TMod: {
            if (!g.in_gamma0(6)) throw PreconditionError("T_MOD needs a matrix in Gamma0(6), got " + g.to_string());
            validate_eta_multiplier(g);
            cplx rhs = double(kronecker_m3(g.d)) * j * std::exp(pi * I * c * qstar(z1, z2) / j) * eval_T(z1, z2, tau);
            out.residual = rel(eval_T(w1, w2, t2), rhs);
            break;
        }
        case Law::JMod: {
            if (!g.in_gamma0(6)) throw PreconditionError("J_MOD needs a matrix in Gamma0(6), got " + g.to_string());
            const ModularMatrix h = g.halved();
            validate_eta_multiplier(g);
            validate_eta_multiplier(h);
            cplx mu = double(kronecker_m3(g.d)) * std::pow(eta_multiplier(g), -4) * std::pow(eta_multiplier(h), 8);
            out.residual = rel(eval_J(w1, w2, t2), mu * j * j * j * eval_J(z1, z2, tau));
            break;
        }
        default: break;
        }
        return out;
    }

    const auto *sp = std::get_if<EllipticShift>(&arg);
    if (!sp) throw PreconditionError(std::string(to_string(law)) + " needs an elliptic shift");
    const EllipticShift &s = *sp;
    const double m1 = double(s.m1), m2 = double(s.m2);
    const cplx s1 = z1 + m1 * tau + double(s.l1), s2 = z2 + m2 * tau + double(s.l2);
    switch (law) {
    case Law::ThetaEll: {
        double sign = (s.m1 + s.l1) % 2 ? -1 : 1;
        cplx rhs = sign * std::exp(-pi * I * m1 * m1 * tau) * e2pi(-m1 * z1) * eval_theta(z1, tau);
        out.residual = rel(eval_theta(s1, tau), rhs);
        break;
    }
    case Law::FEll: {
        require_even_shift(s);
        cplx rhs = std::exp(pi * I * tau * qstar(m1, m2)) * e2pi((m1 + m2 / 2) * z1 + (m2 + m1 / 2) * z2) * eval_f(z1, z2, tau);
        out.residual = rel(eval_f(s1, s2, tau), rhs);
        break;
    }
    case Law::TEll: {
        require_even_shift(s);
        cplx rhs = std::exp(-pi * I * tau * qstar(m1, m2)) * e2pi(-(m1 + m2 / 2) * z1 - (m1 / 2 + m2) * z2) * eval_T(z1, z2, tau);
        out.residual = rel(eval_T(s1, s2, tau), rhs);
        break;
    }
    case Law::JEll:
        require_even_shift(s);
        out.residual = rel(eval_J(s1, s2, tau), eval_J(z1, z2, tau));
        break;
    default: break;
    }
    return out;
}

const std::vector<SamplePoint> &registered_points()
{
    static const std::vector<SamplePoint> pts = {
        {{0.1, 1.2}, {0.21, 0.3}, {0.11, 0.4}},
        {{-0.23, 0.8}, {0.37, 0.1}, {-0.19, 0.25}},
        {{0.37, 0.65}, {0.13, -0.2}, {0.29, 0.15}},
        {{0.05, 1.0}, {-0.31, 0.35}, {0.17, 0.05}},
        {{-0.41, 0.55}, {0.23, 0.12}, {0.08, -0.1}},
    };
    return pts;
}

std::vector<LawArgument> registered_arguments(Law law)
{
    auto mats = [](std::initializer_list<ModularMatrix> l) { return std::vector<LawArgument>(l.begin(), l.end()); };
    auto shifts = [](std::initializer_list<EllipticShift> l) { return std::vector<LawArgument>(l.begin(), l.end()); };
    switch (law) {
    case Law::ThetaMod: return mats({{1, 1, 0, 1}, {0, -1, 1, 0}, {2, 1, 1, 1}, {1, 0, 3, 1}, {3, 2, 4, 3}, {-1, 0, -2, -1}});
    case Law::FMod: return mats({{1, 1, 0, 1}, {1, 0, 2, 1}, {3, 1, 2, 1}, {5, 2, 2, 1}, {3, -1, 4, -1}, {1, 0, -4, 1}});
    case Law::TMod:
    case Law::JMod: return mats({{1, 1, 0, 1}, {1, 0, 6, 1}, {5, 1, 24, 5}, {7, 1, 48, 7}, {13, 2, 6, 1}, {5, -1, 6, -1}});
    case Law::ThetaEll: return shifts({{1, 0, 0, 0}, {0, 0, 1, 0}, {-1, 0, 1, 0}, {2, 0, -1, 0}, {-2, 0, 0, 0}});
    case Law::FEll:
    case Law::TEll:
    case Law::JEll: return shifts({{2, 0, 0, 0}, {0, 2, 1, 0}, {2, 2, 0, 1}, {-2, 0, 1, 1}, {2, -2, -1, 0}});
    }
    return {};
}

std::vector<TransformationResidual> check_grid(Law law, double tolerance)
{
    std::vector<TransformationResidual> out;
    for (const auto &arg : registered_arguments(law))
        for (const auto &p : registered_points()) out.push_back(check_transformation(law, arg, p, tolerance));
    return out;
}

cplx parse_complex(std::string_view s)
{
    auto num = [&](std::string_view t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        if (t.front() == '+') t.remove_prefix(1);
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size())
            throw PreconditionError("bad complex number '" + std::string(s) + "'");
        return v;
    };
    if (s.empty()) throw PreconditionError("empty complex number");
    if (s.back() != 'i') return {num(s), 0};
    std::string_view body = s.substr(0, s.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string_view::npos) return {0, num(body)};
    return {num(body.substr(0, split)), num(body.substr(split))};
}

std::string format_complex(cplx z)
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

nlohmann::json to_json(const TransformationResidual &r)
{
    nlohmann::json j = {
        {"law", std::string(to_string(r.law))},
        {"point", {{"tau", format_complex(r.point.tau)}, {"z1", format_complex(r.point.z1)}, {"z2", format_complex(r.point.z2)}}},
        {"residual", r.residual},
        {"tolerance", r.tolerance},
        {"verdict", r.passed() ? "pass" : "fail"},
    };
    if (const auto *g = std::get_if<ModularMatrix>(&r.arg))
        j["gamma"] = {g->a, g->b, g->c, g->d};
    else {
        const auto &s = std::get<EllipticShift>(r.arg);
        j["shift"] = {{"m", {s.m1, s.m2}}, {"l", {s.l1, s.l2}}};
    }
    return j;
}

} // namespace ftlab
