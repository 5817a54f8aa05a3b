#include "ftlab/cli.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "ftlab/falsetheta.hpp"
#include "ftlab/identities.hpp"
#include "ftlab/numeric.hpp"
#include "ftlab/thetas.hpp"

namespace ftlab {

using json = nlohmann::json;

namespace {

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
    return out;
}

std::vector<Rational> rationals(const std::string &s, std::size_t want, const char *what)
{
    auto parts = split(s, ',');
    if (parts.size() != want)
        throw PreconditionError(std::string(what) + " expects " + std::to_string(want) + " comma-separated values, got '" + s + "'");
    std::vector<Rational> out;
    for (const auto &p : parts) {
        try {
            out.push_back(Rational::parse(p));
        } catch (const std::exception &e) {
            throw PreconditionError(std::string(what) + ": " + e.what());
        }
    }
    return out;
}

std::int64_t integer(const Rational &r, const char *what)
{
    if (!r.is_integer()) throw PreconditionError(std::string(what) + " must be an integer");
    return r.to_int64();
}

struct Common {
    std::string order = "20";
    std::string format = "text";

    [[nodiscard]] Rational rational_order() const
    {
        Rational N = Rational::parse(order);
        if (N.sign() <= 0) throw PreconditionError("--order must be positive");
        return N;
    }
    [[nodiscard]] bool as_json() const { return format == "json"; }
};

void add_common(CLI::App *app, Common &c, bool with_order = true)
{
    if (with_order) app->add_option("--order", c.order, "truncation order, integer or n/d")->capture_default_str();
    app->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

void print_series(std::ostream &out, const PuiseuxSeries &s, bool as_json)
{
    if (as_json) {
        out << to_json(s).dump(2) << "\n";
        return;
    }
    out << "# exponent coefficient\n";
    for (const auto &t : s.terms()) out << t.exp.to_string() << " " << t.coeff.to_string() << "\n";
    out << "O(q^" << s.order().to_string() << ")\n";
}

void print_series(std::ostream &out, const BiLaurentSeries &s, bool as_json)
{
    if (as_json) {
        out << to_json(s).dump(2) << "\n";
        return;
    }
    out << "# region " << to_string(s.region()) << ", exact below q^" << s.qorder().to_string();
    if (s.window()) out << ", window " << s.window()->to_string();
    out << "\n";
    for (const auto &[k, c] : s.terms()) out << k.to_string() << " " << c.to_string() << "\n";
}

// ---- expand ---------------------------------------------------------------

struct ExpandArgs {
    Common common;
    std::string name;
    int window = 6;
    int p = 2;
    int k = 1;
    std::string region = "INNER";
    std::string lambda = "0,0";
    std::string r = "0,0";
    std::string unit = "z1";
    std::string form;
};

int cmd_expand(const ExpandArgs &a, std::ostream &out)
{
    const Rational N = a.common.rational_order();
    if (a.window < 0) throw PreconditionError("--window must be non-negative");
    if (a.p < 2) throw PreconditionError("--p must be at least 2");
    const Rational W(a.window);
    Region region;
    try {
        region = parse_region(a.region);
    } catch (const std::invalid_argument &e) {
        throw PreconditionError(e.what());
    }
    const bool js = a.common.as_json();
    auto uni = [&](const PuiseuxSeries &s) { print_series(out, s, js); };
    auto bi = [&](const BiLaurentSeries &s) { print_series(out, s, js); };
    auto lam = [&] { return rationals(a.lambda, 2, "--lambda"); };
    auto rr = [&] { return rationals(a.r, 2, "--r"); };
    auto unit = [&] {
        try {
            return parse_unit(a.unit);
        } catch (const std::invalid_argument &e) {
            throw PreconditionError(e.what());
        }
    };

    const std::map<std::string, std::function<void()>> table = {
        {"eta", [&] { uni(eta_series(a.k, N)); }},
        {"theta", [&] { bi(theta_hat(unit(), a.k, N, W, ThetaForm::Product, region)); }},
        {"theta01", [&] { bi(theta01(unit(), a.k, N, W, ThetaForm::Product, region)); }},
        {"thetaA2", [&] { bi(theta_A2(N, W, region)); }},
        {"calT", [&] { bi(calT(N, W, region)); }},
        {"f", [&] { bi(f_series(N, W, region, a.form.empty() ? PairForm::Geometric : parse_pair_form(a.form))); }},
        {"J", [&] { bi(J_series(N, W)); }},
        {"kwN3", [&] { bi(kw_character_N3(N, W)); }},
        {"Gfrak", [&] { auto l = lam(); uni(G_frak(l[0], l[1], a.p, N)); }},
        {"Ghyper", [&] { auto r = rr(); uni(G_hyper(integer(r[0], "--r"), integer(r[1], "--r"), N)); }},
        {"Hfrak", [&] { auto r = rr(); uni(H_frak(r[0], r[1], N)); }},
        {"F0", [&] { uni(F0_series(a.p, N, a.form.empty() ? F0Form::General : parse_f0_form(a.form))); }},
        {"coeffF", [&] { auto r = rr(); uni(coeff_F(integer(r[0], "--r"), integer(r[1], "--r"), a.p, N)); }},
        {"rankone", [&] { uni(rank_one_coeff(a.p, integer(rationals(a.r, 1, "--r")[0], "--r"), N)); }},
        {"rogers", [&] { uni(rogers_false_theta(N)); }},
        {"Fconst", [&] { uni(F_constant_term(a.p, N)); }},
        {"partialThetaA2", [&] { auto l = lam(); uni(partial_theta_A2(l[0], l[1], a.p, N)); }},
    };
    auto it = table.find(a.name);
    if (it == table.end()) throw PreconditionError("unknown series '" + a.name + "'");
    try {
        it->second();
    } catch (const std::invalid_argument &e) {
        throw PreconditionError(e.what());
    }
    return kExitOk;
}

// ---- verify / suite -------------------------------------------------------

void print_report(std::ostream &out, const IdentityReport &r)
{
    out << r.id << " " << (r.equal ? "equal" : "UNEQUAL") << " below q^" << r.order.to_string() << " (" << r.ms << " ms)";
    if (r.discrepancy) {
        const auto &d = *r.discrepancy;
        out << " first difference in '" << d.label << "' at ";
        if (d.key) out << "zeta^" << d.key->to_string() << " ";
        out << "q^" << d.exp.to_string() << ": " << d.lhs.to_string() << " vs " << d.rhs.to_string();
    }
    out << "\n";
}

struct VerifyArgs {
    Common common;
    std::string id;
    std::string params;
    bool mutate = false;
    bool order_given = false;
};

int reports_exit(const std::vector<IdentityReport> &reps, bool mutate)
{
    for (const auto &r : reps) {
        if (mutate ? !(r.discrepancy && r.mutation && *r.discrepancy == *r.mutation) : !r.equal) return kExitDiscrepancy;
    }
    return kExitOk;
}

int cmd_verify(const VerifyArgs &a, std::ostream &out)
{
    std::optional<Rational> order;
    if (a.order_given) order = a.common.rational_order();
    std::vector<IdentityReport> reps;
    if (a.id == "all") {
        if (!a.params.empty()) throw PreconditionError("--params needs a single identity id");
        reps = run_suite("*", {}, order, a.mutate);
    } else {
        json params = nullptr;
        if (!a.params.empty()) {
            try {
                params = json::parse(a.params);
            } catch (const json::parse_error &e) {
                throw PreconditionError(std::string("--params is not JSON: ") + e.what());
            }
        }
        reps.push_back(verify_identity(a.id, params, order, a.mutate));
    }
    if (a.common.as_json()) {
        if (a.id == "all") {
            json arr = json::array();
            for (const auto &r : reps) arr.push_back(to_json(r));
            out << arr.dump(2) << "\n";
        } else {
            out << to_json(reps.front()).dump(2) << "\n";
        }
    } else {
        for (const auto &r : reps) print_report(out, r);
    }
    return reports_exit(reps, a.mutate);
}

struct SuiteArgs {
    Common common;
    std::string filter = "*";
    bool mutate = false;
    bool order_given = false;
};

int cmd_suite(const SuiteArgs &a, std::ostream &out)
{
    std::optional<Rational> order;
    if (a.order_given) order = a.common.rational_order();
    auto reps = run_suite(a.filter, {}, order, a.mutate);
    std::size_t pass = 0;
    for (const auto &r : reps)
        if (a.mutate ? (r.discrepancy && r.mutation && *r.discrepancy == *r.mutation) : r.equal) ++pass;
    if (a.common.as_json()) {
        json arr = json::array();
        for (const auto &r : reps) arr.push_back(to_json(r));
        out << json{{"reports", arr}, {"passed", pass}, {"failed", reps.size() - pass}}.dump(2) << "\n";
    } else {
        for (const auto &r : reps) print_report(out, r);
        out << pass << " passed, " << reps.size() - pass << " failed" << (a.mutate ? " (mutation mode)" : "") << "\n";
    }
    return reports_exit(reps, a.mutate);
}

// ---- check ------------------------------------------------------------------

struct CheckArgs {
    Common common;
    std::string law;
    std::string gamma;
    std::string m;
    std::string l;
    std::string tau = "0.1+1.2i";
    std::string z = "0.21+0.3i,0.11+0.4i";
    double tolerance = 1e-8;
    bool grid = false;
};

std::vector<std::int64_t> ints(const std::string &s, std::size_t lo, std::size_t hi, const char *what)
{
    auto parts = split(s, ',');
    if (parts.size() < lo || parts.size() > hi) throw PreconditionError(std::string(what) + ": wrong number of values in '" + s + "'");
    std::vector<std::int64_t> out;
    for (const auto &p : parts) out.push_back(integer(Rational::parse(p), what));
    return out;
}

int cmd_check(const CheckArgs &a, std::ostream &out)
{
    const Law law = parse_law(a.law);
    std::vector<TransformationResidual> res;
    if (a.grid) {
        res = check_grid(law, a.tolerance);
    } else {
        SamplePoint p;
        p.tau = parse_complex(a.tau);
        auto zs = split(a.z, ',');
        if (zs.empty() || zs.size() > 2) throw PreconditionError("--z expects one or two complex numbers");
        p.z1 = parse_complex(zs[0]);
        p.z2 = zs.size() > 1 ? parse_complex(zs[1]) : cplx{0, 0};
        LawArgument arg;
        if (is_modular(law)) {
            if (a.gamma.empty()) throw PreconditionError(std::string(to_string(law)) + " needs --gamma a,b,c,d");
            auto g = ints(a.gamma, 4, 4, "--gamma");
            arg = ModularMatrix{g[0], g[1], g[2], g[3]};
        } else {
            if (a.m.empty()) throw PreconditionError(std::string(to_string(law)) + " needs --m");
            auto m = ints(a.m, 1, 2, "--m");
            auto l = a.l.empty() ? std::vector<std::int64_t>{0, 0} : ints(a.l, 1, 2, "--l");
            m.resize(2, 0);
            l.resize(2, 0);
            arg = EllipticShift{m[0], m[1], l[0], l[1]};
        }
        res.push_back(check_transformation(law, arg, p, a.tolerance));
    }
    bool ok = true;
    for (const auto &r : res) ok = ok && r.passed();
    if (a.common.as_json()) {
        if (res.size() == 1) {
            out << to_json(res.front()).dump(2) << "\n";
        } else {
            json arr = json::array();
            for (const auto &r : res) arr.push_back(to_json(r));
            out << arr.dump(2) << "\n";
        }
    } else {
        for (const auto &r : res) {
            out << to_string(r.law) << " ";
            if (const auto *g = std::get_if<ModularMatrix>(&r.arg))
                out << g->to_string();
            else
                out << std::get<EllipticShift>(r.arg).to_string();
            out << " tau=" << format_complex(r.point.tau) << " residual " << r.residual << (r.passed() ? " pass" : " FAIL") << "\n";
        }
    }
    return ok ? kExitOk : kExitDiscrepancy;
}

} // namespace

int run_cli(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"ftlab: false theta series, Jacobi forms and identity checks"};
    app.require_subcommand(1);

    ExpandArgs ex;
    auto *expand = app.add_subcommand("expand", "print a series expansion");
    expand->add_option("series", ex.name, "eta, theta, theta01, thetaA2, calT, f, J, kwN3, Gfrak, Ghyper, Hfrak, F0, "
                                          "coeffF, rankone, rogers, Fconst, partialThetaA2")
        ->required();
    add_common(expand, ex.common);
    expand->add_option("--window", ex.window, "exact window for two-variable series")->capture_default_str();
    expand->add_option("--p", ex.p)->capture_default_str();
    expand->add_option("--k", ex.k, "q -> q^k scale")->capture_default_str();
    expand->add_option("--region", ex.region, "INNER, OUTER or WIDE")->capture_default_str();
    expand->add_option("--lambda", ex.lambda, "a,b")->capture_default_str();
    expand->add_option("--r", ex.r, "r1,r2 (or r for rankone)")->capture_default_str();
    expand->add_option("--unit", ex.unit, "z1, z2 or z12")->capture_default_str();
    expand->add_option("--form", ex.form, "pair form for f, or GENERAL / P2SIMPLIFIED for F0");

    VerifyArgs ve;
    auto *verify = app.add_subcommand("verify", "verify one identity, or all");
    verify->add_option("id", ve.id, "identity id such as E15, or all")->required();
    add_common(verify, ve.common);
    verify->add_option("--params", ve.params, "JSON object overriding the default parameters");
    verify->add_flag("--mutate", ve.mutate, "plant one wrong coefficient and expect it to be found");

    CheckArgs ch;
    auto *check = app.add_subcommand("check", "numerically check a transformation law");
    check->add_option("law", ch.law, "THETA_MOD, THETA_ELL, F_MOD, F_ELL, T_MOD, T_ELL, J_MOD, J_ELL")->required();
    add_common(check, ch.common, false);
    check->add_option("--gamma", ch.gamma, "a,b,c,d");
    check->add_option("--m", ch.m, "m1,m2");
    check->add_option("--l", ch.l, "l1,l2");
    check->add_option("--tau", ch.tau)->capture_default_str();
    check->add_option("--z", ch.z, "z1,z2")->capture_default_str();
    check->add_option("--tolerance", ch.tolerance)->capture_default_str();
    check->add_flag("--grid", ch.grid, "run the registered points against the registered elements");

    SuiteArgs su;
    auto *suite = app.add_subcommand("suite", "run the identity registry (FTLAB_JOBS caps threads)");
    add_common(suite, su.common);
    suite->add_option("--filter", su.filter, "regular expression on ids")->capture_default_str();
    suite->add_flag("--mutate", su.mutate, "mutation self-test of the comparison engine");

    std::vector<const char *> cargs;
    for (const auto &s : argv) cargs.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    // an option counts as given only when it appears on the command line
    ve.order_given = verify->count("--order") > 0;
    su.order_given = suite->count("--order") > 0;

    try {
        if (*expand) return cmd_expand(ex, out);
        if (*verify) return cmd_verify(ve, out);
        if (*check) return cmd_check(ch, out);
        if (*suite) return cmd_suite(su, out);
    } catch (const MultiplierValidationError &e) {
        err << "error: " << e.what() << "\n";
        return kExitDiscrepancy;
    } catch (const std::invalid_argument &e) { // PreconditionError, UnknownIdentity, parse errors
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return kExitDiscrepancy;
    }
    return kExitUsage;
}

} // namespace ftlab
