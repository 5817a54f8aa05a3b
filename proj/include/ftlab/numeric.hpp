#pragma once

// Double-precision evaluation at points of C^2 x H and numerical checks of
// the modular and elliptic transformation laws.
//
// Truncation: every lattice or product is summed until the first omitted
// term is below kTailBound relative to 1; for Gaussian sums this bounds the
// whole tail by a geometric series of ratio < 1/2 once the terms are that
// small, so the truncation error is at most 2 * kTailBound.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ftlab/bilaurent.hpp"

namespace ftlab {

using cplx = std::complex<double>;

inline constexpr double kTailBound = 1e-18;

/// A point of C^2 x H.
struct SamplePoint {
    cplx tau;
    cplx z1;
    cplx z2;

    /// Throws PreconditionError when Im(tau) <= 0.
    void validate() const;
};

/// The evaluation point is within 1e-6 of a zero of a theta denominator.
class NearPoleError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// The eta multiplier convention failed its own functional equation.
class MultiplierValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModularMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    /// Throws PreconditionError unless ad - bc = 1.
    void validate() const;
    [[nodiscard]] bool in_gamma0(std::int64_t level) const { return c % level == 0; }
    /// (a, 2b; c/2, d); requires c even.
    [[nodiscard]] ModularMatrix halved() const;
    [[nodiscard]] cplx act(cplx tau) const { return (double(a) * tau + double(b)) / (double(c) * tau + double(d)); }
    [[nodiscard]] cplx j(cplx tau) const { return double(c) * tau + double(d); }
    [[nodiscard]] std::string to_string() const;
};

/// z -> z + m tau + l. One-variable laws use (m1, l1) only.
struct EllipticShift {
    std::int64_t m1 = 0, m2 = 0, l1 = 0, l2 = 0;
    [[nodiscard]] std::string to_string() const;
};

/// theta(z; k tau) = sum_{n in 1/2+Z} q^{k n^2/2} e^{2 pi i n (z + 1/2)}.
cplx eval_theta(cplx z, cplx tau, int k = 1);
/// The same value from the triple product -i q^{k/8} zeta^{-1/2} (zeta, zeta^-1 q^k, q^k; q^k).
cplx eval_theta_product(cplx z, cplx tau, int k = 1);
/// q^{1/24} prod (1 - q^n).
cplx eval_eta(cplx tau);
/// Six-theta quotient; NearPoleError when a denominator theta is below 1e-6.
cplx eval_f(cplx z1, cplx z2, cplx tau);
/// Theta_A2(z1 + 2 z2, z1 - z2; 2 tau).
cplx eval_T(cplx z1, cplx z2, cplx tau);
/// eta^5 / eta(2 tau) * T * f.
cplx eval_J(cplx z1, cplx z2, cplx tau);

/// sum c q^e with q^e = exp(2 pi i e tau).
cplx eval_series(const PuiseuxSeries &s, cplx tau);
/// Termwise sum c(q) zeta1^e1 zeta2^e2 with zeta_j = exp(2 pi i z_j).
cplx eval_bilaurent(const BiLaurentSeries &s, cplx z1, cplx z2, cplx tau);

/// s(d, c) = sum_{k=1}^{c-1} ((k/c)) ((k d / c)); c > 0, gcd(c, d) = 1.
Rational dedekind_sum(std::int64_t d, std::int64_t c);

/// chi with eta(g tau) = chi(g) (c tau + d)^{1/2} eta(tau), principal root.
cplx eta_multiplier(const ModularMatrix &g);

/// Checks the eta functional equation for `chi` at three fixed tau; returns
/// the largest relative residual. Throws MultiplierValidationError above 1e-9.
double validate_eta_multiplier(const ModularMatrix &g,
                               const std::function<cplx(const ModularMatrix &)> &chi = eta_multiplier);

/// Jacobi symbol (a/n), n odd and positive.
int jacobi_symbol(std::int64_t a, std::int64_t n);

enum class Law { ThetaMod, ThetaEll, FMod, FEll, TMod, TEll, JMod, JEll };

std::string_view to_string(Law l);
Law parse_law(std::string_view s);
[[nodiscard]] bool is_modular(Law l);

using LawArgument = std::variant<ModularMatrix, EllipticShift>;

struct TransformationResidual {
    Law law = Law::ThetaMod;
    SamplePoint point;
    LawArgument arg;
    double residual = 0;
    double tolerance = 1e-8;

    [[nodiscard]] bool passed() const { return residual < tolerance; }
};

/// |LHS - factor * RHS| / max(1, |RHS|) for the chosen law. Membership of
/// the group element or lattice vector is enforced (PreconditionError).
TransformationResidual check_transformation(Law law, const LawArgument &arg, const SamplePoint &p,
                                            double tolerance = 1e-8);

/// Five fixed sample points with Im(tau) >= 0.5.
const std::vector<SamplePoint> &registered_points();
/// Five (or more) group elements or lattice shifts valid for `law`.
std::vector<LawArgument> registered_arguments(Law law);
/// Every registered point against every registered argument.
std::vector<TransformationResidual> check_grid(Law law, double tolerance = 1e-8);

/// "re+imi", "re-imi", "re", "imi".
cplx parse_complex(std::string_view s);
std::string format_complex(cplx z);

nlohmann::json to_json(const TransformationResidual &r);

} // namespace ftlab
