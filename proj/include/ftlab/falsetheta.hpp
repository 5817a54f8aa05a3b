#pragma once

// Rank-two false theta series of A2 type and their relatives.
//
// All lattice sums are truncated exactly at the requested order. Enumeration
// boxes come from the smallest eigenvalue of the quadratic part plus one
// extra shell.

#include <cstdint>
#include <utility>

#include "ftlab/series.hpp"

namespace ftlab {

/// Parameters of a lattice series: the level p, a shift lambda, an index r.
struct LatticeParams {
    int p = 2;
    std::pair<Rational, Rational> lambda{0, 0};
    std::pair<Rational, Rational> r{0, 0};

    /// Throws PreconditionError when p < 2.
    void validate() const;
};

/// 1 if n >= 0, else -1.
int sgn_star(std::int64_t n);
/// (sgn*(a) + sgn*(b)) / 2, in {-1, 0, 1}.
int rho(std::int64_t a, std::int64_t b);

/// n1^2 + n2^2 - n1 n2.
Rational Q(const Rational &n1, const Rational &n2);
/// z1^2 + z2^2 + z1 z2.
Rational Qstar(const Rational &z1, const Rational &z2);

/// sum_{n in N^2} min(n1, n2) q^{p Q(n + lambda - (1/p, 1/p))} times the
/// six-term bracket in a = n1 + lambda1, b = n2 + lambda2.
PuiseuxSeries G_frak(const Rational &l1, const Rational &l2, int p, const Rational &order);

/// The p = 2 three-sum form:
/// sum_{N0^2} q^{2Q(n+lambda+(1/2,1/2))} - sum_{n2>n1>=0} q^{2Q(n+lambda+(1/2,0))}
///   - sum_{n1>n2>=0} q^{2Q(n+lambda+(0,1/2))}.
PuiseuxSeries G_frak_rewrite_p2(const Rational &l1, const Rational &l2, const Rational &order);

enum class ClosedForm {
    Rho,    ///< n1 >= 0, n2 in Z, weight rho(n2, n2 + r2)
    RhoRho, ///< n in Z^2, weight rho(n1, n2 + r1) rho(n2 + r2, n2)
    Split,  ///< (sum over N0^2) + (sum over n1 < 0, n2 < -r2), weight (-1)^n1
};

/// q^{-2/3 Q(r)} G_frak at lambda = ((r1+r2)/3, (2 r2 - r1)/3), p = 2, as the
/// double sum with exponent n1(n1+1)/2 + n1 n2 + 2 n2^2 + r1 n1 + 2 r2 n2 + 2 n2 + r2 + 1/2.
PuiseuxSeries G_frak_closed_p2(std::int64_t r1, std::int64_t r2, const Rational &order,
                               ClosedForm form = ClosedForm::Rho);

/// Fourier coefficient of F(zeta1, zeta2; q) at zeta^r, read off termwise
/// after expanding the Weyl denominator in non-positive powers.
PuiseuxSeries coeff_F(std::int64_t r1, std::int64_t r2, int p, const Rational &order);

/// The constant term of F as the congruence-restricted quadrant sum.
PuiseuxSeries F_constant_term(int p, const Rational &order);

/// sum_{n in N0^2} min(n1, n2) q^{p Q(n + lambda - (1/p, 1/p))}.
PuiseuxSeries partial_theta_A2(const Rational &l1, const Rational &l2, int p, const Rational &order);

/// sum_{n >= 0} q^n / ((q;q)_n (q;q)_{n+m}).
PuiseuxSeries hyper_S(std::int64_t m, const Rational &order);

/// The quadruple sum G_r(q).
PuiseuxSeries G_hyper(std::int64_t r1, std::int64_t r2, const Rational &order);

/// H_r for r1 in 1/2 + Z, r2 in Z, through the shifted expansion of f.
PuiseuxSeries H_frak(const Rational &r1, const Rational &r2, const Rational &order);

/// H_r from the theta quotient itself: three one-variable factors convolved.
PuiseuxSeries H_frak_direct(const Rational &r1, const Rational &r2, const Rational &order);

enum class F0Form {
    General,      ///< (1/2) sum (2n1-n2)(2n2-n1)(n1+n2) q^{pQ(n-(1/p,1/p))}
    P2Simplified, ///< (1/4) sum (12 n1 n2 - 3 n1^2 - 3 n2^2 - n1 - n2) q^{2Q(n-(1/2,1/2))}
};

std::string_view to_string(F0Form f);
F0Form parse_f0_form(std::string_view s);

PuiseuxSeries F0_series(int p, const Rational &order, F0Form form = F0Form::General);

/// sum_{n in Z^2} (n1 + n2 - 1) q^{2Q(n-(1/2,1/2))}; identically zero.
PuiseuxSeries f0_vanishing_sum(const Rational &order);

/// Coefficient of zeta^{2r} in the rank-one series:
/// sum_{n >= |r|} q^{p(n+c)^2} - sum_{n <= -|r|-1} q^{p(n+c)^2}, c = (p-1)/(2p).
PuiseuxSeries rank_one_coeff(int p, std::int64_t r, const Rational &order);

/// sum_{n >= 0} (-1)^n q^{n(n+1)/2}.
PuiseuxSeries rogers_false_theta(const Rational &order);

/// sum_{n in Z} (-1)^n q^{n(n+1)/2 + k n}; identically zero.
PuiseuxSeries vanishing_sum(std::int64_t k, const Rational &order);

} // namespace ftlab
