#pragma once

// Theta functions and the Jacobi forms built from them.
//
// Normalization: the formal layer works with theta_hat := i * theta, i.e.
//   theta_hat(u; q^k) = q^{k/8} u^{-1/2} (u, u^{-1} q^k, q^k; q^k)_inf
//                     = sum_{n in 1/2 + Z} (-1)^{n + 1/2} q^{k n^2 / 2} u^n,
// which has rational coefficients. Ratios of thetas never divide series;
// they are assembled from the closed form
//   theta(z; 2 tau) / theta(z; tau) = q^{1/8} (-q; q)_inf / (u q, u^-1 q; q^2)_inf.
//
// Every builder takes the target q-order N and returns a series exact below
// N (prefactor valuations are compensated internally). An optional window
// restricts the result to |e1|, |e2| <= W.

#include <optional>

#include "ftlab/bilaurent.hpp"

namespace ftlab {

enum class ThetaForm {
    Product, ///< triple product
    Sum,     ///< half-integer indexed sum
};

/// theta_hat(u; q^k) for k in {1, 2}.
BiLaurentSeries theta_hat(Unit u, int k, const Rational &qorder, std::optional<Rational> window = std::nullopt,
                          ThetaForm form = ThetaForm::Product, Region region = Region::Inner);

/// theta01(u; q^k) = (q^k, u q^{k/2}, u^-1 q^{k/2}; q^k)_inf.
BiLaurentSeries theta01(Unit u, int k, const Rational &qorder, std::optional<Rational> window = std::nullopt,
                        ThetaForm form = ThetaForm::Product, Region region = Region::Inner);

/// sum_{n in Z^2} q^{Q(n)} zeta1^n1 zeta2^n2.
BiLaurentSeries theta_A2(const Rational &qorder, std::optional<Rational> window = std::nullopt,
                         Region region = Region::Inner);

/// Theta_A2(z1 + 2 z2, z1 - z2; 2 tau): q^{2Q(n)} at key (n1 + n2, 2 n1 - n2).
BiLaurentSeries calT(const Rational &qorder, std::optional<Rational> window = std::nullopt,
                     Region region = Region::Inner);

/// Expansions of 1 / (u q, u^-1 q; q^2)_inf.
enum class PairForm {
    Geometric,  ///< product of single-factor geometric expansions
    Pochhammer, ///< sum q^{|n1| + 2 n2} / ((q^2;q^2)_{n2} (q^2;q^2)_{|n1|+n2}) u^n1
    Middle,     ///< (q^2;q^2)^-2 sum_{n2 >= |n1|} (-1)^{n1+n2} q^{n2(n2+1) - n1^2} u^n1
    Quadratic,  ///< (q^2;q^2)^-1 sum q^{2 n2^2 + 2 n2 (|n1|+1) + |n1|} / (...) u^n1
};

std::string_view to_string(PairForm f);
PairForm parse_pair_form(std::string_view s);

/// 1 / (u q, u^-1 q; q^2)_inf along the direction `dir` (u = zeta^dir).
/// INNER or WIDE; the expansion is the same in both.
BiLaurentSeries inverse_pair(const Key &dir, PairForm form, const Rational &qorder, Region region = Region::Inner);

/// (u q, u^-1 q; q^2)_inf as a finite product.
BiLaurentSeries pair_product(const Key &dir, const Rational &qorder, Region region = Region::Inner);

/// q^{1/8} (-q; q)_inf.
PuiseuxSeries theta_ratio_prefactor(const Rational &order);

/// theta(z; 2 tau) / theta(z; tau) along `dir`.
BiLaurentSeries theta_ratio(const Key &dir, PairForm form, const Rational &qorder, Region region = Region::Inner);

/// f = product of theta_ratio over the units zeta1, zeta2, zeta1 zeta2.
BiLaurentSeries f_series(const Rational &qorder, std::optional<Rational> window = std::nullopt,
                         Region region = Region::Inner, PairForm form = PairForm::Geometric);

/// Single Fourier coefficient of f, without building the whole series.
PuiseuxSeries f_coeff(const Rational &r1, const Rational &r2, const Rational &order, PairForm form = PairForm::Pochhammer);

/// eta(tau)^5 / eta(2 tau).
PuiseuxSeries eta5_over_eta2(const Rational &order);

/// J = eta^5 / eta(2 tau) * calT * f.
BiLaurentSeries J_series(const Rational &qorder, std::optional<Rational> window = std::nullopt,
                         PairForm form = PairForm::Pochhammer);

/// (eta / eta(2 tau)) * f.
BiLaurentSeries kw_character_N3(const Rational &qorder, std::optional<Rational> window = std::nullopt);

/// The same character assembled generically: product over 1 <= j <= k <= N-1
/// of the ratio along z_j + ... + z_k, times (eta / eta(2 tau))^{(N-1)(N-2)/2}.
/// Each ratio uses the eta-quotient form q^{1/12} eta(2 tau) / eta(tau) / (...)
/// and the Pochhammer pair expansion. Only N = 3 is supported.
BiLaurentSeries kw_character_generic(int N, const Rational &qorder, std::optional<Rational> window = std::nullopt);

} // namespace ftlab
