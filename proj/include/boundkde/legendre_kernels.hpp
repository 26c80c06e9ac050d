#pragma once

#include <vector>

namespace boundkde {

//! Largest kernel order accepted by make_w unless overridden.
inline constexpr int default_max_order = 40;

//! Largest order for which the Hilbert-matrix solve is attempted.
inline constexpr int hilbert_max_order = 8;

//! Orthonormal shifted Legendre function sqrt(2r+1) * P_r(2u - 1) on [0, 1].
double legendre_phi(int r, double u);

//! Univariate polynomial kernel w_m supported on [0, 1].
//!
//! w_m is the order-m kernel of minimal L2 norm: it integrates to one and
//! annihilates the moments u^1, ..., u^m. It is stored both as monomial
//! coefficients and as coefficients in the orthonormal Legendre basis;
//! evaluation always goes through the Legendre three-term recurrence, which
//! stays accurate where the monomial form cancels catastrophically.
class OrderedKernel
{
public:
  OrderedKernel() = default;

  int order() const { return order_; }

  //! Monomial coefficients (a_0, ..., a_m).
  const std::vector<double>& coeffs() const { return coeffs_; }

  //! Coefficients c_r of w_m = sum_r c_r * legendre_phi(r, .).
  const std::vector<double>& legendre_coeffs() const { return legendre_coeffs_; }

  //! (m + 1)^2, attained at u = 0.
  double sup_norm() const;
  //! m + 1.
  double l2_norm() const;

  //! Kernel value; zero outside the closed interval [0, 1].
  double operator()(double u) const;

  friend bool operator==(const OrderedKernel&, const OrderedKernel&) = default;

private:
  friend OrderedKernel make_w(int m, int max_order);

  int order_ = 0;
  std::vector<double> coeffs_{ 1.0 };
  std::vector<double> legendre_coeffs_{ 1.0 };
  // (-1)^r (2r + 1): weights of the unnormalised P_r(2u - 1).
  std::vector<double> recurrence_weights_{ 1.0 };
};

//! Builds w_m from its Legendre expansion. Throws OrderTooLarge when
//! m > max_order and InvalidArgument when m < 0.
OrderedKernel make_w(int m, int max_order = default_max_order);

//! Monomial coefficients of w_m obtained by solving the Hilbert system
//! H_m a = e_0 in exact rational arithmetic. Only valid for m <= 8.
std::vector<double> hilbert_coeffs(int m);

//! Kernel value at u (zero outside [0, 1]).
double kernel_eval(const OrderedKernel& k, double u);

//! Horner evaluation of the monomial form. Accurate only for small orders;
//! exposed for cross-checks.
double kernel_eval_monomial(const OrderedKernel& k, double u);

//! (int_0^1 |w_m|^p)^(1/p). Closed form for p = 2, otherwise Gauss
//! quadrature on panels split at the real roots of w_m.
double kernel_lp_norm(const OrderedKernel& k, double p);

//! Real roots of w_m inside (0, 1), ascending.
std::vector<double> kernel_roots(const OrderedKernel& k);

} // namespace boundkde
