#include "boundkde/legendre_kernels.hpp"

#include "boundkde/error.hpp"
#include "boundkde/quadrature.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>

namespace boundkde {

namespace {

// Unnormalised Legendre polynomial P_r(x) by the three-term recurrence.
double
legendre_p(int r, double x)
{
  if (r == 0)
    return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 1; k < r; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

long double
binomial(int n, int k)
{
  long double out = 1.0L;
  for (int i = 1; i <= k; ++i)
    out = out * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return out;
}

} // namespace

double
legendre_phi(int r, double u)
{
  return std::sqrt(2.0 * r + 1.0) * legendre_p(r, 2.0 * u - 1.0);
}

double
OrderedKernel::sup_norm() const
{
  const double m1 = order_ + 1.0;
  return m1 * m1;
}

double
OrderedKernel::l2_norm() const
{
  return order_ + 1.0;
}

double
OrderedKernel::operator()(double u) const
{
  if (u < 0.0 || u > 1.0 || std::isnan(u))
    return 0.0;
  if (order_ == 0)
    return 1.0;
  const double x = 2.0 * u - 1.0;
  double p0 = 1.0;
  double p1 = x;
  double sum = recurrence_weights_[0] + recurrence_weights_[1] * x;
  for (int k = 1; k < order_; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    sum += recurrence_weights_[k + 1] * p1;
  }
  return sum;
}

OrderedKernel
make_w(int m, int max_order)
{
  if (m < 0)
    throw Error(ErrorKind::invalid_argument, "make_w: order must be >= 0");
  if (m > max_order)
    throw Error(ErrorKind::order_too_large,
                "make_w: order " + std::to_string(m) + " exceeds maximum " +
                  std::to_string(max_order));

  OrderedKernel k;
  k.order_ = m;
  k.legendre_coeffs_.resize(m + 1);
  k.recurrence_weights_.resize(m + 1);
  for (int r = 0; r <= m; ++r) {
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    // phi_r(0) = (-1)^r sqrt(2r + 1)
    k.legendre_coeffs_[r] = sign * std::sqrt(2.0 * r + 1.0);
    k.recurrence_weights_[r] = sign * (2.0 * r + 1.0);
  }

  // P_r(2u - 1) = sum_k (-1)^(r + k) C(r, k) C(r + k, k) u^k, so the
  // monomial coefficients are a_k = (-1)^k sum_{r >= k} (2r + 1) C(r, k) C(r + k, k).
  k.coeffs_.resize(m + 1);
  for (int j = 0; j <= m; ++j) {
    long double acc = 0.0L;
    for (int r = j; r <= m; ++r)
      acc += (2.0L * r + 1.0L) * binomial(r, j) * binomial(r + j, j);
    k.coeffs_[j] = static_cast<double>((j % 2 == 0) ? acc : -acc);
  }
  return k;
}

std::vector<double>
hilbert_coeffs(int m)
{
  using boost::multiprecision::cpp_rational;
  if (m < 0)
    throw Error(ErrorKind::invalid_argument, "hilbert_coeffs: order must be >= 0");
  if (m > hilbert_max_order)
    throw Error(ErrorKind::order_too_large,
                "hilbert_coeffs: order " + std::to_string(m) +
                  " exceeds Hilbert limit " + std::to_string(hilbert_max_order));

  const int size = m + 1;
  // augmented matrix [H | e_0]
  std::vector<std::vector<cpp_rational>> a(size, std::vector<cpp_rational>(size + 1));
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j)
      a[i][j] = cpp_rational(1, i + j + 1);
    a[i][size] = (i == 0) ? cpp_rational(1) : cpp_rational(0);
  }
  // Hilbert matrices are positive definite: no pivoting needed in exact arithmetic.
  for (int col = 0; col < size; ++col) {
    for (int row = col + 1; row < size; ++row) {
      const cpp_rational factor = a[row][col] / a[col][col];
      for (int j = col; j <= size; ++j)
        a[row][j] -= factor * a[col][j];
    }
  }
  std::vector<cpp_rational> x(size);
  for (int row = size - 1; row >= 0; --row) {
    cpp_rational acc = a[row][size];
    for (int j = row + 1; j < size; ++j)
      acc -= a[row][j] * x[j];
    x[row] = acc / a[row][row];
  }
  std::vector<double> out(size);
  for (int i = 0; i < size; ++i)
    out[i] = x[i].convert_to<double>();
  return out;
}

double
kernel_eval(const OrderedKernel& k, double u)
{
  return k(u);
}

double
kernel_eval_monomial(const OrderedKernel& k, double u)
{
  if (u < 0.0 || u > 1.0 || std::isnan(u))
    return 0.0;
  const auto& a = k.coeffs();
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it)
    acc = acc * u + *it;
  return acc;
}

std::vector<double>
kernel_roots(const OrderedKernel& k)
{
  std::vector<double> roots;
  if (k.order() == 0)
    return roots;
  const int samples = 400 * (k.order() + 1);
  double prev_u = 0.0;
  double prev_v = k(0.0);
  for (int s = 1; s <= samples; ++s) {
    const double u = static_cast<double>(s) / samples;
    const double v = k(u);
    if (v == 0.0) {
      roots.push_back(u);
    } else if ((prev_v < 0.0) != (v < 0.0) && prev_v != 0.0) {
      double lo = prev_u;
      double hi = u;
      double flo = prev_v;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = k(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_u = u;
    prev_v = v;
  }
  if (!roots.empty() && roots.back() >= 1.0)
    roots.pop_back();
  return roots;
}

double
kernel_lp_norm(const OrderedKernel& k, double p)
{
  if (!(p >= 1.0))
    throw Error(ErrorKind::invalid_argument, "kernel_lp_norm: p must be >= 1");
  if (k.order() == 0)
    return 1.0;
  if (p == 2.0) {
    double acc = 0.0;
    for (double c : k.legendre_coeffs())
      acc += c * c;
    return std::sqrt(acc);
  }

  std::vector<double> breaks{ 0.0 };
  for (double r : kernel_roots(k))
    breaks.push_back(r);
  breaks.push_back(1.0);

  // |w|^p is smooth inside each sign-constant piece; refine each piece so the
  // algebraic behaviour at the roots is resolved.
  constexpr int sub_panels = 32;
  std::vector<double> fine{ breaks.front() };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    for (int s = 1; s <= sub_panels; ++s)
      fine.push_back(lo + (hi - lo) * static_cast<double>(s) / sub_panels);
    fine.back() = hi;
  }
  const Rule1d rule = piecewise_gauss_legendre(fine, 20);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    acc += rule.weights[q] * std::pow(std::abs(k(rule.nodes[q])), p);
  return std::pow(acc, 1.0 / p);
}

} // namespace boundkde
