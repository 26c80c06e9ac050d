#include "boundkde/quadrature.hpp"

#include "boundkde/error.hpp"

#include <cmath>
#include <numbers>

namespace boundkde {

Rule1d
gauss_legendre(std::size_t n)
{
  if (n == 0)
    throw Error(ErrorKind::invalid_argument, "gauss_legendre: n must be >= 1");

  Rule1d rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  // Newton iteration on P_n starting from the Chebyshev-like guess; roots
  // are symmetric so only half are computed.
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule1d
piecewise_gauss_legendre(const std::vector<double>& breaks,
                         std::size_t nodes_per_panel)
{
  if (breaks.size() < 2)
    throw Error(ErrorKind::invalid_argument,
                "piecewise_gauss_legendre: need at least two break points");
  const Rule1d base = gauss_legendre(nodes_per_panel);
  Rule1d rule;
  rule.nodes.reserve((breaks.size() - 1) * nodes_per_panel);
  rule.weights.reserve((breaks.size() - 1) * nodes_per_panel);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (!(hi >= lo))
      throw Error(ErrorKind::invalid_argument,
                  "piecewise_gauss_legendre: break points not ascending");
    if (hi == lo)
      continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < base.size(); ++q) {
      rule.nodes.push_back(mid + half * base.nodes[q]);
      rule.weights.push_back(half * base.weights[q]);
    }
  }
  return rule;
}

Rule1d
composite_gauss_legendre(double a,
                         double b,
                         std::size_t panels,
                         std::size_t nodes_per_panel)
{
  if (panels == 0)
    throw Error(ErrorKind::invalid_argument,
                "composite_gauss_legendre: panels must be >= 1");
  std::vector<double> breaks(panels + 1);
  for (std::size_t k = 0; k <= panels; ++k)
    breaks[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(panels);
  breaks.back() = b;
  return piecewise_gauss_legendre(breaks, nodes_per_panel);
}

} // namespace boundkde
