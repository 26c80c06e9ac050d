#include "boundkde/lp_engine.hpp"

#include "boundkde/error.hpp"
#include "boundkde/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace boundkde {

QuadratureConfig
QuadratureConfig::resolved(std::size_t d) const
{
  QuadratureConfig out = *this;
  if (out.panels == 0)
    out.panels = d == 1 ? 32 : (d == 2 ? 16 : 8);
  if (out.nodes == 0)
    out.nodes = d == 1 ? 8 : (d == 2 ? 4 : 2);
  return out;
}

CubeGrid::CubeGrid(std::size_t d, QuadratureConfig quad)
  : quad_(quad.resolved(d))
{
  if (d == 0 || d > 16)
    throw Error(ErrorKind::invalid_argument, "CubeGrid: dimension must be in 1..16");
  const Rule1d left = composite_gauss_legendre(0.0, 0.5, quad_.panels, quad_.nodes);
  const Rule1d right = composite_gauss_legendre(0.5, 1.0, quad_.panels, quad_.nodes);
  std::vector<double> axis_nodes = left.nodes;
  axis_nodes.insert(axis_nodes.end(), right.nodes.begin(), right.nodes.end());
  std::vector<double> axis_weights = left.weights;
  axis_weights.insert(axis_weights.end(), right.weights.begin(), right.weights.end());
  const std::size_t half = left.size();

  tensor_.axes.assign(d, axis_nodes);
  const std::size_t total = tensor_.size();
  weights_.resize(total);
  quadrants_.resize(total);
  const std::size_t len = axis_nodes.size();
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    double w = 1.0;
    QuadrantMask mask = 0;
    for (std::size_t i = d; i-- > 0;) {
      const std::size_t g = rem % len;
      rem /= len;
      w *= axis_weights[g];
      if (g >= half)
        mask |= QuadrantMask{ 1 } << i;
    }
    weights_[k] = w;
    quadrants_[k] = mask;
  }
}

QuadrantGrid
CubeGrid::quadrant(QuadrantMask eps) const
{
  const std::size_t d = dim();
  if (eps >> d)
    throw Error(ErrorKind::invalid_argument, "quadrant label has bits beyond the dimension");
  QuadrantGrid q;
  q.d = d;
  q.eps = eps;
  std::vector<double> pt(d);
  for (std::size_t k = 0; k < size(); ++k) {
    if (quadrants_[k] != eps)
      continue;
    tensor_.point(k, pt);
    q.nodes.insert(q.nodes.end(), pt.begin(), pt.end());
    q.weights.push_back(weights_[k]);
    q.cube_index.push_back(k);
  }
  return q;
}

namespace {

void
check_grid(std::span<const double> values, const CubeGrid& grid)
{
  if (values.size() != grid.size())
    throw Error(ErrorKind::grid_mismatch,
                "values of length " + std::to_string(values.size()) +
                  " do not match a grid of " + std::to_string(grid.size()) + " nodes");
}

void
check_p(double p, double min)
{
  if (!(p >= min) || !std::isfinite(p))
    throw Error(ErrorKind::invalid_argument, "invalid norm exponent p=" + std::to_string(p));
}

} // namespace

namespace {

// (sum_k w_k |v_k|^p)^(1/p) over the selected nodes, scaled by max |v_k| so
// that multiplying v by a power of two scales the result exactly.
template<class Value, class Keep>
double
scaled_norm(std::size_t size, const std::vector<double>& w, double p, Value value, Keep keep)
{
  double top = 0.0;
  for (std::size_t k = 0; k < size; ++k)
    if (keep(k))
      top = std::max(top, std::abs(value(k)));
  if (top == 0.0)
    return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < size; ++k)
    if (keep(k))
      acc += w[k] * std::pow(std::abs(value(k)) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

} // namespace

double
lp_norm(std::span<const double> values, const CubeGrid& grid, double p)
{
  check_grid(values, grid);
  check_p(p, 1.0);
  return scaled_norm(
    values.size(), grid.weights(), p, [&](std::size_t k) { return values[k]; }, [](std::size_t) {
      return true;
    });
}

double
lp_norm_quadrant(std::span<const double> values,
                 const CubeGrid& grid,
                 QuadrantMask eps,
                 double p)
{
  check_grid(values, grid);
  check_p(p, 1.0);
  const auto& q = grid.quadrants();
  return scaled_norm(
    values.size(),
    grid.weights(),
    p,
    [&](std::size_t k) { return values[k]; },
    [&](std::size_t k) { return q[k] == eps; });
}

double
lp_distance(std::span<const double> a,
            std::span<const double> b,
            const CubeGrid& grid,
            double p)
{
  check_grid(a, grid);
  check_grid(b, grid);
  check_p(p, 1.0);
  return scaled_norm(
    a.size(), grid.weights(), p, [&](std::size_t k) { return a[k] - b[k]; }, [](std::size_t) {
      return true;
    });
}

double
rosenthal_constant(double p)
{
  return 14.7 * p / std::log(p);
}

double
product_kernel_norm(const ProductKernelSpec& spec, double p)
{
  double out = 1.0;
  for (const auto& k : spec.kernels())
    out *= kernel_lp_norm(k, p);
  return out;
}

double
lambda_hat(const ProductKernelSpec& spec,
           const SampleSet& sample,
           double p,
           const QuadrantGrid& quadrant)
{
  if (!(p > 2.0))
    throw Error(ErrorKind::invalid_argument, "lambda_hat is defined for p > 2 only");
  if (quadrant.d != spec.dim() || sample.dim() != spec.dim())
    throw Error(ErrorKind::grid_mismatch, "lambda_hat: dimension mismatch");
  const double n = static_cast<double>(sample.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < quadrant.size(); ++k) {
    const auto t = quadrant.node(k);
    double sq = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const double v = boundary_kernel_eval(spec, t, sample.point(j));
      sq += v * v;
    }
    acc += quadrant.weights[k] * std::pow(sq / n, p / 2.0);
  }
  return std::sqrt(spec.volume()) * std::pow(acc, 1.0 / p);
}

double
lambda_hat_from_moments(std::span<const double> mean_square,
                        const CubeGrid& grid,
                        QuadrantMask eps,
                        double volume,
                        double p)
{
  if (!(p > 2.0))
    throw Error(ErrorKind::invalid_argument, "lambda_hat is defined for p > 2 only");
  check_grid(mean_square, grid);
  const auto& w = grid.weights();
  const auto& q = grid.quadrants();
  double acc = 0.0;
  for (std::size_t k = 0; k < mean_square.size(); ++k)
    if (q[k] == eps)
      acc += w[k] * std::pow(mean_square[k], p / 2.0);
  return std::sqrt(volume) * std::pow(acc, 1.0 / p);
}

double
gamma_from_lambda(const ProductKernelSpec& spec, double p, double lambda)
{
  check_p(p, 1.0);
  if (p <= 2.0) {
    const double d = static_cast<double>(spec.dim());
    return std::pow(2.0, -d * (2.0 - p) / (2.0 * p)) * product_kernel_norm(spec, 2.0);
  }
  return rosenthal_constant(p) * (lambda + 2.0 * product_kernel_norm(spec, p));
}

double
gamma_hat(const ProductKernelSpec& spec,
          const SampleSet& sample,
          double p,
          const QuadrantGrid& quadrant)
{
  check_p(p, 1.0);
  const double lambda = p > 2.0 ? lambda_hat(spec, sample, p, quadrant) : 0.0;
  return gamma_from_lambda(spec, p, lambda);
}

double
m_hat_from_moments(const ProductKernelSpec& spec,
                   std::size_t n,
                   double p,
                   std::span<const double> mean_square,
                   const CubeGrid& grid)
{
  check_p(p, 1.0);
  const QuadrantMask quadrants = QuadrantMask{ 1 } << spec.dim();
  double sum = 0.0;
  if (p <= 2.0) {
    sum = static_cast<double>(quadrants) * gamma_from_lambda(spec, p, 0.0);
  } else {
    const double c = rosenthal_constant(p);
    const double wp = product_kernel_norm(spec, p);
    for (QuadrantMask eps = 0; eps < quadrants; ++eps) {
      const double lambda = lambda_hat_from_moments(mean_square, grid, eps, spec.volume(), p);
      sum += c * (lambda + 2.0 * wp);
    }
  }
  return sum / std::sqrt(static_cast<double>(n) * spec.volume());
}

double
m_hat(const FamilyConfig& cfg,
      const FamilyIndex& idx,
      const SampleSet& sample,
      double p,
      const CubeGrid& grid)
{
  if (static_cast<std::size_t>(cfg.n) != sample.size())
    throw Error(ErrorKind::invalid_argument,
                "m_hat: family configured for n=" + std::to_string(cfg.n) +
                  " but the sample has " + std::to_string(sample.size()) + " points");
  const ProductKernelSpec spec = family_member(cfg, idx);
  if (p <= 2.0)
    return m_hat_from_moments(spec, sample.size(), p, {}, grid);
  const GridMoments moments = estimate_grid_moments(spec, sample, grid.tensor());
  return m_hat_from_moments(spec, sample.size(), p, moments.mean_square, grid);
}

double
m_hat_pair(const FamilyConfig& cfg,
           const FamilyIndex& ell,
           const FamilyIndex& ell_prime,
           const SampleSet& sample,
           double p,
           const CubeGrid& grid)
{
  const FamilyIndex lower = index_min(ell, ell_prime);
  // V_h only grows under the coordinatewise minimum and each h_i is inherited
  // from an operand, so the minimum stays in H_n.
  if (!in_family(cfg, lower))
    throw Error(ErrorKind::index_not_in_family,
                "m_hat_pair: coordinatewise minimum left the family");
  return m_hat(cfg, ell_prime, sample, p, grid) + m_hat(cfg, lower, sample, p, grid);
}

} // namespace boundkde
