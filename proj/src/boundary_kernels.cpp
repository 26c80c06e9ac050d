#include "boundkde/boundary_kernels.hpp"

#include "boundkde/error.hpp"
#include "boundkde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>

namespace boundkde {

SampleSet::SampleSet(std::size_t dim, std::vector<double> row_major)
  : dim_(dim)
  , data_(std::move(row_major))
{
  if (dim_ == 0)
    throw Error(ErrorKind::invalid_argument, "SampleSet: dimension must be >= 1");
  if (data_.empty() || data_.size() % dim_ != 0)
    throw Error(ErrorKind::invalid_argument,
                "SampleSet: buffer of size " + std::to_string(data_.size()) +
                  " does not hold a positive number of " + std::to_string(dim_) +
                  "-dimensional points");
  for (std::size_t k = 0; k < data_.size(); ++k) {
    const double v = data_[k];
    if (!(v >= 0.0 && v <= 1.0))
      throw Error(ErrorKind::out_of_domain,
                  "SampleSet: point " + std::to_string(k / dim_ + 1) + " coordinate " +
                    std::to_string(k % dim_ + 1) + " is outside [0,1]",
                  k / dim_ + 1,
                  k % dim_ + 1);
  }
}

ProductKernelSpec::ProductKernelSpec(std::vector<OrderedKernel> kernels,
                                     std::vector<double> bandwidth)
  : kernels_(std::move(kernels))
  , bandwidth_(std::move(bandwidth))
{
  if (kernels_.empty())
    throw Error(ErrorKind::invalid_argument, "ProductKernelSpec: dimension must be >= 1");
  if (kernels_.size() != bandwidth_.size())
    throw Error(ErrorKind::invalid_argument,
                "ProductKernelSpec: " + std::to_string(kernels_.size()) + " kernels but " +
                  std::to_string(bandwidth_.size()) + " bandwidths");
  volume_ = 1.0;
  for (double h : bandwidth_) {
    if (!(h > 0.0 && h < 0.5))
      throw Error(ErrorKind::invalid_argument,
                  "ProductKernelSpec: bandwidth " + std::to_string(h) +
                    " outside (0, 1/2)");
    volume_ *= h;
  }
}

std::size_t
TensorGrid::size() const
{
  if (axes.empty())
    return 0;
  std::size_t out = 1;
  for (const auto& a : axes)
    out *= a.size();
  return out;
}

void
TensorGrid::point(std::size_t k, std::span<double> out) const
{
  for (std::size_t i = axes.size(); i-- > 0;) {
    const std::size_t len = axes[i].size();
    out[i] = axes[i][k % len];
    k /= len;
  }
}

double
sigma(double t)
{
  // t = 1 looks leftward so the support stays inside the cube.
  return (t > 0.5 && t <= 1.0) ? 1.0 : -1.0;
}

namespace {

// One univariate factor W(sigma(t)(t - x)/h)/h. Every code path computes the
// factor through this function so grid and pointwise results agree bitwise.
inline double
factor(const OrderedKernel& w, double h, double t, double x)
{
  return w(sigma(t) * (t - x) / h) / h;
}

void
check_dims(const ProductKernelSpec& spec, const SampleSet& sample)
{
  if (spec.dim() != sample.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "kernel dimension " + std::to_string(spec.dim()) +
                  " does not match sample dimension " + std::to_string(sample.dim()));
}

struct Entry
{
  std::uint32_t j;
  double value;
};

// For each axis and each grid coordinate, the observations with a non-zero
// kernel factor, in ascending observation order.
using AxisFactors = std::vector<std::vector<Entry>>;

AxisFactors
axis_factors(const OrderedKernel& w,
             double h,
             const std::vector<double>& coords,
             const SampleSet& sample,
             std::size_t axis)
{
  const std::size_t n = sample.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<double> sorted(n);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return sample(a, axis) < sample(b, axis);
  });
  for (std::size_t k = 0; k < n; ++k)
    sorted[k] = sample(order[k], axis);

  const double slack = 1e-9 * h;
  AxisFactors out(coords.size());
  for (std::size_t g = 0; g < coords.size(); ++g) {
    const double t = coords[g];
    double lo = 0.0;
    double hi = 0.0;
    if (sigma(t) < 0.0) {
      lo = t - slack;
      hi = t + h + slack;
    } else {
      lo = t - h - slack;
      hi = t + slack;
    }
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
    const auto last = std::upper_bound(first, sorted.end(), hi);
    auto& list = out[g];
    for (auto it = first; it != last; ++it) {
      const std::uint32_t j = order[static_cast<std::size_t>(it - sorted.begin())];
      const double v = factor(w, h, t, sample(j, axis));
      if (v != 0.0)
        list.push_back({ j, v });
    }
    std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
      return a.j < b.j;
    });
  }
  return out;
}

// Intersects the per-axis lists of one node and accumulates sum K and sum K^2.
void
accumulate_node(const std::vector<const std::vector<Entry>*>& lists,
                std::vector<Entry>& scratch,
                std::vector<Entry>& next,
                double& sum,
                double& sum_sq)
{
  scratch.assign(lists[0]->begin(), lists[0]->end());
  for (std::size_t i = 1; i < lists.size() && !scratch.empty(); ++i) {
    next.clear();
    const auto& other = *lists[i];
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < scratch.size() && b < other.size()) {
      if (scratch[a].j < other[b].j) {
        ++a;
      } else if (other[b].j < scratch[a].j) {
        ++b;
      } else {
        next.push_back({ scratch[a].j, scratch[a].value * other[b].value });
        ++a;
        ++b;
      }
    }
    std::swap(scratch, next);
  }
  sum = 0.0;
  sum_sq = 0.0;
  for (const auto& e : scratch) {
    sum += e.value;
    sum_sq += e.value * e.value;
  }
}

GridMoments
grid_moments(const ProductKernelSpec& spec,
             const SampleSet& sample,
             const TensorGrid& grid,
             bool with_squares)
{
  check_dims(spec, sample);
  if (grid.dim() != spec.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "grid dimension " + std::to_string(grid.dim()) +
                  " does not match kernel dimension " + std::to_string(spec.dim()));
  const std::size_t d = spec.dim();
  std::vector<AxisFactors> factors(d);
  for (std::size_t i = 0; i < d; ++i)
    factors[i] = axis_factors(spec.kernels()[i], spec.bandwidth()[i], grid.axes[i], sample, i);

  const std::size_t total = grid.size();
  GridMoments out;
  out.mean.assign(total, 0.0);
  if (with_squares)
    out.mean_square.assign(total, 0.0);
  const double count = static_cast<double>(sample.size());

  // Partition by the first axis: each task owns a contiguous block of nodes.
  const std::size_t block = total / grid.axes[0].size();
  parallel_for(grid.axes[0].size(), [&](std::size_t g0) {
    std::vector<const std::vector<Entry>*> lists(d);
    std::vector<Entry> scratch;
    std::vector<Entry> next;
    std::vector<std::size_t> idx(d, 0);
    idx[0] = g0;
    for (std::size_t r = 0; r < block; ++r) {
      std::size_t rem = r;
      for (std::size_t i = d; i-- > 1;) {
        idx[i] = rem % grid.axes[i].size();
        rem /= grid.axes[i].size();
      }
      for (std::size_t i = 0; i < d; ++i)
        lists[i] = &factors[i][idx[i]];
      double sum = 0.0;
      double sum_sq = 0.0;
      accumulate_node(lists, scratch, next, sum, sum_sq);
      const std::size_t k = g0 * block + r;
      out.mean[k] = sum / count;
      if (with_squares)
        out.mean_square[k] = sum_sq / count;
    }
  });
  return out;
}

} // namespace

double
boundary_kernel_eval(const ProductKernelSpec& spec,
                     std::span<const double> t,
                     std::span<const double> x)
{
  if (t.size() != spec.dim() || x.size() != spec.dim())
    throw Error(ErrorKind::dimension_mismatch, "boundary_kernel_eval: dimension mismatch");
  double prod = 1.0;
  for (std::size_t i = 0; i < spec.dim(); ++i)
    prod *= factor(spec.kernels()[i], spec.bandwidth()[i], t[i], x[i]);
  return prod;
}

double
estimate(const ProductKernelSpec& spec, const SampleSet& sample, std::span<const double> t)
{
  check_dims(spec, sample);
  if (t.size() != spec.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "estimate: point dimension " + std::to_string(t.size()) +
                  " does not match kernel dimension " + std::to_string(spec.dim()));
  double sum = 0.0;
  for (std::size_t j = 0; j < sample.size(); ++j)
    sum += boundary_kernel_eval(spec, t, sample.point(j));
  return sum / static_cast<double>(sample.size());
}

std::vector<double>
estimate_grid(const ProductKernelSpec& spec,
              const SampleSet& sample,
              const std::vector<std::vector<double>>& points)
{
  check_dims(spec, sample);
  std::vector<double> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) { out[k] = estimate(spec, sample, points[k]); });
  return out;
}

std::vector<double>
estimate_grid(const ProductKernelSpec& spec, const SampleSet& sample, const TensorGrid& grid)
{
  return grid_moments(spec, sample, grid, false).mean;
}

GridMoments
estimate_grid_moments(const ProductKernelSpec& spec,
                      const SampleSet& sample,
                      const TensorGrid& grid)
{
  return grid_moments(spec, sample, grid, true);
}

std::vector<double>
clip_negative(std::vector<double> values, std::span<const double> weights)
{
  if (weights.size() != values.size())
    throw Error(ErrorKind::grid_mismatch, "clip_negative: weights do not match values");
  double before = 0.0;
  double after = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    before += weights[k] * values[k];
    values[k] = std::max(values[k], 0.0);
    after += weights[k] * values[k];
  }
  if (after > 0.0) {
    const double scale = before / after;
    for (double& v : values)
      v *= scale;
  }
  return values;
}

} // namespace boundkde
