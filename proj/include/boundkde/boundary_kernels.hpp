#pragma once

#include "boundkde/legendre_kernels.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace boundkde {

//! n observations in [0, 1]^d stored row-major.
class SampleSet
{
public:
  SampleSet() = default;

  //! Throws InvalidArgument for d == 0, n == 0 or a ragged buffer, and
  //! OutOfDomain when a coordinate lies outside [0, 1].
  SampleSet(std::size_t dim, std::vector<double> row_major);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }

  double operator()(std::size_t j, std::size_t i) const { return data_[j * dim_ + i]; }
  std::span<const double> point(std::size_t j) const
  {
    return { data_.data() + j * dim_, dim_ };
  }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

//! Kernels W_1..W_d and bandwidth h in (0, 1/2)^d of a boundary estimator.
class ProductKernelSpec
{
public:
  ProductKernelSpec() = default;

  //! Throws InvalidArgument if the sizes differ, d == 0, or some h_i is not
  //! in (0, 1/2).
  ProductKernelSpec(std::vector<OrderedKernel> kernels, std::vector<double> bandwidth);

  std::size_t dim() const { return kernels_.size(); }
  const std::vector<OrderedKernel>& kernels() const { return kernels_; }
  const std::vector<double>& bandwidth() const { return bandwidth_; }
  //! V_h = prod h_i.
  double volume() const { return volume_; }

  friend bool operator==(const ProductKernelSpec&, const ProductKernelSpec&) = default;

private:
  std::vector<OrderedKernel> kernels_;
  std::vector<double> bandwidth_;
  double volume_ = 0.0;
};

//! Tensor-product grid; node k enumerates the axes row-major (last axis
//! fastest).
struct TensorGrid
{
  std::vector<std::vector<double>> axes;

  std::size_t dim() const { return axes.size(); }
  std::size_t size() const;
  //! Writes the coordinates of node k into out (length dim()).
  void point(std::size_t k, std::span<double> out) const;
};

//! +1 on (1/2, 1], -1 on [0, 1/2] (so sigma(1/2) = -1 and sigma(1) = +1).
double sigma(double t);

//! prod_i W_i(sigma(t_i) (t_i - x_i) / h_i) / h_i.
double boundary_kernel_eval(const ProductKernelSpec& spec,
                            std::span<const double> t,
                            std::span<const double> x);

//! Boundary-corrected estimate (1/n) sum_j K(t, X_j). Higher-order kernels
//! can produce negative values; they are returned unchanged.
double estimate(const ProductKernelSpec& spec,
                const SampleSet& sample,
                std::span<const double> t);

//! Pointwise estimates at an arbitrary list of points.
std::vector<double> estimate_grid(const ProductKernelSpec& spec,
                                  const SampleSet& sample,
                                  const std::vector<std::vector<double>>& points);

//! Estimates on a tensor grid using cached per-axis kernel factors.
//! Bit-identical to calling estimate() at every node.
std::vector<double> estimate_grid(const ProductKernelSpec& spec,
                                  const SampleSet& sample,
                                  const TensorGrid& grid);

//! Estimate and (1/n) sum_j K(t, X_j)^2 at every node of a tensor grid.
struct GridMoments
{
  std::vector<double> mean;
  std::vector<double> mean_square;
};

GridMoments estimate_grid_moments(const ProductKernelSpec& spec,
                                  const SampleSet& sample,
                                  const TensorGrid& grid);

//! Truncates negative values to zero and rescales so the weighted sum
//! matches the original one. Presentation only.
std::vector<double> clip_negative(std::vector<double> values,
                                  std::span<const double> weights);

} // namespace boundkde
