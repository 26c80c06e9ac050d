#pragma once

#include "boundkde/boundary_kernels.hpp"
#include "boundkde/estimator_families.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace boundkde {

//! Composite Gauss-Legendre resolution per half-axis. Zero entries take the
//! dimension-dependent defaults (32 x 8 for d = 1, 16 x 4 for d = 2,
//! 8 x 2 beyond).
struct QuadratureConfig
{
  std::size_t panels = 0;
  std::size_t nodes = 0;

  QuadratureConfig resolved(std::size_t d) const;

  friend bool operator==(const QuadratureConfig&, const QuadratureConfig&) = default;
};

//! Quadrant label: bit i holds eps_i.
using QuadrantMask = std::uint32_t;

//! Nodes and weights of one quadrant Delta_{d,eps} (row-major nodes).
struct QuadrantGrid
{
  std::size_t d = 0;
  QuadrantMask eps = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  //! Position of each node in the enclosing CubeGrid.
  std::vector<std::size_t> cube_index;

  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t k) const { return { nodes.data() + k * d, d }; }
};

//! Tensor quadrature grid over [0, 1]^d, built as the union of the 2^d
//! quadrant grids: each axis carries a composite rule on (0, 1/2) followed by
//! one on (1/2, 1). No node lies on a quadrant boundary.
class CubeGrid
{
public:
  CubeGrid() = default;
  CubeGrid(std::size_t d, QuadratureConfig quad);

  std::size_t dim() const { return tensor_.dim(); }
  std::size_t size() const { return weights_.size(); }
  const TensorGrid& tensor() const { return tensor_; }
  const std::vector<double>& weights() const { return weights_; }
  //! Quadrant of every node.
  const std::vector<QuadrantMask>& quadrants() const { return quadrants_; }
  const QuadratureConfig& quadrature() const { return quad_; }

  QuadrantGrid quadrant(QuadrantMask eps) const;

private:
  QuadratureConfig quad_;
  TensorGrid tensor_;
  std::vector<double> weights_;
  std::vector<QuadrantMask> quadrants_;
};

//! (sum_k w_k |v_k|^p)^(1/p) over the full cube. Throws GridMismatch.
double lp_norm(std::span<const double> values, const CubeGrid& grid, double p);

//! Same restricted to the nodes of quadrant eps.
double lp_norm_quadrant(std::span<const double> values,
                        const CubeGrid& grid,
                        QuadrantMask eps,
                        double p);

//! (int_{[0,1]^d} |a - b|^p)^(1/p) for two gridded functions.
double lp_distance(std::span<const double> a,
                   std::span<const double> b,
                   const CubeGrid& grid,
                   double p);

//! Rosenthal constant 14.7 p / log p.
double rosenthal_constant(double p);

//! ||W||_p = prod_i ||W_i||_p of the tensor kernel.
double product_kernel_norm(const ProductKernelSpec& spec, double p);

//! sqrt(V_h) (int_{Delta_eps} ((1/n) sum_j K^2(t, X_j))^{p/2} dt)^{1/p},
//! evaluated pointwise on the quadrant nodes. Requires p > 2.
double lambda_hat(const ProductKernelSpec& spec,
                  const SampleSet& sample,
                  double p,
                  const QuadrantGrid& quadrant);

//! Same quantity from cached mean-square kernel values on the full cube.
double lambda_hat_from_moments(std::span<const double> mean_square,
                               const CubeGrid& grid,
                               QuadrantMask eps,
                               double volume,
                               double p);

//! Gamma_eps: 2^{-d(2-p)/(2p)} ||W||_2 when p <= 2, otherwise
//! C_p* (lambda + 2 ||W||_p). `lambda` is ignored for p <= 2.
double gamma_from_lambda(const ProductKernelSpec& spec, double p, double lambda);

//! Gamma_eps evaluated on one quadrant (computes lambda_hat when p > 2).
double gamma_hat(const ProductKernelSpec& spec,
                 const SampleSet& sample,
                 double p,
                 const QuadrantGrid& quadrant);

//! (n V_h)^{-1/2} sum_eps Gamma_eps for family member idx. cfg.n must equal
//! the sample size.
double m_hat(const FamilyConfig& cfg,
             const FamilyIndex& idx,
             const SampleSet& sample,
             double p,
             const CubeGrid& grid);

//! m_hat from an already evaluated member: `mean_square` may be empty when
//! p <= 2.
double m_hat_from_moments(const ProductKernelSpec& spec,
                          std::size_t n,
                          double p,
                          std::span<const double> mean_square,
                          const CubeGrid& grid);

//! M(ell') + M(ell ^ ell').
double m_hat_pair(const FamilyConfig& cfg,
                  const FamilyIndex& ell,
                  const FamilyIndex& ell_prime,
                  const SampleSet& sample,
                  double p,
                  const CubeGrid& grid);

} // namespace boundkde
