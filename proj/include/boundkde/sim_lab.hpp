#pragma once

#include "boundkde/boundary_kernels.hpp"
#include "boundkde/gl_selection.hpp"
#include "boundkde/lp_engine.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace boundkde {

// ---------------------------------------------------------------------------
// Test densities

//! Bump profile phi(u) = (H * psi)(2u), with psi(v) = exp(-1/(1 - v^2)) on
//! (-1, 1) and H the sign function on (-1, 1). Odd, supported on [-1, 1],
//! |phi| <= 2/e. Served from a cubic Hermite table built on first use.
double phi(double u);

//! int_{-1}^{1} psi(v) dv.
double psi_integral();

//! A density on [0, 1]^d with a known upper bound.
struct Density
{
  std::size_t dim = 1;
  std::string name;
  double sup = 1.0;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> x) const { return eval(x); }
};

Density uniform_density(std::size_t d);

//! Perturbed uniform density 1 + rho sum_r w(r) prod_i phi((x_i - c_i^(r)) / h_i)
//! over a lattice of R_i = 1/(2 h_i) bumps per axis centred at (2 r_i + 1) h_i.
//!
//! The lower-bound construction ties h_i and rho to the smoothness and n;
//! here both are free knobs so small experiments show visible structure.
struct BumpFamilyParams
{
  std::size_t d = 1;
  std::vector<double> h;
  double rho = 0.0;
  //! One flag per lattice cell, row-major over r (last axis fastest).
  std::vector<std::uint8_t> w;

  //! Lattice size R_i per axis.
  std::vector<std::size_t> lattice() const;
};

//! Parameters with w(r) = 1 when sum_i r_i is even, 0 otherwise.
BumpFamilyParams alternating_bumps(std::size_t d, double h, double rho);

//! Throws InvalidAmplitude when rho is negative or rho >= (e/2)^d, and
//! InvalidArgument for malformed lattices.
Density bump_density(const BumpFamilyParams& params);

//! Upper bound 1 + rho (2/e)^d of a bump density.
double bump_envelope(const BumpFamilyParams& params);

// ---------------------------------------------------------------------------
// Sampling

//! Draws n points by rejection from the uniform proposal. `proposals`, when
//! given, receives the number of proposals used. Throws BadEnvelope when the
//! density exceeds the envelope at a proposal.
SampleSet rejection_sample(const Density& density,
                           std::size_t n,
                           double envelope,
                           std::uint64_t seed,
                           std::uint64_t stream = 0,
                           std::size_t* proposals = nullptr);

// ---------------------------------------------------------------------------
// Baseline convolution estimator

//! Epanechnikov kernel 0.75 (1 - u^2) on [-1, 1].
double epanechnikov(double u);

//! int_{-1}^{x} epanechnikov.
double epanechnikov_cdf(double x);

//! (1 / (n V_h)) sum_j prod_i K((t_i - X_ji) / h_i) with no boundary handling.
double convolution_kde(std::span<const double> h,
                       const SampleSet& sample,
                       std::span<const double> t);

// ---------------------------------------------------------------------------
// Boundary bias on the uniform density (d = 1, exact expectations)

struct BiasRow
{
  double h = 0.0;
  double naive = 0.0;
  double boundary = 0.0;
};

//! || E f_h - 1 ||_p on [0, 1] for the naive Epanechnikov estimator and for the
//! boundary estimator with kernel w_order, both from exact expectations.
//! `panels` controls the composite rule used on each smooth piece.
std::vector<BiasRow> bias_demo(double p,
                               const std::vector<double>& h_list,
                               std::size_t panels = 64,
                               int order = 1);

//! Ordinary least squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Monte Carlo risk

//! Maps a sample to estimator values on the nodes of `grid`.
using EstimatorFactory =
  std::function<std::vector<double>(const SampleSet& sample, const CubeGrid& grid)>;

//! Estimator of a fixed family member h(ell), W(ell); the family is
//! re-parameterised with the replicate's sample size.
EstimatorFactory fixed_member_estimator(FamilyConfig family, FamilyIndex index);

//! Data-driven estimator f_{ell-hat}.
EstimatorFactory selected_estimator(SelectionConfig cfg);

//! Returns the true density itself (zero-risk reference).
EstimatorFactory truth_estimator(Density truth);

struct RiskEntry
{
  std::size_t n = 0;
  double risk = 0.0;
  double std_error = 0.0;
  //! ||f_hat - f||_p per replicate.
  std::vector<double> losses;
};

struct RiskReport
{
  std::vector<std::size_t> sample_sizes;
  std::size_t replicates = 0;
  double p = 2.0;
  double q = 1.0;
  std::vector<RiskEntry> entries;
  //! Fitted slope of log risk on log n (NaN with fewer than two sizes).
  double slope = 0.0;
};

struct RiskSetup
{
  Density truth;
  double envelope = 1.0;
  CubeGrid grid;
  double p = 2.0;
  double q = 1.0;
  std::size_t replicates = 2;
  std::uint64_t seed = 0;
};

//! (mean_k ||f_hat_k - f||_p^q)^(1/q) over `replicates` samples of size n,
//! with a delta-method standard error. Replicate k uses stream k of the seed.
RiskEntry mc_risk(const EstimatorFactory& estimator, const RiskSetup& setup, std::size_t n);

//! mc_risk for every n plus the fitted rate slope.
RiskReport risk_report(const EstimatorFactory& estimator,
                       const RiskSetup& setup,
                       const std::vector<std::size_t>& sample_sizes);

//! OLS slope of log risk versus log n. Throws InsufficientPoints with fewer
//! than two entries.
double rate_slope(const RiskReport& report);

// ---------------------------------------------------------------------------
// Oracle comparison

struct OracleReplicate
{
  FamilyIndex chosen;
  double selected_loss = 0.0;
  std::vector<double> member_losses;
  //! selected_loss / min over members of the Monte Carlo member risk.
  double ratio = 0.0;
};

struct OracleReport
{
  std::vector<FamilyIndex> indices;
  //! Monte Carlo risk of every fixed member over the same replicates.
  std::vector<double> member_risks;
  double selected_risk = 0.0;
  std::vector<OracleReplicate> replicates;
  double median_ratio = 0.0;
};

//! Runs the selection rule on `setup.replicates` samples of size n and
//! compares the selected estimator's loss with the best fixed member.
OracleReport oracle_experiment(const SelectionConfig& cfg, const RiskSetup& setup, std::size_t n);

} // namespace boundkde
