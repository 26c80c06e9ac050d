#pragma once

#include "boundkde/boundary_kernels.hpp"
#include "boundkde/estimator_families.hpp"
#include "boundkde/lp_engine.hpp"

#include <vector>

namespace boundkde {

//! Parameters of the selection rule. `q` does not enter the rule; it is
//! carried along for risk reporting. `family.n` is replaced by the sample
//! size when selecting.
struct SelectionConfig
{
  double p = 2.0;
  double q = 1.0;
  double tau = 1.0;
  FamilyConfig family;
  QuadratureConfig quad;

  void validate() const;

  friend bool operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

struct SelectionRecord
{
  FamilyIndex index;
  std::vector<int> orders;
  std::vector<double> bandwidth;
  double m_hat = 0.0;
  double b_hat = 0.0;
  double objective = 0.0;

  friend bool operator==(const SelectionRecord&, const SelectionRecord&) = default;
};

struct SelectionTrace
{
  double p = 2.0;
  double q = 1.0;
  double tau = 1.0;
  std::vector<SelectionRecord> records;
  //! pairwise_norms[a][b] = || f_{a ^ b} - f_b ||_p over family positions.
  std::vector<std::vector<double>> pairwise_norms;
  std::size_t chosen_position = 0;
  FamilyIndex chosen;

  friend bool operator==(const SelectionTrace&, const SelectionTrace&) = default;
};

//! Every family member evaluated once on a shared quadrature grid.
struct FamilyEvaluation
{
  FamilyConfig family;
  CubeGrid grid;
  std::vector<FamilyIndex> indices;
  std::vector<ProductKernelSpec> specs;
  std::vector<std::vector<double>> estimates;
  std::vector<double> m_hats;
  //! lower[a][b]: position of the coordinatewise minimum of indices a and b.
  std::vector<std::vector<std::size_t>> lower;
};

//! Evaluates the whole family of cfg on `sample`. Throws EmptyFamily.
FamilyEvaluation evaluate_family(const SampleSet& sample, const SelectionConfig& cfg);

//! || f_{a ^ b} - f_b ||_p for every pair of family positions.
std::vector<std::vector<double>> pairwise_norms(const FamilyEvaluation& eval, double p);

//! max over b of { norms[a][b] - (1 + tau) (M(b) + M(a ^ b)) }_+.
double b_hat(std::size_t position,
             const FamilyEvaluation& eval,
             const std::vector<std::vector<double>>& norms,
             const SelectionConfig& cfg);

struct SelectionResult
{
  SelectionTrace trace;
  ProductKernelSpec spec;
};

//! Runs the selection rule from an existing family evaluation.
SelectionResult select_from(const FamilyEvaluation& eval, const SelectionConfig& cfg);

//! Evaluates the family and selects the member minimising
//! B(ell) + (1 + tau) M(ell); ties go to the earliest index.
SelectionResult select(const SampleSet& sample, const SelectionConfig& cfg);

} // namespace boundkde
