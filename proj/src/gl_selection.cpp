#include "boundkde/gl_selection.hpp"

#include "boundkde/error.hpp"
#include "boundkde/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace boundkde {

void
SelectionConfig::validate() const
{
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(ErrorKind::invalid_argument, "selection: p must be >= 1");
  if (!(q >= 1.0) || !std::isfinite(q))
    throw Error(ErrorKind::invalid_argument, "selection: q must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw Error(ErrorKind::invalid_argument, "selection: tau must be > 0");
}

FamilyEvaluation
evaluate_family(const SampleSet& sample, const SelectionConfig& cfg)
{
  cfg.validate();
  if (cfg.family.d != sample.dim())
    throw Error(ErrorKind::dimension_mismatch,
                "family dimension " + std::to_string(cfg.family.d) +
                  " does not match sample dimension " + std::to_string(sample.dim()));
  FamilyEvaluation eval;
  eval.family = cfg.family;
  eval.family.n = static_cast<std::int64_t>(sample.size());
  if (eval.family.n < 2)
    throw Error(ErrorKind::invalid_argument, "selection needs at least two observations");
  eval.indices = index_set(eval.family);
  eval.grid = CubeGrid(sample.dim(), cfg.quad);

  const std::size_t count = eval.indices.size();
  std::map<FamilyIndex, std::size_t> position;
  for (std::size_t a = 0; a < count; ++a)
    position.emplace(eval.indices[a], a);
  eval.lower.assign(count, std::vector<std::size_t>(count));
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      const FamilyIndex lo = index_min(eval.indices[a], eval.indices[b]);
      const auto it = position.find(lo);
      if (it == position.end())
        throw Error(ErrorKind::index_not_in_family,
                    "coordinatewise minimum of two members is not a member");
      eval.lower[a][b] = it->second;
    }
  }

  eval.specs.resize(count);
  eval.estimates.resize(count);
  eval.m_hats.resize(count);
  const bool need_squares = cfg.p > 2.0;
  parallel_for(count, [&](std::size_t a) {
    eval.specs[a] = family_member(eval.family, eval.indices[a]);
    if (need_squares) {
      GridMoments mom = estimate_grid_moments(eval.specs[a], sample, eval.grid.tensor());
      eval.m_hats[a] =
        m_hat_from_moments(eval.specs[a], sample.size(), cfg.p, mom.mean_square, eval.grid);
      eval.estimates[a] = std::move(mom.mean);
    } else {
      eval.estimates[a] = estimate_grid(eval.specs[a], sample, eval.grid.tensor());
      eval.m_hats[a] = m_hat_from_moments(eval.specs[a], sample.size(), cfg.p, {}, eval.grid);
    }
  });
  return eval;
}

std::vector<std::vector<double>>
pairwise_norms(const FamilyEvaluation& eval, double p)
{
  const std::size_t count = eval.indices.size();
  std::vector<std::vector<double>> norms(count, std::vector<double>(count, 0.0));
  parallel_for(count, [&](std::size_t a) {
    for (std::size_t b = 0; b < count; ++b) {
      const std::size_t lo = eval.lower[a][b];
      if (lo == b)
        continue; // identical estimators
      norms[a][b] = lp_distance(eval.estimates[lo], eval.estimates[b], eval.grid, p);
    }
  });
  return norms;
}

double
b_hat(std::size_t position,
      const FamilyEvaluation& eval,
      const std::vector<std::vector<double>>& norms,
      const SelectionConfig& cfg)
{
  double out = 0.0;
  for (std::size_t b = 0; b < eval.indices.size(); ++b) {
    const double penalty = (1.0 + cfg.tau) * (eval.m_hats[b] + eval.m_hats[eval.lower[position][b]]);
    out = std::max(out, norms[position][b] - penalty);
  }
  return out;
}

SelectionResult
select_from(const FamilyEvaluation& eval, const SelectionConfig& cfg)
{
  SelectionTrace trace;
  trace.p = cfg.p;
  trace.q = cfg.q;
  trace.tau = cfg.tau;
  trace.pairwise_norms = pairwise_norms(eval, cfg.p);

  const std::size_t count = eval.indices.size();
  trace.records.resize(count);
  std::size_t best = 0;
  for (std::size_t a = 0; a < count; ++a) {
    SelectionRecord& rec = trace.records[a];
    rec.index = eval.indices[a];
    rec.orders = member_orders(eval.family, rec.index);
    rec.bandwidth = eval.specs[a].bandwidth();
    rec.m_hat = eval.m_hats[a];
    rec.b_hat = b_hat(a, eval, trace.pairwise_norms, cfg);
    rec.objective = rec.b_hat + (1.0 + cfg.tau) * rec.m_hat;
    if (rec.objective < trace.records[best].objective)
      best = a;
  }
  trace.chosen_position = best;
  trace.chosen = eval.indices[best];
  return { std::move(trace), eval.specs[best] };
}

SelectionResult
select(const SampleSet& sample, const SelectionConfig& cfg)
{
  return select_from(evaluate_family(sample, cfg), cfg);
}

} // namespace boundkde
