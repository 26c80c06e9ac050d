#include "boundkde/sim_lab.hpp"

#include "boundkde/error.hpp"
#include "boundkde/parallel.hpp"
#include "boundkde/quadrature.hpp"
#include "boundkde/rng.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace boundkde {

// ---------------------------------------------------------------------------
// phi

namespace {

double
psi(double v)
{
  if (!(v > -1.0 && v < 1.0))
    return 0.0;
  return std::exp(-1.0 / (1.0 - v * v));
}

// Table resolution: phi is tabulated at u_k = -1 + k / half_cells.
constexpr int half_cells = 2048;
// Antiderivative of psi is tabulated at x_j = -1 + j / psi_cells.
constexpr int psi_cells = 1024;
static_assert(half_cells == 2 * psi_cells);

struct PhiTable
{
  double psi_total = 0.0;
  boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>> interp;
};

PhiTable
build_phi_table()
{
  using boost::math::quadrature::gauss_kronrod;
  // Psi(x_j) = int_{-1}^{x_j} psi, accumulated panel by panel.
  std::vector<double> cumulative(2 * psi_cells + 1, 0.0);
  for (int j = 0; j < 2 * psi_cells; ++j) {
    const double a = -1.0 + static_cast<double>(j) / psi_cells;
    const double b = -1.0 + static_cast<double>(j + 1) / psi_cells;
    cumulative[j + 1] = cumulative[j] + gauss_kronrod<double, 31>::integrate(psi, a, b, 8, 1e-14);
  }
  const double total = cumulative.back();
  auto antiderivative = [&](int j) {
    if (j <= 0)
      return 0.0;
    if (j >= 2 * psi_cells)
      return total;
    return cumulative[j];
  };

  // phi(u) = int_{2u-1}^{2u} psi - int_{2u}^{2u+1} psi. With u_k on a grid of
  // step 1/half_cells, 2u_k - 1, 2u_k and 2u_k + 1 all fall on the Psi grid.
  const int nodes = 2 * half_cells + 1;
  std::vector<double> values(nodes);
  std::vector<double> slopes(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double u = -1.0 + static_cast<double>(k) / half_cells;
    const int j_mid = k - psi_cells; // 2u_k on the Psi grid
    values[k] = 2.0 * antiderivative(j_mid) - antiderivative(j_mid - psi_cells) -
                antiderivative(j_mid + psi_cells);
    slopes[k] = 2.0 * (2.0 * psi(2.0 * u) - psi(2.0 * u - 1.0) - psi(2.0 * u + 1.0));
  }
  values.front() = 0.0;
  values.back() = 0.0;
  return { total,
           boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>(
             std::move(values), std::move(slopes), -1.0, 1.0 / half_cells) };
}

const PhiTable&
phi_table()
{
  static const PhiTable table = build_phi_table();
  return table;
}

} // namespace

double
phi(double u)
{
  if (!(u > -1.0 && u < 1.0))
    return 0.0;
  return phi_table().interp(u);
}

double
psi_integral()
{
  return phi_table().psi_total;
}

// ---------------------------------------------------------------------------
// densities

Density
uniform_density(std::size_t d)
{
  Density out;
  out.dim = d;
  out.name = "uniform";
  out.sup = 1.0;
  out.eval = [](std::span<const double> x) {
    for (double v : x)
      if (v < 0.0 || v > 1.0)
        return 0.0;
    return 1.0;
  };
  return out;
}

std::vector<std::size_t>
BumpFamilyParams::lattice() const
{
  std::vector<std::size_t> out;
  for (double hi : h) {
    if (!(hi > 0.0 && hi <= 0.5))
      throw Error(ErrorKind::invalid_argument, "bump half-width must lie in (0, 1/2]");
    const double cells = 1.0 / (2.0 * hi);
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * rounded)
      throw Error(ErrorKind::invalid_argument,
                  "bump half-width " + std::to_string(hi) + " does not tile [0,1] (1/(2h) not an integer)");
    out.push_back(static_cast<std::size_t>(rounded));
  }
  return out;
}

BumpFamilyParams
alternating_bumps(std::size_t d, double h, double rho)
{
  BumpFamilyParams params;
  params.d = d;
  params.h.assign(d, h);
  params.rho = rho;
  const auto lattice = params.lattice();
  std::size_t cells = 1;
  for (auto r : lattice)
    cells *= r;
  params.w.resize(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    std::size_t rem = k;
    std::size_t parity = 0;
    for (std::size_t i = d; i-- > 0;) {
      parity += rem % lattice[i];
      rem /= lattice[i];
    }
    params.w[k] = parity % 2 == 0 ? 1 : 0;
  }
  return params;
}

double
bump_envelope(const BumpFamilyParams& params)
{
  return 1.0 + params.rho * std::pow(2.0 / std::numbers::e, static_cast<double>(params.d));
}

Density
bump_density(const BumpFamilyParams& params)
{
  if (params.d == 0 || params.h.size() != params.d)
    throw Error(ErrorKind::invalid_argument, "bump density: h must have d entries");
  const auto lattice = params.lattice();
  std::size_t cells = 1;
  for (auto r : lattice)
    cells *= r;
  if (params.w.size() != cells)
    throw Error(ErrorKind::invalid_argument,
                "bump density: expected " + std::to_string(cells) + " lattice flags, got " +
                  std::to_string(params.w.size()));
  const double limit = std::pow(std::numbers::e / 2.0, static_cast<double>(params.d));
  if (!(params.rho >= 0.0 && params.rho < limit))
    throw Error(ErrorKind::invalid_amplitude,
                "bump amplitude rho=" + std::to_string(params.rho) + " must lie in [0, " +
                  std::to_string(limit) + ") to keep the density positive");

  Density out;
  out.dim = params.d;
  out.name = "bump";
  out.sup = bump_envelope(params);
  out.eval = [params, lattice](std::span<const double> x) {
    std::size_t cell = 0;
    double prod = 1.0;
    for (std::size_t i = 0; i < params.d; ++i) {
      const double xi = x[i];
      if (xi < 0.0 || xi > 1.0)
        return 0.0;
      const double hi = params.h[i];
      const auto r = std::min(static_cast<std::size_t>(xi / (2.0 * hi)), lattice[i] - 1);
      cell = cell * lattice[i] + r;
      prod *= phi((xi - (2.0 * static_cast<double>(r) + 1.0) * hi) / hi);
    }
    return params.w[cell] ? 1.0 + params.rho * prod : 1.0;
  };
  // phi is evaluated once up front so the table is built outside workers.
  (void)phi(0.0);
  return out;
}

// ---------------------------------------------------------------------------
// sampling

SampleSet
rejection_sample(const Density& density,
                 std::size_t n,
                 double envelope,
                 std::uint64_t seed,
                 std::uint64_t stream,
                 std::size_t* proposals)
{
  if (n == 0)
    throw Error(ErrorKind::invalid_argument, "rejection_sample: n must be >= 1");
  if (!(envelope > 0.0))
    throw Error(ErrorKind::bad_envelope, "rejection_sample: envelope must be positive");
  Rng rng(seed, stream);
  const std::size_t d = density.dim;
  std::vector<double> data;
  data.reserve(n * d);
  std::vector<double> x(d);
  std::size_t tried = 0;
  while (data.size() < n * d) {
    for (auto& v : x)
      v = rng.uniform();
    const double u = rng.uniform();
    ++tried;
    const double fx = density(x);
    if (fx > envelope)
      throw Error(ErrorKind::bad_envelope,
                  "rejection_sample: density value " + std::to_string(fx) +
                    " exceeds envelope " + std::to_string(envelope));
    if (u * envelope < fx)
      data.insert(data.end(), x.begin(), x.end());
  }
  if (proposals)
    *proposals = tried;
  return SampleSet(d, std::move(data));
}

// ---------------------------------------------------------------------------
// naive estimator

double
epanechnikov(double u)
{
  return (u >= -1.0 && u <= 1.0) ? 0.75 * (1.0 - u * u) : 0.0;
}

double
epanechnikov_cdf(double x)
{
  if (x <= -1.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  return 0.5 + 0.75 * x - 0.25 * x * x * x;
}

double
convolution_kde(std::span<const double> h, const SampleSet& sample, std::span<const double> t)
{
  if (h.size() != sample.dim() || t.size() != sample.dim())
    throw Error(ErrorKind::dimension_mismatch, "convolution_kde: dimension mismatch");
  double volume = 1.0;
  for (double hi : h)
    volume *= hi;
  double sum = 0.0;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    double prod = 1.0;
    for (std::size_t i = 0; i < h.size(); ++i)
      prod *= epanechnikov((t[i] - sample(j, i)) / h[i]);
    sum += prod;
  }
  return sum / (static_cast<double>(sample.size()) * volume);
}

// ---------------------------------------------------------------------------
// bias demo

namespace {

// Exact expectation of the boundary estimator at t under the uniform density:
// the kernel mass over [0, 1], integrated exactly on its polynomial support.
double
boundary_mean_uniform(const OrderedKernel& w, double h, double t, const Rule1d& base)
{
  const double lo = sigma(t) < 0.0 ? t : t - h;
  const double mid = lo + 0.5 * h;
  double acc = 0.0;
  for (std::size_t q = 0; q < base.size(); ++q) {
    const double x = mid + 0.5 * h * base.nodes[q];
    acc += 0.5 * h * base.weights[q] * w(sigma(t) * (t - x) / h) / h;
  }
  return acc;
}

} // namespace

std::vector<BiasRow>
bias_demo(double p, const std::vector<double>& h_list, std::size_t panels, int order)
{
  if (!(p >= 1.0))
    throw Error(ErrorKind::invalid_argument, "bias_demo: p must be >= 1");
  const OrderedKernel w = make_w(order);
  const Rule1d exact = gauss_legendre(static_cast<std::size_t>(order) / 2 + 2);
  std::vector<BiasRow> rows;
  for (double h : h_list) {
    if (!(h > 0.0 && h < 0.5))
      throw Error(ErrorKind::invalid_argument, "bias_demo: bandwidths must lie in (0, 1/2)");
    // Pieces on which both expectation curves are smooth.
    const double edges[] = { 0.0, h, 0.5, 1.0 - h, 1.0 };
    std::vector<double> breaks{ 0.0 };
    for (std::size_t e = 1; e < std::size(edges); ++e) {
      const double lo = edges[e - 1];
      for (std::size_t s = 1; s < panels; ++s)
        breaks.push_back(lo + (edges[e] - lo) * static_cast<double>(s) / static_cast<double>(panels));
      breaks.push_back(edges[e]);
    }
    const Rule1d rule = piecewise_gauss_legendre(breaks, 10);
    double naive = 0.0;
    double boundary = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double t = rule.nodes[k];
      const double mean_naive = epanechnikov_cdf(t / h) - epanechnikov_cdf((t - 1.0) / h);
      naive += rule.weights[k] * std::pow(std::abs(mean_naive - 1.0), p);
      const double mean_boundary = boundary_mean_uniform(w, h, t, exact);
      boundary += rule.weights[k] * std::pow(std::abs(mean_boundary - 1.0), p);
    }
    rows.push_back({ h, std::pow(naive, 1.0 / p), std::pow(boundary, 1.0 / p) });
  }
  return rows;
}

double
log_log_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size())
    throw Error(ErrorKind::invalid_argument, "log_log_slope: size mismatch");
  if (x.size() < 2)
    throw Error(ErrorKind::insufficient_points, "slope needs at least two points");
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0)
    throw Error(ErrorKind::insufficient_points, "slope needs two distinct abscissae");
  return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Monte Carlo risk

EstimatorFactory
fixed_member_estimator(FamilyConfig family, FamilyIndex index)
{
  return [family, index](const SampleSet& sample, const CubeGrid& grid) {
    FamilyConfig cfg = family;
    cfg.n = static_cast<std::int64_t>(sample.size());
    cfg.d = sample.dim();
    return estimate_grid(family_member(cfg, index), sample, grid.tensor());
  };
}

EstimatorFactory
selected_estimator(SelectionConfig cfg)
{
  return [cfg](const SampleSet& sample, const CubeGrid& grid) {
    SelectionConfig local = cfg;
    local.quad = grid.quadrature();
    local.family.d = sample.dim();
    const FamilyEvaluation eval = evaluate_family(sample, local);
    const SelectionResult res = select_from(eval, local);
    return eval.estimates[res.trace.chosen_position];
  };
}

EstimatorFactory
truth_estimator(Density truth)
{
  return [truth](const SampleSet&, const CubeGrid& grid) {
    std::vector<double> out(grid.size());
    std::vector<double> pt(grid.dim());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      grid.tensor().point(k, pt);
      out[k] = truth(pt);
    }
    return out;
  };
}

namespace {

std::vector<double>
truth_on_grid(const Density& truth, const CubeGrid& grid)
{
  return truth_estimator(truth)(SampleSet{}, grid);
}

void
check_setup(const RiskSetup& setup)
{
  if (setup.replicates < 2)
    throw Error(ErrorKind::invalid_argument, "Monte Carlo risk needs at least two replicates");
  if (!(setup.p >= 1.0) || !(setup.q >= 1.0))
    throw Error(ErrorKind::invalid_argument, "Monte Carlo risk needs p, q >= 1");
  if (setup.grid.dim() != setup.truth.dim)
    throw Error(ErrorKind::dimension_mismatch, "risk grid and density dimensions differ");
}

// (mean x_k^q)^(1/q) and its delta-method standard error.
std::pair<double, double>
q_mean(std::span<const double> losses, double q)
{
  const double count = static_cast<double>(losses.size());
  double mean = 0.0;
  for (double l : losses)
    mean += std::pow(l, q);
  mean /= count;
  double var = 0.0;
  for (double l : losses) {
    const double dev = std::pow(l, q) - mean;
    var += dev * dev;
  }
  var /= (count - 1.0);
  const double risk = std::pow(mean, 1.0 / q);
  const double se_mean = std::sqrt(var / count);
  const double se = mean > 0.0 ? risk / (q * mean) * se_mean : 0.0;
  return { risk, se };
}

} // namespace

RiskEntry
mc_risk(const EstimatorFactory& estimator, const RiskSetup& setup, std::size_t n)
{
  check_setup(setup);
  const std::vector<double> truth = truth_on_grid(setup.truth, setup.grid);
  RiskEntry entry;
  entry.n = n;
  entry.losses.assign(setup.replicates, 0.0);
  parallel_for(setup.replicates, [&](std::size_t k) {
    const SampleSet sample = rejection_sample(setup.truth, n, setup.envelope, setup.seed, k);
    const std::vector<double> est = estimator(sample, setup.grid);
    entry.losses[k] = lp_distance(est, truth, setup.grid, setup.p);
  });
  std::tie(entry.risk, entry.std_error) = q_mean(entry.losses, setup.q);
  return entry;
}

RiskReport
risk_report(const EstimatorFactory& estimator,
            const RiskSetup& setup,
            const std::vector<std::size_t>& sample_sizes)
{
  RiskReport report;
  report.sample_sizes = sample_sizes;
  report.replicates = setup.replicates;
  report.p = setup.p;
  report.q = setup.q;
  for (std::size_t n : sample_sizes)
    report.entries.push_back(mc_risk(estimator, setup, n));
  report.slope = sample_sizes.size() >= 2 ? rate_slope(report)
                                          : std::numeric_limits<double>::quiet_NaN();
  return report;
}

double
rate_slope(const RiskReport& report)
{
  if (report.entries.size() < 2)
    throw Error(ErrorKind::insufficient_points, "rate slope needs at least two sample sizes");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& e : report.entries) {
    x.push_back(static_cast<double>(e.n));
    y.push_back(e.risk);
  }
  return log_log_slope(x, y);
}

OracleReport
oracle_experiment(const SelectionConfig& cfg, const RiskSetup& setup, std::size_t n)
{
  check_setup(setup);
  SelectionConfig local = cfg;
  local.quad = setup.grid.quadrature();
  local.family.d = setup.truth.dim;
  const std::vector<double> truth = truth_on_grid(setup.truth, setup.grid);

  OracleReport report;
  report.replicates.resize(setup.replicates);
  parallel_for(setup.replicates, [&](std::size_t k) {
    const SampleSet sample = rejection_sample(setup.truth, n, setup.envelope, setup.seed, k);
    const FamilyEvaluation eval = evaluate_family(sample, local);
    const SelectionResult res = select_from(eval, local);
    OracleReplicate& rep = report.replicates[k];
    rep.chosen = res.trace.chosen;
    rep.member_losses.resize(eval.indices.size());
    for (std::size_t a = 0; a < eval.indices.size(); ++a)
      rep.member_losses[a] = lp_distance(eval.estimates[a], truth, setup.grid, setup.p);
    rep.selected_loss = rep.member_losses[res.trace.chosen_position];
  });

  FamilyConfig family = local.family;
  family.n = static_cast<std::int64_t>(n);
  report.indices = index_set(family);
  const std::size_t members = report.indices.size();
  std::vector<double> column(setup.replicates);
  for (std::size_t a = 0; a < members; ++a) {
    for (std::size_t k = 0; k < setup.replicates; ++k)
      column[k] = report.replicates[k].member_losses[a];
    report.member_risks.push_back(q_mean(column, setup.q).first);
  }
  for (std::size_t k = 0; k < setup.replicates; ++k)
    column[k] = report.replicates[k].selected_loss;
  report.selected_risk = q_mean(column, setup.q).first;

  const double best = *std::min_element(report.member_risks.begin(), report.member_risks.end());
  std::vector<double> ratios;
  for (auto& rep : report.replicates) {
    rep.ratio = rep.selected_loss / best;
    ratios.push_back(rep.ratio);
  }
  std::sort(ratios.begin(), ratios.end());
  const std::size_t mid = ratios.size() / 2;
  report.median_ratio =
    ratios.size() % 2 == 1 ? ratios[mid] : 0.5 * (ratios[mid - 1] + ratios[mid]);
  return report;
}

} // namespace boundkde
