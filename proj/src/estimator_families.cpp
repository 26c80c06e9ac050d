#include "boundkde/estimator_families.hpp"

#include "boundkde/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace boundkde {

FamilyMode
parse_family_mode(const std::string& s)
{
  if (s == "iso")
    return FamilyMode::iso;
  if (s == "ani")
    return FamilyMode::ani;
  throw Error(ErrorKind::invalid_argument, "unknown family mode '" + s + "' (expected iso|ani)");
}

std::string
to_string(FamilyMode mode)
{
  return mode == FamilyMode::iso ? "iso" : "ani";
}

void
FamilyConfig::validate() const
{
  if (n < 2)
    throw Error(ErrorKind::invalid_argument, "family: n must be >= 2");
  if (d < 1)
    throw Error(ErrorKind::invalid_argument, "family: d must be >= 1");
  if (!(c > 0.0))
    throw Error(ErrorKind::invalid_argument, "family: c must be > 0");
  if (mode == FamilyMode::ani && !orders.empty() && orders.size() != d)
    throw Error(ErrorKind::invalid_argument,
                "family: ani mode needs " + std::to_string(d) + " kernel orders, got " +
                  std::to_string(orders.size()));
  for (int m : orders)
    if (m < 0)
      throw Error(ErrorKind::invalid_argument, "family: kernel orders must be >= 0");
}

std::vector<int>
FamilyConfig::resolved_orders() const
{
  if (orders.empty())
    return std::vector<int>(d, 2);
  return orders;
}

FamilyIndex
index_min(const FamilyIndex& a, const FamilyIndex& b)
{
  if (a.ell.size() != b.ell.size())
    throw Error(ErrorKind::dimension_mismatch, "index_min: index lengths differ");
  FamilyIndex out;
  out.ell.resize(a.ell.size());
  for (std::size_t i = 0; i < a.ell.size(); ++i)
    out.ell[i] = std::min(a.ell[i], b.ell[i]);
  return out;
}

double
h_star(std::int64_t n)
{
  return std::exp(-std::sqrt(std::log(static_cast<double>(n))));
}

int
m_of_ell(std::int64_t n, int ell)
{
  return static_cast<int>(
    std::floor(std::log(static_cast<double>(n)) / (2.0 * ell) + 0.5));
}

namespace {

std::size_t
expected_length(const FamilyConfig& cfg)
{
  return cfg.mode == FamilyMode::iso ? 1 : cfg.d;
}

// Sum of -log h_i over coordinates.
double
log_inverse_volume(const FamilyConfig& cfg, const FamilyIndex& idx)
{
  if (cfg.mode == FamilyMode::iso)
    return static_cast<double>(cfg.d) * idx.ell[0];
  double s = 0.0;
  for (int l : idx.ell)
    s += l;
  return s;
}

bool
passes_bounds(const FamilyConfig& cfg, const FamilyIndex& idx)
{
  const double hs = h_star(cfg.n);
  for (int l : idx.ell)
    if (l < 1 || std::exp(-static_cast<double>(l)) > hs)
      return false;
  const double logn = std::log(static_cast<double>(cfg.n));
  return static_cast<double>(cfg.n) * std::exp(-log_inverse_volume(cfg, idx)) >=
         std::pow(logn, cfg.c);
}

[[noreturn]] void
throw_empty(const FamilyConfig& cfg)
{
  const double logn = std::log(static_cast<double>(cfg.n));
  std::ostringstream msg;
  msg.precision(6);
  msg << "empty " << to_string(cfg.mode) << " family for n=" << cfg.n << " d=" << cfg.d
      << " c=" << cfg.c << ": h <= h_n* needs every ell_i >= " << std::sqrt(logn)
      << " but n V_h >= (log n)^c needs "
      << (cfg.mode == FamilyMode::iso ? "d*ell" : "sum ell_i") << " <= "
      << logn - cfg.c * std::log(logn);
  throw Error(ErrorKind::empty_family, msg.str());
}

// Largest single coordinate worth trying; beyond it n e^{-ell} < (log n)^c
// already fails for n >= 3, and small n only shrinks the range.
int
coordinate_limit(const FamilyConfig& cfg)
{
  const double logn = std::log(static_cast<double>(cfg.n));
  double bound = logn - cfg.c * std::log(logn);
  if (!std::isfinite(bound))
    bound = logn;
  return std::max(1, static_cast<int>(std::floor(bound)) + 1);
}

void
enumerate_ani(const FamilyConfig& cfg,
              int limit,
              FamilyIndex& current,
              std::size_t pos,
              std::vector<FamilyIndex>& out)
{
  if (pos == cfg.d) {
    if (passes_bounds(cfg, current))
      out.push_back(current);
    return;
  }
  for (int l = 1; l <= limit; ++l) {
    current.ell[pos] = l;
    enumerate_ani(cfg, limit, current, pos + 1, out);
  }
}

} // namespace

std::vector<double>
index_bandwidth(const FamilyConfig& cfg, const FamilyIndex& idx)
{
  if (idx.ell.size() != expected_length(cfg))
    throw Error(ErrorKind::index_not_in_family, "index has the wrong length for this family");
  std::vector<double> h(cfg.d);
  for (std::size_t i = 0; i < cfg.d; ++i)
    h[i] = std::exp(-static_cast<double>(cfg.mode == FamilyMode::iso ? idx.ell[0] : idx.ell[i]));
  return h;
}

bool
in_family(const FamilyConfig& cfg, const FamilyIndex& idx)
{
  if (idx.ell.size() != expected_length(cfg))
    return false;
  return passes_bounds(cfg, idx);
}

std::vector<FamilyIndex>
iso_index_set(const FamilyConfig& cfg)
{
  cfg.validate();
  if (cfg.mode != FamilyMode::iso)
    throw Error(ErrorKind::invalid_argument, "iso_index_set: config is not in iso mode");
  std::vector<FamilyIndex> out;
  const int limit = coordinate_limit(cfg);
  for (int l = 1; l <= limit; ++l) {
    FamilyIndex idx{ { l } };
    if (passes_bounds(cfg, idx))
      out.push_back(idx);
  }
  if (out.empty())
    throw_empty(cfg);
  return out;
}

std::vector<FamilyIndex>
ani_index_set(const FamilyConfig& cfg)
{
  cfg.validate();
  if (cfg.mode != FamilyMode::ani)
    throw Error(ErrorKind::invalid_argument, "ani_index_set: config is not in ani mode");
  std::vector<FamilyIndex> out;
  FamilyIndex current{ std::vector<int>(cfg.d, 1) };
  enumerate_ani(cfg, coordinate_limit(cfg), current, 0, out);
  if (out.empty())
    throw_empty(cfg);
  return out;
}

std::vector<FamilyIndex>
index_set(const FamilyConfig& cfg)
{
  return cfg.mode == FamilyMode::iso ? iso_index_set(cfg) : ani_index_set(cfg);
}

std::vector<int>
member_orders(const FamilyConfig& cfg, const FamilyIndex& idx)
{
  if (cfg.mode == FamilyMode::iso)
    return std::vector<int>(cfg.d, m_of_ell(cfg.n, idx.ell.at(0)));
  return cfg.resolved_orders();
}

ProductKernelSpec
family_member(const FamilyConfig& cfg, const FamilyIndex& idx)
{
  cfg.validate();
  if (!in_family(cfg, idx)) {
    std::ostringstream msg;
    msg << "index (";
    for (std::size_t i = 0; i < idx.ell.size(); ++i)
      msg << (i ? "," : "") << idx.ell[i];
    msg << ") is not in the " << to_string(cfg.mode) << " family";
    throw Error(ErrorKind::index_not_in_family, msg.str());
  }
  std::vector<OrderedKernel> kernels;
  for (int m : member_orders(cfg, idx))
    kernels.push_back(make_w(m));
  return ProductKernelSpec(std::move(kernels), index_bandwidth(cfg, idx));
}

} // namespace boundkde
