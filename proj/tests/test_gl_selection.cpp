#include "boundkde/error.hpp"
#include "boundkde/gl_selection.hpp"
#include "boundkde/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace boundkde;

namespace {

SampleSet
uniform_sample(std::size_t d, std::size_t n, std::uint64_t seed, std::uint64_t stream = 0)
{
  Rng rng(seed, stream);
  std::vector<double> v(d * n);
  for (double& x : v)
    x = rng.uniform();
  return SampleSet(d, v);
}

// Skewed sample: first coordinate concentrated near 0.
SampleSet
skewed_sample(std::size_t n, std::uint64_t seed)
{
  Rng rng(seed, 0);
  std::vector<double> v(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = rng.uniform();
    v[2 * j] = u * u * u;
    v[2 * j + 1] = rng.uniform();
  }
  return SampleSet(2, v);
}

SelectionConfig
iso_cfg(double p = 2.0)
{
  SelectionConfig cfg;
  cfg.p = p;
  cfg.family.mode = FamilyMode::iso;
  cfg.family.d = 1;
  return cfg;
}

// Brute-force L_p distance with pointwise estimates on the cube grid.
double
brute_distance(const ProductKernelSpec& a,
               const ProductKernelSpec& b,
               const SampleSet& sample,
               const CubeGrid& grid,
               double p)
{
  std::vector<double> t(grid.dim());
  double acc = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.tensor().point(k, t);
    acc += grid.weights()[k] * std::pow(std::abs(estimate(a, sample, t) - estimate(b, sample, t)), p);
  }
  return std::pow(acc, 1.0 / p);
}

} // namespace

TEST_CASE("singleton family")
{
  const auto sample = uniform_sample(1, 100, 1);
  const auto res = select(sample, iso_cfg());
  REQUIRE(res.trace.records.size() == 1);
  CHECK(res.trace.chosen == FamilyIndex{ { 3 } });
  CHECK(res.trace.records[0].b_hat == 0.0);
}

TEST_CASE("two-member family against a brute-force path")
{
  for (std::uint64_t seed : { 3u, 4u, 5u }) {
    // a non-uniform sample gives a visible bias term
    Rng rng(seed, 0);
    std::vector<double> v(1000);
    for (double& x : v)
      x = std::pow(rng.uniform(), 4.0);
    const SampleSet sample(1, v);
    for (double p : { 2.0, 3.0 }) {
      SelectionConfig cfg = iso_cfg(p);
      cfg.tau = 0.05;
      const auto eval = evaluate_family(sample, cfg);
      REQUIRE(eval.indices.size() == 2);
      const auto res = select_from(eval, cfg);
      const auto& r = res.trace.records;
      CHECK(r[1].b_hat == 0.0);

      FamilyConfig fam = cfg.family;
      fam.n = 1000;
      const CubeGrid grid(1, cfg.quad);
      const auto s3 = family_member(fam, FamilyIndex{ { 3 } });
      const auto s4 = family_member(fam, FamilyIndex{ { 4 } });
      const double m3 = m_hat(fam, FamilyIndex{ { 3 } }, sample, p, grid);
      const double m4 = m_hat(fam, FamilyIndex{ { 4 } }, sample, p, grid);
      CHECK(r[0].m_hat == doctest::Approx(m3).epsilon(1e-12));
      CHECK(r[1].m_hat == doctest::Approx(m4).epsilon(1e-12));
      const double dist = brute_distance(s3, s4, sample, grid, p);
      CHECK(res.trace.pairwise_norms[0][1] == doctest::Approx(dist).epsilon(1e-12));
      const double b3 = std::max(0.0, dist - (1.0 + cfg.tau) * (m4 + m3));
      CHECK(r[0].b_hat == doctest::Approx(b3).epsilon(1e-10).scale(1e-12));

      // decision identity
      const bool pick3 = b3 + (1 + cfg.tau) * m3 <= (1 + cfg.tau) * m4;
      CHECK((res.trace.chosen == FamilyIndex{ { pick3 ? 3 : 4 } }));
    }
  }
}

TEST_CASE("trace invariants and determinism")
{
  const auto sample = skewed_sample(100000, 8);
  SelectionConfig cfg;
  cfg.family.mode = FamilyMode::ani;
  cfg.family.d = 2;
  cfg.family.orders = { 2, 3 };
  cfg.quad = { 8, 2 };
  const auto a = select(sample, cfg);
  const auto b = select(sample, cfg);
  CHECK(a.trace == b.trace);
  REQUIRE(a.trace.records.size() == 3);
  std::size_t best = 0;
  for (std::size_t k = 0; k < a.trace.records.size(); ++k) {
    const auto& r = a.trace.records[k];
    CHECK(r.b_hat >= 0.0);
    CHECK(std::isfinite(r.objective));
    CHECK(r.objective > 0.0);
    if (r.objective < a.trace.records[best].objective)
      best = k;
  }
  CHECK(a.trace.chosen_position == best);
  CHECK(a.spec.bandwidth() == a.trace.records[best].bandwidth);
}

TEST_CASE("coordinate permutation permutes the selected index")
{
  const auto sample = skewed_sample(100000, 21);
  std::vector<double> swapped(sample.data().size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    swapped[2 * j] = sample(j, 1);
    swapped[2 * j + 1] = sample(j, 0);
  }
  SelectionConfig cfg;
  cfg.family.mode = FamilyMode::ani;
  cfg.family.d = 2;
  cfg.family.orders = { 1, 2 };
  cfg.quad = { 8, 2 };
  cfg.tau = 0.01;
  SelectionConfig pcfg = cfg;
  pcfg.family.orders = { 2, 1 };
  const auto a = select(sample, cfg);
  const auto b = select(SampleSet(2, swapped), pcfg);
  CHECK(b.trace.chosen.ell == std::vector<int>{ a.trace.chosen.ell[1], a.trace.chosen.ell[0] });
}

TEST_CASE("uniform data favours the widest bandwidth")
{
  std::size_t widest = 0;
  const std::size_t reps = 200;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto sample = uniform_sample(1, 1000, 2024, r);
    const auto res = select(sample, iso_cfg());
    widest += res.trace.chosen_position == 0 ? 1 : 0;
  }
  CHECK(widest >= 0.6 * reps);
}

TEST_CASE("config validation")
{
  SelectionConfig cfg;
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.tau = 1.0;
  cfg.p = 0.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  const auto small = uniform_sample(2, 100, 1);
  SelectionConfig iso2;
  iso2.family.d = 2;
  try {
    select(small, iso2);
    FAIL("expected EmptyFamily");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_family);
  }
}
