#include "boundkde/error.hpp"
#include "boundkde/estimator_families.hpp"
#include "boundkde/lp_engine.hpp"
#include "boundkde/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace boundkde;

namespace {

SampleSet
random_sample(std::size_t d, std::size_t n, std::uint64_t seed)
{
  Rng rng(seed, 1);
  std::vector<double> v(d * n);
  for (double& x : v)
    x = rng.uniform();
  return SampleSet(d, v);
}

std::vector<double>
tabulate(const CubeGrid& g, double (*f)(std::span<const double>))
{
  std::vector<double> out(g.size());
  std::vector<double> pt(g.dim());
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.tensor().point(k, pt);
    out[k] = f(pt);
  }
  return out;
}

} // namespace

TEST_CASE("quadrant grids")
{
  for (std::size_t d : { 1, 2, 3 }) {
    const CubeGrid g(d, {});
    double total = std::accumulate(g.weights().begin(), g.weights().end(), 0.0);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (QuadrantMask eps = 0; eps < (1u << d); ++eps) {
      const auto q = g.quadrant(eps);
      CHECK(std::accumulate(q.weights.begin(), q.weights.end(), 0.0) ==
            doctest::Approx(std::ldexp(1.0, -static_cast<int>(d))).epsilon(1e-12));
      for (std::size_t k = 0; k < q.size(); ++k)
        for (std::size_t i = 0; i < d; ++i) {
          const double lo = ((eps >> i) & 1u) ? 0.5 : 0.0;
          CHECK(q.node(k)[i] > lo);
          CHECK(q.node(k)[i] < lo + 0.5);
        }
    }
  }
}

TEST_CASE("lp_norm examples")
{
  const CubeGrid g(1, {});
  const std::vector<double> ones(g.size(), 1.0);
  const std::vector<double> zeros(g.size(), 0.0);
  CHECK(lp_norm(ones, g, 3.0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lp_norm(zeros, g, 2.0) == 0.0);
  const auto id = tabulate(g, [](std::span<const double> t) { return t[0]; });
  CHECK(lp_norm(id, g, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_norm(std::vector<double>(3, 1.0), g, 2.0), Error);
}

TEST_CASE("lp_norm bounds and homogeneity")
{
  const CubeGrid g(2, {});
  const auto f = tabulate(g, [](std::span<const double> t) { return std::sin(7 * t[0]) * t[1] - 0.3; });
  double sup = 0.0;
  for (double v : f)
    sup = std::max(sup, std::abs(v));
  for (double p : { 1.0, 1.5, 2.0, 4.0 }) {
    CHECK(lp_norm(f, g, p) <= sup);
    for (double c : { 2.0, -0.5, 4.0 }) {
      std::vector<double> cf(f);
      for (double& v : cf)
        v *= c;
      CHECK(lp_norm(cf, g, p) == std::abs(c) * lp_norm(f, g, p));
    }
  }
}

TEST_CASE("lp_norm converges under refinement")
{
  auto poly = [](std::span<const double> t) { return 1.0 + t[0] * t[0] * t[0] + 2.0 * t[0] * t[1]; };
  for (double p : { 1.0, 2.0, 3.0 }) {
    const CubeGrid coarse(2, { 16, 4 });
    const CubeGrid fine(2, { 32, 4 });
    CHECK(std::abs(lp_norm(tabulate(coarse, poly), coarse, p) - lp_norm(tabulate(fine, poly), fine, p)) <
          1e-9);
  }
}

TEST_CASE("Rosenthal constant and product norms")
{
  CHECK(rosenthal_constant(4.0) == doctest::Approx(42.4152).epsilon(1e-5));
  const ProductKernelSpec s({ make_w(1), make_w(2) }, { 0.1, 0.2 });
  CHECK(product_kernel_norm(s, 2.0) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("gamma_hat constant branch")
{
  const CubeGrid g(1, {});
  const auto q = g.quadrant(0);
  const SampleSet a(1, { 0.2, 0.4 });
  const SampleSet b = random_sample(1, 50, 3);
  const ProductKernelSpec w1({ make_w(1) }, { 0.1 });
  CHECK(gamma_hat(w1, a, 2.0, q) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gamma_hat(w1, a, 2.0, q) == gamma_hat(w1, b, 2.0, q));
  CHECK(gamma_hat(w1, a, 1.5, q) == gamma_hat(w1, b, 1.5, q));
  const ProductKernelSpec w0({ make_w(0) }, { 0.1 });
  CHECK(gamma_hat(w0, a, 1.0, q) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("lambda_hat example against a midpoint oracle")
{
  const CubeGrid g(1, { 50, 8 });
  const ProductKernelSpec w0({ make_w(0) }, { 0.1 });
  const SampleSet one(1, { 0.5 });
  const double got = lambda_hat(w0, one, 4.0, g.quadrant(0));

  // midpoint rule on (0, 1/2) with direct kernel evaluation
  const int cells = 200000;
  double acc = 0.0;
  for (int k = 0; k < cells; ++k) {
    const double t[] = { 0.5 * (k + 0.5) / cells };
    const double x[] = { 0.5 };
    const double kv = boundary_kernel_eval(w0, t, x);
    acc += std::pow(kv * kv, 2.0) * 0.5 / cells;
  }
  const double oracle = std::sqrt(0.1) * std::pow(acc, 0.25);
  CHECK(oracle == doctest::Approx(1.77828).epsilon(1e-5));
  CHECK(got == doctest::Approx(oracle).epsilon(1e-6));

  // the data point is outside the reach of the right quadrant's kernels
  const SampleSet left(1, { 0.05 });
  CHECK(lambda_hat(w0, left, 4.0, g.quadrant(1)) == 0.0);

  const auto s = random_sample(1, 40, 9);
  std::vector<double> dup(s.data());
  dup.insert(dup.end(), s.data().begin(), s.data().end());
  const ProductKernelSpec w2({ make_w(2) }, { 0.15 });
  CHECK(lambda_hat(w2, SampleSet(1, dup), 3.0, g.quadrant(0)) ==
        doctest::Approx(lambda_hat(w2, s, 3.0, g.quadrant(0))).epsilon(1e-13));
  CHECK_THROWS_AS(lambda_hat(w2, s, 2.0, g.quadrant(0)), Error);
}

TEST_CASE("lambda from moments matches the pointwise path")
{
  const CubeGrid g(2, { 8, 3 });
  const ProductKernelSpec s({ make_w(1), make_w(2) }, { 0.2, 0.3 });
  const auto sample = random_sample(2, 80, 4);
  const auto mom = estimate_grid_moments(s, sample, g.tensor());
  for (QuadrantMask eps = 0; eps < 4; ++eps)
    CHECK(lambda_hat_from_moments(mom.mean_square, g, eps, s.volume(), 3.0) ==
          doctest::Approx(lambda_hat(s, sample, 3.0, g.quadrant(eps))).epsilon(1e-12));
}

TEST_CASE("m_hat examples")
{
  FamilyConfig cfg;
  cfg.n = 1000;
  cfg.d = 1;
  const CubeGrid g(1, {});
  const auto sample = random_sample(1, 1000, 2);
  const double m3 = m_hat(cfg, FamilyIndex{ { 3 } }, sample, 2.0, g);
  const double m4 = m_hat(cfg, FamilyIndex{ { 4 } }, sample, 2.0, g);
  CHECK(m3 == doctest::Approx(4.0 / std::sqrt(1000 * std::exp(-3.0))).epsilon(1e-12));
  CHECK(m3 == doctest::Approx(0.56689374).epsilon(1e-7));
  CHECK(m4 == doctest::Approx(0.93464988).epsilon(1e-7));
  CHECK(m3 < m4);
  CHECK(m_hat(cfg, FamilyIndex{ { 3 } }, random_sample(1, 1000, 77), 2.0, g) == m3);
  CHECK(m_hat_pair(cfg, FamilyIndex{ { 3 } }, FamilyIndex{ { 4 } }, sample, 2.0, g) ==
        doctest::Approx(m3 + m4).epsilon(1e-15));
  CHECK(m_hat_pair(cfg, FamilyIndex{ { 3 } }, FamilyIndex{ { 3 } }, sample, 2.0, g) == 2.0 * m3);

  // p > 2: strictly positive and data-dependent
  const double m3p = m_hat(cfg, FamilyIndex{ { 3 } }, sample, 3.0, g);
  CHECK(m3p > 0.0);
  CHECK_THROWS_AS(m_hat(cfg, FamilyIndex{ { 3 } }, random_sample(1, 10, 1), 2.0, g), Error);
}

TEST_CASE("m_hat_pair in ani mode uses the coordinatewise minimum")
{
  const std::size_t n = 1000000;
  FamilyConfig cfg;
  cfg.n = static_cast<std::int64_t>(n);
  cfg.d = 2;
  cfg.mode = FamilyMode::ani;
  const CubeGrid g(2, { 2, 1 });
  // the p = 2 branch never reads point values, so a constant sample suffices
  const SampleSet sample(2, std::vector<double>(2 * n, 0.5));
  const FamilyIndex a{ { 4, 5 } }, b{ { 5, 4 } }, lo{ { 4, 4 } };
  const double m_b = m_hat(cfg, b, sample, 2.0, g);
  const double m_lo = m_hat(cfg, lo, sample, 2.0, g);
  CHECK(m_b == doctest::Approx(4.0 * 3.0 * 3.0 / std::sqrt(1e6 * std::exp(-9.0))).epsilon(1e-12));
  CHECK(m_lo == doctest::Approx(4.0 * 3.0 * 3.0 / std::sqrt(1e6 * std::exp(-8.0))).epsilon(1e-12));
  CHECK(m_hat_pair(cfg, a, b, sample, 2.0, g) == m_b + m_lo);
}
