#include "boundkde/boundary_kernels.hpp"
#include "boundkde/error.hpp"
#include "boundkde/legendre_kernels.hpp"
#include "boundkde/rng.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace boundkde;

namespace {

ProductKernelSpec
spec1(int m, double h)
{
  return ProductKernelSpec({ make_w(m) }, { h });
}

SampleSet
random_sample(std::size_t d, std::size_t n, std::uint64_t seed)
{
  Rng rng(seed, 0);
  std::vector<double> v(d * n);
  for (double& x : v)
    x = rng.uniform();
  return SampleSet(d, v);
}

} // namespace

TEST_CASE("sigma convention")
{
  CHECK(sigma(0.3) == -1.0);
  CHECK(sigma(0.7) == 1.0);
  CHECK(sigma(0.5) == -1.0);
  CHECK(sigma(0.0) == -1.0);
  CHECK(sigma(1.0) == 1.0);
}

TEST_CASE("boundary kernel examples")
{
  const auto s = spec1(0, 0.1);
  const double t1[] = { 0.05 }, x1[] = { 0.10 }, x2[] = { 0.01 };
  const double t2[] = { 0.95 }, x3[] = { 0.90 };
  CHECK(boundary_kernel_eval(s, t1, x1) == doctest::Approx(10.0));
  CHECK(boundary_kernel_eval(s, t1, x2) == 0.0);
  CHECK(boundary_kernel_eval(s, t2, x3) == doctest::Approx(10.0));
}

TEST_CASE("estimate examples")
{
  const auto s = spec1(0, 0.1);
  const SampleSet two(1, { 0.1, 0.2 });
  const double t[] = { 0.05 };
  CHECK(estimate(s, two, t) == doctest::Approx(5.0));
  const SampleSet one(1, { 0.1 });
  const double mid[] = { 0.5 };
  CHECK(estimate(s, one, mid) == 0.0);
}

TEST_CASE("kernel spec and sample validation")
{
  CHECK_THROWS_AS(ProductKernelSpec({ make_w(1) }, { 0.5 }), Error);
  CHECK_THROWS_AS(ProductKernelSpec({ make_w(1) }, { 0.0 }), Error);
  CHECK_THROWS_AS(ProductKernelSpec({ make_w(1) }, { 0.1, 0.1 }), Error);
  const ProductKernelSpec s({ make_w(1), make_w(2) }, { 0.1, 0.3 });
  CHECK(std::abs(s.volume() - 0.03) < 1e-14 * 0.03);
  try {
    SampleSet(2, { 0.1, 0.2, 0.3, 1.5 });
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::out_of_domain);
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
  }
  CHECK_NOTHROW(SampleSet(1, { 0.0, 1.0 }));
  CHECK_THROWS_AS(SampleSet(1, {}), Error);
}

TEST_CASE("grid estimates match pointwise estimates")
{
  const auto s = spec1(0, 0.1);
  const SampleSet two(1, { 0.1, 0.2 });
  TensorGrid g;
  g.axes = { std::vector<double>(11) };
  for (int k = 0; k <= 10; ++k)
    g.axes[0][k] = k / 10.0;
  const auto v = estimate_grid(s, two, g);
  for (int k = 0; k <= 10; ++k) {
    const double t[] = { k / 10.0 };
    CHECK(std::abs(v[k] - estimate(s, two, t)) <= 1e-14);
  }

  const std::vector<std::vector<double>> single{ { 0.05 } };
  CHECK(estimate_grid(s, two, single)[0] == estimate(s, two, single[0]));
}

TEST_CASE("tensor grid path is bit-identical in 2d")
{
  const ProductKernelSpec s({ make_w(2), make_w(1) }, { 0.15, 0.07 });
  const auto sample = random_sample(2, 300, 7);
  TensorGrid g;
  g.axes = { { 0.0, 0.03, 0.31, 0.5, 0.77, 1.0 }, { 0.0, 0.1, 0.5, 0.52, 0.93, 0.99, 1.0 } };
  const auto v = estimate_grid(s, sample, g);
  const auto mom = estimate_grid_moments(s, sample, g);
  std::vector<double> pt(2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.point(k, pt);
    CHECK(v[k] == estimate(s, sample, pt));
    CHECK(mom.mean[k] == v[k]);
    double sq = 0.0;
    for (std::size_t j = 0; j < sample.size(); ++j) {
      const double kv = boundary_kernel_eval(s, pt, sample.point(j));
      sq += kv * kv;
    }
    CHECK(mom.mean_square[k] == doctest::Approx(sq / sample.size()).epsilon(1e-13));
  }
}

TEST_CASE("kernel mass stays inside the unit interval")
{
  for (int m : { 0, 1, 3 })
    for (double h : { 0.05, 0.2, 0.49 }) {
      const auto s = spec1(m, h);
      for (int k = 0; k <= 100; ++k) {
        const double t = k / 100.0;
        const double lo = sigma(t) < 0 ? t : t - h;
        const double hi = lo + h;
        // support lies inside [0,1] and carries unit mass
        CHECK(lo >= -1e-15);
        CHECK(hi <= 1.0 + 1e-15);
        const double mass = boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double x) {
            const double tt[] = { t }, xx[] = { x };
            return boundary_kernel_eval(s, tt, xx);
          },
          lo,
          hi);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
      }
    }
}

TEST_CASE("reflection equivariance")
{
  const ProductKernelSpec s({ make_w(2), make_w(1) }, { 0.2, 0.1 });
  const auto sample = random_sample(2, 200, 3);
  std::vector<double> refl(sample.data());
  for (double& x : refl)
    x = 1.0 - x;
  const SampleSet rs(2, refl);
  for (double a : { 0.0, 0.1, 0.33, 0.6, 0.95 })
    for (double b : { 0.02, 0.49, 0.51, 0.8 }) {
      const double t[] = { a, b }, rt[] = { 1.0 - a, 1.0 - b };
      CHECK(estimate(s, sample, t) == doctest::Approx(estimate(s, rs, rt)).epsilon(1e-12));
    }
}

TEST_CASE("coordinate permutation equivariance")
{
  const ProductKernelSpec s({ make_w(2), make_w(1) }, { 0.2, 0.1 });
  const ProductKernelSpec sp({ make_w(1), make_w(2) }, { 0.1, 0.2 });
  const auto sample = random_sample(2, 200, 5);
  std::vector<double> perm(sample.data().size());
  for (std::size_t j = 0; j < sample.size(); ++j) {
    perm[2 * j] = sample(j, 1);
    perm[2 * j + 1] = sample(j, 0);
  }
  const SampleSet ps(2, perm);
  for (double a : { 0.0, 0.3, 0.7 })
    for (double b : { 0.1, 0.5, 0.9 }) {
      const double t[] = { a, b }, pt[] = { b, a };
      CHECK(estimate(s, sample, t) == estimate(sp, ps, pt));
    }
}

TEST_CASE("uniform unbiasedness by Monte Carlo")
{
  const auto s = spec1(1, 0.1);
  const std::size_t reps = 2000, n = 50;
  for (double t0 : { 0.02, 0.5, 0.98 }) {
    std::vector<double> vals(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      Rng rng(11, r);
      std::vector<double> v(n);
      for (double& x : v)
        x = rng.uniform();
      const double t[] = { t0 };
      vals[r] = estimate(s, SampleSet(1, v), t);
    }
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / reps;
    double var = 0.0;
    for (double v : vals)
      var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (reps - 1) / reps);
    CHECK(std::abs(mean - 1.0) < 4.0 * se);
  }
}

TEST_CASE("clip_negative preserves weighted mass")
{
  const std::vector<double> w{ 0.25, 0.25, 0.25, 0.25 };
  const auto c = clip_negative({ 2.0, -1.0, 1.0, 2.0 }, w);
  CHECK(c[1] == 0.0);
  double mass = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    mass += w[k] * c[k];
  CHECK(mass == doctest::Approx(1.0));
  CHECK(c[0] == doctest::Approx(2.0 * 4.0 / 5.0));
}
