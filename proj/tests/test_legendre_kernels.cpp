#include "boundkde/error.hpp"
#include "boundkde/legendre_kernels.hpp"
#include "boundkde/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <doctest.h>

#include <cmath>

using namespace boundkde;

namespace {

// Independent 20-point Gauss rule on [0,1], exact to degree 39.
template<class F>
double
integrate01(F f)
{
  return boost::math::quadrature::gauss<double, 20>::integrate(f, 0.0, 1.0);
}

} // namespace

TEST_CASE("legendre_phi values")
{
  CHECK(legendre_phi(0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(legendre_phi(1, 0.0) == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
  CHECK(legendre_phi(2, 0.5) == doctest::Approx(-std::sqrt(5.0) / 2).epsilon(1e-15));
}

TEST_CASE("legendre_phi is orthonormal on [0,1]")
{
  for (int r = 0; r <= 8; ++r)
    for (int s = 0; s <= 8; ++s) {
      const double v = integrate01([&](double u) { return legendre_phi(r, u) * legendre_phi(s, u); });
      CHECK(v == doctest::Approx(r == s ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("make_w small orders")
{
  CHECK(make_w(0).coeffs() == std::vector<double>{ 1.0 });
  const auto w1 = make_w(1).coeffs();
  REQUIRE(w1.size() == 2);
  CHECK(w1[0] == doctest::Approx(4.0));
  CHECK(w1[1] == doctest::Approx(-6.0));
  const auto w2 = make_w(2).coeffs();
  REQUIRE(w2.size() == 3);
  CHECK(w2[0] == doctest::Approx(9.0));
  CHECK(w2[1] == doctest::Approx(-36.0));
  CHECK(w2[2] == doctest::Approx(30.0));
}

TEST_CASE("make_w argument errors")
{
  CHECK_THROWS_AS(make_w(-1), Error);
  try {
    make_w(41);
    FAIL("expected OrderTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::order_too_large);
  }
  CHECK_NOTHROW(make_w(40));
}

TEST_CASE("hilbert_coeffs small orders")
{
  CHECK(hilbert_coeffs(0) == std::vector<double>{ 1.0 });
  CHECK(hilbert_coeffs(1) == std::vector<double>{ 4.0, -6.0 });
  CHECK(hilbert_coeffs(2) == std::vector<double>{ 9.0, -36.0, 30.0 });
  CHECK_THROWS_AS(hilbert_coeffs(9), Error);
}

TEST_CASE("make_w agrees with the Hilbert solve")
{
  for (int m = 0; m <= hilbert_max_order; ++m) {
    const auto a = make_w(m).coeffs();
    const auto b = hilbert_coeffs(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(std::abs(a[k] - b[k]) <= 1e-6 * std::abs(b[k]));
  }
}

TEST_CASE("kernel_eval examples")
{
  const auto w1 = make_w(1);
  const auto w2 = make_w(2);
  CHECK(kernel_eval(w1, 0.0) == doctest::Approx(4.0));
  CHECK(kernel_eval(w1, 1.0) == doctest::Approx(-2.0));
  CHECK(kernel_eval(w2, 1.5) == 0.0);
  CHECK(kernel_eval(w2, -1e-12) == 0.0);
}

TEST_CASE("recurrence and monomial evaluation agree at low order")
{
  for (int m = 0; m <= 6; ++m) {
    const auto w = make_w(m);
    for (int k = 0; k <= 100; ++k) {
      const double u = k / 100.0;
      CHECK(kernel_eval(w, u) == doctest::Approx(kernel_eval_monomial(w, u)).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("moment annihilation up to order 12")
{
  for (int m = 0; m <= 12; ++m) {
    const auto w = make_w(m);
    CHECK(integrate01([&](double u) { return w(u); }) == doctest::Approx(1.0).epsilon(1e-12));
    for (int r = 1; r <= m; ++r) {
      const double mom = integrate01([&](double u) { return std::pow(u, r) * w(u); });
      CHECK(std::abs(mom) < 1e-9);
    }
  }
}

TEST_CASE("sup and L2 norms")
{
  for (int m = 0; m <= 12; ++m) {
    const auto w = make_w(m);
    const double bound = (m + 1.0) * (m + 1.0);
    CHECK(std::abs(w(0.0) - bound) < 1e-9);
    for (int k = 0; k <= 1000; ++k)
      CHECK(std::abs(w(k / 1000.0)) <= bound + 1e-9);
    CHECK(std::abs(kernel_lp_norm(w, 2.0) - (m + 1.0)) < 1e-8);
    const double l2 = std::sqrt(integrate01([&](double u) { return w(u) * w(u); }));
    CHECK(std::abs(l2 - (m + 1.0)) < 1e-8);
  }
}

TEST_CASE("kernel_lp_norm for general p")
{
  CHECK(kernel_lp_norm(make_w(0), 1.0) == doctest::Approx(1.0));
  CHECK(kernel_lp_norm(make_w(0), 3.7) == doctest::Approx(1.0));
  // w_1 = 4 - 6u changes sign at 2/3: int |w_1| = 4/3 + 1/3 = 5/3.
  CHECK(kernel_lp_norm(make_w(1), 1.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  // int |4-6u|^4 du = (4^5 + 2^5) / 30
  CHECK(kernel_lp_norm(make_w(1), 4.0) ==
        doctest::Approx(std::pow((1024.0 + 32.0) / 30.0, 0.25)).epsilon(1e-12));
  // Brute-force midpoint oracle for a higher order.
  const auto w5 = make_w(5);
  const int cells = 400000;
  double acc = 0.0;
  for (int k = 0; k < cells; ++k)
    acc += std::pow(std::abs(w5((k + 0.5) / cells)), 3.0);
  CHECK(kernel_lp_norm(w5, 3.0) == doctest::Approx(std::cbrt(acc / cells)).epsilon(1e-6));
  CHECK_THROWS_AS(kernel_lp_norm(w5, 0.5), Error);
}

TEST_CASE("kernel roots are sign changes")
{
  const auto w3 = make_w(3);
  const auto roots = kernel_roots(w3);
  CHECK(roots.size() == 3);
  for (double r : roots)
    CHECK(std::abs(w3(r)) < 1e-9);
}

TEST_CASE("high order kernels stay accurate")
{
  const auto w = make_w(30);
  CHECK(w(0.0) == doctest::Approx(31.0 * 31.0).epsilon(1e-12));
  CHECK(kernel_lp_norm(w, 2.0) == doctest::Approx(31.0).epsilon(1e-12));
}
