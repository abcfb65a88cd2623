#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "expheat/error.hpp"
#include "expheat/nonlinearity.hpp"

using namespace expheat;

TEST_CASE("source, primitive and derivative at fixed points") {
  const auto foc = Nonlinearity::focusing();
  for (auto nl : {foc, Nonlinearity::defocusing(),
                  Nonlinearity::focusing(Variant::PureExp)}) {
    CHECK(nl.source(0.0) == 0.0);
    CHECK(nl.primitive(0.0) == 0.0);
  }
  CHECK(foc.source_derivative(0.0) == 0.0);
  CHECK(foc.primitive(1.0) == doctest::Approx((std::exp(1.0) - 2.0) / 2.0).epsilon(1e-15));
  CHECK(Nonlinearity::defocusing().primitive(1.0) ==
        doctest::Approx(-(std::exp(1.0) - 2.0) / 2.0).epsilon(1e-15));
  CHECK(Nonlinearity::focusing(Variant::PureExp).primitive(1.0) ==
        doctest::Approx((std::exp(1.0) - 1.0) / 2.0).epsilon(1e-15));
  CHECK(Nonlinearity::zero().source(2.0) == 0.0);
}

TEST_CASE("derivatives agree with centered differences") {
  for (auto nl : {Nonlinearity::focusing(), Nonlinearity::defocusing(),
                  Nonlinearity::focusing(Variant::PureExp)}) {
    for (double u : {0.5, 1.0, 2.0}) {
      const double h = 1e-5 * u;
      const double fd = (nl.source(u + h) - nl.source(u - h)) / (2 * h);
      CHECK(nl.source_derivative(u) == doctest::Approx(fd).epsilon(1e-6));
      const double Fd = (nl.primitive(u + h) - nl.primitive(u - h)) / (2 * h);
      CHECK(nl.source(u) == doctest::Approx(Fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("symmetry and sign") {
  const auto foc = Nonlinearity::focusing();
  const auto def = Nonlinearity::defocusing();
  for (int i = -1300; i <= 1300; ++i) {
    const double u = i * 0.01;
    CHECK(foc.source(-u) == -foc.source(u));
    CHECK(foc.primitive(-u) == foc.primitive(u));
    CHECK(u * def.source(u) <= 0.0);
    if (u != 0.0) CHECK((foc.source(u) > 0) == (u > 0));
  }
}

TEST_CASE("overflow guard") {
  const auto nl = Nonlinearity::focusing();
  CHECK_NOTHROW(nl.source(13.0));
  CHECK_THROWS_AS(nl.source(13.5), OverflowGuardError);
  CHECK_THROWS_AS(nl.primitive(-20.0), OverflowGuardError);
  CHECK_THROWS_AS(nl.source_derivative(14.0), OverflowGuardError);
}

TEST_CASE("expm1_minus_x is accurate for small arguments") {
  for (double x : {1e-12, 1e-8, 1e-4, 0.1, 1.0, 5.0}) {
    // Series oracle for small x, direct formula otherwise.
    const double ref = x < 1e-3 ? x * x / 2 + x * x * x / 6 + x * x * x * x / 24
                                : std::expm1(x) - x;
    CHECK(expm1_minus_x(x) == doctest::Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("superquadratic margin") {
  const auto nl = Nonlinearity::focusing();
  SUBCASE("small-u limit is 2") {
    CHECK(superquadratic_ratio(1e-6, nl) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(superquadratic_ratio(-1e-3, nl) == doctest::Approx(2.0).epsilon(1e-5));
  }
  SUBCASE("ratio at u = 3 against 50-digit arithmetic") {
    using big = boost::multiprecision::cpp_bin_float_50;
    const big u = 3;
    const big e = exp(u * u);
    const big uf = u * u * (e - 1);
    const big F = (e - 1 - u * u) / 2;
    const double oracle = static_cast<double>((uf - 2 * F) / F);
    CHECK(superquadratic_ratio(3.0, nl) == doctest::Approx(oracle).epsilon(1e-13));
  }
  SUBCASE("series and direct branches join continuously") {
    const double below = superquadratic_ratio(0.0099999, nl);
    const double above = superquadratic_ratio(0.0100001, nl);
    CHECK(below == doctest::Approx(above).epsilon(1e-8));
  }
  SUBCASE("infimum over the default scan") {
    const auto m = superquadratic_margin(nl);
    CHECK(m.inf_ratio > 0.0);
    CHECK(m.inf_ratio >= 2.0 - 1e-3);
    CHECK(m.argmin == doctest::Approx(1e-4));
    CHECK_FALSE(m.sample_spec.empty());
  }
  SUBCASE("pure exponential variant is reported only") {
    const auto m = superquadratic_margin(Nonlinearity::focusing(Variant::PureExp));
    MESSAGE("pure_exp margin inf = " << m.inf_ratio << " at u = " << m.argmin);
    CHECK(std::isfinite(m.inf_ratio));
  }
  CHECK_THROWS_AS(superquadratic_margin(Nonlinearity::defocusing()), InvalidArgument);
}

TEST_CASE("Lipschitz-type difference estimates") {
  const auto nl = Nonlinearity::focusing();
  SUBCASE("pairs (u, 0) have a finite limit as u -> 0") {
    // Both sides scale like u^3: f(u) ~ u^3 and the weight ~ (1 + eps) u^2.
    std::vector<std::pair<double, double>> a{{1e-3, 0.0}}, b{{1e-4, 0.0}};
    const double ra = lipschitz_estimate_check(a, 1.0, nl).max_ratio_source;
    const double rb = lipschitz_estimate_check(b, 1.0, nl).max_ratio_source;
    CHECK(ra == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(rb == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("random pairs, two seeds") {
    auto run = [&](std::uint64_t seed) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> d(-3.0, 3.0);
      std::vector<std::pair<double, double>> pairs;
      while (pairs.size() < 100000) {
        const double a = d(rng), b = d(rng);
        if (a != b) pairs.emplace_back(a, b);
      }
      return lipschitz_estimate_check(pairs, 1.0, nl);
    };
    const auto r1 = run(1), r2 = run(2);
    CHECK(std::isfinite(r1.max_ratio_source));
    CHECK(std::isfinite(r1.max_ratio_derivative));
    CHECK(r1.pairs == 100000);
    CHECK(r2.max_ratio_source == doctest::Approx(r1.max_ratio_source).epsilon(0.05));
    CHECK(r2.max_ratio_derivative == doctest::Approx(r1.max_ratio_derivative).epsilon(0.05));
  }
  std::vector<std::pair<double, double>> bad{{2.0, 2.0}};
  CHECK_THROWS_AS(lipschitz_estimate_check(bad, 1.0, nl), InvalidArgument);
}
