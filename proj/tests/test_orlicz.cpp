#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "expheat/error.hpp"
#include "expheat/orlicz.hpp"

using namespace expheat;
using std::numbers::pi;

namespace {

GridPtr disc(std::size_t n) {
  return RadialGrid::build(n, 2.0, DomainKind::UnitDisc, 1.0);
}

// Sum of up to four radial bumps with random centres, widths and heights.
RadialField random_bumps(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(0.0, 0.8), w(0.05, 0.5), h(-2.0, 2.0);
  std::uniform_int_distribution<int> count(1, 4);
  const int m = count(rng);
  std::vector<double> cs, ws, hs;
  for (int j = 0; j < m; ++j) {
    cs.push_back(c(rng));
    ws.push_back(w(rng));
    hs.push_back(h(rng));
  }
  return RadialField::sample(g, [&](double r) {
    double v = 0.0;
    for (int j = 0; j < m; ++j) {
      const double z = (r - cs[j]) / ws[j];
      v += hs[j] * std::exp(-z * z);
    }
    return v * (1.0 - r * r);
  });
}

}  // namespace

TEST_CASE("Luxemburg norm closed forms") {
  auto g = disc(512);
  CHECK(luxemburg_norm({RadialField::zeros(g)}) == 0.0);
  const double oracle = 1.0 / std::sqrt(std::log1p(1.0 / pi));
  const double v = luxemburg_norm({RadialField::sample(g, [](double) { return 1.0; })});
  CHECK(std::abs(v - oracle) <= 1e-8);
  CHECK(v == doctest::Approx(1.9023).epsilon(1e-4));

  // Restricted to |x| < rho the constant field obeys pi rho^2 (e^{1/l^2} - 1) = 1.
  auto gu = RadialGrid::build(400, 1.0, DomainKind::UnitDisc, 1.0);
  LuxemburgQuery q{RadialField::sample(gu, [](double) { return 1.0; }), 0.5};
  CHECK(luxemburg_norm(q) ==
        doctest::Approx(1.0 / std::sqrt(std::log1p(1.0 / (pi * 0.25)))).epsilon(1e-8));
}

TEST_CASE("Luxemburg norm properties on random fields") {
  auto g = disc(256);
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_bumps(g, rng);
    if (lp_norm(u, INFINITY) == 0.0) continue;
    const double n1 = luxemburg_norm({u});
    const double n2 = luxemburg_norm({u.scaled(2.0)});
    CHECK(std::abs(n2 - 2.0 * n1) <= 1e-8 * 2.0 * n1);

    // The defining set is [A, inf): the modular straddles 1 around A.
    CHECK(orlicz_modular({u}, n1 * (1 + 1e-9)) <= 1.0);
    CHECK(orlicz_modular({u}, n1 * (1 - 1e-9)) > 1.0);

    for (double p : {2.0, 4.0, 6.0}) {
      const auto e = embedding_check(u, p);
      CHECK(e.ratio <= e.bound * (1.0 + 1e-6));
      CHECK(e.holds);
    }
  }
}

TEST_CASE("embedding constants") {
  auto g = disc(256);
  auto u = RadialField::sample(g, [](double r) { return 1.0 - r * r; });
  CHECK(embedding_check(u, 2.0).bound == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(embedding_check(u, 4.0).bound == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  CHECK(embedding_check(u, 6.0).bound ==
        doctest::Approx(std::pow(boost::math::tgamma(4.0), 1.0 / 6.0)).epsilon(1e-15));
  CHECK_THROWS_AS(embedding_check(RadialField::zeros(g), 2.0), InvalidArgument);
}

TEST_CASE("localized norm is nondecreasing in the radius") {
  auto g = disc(1024);
  auto u = RadialField::sample(g, [](double r) { return 2.0 * (1.0 - r); });
  double prev = 0.0;
  for (double rho : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    LuxemburgQuery q{u, rho};
    const double v = luxemburg_norm(q);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(luxemburg_norm({u, 1.5}), InvalidArgument);
}

TEST_CASE("Moser-Trudinger functional") {
  auto g = disc(4096);
  CHECK(mt_functional(RadialField::zeros(g), 4.0) == 0.0);

  // u = sqrt(ln 1/r): 2 pi int_0^1 (1/r - 1) r dr = pi. The origin node is
  // skipped since u is unbounded there.
  const double r1 = g->nodes()[1];
  auto log_field = RadialField::sample(
      g, [r1](double r) { return std::sqrt(std::log(1.0 / std::max(r, r1))); });
  CHECK(exp_integral(log_field, 1.0, 1.0, true) == doctest::Approx(pi).epsilon(0.01));

  auto u = RadialField::sample(g, [](double r) { return 1.0 - r; });
  double prev = 0.0;
  for (double a : {1.0, 2.0, 4.0, 8.0}) {
    const double v = mt_functional(u, a);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(mt_functional(RadialField::sample(g, [](double) { return 5.0; }), 10.0),
                  OverflowGuardError);
}

TEST_CASE("Moser family") {
  auto g = disc(4096);
  for (double k : {2.0, 8.0, 64.0}) {
    CHECK(h1_seminorm(moser_field(g, k)) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(moser_profile(0.0, k) == doctest::Approx(std::sqrt(std::log(k) / (2 * pi))));
    CHECK(moser_profile(1.0, k) == 0.0);
  }

  const std::vector<double> alphas{2 * pi, 5 * pi};
  const std::vector<double> ks{2, 4, 8, 16, 32, 64};
  const auto rows = mt_sharpness_scan(alphas, ks, {4096, 2.0, DomainKind::UnitDisc, 1.0});
  REQUIRE(rows.size() == 12);
  CHECK(rows[5].ratio / rows[0].ratio < 10.0);
  for (std::size_t j = 3; j < 6; ++j) CHECK(rows[6 + j].ratio > rows[6 + j - 1].ratio);
  CHECK(rows[11].ratio / rows[6].ratio > 10.0);
}

TEST_CASE("exp-integrability with a refinement gap") {
  const GridSpec spec{2048, 2.0, DomainKind::TruncatedPlane, 12.0};
  auto zero = exp_integrability([](double) { return 0.0; }, spec, 1.0, 1.0);
  CHECK(zero.value_n == 0.0);
  CHECK(zero.gap == 0.0);

  // Oracle: pi int_0^inf (e^{e^{-2s}} - 1) ds by adaptive Gauss-Kronrod.
  const double oracle = pi * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                 [](double s) { return std::expm1(std::exp(-2 * s)); },
                                 0.0, 40.0, 15, 1e-14);
  auto r = exp_integrability([](double x) { return std::exp(-x * x); }, spec, 1.0, 1.0);
  CHECK(std::abs(r.value_n - oracle) <= 1e-4 * oracle);
  CHECK(r.gap < 1e-4);
}
