#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qvort/correlation.hpp"
#include "qvort/reference.hpp"
#include "qvort/rng.hpp"

using namespace qvort;

namespace {

std::vector<PointVortex> uniform_points(int n, double box, std::uint64_t seed,
                                        bool alternate_charge) {
  std::vector<PointVortex> vs(n);
  for (int i = 0; i < n; ++i) {
    vs[i].x = box * uniform01(splitmix64_at(seed, 2 * i));
    vs[i].y = box * uniform01(splitmix64_at(seed, 2 * i + 1));
    vs[i].charge = alternate_charge ? (i % 2 ? -1 : 1) : 1;
  }
  return vs;
}

// 3 standard errors of the value in bin b under the Poisson expectation.
double three_se(const CorrelationFunction& c, int b) {
  return 3.0 * std::sqrt(std::max<double>(static_cast<double>(c.pair_count[b]), 1.0)) /
         c.reference[b];
}

}  // namespace

TEST_CASE("log_bins layout") {
  const auto edges = log_bins(0.01, 0.5, 64);
  REQUIRE(edges.size() == 65);
  CHECK(edges.front() == 0.01);
  CHECK(edges.back() == 0.5);
  for (std::size_t i = 1; i < edges.size(); ++i) CHECK(edges[i] > edges[i - 1]);
  const double ratio0 = edges[1] / edges[0];
  const double ratio1 = edges[33] / edges[32];
  CHECK(ratio0 == doctest::Approx(ratio1).epsilon(1e-12));
  CHECK_THROWS_AS(log_bins(0.0, 0.5, 8), std::invalid_argument);
}

TEST_CASE("point correlation input validation") {
  const GridSpec g{2, 64, 1.0};
  const auto edges = log_bins(0.01, 0.5, 8);
  std::vector<PointVortex> one(1);
  CHECK_THROWS_AS(point_correlation_2d(one, g, edges, false), std::invalid_argument);
  const auto bad = log_bins(0.01, 0.7, 8);  // beyond L/2
  const auto two = uniform_points(2, g.length, 1, true);
  CHECK_THROWS_AS(point_correlation_2d(two, g, bad, false), std::invalid_argument);
}

TEST_CASE("uniform points give a flat unsigned correlation") {
  const GridSpec g{2, 256, 1.0};
  const auto vs = uniform_points(2000, g.length, 12345, true);
  const auto edges = log_bins(0.02, 0.5, 24);
  const auto xi = point_correlation_2d(vs, g, edges, false);
  for (int b = 0; b < xi.bins(); ++b) CHECK(std::abs(xi.value[b]) < three_se(xi, b));
  const auto eta = point_correlation_2d(vs, g, edges, true);
  for (int b = 0; b < eta.bins(); ++b) CHECK(std::abs(eta.value[b]) < three_se(eta, b));
}

TEST_CASE("parallel pair binning matches the serial reference exactly") {
  const GridSpec g{2, 256, 1.0};
  const auto vs = uniform_points(700, g.length, 9, true);
  const auto edges = log_bins(0.01, 0.5, 40);
  const auto cf = point_correlation_2d(vs, g, edges, true);

  std::vector<std::array<double, 2>> pos(vs.size());
  std::vector<int> charge(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    pos[i] = {vs[i].x, vs[i].y};
    charge[i] = vs[i].charge;
  }
  std::vector<std::int64_t> counts, prods;
  ref::pair_bins_serial(pos, charge, g.length, edges, counts, prods);
  for (int b = 0; b < cf.bins(); ++b) {
    CHECK(cf.pair_count[b] == counts[b]);
    CHECK(cf.value[b] == static_cast<double>(prods[b]) / cf.reference[b]);
  }
}

TEST_CASE("planted opposite-charge pairs produce a negative signed correlation") {
  const GridSpec g{2, 256, 1.0};
  const double d = 0.03;
  std::vector<PointVortex> vs;
  std::uint64_t c = 0;
  for (int p = 0; p < 300; ++p) {
    const double x = uniform01(splitmix64_at(77, c++));
    const double y = uniform01(splitmix64_at(77, c++));
    const double ang = 2 * kPi * uniform01(splitmix64_at(77, c++));
    PointVortex a, b;
    a.x = x;
    a.y = y;
    a.charge = 1;
    b.x = x + d * std::cos(ang);
    b.y = y + d * std::sin(ang);
    b.x -= std::floor(b.x);
    b.y -= std::floor(b.y);
    b.charge = -1;
    vs.push_back(a);
    vs.push_back(b);
  }
  const auto edges = log_bins(0.02, 0.5, 24);
  const auto eta = point_correlation_2d(vs, g, edges, true);
  int bd = 0;
  while (!(d >= edges[bd] && d < edges[bd + 1])) ++bd;
  CHECK(eta.value[bd] < -3.0 * three_se(eta, bd));
  // Beyond the pair scale the signed correlation is consistent with zero.
  for (int b = bd + 2; b < eta.bins(); ++b)
    CHECK(std::abs(eta.value[b]) < three_se(eta, b));
}

TEST_CASE("estimators are invariant under translation and relabeling") {
  const GridSpec g{2, 256, 1.0};
  auto vs = uniform_points(400, g.length, 4, true);
  const auto edges = log_bins(0.02, 0.5, 16);
  const auto base = point_correlation_2d(vs, g, edges, true);

  SUBCASE("relabeling") {
    std::reverse(vs.begin(), vs.end());
    const auto r = point_correlation_2d(vs, g, edges, true);
    for (int b = 0; b < base.bins(); ++b) {
      CHECK(r.value[b] == base.value[b]);
      CHECK(r.pair_count[b] == base.pair_count[b]);
    }
  }
  SUBCASE("translation by a nice offset") {
    for (auto& v : vs) {
      v.x = std::fmod(v.x + 0.25, 1.0);
      v.y = std::fmod(v.y + 0.125, 1.0);
    }
    const auto r = point_correlation_2d(vs, g, edges, true);
    for (int b = 0; b < base.bins(); ++b) CHECK(r.pair_count[b] == base.pair_count[b]);
  }
  SUBCASE("charge conjugation leaves eta unchanged") {
    for (auto& v : vs) v.charge = -v.charge;
    const auto r = point_correlation_2d(vs, g, edges, true);
    for (int b = 0; b < base.bins(); ++b) CHECK(r.value[b] == base.value[b]);
  }
}

TEST_CASE("Poisson segment soup has flat line correlations") {
  const GridSpec g{3, 64, 1.0};
  VortexLineSet set;
  set.grid = g;
  // Independent two-point stubs; each contributes one segment.
  std::uint64_t c = 0;
  for (int s = 0; s < 3000; ++s) {
    const double x = uniform01(splitmix64_at(31, c++));
    const double y = uniform01(splitmix64_at(31, c++));
    const double z = uniform01(splitmix64_at(31, c++));
    const double cth = 2 * uniform01(splitmix64_at(31, c++)) - 1;
    const double phi = 2 * kPi * uniform01(splitmix64_at(31, c++));
    const double sth = std::sqrt(std::max(0.0, 1 - cth * cth));
    const double h = 1.0 / 64;
    VortexLine line;
    line.closed = false;
    line.points.push_back({x, y, z});
    line.points.push_back({x + h * sth * std::cos(phi), y + h * sth * std::sin(phi),
                           z + h * cth});
    set.lines.push_back(line);
  }
  const auto edges = log_bins(0.05, 0.5, 12);
  const auto xi = line_correlation_3d(set, g, edges, false);
  const auto eta = line_correlation_3d(set, g, edges, true);
  for (int b = 0; b < xi.bins(); ++b) {
    CHECK(std::abs(xi.value[b]) < three_se(xi, b));
    CHECK(std::abs(eta.value[b]) < three_se(eta, b));
    // Cauchy-Schwarz on the raw accumulations.
    CHECK(std::abs(eta.value[b]) <= xi.value[b] + 1.0 + 1e-12);
  }
}

TEST_CASE("antiparallel straight lines anticorrelate at their spacing") {
  const GridSpec g{3, 64, 1.0};
  const double d = 0.125;
  const double h = 1.0 / 64;
  VortexLineSet set;
  set.grid = g;
  VortexLine up, down;
  up.closed = false;
  down.closed = false;
  for (int k = 0; k < 64; ++k) {
    up.points.push_back({0.3, k * h, 0.5});
    down.points.push_back({0.3 + d, 1.0 - k * h, 0.5});
  }
  set.lines.push_back(up);
  set.lines.push_back(down);
  const auto edges = log_bins(h, 0.5, 24);
  const auto eta = line_correlation_3d(set, g, edges, true);
  int bd = 0;
  while (!(d >= edges[bd] && d < edges[bd + 1])) ++bd;
  CHECK(eta.value[bd] < 0.0);
  // At the smallest separations only same-line (parallel) pairs contribute.
  int first = 0;
  while (eta.pair_count[first] == 0) ++first;
  CHECK(eta.value[first] > 0.0);

  CHECK_THROWS_AS(line_correlation_3d(VortexLineSet{{3, 64, 1.0}, 0.0, {}, 0.0}, g,
                                      edges, true),
                  std::invalid_argument);
}

TEST_CASE("fit_gaussian_screening recovers a synthetic profile") {
  CorrelationFunction eta;
  eta.edges = log_bins(0.01, 0.5, 32);
  eta.kind = CorrelationKind::SignedPoint;
  const double A = 0.8, sigma = 0.1;
  eta.value.resize(32);
  eta.pair_count.assign(32, 1000);
  eta.reference.assign(32, 1e9);  // negligible noise floor
  for (int b = 0; b < 32; ++b) {
    const double r = eta.r_center(b);
    eta.value[b] = -A * std::exp(-r * r / (2 * sigma * sigma));
  }
  const GaussianFit fit = fit_gaussian_screening(eta);
  CHECK(std::abs(fit.amplitude - A) < 1e-6);
  CHECK(std::abs(fit.sigma - sigma) < 1e-6);
  CHECK(fit.r2 > 1.0 - 1e-12);

  SUBCASE("all-zero eta is rejected") {
    for (auto& v : eta.value) v = 0.0;
    CHECK_THROWS_AS(fit_gaussian_screening(eta), std::domain_error);
  }
  SUBCASE("positive leading bins are rejected") {
    eta.value[0] = 0.5;
    CHECK_THROWS_AS(fit_gaussian_screening(eta), std::domain_error);
  }
}

TEST_CASE("fit_correlation_power_law recovers synthetic slopes") {
  CorrelationFunction xi;
  xi.edges = log_bins(0.01, 0.5, 32);
  xi.kind = CorrelationKind::UndirectedLine;
  xi.value.resize(32);
  xi.pair_count.assign(32, 10);
  xi.reference.assign(32, 1.0);
  for (int b = 0; b < 32; ++b) {
    const double r = xi.r_center(b);
    xi.value[b] = 0.37 / (r * r);
  }
  const PowerLawFit f2 = fit_correlation_power_law(xi, 0.01, 0.5);
  CHECK(f2.slope == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(std::abs(f2.amplitude - 0.37) < 1e-6);

  for (int b = 0; b < 32; ++b) xi.value[b] = 0.2 / xi.r_center(b);
  const PowerLawFit f1 = fit_correlation_power_law(xi, 0.01, 0.5);
  CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-10));

  xi.value[5] = -0.1;
  CHECK_THROWS_AS(fit_correlation_power_law(xi, 0.01, 0.5), std::domain_error);
  CHECK_THROWS_AS(fit_correlation_power_law(xi, 0.4, 0.5), std::invalid_argument);
}
