#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "nlgame/analysis.hpp"
#include "nlgame/errors.hpp"
#include "nlgame/solver.hpp"

using namespace nlgame;

TEST_CASE("detect_bands basics") {
  const std::vector<double> same(20, 0.7);
  const auto one = detect_bands(same, 0.1);
  CHECK(one.count() == 1);
  CHECK(one.masses[0] == 1.0);
  CHECK(one.centers[0] == doctest::Approx(0.7));
  CHECK(std::isinf(one.min_separation()));

  std::vector<double> two(50, 0.0);
  two.insert(two.end(), 50, 0.4);
  const auto b = detect_bands(two, 0.1);
  REQUIRE(b.count() == 2);
  CHECK(b.centers[0] == 0.0);
  CHECK(b.centers[1] == doctest::Approx(0.4));
  CHECK(b.separations[0] == doctest::Approx(0.4));
  CHECK(b.masses[0] == 0.5);
  CHECK(b.gap_threshold == 0.1);

  CHECK_THROWS_AS(detect_bands(std::vector<double>{}, 0.1), InvalidArgument);
  CHECK_THROWS_AS(detect_bands(same, 0.0), InvalidArgument);
}

TEST_CASE("detect_bands invariants") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0, 0.01);
  std::vector<double> v;
  for (double c : {-1.0, -0.55, 0.0, 0.3, 1.2})
    for (int k = 0; k < 40; ++k) v.push_back(c + noise(rng));
  const auto base = detect_bands(v, 0.1);
  CHECK(base.count() == 5);
  CHECK(std::accumulate(base.masses.begin(), base.masses.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < base.separations.size(); ++i) {
    CHECK(base.separations[i] == base.centers[i + 1] - base.centers[i]);
    CHECK(base.separations[i] > base.gap_threshold);
  }

  for (int trial = 0; trial < 10; ++trial) {
    auto p = v;
    std::shuffle(p.begin(), p.end(), rng);
    const auto s = detect_bands(p, 0.1);
    REQUIRE(s.count() == base.count());
    for (std::size_t i = 0; i < s.count(); ++i) {
      CHECK(s.centers[i] == doctest::Approx(base.centers[i]).epsilon(1e-14));
      CHECK(s.masses[i] == base.masses[i]);
    }
  }

  for (double k : {0.25, 3.0, 1000.0}) {
    std::vector<double> scaled(v);
    for (auto& x : scaled) x *= k;
    const auto s = detect_bands(scaled, 0.1 * k);
    REQUIRE(s.count() == base.count());
    for (std::size_t i = 0; i < s.count(); ++i) CHECK(s.centers[i] == doctest::Approx(k * base.centers[i]));
    for (std::size_t i = 0; i < s.separations.size(); ++i)
      CHECK(s.separations[i] == doctest::Approx(k * base.separations[i]));
  }
}

TEST_CASE("check_band_bounds") {
  const auto single = detect_bands(std::vector<double>{0.2, 0.2}, 0.1);
  const auto r1 = check_band_bounds(single, 3.0, 0.2);
  CHECK(r1.theorem_bound_ok);
  CHECK(r1.empirical_bound_ok);
  CHECK(r1.min_separation_ok);

  for (int b : {2, 3, 5}) {
    const double r = 0.2;
    std::vector<double> v;
    for (int k = 1; k <= b; ++k) v.insert(v.end(), 10, r * k);
    const auto s = detect_bands(v, r / 2);
    REQUIRE(s.count() == static_cast<std::size_t>(b));
    const auto rep = check_band_bounds(s, (b - 1) * r, r);
    CHECK(rep.theorem_bound == doctest::Approx(b));
    CHECK(rep.theorem_bound_ok);
  }

  std::vector<double> five;
  for (int k = 0; k < 5; ++k) five.push_back(-0.5 + 0.25 * k);
  const auto rep = check_band_bounds(detect_bands(five, 0.1), 1.0, 0.2);
  CHECK(rep.empirical_bound == doctest::Approx(3.5));
  CHECK_FALSE(rep.empirical_bound_ok);
  CHECK(rep.theorem_bound_ok);
  CHECK(rep.min_separation_ok);
  CHECK_FALSE(check_band_bounds(detect_bands(five, 0.1), 1.0, 0.3).min_separation_ok);
}

TEST_CASE("non-central separations") {
  // odd count: middle band is central
  const auto odd = detect_bands(std::vector<double>{-0.8, -0.4, 0.0, 0.4, 0.8}, 0.1);
  const auto nc = non_central_separations(odd, -1, 1);
  REQUIRE(nc.size() == 2);
  CHECK(nc[0] == doctest::Approx(0.4));
  CHECK(nc[1] == doctest::Approx(0.4));
  // even count: the two bands around the midpoint are central
  const auto even = detect_bands(std::vector<double>{-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}, 0.05);
  const auto ne = non_central_separations(even, -1, 1);
  REQUIRE(ne.size() == 2);
  CHECK(ne[0] == doctest::Approx(0.4));
  CHECK(non_central_separations(detect_bands(std::vector<double>{0.0}, 0.1), -1, 1).empty());
}

TEST_CASE("density_histogram") {
  const std::vector<double> lumped(30, 0.51);
  const auto h = density_histogram(lumped, 10, 0, 1);
  REQUIRE(h.counts.size() == 10);
  CHECK(h.counts[5] == 30);
  for (std::size_t b = 0; b < 10; ++b) {
    if (b == 5) {
      CHECK(h.log2_density[b] == doctest::Approx(std::log2(1.0 / 0.1)));
    } else {
      CHECK(h.counts[b] == 0);
      CHECK(std::isinf(h.log2_density[b]));
      CHECK(h.log2_density[b] < 0);
    }
  }

  std::vector<double> even;
  for (int k = 0; k < 1001; ++k) even.push_back(k / 1000.0);
  const auto e = density_histogram(even, 4, 0, 1);
  const auto [mn, mx] = std::minmax_element(e.counts.begin(), e.counts.end());
  CHECK(*mx - *mn <= 1);
  CHECK(std::accumulate(e.counts.begin(), e.counts.end(), std::size_t{0}) == 1001);

  // two bands on a fine grid of bins
  std::vector<double> two(100, -0.2);
  two.insert(two.end(), 100, 0.2);
  const auto t = density_histogram(two, 200, -1, 1);
  CHECK(std::count_if(t.counts.begin(), t.counts.end(), [](std::size_t c) { return c > 0; }) == 2);

  CHECK_THROWS_AS(density_histogram(even, 4, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(density_histogram(even, 1, 0, 1), InvalidArgument);
}

TEST_CASE("lipschitz_estimate") {
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.01);
  const auto lin = sample(g, [](std::span<const double> x) { return 2.5 * x[0]; });
  CHECK(lipschitz_estimate(lin) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(lipschitz_estimate(sample(g, [](std::span<const double>) { return 4.0; })) == 0.0);

  auto g2 = Grid::build(Domain({0, 0}, {1, 1}), 0.1);
  const auto plane = sample(g2, [](std::span<const double> x) { return x[0] - 3 * x[1]; });
  CHECK(lipschitz_estimate(plane) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("diffusion contracts the slope") {
  auto g = Grid::build(Domain::interval(0, 1), 0.01);
  NonlocalContext ctx(g, KernelSpec::uniform(), RecognitionSpec::quad_coord());
  const auto u0 = sample(g, [](std::span<const double> x) { return 2 * x[0]; });
  const auto res = solve(ctx, u0, 2.0, 0.01, std::vector<double>{0.5, 1.0, 1.5});
  for (std::size_t s = 1; s < res.lipschitz_series.size(); ++s)
    CHECK(res.lipschitz_series[s] <= res.lipschitz_series[s - 1]);
  CHECK(res.lipschitz_series.back() == doctest::Approx(2 * std::exp(-2.0)).epsilon(0.02));
}
