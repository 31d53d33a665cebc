#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nlgame/errors.hpp"
#include "nlgame/nonlocal.hpp"

using namespace nlgame;

namespace {

GridFunction fn(const GridPtr& g, std::function<double(double)> f) {
  return sample(g, [&](std::span<const double> x) { return f(x[0]); });
}

// Straight transcription of the quadrature sum, one node at a time.
double reference_G(const GridPtr& g, const KernelSpec& k, const RecognitionSpec& r, const GridFunction& w,
                   std::size_t i) {
  double s = 0;
  for (std::size_t j = 0; j < g->quad_count(); ++j) {
    const std::size_t jn = g->quad_to_node(j);
    s += eval_kernel(k, g->domain(), g->node(i), g->node(jn)) * rho_prime(r, w[i] - w[jn]);
  }
  return s * g->weight();
}

}  // namespace

TEST_CASE("uniform kernel, quadratic coordination, w = x") {
  auto g = Grid::build(Domain::interval(0, 1), 0.25);
  NonlocalContext ctx(g, KernelSpec::uniform(), RecognitionSpec::quad_coord());
  const auto G = apply_nonlocality(ctx, fn(g, [](double x) { return x; }));
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const double x = g->node(i)[0];
    CHECK(G[i] == doctest::Approx(0.375 - x).epsilon(1e-14));
  }
  CHECK(G[2] == doctest::Approx(-0.125));
}

TEST_CASE("constant profiles are stationary under coordination") {
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.01);
  for (const auto& k : {KernelSpec::uniform(), KernelSpec::gaussian(0.5), KernelSpec::table({-0.2, 0, 0.2}, {0, 1, 0})})
    for (const auto& r : {RecognitionSpec::quad_coord(), RecognitionSpec::bump(0.2)}) {
      NonlocalContext ctx(g, k, r);
      const auto G = apply_nonlocality(ctx, fn(g, [](double) { return 1.7; }));
      for (double v : G.values()) CHECK(v == 0.0);
    }
}

TEST_CASE("linear rho gives twice the discrete row mass") {
  for (double h : {0.25, 0.01}) {
    auto g = Grid::build(Domain::interval(0, 1), h);
    NonlocalContext ctx(g, KernelSpec::uniform(), RecognitionSpec::linear(2.0));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    std::vector<double> v(g->node_count());
    for (auto& x : v) x = n(rng);
    const auto G = apply_nonlocality(ctx, GridFunction(g, v));
    for (double x : G.values()) CHECK(x == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("quadrature agrees with direct evaluation") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.02);
  std::vector<double> v(g->node_count());
  for (auto& x : v) x = 0.5 * u(rng);
  const GridFunction w(g, v);
  for (const auto& k : {KernelSpec::uniform(), KernelSpec::gaussian(0.5)})
    for (const auto& r : {RecognitionSpec::quad_coord(), RecognitionSpec::quad_anticoord(), RecognitionSpec::bump(0.2),
                          RecognitionSpec::linear(-1.0)}) {
      NonlocalContext ctx(g, k, r);
      const auto G = apply_nonlocality(ctx, w);
      for (std::size_t i = 0; i < g->node_count(); ++i)
        CHECK(G[i] == doctest::Approx(reference_G(g, k, r, w, i)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("two-dimensional quadrature agrees with direct evaluation") {
  auto g = Grid::build(Domain({0, 0}, {1, 0.5}), 0.125);
  std::vector<double> v(g->node_count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(3 * g->node(i)[0]) * std::cos(5 * g->node(i)[1]);
  const GridFunction w(g, v);
  for (const auto& k : {KernelSpec::gaussian(0.3), KernelSpec::table({0, 0.3, 0.6}, {2, 1, 0})}) {
    NonlocalContext ctx(g, k, RecognitionSpec::bump(0.5));
    const auto G = apply_nonlocality(ctx, w);
    for (std::size_t i = 0; i < g->node_count(); ++i)
      CHECK(G[i] == doctest::Approx(reference_G(g, k, ctx.recognition(), w, i)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("compact-support path is bit-identical to the dense sum") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 1.0 / 200.0);
  const auto table_rho = RecognitionSpec::table({-0.3, -0.1, 0, 0.1, 0.3}, {0, 0.4, 0, -0.4, 0}, 0);
  for (const auto& r : {RecognitionSpec::bump(0.2), RecognitionSpec::bump(0.05), table_rho}) {
    NonlocalContext ctx(g, KernelSpec::gaussian(0.5), r, 3);
    REQUIRE(ctx.compact_support());
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> v(g->node_count());
      // plateaus plus noise: many exact ties and many near-support gaps
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::round(4 * u(rng)) * 0.1 + (trial % 2 ? 0.0 : 0.01 * u(rng));
      std::vector<double> fast(v.size()), dense(v.size());
      NonlocalWorkspace ws;
      apply_nonlocality(ctx, v, fast, &ws);
      apply_nonlocality_dense(ctx, v, dense);
      for (std::size_t i = 0; i < v.size(); ++i) CHECK(fast[i] == dense[i]);
    }
  }
}

TEST_CASE("worker count does not change the result") {
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.005);
  const auto w = fn(g, [](double x) { return 2 * x + 0.3 * std::sin(9 * x); });
  NonlocalContext one(g, KernelSpec::gaussian(0.5), RecognitionSpec::quad_coord(), 1);
  NonlocalContext four(g, KernelSpec::gaussian(0.5), RecognitionSpec::quad_coord(), 4);
  const auto a = apply_nonlocality(one, w);
  const auto b = apply_nonlocality(four, w);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("vertical shift invariance") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.01);
  NonlocalContext ctx(g, KernelSpec::gaussian(0.5), RecognitionSpec::quad_coord());
  for (int k = 0; k < 100; ++k) {
    std::vector<double> v(g->node_count()), vc(v.size());
    const double c = 3 * u(rng);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = u(rng);
      vc[i] = v[i] + c;
    }
    const auto a = apply_nonlocality(ctx, GridFunction(g, v));
    const auto b = apply_nonlocality(ctx, GridFunction(g, vc));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
  }
}

TEST_CASE("discrete Lipschitz bound") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.01);
  for (const auto& r : {RecognitionSpec::quad_coord(), RecognitionSpec::bump(0.2)}) {
    const auto k = KernelSpec::gaussian(0.5);
    NonlocalContext ctx(g, k, r);
    const double R = 1.0;
    const double L = lipschitz_bound(r, -2 * R, 2 * R);
    const double B = sup_row_bound(k, g);
    const double vol = g->domain().volume();
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> a(g->node_count()), b(a.size());
      double diff = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = R * u(rng);
        b[i] = std::clamp(a[i] + 0.05 * u(rng), -R, R);
        diff = std::max(diff, std::abs(a[i] - b[i]));
      }
      const auto Ga = apply_nonlocality(ctx, GridFunction(g, a));
      const auto Gb = apply_nonlocality(ctx, GridFunction(g, b));
      double gd = 0;
      for (std::size_t i = 0; i < a.size(); ++i) gd = std::max(gd, std::abs(Ga[i] - Gb[i]));
      CHECK(gd <= 2 * L * B * vol * diff + 1e-14);
    }
  }
}

TEST_CASE("quadrature is first order against the continuum operator") {
  // uniform kernel + quadratic coordination on [0, 1]: g[u](x) = mean(u) - u(x)
  auto u = [](double x) { return std::sin(2 * x) + x * x; };
  const double mean = (1 - std::cos(2.0)) / 2 + 1.0 / 3.0;
  std::vector<double> hs{1.0 / 25, 1.0 / 50, 1.0 / 100}, errs;
  for (double h : hs) {
    auto g = Grid::build(Domain::interval(0, 1), h);
    NonlocalContext ctx(g, KernelSpec::uniform(), RecognitionSpec::quad_coord());
    const auto G = apply_nonlocality(ctx, fn(g, u));
    double e = 0;
    for (std::size_t i = 0; i < G.size(); ++i) e = std::max(e, std::abs(G[i] - (mean - u(g->node(i)[0]))));
    errs.push_back(e);
  }
  const double order = std::log(errs[0] / errs[2]) / std::log(hs[0] / hs[2]);
  CHECK(order >= 0.8);
}

TEST_CASE("payoff") {
  auto unit = Grid::build(Domain::interval(0, 1), 0.01);
  NonlocalContext bump(unit, KernelSpec::uniform(), RecognitionSpec::bump(0.2));
  const auto c = fn(unit, [](double) { return 0.4; });
  for (std::size_t i : {0u, 50u, 100u}) CHECK(payoff(bump, c, i) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  NonlocalContext zero(unit, KernelSpec::uniform(), RecognitionSpec::table({-1, 0, 1}, {0, 0, 0}, 0));
  const auto w = fn(unit, [](double x) { return x; });
  for (std::size_t i = 0; i < unit->node_count(); i += 10) CHECK(payoff(zero, w, i) == 0.0);

  auto fine = Grid::build(Domain::interval(0, 1), 1.0 / 200);
  NonlocalContext quad(fine, KernelSpec::uniform(), RecognitionSpec::quad_coord());
  const double p = payoff(quad, fn(fine, [](double x) { return x; }), 100);
  CHECK(std::abs(p - (-1.0 / 24)) < 0.05 / 24);
}

TEST_CASE("stationary_residual") {
  auto g = Grid::build(Domain::interval(-0.5, 0.5), 0.01);
  NonlocalContext ctx(g, KernelSpec::gaussian(0.5), RecognitionSpec::quad_coord());
  CHECK(stationary_residual(ctx, fn(g, [](double) { return -2.0; })) == 0.0);

  // bands at multiples of r: every cross-band term falls outside the support
  const double r = 0.2;
  NonlocalContext bctx(g, KernelSpec::gaussian(0.5), RecognitionSpec::bump(r));
  const auto banded = fn(g, [&](double x) { return x < -0.2 ? r : (x < 0.1 ? 2 * r : 3 * r); });
  CHECK(stationary_residual(bctx, banded) == 0.0);
}

TEST_CASE("identity profile is stationary away from the boundary for an even table kernel") {
  const double delta = 0.5;
  auto g = Grid::build(Domain::interval(-3, 3), 0.05);
  NonlocalContext ctx(g, KernelSpec::table({-delta, 0, delta}, {0, 2, 0}), RecognitionSpec::quad_coord());
  const auto w = fn(g, [](double x) { return x; });
  const auto G = apply_nonlocality(ctx, w);
  for (std::size_t i = 0; i < g->node_count(); ++i) {
    const double x = g->node(i)[0];
    if (x - (-3) >= delta && 3 - x >= delta + g->h()) CHECK(std::abs(G[i]) <= 1e-10);
  }
}

TEST_CASE("nash_residual") {
  auto g = Grid::build(Domain::interval(0, 1), 0.01);
  const double a = 0.2;
  NonlocalContext ctx(g, KernelSpec::gaussian(0.5), RecognitionSpec::bump(a));
  const auto c = fn(g, [](double) { return 0.0; });
  const std::vector<double> shifts{-0.3, 0, 0.3};
  CHECK(nash_residual(ctx, c, shifts) == 0.0);
  CHECK(nash_residual(ctx, fn(g, [](double x) { return x; }), std::vector<double>{0.0}) == 0.0);
  CHECK_THROWS_AS(nash_residual(ctx, c, std::vector<double>{0.1}), InvalidArgument);
  CHECK_THROWS_AS(nash_residual(ctx, c, std::vector<double>{}), InvalidArgument);

  // one node at 2a, everything else at 0
  NonlocalContext uctx(g, KernelSpec::uniform(), RecognitionSpec::bump(a));
  std::vector<double> v(g->node_count(), 0.0);
  const std::size_t spike = 37;
  v[spike] = 2 * a;
  const GridFunction w(g, v);
  CHECK(stationary_residual(uctx, w) <= 1e-12);
  const double res = nash_residual(uctx, w, std::vector<double>{-2 * a, 0.0});
  // joining the crowd at 0 earns rho(0) from every other quad node
  const double gain = std::exp(-1.0) * (1.0 - g->weight());
  CHECK(res < 0.0);
  CHECK(res <= -(gain - 1e-12));
  CHECK(nash_residual(uctx, w, default_shift_grid(w)) < 0.0);
}

TEST_CASE("default shift grid") {
  auto g = Grid::build(Domain::interval(0, 1), 0.1);
  const auto s = default_shift_grid(fn(g, [](double x) { return 2 * x - 0.5; }));
  REQUIRE(s.size() == 81);
  CHECK(s.front() == doctest::Approx(-3.0));
  CHECK(s.back() == doctest::Approx(3.0));
  CHECK(s[40] == 0.0);
  const auto z = default_shift_grid(fn(g, [](double) { return 0.0; }));
  CHECK(z.front() == doctest::Approx(-2.0));
}

TEST_CASE("mismatched grids are rejected") {
  auto g = Grid::build(Domain::interval(0, 1), 0.1);
  auto other = Grid::build(Domain::interval(0, 1), 0.05);
  NonlocalContext ctx(g, KernelSpec::uniform(), RecognitionSpec::quad_coord());
  CHECK_THROWS_AS(apply_nonlocality(ctx, fn(other, [](double x) { return x; })), InvalidArgument);
}
