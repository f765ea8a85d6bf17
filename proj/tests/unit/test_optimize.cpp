#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sfreject/error.hpp"
#include "sfreject/nelder_mead.hpp"

using namespace sfreject;

namespace {

double quadratic_12(std::span<const double> z) {
  return (z[0] - 1.0) * (z[0] - 1.0) + (z[1] - 2.0) * (z[1] - 2.0);
}

double rosenbrock(std::span<const double> z) {
  const double a = 1.0 - z[0];
  const double b = z[1] - z[0] * z[0];
  return a * a + 100.0 * b * b;
}

}  // namespace

TEST(Minimize, QuadraticReachesAnalyticMinimum) {
  const auto r = minimize(quadratic_12, Vector{0.0, 0.0}, SimplexConfig{});
  EXPECT_NEAR(r.x_best[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x_best[1], 2.0, 1e-3);
  EXPECT_TRUE(r.converged);
}

TEST(Minimize, RosenbrockFromClassicStart) {
  const auto r = minimize(rosenbrock, Vector{-1.2, 1.0}, SimplexConfig{});
  EXPECT_LT(r.f_best, 1e-4);
  for (const auto& trace : r.best_trace) EXPECT_LE(trace.size(), 500u);
}

TEST(Minimize, AllFrozenReturnsStartAfterOneEvaluation) {
  std::size_t calls = 0;
  const Objective f = [&](std::span<const double> z) {
    ++calls;
    return quadratic_12(z);
  };
  const Vector x0{3.0, -1.0};
  const auto r = minimize(f, x0, SimplexConfig{}, {0, 1});
  EXPECT_EQ(r.x_best, x0);
  EXPECT_EQ(r.f_best, quadratic_12(x0));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.n_evals, 1u);
  EXPECT_EQ(calls, 1u);
}

TEST(Minimize, PreconditionErrors) {
  const Objective nan = [](std::span<const double>) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_THROW(minimize(nan, Vector{0.0}, SimplexConfig{}), PreconditionError);
  EXPECT_THROW(minimize(quadratic_12, Vector{0.0, 0.0}, SimplexConfig{}, {2}), PreconditionError);
}

TEST(Minimize, NonFiniteDuringSearchIsTreatedAsInfinity) {
  // undefined for z < 0.5; minimum at 2
  const Objective f = [](std::span<const double> z) {
    return z[0] < 0.5 ? std::numeric_limits<double>::quiet_NaN() : (z[0] - 2.0) * (z[0] - 2.0);
  };
  const auto r = minimize(f, Vector{1.0}, SimplexConfig{});
  EXPECT_NEAR(r.x_best[0], 2.0, 1e-3);
  EXPECT_TRUE(std::isfinite(r.f_best));
}

TEST(SimplexConfig, ValidatesCoefficients) {
  const auto bad = [](auto mutate) {
    SimplexConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](SimplexConfig& c) { c.reflection = 0.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SimplexConfig& c) { c.expansion = 1.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SimplexConfig& c) { c.contraction = 1.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SimplexConfig& c) { c.shrink = 0.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](SimplexConfig& c) { c.max_iter = 0; }).validate(), ConfigError);
  EXPECT_NO_THROW(SimplexConfig{}.validate());
}

TEST(MinimizeProperty, BestValueNeverIncreasesWithinAStart) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 1 + t % 5;
    Vector shift(d);
    for (auto& s : shift) s = n(rng);
    const Objective f = [&](std::span<const double> z) {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        s += std::abs(z[i] - shift[i]) + std::cos(3.0 * z[i]);
      }
      return s;
    };
    SimplexConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto r = minimize(f, Vector(d, 0.0), cfg);
    ASSERT_EQ(r.best_trace.size(), cfg.n_restarts);
    for (const auto& trace : r.best_trace) {
      for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
    }
  }
}

TEST(MinimizeProperty, FrozenCoordinatesPinnedExactly) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t d = 2 + t % 4;
    Vector x0(d);
    for (auto& v : x0) v = u(rng);
    IndexSet frozen;
    for (std::size_t i = 0; i < d; ++i) {
      if ((t >> i) & 1) frozen.push_back(i);
    }
    const Objective f = [](std::span<const double> z) {
      double s = 0.0;
      for (double v : z) s += (v - 1.0) * (v - 1.0);
      return s;
    };
    const auto r = minimize(f, x0, SimplexConfig{}, frozen);
    for (std::size_t i : frozen) EXPECT_EQ(r.x_best[i], x0[i]);
    EXPECT_EQ(r.f_best, f(r.x_best));
  }
}

TEST(MinimizeProperty, DeterministicGivenSeed) {
  SimplexConfig cfg;
  cfg.seed = 1234;
  const Objective f = [](std::span<const double> z) {
    return std::abs(z[0] - 0.3) + std::abs(z[1] + 0.7) + std::sin(5.0 * z[0] * z[1]);
  };
  const auto a = minimize(f, Vector{0.0, 0.0}, cfg);
  const auto b = minimize(f, Vector{0.0, 0.0}, cfg);
  EXPECT_EQ(a.x_best, b.x_best);
  EXPECT_EQ(a.f_best, b.f_best);
  EXPECT_EQ(a.n_evals, b.n_evals);
  EXPECT_EQ(a.best_trace, b.best_trace);
}

TEST(MinimizeProperty, ReturnedValueMatchesObjectiveAtReturnedPoint) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const Vector c{u(rng), u(rng), u(rng)};
    const Objective f = [&](std::span<const double> z) {
      return std::pow(z[0] - c[0], 2) + 3.0 * std::pow(z[1] - c[1], 2) +
             std::abs(z[2] - c[2]);
    };
    const auto r = minimize(f, Vector{0.0, 0.0, 0.0}, SimplexConfig{});
    EXPECT_EQ(r.f_best, f(r.x_best));
  }
}
