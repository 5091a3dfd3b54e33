#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "mg1tail/distributions.hpp"
#include "mg1tail/errors.hpp"
#include "mg1tail/rng.hpp"

using namespace mg1tail;

namespace {

// Composite 5-point Gauss-Legendre over [a, b] in `panels` pieces; test-local on purpose.
template <class F>
double quad(F&& f, double a, double b, int panels) {
  static const double nodes[] = {0.0, 0.5384693101056831, -0.5384693101056831, 0.9061798459386640, -0.9061798459386640};
  static const double weights[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                   0.2369268850561891};
  const double w = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + w * (p + 0.5);
    for (int i = 0; i < 5; ++i) s += weights[i] * f(c + 0.5 * w * nodes[i]);
  }
  return s * 0.5 * w;
}

IntegratedTailModel two_point() { return IntegratedTailModel::lattice(1.0, {0.0, 0.5, 0.5}); }

}  // namespace

TEST_CASE("tail_prob examples") {
  CHECK(tail_prob(IntegratedTailModel::pareto(3.5), 10.0) == doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-15));
  CHECK(tail_prob(IntegratedTailModel::pareto(3.5), 10.0) == doctest::Approx(0.0031623).epsilon(1e-4));
  CHECK(tail_prob(IntegratedTailModel::exponential(1.0), 2.0) == doctest::Approx(0.1353353).epsilon(1e-6));
  for (const auto& m : {IntegratedTailModel::pareto(3.5), IntegratedTailModel::exponential(2.0), two_point()}) {
    CHECK(tail_prob(m, 0.0) == 1.0);
  }
  CHECK_THROWS_AS(tail_prob(IntegratedTailModel::pareto(3.5), -1e-9), DomainError);
}

TEST_CASE("lattice tail counts points strictly above x") {
  const auto m = two_point();
  CHECK(tail_prob(m, 0.5) == 1.0);
  CHECK(tail_prob(m, 1.0) == 0.5);
  CHECK(tail_prob(m, 1.5) == 0.5);
  CHECK(tail_prob(m, 2.0) == 0.0);
  CHECK(tail_prob(m, 100.0) == 0.0);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(IntegratedTailModel::pareto(2.0), DomainError);
  CHECK_THROWS_AS(IntegratedTailModel::pareto(1.5), DomainError);
  CHECK_NOTHROW(IntegratedTailModel::pareto(2.0001));
  CHECK_THROWS_AS(IntegratedTailModel::exponential(0.0), DomainError);
  CHECK_THROWS_AS(IntegratedTailModel::lattice(1.0, {0.5, 0.49}), DomainError);
  CHECK_THROWS_AS(IntegratedTailModel::lattice(1.0, {0.5, 0.5 + 1e-11}), DomainError);
  CHECK_NOTHROW(IntegratedTailModel::lattice(1.0, {0.5, 0.5 + 1e-13}));
  CHECK_THROWS_AS(IntegratedTailModel::lattice(0.0, {1.0}), DomainError);
  CHECK_THROWS_AS(IntegratedTailModel::lattice(1.0, {1.5, -0.5}), DomainError);
  CHECK_THROWS_AS(QueueModel(IntegratedTailModel::pareto(3.5), 0.0), DomainError);
  CHECK_THROWS_AS(QueueModel(IntegratedTailModel::pareto(3.5), 1.0), DomainError);
  CHECK_NOTHROW(QueueModel(IntegratedTailModel::pareto(3.5), 0.999));
}

TEST_CASE("mean_integrated examples") {
  // frozen from tests/oracles/oracles.py (quadrature of the tail)
  CHECK(mean_integrated(IntegratedTailModel::pareto(3.5)) == doctest::Approx(1.6666666666666667).epsilon(1e-15));
  CHECK(mean_integrated(IntegratedTailModel::pareto(3.1)) == doctest::Approx(1.9090909090909091).epsilon(1e-15));
  CHECK(mean_integrated(IntegratedTailModel::exponential(2.0)) == 0.5);
  CHECK(mean_integrated(two_point()) == doctest::Approx(1.5));
}

TEST_CASE("variance_integrated examples") {
  CHECK(variance_integrated(IntegratedTailModel::pareto(3.5)) == doctest::Approx(2.2222222222222222).epsilon(1e-14));
  CHECK(std::isinf(variance_integrated(IntegratedTailModel::pareto(2.5))));
  CHECK(std::isinf(variance_integrated(IntegratedTailModel::pareto(3.0))));
  CHECK(variance_integrated(IntegratedTailModel::exponential(1.0)) == 1.0);
  CHECK(variance_integrated(two_point()) == doctest::Approx(0.25));
}

TEST_CASE("sample_x examples") {
  CHECK(sample_x(IntegratedTailModel::pareto(3.0), 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sample_x(IntegratedTailModel::pareto(3.5), 1e-300) == 1.0);
  CHECK(sample_x(IntegratedTailModel::exponential(1.0), -std::expm1(-2.0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sample_x(IntegratedTailModel::exponential(1.0), 1e-300) == doctest::Approx(0.0));
  CHECK(sample_x(two_point(), 1e-300) == 1.0);
  CHECK(sample_x(two_point(), 0.5) == 1.0);
  CHECK(sample_x(two_point(), 0.500001) == 2.0);
  CHECK_THROWS_AS(sample_x(IntegratedTailModel::pareto(3.5), 0.0), DomainError);
  CHECK_THROWS_AS(sample_x(IntegratedTailModel::pareto(3.5), 1.0), DomainError);
}

TEST_CASE("service_moments") {
  const auto m1 = service_moments(IntegratedTailModel::exponential(1.0));
  CHECK(m1.ev1 == 1.0);
  CHECK(m1.ev2 == 2.0);
  CHECK(*m1.ev3 == 6.0);
  const auto m2 = service_moments(IntegratedTailModel::exponential(2.0));
  CHECK(m2.ev1 == 0.5);
  CHECK(m2.ev2 == 0.5);
  CHECK(*m2.ev3 == 0.75);
  CHECK_THROWS_AS(service_moments(IntegratedTailModel::pareto(3.5)), UnsupportedError);
  CHECK_THROWS_AS(service_moments(two_point()), UnsupportedError);

  for (double rate : {0.3, 1.0, 2.0, 7.5}) {
    const auto m = IntegratedTailModel::exponential(rate);
    CHECK(service_moments(m).mean_integrated() == mean_integrated(m));
  }
  CHECK(QueueModel(IntegratedTailModel::exponential(2.0), 0.5).arrival_rate() == 1.0);
  CHECK_THROWS_AS(QueueModel(IntegratedTailModel::pareto(3.5), 0.5).arrival_rate(), UnsupportedError);
}

TEST_CASE("tail_prob is nonincreasing") {
  const std::vector<IntegratedTailModel> models = {IntegratedTailModel::pareto(2.2), IntegratedTailModel::pareto(3.5),
                                                   IntegratedTailModel::exponential(0.7),
                                                   IntegratedTailModel::lattice(0.25, {0.1, 0.0, 0.3, 0.2, 0.4})};
  ReplicationStream rng(7, 0);
  for (const auto& m : models) {
    for (int i = 0; i < 2000; ++i) {
      const double a = 20.0 * rng.uniform();
      const double b = a + 5.0 * rng.uniform();
      CHECK(tail_prob(m, b) <= tail_prob(m, a));
    }
    CHECK(tail_prob(m, 1e6) < 1e-6);
  }
}

TEST_CASE("mean matches quadrature of the tail plus analytic remainder") {
  const double q = 50.0;
  for (double alpha : {2.5, 3.1, 3.5, 6.0}) {
    const auto m = IntegratedTailModel::pareto(alpha);
    const double body = quad([&](double t) { return tail_prob(m, t); }, 0.0, 1.0, 4) +
                        quad([&](double t) { return tail_prob(m, t); }, 1.0, q, 4000);
    const double remainder = std::pow(q, 2.0 - alpha) / (alpha - 2.0);
    CHECK(body + remainder == doctest::Approx(mean_integrated(m)).epsilon(1e-8));
  }
  for (double rate : {0.5, 1.0, 3.0}) {
    const auto m = IntegratedTailModel::exponential(rate);
    const double body = quad([&](double t) { return tail_prob(m, t); }, 0.0, q, 4000);
    CHECK(body + std::exp(-rate * q) / rate == doctest::Approx(mean_integrated(m)).epsilon(1e-8));
  }
  {
    // the lattice tail is constant between points; integrate panel by panel
    const auto m = IntegratedTailModel::lattice(0.5, {0.1, 0.2, 0.0, 0.7});
    double body = 0.0;
    for (int k = 0; k < 10; ++k) body += quad([&](double t) { return tail_prob(m, t); }, 0.5 * k, 0.5 * (k + 1), 1);
    CHECK(body == doctest::Approx(mean_integrated(m)).epsilon(1e-8));
  }
}

TEST_CASE("empirical tail of sample_x matches tail_prob") {
  const std::uint64_t n = 1'000'000;
  for (const auto& m : {IntegratedTailModel::pareto(3.5), IntegratedTailModel::pareto(2.5), IntegratedTailModel::exponential(0.4)}) {
    const double xs[] = {1.0, 2.0, 5.0, 10.0};
    std::uint64_t hits[4] = {0, 0, 0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
      ReplicationStream s(2024, i);
      const double v = sample_x(m, s.uniform());
      for (int k = 0; k < 4; ++k) hits[k] += v > xs[k] ? 1 : 0;
    }
    for (int k = 0; k < 4; ++k) {
      const double p = tail_prob(m, xs[k]);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      const double emp = static_cast<double>(hits[k]) / static_cast<double>(n);
      INFO(m.describe() << " x=" << xs[k]);
      CHECK(std::abs(emp - p) <= 4.0 * se + 1e-12);
    }
  }
}

TEST_CASE("describe renders canonical literals") {
  CHECK(IntegratedTailModel::pareto(3.5).describe() == "pareto-it:alpha=3.5");
  CHECK(IntegratedTailModel::exponential(1.0).describe() == "exp:rate=1");
  CHECK(two_point().describe() == "lattice:h=1,points=3");
  CHECK(tail_index(IntegratedTailModel::pareto(3.5)) == 3.5);
  CHECK_FALSE(tail_index(IntegratedTailModel::exponential(1.0)).has_value());
}
