#include "mg1tail/approximations.hpp"

#include <algorithm>
#include <limits>
#include <array>
#include <cmath>
#include <numbers>

#include "mg1tail/detail/summation.hpp"
#include "mg1tail/errors.hpp"
#include "mg1tail/normal.hpp"

namespace mg1tail {

namespace {

constexpr double kTinyTerm = 1e-300;
constexpr double kSeriesCut = 1e-12;

void require_nonnegative(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("x must be finite and nonnegative");
}

double finite_variance(const QueueModel& q) {
  const double v = variance_integrated(q.model());
  if (!std::isfinite(v)) {
    throw UnsupportedError("the CLT correction needs Var(X1) < infinity; " + q.model().describe() +
                           " has infinite variance");
  }
  return v;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    constexpr std::size_t half = (N + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (std::size_t j = 1; j <= N; ++j) {
          const double p2 = p1;
          p1 = p0;
          const auto jd = static_cast<double>(j);
          p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
        }
        dp = static_cast<double>(N) * (z * p0 - p1) / (z * z - 1.0);
        const double z_prev = z;
        z = z_prev - p0 / dp;
        if (std::abs(z - z_prev) < 1e-16) break;
      }
      nodes[i] = -z;
      nodes[N - 1 - i] = z;
      weights[i] = weights[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += weights[i] * f(c + h * nodes[i]);
    return s * h;
  }
};

const GaussLegendre<10>& gauss10() {
  static const GaussLegendre<10> rule;
  return rule;
}

// floor(), except that values within a few ulps below an integer count as that integer
double snapped_floor(double v) {
  const double k = std::round(v);
  if (std::abs(v - k) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(v))) return k;
  return std::floor(v);
}

}  // namespace

double heavy_traffic(const QueueModel& q, double x) {
  require_nonnegative(x);
  return std::exp(-(1.0 - q.rho()) * x / q.mu());
}

double heavy_tail(const QueueModel& q, double x) {
  require_nonnegative(x);
  return q.rho() / (1.0 - q.rho()) * tail_prob(q.model(), x);
}

double beta_exponent(const IntegratedTailModel& model) {
  if (auto alpha = tail_index(model)) return 1.0 / std::min(2.0, *alpha - 1.0);
  return 0.5;
}

std::int64_t big_m(const QueueModel& q, double x) {
  require_nonnegative(x);
  const double m = snapped_floor((x - std::pow(x, beta_exponent(q.model()))) / q.mu());
  if (m <= 0.0) return 0;
  if (m > 9.0e18) throw DomainError("M(x) overflows a 64-bit count");
  return static_cast<std::int64_t>(m);
}

double s_sum(const QueueModel& q, double x) {
  const std::int64_t m = big_m(q, x);
  const double rho = q.rho();
  // n rho^n peaks at n ~ 1/log(1/rho); past that, once the prefactor is negligible it stays so
  const double peak = 1.0 / -std::log(rho);
  detail::CompensatedSum acc;
  for (std::int64_t n = 1; n <= m; ++n) {
    const auto nd = static_cast<double>(n);
    const double weight = (1.0 - rho) * std::pow(rho, nd) * nd;
    if (weight < kTinyTerm) {
      if (nd > peak) break;
      continue;
    }
    const double term = weight * tail_prob(q.model(), x - (nd - 1.0) * q.mu());
    if (term >= kTinyTerm) acc.add(term);
  }
  return acc.value();
}

double geometric_term(const QueueModel& q, double x) {
  require_nonnegative(x);
  return std::exp(x / q.mu() * std::log(q.rho()));
}

double h_approx(const QueueModel& q, double x) { return s_sum(q, x) + geometric_term(q, x); }

double gamma_factor(const QueueModel& q, double x) {
  require_nonnegative(x);
  const double log_g = x / q.mu() * std::log(q.rho());
  const double g = std::exp(log_g);
  const double t = (1.0 - q.rho()) * x / q.mu();
  // 1 - g(1+t) >= 0 always; rounding can push the difference a hair below zero
  return std::max(0.0, -std::expm1(log_g) - g * t);
}

double j_approx(const QueueModel& q, double x) {
  return q.rho() / (1.0 - q.rho()) * gamma_factor(q, x) * tail_prob(q.model(), x) + geometric_term(q, x);
}

std::size_t t_tail_depth(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie strictly inside (0,1)");
  auto n = static_cast<std::size_t>(std::max(0.0, std::floor(std::log(kSeriesCut) / std::log(rho)) - 2.0));
  while (std::pow(rho, static_cast<double>(n + 1)) >= kSeriesCut) ++n;
  return n;
}

double t_tail_partial(const QueueModel& q, double x, std::size_t terms) {
  require_nonnegative(x);
  const double sigma = std::sqrt(finite_variance(q));
  const double rho = q.rho();
  detail::CompensatedSum acc;
  for (std::size_t n = 1; n <= terms; ++n) {
    const auto nd = static_cast<double>(n);
    const double weight = (1.0 - rho) * std::pow(rho, nd);
    if (weight < kTinyTerm) break;
    const double term = weight * normal_upper_tail((x - nd * q.mu()) / (sigma * std::sqrt(nd)));
    if (term >= kTinyTerm) acc.add(term);
  }
  return acc.value();
}

double t_tail(const QueueModel& q, double x) { return t_tail_partial(q, x, t_tail_depth(q.rho())); }

std::int64_t clt_count(const QueueModel& q, double x, double z) {
  require_nonnegative(x);
  const double sigma = std::sqrt(finite_variance(q));
  const double a = x / q.mu();
  const double b = sigma * z / (2.0 * q.mu());
  const double root = std::sqrt(a + b * b);
  // rationalized form for b > 0 avoids cancellation in root - b
  const double r = b > 0.0 ? a / (root + b) : root - b;
  const double m = snapped_floor(r * r);
  if (m > 9.0e18) throw DomainError("M(x,z) overflows a 64-bit count");
  return static_cast<std::int64_t>(m);
}

double t_tail_z(const QueueModel& q, double x) {
  require_nonnegative(x);
  finite_variance(q);
  const double log_rho = std::log(q.rho());
  const auto& rule = gauss10();

  detail::CompensatedSum acc;
  auto piece = [&](double a, double b, std::int64_t count) {
    const double weight = std::exp((static_cast<double>(count) + 1.0) * log_rho);
    if (weight < kTinyTerm) return;
    acc.add(weight * rule.integrate(normal_pdf, a, b));
  };
  // clt_count is nonincreasing in z; split [a,b] until every piece is constant
  auto split = [&](auto&& self, double a, double b, std::int64_t ma, std::int64_t mb) -> void {
    if (ma == mb) {
      piece(a, b, ma);
      return;
    }
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) return;  // a jump located to double precision; zero width
    const std::int64_t mm = clt_count(q, x, mid);
    self(self, a, mid, ma, mm);
    self(self, mid, b, mm, mb);
  };

  constexpr int kPanels = 200;
  constexpr double kLimit = 10.0;
  constexpr double kWidth = 2.0 * kLimit / kPanels;
  std::int64_t m_left = clt_count(q, x, -kLimit);
  for (int i = 0; i < kPanels; ++i) {
    const double a = -kLimit + kWidth * i;
    const double b = i + 1 == kPanels ? kLimit : -kLimit + kWidth * (i + 1);
    const std::int64_t m_right = clt_count(q, x, b);
    split(split, a, b, m_left, m_right);
    m_left = m_right;
  }
  return acc.value();
}

double h_clt(const QueueModel& q, double x) { return s_sum(q, x) + t_tail(q, x); }

double subexp_sum_approx(const IntegratedTailModel& model, std::int64_t n, double x) {
  require_nonnegative(x);
  if (n < 1) throw DomainError("subexp_sum_approx requires n >= 1");
  const auto nd = static_cast<double>(n);
  return nd * tail_prob(model, std::max(0.0, x - (nd - 1.0) * mean_integrated(model)));
}

ApproximationPoint evaluate_point(const QueueModel& q, double x) {
  ApproximationPoint p;
  p.x = x;
  p.heavy_traffic = heavy_traffic(q, x);
  p.heavy_tail = heavy_tail(q, x);
  p.m_of_x = big_m(q, x);
  p.s_sum = s_sum(q, x);
  p.geometric_term = geometric_term(q, x);
  p.h = p.s_sum + p.geometric_term;
  p.gamma = gamma_factor(q, x);
  p.j = j_approx(q, x);
  if (std::isfinite(variance_integrated(q.model()))) {
    p.t_tail = t_tail(q, x);
    p.h_clt = p.s_sum + *p.t_tail;
  }
  return p;
}

}  // namespace mg1tail
