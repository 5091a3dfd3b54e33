#include "mg1tail/transition.hpp"

#include <cmath>

#include "mg1tail/approximations.hpp"
#include "mg1tail/errors.hpp"

namespace mg1tail {

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::HeavyTraffic:
      return "heavy-traffic";
    case Regime::Transition:
      return "transition";
    case Regime::HeavyTail:
      return "heavy-tail";
  }
  return "unknown";
}

double kappa(const IntegratedTailModel& model) {
  const auto alpha = tail_index(model);
  if (!alpha) throw UnsupportedError("transition thresholds need a tail index; " + model.describe() + " has none");
  return mean_integrated(model) * (*alpha - 2.0);
}

double threshold_x(const QueueModel& q, double c) {
  if (!(c > 0.0)) throw DomainError("threshold constant c must be positive");
  const double inv = 1.0 / (1.0 - q.rho());
  return c * kappa(q.model()) * inv * std::log(inv);
}

ThresholdRho threshold_rho(const IntegratedTailModel& model, double x, double c) {
  if (!(c > 0.0)) throw DomainError("threshold constant c must be positive");
  if (!(x > 1.0) || !std::isfinite(x)) throw DomainError("threshold_rho requires finite x > 1");
  const double v = 1.0 - c * kappa(model) * std::log(x) / x;
  return {v, v > 0.0 && v < 1.0};
}

RegimeReport regime_classify(const QueueModel& q, double x, double band) {
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  if (!(band >= 0.0 && band < 1.0)) throw DomainError("transition band must lie in [0,1)");
  const double k = kappa(q.model());
  const double y1 = threshold_x(q, 1.0);
  const double c = x / y1;
  Regime r = Regime::Transition;
  if (c < 1.0 - band) {
    r = Regime::HeavyTraffic;
  } else if (c > 1.0 + band) {
    r = Regime::HeavyTail;
  }
  return {c, r, y1, k};
}

double crossing_point(const QueueModel& q) {
  kappa(q.model());  // rejects light-tailed models
  const double log_ratio = std::log(q.rho() / (1.0 - q.rho()));
  // log heavy_traffic - log heavy_tail
  auto diff = [&](double x) { return -(1.0 - q.rho()) * x / q.mu() - log_ratio - std::log(tail_prob(q.model(), x)); };

  const double lo_end = 1.0;
  const double hi_end = 1e9 * q.mu();
  constexpr int kGrid = 4000;
  const double step = std::log(hi_end / lo_end) / kGrid;
  // scan downward; the first grid point with diff >= 0 brackets the largest crossing
  double right = hi_end;
  if (diff(right) >= 0.0) throw NoCrossingError("heavy-traffic curve stays above heavy-tail curve up to 1e9 mu");
  for (int i = kGrid - 1; i >= 0; --i) {
    const double left = lo_end * std::exp(step * i);
    if (diff(left) >= 0.0) {
      double a = left;
      double b = right;
      while (true) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        if (diff(mid) >= 0.0) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return std::abs(diff(a)) <= std::abs(diff(b)) ? a : b;
    }
    right = left;
  }
  throw NoCrossingError("heavy-traffic and heavy-tail curves do not cross in [1, 1e9 mu]");
}

}  // namespace mg1tail
