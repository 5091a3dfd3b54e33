#pragma once

#include <string_view>

#include "mg1tail/distributions.hpp"

namespace mg1tail {

enum class Regime { HeavyTraffic, Transition, HeavyTail };

std::string_view to_string(Regime r) noexcept;

struct RegimeReport {
  /// The c for which x = threshold_x(q, c).
  double c_value;
  Regime regime;
  /// threshold_x(q, 1).
  double threshold_x;
  double kappa;
};

struct ThresholdRho {
  double value;
  bool in_range;
};

/// kappa = mu (alpha - 2) = (alpha-2) EV^2/(2 EV). Regularly varying models only.
double kappa(const IntegratedTailModel& model);

/// c kappa (1-rho)^{-1} log((1-rho)^{-1}).
double threshold_x(const QueueModel& q, double c = 1.0);

/// 1 - c kappa log(x)/x, flagged out of range when it leaves (0,1). Requires x > 1.
ThresholdRho threshold_rho(const IntegratedTailModel& model, double x, double c = 1.0);

/// Classifies x against the threshold: c < 1 - band is heavy traffic, c > 1 + band heavy tail.
RegimeReport regime_classify(const QueueModel& q, double x, double band = 0.1);

/// Largest x >= 1 where the heavy-traffic exponential meets the heavy-tail power law, located by
/// bisection on the log-difference to double precision. Throws NoCrossingError if there is
/// none in [1, 1e9 mu].
double crossing_point(const QueueModel& q);

}  // namespace mg1tail
