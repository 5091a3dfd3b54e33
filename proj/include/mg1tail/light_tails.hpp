#pragma once

#include "mg1tail/distributions.hpp"

namespace mg1tail {

struct AdjustmentCoefficient {
  double theta_star;
  double rho;
  /// |rho E exp(theta* V) - 1| at the returned root.
  double residual;
};

/// Positive root of rho E exp(theta V) = 1, by bisection on (0, theta_sup).
/// Only the exponential model has a finite MGF here; Pareto tails throw UnsupportedError.
AdjustmentCoefficient adjustment_coefficient(const IntegratedTailModel& model, double rho);

/// Cramer-Lundberg asymptotic exp(-theta* x).
double cramer_lundberg_tail(const IntegratedTailModel& model, double rho, double x);

/// Heavy-traffic approximation with the third-moment correction, evaluated at tail value
/// x_scaled (1-rho)^{-2}:
///   exp(-2 x (1-rho)^{-1} EV/EV^2 + x EV^3/(3 EV^2) - (x/4) EV^2/EV).
double corrected_heavy_traffic(const IntegratedTailModel& model, double rho, double x_scaled);

}  // namespace mg1tail
