#pragma once

#include "mg1tail/distributions.hpp"
#include "mg1tail/transition.hpp"

namespace mg1tail {

/// Z(p) = Y_1 + ... + Y_N with N geometric, P(N = k) = p (1-p)^k for k >= 0 (mean (1-p)/p),
/// and regularly varying summands P(Y > x) ~ x^{-betaY}, betaY > 2.
///
/// With this count the M/G/1 waiting time is exactly Z(1 - rho) with Y = X1.
class GeomModel {
 public:
  /// Summand must be a regularly varying (Pareto) model with betaY = alpha - 1 > 2.
  GeomModel(IntegratedTailModel summand, double p);

  /// Standard Pareto summands: P(Y > y) = y^{-beta_y} for y >= 1.
  static GeomModel pareto(double beta_y, double p);

  const IntegratedTailModel& summand() const noexcept { return summand_; }
  double p() const noexcept { return p_; }
  double beta_y() const noexcept { return beta_y_; }
  /// EY.
  double mu() const noexcept { return mu_; }
  /// (betaY - 1) EY.
  double tau() const noexcept { return (beta_y_ - 1.0) * mu_; }

  /// The queue whose stationary waiting time has the law of Z(p).
  QueueModel to_queue_model() const { return QueueModel(summand_, 1.0 - p_); }

 private:
  IntegratedTailModel summand_;
  double p_;
  double beta_y_;
  double mu_;
};

/// 1 - (1-p)^{x/mu} - (1-p)^{x/mu} p x / mu.
double geom_gamma(const GeomModel& g, double x);

/// (1-p) gamma(x,p) P(Y > x)/p + (1-p)^{x/mu}.
double geom_tail_approx(const GeomModel& g, double x);

/// exp(-p x / EY), valid below the threshold.
double geom_light_approx(const GeomModel& g, double x);

/// P(Y > x)/p, valid above the threshold.
double geom_heavy_approx(const GeomModel& g, double x);

/// c tau p^{-1} log(1/p).
double geom_threshold(const GeomModel& g, double c = 1.0);

/// Same banding as regime_classify, with kappa replaced by tau.
RegimeReport geom_classify(const GeomModel& g, double x, double band = 0.1);

}  // namespace mg1tail
