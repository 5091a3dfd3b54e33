#include "mg1tail/geom_sums.hpp"

#include <algorithm>
#include <cmath>

#include "mg1tail/errors.hpp"

namespace mg1tail {

GeomModel::GeomModel(IntegratedTailModel summand, double p) : summand_(std::move(summand)), p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("geometric parameter p must lie strictly inside (0,1)");
  if (summand_.as_lattice() != nullptr) {
    throw UnsupportedError("geometric sum approximation requires nonlattice summands");
  }
  const auto alpha = tail_index(summand_);
  if (!alpha) throw UnsupportedError("geometric sum approximation requires a regularly varying summand");
  beta_y_ = *alpha - 1.0;
  if (!(beta_y_ > 2.0)) throw DomainError("summand tail index betaY must exceed 2 (finite variance)");
  mu_ = mean_integrated(summand_);
}

GeomModel GeomModel::pareto(double beta_y, double p) {
  if (!(beta_y > 2.0)) throw DomainError("summand tail index betaY must exceed 2");
  return GeomModel(IntegratedTailModel::pareto(beta_y + 1.0), p);
}

double geom_gamma(const GeomModel& g, double x) {
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  const double log_g = x / g.mu() * std::log1p(-g.p());
  const double w = std::exp(log_g);
  return std::max(0.0, -std::expm1(log_g) - w * g.p() * x / g.mu());
}

double geom_tail_approx(const GeomModel& g, double x) {
  const double gamma = geom_gamma(g, x);
  return (1.0 - g.p()) * gamma * tail_prob(g.summand(), x) / g.p() + std::exp(x / g.mu() * std::log1p(-g.p()));
}

double geom_light_approx(const GeomModel& g, double x) {
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  return std::exp(-g.p() * x / g.mu());
}

double geom_heavy_approx(const GeomModel& g, double x) { return tail_prob(g.summand(), x) / g.p(); }

double geom_threshold(const GeomModel& g, double c) {
  if (!(c > 0.0)) throw DomainError("threshold constant c must be positive");
  return c * g.tau() / g.p() * std::log(1.0 / g.p());
}

RegimeReport geom_classify(const GeomModel& g, double x, double band) {
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  if (!(band >= 0.0 && band < 1.0)) throw DomainError("transition band must lie in [0,1)");
  const double y1 = geom_threshold(g, 1.0);
  const double c = x / y1;
  Regime r = Regime::Transition;
  if (c < 1.0 - band) {
    r = Regime::HeavyTraffic;
  } else if (c > 1.0 + band) {
    r = Regime::HeavyTail;
  }
  return {c, r, y1, g.tau()};
}

}  // namespace mg1tail
