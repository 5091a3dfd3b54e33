#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mg1tail {

/// Integrated tail with P(X > x) = 1 for x < 1 and x^{-(alpha-1)} for x >= 1.
/// `alpha` is the tail index of the underlying service time, so X has index alpha - 1.
struct ParetoIntegratedTail {
  double alpha;
};

/// Exp(rate) service; its integrated tail is again Exp(rate) (the M/M/1 case).
struct ExponentialIntegrated {
  double rate;
};

/// Distribution on the points k * spacing, k = 0, 1, ..., mass.size() - 1.
class Lattice {
 public:
  Lattice(double spacing, std::vector<double> mass);

  double spacing() const noexcept { return spacing_; }
  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t size() const noexcept { return mass_.size(); }

  /// P(X > k * spacing), summed from the top so small tails keep full precision.
  double upper_tail(std::size_t k) const noexcept { return k < upper_.size() ? upper_[k] : 0.0; }
  /// Index of the last lattice point not exceeding x (points within 1e-9 spacings of x count as equal).
  std::ptrdiff_t floor_index(double x) const noexcept;
  /// Smallest k with P(X <= k * spacing) >= u.
  std::size_t quantile_index(double u) const noexcept;

 private:
  double spacing_;
  std::vector<double> mass_;
  std::vector<double> upper_;
  std::vector<double> cumulative_;
};

/// Distribution of X1, the integrated service tail with density P(V > .)/EV.
class IntegratedTailModel {
 public:
  using Variant = std::variant<ParetoIntegratedTail, ExponentialIntegrated, Lattice>;

  /// Throws DomainError unless alpha > 2.
  static IntegratedTailModel pareto(double alpha);
  static IntegratedTailModel exponential(double rate);
  /// Mass must be nonnegative and sum to 1 within 1e-12.
  static IntegratedTailModel lattice(double spacing, std::vector<double> mass);

  const Variant& variant() const noexcept { return v_; }
  const ParetoIntegratedTail* as_pareto() const noexcept { return std::get_if<ParetoIntegratedTail>(&v_); }
  const ExponentialIntegrated* as_exponential() const noexcept {
    return std::get_if<ExponentialIntegrated>(&v_);
  }
  const Lattice* as_lattice() const noexcept { return std::get_if<Lattice>(&v_); }

  /// Canonical literal, e.g. "pareto-it:alpha=3.5". Lattices render as "lattice:h=<spacing>,points=<n>".
  std::string describe() const;

 private:
  explicit IntegratedTailModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Moments of the service time V (not of X).
struct ServiceMoments {
  double ev1;
  double ev2;
  std::optional<double> ev3;

  /// EX1 = EV^2 / (2 EV).
  double mean_integrated() const noexcept { return ev2 / (2.0 * ev1); }
};

double tail_prob(const IntegratedTailModel& model, double x);
double mean_integrated(const IntegratedTailModel& model);
/// Var(X1); +infinity when 2 < alpha <= 3.
double variance_integrated(const IntegratedTailModel& model);
/// The u-quantile of X1, u in (0,1). For the Pareto tail this is (1-u)^{-1/(alpha-1)}.
double sample_x(const IntegratedTailModel& model, double u);
/// Only defined for the exponential variant; X alone does not identify V for the others.
ServiceMoments service_moments(const IntegratedTailModel& model);

/// Tail index alpha of V when the model is regularly varying, nullopt for light tails.
std::optional<double> tail_index(const IntegratedTailModel& model) noexcept;

class QueueModel {
 public:
  /// Throws DomainError unless 0 < rho < 1.
  QueueModel(IntegratedTailModel model, double rho);

  const IntegratedTailModel& model() const noexcept { return model_; }
  double rho() const noexcept { return rho_; }
  /// mu = EX1.
  double mu() const noexcept { return mu_; }
  /// lambda = rho / EV; needs V-level moments, so exponential only.
  double arrival_rate() const;

 private:
  IntegratedTailModel model_;
  double rho_;
  double mu_;
};

}  // namespace mg1tail
