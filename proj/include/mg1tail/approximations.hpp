#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mg1tail/distributions.hpp"

namespace mg1tail {

/// Every approximation of P(W > x) evaluated at one (rho, x).
struct ApproximationPoint {
  double x = 0.0;
  double heavy_traffic = 0.0;
  /// Asymptotic, reported raw: may exceed 1 for small x.
  double heavy_tail = 0.0;
  double s_sum = 0.0;
  /// rho^{x/mu}; h == s_sum + geometric_term.
  double geometric_term = 0.0;
  double h = 0.0;
  double gamma = 0.0;
  double j = 0.0;
  /// Present only for finite-variance models.
  std::optional<double> t_tail;
  std::optional<double> h_clt;
  std::int64_t m_of_x = 0;
};

/// exp(-(1-rho) x / mu), i.e. exp(-2(1-rho) EV x / EV^2).
double heavy_traffic(const QueueModel& q, double x);

/// rho/(1-rho) * P(X1 > x).
double heavy_tail(const QueueModel& q, double x);

/// 1 / min(2, alpha - 1); light-tailed models are treated as alpha = infinity, giving 1/2.
double beta_exponent(const IntegratedTailModel& model);

/// max(0, floor((x - x^beta)/mu)).
std::int64_t big_m(const QueueModel& q, double x);

/// sum_{n=1}^{M(x)} (1-rho) rho^n n P(X1 > x - (n-1) mu), ascending n, compensated.
double s_sum(const QueueModel& q, double x);

/// rho^{x/mu}.
double geometric_term(const QueueModel& q, double x);

/// s_sum + rho^{x/mu}.
double h_approx(const QueueModel& q, double x);

/// 1 - rho^{x/mu} - rho^{x/mu} (1-rho) x / mu, in [0,1).
double gamma_factor(const QueueModel& q, double x);

/// rho/(1-rho) gamma P(X1 > x) + rho^{x/mu}.
double j_approx(const QueueModel& q, double x);

/// Number of terms used by t_tail: the smallest N with rho^{N+1} < 1e-12.
std::size_t t_tail_depth(double rho);

/// sum_{n=1}^{N} (1-rho) rho^n (1 - Phi((x - n mu)/sqrt(sigma^2 n))) with N = t_tail_depth(rho).
/// Throws UnsupportedError when Var(X1) is infinite.
double t_tail(const QueueModel& q, double x);

/// Same series cut after `terms` terms.
double t_tail_partial(const QueueModel& q, double x, std::size_t terms);

/// floor((sqrt(x/mu + (sigma z)^2/(2 mu)^2) - sigma z/(2 mu))^2): the largest n for which
/// n mu + sigma sqrt(n) z <= x when a single normal Z drives every partial sum.
std::int64_t clt_count(const QueueModel& q, double x, double z);

/// E[rho^{clt_count(x, Z) + 1}], Z ~ N(0,1). Equal to t_tail as an identity.
///
/// Quadrature: [-10, 10] is cut into 200 panels of width 0.1; every panel is further split at
/// the jumps of clt_count (located by bisection to double precision), and each constant piece
/// is integrated against the normal density with a 10-point Gauss-Legendre rule. Mass outside
/// |z| <= 10 (below 2e-23) is dropped.
double t_tail_z(const QueueModel& q, double x);

/// s_sum + t_tail.
double h_clt(const QueueModel& q, double x);

/// n P(X1 > x - (n-1) mu), the subexponential approximation of P(S_n > x).
double subexp_sum_approx(const IntegratedTailModel& model, std::int64_t n, double x);

ApproximationPoint evaluate_point(const QueueModel& q, double x);

}  // namespace mg1tail
