#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mg1tail/distributions.hpp"
#include "mg1tail/rng.hpp"

namespace mg1tail {

enum class McMethod { Crude, AsmussenKroese };

std::string_view to_string(McMethod m) noexcept;

struct SimulationEstimate {
  double estimate = 0.0;
  /// Normal-approximation half-width at `confidence`.
  double half_width = 0.0;
  /// half_width / estimate (+infinity when the estimate is 0).
  double rel_err = 0.0;
  double std_error = 0.0;
  double confidence = 0.99;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
  McMethod method = McMethod::Crude;
  /// False when the stopping rule ran out of samples before reaching the target.
  bool converged = true;

  bool covers(double value) const noexcept { return value >= estimate - half_width && value <= estimate + half_width; }
};

/// Truncated Pollaczek-Khintchine sum on a lattice, with a rigorous discretization enclosure.
struct PkExact {
  /// Midpoint of [lower, upper].
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::int64_t truncation_n = 0;
  /// rho^{N+1}: mass of the neglected terms.
  double truncation_bound = 0.0;
  double lattice_spacing = 0.0;
};

enum class Bracket { Lower, Upper };

/// Limit on lattice work, counted in multiply-add cells.
struct LatticeBudget {
  std::size_t max_cells = 50'000'000'000ULL;
};

/// Lattice version of X1 on spacing h up to x_max: the mass of ((k-1)h, kh] goes to kh (Upper)
/// or (k-1)h (Lower). Mass beyond the window is lumped on one extra point above it, so tails
/// up to x_max are exact for the discretized variable.
Lattice discretize(const IntegratedTailModel& model, double h, Bracket bracket, double x_max);

/// Exact P(S_n > x) for i.i.d. lattice summands by iterated truncated convolution.
double convolve_tail(const Lattice& dist, std::int64_t n, double x, LatticeBudget budget = {});

/// P(S_n > x_i) for every x_i, sharing one convolution pass.
std::vector<double> convolve_tails(const Lattice& dist, std::int64_t n, std::span<const double> xs,
                                   LatticeBudget budget = {});

struct PkOptions {
  double tol = 1e-10;
  /// Lattice spacing for continuous models; lattice models use their own spacing.
  double spacing = 0.01;
  LatticeBudget budget{};
};

/// sum_{n=1}^{N} (1-rho) rho^n P(S_n > x) with N = ceil(log(tol)/log(rho)), evaluated for both
/// discretization brackets.
PkExact pk_truncated(const QueueModel& q, double x, const PkOptions& options = {});

/// One exact draw of W = X_1 + ... + X_N with P(N = n) = (1-rho) rho^n, n >= 0.
double compound_geometric_sample(const QueueModel& q, ReplicationStream& stream);

/// Number of summands: P(N = n) = (1-rho) rho^n.
std::int64_t geometric_count(double rho, ReplicationStream& stream);

/// One conditional Monte Carlo replication: with N = n >= 1, n P(X > max(M_{n-1}, x - S_{n-1})).
/// Lattice models add n P(X = M_{n-1}) / (ties + 1) when M_{n-1} > x - S_{n-1}.
double ak_replication(const QueueModel& q, double x, ReplicationStream& stream);

struct McOptions {
  double confidence = 0.99;
  /// Batches run on this many threads; results do not depend on it.
  unsigned threads = 1;
};

/// Indicator average over n_samples compound geometric draws (n_samples >= 100).
SimulationEstimate crude_mc(const QueueModel& q, double x, std::uint64_t n_samples, std::uint64_t seed,
                            const McOptions& options = {});

struct AkOptions {
  double target_rel_err = 0.05;
  double confidence = 0.99;
  std::uint64_t seed = 0;
  std::uint64_t max_samples = 100'000'000;
  std::uint64_t batch_size = 10'000;
  std::uint64_t min_samples = 100'000;
  unsigned threads = 1;
};

/// Asmussen-Kroese conditional estimator, run in batches until the CI half-width falls to
/// target_rel_err * estimate or max_samples is reached (then converged = false).
SimulationEstimate ak_estimate(const QueueModel& q, double x, const AkOptions& options = {});

/// Fixed-size run of the conditional estimator, no stopping rule.
SimulationEstimate ak_fixed(const QueueModel& q, double x, std::uint64_t n_samples, std::uint64_t seed,
                            const McOptions& options = {});

}  // namespace mg1tail
