#include "mg1tail/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <type_traits>
#include <variant>

#include "mg1tail/detail/summation.hpp"
#include "mg1tail/errors.hpp"
#include "mg1tail/normal.hpp"

namespace mg1tail {

namespace {

// Welford accumulator with Chan's pairwise merge.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) noexcept {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }

  void merge(const Moments& o) noexcept {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const auto na = static_cast<double>(n);
    const auto nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double total = na + nb;
    mean += d * nb / total;
    m2 += o.m2 + d * d * na * nb / total;
    n += o.n;
  }

  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct BatchPlan {
  std::uint64_t first;
  std::uint64_t count;
};

// Runs each planned batch (replication indices first .. first+count-1) and returns per-batch
// moments in plan order, independent of the thread count.
template <class Replication>
std::vector<Moments> run_batches(const std::vector<BatchPlan>& plan, std::uint64_t seed, unsigned threads,
                                 const Replication& replicate) {
  std::vector<Moments> out(plan.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t b = begin; b < plan.size(); b += stride) {
      Moments m;
      for (std::uint64_t i = 0; i < plan[b].count; ++i) {
        ReplicationStream stream(seed, plan[b].first + i);
        m.add(replicate(stream));
      }
      out[b] = m;
    }
  };
  const std::size_t t = std::max<std::size_t>(1, std::min<std::size_t>(threads, plan.size()));
  if (t == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(t);
    for (std::size_t k = 0; k < t; ++k) pool.emplace_back(work, k, t);
  }
  return out;
}

SimulationEstimate summarize(const Moments& m, double confidence, std::uint64_t seed, McMethod method) {
  SimulationEstimate e;
  e.estimate = m.mean;
  e.std_error = m.n > 0 ? std::sqrt(m.variance() / static_cast<double>(m.n)) : 0.0;
  e.half_width = normal_two_sided_critical(confidence) * e.std_error;
  e.rel_err = e.estimate > 0.0 ? e.half_width / e.estimate : std::numeric_limits<double>::infinity();
  e.confidence = confidence;
  e.n_samples = m.n;
  e.seed = seed;
  e.method = method;
  return e;
}

void require_nonnegative(double x) {
  if (!(x >= 0.0) || std::isnan(x)) throw DomainError("x must be nonnegative");
}

// Distribution of S_n restricted to 0..K, plus P(S_n > K h).
struct Window {
  std::vector<double> mass;
  double overflow = 0.0;
};

// Adds one more summand: g <- g * dist on 0..k_max, spilling what leaves the window.
void advance(Window& g, std::vector<double>& scratch, const Lattice& dist, std::size_t k_max) {
  const std::size_t width = k_max + 1;
  const std::size_t support = std::min(width, dist.size());
  const auto f = dist.mass();
  detail::CompensatedSum spill;
  spill.add(g.overflow);
  scratch.assign(width, 0.0);
  for (std::size_t i = 0; i < width; ++i) {
    const double gi = g.mass[i];
    if (gi == 0.0) continue;
    spill.add(gi * dist.upper_tail(k_max - i));
    const std::size_t jmax = std::min(support, width - i);
    double* dst = scratch.data() + i;
    for (std::size_t j = 0; j < jmax; ++j) dst[j] += gi * f[j];
  }
  g.mass.swap(scratch);
  g.overflow = spill.value();
}

Window point_mass_at_zero(std::size_t k_max) {
  Window g;
  g.mass.assign(k_max + 1, 0.0);
  g.mass[0] = 1.0;
  return g;
}

void check_budget(const char* what, std::int64_t n, std::size_t k_max, const Lattice& dist, LatticeBudget budget) {
  const auto width = static_cast<double>(k_max + 1);
  const double required = static_cast<double>(n) * width * std::min(width, static_cast<double>(dist.size()));
  if (required > static_cast<double>(budget.max_cells)) {
    throw ResourceError(what, required >= 1.8e19 ? std::numeric_limits<std::size_t>::max()
                                                 : static_cast<std::size_t>(required),
                        budget.max_cells);
  }
}

Window convolve_window(const Lattice& dist, std::int64_t n, std::size_t k_max, LatticeBudget budget) {
  if (n < 1) throw DomainError("convolution count n must be >= 1");
  check_budget("lattice convolution exceeds budget", n, k_max, dist, budget);
  Window g = point_mass_at_zero(k_max);
  std::vector<double> scratch;
  for (std::int64_t step = 0; step < n; ++step) advance(g, scratch, dist, k_max);
  return g;
}

}  // namespace

std::string_view to_string(McMethod m) noexcept {
  return m == McMethod::Crude ? "crude" : "asmussen-kroese";
}

Lattice discretize(const IntegratedTailModel& model, double h, Bracket bracket, double x_max) {
  if (const auto* l = model.as_lattice()) return *l;
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("lattice spacing must be positive");
  require_nonnegative(x_max);
  const auto k_top = static_cast<std::size_t>(std::floor(x_max / h + 1e-9)) + 1;
  std::vector<double> mass(k_top + 2, 0.0);
  mass[0] = 1.0 - tail_prob(model, 0.0);
  double prev = tail_prob(model, 0.0);
  for (std::size_t k = 1; k <= k_top; ++k) {
    const double cur = tail_prob(model, static_cast<double>(k) * h);
    mass[bracket == Bracket::Upper ? k : k - 1] += prev - cur;
    prev = cur;
  }
  mass[k_top + (bracket == Bracket::Upper ? 1 : 0)] += prev;
  return Lattice(h, std::move(mass));
}

std::vector<double> convolve_tails(const Lattice& dist, std::int64_t n, std::span<const double> xs,
                                   LatticeBudget budget) {
  std::ptrdiff_t k_max = 0;
  for (double x : xs) {
    require_nonnegative(x);
    k_max = std::max(k_max, dist.floor_index(x));
  }
  const Window g = convolve_window(dist, n, static_cast<std::size_t>(k_max), budget);
  // suffix sums from the top keep small tails accurate
  std::vector<double> above(g.mass.size() + 1, 0.0);
  above[g.mass.size()] = g.overflow;
  for (std::size_t k = g.mass.size(); k-- > 0;) above[k] = above[k + 1] + g.mass[k];
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(above[static_cast<std::size_t>(dist.floor_index(x)) + 1]);
  return out;
}

double convolve_tail(const Lattice& dist, std::int64_t n, double x, LatticeBudget budget) {
  const double xs[] = {x};
  return convolve_tails(dist, n, xs, budget).front();
}

PkExact pk_truncated(const QueueModel& q, double x, const PkOptions& options) {
  require_nonnegative(x);
  if (!(options.tol > 0.0 && options.tol < 1.0)) throw DomainError("tolerance must lie in (0,1)");
  const double rho = q.rho();
  const auto n_terms = static_cast<std::int64_t>(std::max(1.0, std::ceil(std::log(options.tol) / std::log(rho))));

  auto series = [&](const Lattice& dist) {
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, dist.floor_index(x)));
    check_budget("Pollaczek-Khintchine lattice sum exceeds budget", n_terms, k, dist, options.budget);
    // one convolution per term, reusing the running window
    detail::CompensatedSum acc;
    Window g = point_mass_at_zero(k);
    std::vector<double> scratch;
    for (std::int64_t n = 1; n <= n_terms; ++n) {
      advance(g, scratch, dist, k);
      acc.add((1.0 - rho) * std::pow(rho, static_cast<double>(n)) * g.overflow);
    }
    return acc.value();
  };

  PkExact out;
  out.truncation_n = n_terms;
  out.truncation_bound = std::pow(rho, static_cast<double>(n_terms + 1));
  if (const auto* l = q.model().as_lattice()) {
    out.lower = out.upper = series(*l);
    out.lattice_spacing = l->spacing();
  } else {
    out.lower = series(discretize(q.model(), options.spacing, Bracket::Lower, x));
    out.upper = series(discretize(q.model(), options.spacing, Bracket::Upper, x));
    out.lattice_spacing = options.spacing;
  }
  out.value = 0.5 * (out.lower + out.upper);
  return out;
}

std::int64_t geometric_count(double rho, ReplicationStream& stream) {
  const double n = std::floor(std::log(stream.uniform()) / std::log(rho));
  return n >= 9.0e18 ? std::numeric_limits<std::int64_t>::max() : static_cast<std::int64_t>(n);
}

namespace {

// Per-variant draw and tail, resolved once per replication instead of once per summand.
struct ParetoOps {
  double neg_inv_index;
  double one_minus_alpha;
  explicit ParetoOps(const ParetoIntegratedTail& p) : neg_inv_index(-1.0 / (p.alpha - 1.0)), one_minus_alpha(1.0 - p.alpha) {}
  double draw(double u) const { return std::pow(1.0 - u, neg_inv_index); }
  double tail(double x) const { return x < 1.0 ? 1.0 : std::pow(x, one_minus_alpha); }
  double atom(double) const { return 0.0; }
};

struct ExponentialOps {
  double rate;
  explicit ExponentialOps(const ExponentialIntegrated& e) : rate(e.rate) {}
  double draw(double u) const { return -std::log1p(-u) / rate; }
  double tail(double x) const { return std::exp(-rate * std::max(x, 0.0)); }
  double atom(double) const { return 0.0; }
};

struct LatticeOps {
  const Lattice* l;
  explicit LatticeOps(const Lattice& lat) : l(&lat) {}
  double draw(double u) const { return static_cast<double>(l->quantile_index(u)) * l->spacing(); }
  double tail(double x) const {
    if (x < 0.0) return 1.0;
    const auto k = l->floor_index(x);
    return k < 0 ? 1.0 : l->upper_tail(static_cast<std::size_t>(k));
  }
  double atom(double v) const {
    const auto k = static_cast<std::size_t>(std::llround(v / l->spacing()));
    return k < l->size() ? l->mass()[k] : 0.0;
  }
};

template <class F>
decltype(auto) with_ops(const IntegratedTailModel& model, F&& f) {
  return std::visit(
      [&](const auto& v) -> decltype(auto) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ParetoIntegratedTail>) return f(ParetoOps(v));
        else if constexpr (std::is_same_v<T, ExponentialIntegrated>) return f(ExponentialOps(v));
        else return f(LatticeOps(v));
      },
      model.variant());
}

}  // namespace

double compound_geometric_sample(const QueueModel& q, ReplicationStream& stream) {
  const std::int64_t n = geometric_count(q.rho(), stream);
  return with_ops(q.model(), [&](const auto& ops) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += ops.draw(stream.uniform());
    return s;
  });
}

double ak_replication(const QueueModel& q, double x, ReplicationStream& stream) {
  const std::int64_t n = geometric_count(q.rho(), stream);
  if (n == 0) return 0.0;
  return with_ops(q.model(), [&](const auto& ops) {
    double max_x = 0.0;
    double sum = 0.0;
    std::int64_t ties = 0;
    for (std::int64_t i = 1; i < n; ++i) {
      const double v = ops.draw(stream.uniform());
      if (i == 1 || v > max_x) {
        max_x = v;
        ties = 1;
      } else if (v == max_x) {
        ++ties;
      }
      sum += v;
    }
    double p = ops.tail(std::max(max_x, x - sum));
    // atoms: the last summand ties with the running maximum with positive probability and is
    // then the designated maximum with probability 1/(ties+1)
    if (n > 1 && max_x > x - sum) p += ops.atom(max_x) / static_cast<double>(ties + 1);
    return static_cast<double>(n) * p;
  });
}

namespace {

std::vector<BatchPlan> fixed_plan(std::uint64_t n_samples, std::uint64_t batch) {
  std::vector<BatchPlan> plan;
  for (std::uint64_t first = 0; first < n_samples; first += batch) {
    plan.push_back({first, std::min(batch, n_samples - first)});
  }
  return plan;
}

constexpr std::uint64_t kFixedBatch = 10'000;

}  // namespace

SimulationEstimate crude_mc(const QueueModel& q, double x, std::uint64_t n_samples, std::uint64_t seed,
                            const McOptions& options) {
  require_nonnegative(x);
  if (n_samples < 100) throw DomainError("crude_mc needs at least 100 samples");
  const auto batches = run_batches(fixed_plan(n_samples, kFixedBatch), seed, options.threads,
                                   [&](ReplicationStream& s) { return compound_geometric_sample(q, s) > x ? 1.0 : 0.0; });
  Moments total;
  for (const auto& b : batches) total.merge(b);
  return summarize(total, options.confidence, seed, McMethod::Crude);
}

SimulationEstimate ak_fixed(const QueueModel& q, double x, std::uint64_t n_samples, std::uint64_t seed,
                            const McOptions& options) {
  require_nonnegative(x);
  if (n_samples < 2) throw DomainError("ak_fixed needs at least 2 samples");
  const auto batches = run_batches(fixed_plan(n_samples, kFixedBatch), seed, options.threads,
                                   [&](ReplicationStream& s) { return ak_replication(q, x, s); });
  Moments total;
  for (const auto& b : batches) total.merge(b);
  return summarize(total, options.confidence, seed, McMethod::AsmussenKroese);
}

SimulationEstimate ak_estimate(const QueueModel& q, double x, const AkOptions& options) {
  require_nonnegative(x);
  if (!(options.target_rel_err > 0.0)) throw DomainError("target relative error must be positive");
  if (options.batch_size == 0 || options.max_samples == 0) throw DomainError("batch and sample limits must be positive");
  const double z = normal_two_sided_critical(options.confidence);
  auto replicate = [&](ReplicationStream& s) { return ak_replication(q, x, s); };

  Moments total;
  std::uint64_t next_index = 0;
  const unsigned group = std::max(1U, options.threads);
  while (next_index < options.max_samples) {
    std::vector<BatchPlan> plan;
    for (unsigned b = 0; b < group && next_index < options.max_samples; ++b) {
      const std::uint64_t count = std::min(options.batch_size, options.max_samples - next_index);
      plan.push_back({next_index, count});
      next_index += count;
    }
    const auto batches = run_batches(plan, options.seed, options.threads, replicate);
    // batches merge and the stopping rule is checked in index order, so the result does not
    // depend on how many ran concurrently
    for (const auto& b : batches) {
      total.merge(b);
      if (total.n < options.min_samples) continue;
      const double half = z * std::sqrt(total.variance() / static_cast<double>(total.n));
      if (total.mean > 0.0 && half <= options.target_rel_err * total.mean) {
        return summarize(total, options.confidence, options.seed, McMethod::AsmussenKroese);
      }
    }
  }
  SimulationEstimate e = summarize(total, options.confidence, options.seed, McMethod::AsmussenKroese);
  e.converged = e.rel_err <= options.target_rel_err;
  return e;
}

}  // namespace mg1tail
