#include "mg1tail/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mg1tail/errors.hpp"

namespace mg1tail {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kLatticeSnap = 1e-9;

}  // namespace

Lattice::Lattice(double spacing, std::vector<double> mass) : spacing_(spacing), mass_(std::move(mass)) {
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) throw DomainError("lattice spacing must be positive");
  if (mass_.empty()) throw DomainError("lattice mass vector is empty");
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("lattice mass must be finite and nonnegative");
  }
  // trailing zeros carry no information
  while (mass_.size() > 1 && mass_.back() == 0.0) mass_.pop_back();

  upper_.assign(mass_.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = mass_.size(); k-- > 0;) {
    upper_[k] = acc;
    acc += mass_[k];
  }
  if (std::abs(acc - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "lattice mass sums to " << acc << ", expected 1";
    throw DomainError(os.str());
  }
  cumulative_.resize(mass_.size());
  std::partial_sum(mass_.begin(), mass_.end(), cumulative_.begin());
}

std::ptrdiff_t Lattice::floor_index(double x) const noexcept {
  return static_cast<std::ptrdiff_t>(std::floor(x / spacing_ + kLatticeSnap));
}

std::size_t Lattice::quantile_index(double u) const noexcept {
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  auto k = static_cast<std::size_t>(it - cumulative_.begin());
  // skip zero-mass points that share the cumulative value of their predecessor
  while (k + 1 < mass_.size() && mass_[k] == 0.0) ++k;
  return k;
}

IntegratedTailModel IntegratedTailModel::pareto(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw DomainError("pareto-it requires alpha > 2 (got " + std::to_string(alpha) + ")");
  }
  return IntegratedTailModel(ParetoIntegratedTail{alpha});
}

IntegratedTailModel IntegratedTailModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exp requires rate > 0");
  return IntegratedTailModel(ExponentialIntegrated{rate});
}

IntegratedTailModel IntegratedTailModel::lattice(double spacing, std::vector<double> mass) {
  return IntegratedTailModel(Lattice(spacing, std::move(mass)));
}

namespace {

// shortest text that parses back to the same double
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string IntegratedTailModel::describe() const {
  return std::visit(Overloaded{
                        [](const ParetoIntegratedTail& p) { return "pareto-it:alpha=" + shortest(p.alpha); },
                        [](const ExponentialIntegrated& e) { return "exp:rate=" + shortest(e.rate); },
                        [](const Lattice& l) {
                          return "lattice:h=" + shortest(l.spacing()) + ",points=" + std::to_string(l.size());
                        },
                    },
                    v_);
}

double tail_prob(const IntegratedTailModel& model, double x) {
  if (!(x >= 0.0)) throw DomainError("tail_prob requires x >= 0");
  return std::visit(Overloaded{
                        [x](const ParetoIntegratedTail& p) { return x < 1.0 ? 1.0 : std::pow(x, 1.0 - p.alpha); },
                        [x](const ExponentialIntegrated& e) { return std::exp(-e.rate * x); },
                        [x](const Lattice& l) {
                          auto k = l.floor_index(x);
                          return k < 0 ? 1.0 : l.upper_tail(static_cast<std::size_t>(k));
                        },
                    },
                    model.variant());
}

double mean_integrated(const IntegratedTailModel& model) {
  return std::visit(Overloaded{
                        [](const ParetoIntegratedTail& p) { return (p.alpha - 1.0) / (p.alpha - 2.0); },
                        [](const ExponentialIntegrated& e) { return 1.0 / e.rate; },
                        [](const Lattice& l) {
                          double s = 0.0;
                          for (std::size_t k = 0; k < l.size(); ++k) s += static_cast<double>(k) * l.mass()[k];
                          return s * l.spacing();
                        },
                    },
                    model.variant());
}

double variance_integrated(const IntegratedTailModel& model) {
  return std::visit(Overloaded{
                        [](const ParetoIntegratedTail& p) {
                          if (p.alpha <= 3.0) return std::numeric_limits<double>::infinity();
                          const double m1 = (p.alpha - 1.0) / (p.alpha - 2.0);
                          const double m2 = 1.0 + 2.0 / (p.alpha - 3.0);
                          return m2 - m1 * m1;
                        },
                        [](const ExponentialIntegrated& e) { return 1.0 / (e.rate * e.rate); },
                        [&](const Lattice& l) {
                          const double m = mean_integrated(model);
                          double s = 0.0;
                          for (std::size_t k = 0; k < l.size(); ++k) {
                            const double d = static_cast<double>(k) * l.spacing() - m;
                            s += d * d * l.mass()[k];
                          }
                          return s;
                        },
                    },
                    model.variant());
}

double sample_x(const IntegratedTailModel& model, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample_x requires u in (0,1)");
  return std::visit(Overloaded{
                        [u](const ParetoIntegratedTail& p) { return std::pow(1.0 - u, -1.0 / (p.alpha - 1.0)); },
                        [u](const ExponentialIntegrated& e) { return -std::log1p(-u) / e.rate; },
                        [u](const Lattice& l) { return static_cast<double>(l.quantile_index(u)) * l.spacing(); },
                    },
                    model.variant());
}

ServiceMoments service_moments(const IntegratedTailModel& model) {
  const auto* e = model.as_exponential();
  if (e == nullptr) {
    throw UnsupportedError("service moments are only identified for the exponential model, not " +
                           model.describe());
  }
  const double m = 1.0 / e->rate;
  return ServiceMoments{m, 2.0 * m * m, 6.0 * m * m * m};
}

std::optional<double> tail_index(const IntegratedTailModel& model) noexcept {
  if (const auto* p = model.as_pareto()) return p->alpha;
  return std::nullopt;
}

QueueModel::QueueModel(IntegratedTailModel model, double rho)
    : model_(std::move(model)), rho_(rho), mu_(mean_integrated(model_)) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie strictly inside (0,1)");
  if (!(mu_ > 0.0)) throw DomainError("integrated tail must have a positive mean");
}

double QueueModel::arrival_rate() const { return rho_ / service_moments(model_).ev1; }

}  // namespace mg1tail
