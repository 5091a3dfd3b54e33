#include "mg1tail/light_tails.hpp"

#include <cmath>

#include "mg1tail/errors.hpp"

namespace mg1tail {

namespace {

void require_rho(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie strictly inside (0,1)");
}

const ExponentialIntegrated& require_light(const IntegratedTailModel& model) {
  const auto* e = model.as_exponential();
  if (e == nullptr) {
    throw UnsupportedError("E exp(theta V) is infinite or unidentified for " + model.describe() +
                           "; light-tail formulas need the exponential model");
  }
  return *e;
}

}  // namespace

AdjustmentCoefficient adjustment_coefficient(const IntegratedTailModel& model, double rho) {
  require_rho(rho);
  const double nu = require_light(model).rate;
  // rho E e^{theta V} - 1 = rho nu/(nu - theta) - 1, increasing on (0, nu)
  auto f = [&](double theta) { return rho * nu / (nu - theta) - 1.0; };
  double lo = 0.0;
  double hi = nu;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double theta = std::abs(f(lo)) <= std::abs(f(hi)) || hi >= nu ? lo : hi;
  return {theta, rho, std::abs(f(theta))};
}

double cramer_lundberg_tail(const IntegratedTailModel& model, double rho, double x) {
  if (!(x >= 0.0)) throw DomainError("x must be nonnegative");
  return std::exp(-adjustment_coefficient(model, rho).theta_star * x);
}

double corrected_heavy_traffic(const IntegratedTailModel& model, double rho, double x_scaled) {
  require_rho(rho);
  require_light(model);
  if (!(x_scaled >= 0.0)) throw DomainError("x_scaled must be nonnegative");
  const ServiceMoments m = service_moments(model);
  const double x = x_scaled;
  return std::exp(-2.0 * x / (1.0 - rho) * m.ev1 / m.ev2 + x * *m.ev3 / (3.0 * m.ev2) - x / 4.0 * m.ev2 / m.ev1);
}

}  // namespace mg1tail
