#include "mg1tail/normal.hpp"

#include <cmath>
#include <numbers>

#include "mg1tail/errors.hpp"

namespace mg1tail {

double normal_upper_tail(double z) noexcept { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_pdf(double z) noexcept { return std::exp(-0.5 * z * z) * 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2; }

double normal_upper_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile requires p in (0,1)");
  double lo = -40.0;
  double hi = 40.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    if (normal_upper_tail(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

double normal_two_sided_critical(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0,1)");
  return normal_upper_quantile(0.5 * (1.0 - confidence));
}

}  // namespace mg1tail
