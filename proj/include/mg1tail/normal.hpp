#pragma once

namespace mg1tail {

/// 1 - Phi(z), evaluated through erfc so the upper tail keeps relative precision.
double normal_upper_tail(double z) noexcept;

/// Standard normal density.
double normal_pdf(double z) noexcept;

/// z with 1 - Phi(z) = p, p in (0,1). Bisection on normal_upper_tail to full double precision.
double normal_upper_quantile(double p);

/// Two-sided critical value: z with P(|Z| <= z) = confidence.
double normal_two_sided_critical(double confidence);

}  // namespace mg1tail
