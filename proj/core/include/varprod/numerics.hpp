#pragma once

namespace varprod::numerics {

/// ln Γ(x) for x > 0 (Lanczos approximation, relative error ~1e-15 away from
/// the roots at 1 and 2). Throws DomainError for x <= 0 or non-finite x.
double log_gamma(double x);

/// Regularized incomplete beta I_x(a, b). Evaluated by a modified-Lentz
/// continued fraction, switching to 1 - I_{1-x}(b, a) past the mode-side
/// threshold x > (a + 1) / (a + b + 2).
double regularized_incomplete_beta(double a, double b, double x);

/// Lower and upper regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Limiting distribution of sqrt(n) * D_n for the one-sample KS statistic.
double kolmogorov_cdf(double x);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace varprod::numerics
