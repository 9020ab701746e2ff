#pragma once

#include <cstdint>

namespace spade {

/// CDF of the standard normal distribution, accurate in both tails.
double normal_cdf(double z);

/// Upper tail 1 - Phi(z) without cancellation for large z.
double normal_sf(double z);

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// log of the binomial probability mass function, stable for n up to ~1e9.
double binomial_log_pmf(std::int64_t k, std::int64_t n, double p);

/// Binomial CDF F(k) = P(X <= k) for X ~ Bin(n, p), evaluated as the
/// regularized beta function I_{1-p}(n-k, k+1). Stable for n up to 1e9.
double binomial_cdf(std::int64_t k, std::int64_t n, double p);

/// Upper tail P(X > k) = I_p(k+1, n-k), computed directly so deep tails keep
/// full precision instead of cancelling against 1.
double binomial_sf(std::int64_t k, std::int64_t n, double p);

}  // namespace spade
