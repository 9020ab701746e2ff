#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "spade/crosstalk.hpp"
#include "spade/hypothesis.hpp"
#include "spade/modes.hpp"

namespace spade {

/// Deterministic random stream. Built on std::mt19937_64 (whose algorithm the
/// C++ standard fixes bit-for-bit) with explicit output mappings, so sampled
/// values are reproducible across standard libraries and golden files stay
/// portable. No std::*_distribution is used anywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one value per pair of uniforms).
    double normal();

  private:
    std::mt19937_64 engine_;
};

/// Generalized Gell-Mann basis of su(dim): dim^2 - 1 Hermitian traceless
/// matrices with Tr(G_i G_j) = 2 delta_ij (symmetric pairs, antisymmetric
/// pairs, then diagonal matrices).
std::vector<Eigen::MatrixXcd> gell_mann_basis(int dim);

/// Random unitary crosstalk C = exp(-i mu lambda . G) on the d^2-dimensional
/// mode space: mu = sqrt(epsilon2_target (d^4 - 1) / 2) (inverting the weak-
/// crosstalk average strength), lambda uniform on the unit sphere, and the
/// exponential taken by eigendecomposition of the Hermitian generator.
CrosstalkMatrix random_crosstalk(int d, double epsilon2_target, std::uint64_t seed);

/// Inverse-CDF binomial draw (binary search on binomial_cdf).
std::int64_t sample_binomial(Rng& rng, std::int64_t n, double p);

/// Multinomial draw of n photons over the d^2 modes by conditional binomials.
CountsRecord sample_counts(const ModeDistribution& dist, std::int64_t n, Rng& rng);
CountsRecord sample_counts(const ModeDistribution& dist, std::int64_t n, std::uint64_t seed);

/// Empirical error rates over independent simulated runs: trial t draws one
/// record under each hypothesis from the substream seeded with seed + t and
/// applies the decision rule (the full LRT variant dispatches to
/// full_lrt_decide). alpha and beta are the observed error fractions.
ErrorReport empirical_error_rates(const TestSpec& spec, const CrosstalkMatrix& crosstalk, double x,
                                  std::int64_t n, std::int64_t trials, std::uint64_t seed);

struct SampleStats {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    std::int64_t n_samples = 0;
};

/// Median (midpoint convention for even counts) and linearly interpolated
/// quartiles of a non-empty sample.
SampleStats summarize(std::vector<double> values);

}  // namespace spade
