#include "spade/modes.hpp"

#include <cmath>
#include <stdexcept>

namespace spade {

void validate(const ImagingConfig& config) {
    if (config.d_modes < 2) throw std::domain_error("ImagingConfig: d_modes must be >= 2");
    if (!(config.x >= 0.0)) throw std::domain_error("ImagingConfig: x must be non-negative");
    if (!(config.prior_h0 >= 0.0) || !(config.prior_h1 >= 0.0) ||
        std::abs(config.prior_h0 + config.prior_h1 - 1.0) > 1e-12) {
        throw std::domain_error("ImagingConfig: priors must be non-negative and sum to 1");
    }
}

double hg_overlap_ideal(int n, int m, double x, int sign) {
    if (n < 0 || m < 0) throw std::domain_error("hg_overlap_ideal: mode indices must be non-negative");
    if (m != 0) return 0.0;
    const double envelope = std::exp(-0.5 * x * x);
    if (n == 0) return envelope;
    if (x == 0.0) return 0.0;
    const double magnitude =
        std::exp(n * std::log(std::abs(x)) - 0.5 * std::lgamma(n + 1.0) - 0.5 * x * x);
    const bool negative = (sign * x < 0.0) && (n % 2 == 1);
    return negative ? -magnitude : magnitude;
}

Eigen::VectorXd ideal_overlaps(int d, double x, int sign) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(d * d);
    for (int n = 0; n < d; ++n) {
        beta[n * d] = hg_overlap_ideal(n, 0, x, sign);
    }
    return beta;
}

OverlapAmplitudes crosstalk_overlaps(const CrosstalkMatrix& crosstalk, double x) {
    const int d = crosstalk.d;
    return {crosstalk.entries * ideal_overlaps(d, x, +1).cast<std::complex<double>>(),
            crosstalk.entries * ideal_overlaps(d, x, -1).cast<std::complex<double>>()};
}

ModeDistribution mode_probabilities(const CrosstalkMatrix& crosstalk, double x, int d) {
    if (d != crosstalk.d) throw std::domain_error("mode_probabilities: d must match the crosstalk matrix");
    const OverlapAmplitudes f = crosstalk_overlaps(crosstalk, x);
    Eigen::VectorXd p = 0.5 * (f.f_plus.cwiseAbs2() + f.f_minus.cwiseAbs2());
    const double total = p.sum();
    if (!(total >= 1e-300)) {
        throw std::domain_error("mode_probabilities: degenerate configuration (vanishing total)");
    }
    return {p / total, d, x};
}

double direct_imaging_intensity(double x, double rx, double ry) {
    const auto psf_sq = [](double ux, double uy) {
        return (2.0 / M_PI) * std::exp(-2.0 * (ux * ux + uy * uy));
    };
    return 0.5 * (psf_sq(rx - x, ry) + psf_sq(rx + x, ry));
}

}  // namespace spade
