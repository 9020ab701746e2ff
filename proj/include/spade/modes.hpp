#pragma once

#include <Eigen/Dense>

#include "spade/crosstalk.hpp"

namespace spade {

/// Hermite-Gauss mode label. Valid for a cutoff d when n < d and m < d.
struct ModeIndex {
    int n = 0;
    int m = 0;
};

/// Row-major flattening (n, m) -> n*d + m, matching CrosstalkMatrix.
inline int flat_index(ModeIndex mode, int d) { return mode.n * d + mode.m; }
inline ModeIndex mode_from_flat(int index, int d) { return {index / d, index % d}; }

/// Problem configuration. All lengths are in units of the PSF width w, so the
/// separation enters only through x = d/2w.
struct ImagingConfig {
    int d_modes = 2;
    double x = 0.0;
    double prior_h0 = 0.5;
    double prior_h1 = 0.5;
};

void validate(const ImagingConfig& config);

/// Ideal (crosstalk-free) overlap beta_{sign*nm}(x) = (sign*x)^n e^{-x^2/2} / sqrt(n!) delta_{m0}.
/// The factorial is taken in log space, so large n stay finite.
double hg_overlap_ideal(int n, int m, double x, int sign);

/// All d^2 ideal overlaps as a flat vector.
Eigen::VectorXd ideal_overlaps(int d, double x, int sign);

/// Overlaps of the crosstalk-affected measurement modes with the two sources.
struct OverlapAmplitudes {
    Eigen::VectorXcd f_plus;
    Eigen::VectorXcd f_minus;
};

/// f_{+-nm} = sum_{kl} C_{nm,kl} beta_{+-kl}(x)
OverlapAmplitudes crosstalk_overlaps(const CrosstalkMatrix& crosstalk, double x);

/// Detection probabilities over the d^2 measured modes, renormalized to sum to 1.
struct ModeDistribution {
    Eigen::VectorXd probabilities;
    int d = 2;
    double x = 0.0;
};

/// p(nm|x) proportional to (|f_{+nm}|^2 + |f_{-nm}|^2)/2, renormalized over the
/// d^2 modes. Throws std::domain_error if the unnormalized total is below
/// 1e-300 (degenerate configuration).
ModeDistribution mode_probabilities(const CrosstalkMatrix& crosstalk, double x, int d);

/// Image-plane photon density for ideal direct imaging of the two hypotheses
/// merged source: p(r|d) = (|u00(r - r0)|^2 + |u00(r + r0)|^2)/2 with
/// r0 = (x, 0) in PSF-width units (full separation d = 2xw).
double direct_imaging_intensity(double x, double rx, double ry);

}  // namespace spade
