#pragma once

#include <Eigen/Dense>
#include <string>

#include "spade/modes.hpp"

namespace spade {

enum class ChernoffMethod {
    exact_minimization,
    asymptotic_small_x,
    asymptotic_large_x,
    quantum_bound,
    direct_imaging_exact,
    direct_imaging_asymptotic,
};

std::string to_string(ChernoffMethod method);

struct ChernoffResult {
    double xi = 0.0;     // error exponent, >= 0
    double s_min = 0.0;  // minimizer in [0, 1]
    ChernoffMethod method = ChernoffMethod::exact_minimization;
    double tolerance = 0.0;
};

/// Q_s = sum_k p0(k)^s p1(k)^{1-s} for s in [0, 1].
///
/// Zero-probability convention: for s in (0, 1) a term with either probability
/// zero contributes 0; at s = 0 the sum is over the support of p0 of p1, at
/// s = 1 over the support of p1 of p0 (the limits from inside the interval).
double q_s(const Eigen::Ref<const Eigen::VectorXd>& p0, const Eigen::Ref<const Eigen::VectorXd>& p1,
           double s);
double q_s(const ModeDistribution& dist0, const ModeDistribution& dist1, double s);

/// xi = -ln min_{s in [0,1]} Q_s by a 64-point coarse grid plus golden-section
/// refinement to |delta s| <= tol. Q_s is log-convex in s, so the line search
/// is exact once bracketed.
ChernoffResult chernoff_exponent(const Eigen::Ref<const Eigen::VectorXd>& p0,
                                 const Eigen::Ref<const Eigen::VectorXd>& p1, double tol = 1e-10);
ChernoffResult chernoff_exponent(const ModeDistribution& dist0, const ModeDistribution& dist1,
                                 double tol = 1e-10);

enum class AsymptoticBranch { x_much_less, x_much_greater };

/// Leading-order SPADE exponents for weak crosstalk:
///   x << eps: xi = x^4 / (8 p0), s_min = 1/2
///   x >> eps: xi = {1 - [ln ln q - 1]/ln q} x^2 with q = x^2/p0,
///             s_min = ln(ln q)/ln q.
/// The large-separation branch requires ln q > 1; near x ~ eps the series
/// converges too slowly to be meaningful and a domain error is raised.
ChernoffResult spade_chernoff_asymptotic(double x, double p0, AsymptoticBranch branch);

/// Quantum Chernoff bound xi_Q = x^2 (optimum over all measurements).
ChernoffResult quantum_bound(double x);

/// Exponent of ideal continuous direct imaging: minimizes the 2D overlap
/// integral of p(r|0)^s p(r|d)^{1-s} over the disk of radius 8 (PSF widths)
/// by adaptive quadrature to absolute tolerance quad_tol, then golden-section
/// search in s. The Gaussian tail beyond the disk is below 1e-27.
ChernoffResult direct_imaging_chernoff(double x, double quad_tol = 1e-9);

/// Small-separation limit of the above: xi = x^4, s_min = 1/2.
ChernoffResult direct_imaging_chernoff_asymptotic(double x);

}  // namespace spade
