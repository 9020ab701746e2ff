#include "spade/chernoff.hpp"

#include <cmath>
#include <stdexcept>

#include "spade/optimize.hpp"
#include "spade/quadrature.hpp"

namespace spade {

std::string to_string(ChernoffMethod method) {
    switch (method) {
        case ChernoffMethod::exact_minimization: return "exact_minimization";
        case ChernoffMethod::asymptotic_small_x: return "asymptotic_small_x";
        case ChernoffMethod::asymptotic_large_x: return "asymptotic_large_x";
        case ChernoffMethod::quantum_bound: return "quantum_bound";
        case ChernoffMethod::direct_imaging_exact: return "direct_imaging_exact";
        case ChernoffMethod::direct_imaging_asymptotic: return "direct_imaging_asymptotic";
    }
    throw std::logic_error("unknown chernoff method");
}

double q_s(const Eigen::Ref<const Eigen::VectorXd>& p0, const Eigen::Ref<const Eigen::VectorXd>& p1,
           double s) {
    if (p0.size() != p1.size()) throw std::domain_error("q_s: distributions must share a support set");
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("q_s: s must lie in [0, 1]");
    double total = 0.0;
    if (s == 0.0) {
        for (Eigen::Index k = 0; k < p0.size(); ++k)
            if (p0[k] > 0.0) total += p1[k];
        return total;
    }
    if (s == 1.0) {
        for (Eigen::Index k = 0; k < p0.size(); ++k)
            if (p1[k] > 0.0) total += p0[k];
        return total;
    }
    for (Eigen::Index k = 0; k < p0.size(); ++k) {
        if (p0[k] > 0.0 && p1[k] > 0.0) {
            // p1 * (p0/p1)^s; exact when the entries coincide
            total += p1[k] * std::exp(s * (std::log(p0[k]) - std::log(p1[k])));
        }
    }
    return total;
}

double q_s(const ModeDistribution& dist0, const ModeDistribution& dist1, double s) {
    return q_s(dist0.probabilities, dist1.probabilities, s);
}

ChernoffResult chernoff_exponent(const Eigen::Ref<const Eigen::VectorXd>& p0,
                                 const Eigen::Ref<const Eigen::VectorXd>& p1, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("chernoff_exponent: tol must be positive");
    const auto objective = [&](double s) { return q_s(p0, p1, s); };
    const ScalarMinimum minimum = grid_golden_min(objective, 0.0, 1.0, 64, tol);
    return {std::max(0.0, -std::log(minimum.value)), minimum.x, ChernoffMethod::exact_minimization,
            tol};
}

ChernoffResult chernoff_exponent(const ModeDistribution& dist0, const ModeDistribution& dist1,
                                 double tol) {
    return chernoff_exponent(dist0.probabilities, dist1.probabilities, tol);
}

ChernoffResult spade_chernoff_asymptotic(double x, double p0, AsymptoticBranch branch) {
    if (!(x >= 0.0)) throw std::domain_error("spade_chernoff_asymptotic: x must be non-negative");
    if (!(p0 > 0.0)) throw std::domain_error("spade_chernoff_asymptotic: degenerate crosstalk, p0 must be positive");
    if (branch == AsymptoticBranch::x_much_less) {
        return {x * x * x * x / (8.0 * p0), 0.5, ChernoffMethod::asymptotic_small_x, 0.0};
    }
    const double q = x * x / p0;
    const double log_q = std::log(q);
    if (!(log_q > 1.0)) {
        throw std::domain_error(
            "spade_chernoff_asymptotic: large-separation branch needs ln(x^2/p0) > 1; the series "
            "converges too slowly near x ~ eps");
    }
    const double xi = (1.0 - (std::log(log_q) - 1.0) / log_q) * x * x;
    const double s_min = std::log(log_q) / log_q;
    return {xi, s_min, ChernoffMethod::asymptotic_large_x, 0.0};
}

ChernoffResult quantum_bound(double x) {
    if (!(x >= 0.0)) throw std::domain_error("quantum_bound: x must be non-negative");
    return {x * x, 0.0, ChernoffMethod::quantum_bound, 0.0};
}

ChernoffResult direct_imaging_chernoff(double x, double quad_tol) {
    if (!(x >= 0.0)) throw std::domain_error("direct_imaging_chernoff: x must be non-negative");
    if (!(quad_tol > 0.0)) throw std::domain_error("direct_imaging_chernoff: quad_tol must be positive");
    constexpr double kRadius = 8.0;
    const auto overlap = [&](double s) {
        auto integrand = [&](double rx, double ry) {
            const double a = direct_imaging_intensity(0.0, rx, ry);
            const double b = direct_imaging_intensity(x, rx, ry);
            return std::pow(a, s) * std::pow(b, 1.0 - s);
        };
        // the intensity is symmetric under rx -> -rx and ry -> -ry
        return integrate_disk(integrand, kRadius, quad_tol, true);
    };
    const ScalarMinimum minimum = grid_golden_min(overlap, 0.0, 1.0, 16, 1e-3);
    return {std::max(0.0, -std::log(minimum.value)), minimum.x, ChernoffMethod::direct_imaging_exact,
            quad_tol};
}

ChernoffResult direct_imaging_chernoff_asymptotic(double x) {
    if (!(x >= 0.0)) throw std::domain_error("direct_imaging_chernoff_asymptotic: x must be non-negative");
    return {x * x * x * x, 0.5, ChernoffMethod::direct_imaging_asymptotic, 0.0};
}

}  // namespace spade
