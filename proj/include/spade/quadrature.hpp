#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spade {
namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm, double fb, double whole,
                       double tol, double noise_floor, int depth, int min_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // The noise floor keeps integrand jitter (e.g. from a nested quadrature)
    // from driving an endless descent: once delta is negligible against the
    // whole integral, refinement cannot improve the estimate.
    if (min_depth <= 0 && (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise_floor)) {
        return left + right + delta / 15.0;
    }
    if (depth <= 0) throw std::runtime_error("adaptive quadrature did not converge");
    return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, noise_floor, depth - 1,
                           min_depth - 1) +
           simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, noise_floor, depth - 1,
                           min_depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48,
                        int min_depth = 4) {
    if (!(tol > 0.0)) throw std::domain_error("adaptive_simpson: tol must be positive");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fm = f(0.5 * (a + b));
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale =
        std::max(std::abs(whole), std::abs(b - a) / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb)));
    const double noise_floor = 1e-15 * scale;
    return detail::simpson_recurse(f, a, b, fa, fm, fb, whole, tol, noise_floor, max_depth,
                                   min_depth);
}

/// Integral of f(x, y) over the disk of the given radius, as an iterated
/// adaptive Simpson rule with y-dependent x limits. When f is symmetric under
/// x -> -x and y -> -y (set `quadrant_symmetric`), only one quadrant is
/// evaluated.
template <class F>
double integrate_disk(F&& f, double radius, double tol, bool quadrant_symmetric = false) {
    if (!(radius > 0.0)) throw std::domain_error("integrate_disk: radius must be positive");
    if (!(tol > 0.0)) throw std::domain_error("integrate_disk: tol must be positive");
    const double factor = quadrant_symmetric ? 4.0 : 1.0;
    const double inner_tol = tol / (factor * 16.0 * radius);
    auto row = [&](double y) {
        const double half_width = std::sqrt(std::max(radius * radius - y * y, 0.0));
        if (half_width == 0.0) return 0.0;
        auto g = [&](double x) { return f(x, y); };
        return adaptive_simpson(g, quadrant_symmetric ? 0.0 : -half_width, half_width, inner_tol);
    };
    return factor *
           adaptive_simpson(row, quadrant_symmetric ? 0.0 : -radius, radius, 0.5 * tol / factor);
}

}  // namespace spade
