#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace spade {

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search on [a, b]. Returns the best point seen, so the result
/// is never worse than either bracket endpoint. Exact for unimodal f once the
/// bracket width reaches xtol.
template <class F>
ScalarMinimum golden_section_min(F&& f, double a, double b, double xtol, int max_iter = 300) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    ScalarMinimum best{a, f(a)};
    const double fb = f(b);
    if (fb < best.value) best = {b, fb};

    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    if (fc < best.value) best = {c, fc};
    if (fd < best.value) best = {d, fd};

    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            if (fc < best.value) best = {c, fc};
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            if (fd < best.value) best = {d, fd};
        }
    }
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm < best.value) best = {mid, fm};
    return best;
}

/// Coarse grid scan followed by golden-section refinement of the bracketing
/// interval. The grid guards against locally flat regions; the refinement is
/// exact for unimodal (e.g. log-convex) objectives.
template <class F>
ScalarMinimum grid_golden_min(F&& f, double a, double b, int grid_points, double xtol) {
    const int n = std::max(grid_points, 2);
    int best_i = 0;
    double best_v = f(a);
    for (int i = 1; i <= n; ++i) {
        const double s = a + (b - a) * i / n;
        const double v = f(s);
        if (v < best_v) {
            best_v = v;
            best_i = i;
        }
    }
    const double lo = a + (b - a) * std::max(best_i - 1, 0) / n;
    const double hi = a + (b - a) * std::min(best_i + 1, n) / n;
    ScalarMinimum refined = golden_section_min(f, lo, hi, xtol);
    if (best_v < refined.value) {
        return {a + (b - a) * best_i / n, best_v};
    }
    return refined;
}

}  // namespace spade
