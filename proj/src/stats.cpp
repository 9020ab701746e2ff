#include "spade/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spade {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2

// stirlerr(m) = lgamma(m+1) - [(m+1/2) ln m - m + ln(2*pi)/2]
double stirlerr(double m) {
    if (m < 16.0) {
        return std::lgamma(m + 1.0) - (m + 0.5) * std::log(m) + m - kHalfLog2Pi;
    }
    const double m2 = m * m;
    // 1/(12m) - 1/(360 m^3) + 1/(1260 m^5) - 1/(1680 m^7)
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * m2) / m2) / m2) / m2) / m;
}

// bd0(x, np) = x ln(x/np) + np - x, evaluated without cancellation (Loader).
double bd0(double x, double np) {
    if (std::abs(x - np) < 0.1 * (x + np)) {
        const double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2.0 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double s1 = s + ej / (2.0 * j + 1.0);
            if (s1 == s) return s1;
            s = s1;
        }
    }
    return x * std::log(x / np) + np - x;
}

// Continued fraction for the incomplete beta function (modified Lentz).
// Valid (rapidly convergent) for x < (a+1)/(a+b+2).
double betacf(double a, double b, double x) {
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    constexpr int kMaxIter = 20000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta: a, b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x must be in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    const double lfront = a * std::log(x) + b * std::log1p(-x) - lbeta;
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(lfront) / a * betacf(a, b, x);
    }
    return 1.0 - std::exp(lfront) / b * betacf(b, a, 1.0 - x);
}

double binomial_log_pmf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("binomial_log_pmf: need 0 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_log_pmf: p must be in [0, 1]");
    const double q = 1.0 - p;
    if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
    if (k == 0) return static_cast<double>(n) * std::log1p(-p);
    if (k == n) return static_cast<double>(n) * std::log(p);
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    const double nk = nd - kd;
    return stirlerr(nd) - stirlerr(kd) - stirlerr(nk) - bd0(kd, nd * p) - bd0(nk, nd * q) +
           0.5 * std::log(nd / (2.0 * M_PI * kd * nk));
}

double binomial_cdf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("binomial_cdf: need 0 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_cdf: p must be in [0, 1]");
    if (k == n) return 1.0;
    if (p == 0.0) return 1.0;
    if (p == 1.0) return 0.0;
    if (k == 0) return std::exp(static_cast<double>(n) * std::log1p(-p));
    // F(k) = I_{1-p}(n-k, k+1). The two continued-fraction fronts reduce to
    // p * pmf(k) and (1-p) * pmf(k+1), which binomial_log_pmf evaluates without
    // the lgamma cancellation that ruins the generic prefactor at large n.
    const double z = 1.0 - p;
    const double a = static_cast<double>(n - k);
    const double b = static_cast<double>(k + 1);
    if (z < (a + 1.0) / (a + b + 2.0)) {
        const double front = std::exp(std::log(p) + binomial_log_pmf(k, n, p));
        return front * betacf(a, b, z);
    }
    const double front = std::exp(std::log1p(-p) + binomial_log_pmf(k + 1, n, p));
    const double tail = front * betacf(b, a, p);
    return tail >= 1.0 ? 0.0 : 1.0 - tail;
}

double binomial_sf(std::int64_t k, std::int64_t n, double p) {
    if (k < 0 || n < 0 || k > n) throw std::domain_error("binomial_sf: need 0 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_sf: p must be in [0, 1]");
    if (k == n) return 0.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    if (k == n - 1) return std::exp(static_cast<double>(n) * std::log(p));
    // P(X > k) = I_p(k+1, n-k), the mirror image of binomial_cdf
    const double a = static_cast<double>(k + 1);
    const double b = static_cast<double>(n - k);
    if (p < (a + 1.0) / (a + b + 2.0)) {
        const double front = std::exp(std::log1p(-p) + binomial_log_pmf(k + 1, n, p));
        return front * betacf(a, b, p);
    }
    const double front = std::exp(std::log(p) + binomial_log_pmf(k, n, p));
    const double head = front * betacf(b, a, 1.0 - p);
    return head >= 1.0 ? 0.0 : 1.0 - head;
}

}  // namespace spade
