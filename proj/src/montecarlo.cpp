#include "spade/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spade/stats.hpp"

namespace spade {

double Rng::normal() {
    double u1 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<Eigen::MatrixXcd> gell_mann_basis(int dim) {
    if (dim < 2) throw std::domain_error("gell_mann_basis: dim must be >= 2");
    std::vector<Eigen::MatrixXcd> basis;
    basis.reserve(static_cast<std::size_t>(dim) * dim - 1);
    const std::complex<double> i_unit(0.0, 1.0);
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            Eigen::MatrixXcd sym = Eigen::MatrixXcd::Zero(dim, dim);
            sym(j, k) = 1.0;
            sym(k, j) = 1.0;
            basis.push_back(std::move(sym));
            Eigen::MatrixXcd antisym = Eigen::MatrixXcd::Zero(dim, dim);
            antisym(j, k) = -i_unit;
            antisym(k, j) = i_unit;
            basis.push_back(std::move(antisym));
        }
    }
    for (int l = 1; l < dim; ++l) {
        Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(dim, dim);
        for (int j = 0; j < l; ++j) diag(j, j) = 1.0;
        diag(l, l) = -static_cast<double>(l);
        diag *= std::sqrt(2.0 / (l * (l + 1.0)));
        basis.push_back(std::move(diag));
    }
    return basis;
}

CrosstalkMatrix random_crosstalk(int d, double epsilon2_target, std::uint64_t seed) {
    if (d < 2) throw std::domain_error("random_crosstalk: d must be >= 2");
    if (!(epsilon2_target >= 0.0)) {
        throw std::domain_error("random_crosstalk: epsilon2_target must be non-negative");
    }
    const int dim = d * d;
    const double generators = static_cast<double>(dim) * dim - 1.0;  // d^4 - 1
    const double mu = std::sqrt(epsilon2_target * generators / 2.0);

    CrosstalkMatrix matrix;
    matrix.d = d;
    matrix.model = CrosstalkModel::unitary_random;
    matrix.mu = mu;
    matrix.target_epsilon2 = epsilon2_target;
    matrix.seed = seed;

    if (mu == 0.0) {
        matrix.entries = Eigen::MatrixXcd::Identity(dim, dim);
        matrix.realized_epsilon2 = 0.0;
        return matrix;
    }

    Rng rng(seed);
    const auto basis = gell_mann_basis(dim);
    Eigen::VectorXd lambda(basis.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda[i] = rng.normal();
    lambda.normalize();

    Eigen::MatrixXcd generator = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        generator += (mu * lambda[static_cast<Eigen::Index>(i)]) * basis[i];
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(generator);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("random_crosstalk: eigendecomposition failed");
    }
    const std::complex<double> minus_i(0.0, -1.0);
    const Eigen::VectorXcd phases =
        (solver.eigenvalues().cast<std::complex<double>>().array() * minus_i).exp().matrix();
    matrix.entries =
        solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    matrix.realized_epsilon2 = crosstalk_strength(matrix.entries);
    validate(matrix);
    return matrix;
}

std::int64_t sample_binomial(Rng& rng, std::int64_t n, double p) {
    if (n < 0) throw std::domain_error("sample_binomial: n must be non-negative");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const double u = rng.uniform01();
    std::int64_t lo = 0;
    std::int64_t hi = n;
    if (binomial_cdf(0, n, p) >= u) return 0;
    // invariant: F(lo) < u <= F(hi)
    while (lo + 1 < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (binomial_cdf(mid, n, p) >= u ? hi : lo) = mid;
    }
    return hi;
}

CountsRecord sample_counts(const ModeDistribution& dist, std::int64_t n, Rng& rng) {
    if (n < 0) throw std::domain_error("sample_counts: n must be non-negative");
    const int modes = static_cast<int>(dist.probabilities.size());
    CountsRecord record;
    record.d = dist.d;
    record.total_n = n;
    record.counts.assign(static_cast<std::size_t>(modes), 0);
    std::int64_t remaining = n;
    double mass_left = 1.0;
    for (int k = 0; k < modes - 1 && remaining > 0; ++k) {
        const double pk = dist.probabilities[k];
        const double conditional = mass_left > 0.0 ? std::clamp(pk / mass_left, 0.0, 1.0) : 1.0;
        const std::int64_t draw = sample_binomial(rng, remaining, conditional);
        record.counts[static_cast<std::size_t>(k)] = draw;
        remaining -= draw;
        mass_left -= pk;
    }
    record.counts[static_cast<std::size_t>(modes - 1)] += remaining;
    return record;
}

CountsRecord sample_counts(const ModeDistribution& dist, std::int64_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_counts(dist, n, rng);
}

ErrorReport empirical_error_rates(const TestSpec& spec, const CrosstalkMatrix& crosstalk, double x,
                                  std::int64_t n, std::int64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::domain_error("empirical_error_rates: trials must be >= 1");
    const int d = crosstalk.d;
    const ModeDistribution null_dist = mode_probabilities(crosstalk, 0.0, d);
    const ModeDistribution alt_dist = mode_probabilities(crosstalk, x, d);
    const double p0 = null_dist.probabilities[d];
    const double gamma = gamma_coefficient(crosstalk);
    const bool full_lrt = std::holds_alternative<FullLrtTest>(spec);
    const double x_assumed = full_lrt ? std::get<FullLrtTest>(spec).x : 0.0;

    std::int64_t false_alarms = 0;
    std::int64_t misses = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        Rng rng(seed + static_cast<std::uint64_t>(t));
        const CountsRecord under_h0 = sample_counts(null_dist, n, rng);
        const CountsRecord under_h1 = sample_counts(alt_dist, n, rng);
        const Hypothesis d0 = full_lrt ? full_lrt_decide(under_h0, x_assumed, crosstalk, d)
                                       : decide(spec, under_h0, p0, gamma);
        const Hypothesis d1 = full_lrt ? full_lrt_decide(under_h1, x_assumed, crosstalk, d)
                                       : decide(spec, under_h1, p0, gamma);
        if (d0 == Hypothesis::H1) ++false_alarms;
        if (d1 == Hypothesis::H0) ++misses;
    }
    const double alpha = static_cast<double>(false_alarms) / static_cast<double>(trials);
    const double beta = static_cast<double>(misses) / static_cast<double>(trials);
    return {alpha, beta, 0.5 * alpha + 0.5 * beta, n, ErrorMethod::empirical};
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = (static_cast<double>(n) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SampleStats summarize(std::vector<double> values) {
    if (values.empty()) throw std::domain_error("summarize: empty sample");
    std::sort(values.begin(), values.end());
    SampleStats stats;
    stats.n_samples = static_cast<std::int64_t>(values.size());
    stats.median = quantile_sorted(values, 0.5);
    stats.q25 = quantile_sorted(values, 0.25);
    stats.q75 = quantile_sorted(values, 0.75);
    return stats;
}

}  // namespace spade
