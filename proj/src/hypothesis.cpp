#include "spade/hypothesis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "spade/stats.hpp"

namespace spade {
namespace {

// shortest round-trip representation, for parameter labels
std::string format_value(double v) {
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, result.ptr);
}

// fixed 17 significant digits, for CSV data columns
std::string format_csv(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

}  // namespace

std::string test_name(const TestSpec& spec) {
    return std::visit(
        [](const auto& test) -> std::string {
            using T = std::decay_t<decltype(test)>;
            if constexpr (std::is_same_v<T, OriginalTest>) return "original";
            if constexpr (std::is_same_v<T, NaiveMeanTest>) return "naive";
            if constexpr (std::is_same_v<T, ZetaFamilyTest>) return "zeta";
            if constexpr (std::is_same_v<T, SemiSeparationTest>) return "semi";
            if constexpr (std::is_same_v<T, BinaryLrtTest>) return "binary";
            if constexpr (std::is_same_v<T, FullLrtTest>) return "full";
        },
        spec);
}

std::string test_params(const TestSpec& spec) {
    return std::visit(
        [](const auto& test) -> std::string {
            using T = std::decay_t<decltype(test)>;
            if constexpr (std::is_same_v<T, ZetaFamilyTest>) {
                return "c=" + format_value(test.c) + ";a=" + format_value(test.a);
            } else if constexpr (std::is_same_v<T, SemiSeparationTest>) {
                return "x_min=" + format_value(test.x_min);
            } else if constexpr (std::is_same_v<T, BinaryLrtTest>) {
                return "x=" + format_value(test.x);
            } else if constexpr (std::is_same_v<T, FullLrtTest>) {
                return "x=" + format_value(test.x);
            } else {
                return "";
            }
        },
        spec);
}

TestSpec parse_test_spec(const std::string& text) {
    const auto open = text.find('(');
    std::string name = open == std::string::npos ? text : text.substr(0, open);
    std::vector<double> args;
    if (open != std::string::npos) {
        const auto close = text.rfind(')');
        if (close == std::string::npos || close < open) {
            throw std::domain_error("test spec: unbalanced parentheses in '" + text + "'");
        }
        std::string body = text.substr(open + 1, close - open - 1);
        std::size_t pos = 0;
        while (pos < body.size()) {
            auto comma = body.find(',', pos);
            if (comma == std::string::npos) comma = body.size();
            const std::string token = body.substr(pos, comma - pos);
            try {
                args.push_back(std::stod(token));
            } catch (const std::exception&) {
                throw std::domain_error("test spec: bad numeric argument '" + token + "'");
            }
            pos = comma + 1;
        }
    }
    auto need = [&](std::size_t count) {
        if (args.size() != count) {
            throw std::domain_error("test spec '" + name + "' takes " + std::to_string(count) +
                                    " argument(s)");
        }
    };
    if (name == "original") {
        need(0);
        return OriginalTest{};
    }
    if (name == "naive") {
        need(0);
        return NaiveMeanTest{};
    }
    if (name == "zeta") {
        need(2);
        return ZetaFamilyTest{args[0], args[1]};
    }
    if (name == "semi") {
        need(1);
        return SemiSeparationTest{args[0]};
    }
    if (name == "binary") {
        need(1);
        return BinaryLrtTest{args[0]};
    }
    if (name == "full") {
        need(1);
        return FullLrtTest{args[0]};
    }
    throw std::domain_error("unknown test spec: '" + text + "'");
}

bool is_separation_independent_convergent(const ZetaFamilyTest& zeta) {
    return zeta.c > 0.0 && zeta.a > 0.5 && zeta.a < 1.0;
}

void validate(const CountsRecord& record) {
    if (record.d < 2) throw std::domain_error("CountsRecord: d must be >= 2");
    if (record.counts.size() != static_cast<std::size_t>(record.d * record.d)) {
        throw std::domain_error("CountsRecord: counts must have d^2 entries");
    }
    std::int64_t total = 0;
    for (const auto c : record.counts) {
        if (c < 0) throw std::domain_error("CountsRecord: counts must be non-negative");
        total += c;
    }
    if (total != record.total_n) throw std::domain_error("CountsRecord: counts must sum to total_n");
}

std::string to_string(ErrorMethod method) {
    switch (method) {
        case ErrorMethod::exact_binomial: return "exact_binomial";
        case ErrorMethod::gaussian: return "gaussian";
        case ErrorMethod::empirical: return "empirical";
    }
    throw std::logic_error("unknown error method");
}

std::string error_report_csv_row(const ErrorReport& report, const TestSpec& spec) {
    return std::to_string(report.n) + "," + format_csv(report.alpha) + "," +
           format_csv(report.beta) + "," + format_csv(report.pe) + "," +
           to_string(report.method) + "," + test_name(spec) + "," + test_params(spec);
}

double gamma_coefficient(const CrosstalkMatrix& crosstalk) {
    const int d = crosstalk.d;
    const int i10 = d;  // flat index of mode (1, 0)
    const double p0 = std::norm(crosstalk.entries(i10, 0));
    double gamma = std::norm(crosstalk.entries(i10, i10)) - p0;
    if (d >= 3) {
        const int i20 = 2 * d;
        gamma += std::sqrt(2.0) *
                 (crosstalk.entries(i10, 0) * std::conj(crosstalk.entries(i10, i20))).real();
    }
    return gamma;
}

double small_sep_prob(double p0, double gamma, double x) {
    if (!(x >= 0.0)) throw std::domain_error("small_sep_prob: x must be non-negative");
    const double p = p0 + gamma * x * x;
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("small_sep_prob: p0 + gamma x^2 leaves [0, 1]");
    }
    return p;
}

double threshold(const TestSpec& spec, std::int64_t n, double p0, double gamma) {
    if (n < 0) throw std::domain_error("threshold: n must be non-negative");
    const double nd = static_cast<double>(n);
    return std::visit(
        [&](const auto& test) -> double {
            using T = std::decay_t<decltype(test)>;
            if constexpr (std::is_same_v<T, OriginalTest>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NaiveMeanTest>) {
                return nd * p0;
            } else if constexpr (std::is_same_v<T, ZetaFamilyTest>) {
                return nd * p0 + test.c * std::pow(nd, test.a);
            } else if constexpr (std::is_same_v<T, SemiSeparationTest>) {
                if (!(test.x_min > 0.0)) throw std::domain_error("semi test: x_min must be positive");
                return nd * (p0 + gamma * test.x_min * test.x_min / 2.0);
            } else if constexpr (std::is_same_v<T, BinaryLrtTest>) {
                if (!(test.x > 0.0)) throw std::domain_error("binary LRT: x must be positive");
                if (p0 == 0.0) return 0.0;  // ideal demultiplexer: original-test semantics
                if (!(p0 > 0.0 && p0 < 1.0)) throw std::domain_error("binary LRT: need p0 in (0, 1)");
                const double px = small_sep_prob(p0, gamma, test.x);
                if (!(px < 1.0) || px == p0) throw std::domain_error("binary LRT: degenerate p_x");
                const double num = std::log((1.0 - p0) / (1.0 - px));
                const double den = std::log(px * (1.0 - p0) / (p0 * (1.0 - px)));
                return nd * num / den;
            } else {
                throw std::domain_error("full LRT has no scalar threshold; use full_lrt_decide");
            }
        },
        spec);
}

Hypothesis decide(const TestSpec& spec, const CountsRecord& record, double p0, double gamma) {
    validate(record);
    const double tau = threshold(spec, record.total_n, p0, gamma);
    const std::int64_t n10 = record.counts[static_cast<std::size_t>(record.d)];
    return static_cast<double>(n10) > tau ? Hypothesis::H1 : Hypothesis::H0;
}

Hypothesis full_lrt_decide(const CountsRecord& record, double x_assumed,
                           const CrosstalkMatrix& crosstalk, int d) {
    if (!(x_assumed > 0.0)) throw std::domain_error("full_lrt_decide: x_assumed must be positive");
    validate(record);
    if (record.d != d || d != crosstalk.d) {
        throw std::domain_error("full_lrt_decide: dimension mismatch");
    }
    const ModeDistribution null_dist = mode_probabilities(crosstalk, 0.0, d);
    const ModeDistribution alt_dist = mode_probabilities(crosstalk, x_assumed, d);
    bool infinite_h1 = false;
    bool certain_h0 = false;
    double llr = 0.0;
    for (int k = 0; k < d * d; ++k) {
        const std::int64_t count = record.counts[static_cast<std::size_t>(k)];
        if (count == 0) continue;
        const double p_null = null_dist.probabilities[k];
        const double p_alt = alt_dist.probabilities[k];
        if (p_null == 0.0 && p_alt == 0.0) {
            throw std::domain_error("full_lrt_decide: counts in a mode impossible under both hypotheses");
        }
        if (p_null == 0.0) {
            infinite_h1 = true;
        } else if (p_alt == 0.0) {
            certain_h0 = true;
        } else {
            llr += static_cast<double>(count) * (std::log(p_alt) - std::log(p_null));
        }
    }
    if (infinite_h1) return Hypothesis::H1;
    if (certain_h0) return Hypothesis::H0;
    return llr > 0.0 ? Hypothesis::H1 : Hypothesis::H0;
}

ErrorReport error_probs_exact(const TestSpec& spec, std::int64_t n, double p0, double p_x,
                              double gamma, Priors priors) {
    if (!(p0 >= 0.0 && p0 <= 1.0 && p_x >= 0.0 && p_x <= 1.0)) {
        throw std::domain_error("error_probs_exact: probabilities must lie in [0, 1]");
    }
    const double tau = threshold(spec, n, p0, gamma);
    const double c_real = std::floor(tau);
    double alpha, beta;
    if (c_real >= static_cast<double>(n)) {
        alpha = 0.0;
        beta = 1.0;
    } else if (c_real < 0.0) {
        alpha = 1.0;
        beta = 0.0;
    } else {
        const auto c = static_cast<std::int64_t>(c_real);
        alpha = binomial_sf(c, n, p0);
        beta = binomial_cdf(c, n, p_x);
    }
    return {alpha, beta, priors.h0 * alpha + priors.h1 * beta, n, ErrorMethod::exact_binomial};
}

ErrorReport error_probs_gaussian(const TestSpec& spec, std::int64_t n, double p0, double p_x,
                                 double gamma, Priors priors) {
    if (n < 1) throw std::domain_error("error_probs_gaussian: n must be >= 1");
    if (!(p0 > 0.0 && p0 < 1.0 && p_x > 0.0 && p_x < 1.0)) {
        throw std::domain_error("error_probs_gaussian: degenerate variance (p in {0, 1})");
    }
    const double tau = threshold(spec, n, p0, gamma);
    const double nd = static_cast<double>(n);
    const double z_alpha = (tau - nd * p0) / std::sqrt(nd * p0 * (1.0 - p0));
    const double z_beta = (tau - nd * p_x) / std::sqrt(nd * p_x * (1.0 - p_x));
    const double alpha = normal_sf(z_alpha);
    const double beta = normal_cdf(z_beta);
    return {alpha, beta, priors.h0 * alpha + priors.h1 * beta, n, ErrorMethod::gaussian};
}

std::string to_string(LimitTag tag) {
    switch (tag) {
        case LimitTag::zero: return "zero";
        case LimitTag::quarter: return "quarter";
        case LimitTag::half: return "half";
        case LimitTag::one: return "one";
        case LimitTag::x_dependent: return "x_dependent";
    }
    throw std::logic_error("unknown limit tag");
}

namespace {

// A threshold growing like eta * N beyond N p0 beats the signal iff eta < gamma x^2.
LimitTag classify_linear(double eta, double gamma, double x) {
    if (!(x > 0.0)) return LimitTag::x_dependent;
    const double signal = gamma * x * x;
    if (eta < signal) return LimitTag::zero;
    if (eta > signal) return LimitTag::one;
    return LimitTag::quarter;
}

}  // namespace

LimitTag asymptotic_classification(const TestSpec& spec, double p0, double gamma, double x) {
    return std::visit(
        [&](const auto& test) -> LimitTag {
            using T = std::decay_t<decltype(test)>;
            if constexpr (std::is_same_v<T, OriginalTest>) {
                return LimitTag::half;
            } else if constexpr (std::is_same_v<T, NaiveMeanTest>) {
                return LimitTag::quarter;
            } else if constexpr (std::is_same_v<T, ZetaFamilyTest>) {
                if (test.c == 0.0) return LimitTag::quarter;  // reduces to the naive mean
                if (test.a <= 0.5) return LimitTag::half;
                if (test.c < 0.0) return LimitTag::one;
                if (test.a < 1.0) return LimitTag::zero;
                if (test.a == 1.0) return classify_linear(test.c, gamma, x);
                return LimitTag::one;  // super-linear positive threshold: beta -> 1
            } else if constexpr (std::is_same_v<T, SemiSeparationTest>) {
                return classify_linear(gamma * test.x_min * test.x_min / 2.0, gamma, x);
            } else if constexpr (std::is_same_v<T, BinaryLrtTest>) {
                const double eta = threshold(spec, 1, p0, gamma) - p0;
                return classify_linear(eta, gamma, x);
            } else {
                throw std::domain_error("asymptotic_classification: full LRT is not a thresholded test");
            }
        },
        spec);
}

std::int64_t plan_experiment(double x_min, double p0, double gamma, double pe_target) {
    if (!(pe_target > 0.0 && pe_target < 0.5)) {
        throw std::domain_error("plan_experiment: pe_target must lie in (0, 1/2)");
    }
    if (!(gamma > 0.0) || !(x_min > 0.0)) {
        throw std::domain_error("plan_experiment: need gamma > 0 and x_min > 0");
    }
    const double p_x = small_sep_prob(p0, gamma, x_min);
    const SemiSeparationTest test{x_min};
    const auto pe_exact = [&](std::int64_t n) {
        return error_probs_exact(test, n, p0, p_x, gamma).pe;
    };
    if (pe_exact(1) <= pe_target) return 1;

    constexpr std::int64_t kMaxN = std::int64_t{1} << 50;
    std::int64_t hi = 1;
    if (p0 > 0.0 && p0 < 1.0) {
        const auto pe_gauss = [&](std::int64_t n) {
            return error_probs_gaussian(test, n, p0, p_x, gamma).pe;
        };
        while (pe_gauss(hi) > pe_target) {
            hi *= 2;
            if (hi > kMaxN) {
                throw std::runtime_error("plan_experiment: required sample size exceeds 2^50");
            }
        }
        std::int64_t lo = hi / 2;
        while (lo + 1 < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (pe_gauss(mid) <= pe_target ? hi : lo) = mid;
        }
    } else {
        // Degenerate H0 variance: bisect on the exact Pe directly.
        while (pe_exact(hi) > pe_target) {
            hi *= 2;
            if (hi > kMaxN) {
                throw std::runtime_error("plan_experiment: required sample size exceeds 2^50");
            }
        }
        std::int64_t lo = hi / 2;
        while (lo + 1 < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (pe_exact(mid) <= pe_target ? hi : lo) = mid;
        }
    }

    // The exact Pe has a floor-induced sawtooth on top of the Gaussian trend,
    // so verify and walk forward if needed.
    std::int64_t n = hi;
    const std::int64_t cap = 2 * hi + 1000;
    while (pe_exact(n) > pe_target) {
        n += std::max<std::int64_t>(1, n / 1000);
        if (n > cap) {
            throw std::runtime_error("plan_experiment: non-monotonic exact tail, no crossing found");
        }
    }
    return n;
}

}  // namespace spade
