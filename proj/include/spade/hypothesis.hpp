#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "spade/crosstalk.hpp"
#include "spade/modes.hpp"

namespace spade {

enum class Hypothesis { H0, H1 };

struct Priors {
    double h0 = 0.5;
    double h1 = 0.5;
};

// ---------------------------------------------------------------------------
// Decision rules. All thresholded rules accept H1 iff N_10 > tau(N); ties go
// to H0.
// ---------------------------------------------------------------------------

/// N_10 > 0. Quantum-optimal without crosstalk, coin-flip with any crosstalk.
struct OriginalTest {};

/// N_10 > N p0.
struct NaiveMeanTest {};

/// N_10 > N p0 + c N^a. Separation-independent with vanishing error for
/// c > 0 and 1/2 < a < 1.
struct ZetaFamilyTest {
    double c = 0.0;
    double a = 0.0;
};

/// N_10 > N (p0 + gamma x_min^2 / 2). Bounds the error for every true
/// separation x >= x_min.
struct SemiSeparationTest {
    double x_min = 0.0;
};

/// Exact two-outcome likelihood-ratio threshold at an assumed separation x,
/// with p_x taken from the small-separation expansion.
struct BinaryLrtTest {
    double x = 0.0;
};

/// Multimode likelihood-ratio product rule at an assumed separation x.
struct FullLrtTest {
    double x = 0.0;
};

using TestSpec =
    std::variant<OriginalTest, NaiveMeanTest, ZetaFamilyTest, SemiSeparationTest, BinaryLrtTest,
                 FullLrtTest>;

std::string test_name(const TestSpec& spec);    // short tag, e.g. "semi"
std::string test_params(const TestSpec& spec);  // e.g. "x_min=0.02"

/// Parse a CLI test description: original | naive | zeta(c,a) | semi(x_min) |
/// binary(x) | full(x).
TestSpec parse_test_spec(const std::string& text);

/// Whether a ZetaFamily threshold defines a separation-independent test with
/// vanishing error probability (c > 0 and 1/2 < a < 1).
bool is_separation_independent_convergent(const ZetaFamilyTest& zeta);

// ---------------------------------------------------------------------------

/// Photon counts per mode for one experimental run.
struct CountsRecord {
    std::vector<std::int64_t> counts;  // flat (n, m) -> n*d + m, size d^2
    std::int64_t total_n = 0;
    int d = 2;
};

void validate(const CountsRecord& record);

enum class ErrorMethod { exact_binomial, gaussian, empirical };

std::string to_string(ErrorMethod method);

struct ErrorReport {
    double alpha = 0.0;
    double beta = 0.0;
    double pe = 0.0;
    std::int64_t n = 0;
    ErrorMethod method = ErrorMethod::exact_binomial;
};

/// CSV row "N,alpha,beta,pe,method,test,params" (17 significant digits).
std::string error_report_csv_row(const ErrorReport& report, const TestSpec& spec);
inline const char* error_report_csv_header() { return "N,alpha,beta,pe,method,test,params"; }

// ---------------------------------------------------------------------------

/// Quadratic coefficient of p(10|x) = p0 + gamma x^2 + O(x^4):
/// gamma = |C_{10,10}|^2 - p0 + sqrt(2) Re(C_{10,00} conj(C_{10,20})),
/// with p0 = |C_{10,00}|^2 and the cross term absent for d = 2.
double gamma_coefficient(const CrosstalkMatrix& crosstalk);

/// Small-separation probability p_x = p0 + gamma x^2 (domain error if the
/// result leaves [0, 1]).
double small_sep_prob(double p0, double gamma, double x);

/// Decision threshold tau(N) of a thresholded variant (everything except the
/// full LRT). BinaryLrt degenerates to the original test when p0 = 0.
double threshold(const TestSpec& spec, std::int64_t n, double p0, double gamma);

/// H1 iff N_10 > tau(N); equality gives H0.
Hypothesis decide(const TestSpec& spec, const CountsRecord& record, double p0, double gamma);

/// Multimode likelihood-ratio decision, evaluated in the log domain. A mode
/// with counts but p(nm|0) = 0 forces H1 (infinite ratio); counts in a mode
/// that is impossible under both hypotheses are a model inconsistency.
Hypothesis full_lrt_decide(const CountsRecord& record, double x_assumed,
                           const CrosstalkMatrix& crosstalk, int d);

/// Exact binomial error probabilities with the floored threshold c = floor(tau):
/// alpha = 1 - F_{p0}(c), beta = F_{p_x}(c).
ErrorReport error_probs_exact(const TestSpec& spec, std::int64_t n, double p0, double p_x,
                              double gamma, Priors priors = {});

/// Central-limit approximation with the unfloored threshold.
ErrorReport error_probs_gaussian(const TestSpec& spec, std::int64_t n, double p0, double p_x,
                                 double gamma, Priors priors = {});

enum class LimitTag { zero, quarter, half, one, x_dependent };

std::string to_string(LimitTag tag);

/// Large-N limit of the total error probability for a thresholded test.
/// Linear thresholds resolve against the supplied x (pass x <= 0 when the
/// separation is unknown to get the x_dependent tag).
LimitTag asymptotic_classification(const TestSpec& spec, double p0, double gamma, double x);

/// Smallest N (up to search granularity) for which the semi-separation-
/// independent test at x_min keeps Pe <= pe_target; by the beta monotonicity
/// argument this N bounds the error for every true separation x >= x_min.
/// Doubling + bisection on the Gaussian Pe, then verified (and if needed
/// incremented) against the exact binomial Pe.
std::int64_t plan_experiment(double x_min, double p0, double gamma, double pe_target);

}  // namespace spade
