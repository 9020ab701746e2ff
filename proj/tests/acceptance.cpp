// Acceptance suite: end-to-end checks of the numerical contracts, one
// PASS/FAIL line per criterion. Usage: acceptance_tests <path-to-spade-cli>
//
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "spade/chernoff.hpp"
#include "spade/crosstalk.hpp"
#include "spade/hypothesis.hpp"
#include "spade/modes.hpp"
#include "spade/montecarlo.hpp"
#include "spade/stats.hpp"

using namespace spade;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

std::vector<std::int64_t> default_n_grid() {
    std::vector<std::int64_t> out;
    const double la = std::log(1e2), lb = std::log(1e7);
    for (int i = 0; i < 26; ++i) {
        const auto n = static_cast<std::int64_t>(std::llround(std::exp(la + (lb - la) * i / 25)));
        if (out.empty() || n != out.back()) out.push_back(n);
    }
    return out;
}

double exact_p10(const CrosstalkMatrix& matrix, double x) {
    return mode_probabilities(matrix, x, matrix.d).probabilities[matrix.d];
}

// C1: identity crosstalk closed form and quantum-bound approach
void criterion_1() {
    const auto identity = identity_crosstalk(2);
    const auto null_dist = mode_probabilities(identity, 0.0, 2);
    double worst = 0.0;
    for (const double x : {0.05, 0.1, 0.3}) {
        const auto result = chernoff_exponent(null_dist, mode_probabilities(identity, x, 2));
        worst = std::max(worst, std::abs(result.xi - std::log1p(x * x)));
    }
    const double ratio = chernoff_exponent(null_dist, mode_probabilities(identity, 0.1, 2)).xi / 0.01;
    const bool ok = worst <= 1e-9 && ratio >= 0.95 && ratio <= 1.0;
    report("C1 ideal-case closed form xi = ln(1+x^2)", ok,
           "max |xi - ln(1+x^2)| = " + fmt(worst) + ", xi/x^2 at x=0.1: " + fmt(ratio));
}

// C2: small-separation law across a 500-matrix random ensemble
void criterion_2() {
    const auto start = std::chrono::steady_clock::now();
    const double x = 1e-3;
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto matrix = random_crosstalk(2, 0.0033, 20001 + i);
        const double p0 = std::norm(matrix.entries(2, 0));
        const auto result =
            chernoff_exponent(mode_probabilities(matrix, 0.0, 2), mode_probabilities(matrix, x, 2));
        const double ratio = result.xi / (x * x * x * x / (8.0 * p0));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = lo >= 0.9 && hi <= 1.1 && seconds < 60.0;
    report("C2 small-x regime across 500 random unitary crosstalks (seeds 20001..20500)", ok,
           "xi/(x^4/8p0) in [" + fmt(lo) + ", " + fmt(hi) + "], " + fmt(seconds) + " s");
}

// C3: large-separation branch value vs the exact exponent
void criterion_3() {
    const auto uniform = uniform_crosstalk(2, 1e-6);
    const auto result = chernoff_exponent(mode_probabilities(uniform, 0.0, 2),
                                          mode_probabilities(uniform, 0.3, 2));
    const double branch_value = 0.07786;
    const double rel = std::abs(result.xi - branch_value) / branch_value;
    const bool below_ideal = result.xi < std::log1p(0.09);
    const bool ok = rel <= 0.15 && below_ideal;
    report("C3 large-x branch consistency at uniform eps^2=1e-6, x=0.3", ok,
           "exact xi = " + fmt(result.xi) + ", |xi - 0.07786|/0.07786 = " + fmt(rel) +
               (below_ideal ? ", below ln(1+x^2)" : ", NOT below ln(1+x^2)"));
}

// C4: the original test is a coin flip under crosstalk
void criterion_4() {
    const auto uniform = uniform_crosstalk(2, 0.01);
    const auto report_exact =
        error_probs_exact(OriginalTest{}, 100000, 0.01, exact_p10(uniform, 0.05), 0.96);
    const bool ok = report_exact.pe >= 0.499 && report_exact.pe <= 0.5;
    report("C4 coin-flip collapse of the zero-threshold test", ok,
           "exact Pe(1e5) = " + fmt(report_exact.pe));
}

// C5: the naive mean test converges to Pe = 1/4
void criterion_5() {
    const auto uniform = uniform_crosstalk(2, 0.01);
    const auto gaussian =
        error_probs_gaussian(NaiveMeanTest{}, 100000000, 0.01, exact_p10(uniform, 0.05), 0.96);
    const bool ok = std::abs(gaussian.pe - 0.25) <= 1e-3;
    report("C5 quarter limit of the naive mean test", ok, "gaussian Pe(1e8) = " + fmt(gaussian.pe));
}

// C6: zeta-family convergence and ordering versus the binary LRT
void criterion_6() {
    const auto uniform = uniform_crosstalk(2, 0.01);
    const double p0 = 0.01;
    const double gamma = gamma_coefficient(uniform);
    const double px = exact_p10(uniform, 0.05);
    const ZetaFamilyTest zeta{0.01, 0.8};
    const BinaryLrtTest binary{0.05};
    const double pe_large = error_probs_exact(zeta, 1000000, p0, px, gamma).pe;
    bool ordering = true;
    for (const auto n : default_n_grid()) {
        const double pe_zeta = error_probs_exact(zeta, n, p0, px, gamma).pe;
        const double pe_binary = error_probs_exact(binary, n, p0, px, gamma).pe;
        if (pe_zeta < pe_binary) ordering = false;
    }
    const bool ok = pe_large < 1e-6 && ordering;
    report("C6 zeta-family convergence and ordering vs the binary LRT", ok,
           "Pe(1e6) = " + fmt(pe_large) + (ordering ? ", ordering holds" : ", ordering violated"));
}

// C7: semi-separation-independent error bound, exact inequality
void criterion_7() {
    const auto uniform = uniform_crosstalk(2, 0.01);
    const double p0 = 0.01;
    const double gamma = gamma_coefficient(uniform);
    const SemiSeparationTest test{0.02};
    const double px_min = exact_p10(uniform, 0.02);
    bool ok = true;
    for (const auto n : default_n_grid()) {
        const double bound = error_probs_exact(test, n, p0, px_min, gamma).pe;
        for (const double x : {0.03, 0.05, 0.10}) {
            const double pe = error_probs_exact(test, n, p0, exact_p10(uniform, x), gamma).pe;
            if (pe > bound) ok = false;
        }
    }
    report("C7 semi-test bound Pe(N, x) <= Pe(N, x_min) for x >= x_min", ok,
           ok ? "holds at every grid N with tolerance 0" : "violated");
}

// C8: binary LRT threshold equals the quadratic expansion to 1e-5 per photon
void criterion_8() {
    const double tau = threshold(BinaryLrtTest{0.02}, 1000000, 0.01, 0.96);
    const double gap = std::abs(tau / 1e6 - (0.01 + 0.96 * 0.02 * 0.02 / 2.0));
    const bool ok = gap <= 1e-5;
    report("C8 binary-LRT threshold equivalence with the quadratic form", ok,
           "|tau/N - (p0 + gamma x^2/2)| = " + fmt(gap));
}

// C9: cdf oracle equivalence and gaussian-exact consistency
void criterion_9() {
    double worst_cdf = 0.0;
    for (const std::int64_t n : {1, 2, 10, 100, 500, 1000, 2000}) {
        for (const double p : {1e-4, 1e-2, 0.5}) {
            const long double lp = std::log(static_cast<long double>(p));
            const long double lq = std::log1p(static_cast<long double>(-p));
            const long double lgn = std::lgammal(static_cast<long double>(n) + 1.0L);
            for (std::int64_t k = 0; k <= n; k += std::max<std::int64_t>(1, n / 37)) {
                long double direct = 0.0L;
                for (std::int64_t j = 0; j <= k; ++j) {
                    direct += std::exp(lgn - std::lgammal(static_cast<long double>(j) + 1.0L) -
                                       std::lgammal(static_cast<long double>(n - j) + 1.0L) +
                                       j * lp + (n - j) * lq);
                }
                direct = std::min(direct, 1.0L);
                worst_cdf = std::max(
                    worst_cdf,
                    std::abs(binomial_cdf(k, n, p) - static_cast<double>(direct)));
            }
        }
    }

    const auto uniform = uniform_crosstalk(2, 0.01);
    const double p0 = 0.01;
    const double gamma = gamma_coefficient(uniform);
    const double px = exact_p10(uniform, 0.02);
    const SemiSeparationTest test{0.02};
    double worst_gap = 0.0;
    for (const auto n : default_n_grid()) {
        if (n * p0 * (1.0 - p0) < 1000.0) continue;
        const auto exact = error_probs_exact(test, n, p0, px, gamma);
        const auto gauss = error_probs_gaussian(test, n, p0, px, gamma);
        worst_gap = std::max(worst_gap, std::abs(exact.alpha - gauss.alpha));
        worst_gap = std::max(worst_gap, std::abs(exact.beta - gauss.beta));
    }
    const bool ok = worst_cdf <= 1e-12 && worst_gap <= 0.005;
    report("C9 binomial-CDF oracle equivalence and gaussian consistency", ok,
           "max |cdf - summation| = " + fmt(worst_cdf) + ", max |exact - gaussian| = " +
               fmt(worst_gap) + " at N p(1-p) >= 1000");
}

// C10: random-matrix hygiene
void criterion_10() {
    double worst_defect = 0.0;
    double mean_strength = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto matrix = random_crosstalk(2, 1e-3, 1 + i);
        worst_defect = std::max(worst_defect, unitarity_defect(matrix.entries));
        mean_strength += matrix.realized_epsilon2;
    }
    mean_strength /= 1000.0;
    const double rel = std::abs(mean_strength - 1e-3) / 1e-3;
    const bool ok = worst_defect <= 1e-12 && rel <= 0.10;
    report("C10 random-matrix hygiene over 1000 draws", ok,
           "max unitarity defect = " + fmt(worst_defect) + ", mean eps^2 off target by " +
               fmt(100.0 * rel) + "%");
}

// C11: exact direct-imaging exponent against the x^4 law
void criterion_11() {
    const auto result = direct_imaging_chernoff(0.1, 1e-9);
    const double rel = std::abs(result.xi - 1e-4) / 1e-4;
    const bool ok = rel <= 0.05 && std::abs(result.s_min - 0.5) <= 0.02;
    report("C11 direct imaging at x=0.1", ok,
           "xi = " + fmt(result.xi) + " (" + fmt(100.0 * rel) + "% from 1e-4), s_min = " +
               fmt(result.s_min));
}

// C12: planner round trip with Monte Carlo verification
void criterion_12() {
    const auto uniform = uniform_crosstalk(2, 0.01);
    const double p0 = 0.01;
    const double gamma = gamma_coefficient(uniform);
    const std::int64_t n = plan_experiment(0.02, p0, gamma, 0.05);
    const double px_model = small_sep_prob(p0, gamma, 0.02);
    const SemiSeparationTest test{0.02};
    const double pe_at_n = error_probs_exact(test, n, p0, px_model, gamma).pe;
    const double pe_at_half = error_probs_exact(test, n / 2, p0, px_model, gamma).pe;

    const std::int64_t trials = 1500;
    const auto empirical = empirical_error_rates(test, uniform, 0.02, n, trials, 777);
    const double sigma = std::sqrt(empirical.alpha * (1.0 - empirical.alpha) / trials +
                                   empirical.beta * (1.0 - empirical.beta) / trials) /
                         2.0;
    const bool ok = pe_at_n <= 0.05 && pe_at_half > 0.05 && empirical.pe <= 0.05 + 3.0 * sigma;
    report("C12 planner round trip at x_min=0.02, target Pe = 0.05", ok,
           "N = " + std::to_string(n) + ", exact Pe(N) = " + fmt(pe_at_n) + ", Pe(N/2) = " +
               fmt(pe_at_half) + ", empirical Pe = " + fmt(empirical.pe) + " (3 sigma = " +
               fmt(3.0 * sigma) + ")");
}

// C13: byte-identical CLI reruns with fixed seeds
void criterion_13(const std::string& cli) {
    namespace fs = std::filesystem;
    const fs::path dir = "acceptance_tmp";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto shell = [&](const std::string& args, const std::string& stdout_name) {
        const std::string command = "\"" + cli + "\" " + args + " > " + (dir / stdout_name).string() +
                                    " 2> /dev/null";
        return std::system(command.c_str()) == 0;
    };
    auto slurp = [&](const std::string& name) {
        std::ifstream in(dir / name, std::ios::binary);
        std::stringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };

    bool ok = true;
    const std::string sweep = "chernoff --model unitary_random --epsilon2 0.0033 --samples 30 "
                              "--seed 9 --x-grid 5e-3:0.3:8:log --out ";
    ok &= shell(sweep + (dir / "a.csv").string(), "a_log.txt");
    ok &= shell(sweep + (dir / "b.csv").string(), "b_log.txt");
    ok &= !slurp("a.csv").empty() && slurp("a.csv") == slurp("b.csv");

    ok &= shell("plan --xmin 0.02 --epsilon2 0.01 --pe-max 0.05", "plan_a.json");
    ok &= shell("plan --xmin 0.02 --epsilon2 0.01 --pe-max 0.05", "plan_b.json");
    ok &= !slurp("plan_a.json").empty() && slurp("plan_a.json") == slurp("plan_b.json");

    const std::string sim = "simulate --model uniform --epsilon2 0.01 --test \"semi(0.02)\" "
                            "--x 0.05 --n 2000 --trials 400 --seed 3 --out ";
    ok &= shell(sim + (dir / "s1.csv").string(), "s1_log.txt");
    ok &= shell(sim + (dir / "s2.csv").string(), "s2_log.txt");
    ok &= !slurp("s1.csv").empty() && slurp("s1.csv") == slurp("s2.csv");

    report("C13 CLI determinism (byte-identical reruns)", ok,
           ok ? "chernoff sweep, plan JSON, and simulate CSV all reproduce" : "outputs differ");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance_tests <path-to-spade-cli>\n");
        return 64;
    }
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13(argv[1]);
    std::printf("%d of 13 criteria passed\n", 13 - g_failures);
    return g_failures;
}
