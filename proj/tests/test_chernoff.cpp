#include <cmath>
#include <stdexcept>
#include <vector>
#include <random>

#include "doctest.h"
#include "spade/chernoff.hpp"
#include "spade/crosstalk.hpp"
#include "spade/montecarlo.hpp"

using namespace spade;

namespace {

Eigen::VectorXd make_dist(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const double x : values) v[i++] = x;
    return v;
}

Eigen::VectorXd random_dist(std::mt19937& gen, int size) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) v[i] = u(gen);
    return v / v.sum();
}

// Dense grid-search oracle for the Chernoff minimization.
double grid_search_xi(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1, int points) {
    double best = 1.0;
    for (int i = 0; i <= points; ++i) {
        best = std::min(best, q_s(p0, p1, static_cast<double>(i) / points));
    }
    return -std::log(best);
}

}  // namespace

TEST_CASE("q_s endpoint conventions and hand values") {
    const auto point = make_dist({1.0, 0.0});
    const auto fair = make_dist({0.5, 0.5});
    CHECK(q_s(fair, fair, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(q_s(point, fair, 0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(q_s(point, fair, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_s(point, fair, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(q_s(point, fair, -0.1), std::domain_error);
    CHECK_THROWS_AS(q_s(point, fair, 1.1), std::domain_error);
}

TEST_CASE("q_s is continuous at the endpoints") {
    const auto point = make_dist({1.0, 0.0});
    const auto fair = make_dist({0.5, 0.5});
    CHECK(q_s(point, fair, 1e-12) == doctest::Approx(q_s(point, fair, 0.0)).epsilon(1e-9));
    CHECK(q_s(point, fair, 1.0 - 1e-12) == doctest::Approx(q_s(point, fair, 1.0)).epsilon(1e-9));
}

TEST_CASE("ln q_s is convex in s") {
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p0 = random_dist(gen, 5);
        const auto p1 = random_dist(gen, 5);
        const double s1 = u01(gen), s2 = u01(gen), lam = u01(gen);
        const double lhs = std::log(q_s(p0, p1, lam * s1 + (1.0 - lam) * s2));
        const double rhs = lam * std::log(q_s(p0, p1, s1)) + (1.0 - lam) * std::log(q_s(p0, p1, s2));
        CHECK(lhs <= rhs + 1e-12);
    }
}

TEST_CASE("chernoff_exponent on coinciding distributions is exactly zero") {
    const auto p = make_dist({0.2, 0.3, 0.5});
    const auto result = chernoff_exponent(p, p, 1e-10);
    CHECK(result.xi == 0.0);
}

TEST_CASE("chernoff_exponent identity crosstalk closed form") {
    const auto identity = identity_crosstalk(2);
    const auto null_dist = mode_probabilities(identity, 0.0, 2);
    SUBCASE("x = 0.1 with minimizer at the boundary") {
        const auto result = chernoff_exponent(null_dist, mode_probabilities(identity, 0.1, 2));
        CHECK(result.xi == doctest::Approx(0.009950330853168092).epsilon(1e-9));
        CHECK(result.s_min < 1e-6);
    }
    SUBCASE("xi = ln(1 + x^2) across the sub-Rayleigh range") {
        for (double x = 0.05; x <= 1.0; x += 0.121) {
            const auto result = chernoff_exponent(null_dist, mode_probabilities(identity, x, 2));
            CHECK(std::abs(result.xi - std::log1p(x * x)) < 1e-9);
        }
    }
}

TEST_CASE("chernoff_exponent matches the small-separation branch for uniform crosstalk") {
    const auto uniform = uniform_crosstalk(2, 0.0033);
    const auto result = chernoff_exponent(mode_probabilities(uniform, 0.0, 2),
                                          mode_probabilities(uniform, 0.01, 2));
    const double branch = 1e-8 / (8.0 * 0.0033);
    CHECK(std::abs(result.xi - branch) / branch < 0.10);
    CHECK(result.s_min == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("chernoff_exponent agrees with a dense grid search") {
    std::mt19937 gen(33);
    for (int trial = 0; trial < 12; ++trial) {
        const auto p0 = random_dist(gen, 4);
        const auto p1 = random_dist(gen, 4);
        const auto result = chernoff_exponent(p0, p1, 1e-10);
        const double oracle = grid_search_xi(p0, p1, 100000);
        CHECK(std::abs(result.xi - oracle) < 1e-9);
    }
}

TEST_CASE("quantum bound dominates SPADE exponents") {
    const auto uniform = uniform_crosstalk(2, 0.005);
    const auto random_matrix = random_crosstalk(2, 0.002, 5);
    for (const auto* matrix : {&uniform, &random_matrix}) {
        const auto null_dist = mode_probabilities(*matrix, 0.0, 2);
        for (double x = 0.02; x <= 0.3; x += 0.04) {
            const auto result = chernoff_exponent(null_dist, mode_probabilities(*matrix, x, 2));
            CHECK(result.xi <= x * x + 1e-9);
        }
    }
}

TEST_CASE("spade_chernoff_asymptotic") {
    SUBCASE("small-separation branch") {
        const auto result = spade_chernoff_asymptotic(0.01, 0.0033, AsymptoticBranch::x_much_less);
        CHECK(result.xi == doctest::Approx(3.7878787878787879e-07).epsilon(1e-12));
        CHECK(result.s_min == 0.5);
    }
    SUBCASE("large-separation branch") {
        const auto result = spade_chernoff_asymptotic(0.3, 1e-4, AsymptoticBranch::x_much_greater);
        CHECK(result.xi == doctest::Approx(0.07786387327024379).epsilon(1e-12));
        CHECK(result.s_min == doctest::Approx(0.2818529044504498).epsilon(1e-12));
    }
    SUBCASE("degenerate crosstalk") {
        CHECK_THROWS_AS(spade_chernoff_asymptotic(0.1, 0.0, AsymptoticBranch::x_much_less),
                        std::domain_error);
    }
    SUBCASE("slow-convergence guard near x ~ eps") {
        CHECK_THROWS_AS(spade_chernoff_asymptotic(0.01, 1e-4, AsymptoticBranch::x_much_greater),
                        std::domain_error);
    }
}

TEST_CASE("quantum_bound") {
    CHECK(quantum_bound(0.0).xi == 0.0);
    CHECK(quantum_bound(0.1).xi == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(quantum_bound(0.2).xi == doctest::Approx(4.0 * quantum_bound(0.1).xi).epsilon(1e-12));
}

TEST_CASE("direct imaging chernoff") {
    SUBCASE("coinciding sources give zero") {
        CHECK(direct_imaging_chernoff(0.0, 1e-8).xi == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
    SUBCASE("x = 0.2 stays within 15% of x^4") {
        const auto result = direct_imaging_chernoff(0.2, 1e-9);
        CHECK(std::abs(result.xi - 1.6e-3) / 1.6e-3 < 0.15);
    }
    SUBCASE("small separations approach the x^4 law with s_min near 1/2") {
        const auto result = direct_imaging_chernoff(0.05, 1e-9);
        const double asymptote = direct_imaging_chernoff_asymptotic(0.05).xi;
        CHECK(result.xi / asymptote == doctest::Approx(1.0).epsilon(0.02));
        CHECK(std::abs(result.s_min - 0.5) < 0.02);
    }
}

TEST_CASE("direct imaging asymptotic") {
    CHECK(direct_imaging_chernoff_asymptotic(0.0).xi == 0.0);
    CHECK(direct_imaging_chernoff_asymptotic(0.1).xi == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(direct_imaging_chernoff_asymptotic(0.1).s_min == 0.5);
}
