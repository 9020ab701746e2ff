#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

namespace spade {

enum class CrosstalkModel { identity, uniform, unitary_random, user_supplied };

std::string to_string(CrosstalkModel model);
CrosstalkModel crosstalk_model_from_string(const std::string& name);

/// Crosstalk matrix C acting on the flattened Hermite-Gauss mode basis.
///
/// Modes (n, m) with n, m < d are flattened row-major: (n, m) -> n*d + m.
/// This ordering is fixed; the JSON file format depends on it.
struct CrosstalkMatrix {
    int d = 2;                      // mode cutoff per axis; entries are d^2 x d^2
    CrosstalkModel model = CrosstalkModel::identity;
    Eigen::MatrixXcd entries;
    double realized_epsilon2 = 0.0;
    std::optional<double> mu;
    std::optional<double> target_epsilon2;
    std::optional<std::uint64_t> seed;
};

/// Mean squared magnitude of the off-diagonal entries:
/// eps^2 = (1 / (d^2 (d^2 - 1))) sum_{nm != kl} |C_{nm,kl}|^2.
double crosstalk_strength(const Eigen::MatrixXcd& entries);
double crosstalk_strength(const CrosstalkMatrix& matrix);

/// max |(C^dagger C - I)_{ij}|
double unitarity_defect(const Eigen::MatrixXcd& entries);

CrosstalkMatrix identity_crosstalk(int d);

/// Uniform crosstalk model: diagonal sqrt(1 - (d^2-1) eps^2), off-diagonal eps.
/// Rows have unit norm but are not orthogonal, so this model is not unitary.
/// Requires 0 <= (d^2 - 1) * epsilon2 <= 1.
CrosstalkMatrix uniform_crosstalk(int d, double epsilon2);

/// Wrap externally supplied entries (model tag user_supplied unless stated).
CrosstalkMatrix crosstalk_from_entries(int d, Eigen::MatrixXcd entries,
                                       CrosstalkModel model = CrosstalkModel::user_supplied);

/// Model-dependent consistency checks; throws std::domain_error on violation.
void validate(const CrosstalkMatrix& matrix);

std::string crosstalk_to_json(const CrosstalkMatrix& matrix);
CrosstalkMatrix crosstalk_from_json(const std::string& text);
void save_crosstalk(const CrosstalkMatrix& matrix, const std::string& path);
CrosstalkMatrix load_crosstalk(const std::string& path);

}  // namespace spade
