#include "spade/crosstalk.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spade {

std::string to_string(CrosstalkModel model) {
    switch (model) {
        case CrosstalkModel::identity: return "identity";
        case CrosstalkModel::uniform: return "uniform";
        case CrosstalkModel::unitary_random: return "unitary_random";
        case CrosstalkModel::user_supplied: return "user_supplied";
    }
    throw std::logic_error("unknown crosstalk model");
}

CrosstalkModel crosstalk_model_from_string(const std::string& name) {
    if (name == "identity") return CrosstalkModel::identity;
    if (name == "uniform") return CrosstalkModel::uniform;
    if (name == "unitary_random") return CrosstalkModel::unitary_random;
    if (name == "user_supplied") return CrosstalkModel::user_supplied;
    throw std::domain_error("unknown crosstalk model: " + name);
}

double crosstalk_strength(const Eigen::MatrixXcd& entries) {
    const Eigen::Index k = entries.rows();
    if (k != entries.cols() || k < 2) throw std::domain_error("crosstalk matrix must be square, size >= 2");
    double off = entries.cwiseAbs2().sum() - entries.diagonal().cwiseAbs2().sum();
    return off / (static_cast<double>(k) * static_cast<double>(k - 1));
}

double crosstalk_strength(const CrosstalkMatrix& matrix) { return crosstalk_strength(matrix.entries); }

double unitarity_defect(const Eigen::MatrixXcd& entries) {
    const Eigen::Index k = entries.rows();
    return (entries.adjoint() * entries - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
}

namespace {

void check_dimension(int d) {
    if (d < 2) throw std::domain_error("crosstalk: mode cutoff d must be >= 2");
}

}  // namespace

CrosstalkMatrix identity_crosstalk(int d) {
    check_dimension(d);
    CrosstalkMatrix matrix;
    matrix.d = d;
    matrix.model = CrosstalkModel::identity;
    matrix.entries = Eigen::MatrixXcd::Identity(d * d, d * d);
    matrix.realized_epsilon2 = 0.0;
    return matrix;
}

CrosstalkMatrix uniform_crosstalk(int d, double epsilon2) {
    check_dimension(d);
    const int k = d * d;
    const double scaled = (k - 1) * epsilon2;
    if (!(epsilon2 >= 0.0) || scaled > 1.0) {
        throw std::domain_error("uniform crosstalk: need 0 <= (d^2 - 1) * epsilon2 <= 1");
    }
    CrosstalkMatrix matrix;
    matrix.d = d;
    matrix.model = CrosstalkModel::uniform;
    matrix.target_epsilon2 = epsilon2;
    matrix.entries = Eigen::MatrixXcd::Constant(k, k, std::sqrt(epsilon2));
    matrix.entries.diagonal().setConstant(std::sqrt(1.0 - scaled));
    matrix.realized_epsilon2 = crosstalk_strength(matrix.entries);
    return matrix;
}

CrosstalkMatrix crosstalk_from_entries(int d, Eigen::MatrixXcd entries, CrosstalkModel model) {
    check_dimension(d);
    CrosstalkMatrix matrix;
    matrix.d = d;
    matrix.model = model;
    matrix.entries = std::move(entries);
    matrix.realized_epsilon2 = crosstalk_strength(matrix.entries);
    validate(matrix);
    return matrix;
}

void validate(const CrosstalkMatrix& matrix) {
    check_dimension(matrix.d);
    const int k = matrix.d * matrix.d;
    if (matrix.entries.rows() != k || matrix.entries.cols() != k) {
        throw std::domain_error("crosstalk: entries must be d^2 x d^2");
    }
    if (std::abs(matrix.realized_epsilon2 - crosstalk_strength(matrix.entries)) > 1e-14) {
        throw std::domain_error("crosstalk: recorded strength does not match entries");
    }
    switch (matrix.model) {
        case CrosstalkModel::identity:
        case CrosstalkModel::unitary_random:
            if (unitarity_defect(matrix.entries) > 1e-12) {
                throw std::domain_error("crosstalk: matrix is not unitary");
            }
            break;
        case CrosstalkModel::uniform:
            for (int r = 0; r < k; ++r) {
                if (std::abs(matrix.entries.row(r).norm() - 1.0) > 1e-12) {
                    throw std::domain_error("crosstalk: uniform model rows must have unit norm");
                }
            }
            break;
        case CrosstalkModel::user_supplied:
            break;
    }
}

std::string crosstalk_to_json(const CrosstalkMatrix& matrix) {
    nlohmann::ordered_json j;
    j["d"] = matrix.d;
    j["model"] = to_string(matrix.model);
    j["seed"] = matrix.seed ? nlohmann::json(*matrix.seed) : nlohmann::json(nullptr);
    j["mu"] = matrix.mu ? nlohmann::json(*matrix.mu) : nlohmann::json(nullptr);
    j["target_epsilon2"] =
        matrix.target_epsilon2 ? nlohmann::json(*matrix.target_epsilon2) : nlohmann::json(nullptr);
    j["realized_epsilon2"] = matrix.realized_epsilon2;
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < matrix.entries.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < matrix.entries.cols(); ++c) {
            row.push_back({matrix.entries(r, c).real(), matrix.entries(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j.dump();
}

CrosstalkMatrix crosstalk_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CrosstalkMatrix matrix;
    matrix.d = j.at("d").get<int>();
    matrix.model = crosstalk_model_from_string(j.at("model").get<std::string>());
    if (!j.at("seed").is_null()) matrix.seed = j["seed"].get<std::uint64_t>();
    if (!j.at("mu").is_null()) matrix.mu = j["mu"].get<double>();
    if (!j.at("target_epsilon2").is_null()) matrix.target_epsilon2 = j["target_epsilon2"].get<double>();
    check_dimension(matrix.d);
    const int k = matrix.d * matrix.d;
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != k) throw std::domain_error("crosstalk json: wrong row count");
    matrix.entries.resize(k, k);
    for (int r = 0; r < k; ++r) {
        const auto& row = rows.at(r);
        if (static_cast<int>(row.size()) != k) throw std::domain_error("crosstalk json: wrong column count");
        for (int c = 0; c < k; ++c) {
            matrix.entries(r, c) = {row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>()};
        }
    }
    matrix.realized_epsilon2 = j.at("realized_epsilon2").get<double>();
    validate(matrix);
    return matrix;
}

void save_crosstalk(const CrosstalkMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << crosstalk_to_json(matrix) << '\n';
}

CrosstalkMatrix load_crosstalk(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return crosstalk_from_json(buffer.str());
}

}  // namespace spade
