#include "shufflecast/model.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <charconv>
#include <cmath>
#include <nlohmann/json.hpp>

#include "shufflecast/errors.hpp"

namespace shufflecast {

namespace {

using nlohmann::json;

constexpr int kModelDocumentVersion = 1;

void check_config(const ParameterVector& config, std::size_t expected_dim) {
    if (config.dimension() != expected_dim) {
        throw DimensionMismatch("configuration has " + std::to_string(config.dimension()) +
                                " parameters, expected " + std::to_string(expected_dim));
    }
    for (int v : config.values) {
        if (v < 1) throw DimensionMismatch("parameter values must be >= 1");
    }
}

Eigen::RowVectorXd design_row(const ParameterVector& config, int degree) {
    const auto n = config.dimension();
    Eigen::RowVectorXd row(1 + static_cast<Eigen::Index>(n) * degree);
    row(0) = 1.0;
    Eigen::Index col = 1;
    for (std::size_t i = 0; i < n; ++i) {
        double power = 1.0;
        for (int j = 1; j <= degree; ++j) {
            power *= static_cast<double>(config.values[i]);
            row(col++) = power;
        }
    }
    return row;
}

}  // namespace

DesignMatrix build_design_matrix(const std::vector<ParameterVector>& configs, int degree) {
    if (configs.empty()) throw EmptyInput("build_design_matrix: no configurations");
    if (degree < 1) throw InconsistentDimension("degree must be >= 1");
    const std::size_t n = configs.front().dimension();
    if (n < 1) throw InconsistentDimension("configurations must have at least one parameter");
    for (const auto& c : configs) {
        if (c.dimension() != n) {
            throw InconsistentDimension("mixed parameter counts in configuration list");
        }
    }
    DesignMatrix dm;
    dm.degree = degree;
    dm.entries.resize(static_cast<Eigen::Index>(configs.size()),
                      1 + static_cast<Eigen::Index>(n) * degree);
    for (std::size_t k = 0; k < configs.size(); ++k) {
        dm.entries.row(static_cast<Eigen::Index>(k)) = design_row(configs[k], degree);
    }
    return dm;
}

PolynomialModel fit(const ProfileDataset& dataset, int degree, const FitOptions& options) {
    if (dataset.observations.empty()) throw EmptyInput("fit: empty dataset");

    std::vector<ParameterVector> configs;
    configs.reserve(dataset.observations.size());
    Eigen::VectorXd loads(static_cast<Eigen::Index>(dataset.observations.size()));
    for (std::size_t k = 0; k < dataset.observations.size(); ++k) {
        configs.push_back(dataset.observations[k].config);
        loads(static_cast<Eigen::Index>(k)) = dataset.observations[k].load;
    }

    const DesignMatrix dm = build_design_matrix(configs, degree);
    const Eigen::Index m = dm.entries.rows();
    const Eigen::Index cols = dm.entries.cols();
    const int num_params = static_cast<int>(configs.front().dimension());

    if (m < cols) {
        throw InsufficientData("fit: " + std::to_string(m) + " observations for " +
                               std::to_string(cols) + " coefficients (need M >= 1 + N*d)");
    }

    // Condition diagnostic on the raw matrix, in the original basis.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dm.entries);
    const auto& sv = svd.singularValues();
    const double condition =
        sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();

    // Center/scale all non-intercept columns before factorizing; the powers of
    // the parameters span several orders of magnitude otherwise.
    Eigen::MatrixXd work = dm.entries;
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(cols);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(cols);
    if (options.standardize) {
        for (Eigen::Index j = 1; j < cols; ++j) {
            const double mean = work.col(j).mean();
            const double sd = std::sqrt((work.col(j).array() - mean).square().sum() /
                                        static_cast<double>(m));
            shift(j) = mean;
            scale(j) = sd > 0.0 ? sd : 1.0;
            work.col(j) = (work.col(j).array() - mean) / scale(j);
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(work);
    qr.setThreshold(1e-10);
    if (qr.rank() < cols) {
        throw RankDeficient("fit: design matrix is rank deficient (rank " +
                            std::to_string(qr.rank()) + " of " + std::to_string(cols) + ")");
    }
    Eigen::VectorXd scaled_coeffs = qr.solve(loads);

    // Map back to the original basis: b_j = b'_j / s_j for j >= 1 and the
    // intercept absorbs the shifts.
    Eigen::VectorXd coeffs(cols);
    coeffs(0) = scaled_coeffs(0);
    for (Eigen::Index j = 1; j < cols; ++j) {
        coeffs(j) = scaled_coeffs(j) / scale(j);
        coeffs(0) -= coeffs(j) * shift(j);
    }

    for (Eigen::Index j = 0; j < cols; ++j) {
        if (!std::isfinite(coeffs(j))) throw RankDeficient("fit: non-finite coefficient");
    }

    PolynomialModel model;
    model.degree = degree;
    model.num_params = num_params;
    model.coefficients.assign(coeffs.data(), coeffs.data() + cols);
    model.param_names = default_param_names(num_params);
    model.fit_meta.num_observations = static_cast<std::size_t>(m);
    model.fit_meta.residual_sum_squares = (loads - dm.entries * coeffs).squaredNorm();
    model.fit_meta.condition = condition;
    return model;
}

double predict(const PolynomialModel& model, const ParameterVector& config) {
    check_config(config, static_cast<std::size_t>(model.num_params));
    const Eigen::RowVectorXd row = design_row(config, model.degree);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        sum += row(j) * model.coefficients[static_cast<std::size_t>(j)];
    }
    return sum;
}

std::vector<std::string> default_param_names(int num_params) {
    if (num_params == 2) return {"maps", "reduces"};
    std::vector<std::string> names;
    for (int i = 1; i <= num_params; ++i) names.push_back("p" + std::to_string(i));
    return names;
}

std::string save_model(const PolynomialModel& model) {
    json doc;
    doc["version"] = kModelDocumentVersion;
    doc["degree"] = model.degree;
    doc["num_params"] = model.num_params;
    doc["param_names"] = model.param_names;
    doc["coefficients"] = model.coefficients;
    doc["fit_meta"] = {
        {"num_observations", model.fit_meta.num_observations},
        {"residual_sum_squares", model.fit_meta.residual_sum_squares},
        {"condition", model.fit_meta.condition},
    };
    return doc.dump(2) + "\n";
}

PolynomialModel load_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model document: ") + e.what());
    }
    auto require = [&](const char* field) -> const json& {
        if (!doc.contains(field)) {
            throw ParseError(std::string("model document: missing field '") + field + "'");
        }
        return doc.at(field);
    };
    const int version = require("version").get<int>();
    if (version != kModelDocumentVersion) {
        throw VersionMismatch("model document version " + std::to_string(version) +
                              " is not supported (expected " +
                              std::to_string(kModelDocumentVersion) + ")");
    }
    PolynomialModel model;
    try {
        model.degree = require("degree").get<int>();
        model.num_params = require("num_params").get<int>();
        model.param_names = require("param_names").get<std::vector<std::string>>();
        model.coefficients = require("coefficients").get<std::vector<double>>();
        if (doc.contains("fit_meta")) {
            const auto& fm = doc.at("fit_meta");
            model.fit_meta.num_observations = fm.value("num_observations", std::size_t{0});
            model.fit_meta.residual_sum_squares = fm.value("residual_sum_squares", 0.0);
            model.fit_meta.condition = fm.value("condition", 0.0);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("model document: ") + e.what());
    }
    if (model.degree < 1 || model.num_params < 1) {
        throw ParseError("model document: degree and num_params must be >= 1");
    }
    const std::size_t expected = 1 + static_cast<std::size_t>(model.num_params) * model.degree;
    if (model.coefficients.size() != expected) {
        throw ParseError("model document: coefficient count " +
                         std::to_string(model.coefficients.size()) + " != 1 + N*d = " +
                         std::to_string(expected));
    }
    if (model.param_names.size() != static_cast<std::size_t>(model.num_params)) {
        throw ParseError("model document: param_names length != num_params");
    }
    return model;
}

}  // namespace shufflecast
