#include <algorithm>
#include <cmath>
#include <doctest.h>
#include <random>

#include "oracles.hpp"
#include "shufflecast/errors.hpp"
#include "shufflecast/model.hpp"

using namespace shufflecast;

namespace {

ProfileDataset grid_dataset(const std::vector<int>& values,
                            const std::function<double(int, int)>& load_fn) {
    ProfileDataset dataset;
    dataset.input_bytes = 1;
    for (int m : values) {
        for (int r : values) {
            dataset.observations.push_back({ParameterVector(m, r), load_fn(m, r)});
        }
    }
    return dataset;
}

const std::vector<int> kPaperGrid = {4, 8, 12, 16, 20, 24, 28, 32};

}  // namespace

TEST_CASE("design matrix layout") {
    const DesignMatrix dm = build_design_matrix({ParameterVector(4, 8)}, 3);
    REQUIRE(dm.rows() == 1);
    REQUIRE(dm.cols() == 7);
    const double expected[] = {1, 4, 16, 64, 8, 64, 512};
    for (int j = 0; j < 7; ++j) CHECK(dm.entries(0, j) == expected[j]);
}

TEST_CASE("design matrix degree-1 collapse") {
    const DesignMatrix dm = build_design_matrix({ParameterVector(2, 3)}, 1);
    REQUIRE(dm.cols() == 3);
    CHECK(dm.entries(0, 0) == 1);
    CHECK(dm.entries(0, 1) == 2);
    CHECK(dm.entries(0, 2) == 3);
}

TEST_CASE("design matrix rejects empty and mixed inputs") {
    CHECK_THROWS_AS(build_design_matrix({}, 3), EmptyInput);
    CHECK_THROWS_AS(
        build_design_matrix({ParameterVector(4, 8), ParameterVector({1, 2, 3})}, 3),
        InconsistentDimension);
}

TEST_CASE("fit interpolates noiseless in-model data") {
    const auto dataset =
        grid_dataset(kPaperGrid, [](int m, int r) { return 2.0 + 3.0 * m + 0.5 * r * r; });
    const PolynomialModel model = fit(dataset, 3);
    const std::vector<double> expected = {2, 3, 0, 0, 0, 0.5, 0};
    REQUIRE(model.coefficients.size() == 7);
    for (std::size_t j = 0; j < 7; ++j) {
        CHECK(std::abs(model.coefficients[j] - expected[j]) <= 1e-6);
    }
    CHECK(model.fit_meta.num_observations == 64);
}

TEST_CASE("fit of constant data yields an intercept-only model") {
    const auto dataset = grid_dataset(kPaperGrid, [](int, int) { return 7.0; });
    const PolynomialModel model = fit(dataset, 3);
    CHECK(std::abs(model.coefficients[0] - 7.0) <= 1e-9);
    for (std::size_t j = 1; j < 7; ++j) {
        CHECK(std::abs(model.coefficients[j]) <= 1e-9);
    }
}

TEST_CASE("fit rejects too-small datasets") {
    ProfileDataset dataset;
    dataset.observations = {{ParameterVector(4, 4), 1.0},
                            {ParameterVector(4, 8), 2.0},
                            {ParameterVector(8, 4), 3.0}};
    CHECK_THROWS_AS(fit(dataset, 3), InsufficientData);
}

TEST_CASE("fit reports rank deficiency") {
    // Every configuration identical: all power columns are constant multiples
    // of the intercept column.
    ProfileDataset dataset;
    for (int k = 0; k < 10; ++k) dataset.observations.push_back({ParameterVector(4, 4), 1.0});
    CHECK_THROWS_AS(fit(dataset, 3), RankDeficient);
}

TEST_CASE("predict evaluates the polynomial") {
    PolynomialModel model;
    model.degree = 3;
    model.num_params = 2;
    model.param_names = default_param_names(2);

    SUBCASE("intercept-only") {
        model.coefficients = {5, 0, 0, 0, 0, 0, 0};
        CHECK(predict(model, ParameterVector(17, 29)) == 5.0);
    }
    SUBCASE("single linear term") {
        model.coefficients = {0, 1, 0, 0, 0, 0, 0};
        CHECK(predict(model, ParameterVector(7, 13)) == 7.0);
    }
    SUBCASE("mixed terms") {
        model.coefficients = {2, 3, 0, 0, 0, 0.5, 0};
        // 2 + 3*10 + 0.5*4^2
        CHECK(predict(model, ParameterVector(10, 4)) == doctest::Approx(40.0));
    }
    SUBCASE("dimension mismatch") {
        model.coefficients = {5, 0, 0, 0, 0, 0, 0};
        CHECK_THROWS_AS(predict(model, ParameterVector({4})), DimensionMismatch);
    }
}

TEST_CASE("model document round-trips bit-exactly") {
    PolynomialModel model;
    model.degree = 3;
    model.num_params = 2;
    model.coefficients = {2, 3, 0, 0, 0, 0.5, 0};
    model.param_names = default_param_names(2);
    model.fit_meta = {64, 1.25e-7, 1.8e5};

    const PolynomialModel loaded = load_model(save_model(model));
    CHECK(loaded.degree == model.degree);
    CHECK(loaded.num_params == model.num_params);
    CHECK(loaded.param_names == model.param_names);
    REQUIRE(loaded.coefficients.size() == model.coefficients.size());
    for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
        CHECK(loaded.coefficients[j] == model.coefficients[j]);
    }
    CHECK(loaded.fit_meta.residual_sum_squares == model.fit_meta.residual_sum_squares);
}

TEST_CASE("model document round-trips awkward doubles bit-exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1e12, 1e12);
    PolynomialModel model;
    model.degree = 3;
    model.num_params = 2;
    model.param_names = default_param_names(2);
    for (int j = 0; j < 7; ++j) model.coefficients.push_back(dist(rng) / 3.0);
    const PolynomialModel loaded = load_model(save_model(model));
    for (std::size_t j = 0; j < 7; ++j) CHECK(loaded.coefficients[j] == model.coefficients[j]);
}

TEST_CASE("model document parse failures") {
    CHECK_THROWS_AS(load_model("{\"version\":1,\"num_params\":2,\"param_names\":[\"a\",\"b\"],"
                               "\"coefficients\":[1,2,3]}"),
                    ParseError);  // missing degree
    CHECK_THROWS_AS(load_model("{\"version\":99,\"degree\":3,\"num_params\":2,"
                               "\"param_names\":[\"a\",\"b\"],\"coefficients\":[1]}"),
                    VersionMismatch);
    CHECK_THROWS_WITH_AS(
        load_model("{\"version\":1,\"degree\":3,\"num_params\":2,"
                   "\"param_names\":[\"a\",\"b\"],\"coefficients\":[1,2,3]}"),
        doctest::Contains("1 + N*d"), ParseError);
    CHECK_THROWS_AS(load_model("not json at all"), ParseError);
}

TEST_CASE("residual orthogonality of the least-squares fit") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> noise(-0.5, 0.5);
    auto dataset = grid_dataset(kPaperGrid, [&](int m, int r) {
        return 100.0 + 2.0 * m - 0.1 * r * r + noise(rng);
    });
    const PolynomialModel model = fit(dataset, 3);

    const std::vector<int> grid = kPaperGrid;
    std::vector<ParameterVector> configs;
    for (const auto& obs : dataset.observations) configs.push_back(obs.config);
    const DesignMatrix dm = build_design_matrix(configs, 3);
    Eigen::VectorXd loads(64), coeffs(7);
    for (int k = 0; k < 64; ++k) loads(k) = dataset.observations[k].load;
    for (int j = 0; j < 7; ++j) coeffs(j) = model.coefficients[j];
    const Eigen::VectorXd gradient = dm.entries.transpose() * (loads - dm.entries * coeffs);
    const double scale = (dm.entries.transpose() * loads).norm();
    CHECK(gradient.norm() <= 1e-6 * scale);
}

TEST_CASE("fit matches the normal-equation oracle on well-conditioned data") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coeff_dist(-2.0, 2.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> truth(7);
        for (auto& c : truth) c = coeff_dist(rng);
        std::vector<std::vector<int>> raw_configs;
        ProfileDataset dataset;
        dataset.input_bytes = 1;
        std::vector<double> loads;
        for (int m : kPaperGrid) {
            for (int r : kPaperGrid) {
                double y = truth[0];
                double pm = 1.0, pr = 1.0;
                for (int j = 1; j <= 3; ++j) {
                    pm *= m;
                    pr *= r;
                    y += truth[j] * pm + truth[3 + j] * pr;
                }
                y += noise(rng) * 0.01 * std::abs(y);
                raw_configs.push_back({m, r});
                dataset.observations.push_back({ParameterVector(m, r), y});
                loads.push_back(y);
            }
        }
        const PolynomialModel model = fit(dataset, 3);
        REQUIRE(model.fit_meta.condition < 1e8);
        const auto oracle = oracles::normal_equations_fit(raw_configs, loads, 3);
        for (std::size_t j = 0; j < 7; ++j) {
            const double denom = std::max(std::abs(oracle[j]), 1e-12);
            CHECK(std::abs(model.coefficients[j] - oracle[j]) / denom <= 1e-6);
        }
    }
}

TEST_CASE("fit recovers exact coefficients from in-model loads") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coeff_dist(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> truth(7);
        for (auto& c : truth) c = coeff_dist(rng);
        PolynomialModel truth_model;
        truth_model.degree = 3;
        truth_model.num_params = 2;
        truth_model.coefficients = truth;
        truth_model.param_names = default_param_names(2);
        auto dataset = grid_dataset(
            kPaperGrid, [&](int m, int r) { return predict(truth_model, ParameterVector(m, r)); });
        const PolynomialModel model = fit(dataset, 3);
        for (std::size_t j = 0; j < 7; ++j) {
            CHECK(std::abs(model.coefficients[j] - truth[j]) <= 1e-6);
        }
    }
}

TEST_CASE("fitted coefficients are invariant under observation permutation") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> dist(1.0, 100.0);
    auto dataset = grid_dataset(kPaperGrid, [&](int, int) { return dist(rng); });
    const PolynomialModel base = fit(dataset, 3);

    auto shuffled = dataset;
    std::shuffle(shuffled.observations.begin(), shuffled.observations.end(), rng);
    const PolynomialModel permuted = fit(shuffled, 3);
    for (std::size_t j = 0; j < 7; ++j) {
        CHECK(std::abs(base.coefficients[j] - permuted.coefficients[j]) <= 1e-9);
    }
}

TEST_CASE("predict equals the design-row inner product") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::uniform_int_distribution<int> value(1, 40);
    PolynomialModel model;
    model.degree = 3;
    model.num_params = 2;
    model.param_names = default_param_names(2);
    for (int j = 0; j < 7; ++j) model.coefficients.push_back(dist(rng));
    for (int trial = 0; trial < 50; ++trial) {
        const ParameterVector config(value(rng), value(rng));
        const DesignMatrix dm = build_design_matrix({config}, 3);
        double inner = 0.0;
        for (int j = 0; j < 7; ++j) inner += dm.entries(0, j) * model.coefficients[j];
        CHECK(predict(model, config) == inner);
    }
}
