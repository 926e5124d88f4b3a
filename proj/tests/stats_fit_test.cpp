#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "rankbench/error.hpp"
#include "rankbench/factor_analysis.hpp"
#include "rankbench/logistic.hpp"
#include "rankbench/rng.hpp"

using namespace rankbench;

namespace {

DesignMatrix random_binary_matrix(std::size_t rows, std::size_t cols, uint64_t seed,
                                  bool informative) {
    std::mt19937_64 rng(seed);
    DesignMatrix m;
    for (std::size_t c = 0; c < cols; ++c) m.column_ids.push_back("x" + std::to_string(c));
    for (std::size_t r = 0; r < rows; ++r) {
        double signal = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = normal_draw(rng);
            m.values.push_back(v);
            if (c == 0) signal = v;
        }
        const double p = informative ? 1.0 / (1.0 + std::exp(-2.0 * signal)) : 0.5;
        m.target.push_back(uniform_real(rng) < p ? 1 : 0);
        m.group.push_back("g" + std::to_string(r));
    }
    return m;
}

// Brute-force penalized-likelihood maximizer over a weight grid; independent
// of the gradient solver it checks.
std::pair<double, double> grid_search_two_column(const DesignMatrix& m, double lambda) {
    double best_w0 = 0.0;
    double best_w1 = 0.0;
    double best = -1e300;
    for (double w0 = -3.0; w0 <= 3.0 + 1e-9; w0 += 0.05) {
        for (double w1 = -3.0; w1 <= 3.0 + 1e-9; w1 += 0.05) {
            double loglik = 0.0;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                const double z = w0 * m.at(r, 0) + w1 * m.at(r, 1);
                const double y = static_cast<double>(m.target[r]);
                loglik -= std::log1p(std::exp(-std::fabs(z))) + std::max(z, 0.0) - y * z;
            }
            const double objective =
                loglik / static_cast<double>(m.rows()) - lambda * (std::fabs(w0) + std::fabs(w1));
            if (objective > best) {
                best = objective;
                best_w0 = w0;
                best_w1 = w1;
            }
        }
    }
    return {best_w0, best_w1};
}

double central_difference(const std::function<double(std::vector<double>&)>& f,
                          std::vector<double> params, std::size_t i, double h) {
    params[i] += h;
    const double hi = f(params);
    params[i] -= 2.0 * h;
    const double lo = f(params);
    return (hi - lo) / (2.0 * h);
}

DesignMatrix block_matrix(std::size_t rows, uint64_t seed) {
    // Two independent blocks of three features, each driven by one latent.
    std::mt19937_64 rng(seed);
    DesignMatrix m;
    m.column_ids = {"kd_ratio", "accuracy", "damage_dealt",
                    "survival", "walking_distance", "riding_distance"};
    for (std::size_t r = 0; r < rows; ++r) {
        const double f1 = normal_draw(rng);
        const double f2 = normal_draw(rng);
        for (int c = 0; c < 3; ++c) m.values.push_back(f1 + 0.8 * normal_draw(rng));
        for (int c = 0; c < 3; ++c) m.values.push_back(f2 + 0.8 * normal_draw(rng));
    }
    return m;
}

} // namespace

TEST_SUITE("stats_fit") {
    TEST_CASE("binary analytic gradient matches central finite differences") {
        for (uint64_t seed : {11ull, 12ull, 13ull}) {
            const DesignMatrix m = random_binary_matrix(60, 5, seed, true);
            std::mt19937_64 rng(seed * 7);
            std::vector<double> params(6);
            for (auto& p : params) p = normal_draw(rng) * 0.5;

            std::vector<double> grad;
            binary_objective(m, params, &grad);
            auto value = [&](std::vector<double>& p) {
                return binary_objective(m, p, nullptr);
            };
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double numeric = central_difference(value, params, i, 1e-5);
                const double denom = std::max(1e-8, std::fabs(numeric));
                CHECK(std::fabs(grad[i] - numeric) / denom < 1e-4);
            }
        }
    }

    TEST_CASE("ordinal analytic gradient matches central finite differences") {
        for (uint64_t seed : {21ull, 22ull, 23ull}) {
            std::mt19937_64 rng(seed);
            DesignMatrix m;
            const int levels = 4;
            for (int c = 0; c < 5; ++c) m.column_ids.push_back("x" + std::to_string(c));
            for (int r = 0; r < 80; ++r) {
                double signal = 0.0;
                for (int c = 0; c < 5; ++c) {
                    const double v = normal_draw(rng);
                    m.values.push_back(v);
                    if (c == 0) signal = v;
                }
                const double score = signal + 0.7 * normal_draw(rng);
                int level = 1;
                if (score > -0.8) level = 2;
                if (score > 0.0) level = 3;
                if (score > 0.8) level = 4;
                m.target.push_back(level);
                m.group.push_back("g" + std::to_string(r));
            }

            // params: 5 weights, theta1, 2 increments
            std::vector<double> params = {0.3, -0.2, 0.1, 0.0, 0.4, -0.9, 0.8, 0.7};
            std::vector<double> grad;
            ordinal_objective(m, levels, params, &grad);
            auto value = [&](std::vector<double>& p) {
                return ordinal_objective(m, levels, p, nullptr);
            };
            for (std::size_t i = 0; i < params.size(); ++i) {
                const double numeric = central_difference(value, params, i, 1e-5);
                const double denom = std::max(1e-8, std::fabs(numeric));
                CHECK(std::fabs(grad[i] - numeric) / denom < 1e-4);
            }
        }
    }

    TEST_CASE("independent targets shrink to zero weights under L1") {
        const DesignMatrix m = random_binary_matrix(400, 2, 31, false);
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.1};
        const RegressionModel model = fit_binary_logit(m, cfg);
        for (const auto& [id, w] : model.weights) CHECK(std::fabs(w) < 0.05);

        const auto [w0, w1] = grid_search_two_column(m, 0.1);
        CHECK(std::fabs(w0) <= 0.05 + 1e-9);
        CHECK(std::fabs(w1) <= 0.05 + 1e-9);
    }

    TEST_CASE("the solver lands on the grid-search optimum of the toy problem") {
        const DesignMatrix m = random_binary_matrix(400, 2, 32, true);
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.01};
        const RegressionModel model = fit_binary_logit(m, cfg);
        const auto [w0, w1] = grid_search_two_column(m, 0.01);

        // The intercept-free oracle scans a 0.05 lattice; agree within a step.
        const double fit_w0 = model.weights.count("x0") ? model.weights.at("x0") : 0.0;
        const double fit_w1 = model.weights.count("x1") ? model.weights.at("x1") : 0.0;
        CHECK(std::fabs(fit_w0 - w0) < 0.1);
        CHECK(std::fabs(fit_w1 - w1) < 0.1);
        CHECK(fit_w0 > 0.5); // strongly predictive column keeps its sign
    }

    TEST_CASE("penalized objective is non-decreasing across iterations") {
        const DesignMatrix m = random_binary_matrix(300, 4, 33, true);
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.01};
        const RegressionModel model = fit_binary_logit(m, cfg);
        REQUIRE(model.objective_trace.size() > 2);
        for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
            CHECK(model.objective_trace[i] >= model.objective_trace[i - 1] - 1e-10);
        }
    }

    TEST_CASE("ordinal fit recovers a thresholded feature with monotone cutpoints") {
        std::mt19937_64 rng(55);
        DesignMatrix m;
        m.column_ids = {"signal", "noise"};
        for (int r = 0; r < 600; ++r) {
            const double s = normal_draw(rng);
            m.values.push_back(s);
            m.values.push_back(normal_draw(rng));
            const double latent = 2.0 * s + 0.8 * normal_draw(rng);
            int level = 1;
            if (latent > -1.5) level = 2;
            if (latent > 0.0) level = 3;
            if (latent > 1.5) level = 4;
            m.target.push_back(level);
            m.group.push_back("g" + std::to_string(r / 4));
            m.observed_rank.push_back(5 - level);
            m.group_team_count.push_back(4);
        }
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.01};
        const RegressionModel model = fit_ordinal_logit(m, cfg);
        CHECK(model.family == RegressionModel::Family::Ordinal);
        REQUIRE(model.weights.count("signal") == 1);
        CHECK(model.weights.at("signal") > 0.5);
        REQUIRE(model.cutpoints.size() == 3);
        for (std::size_t i = 1; i < model.cutpoints.size(); ++i) {
            CHECK(model.cutpoints[i] > model.cutpoints[i - 1]);
        }
        for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
            CHECK(model.objective_trace[i] >= model.objective_trace[i - 1] - 1e-10);
        }

        // Exported weights carry no intercept or cutpoint entries.
        const WeightModel exported = normalize_weights(model);
        for (const auto& [term, w] : exported.terms) {
            CHECK((term == "signal" || term == "noise"));
        }
    }

    TEST_CASE("two target levels fall back to a binary fit") {
        DesignMatrix m = random_binary_matrix(200, 2, 66, true);
        for (auto& y : m.target) y += 3; // levels {3, 4}
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.01};
        const RegressionModel model = fit_ordinal_logit(m, cfg);
        CHECK(model.fell_back_to_binary);
        CHECK(model.family == RegressionModel::Family::Binary);
        CHECK(model.cutpoints.empty());
    }

    TEST_CASE("degenerate targets are rejected") {
        DesignMatrix single = random_binary_matrix(50, 2, 67, false);
        for (auto& y : single.target) y = 1;
        CHECK_THROWS_AS(fit_binary_logit(single), FitError);
        CHECK_THROWS_AS(fit_ordinal_logit(single), FitError);
    }

    TEST_CASE("normalize_weights scales by the absolute sum and keeps signs") {
        RegressionModel model;
        model.weights = {{"a", 2.0}, {"b", -1.0}, {"c", 1.0}};
        const WeightModel norm = normalize_weights(model);
        CHECK(norm.terms.at("a") == doctest::Approx(0.5));
        CHECK(norm.terms.at("b") == doctest::Approx(-0.25));
        CHECK(norm.terms.at("c") == doctest::Approx(0.25));

        RegressionModel lone;
        lone.weights = {{"a", -3.7}};
        CHECK(normalize_weights(lone).terms.at("a") == doctest::Approx(-1.0));

        RegressionModel empty;
        CHECK_THROWS_AS(normalize_weights(empty), FitError);
    }

    TEST_CASE("normalized weights always sum to one in absolute value") {
        std::mt19937_64 rng(77);
        for (int trial = 0; trial < 30; ++trial) {
            RegressionModel model;
            const int n = 1 + static_cast<int>(uniform_index(rng, 6));
            for (int i = 0; i < n; ++i) {
                model.weights["w" + std::to_string(i)] = 4.0 * uniform_real(rng) - 2.0;
            }
            bool all_zero = true;
            for (auto& [id, w] : model.weights) all_zero &= w == 0.0;
            if (all_zero) continue;
            const WeightModel norm = normalize_weights(model);
            double sum = 0.0;
            for (const auto& [id, w] : norm.terms) {
                sum += std::fabs(w);
                CHECK(w * model.weights.at(id) >= 0.0);
            }
            CHECK(std::fabs(sum - 1.0) < 1e-9);
        }
    }

    TEST_CASE("halo slayer table weights are already normalized") {
        RegressionModel model;
        model.weights = {{"skill", 0.330654},
                         {"experience", 0.320160},
                         {"kill_assist", 0.249425},
                         {"betrayal", -0.065018},
                         {"suicide", -0.034743}};
        double sum = 0.0;
        for (const auto& [id, w] : model.weights) sum += std::fabs(w);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        const WeightModel norm = normalize_weights(model);
        CHECK(norm.terms.at("betrayal") == doctest::Approx(-0.065018).epsilon(1e-6));
    }

    TEST_CASE("cross-validation scores a separable and a shuffled problem") {
        std::mt19937_64 rng(88);
        DesignMatrix separable;
        separable.column_ids = {"x"};
        for (int r = 0; r < 200; ++r) {
            const double v = r % 2 == 0 ? 1.0 + uniform_real(rng) : -1.0 - uniform_real(rng);
            separable.values.push_back(v);
            separable.target.push_back(v > 0.0 ? 1 : 0);
            separable.group.push_back("g" + std::to_string(r));
        }
        OptimizerConfig cfg;
        cfg.lambda_grid = {0.001};
        CHECK(cross_validate(separable, RegressionModel::Family::Binary, 0.001, cfg) ==
              doctest::Approx(1.0));

        const DesignMatrix shuffled = random_binary_matrix(1000, 3, 89, false);
        const double null_score =
            cross_validate(shuffled, RegressionModel::Family::Binary, 0.1, cfg);
        CHECK(null_score == doctest::Approx(0.5).epsilon(0.1)); // 0.5 +- 0.05 absolute
        CHECK(std::fabs(null_score - 0.5) < 0.05);
    }

    TEST_CASE("cross-validation refuses fewer groups than folds") {
        DesignMatrix m = random_binary_matrix(10, 2, 90, false);
        for (auto& g : m.group) g = "same";
        CHECK_THROWS_AS(cross_validate(m, RegressionModel::Family::Binary, 0.1, {}), ValidationError);
    }

    TEST_CASE("fold assignment is a contiguous shuffle over groups") {
        const DesignMatrix m = random_binary_matrix(100, 2, 91, false);
        const auto folds = fold_assignment(m, 5, 17);
        std::array<int, 5> counts{};
        for (int f : folds) counts[static_cast<std::size_t>(f)] += 1;
        for (int c : counts) CHECK(c == 20);
        CHECK(fold_assignment(m, 5, 17) == folds);       // deterministic
        CHECK(fold_assignment(m, 5, 18) != folds);       // seed-sensitive
    }

    TEST_CASE("two perfectly correlated features form one factor at half loadings") {
        std::mt19937_64 rng(101);
        DesignMatrix m;
        m.column_ids = {"kd_ratio", "accuracy"};
        for (int r = 0; r < 300; ++r) {
            const double x = normal_draw(rng);
            m.values.push_back(x);
            m.values.push_back(2.0 * x); // exactly collinear
        }
        const FactorFit fit = fit_factors(m);
        REQUIRE(fit.model.factors.size() == 1);
        CHECK(fit.model.factors[0].loadings.at(Feature::KdRatio) == doctest::Approx(0.5));
        CHECK(fit.model.factors[0].loadings.at(Feature::Accuracy) == doctest::Approx(0.5));
        CHECK(fit.eigenvalues[0] == doctest::Approx(2.0));
    }

    TEST_CASE("block-correlated features recover their blocks") {
        const DesignMatrix m = block_matrix(2000, 202);
        const FactorFit fit = fit_factors(m);
        REQUIRE(fit.model.factors.size() == 2);
        for (const auto& factor : fit.model.factors) {
            CHECK(factor.loadings.size() == 3);
            const bool first_block = factor.loadings.count(Feature::KdRatio) > 0;
            if (first_block) {
                CHECK(factor.loadings.count(Feature::Accuracy) == 1);
                CHECK(factor.loadings.count(Feature::DamageDealt) == 1);
            } else {
                CHECK(factor.loadings.count(Feature::Survival) == 1);
                CHECK(factor.loadings.count(Feature::WalkingDistance) == 1);
                CHECK(factor.loadings.count(Feature::RidingDistance) == 1);
            }
        }
    }

    TEST_CASE("oblique rotation preserves total communality") {
        const DesignMatrix m = block_matrix(1500, 203);
        const FactorFit fit = fit_factors(m);

        double before = 0.0;
        for (std::size_t i = 0; i < fit.unrotated.rows(); ++i) {
            for (std::size_t j = 0; j < fit.unrotated.cols(); ++j) {
                before += fit.unrotated.at(i, j) * fit.unrotated.at(i, j);
            }
        }
        // After oblique rotation the reproduced matrix is L * Phi * L'.
        const Matrix reproduced =
            fit.rotated * fit.factor_correlation * fit.rotated.transposed();
        double after = 0.0;
        for (std::size_t i = 0; i < reproduced.rows(); ++i) after += reproduced.at(i, i);
        CHECK(after == doctest::Approx(before).epsilon(1e-6));

        // The rotation is exactly L = A (T')^-1, so L T' must rebuild A
        // up to the per-factor sign convention.
        const RotationResult rot = oblimin_rotate(fit.unrotated, 0.0, 5000, 1e-6);
        const Matrix rebuilt = rot.loadings * rot.transform.transposed();
        for (std::size_t i = 0; i < rebuilt.rows(); ++i) {
            for (std::size_t j = 0; j < rebuilt.cols(); ++j) {
                CHECK(rebuilt.at(i, j) ==
                      doctest::Approx(fit.unrotated.at(i, j)).epsilon(1e-9));
            }
        }
        CHECK(rot.converged);
        // Factor correlations stay bounded and symmetric with unit diagonal.
        const Matrix phi = rot.transform.transposed() * rot.transform;
        for (std::size_t i = 0; i < phi.rows(); ++i) {
            CHECK(phi.at(i, i) == doctest::Approx(1.0));
            for (std::size_t j = 0; j < phi.cols(); ++j) {
                CHECK(std::fabs(phi.at(i, j)) <= 1.0 + 1e-12);
                CHECK(phi.at(i, j) == doctest::Approx(phi.at(j, i)));
            }
        }
    }

    TEST_CASE("factor extraction preconditions") {
        DesignMatrix narrow;
        narrow.column_ids = {"kd_ratio"};
        narrow.values = {1.0, 2.0, 3.0};
        CHECK_THROWS_AS(fit_factors(narrow), ValidationError);

        DesignMatrix thin;
        thin.column_ids = {"kd_ratio", "accuracy"};
        thin.values = {1.0, 2.0, 3.0, 4.0};
        CHECK_THROWS_AS(fit_factors(thin), ValidationError);

        DesignMatrix flat;
        flat.column_ids = {"kd_ratio", "accuracy"};
        for (int r = 0; r < 10; ++r) {
            flat.values.push_back(1.0);
            flat.values.push_back(static_cast<double>(r));
        }
        CHECK_THROWS_AS(fit_factors(flat), FitError); // zero-variance column
    }

    TEST_CASE("duplicated column splits weight without changing predictions") {
        const DesignMatrix base = random_binary_matrix(400, 1, 301, true);
        DesignMatrix doubled;
        doubled.column_ids = {"x0", "x0_copy"};
        for (std::size_t r = 0; r < base.rows(); ++r) {
            doubled.values.push_back(base.at(r, 0));
            doubled.values.push_back(base.at(r, 0));
        }
        doubled.target = base.target;
        doubled.group = base.group;

        OptimizerConfig cfg;
        cfg.lambda_grid = {0.01};
        const RegressionModel single = fit_binary_logit(base, cfg);
        const RegressionModel split = fit_binary_logit(doubled, cfg);

        const double w_single = single.weights.at("x0");
        double w_total = 0.0;
        for (const auto& [id, w] : split.weights) w_total += w;
        CHECK(w_total == doctest::Approx(w_single).epsilon(1e-3));
        CHECK(split.intercept == doctest::Approx(single.intercept).epsilon(1e-3));
    }
}
