#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rankbench/behavioral.hpp"
#include "rankbench/design.hpp"

namespace rankbench {

struct OptimizerConfig {
    int max_iterations = 10000;
    double tolerance = 1e-8; // proximal-gradient mapping norm
    std::vector<double> lambda_grid = {0.001, 0.01, 0.1, 1.0};
    int cv_folds = 5;
    uint64_t cv_seed = 17;
};

struct RegressionModel {
    enum class Family { Binary, Ordinal };

    Family family = Family::Binary;
    std::vector<std::string> column_ids;
    std::map<std::string, double> weights; // zero-weight columns discarded
    double intercept = 0.0;                // binary only
    std::vector<double> cutpoints;         // ordinal only, strictly increasing
    double lambda = 0.0;
    double cv_score = 0.0;
    double mean_log_likelihood = 0.0;
    int iterations = 0;
    bool fell_back_to_binary = false;
    // Penalized mean log-likelihood per iteration; non-decreasing.
    std::vector<double> objective_trace;
};

// Smooth objectives (mean negative log-likelihood) with analytic gradients,
// exposed so the gradients can be checked against finite differences.
// Binary params: [w_0..w_{n-1}, intercept].
double binary_objective(const DesignMatrix& matrix, std::span<const double> params,
                        std::vector<double>* grad);
// Ordinal params: [w_0..w_{n-1}, theta_1, inc_2..inc_{K-1}]; targets 1..K.
double ordinal_objective(const DesignMatrix& matrix, int levels, std::span<const double> params,
                         std::vector<double>* grad);

// L1-penalized fits; lambda picked from the grid by k-fold cross-validation
// (single-element grids skip the CV pass). Throw FitError on degenerate
// targets or when the solver exhausts max_iterations.
RegressionModel fit_binary_logit(const DesignMatrix& matrix, const OptimizerConfig& cfg = {});
RegressionModel fit_ordinal_logit(const DesignMatrix& matrix, const OptimizerConfig& cfg = {});

// omega_hat = omega / sum |omega|. Intercepts and cutpoints never export.
WeightModel normalize_weights(const RegressionModel& model);

// Mean held-out score across folds: accuracy (binary) or NDCG of predicted
// within-group orderings (ordinal). Folds split by group with a seeded
// contiguous-shuffle; throws when there are fewer groups than folds.
double cross_validate(const DesignMatrix& matrix, RegressionModel::Family family, double lambda,
                      const OptimizerConfig& cfg = {});

// Fold index per row; split unit is the group id.
std::vector<int> fold_assignment(const DesignMatrix& matrix, int folds, uint64_t seed);

} // namespace rankbench
