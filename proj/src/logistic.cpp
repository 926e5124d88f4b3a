#include "rankbench/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rankbench/error.hpp"
#include "rankbench/evaluate.hpp"
#include "rankbench/rng.hpp"

namespace rankbench {

namespace {

constexpr double kIncrementFloor = 1e-6;
constexpr double kProbFloor = 1e-12;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double binary_objective(const DesignMatrix& matrix, std::span<const double> params,
                        std::vector<double>* grad) {
    const std::size_t n = matrix.rows();
    const std::size_t p = matrix.cols();
    const double intercept = params[p];
    if (grad) grad->assign(p + 1, 0.0);

    double nll = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double z = intercept;
        for (std::size_t c = 0; c < p; ++c) z += params[c] * matrix.at(r, c);
        const double y = static_cast<double>(matrix.target[r]);
        nll += std::log1p(std::exp(-std::fabs(z))) + std::max(z, 0.0) - y * z;
        if (grad) {
            const double residual = sigmoid(z) - y;
            for (std::size_t c = 0; c < p; ++c) (*grad)[c] += residual * matrix.at(r, c);
            (*grad)[p] += residual;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    if (grad) {
        for (auto& g : *grad) g *= inv_n;
    }
    return nll * inv_n;
}

double ordinal_objective(const DesignMatrix& matrix, int levels, std::span<const double> params,
                         std::vector<double>* grad) {
    const std::size_t n = matrix.rows();
    const std::size_t p = matrix.cols();
    const int cuts = levels - 1;

    std::vector<double> theta(static_cast<std::size_t>(cuts));
    theta[0] = params[p];
    for (int c = 1; c < cuts; ++c) {
        theta[static_cast<std::size_t>(c)] =
            theta[static_cast<std::size_t>(c - 1)] + params[p + static_cast<std::size_t>(c)];
    }
    if (grad) grad->assign(params.size(), 0.0);
    std::vector<double> theta_grad(static_cast<std::size_t>(cuts), 0.0);

    double nll = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < p; ++c) s += params[c] * matrix.at(r, c);
        const int y = matrix.target[r]; // 1..K

        const bool has_upper = y < levels;
        const bool has_lower = y > 1;
        const double su = has_upper ? sigmoid(theta[static_cast<std::size_t>(y - 1)] - s) : 1.0;
        const double sl = has_lower ? sigmoid(theta[static_cast<std::size_t>(y - 2)] - s) : 0.0;
        const double prob = std::max(su - sl, kProbFloor);
        nll -= std::log(prob);

        if (grad) {
            const double du = has_upper ? su * (1.0 - su) : 0.0;
            const double dl = has_lower ? sl * (1.0 - sl) : 0.0;
            const double ds = (du - dl) / prob;
            for (std::size_t c = 0; c < p; ++c) (*grad)[c] += ds * matrix.at(r, c);
            if (has_upper) theta_grad[static_cast<std::size_t>(y - 1)] -= du / prob;
            if (has_lower) theta_grad[static_cast<std::size_t>(y - 2)] += dl / prob;
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    if (grad) {
        for (std::size_t c = 0; c < p; ++c) (*grad)[c] *= inv_n;
        // theta_c = theta_1 + sum of increments up to c: suffix sums.
        double suffix = 0.0;
        for (int c = cuts - 1; c >= 1; --c) {
            suffix += theta_grad[static_cast<std::size_t>(c)];
            (*grad)[p + static_cast<std::size_t>(c)] = suffix * inv_n;
        }
        suffix += theta_grad[0];
        (*grad)[p] = suffix * inv_n;
    }
    return nll * inv_n;
}

namespace {

struct ProxProblem {
    const DesignMatrix* matrix = nullptr;
    RegressionModel::Family family = RegressionModel::Family::Binary;
    int levels = 0;
    std::size_t weight_count = 0;

    double value(std::span<const double> params, std::vector<double>* grad) const {
        if (family == RegressionModel::Family::Binary) {
            return binary_objective(*matrix, params, grad);
        }
        return ordinal_objective(*matrix, levels, params, grad);
    }

    // Soft-threshold the weights; clamp ordinal increments positive.
    void prox(std::vector<double>& params, double step_lambda) const {
        for (std::size_t c = 0; c < weight_count; ++c) {
            double& w = params[c];
            if (w > step_lambda) {
                w -= step_lambda;
            } else if (w < -step_lambda) {
                w += step_lambda;
            } else {
                w = 0.0;
            }
        }
        if (family == RegressionModel::Family::Ordinal) {
            for (std::size_t c = weight_count + 1; c < params.size(); ++c) {
                params[c] = std::max(params[c], kIncrementFloor);
            }
        }
    }

    double penalty(std::span<const double> params, double lambda) const {
        double l1 = 0.0;
        for (std::size_t c = 0; c < weight_count; ++c) l1 += std::fabs(params[c]);
        return lambda * l1;
    }
};

struct SolveResult {
    std::vector<double> params;
    int iterations = 0;
    double mean_nll = 0.0;
    std::vector<double> trace; // penalized mean log-likelihood
};

SolveResult solve_proximal(const ProxProblem& problem, std::vector<double> params, double lambda,
                           const OptimizerConfig& cfg) {
    std::vector<double> grad;
    double f = problem.value(params, &grad);

    SolveResult result;
    result.trace.push_back(-(f + problem.penalty(params, lambda)));

    double step = 1.0;
    std::vector<double> candidate;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        step = std::min(step * 1.25, 1e6);
        double gap = 0.0;
        while (true) {
            candidate = params;
            for (std::size_t c = 0; c < params.size(); ++c) candidate[c] -= step * grad[c];
            problem.prox(candidate, step * lambda);

            const double f_new = problem.value(candidate, nullptr);
            double linear = 0.0;
            double quad = 0.0;
            for (std::size_t c = 0; c < params.size(); ++c) {
                const double d = candidate[c] - params[c];
                linear += grad[c] * d;
                quad += d * d;
            }
            if (f_new <= f + linear + quad / (2.0 * step) + 1e-12) {
                gap = std::sqrt(quad) / step;
                break;
            }
            step *= 0.5;
            if (step < 1e-18) {
                gap = 0.0;
                candidate = params;
                break;
            }
        }

        params = candidate;
        f = problem.value(params, &grad);
        if (!std::isfinite(f)) {
            throw FitError("logistic fit produced a non-finite objective");
        }
        result.trace.push_back(-(f + problem.penalty(params, lambda)));
        result.iterations = iter;
        if (gap <= cfg.tolerance) {
            result.params = std::move(params);
            result.mean_nll = f;
            return result;
        }
    }
    throw FitError("logistic fit did not converge after " + std::to_string(cfg.max_iterations) +
                   " iterations (lambda " + std::to_string(lambda) + ")");
}

double clamped_logit(double prob) {
    const double p = std::clamp(prob, 1e-3, 1.0 - 1e-3);
    return std::log(p / (1.0 - p));
}

std::vector<double> binary_start(const DesignMatrix& matrix) {
    double mean = 0.0;
    for (int y : matrix.target) mean += static_cast<double>(y);
    mean /= static_cast<double>(matrix.rows());
    std::vector<double> params(matrix.cols() + 1, 0.0);
    params.back() = clamped_logit(mean);
    return params;
}

std::vector<double> ordinal_start(const DesignMatrix& matrix, int levels) {
    std::vector<double> counts(static_cast<std::size_t>(levels), 0.0);
    for (int y : matrix.target) counts[static_cast<std::size_t>(y - 1)] += 1.0;
    const double n = static_cast<double>(matrix.rows());

    std::vector<double> theta(static_cast<std::size_t>(levels - 1));
    double cumulative = 0.0;
    for (int c = 0; c < levels - 1; ++c) {
        cumulative += counts[static_cast<std::size_t>(c)];
        theta[static_cast<std::size_t>(c)] = clamped_logit(cumulative / n);
    }
    std::vector<double> params(matrix.cols() + static_cast<std::size_t>(levels - 1), 0.0);
    params[matrix.cols()] = theta[0];
    for (int c = 1; c < levels - 1; ++c) {
        params[matrix.cols() + static_cast<std::size_t>(c)] =
            std::max(theta[static_cast<std::size_t>(c)] - theta[static_cast<std::size_t>(c - 1)],
                     kIncrementFloor);
    }
    return params;
}

RegressionModel finish_model(const DesignMatrix& matrix, RegressionModel::Family family,
                             int levels, const SolveResult& solved, double lambda) {
    RegressionModel model;
    model.family = family;
    model.column_ids = matrix.column_ids;
    model.lambda = lambda;
    model.mean_log_likelihood = -solved.mean_nll;
    model.iterations = solved.iterations;
    model.objective_trace = solved.trace;
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
        if (solved.params[c] != 0.0) model.weights[matrix.column_ids[c]] = solved.params[c];
    }
    if (family == RegressionModel::Family::Binary) {
        model.intercept = solved.params[matrix.cols()];
    } else {
        double theta = solved.params[matrix.cols()];
        model.cutpoints.push_back(theta);
        for (int c = 1; c < levels - 1; ++c) {
            theta += solved.params[matrix.cols() + static_cast<std::size_t>(c)];
            model.cutpoints.push_back(theta);
        }
    }
    return model;
}

int distinct_levels(const DesignMatrix& matrix) {
    std::set<int> values(matrix.target.begin(), matrix.target.end());
    return static_cast<int>(values.size());
}

// Compact targets to 1..K preserving order.
DesignMatrix compact_ordinal(const DesignMatrix& matrix, int* levels_out) {
    std::set<int> values(matrix.target.begin(), matrix.target.end());
    std::map<int, int> remap;
    int next = 1;
    for (int v : values) remap[v] = next++;
    DesignMatrix out = matrix;
    for (auto& y : out.target) y = remap[y];
    *levels_out = static_cast<int>(values.size());
    return out;
}

double score_fold(const DesignMatrix& matrix, RegressionModel::Family family,
                  std::span<const double> params, const std::vector<int>& folds, int fold) {
    const std::size_t p = matrix.cols();
    if (family == RegressionModel::Family::Binary) {
        int correct = 0;
        int total = 0;
        for (std::size_t r = 0; r < matrix.rows(); ++r) {
            if (folds[r] != fold) continue;
            double z = params[p];
            for (std::size_t c = 0; c < p; ++c) z += params[c] * matrix.at(r, c);
            const int predicted = z > 0.0 ? 1 : 0;
            correct += predicted == matrix.target[r] ? 1 : 0;
            total += 1;
        }
        return total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
    }

    // Ordinal: NDCG of the score ordering within each held-out group.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        if (folds[r] == fold) groups[matrix.group[r]].push_back(r);
    }
    double total = 0.0;
    int count = 0;
    for (const auto& [id, rows] : groups) {
        if (rows.size() < 2) continue;
        std::vector<double> score(rows.size());
        std::vector<double> relevance(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::size_t r = rows[i];
            double s = 0.0;
            for (std::size_t c = 0; c < p; ++c) s += params[c] * matrix.at(r, c);
            score[i] = s;
            relevance[i] = static_cast<double>(matrix.group_team_count[r] -
                                               matrix.observed_rank[r]);
        }
        std::vector<std::size_t> order(rows.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
        total += ndcg_score(relevance, order);
        count += 1;
    }
    return count > 0 ? total / static_cast<double>(count) : 0.0;
}

SolveResult fit_once(const DesignMatrix& matrix, RegressionModel::Family family, int levels,
                     double lambda, const OptimizerConfig& cfg) {
    ProxProblem problem;
    problem.matrix = &matrix;
    problem.family = family;
    problem.levels = levels;
    problem.weight_count = matrix.cols();
    auto start = family == RegressionModel::Family::Binary ? binary_start(matrix)
                                                           : ordinal_start(matrix, levels);
    return solve_proximal(problem, std::move(start), lambda, cfg);
}

DesignMatrix subset_rows(const DesignMatrix& matrix, const std::vector<int>& folds, int fold,
                         bool keep_fold) {
    DesignMatrix out;
    out.column_ids = matrix.column_ids;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        if ((folds[r] == fold) != keep_fold) continue;
        for (std::size_t c = 0; c < matrix.cols(); ++c) out.values.push_back(matrix.at(r, c));
        out.target.push_back(matrix.target[r]);
        if (!matrix.group.empty()) out.group.push_back(matrix.group[r]);
        if (!matrix.observed_rank.empty()) out.observed_rank.push_back(matrix.observed_rank[r]);
        if (!matrix.group_team_count.empty()) {
            out.group_team_count.push_back(matrix.group_team_count[r]);
        }
    }
    return out;
}

double lambda_cv_score(const DesignMatrix& matrix, RegressionModel::Family family, int levels,
                       double lambda, const OptimizerConfig& cfg) {
    const std::vector<int> folds = fold_assignment(matrix, cfg.cv_folds, cfg.cv_seed);
    double total = 0.0;
    for (int fold = 0; fold < cfg.cv_folds; ++fold) {
        DesignMatrix train = subset_rows(matrix, folds, fold, false);
        const SolveResult solved = fit_once(train, family, levels, lambda, cfg);
        total += score_fold(matrix, family, solved.params, folds, fold);
    }
    return total / static_cast<double>(cfg.cv_folds);
}

double pick_lambda(const DesignMatrix& matrix, RegressionModel::Family family, int levels,
                   const OptimizerConfig& cfg, double* best_score_out) {
    if (cfg.lambda_grid.empty()) throw FitError("empty lambda grid");
    if (cfg.lambda_grid.size() == 1) {
        if (best_score_out) *best_score_out = 0.0;
        return cfg.lambda_grid[0];
    }
    double best_lambda = cfg.lambda_grid[0];
    double best_score = -1.0;
    for (double lambda : cfg.lambda_grid) {
        const double score = lambda_cv_score(matrix, family, levels, lambda, cfg);
        // ties go to the stronger penalty
        if (score > best_score || (score == best_score && lambda > best_lambda)) {
            best_score = score;
            best_lambda = lambda;
        }
    }
    if (best_score_out) *best_score_out = best_score;
    return best_lambda;
}

} // namespace

std::vector<int> fold_assignment(const DesignMatrix& matrix, int folds, uint64_t seed) {
    std::vector<std::string> group_order;
    std::map<std::string, std::size_t> group_index;
    const bool grouped = !matrix.group.empty();
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const std::string key = grouped ? matrix.group[r] : std::to_string(r);
        if (group_index.emplace(key, group_order.size()).second) group_order.push_back(key);
    }
    if (group_order.size() < static_cast<std::size_t>(folds)) {
        throw ValidationError("cross-validation needs at least " + std::to_string(folds) +
                              " groups, have " + std::to_string(group_order.size()));
    }

    std::vector<std::size_t> shuffled(group_order.size());
    std::iota(shuffled.begin(), shuffled.end(), 0);
    std::mt19937_64 rng(seed);
    shuffle_inplace(shuffled, rng);

    std::vector<int> fold_of_group(group_order.size());
    const std::size_t g = group_order.size();
    for (std::size_t pos = 0; pos < g; ++pos) {
        fold_of_group[shuffled[pos]] = static_cast<int>(pos * static_cast<std::size_t>(folds) / g);
    }

    std::vector<int> out(matrix.rows());
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        const std::string key = grouped ? matrix.group[r] : std::to_string(r);
        out[r] = fold_of_group[group_index[key]];
    }
    return out;
}

double cross_validate(const DesignMatrix& matrix, RegressionModel::Family family, double lambda,
                      const OptimizerConfig& cfg) {
    matrix.check();
    int levels = 0;
    if (family == RegressionModel::Family::Ordinal) {
        const DesignMatrix compact = compact_ordinal(matrix, &levels);
        return lambda_cv_score(compact, family, levels, lambda, cfg);
    }
    return lambda_cv_score(matrix, family, levels, lambda, cfg);
}

RegressionModel fit_binary_logit(const DesignMatrix& matrix, const OptimizerConfig& cfg) {
    matrix.check();
    if (matrix.rows() == 0) throw FitError("fit_binary_logit: empty design matrix");
    bool has_positive = false;
    bool has_negative = false;
    for (int y : matrix.target) {
        if (y == 1) {
            has_positive = true;
        } else if (y == 0) {
            has_negative = true;
        } else {
            throw ValidationError("fit_binary_logit: target must be 0/1");
        }
    }
    if (!has_positive || !has_negative) {
        throw FitError("fit_binary_logit: single-class target");
    }

    double cv_score = 0.0;
    const double lambda =
        pick_lambda(matrix, RegressionModel::Family::Binary, 0, cfg, &cv_score);
    const SolveResult solved = fit_once(matrix, RegressionModel::Family::Binary, 0, lambda, cfg);
    RegressionModel model =
        finish_model(matrix, RegressionModel::Family::Binary, 0, solved, lambda);
    model.cv_score = cv_score;
    return model;
}

RegressionModel fit_ordinal_logit(const DesignMatrix& matrix, const OptimizerConfig& cfg) {
    matrix.check();
    if (matrix.rows() == 0) throw FitError("fit_ordinal_logit: empty design matrix");
    const int distinct = distinct_levels(matrix);
    if (distinct < 2) throw FitError("fit_ordinal_logit: single-level target");
    if (distinct < 3) {
        // two levels only: binary model on the upper level
        const int hi = *std::max_element(matrix.target.begin(), matrix.target.end());
        DesignMatrix binary = matrix;
        for (auto& y : binary.target) y = y == hi ? 1 : 0;
        RegressionModel model = fit_binary_logit(binary, cfg);
        model.fell_back_to_binary = true;
        return model;
    }

    int levels = 0;
    const DesignMatrix compact = compact_ordinal(matrix, &levels);
    double cv_score = 0.0;
    const double lambda =
        pick_lambda(compact, RegressionModel::Family::Ordinal, levels, cfg, &cv_score);
    const SolveResult solved =
        fit_once(compact, RegressionModel::Family::Ordinal, levels, lambda, cfg);
    RegressionModel model =
        finish_model(compact, RegressionModel::Family::Ordinal, levels, solved, lambda);
    model.cv_score = cv_score;
    return model;
}

WeightModel normalize_weights(const RegressionModel& model) {
    double abs_sum = 0.0;
    for (const auto& [id, w] : model.weights) abs_sum += std::fabs(w);
    if (abs_sum == 0.0) throw FitError("normalize_weights: all weights are zero");

    WeightModel out;
    out.provenance = Provenance::Fitted;
    for (const auto& [id, w] : model.weights) out.terms[id] = w / abs_sum;
    out.check();
    return out;
}

} // namespace rankbench
