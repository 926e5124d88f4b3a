#pragma once

#include <optional>

#include "rankbench/behavioral.hpp"
#include "rankbench/design.hpp"
#include "rankbench/linalg.hpp"

namespace rankbench {

struct FactorConfig {
    std::optional<int> factor_count;  // override for the Kaiser criterion
    double loading_threshold = 0.4;   // |rotated loading| needed to join a factor
    double oblimin_gamma = 0.0;       // 0 = quartimin
    int max_rotation_iter = 5000;
    double rotation_tol = 1e-6;
};

struct RotationResult {
    Matrix loadings;     // pattern matrix
    Matrix transform;    // T with unit-norm columns; factor correlation = T'T
    int iterations = 0;
    bool converged = true;
};

struct FactorFit {
    FactorModel model;
    std::vector<double> eigenvalues;
    Matrix unrotated;            // principal-component loadings, p x k
    Matrix rotated;              // pattern matrix after oblimin, p x k
    Matrix factor_correlation;   // k x k
    std::vector<int> assignment; // per feature column: factor index or -1
};

// Pearson correlation of the matrix columns; throws FitError naming any
// zero-variance column.
Matrix correlation_matrix(const DesignMatrix& matrix);

// Gradient-projection oblimin rotation of an initial loading matrix.
RotationResult oblimin_rotate(const Matrix& loadings, double gamma, int max_iter, double tol);

// PCA extraction (Kaiser retention unless overridden), oblimin rotation,
// threshold assignment, per-factor normalization of absolute loadings.
FactorFit fit_factors(const DesignMatrix& features, const FactorConfig& cfg = {});

} // namespace rankbench
