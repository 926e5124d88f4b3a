#include "rankbench/factor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "rankbench/error.hpp"

namespace rankbench {

void DesignMatrix::check() const {
    std::set<std::string> ids(column_ids.begin(), column_ids.end());
    if (ids.size() != column_ids.size()) {
        throw ValidationError("design matrix: duplicate column ids");
    }
    if (!column_ids.empty() && values.size() % column_ids.size() != 0) {
        throw ValidationError("design matrix: ragged value array");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw ValidationError("design matrix: non-finite cell");
    }
    const std::size_t n = rows();
    if (!target.empty() && target.size() != n) {
        throw ValidationError("design matrix: target size mismatch");
    }
    if (!group.empty() && group.size() != n) {
        throw ValidationError("design matrix: group size mismatch");
    }
}

Matrix correlation_matrix(const DesignMatrix& matrix) {
    const std::size_t n = matrix.rows();
    const std::size_t p = matrix.cols();
    std::vector<double> mean(p, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < p; ++c) mean[c] += matrix.at(r, c);
    }
    for (auto& m : mean) m /= static_cast<double>(n);

    Matrix cov(p, p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < p; ++i) {
            const double di = matrix.at(r, i) - mean[i];
            for (std::size_t j = i; j < p; ++j) {
                cov.at(i, j) += di * (matrix.at(r, j) - mean[j]);
            }
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        if (cov.at(i, i) <= 0.0) {
            throw FitError("correlation matrix is singular: column '" + matrix.column_ids[i] +
                           "' has zero variance");
        }
    }
    Matrix corr(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            const double c = cov.at(i, j) / std::sqrt(cov.at(i, i) * cov.at(j, j));
            corr.at(i, j) = c;
            corr.at(j, i) = c;
        }
    }
    return corr;
}

namespace {

struct CriterionValue {
    double f = 0.0;
    Matrix gradient; // dQ/dL
};

// Oblimin family; gamma 0 is quartimin.
CriterionValue oblimin_criterion(const Matrix& loadings, double gamma) {
    const std::size_t p = loadings.rows();
    const std::size_t k = loadings.cols();

    Matrix l2(p, k);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < k; ++j) l2.at(i, j) = loadings.at(i, j) * loadings.at(i, j);
    }
    // X = L^2 (1 - I), optionally centered by gamma/p across rows.
    Matrix x(p, k);
    for (std::size_t i = 0; i < p; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) row_sum += l2.at(i, j);
        for (std::size_t j = 0; j < k; ++j) x.at(i, j) = row_sum - l2.at(i, j);
    }
    if (gamma != 0.0) {
        for (std::size_t j = 0; j < k; ++j) {
            double col_sum = 0.0;
            for (std::size_t i = 0; i < p; ++i) col_sum += x.at(i, j);
            const double shift = gamma * col_sum / static_cast<double>(p);
            for (std::size_t i = 0; i < p; ++i) x.at(i, j) -= shift;
        }
    }

    CriterionValue out;
    out.gradient = Matrix(p, k);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            out.f += l2.at(i, j) * x.at(i, j);
            out.gradient.at(i, j) = loadings.at(i, j) * x.at(i, j);
        }
    }
    out.f /= 4.0;
    return out;
}

} // namespace

RotationResult oblimin_rotate(const Matrix& initial, double gamma, int max_iter, double tol) {
    const std::size_t k = initial.cols();
    Matrix t = Matrix::identity(k);
    Matrix ti = invert(t);
    Matrix loadings = initial * ti.transposed();

    CriterionValue vq = oblimin_criterion(loadings, gamma);
    double f = vq.f;
    // G = -(L' Gq T^-1)'
    Matrix g = (loadings.transposed() * vq.gradient * ti).transposed();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) g.at(i, j) = -g.at(i, j);
    }

    double alpha = 1.0;
    RotationResult result;
    for (int iter = 0; iter <= max_iter; ++iter) {
        // Project the gradient onto the constraint manifold diag(T'T)=1.
        Matrix gp = g;
        for (std::size_t j = 0; j < k; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < k; ++i) col += t.at(i, j) * g.at(i, j);
            for (std::size_t i = 0; i < k; ++i) gp.at(i, j) -= t.at(i, j) * col;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) s += gp.at(i, j) * gp.at(i, j);
        }
        s = std::sqrt(s);
        result.iterations = iter;
        if (s < tol) {
            result.loadings = loadings;
            result.transform = t;
            result.converged = true;
            return result;
        }

        alpha *= 2.0;
        Matrix tt = t;
        CriterionValue vqt;
        for (int halving = 0; halving <= 24; ++halving) {
            Matrix x = t;
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) x.at(i, j) -= alpha * gp.at(i, j);
            }
            for (std::size_t j = 0; j < k; ++j) {
                double norm = 0.0;
                for (std::size_t i = 0; i < k; ++i) norm += x.at(i, j) * x.at(i, j);
                norm = std::sqrt(norm);
                for (std::size_t i = 0; i < k; ++i) x.at(i, j) /= norm;
            }
            tt = x;
            ti = invert(tt);
            loadings = initial * ti.transposed();
            vqt = oblimin_criterion(loadings, gamma);
            if (vqt.f < f - 0.5 * s * s * alpha) break;
            alpha /= 2.0;
        }
        t = tt;
        f = vqt.f;
        g = (loadings.transposed() * vqt.gradient * ti).transposed();
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) g.at(i, j) = -g.at(i, j);
        }
    }
    throw FitError("oblimin rotation did not converge after " + std::to_string(max_iter) +
                   " iterations");
}

FactorFit fit_factors(const DesignMatrix& features, const FactorConfig& cfg) {
    features.check();
    const std::size_t p = features.cols();
    if (p < 2) throw ValidationError("fit_factors: need at least 2 columns");
    if (features.rows() <= p) {
        throw ValidationError("fit_factors: need more rows than columns");
    }

    const Matrix corr = correlation_matrix(features);
    const EigenResult eigen = jacobi_eigen(corr);

    int k;
    if (cfg.factor_count) {
        k = *cfg.factor_count;
        if (k < 1 || static_cast<std::size_t>(k) > p) {
            throw ValidationError("fit_factors: factor count override out of range");
        }
    } else {
        k = 0;
        for (double v : eigen.values) {
            if (v > 1.0) ++k;
        }
        if (k == 0) k = 1;
    }

    Matrix unrotated(p, static_cast<std::size_t>(k));
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
        const double scale = std::sqrt(std::max(0.0, eigen.values[j]));
        for (std::size_t i = 0; i < p; ++i) {
            unrotated.at(i, j) = eigen.vectors.at(i, j) * scale;
        }
    }

    FactorFit fit;
    fit.eigenvalues = eigen.values;
    fit.unrotated = unrotated;
    if (k >= 2) {
        RotationResult rot = oblimin_rotate(unrotated, cfg.oblimin_gamma, cfg.max_rotation_iter,
                                            cfg.rotation_tol);
        fit.rotated = rot.loadings;
        fit.factor_correlation = rot.transform.transposed() * rot.transform;
    } else {
        fit.rotated = unrotated;
        fit.factor_correlation = Matrix::identity(1);
    }

    // Per factor, flip the sign so the loading sum is positive.
    for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < p; ++i) sum += fit.rotated.at(i, j);
        if (sum < 0.0) {
            for (std::size_t i = 0; i < p; ++i) fit.rotated.at(i, j) = -fit.rotated.at(i, j);
        }
    }

    fit.assignment.assign(p, -1);
    for (std::size_t i = 0; i < p; ++i) {
        std::size_t arg = 0;
        for (std::size_t j = 1; j < static_cast<std::size_t>(k); ++j) {
            if (std::fabs(fit.rotated.at(i, j)) > std::fabs(fit.rotated.at(i, arg))) arg = j;
        }
        if (std::fabs(fit.rotated.at(i, arg)) >= cfg.loading_threshold) {
            fit.assignment[i] = static_cast<int>(arg);
        }
    }

    // Factors ordered by total squared loading; empty factors dropped.
    std::vector<double> weight(static_cast<std::size_t>(k), 0.0);
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < p; ++i) {
        if (fit.assignment[i] < 0) continue;
        const auto j = static_cast<std::size_t>(fit.assignment[i]);
        members[j].push_back(i);
        weight[j] += fit.rotated.at(i, j) * fit.rotated.at(i, j);
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });

    fit.model.provenance = Provenance::Fitted;
    int name_index = 1;
    for (std::size_t j : order) {
        if (members[j].empty()) continue;
        double abs_sum = 0.0;
        for (std::size_t i : members[j]) abs_sum += std::fabs(fit.rotated.at(i, j));
        FactorSpec spec;
        spec.name = "factor_" + std::to_string(name_index++);
        for (std::size_t i : members[j]) {
            auto feature = feature_from_name(features.column_ids[i]);
            if (!feature) {
                throw ValidationError("fit_factors: column '" + features.column_ids[i] +
                                      "' is not a feature id");
            }
            spec.loadings[*feature] = fit.rotated.at(i, j) / abs_sum;
        }
        fit.model.factors.push_back(std::move(spec));
    }
    fit.model.check();
    return fit;
}

} // namespace rankbench
