#pragma once

#include <cstddef>
#include <vector>

namespace rankbench {

// Row-major dense matrix; sized for the small problems here (feature
// correlation matrices, rotation matrices).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Gaussian elimination with partial pivoting; throws FitError when singular.
Matrix invert(const Matrix& m);

struct EigenResult {
    std::vector<double> values;   // descending
    Matrix vectors;               // columns aligned with values
};

// Cyclic Jacobi for symmetric matrices. Eigenvector signs are fixed so the
// largest-magnitude component of each vector is positive.
EigenResult jacobi_eigen(const Matrix& symmetric);

} // namespace rankbench
