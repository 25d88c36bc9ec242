#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace llgmid {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Sparse matrix of 3x3 blocks in CSR layout, one block row/column per mesh
/// node. Column indices are sorted within each row, so apply() accumulates in
/// a fixed order and results are reproducible bit for bit.
class SparseBlockMatrix {
public:
    SparseBlockMatrix() = default;

    /// Builds from (row, col, block) triplets; duplicates are summed in
    /// (row, col) order.
    static SparseBlockMatrix from_triplets(int n_rows, int n_cols,
                                           std::vector<std::array<int, 2>> idx,
                                           std::vector<Mat3> blocks);

    int rows() const { return n_rows_; }
    int cols() const { return n_cols_; }

    /// y = A x (block-wise).
    void apply(const std::vector<Vec3>& x, std::vector<Vec3>& y) const;

    /// Dense copy (3*rows x 3*cols); intended for small oracle problems.
    Eigen::MatrixXd to_dense() const;

private:
    int n_rows_ = 0;
    int n_cols_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<Mat3> val_;
};

/// Ordinary least squares on (x, y) pairs: y ~ slope*x + intercept.
/// residual is the root-mean-square misfit.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    int points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace llgmid
