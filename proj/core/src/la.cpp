#include "llgmid/la.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace llgmid {

SparseBlockMatrix SparseBlockMatrix::from_triplets(int n_rows, int n_cols,
                                                   std::vector<std::array<int, 2>> idx,
                                                   std::vector<Mat3> blocks) {
    if (idx.size() != blocks.size())
        throw std::invalid_argument("from_triplets: index/block count mismatch");

    std::vector<std::size_t> order(idx.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (idx[a][0] != idx[b][0]) return idx[a][0] < idx[b][0];
        if (idx[a][1] != idx[b][1]) return idx[a][1] < idx[b][1];
        return a < b;  // stable merge order for duplicates
    });

    SparseBlockMatrix m;
    m.n_rows_ = n_rows;
    m.n_cols_ = n_cols;
    m.row_ptr_.assign(static_cast<std::size_t>(n_rows) + 1, 0);

    for (std::size_t p = 0; p < order.size();) {
        const int r = idx[order[p]][0];
        const int c = idx[order[p]][1];
        Mat3 sum = Mat3::Zero();
        while (p < order.size() && idx[order[p]][0] == r && idx[order[p]][1] == c) {
            sum += blocks[order[p]];
            ++p;
        }
        m.col_.push_back(c);
        m.val_.push_back(sum);
        ++m.row_ptr_[static_cast<std::size_t>(r) + 1];
    }
    for (int r = 0; r < n_rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
}

void SparseBlockMatrix::apply(const std::vector<Vec3>& x, std::vector<Vec3>& y) const {
    if (static_cast<int>(x.size()) != n_cols_)
        throw std::invalid_argument("SparseBlockMatrix::apply: size mismatch");
    y.assign(static_cast<std::size_t>(n_rows_), Vec3::Zero());
    for (int r = 0; r < n_rows_; ++r) {
        Vec3 acc = Vec3::Zero();
        for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            acc.noalias() += val_[p] * x[col_[p]];
        y[r] = acc;
    }
}

Eigen::MatrixXd SparseBlockMatrix::to_dense() const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3 * n_rows_, 3 * n_cols_);
    for (int r = 0; r < n_rows_; ++r)
        for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            d.block<3, 3>(3 * r, 3 * col_[p]) += val_[p];
    return d;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.points = static_cast<int>(x.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

}  // namespace llgmid
