#pragma once

#include "sstuq/core.hpp"

#include <algorithm>
#include <vector>

namespace sstuq {

/// Natural cubic spline (zero second derivative at both ends) through (x_i, y_i).
/// Outside [x_0, x_{n-1}] the end cubic pieces are extended, which for a natural
/// spline is linear continuation.
template <typename Scalar>
class NaturalCubicSpline {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    NaturalCubicSpline(const Vector& x, const Vector& y) : x_(x), y_(y) {
        const Index n = x.size();
        if (n < 2 || y.size() != n) throw Error(ErrorCode::GridTooCoarse, "spline needs at least two matching nodes");
        for (Index i = 1; i < n; ++i) {
            if (!(x(i) > x(i - 1))) throw Error(ErrorCode::InvalidArgument, "spline nodes must be strictly increasing");
        }
        m_ = Vector::Zero(n);
        if (n == 2) return;
        // Tridiagonal system for interior second derivatives (Thomas algorithm).
        const Index k = n - 2;
        Vector diag(k), upper(k), rhs(k);
        for (Index i = 1; i <= k; ++i) {
            const Scalar h0 = x(i) - x(i - 1), h1 = x(i + 1) - x(i);
            diag(i - 1) = Scalar(2) * (h0 + h1);
            upper(i - 1) = h1;
            rhs(i - 1) = Scalar(6) * ((y(i + 1) - y(i)) / h1 - (y(i) - y(i - 1)) / h0);
        }
        for (Index i = 1; i < k; ++i) {
            const Scalar lower = x(i + 1) - x(i);
            const Scalar w = lower / diag(i - 1);
            diag(i) -= w * upper(i - 1);
            rhs(i) -= w * rhs(i - 1);
        }
        m_(k) = rhs(k - 1) / diag(k - 1);
        for (Index i = k - 1; i >= 1; --i) m_(i) = (rhs(i - 1) - upper(i - 1) * m_(i + 1)) / diag(i - 1);
    }

    Scalar operator()(Scalar t) const {
        const Index n = x_.size();
        const Scalar* begin = x_.data();
        Index i = static_cast<Index>(std::upper_bound(begin, begin + n, t) - begin) - 1;
        i = std::clamp<Index>(i, 0, n - 2);
        const Scalar h = x_(i + 1) - x_(i);
        const Scalar a = (x_(i + 1) - t) / h;
        const Scalar b = (t - x_(i)) / h;
        return a * y_(i) + b * y_(i + 1) + ((a * a * a - a) * m_(i) + (b * b * b - b) * m_(i + 1)) * h * h / Scalar(6);
    }

    Vector operator()(const Vector& t) const {
        Vector out(t.size());
        for (Index i = 0; i < t.size(); ++i) out(i) = (*this)(t(i));
        return out;
    }

private:
    Vector x_, y_, m_;
};

/// Tensor-product natural spline from a coarse (rows x cols) surface sampled at
/// (row_nodes, col_nodes) onto (row_targets, col_targets): along rows first, then columns.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> tensor_spline(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& coarse,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& row_nodes, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& col_nodes,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& row_targets, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& col_targets) {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (coarse.rows() != row_nodes.size() || coarse.cols() != col_nodes.size())
        throw Error(ErrorCode::DimMismatch, "coarse surface does not match its nodes");
    Matrix mid(row_targets.size(), coarse.cols());
    for (Index c = 0; c < coarse.cols(); ++c) {
        const Vector col = coarse.col(c);
        mid.col(c) = NaturalCubicSpline<Scalar>(row_nodes, col)(row_targets);
    }
    Matrix out(row_targets.size(), col_targets.size());
    for (Index r = 0; r < mid.rows(); ++r) {
        const Vector row = mid.row(r).transpose();
        out.row(r) = NaturalCubicSpline<Scalar>(col_nodes, row)(col_targets).transpose();
    }
    return out;
}

}  // namespace sstuq
