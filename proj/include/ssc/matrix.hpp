#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ssc {

// Dense row-major matrix of doubles. Rows usually hold conditional
// distributions over the column alphabet, so helpers are row-oriented.
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        assert(rows >= 0 && cols >= 0);
    }

    Matrix(int rows, int cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        assert(data_.size() == static_cast<std::size_t>(rows) * cols);
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(int r, int c) {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }
    double operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    std::span<double> row(int r) {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<const double> row(int r) const {
        return {data_.data() + static_cast<std::size_t>(r) * cols_, static_cast<std::size_t>(cols_)};
    }

    const std::vector<double>& data() const { return data_; }

    double sum() const {
        double s = 0.0;
        for (double v : data_) s += v;
        return s;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    assert(a.cols() == b.rows());
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

// v^T M for a row vector v.
inline std::vector<double> vec_mat(std::span<const double> v, const Matrix& m) {
    assert(static_cast<int>(v.size()) == m.rows());
    std::vector<double> out(m.cols(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        for (int j = 0; j < m.cols(); ++j) out[j] += vi * m(i, j);
    }
    return out;
}

inline bool row_is_distribution(std::span<const double> row, double tol) {
    double s = 0.0;
    for (double v : row) {
        if (!(v >= 0.0 && v <= 1.0)) return false;
        s += v;
    }
    return std::abs(s - 1.0) <= tol;
}

// Number of entries with |value| above the threshold.
inline int count_nonzero(const Matrix& m, double threshold) {
    int nnz = 0;
    for (double v : m.data())
        if (std::abs(v) > threshold) ++nnz;
    return nnz;
}

}  // namespace ssc
