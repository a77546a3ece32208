#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "schauder/error.hpp"

namespace schauder {

/// Row-major storage used by every dense matrix in the library.
using MatrixStorage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense real rectangular matrix with positive dimensions and finite entries.
///
/// Values are immutable once constructed; every operation returns a new
/// matrix. Indices in the C++ API are 0-based.
class DenseMatrix {
public:
    /// rows x cols zero matrix.
    DenseMatrix(std::size_t rows, std::size_t cols) : data_(check_dims(rows, cols)) {
        data_.setZero();
    }

    /// Row-major entries; entries.size() must equal rows * cols.
    DenseMatrix(std::size_t rows, std::size_t cols, std::span<const double> entries)
        : data_(check_dims(rows, cols)) {
        if (entries.size() != rows * cols) {
            throw InvalidInput("matrix entry count " + std::to_string(entries.size()) +
                               " does not match " + std::to_string(rows) + "x" +
                               std::to_string(cols));
        }
        std::copy(entries.begin(), entries.end(), data_.data());
        check_finite();
    }

    explicit DenseMatrix(MatrixStorage data) : data_(std::move(data)) {
        if (data_.rows() == 0 || data_.cols() == 0) {
            throw InvalidInput("matrix dimensions must be positive");
        }
        check_finite();
    }

    template <typename Derived>
    explicit DenseMatrix(const Eigen::MatrixBase<Derived>& expr) : DenseMatrix(MatrixStorage(expr)) {}

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        if (rows.size() == 0 || rows.begin()->size() == 0) {
            throw InvalidInput("matrix dimensions must be positive");
        }
        const std::size_t cols = rows.begin()->size();
        std::vector<double> entries;
        entries.reserve(rows.size() * cols);
        for (const auto& row : rows) {
            if (row.size() != cols) {
                throw InvalidInput("ragged row list");
            }
            entries.insert(entries.end(), row.begin(), row.end());
        }
        return DenseMatrix(rows.size(), cols, entries);
    }

    static DenseMatrix identity(std::size_t n) {
        return DenseMatrix(MatrixStorage::Identity(check_index(n), check_index(n)));
    }

    static DenseMatrix diagonal(std::span<const double> values) {
        const auto n = check_index(values.size());
        MatrixStorage m = MatrixStorage::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, i) = values[static_cast<std::size_t>(i)];
        }
        return DenseMatrix(std::move(m));
    }

    std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }
    bool is_square() const noexcept { return data_.rows() == data_.cols(); }

    double operator()(std::size_t i, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Row-major view of all entries.
    std::span<const double> entries() const noexcept {
        return {data_.data(), static_cast<std::size_t>(data_.size())};
    }

    const MatrixStorage& eigen() const noexcept { return data_; }

    DenseMatrix transpose() const { return DenseMatrix(MatrixStorage(data_.transpose())); }

    /// Euclidean norm of column j.
    double column_norm(std::size_t j) const {
        return data_.col(static_cast<Eigen::Index>(j)).norm();
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols() != b.rows()) {
            throw InvalidInput("non-conformable product " + a.shape() + " * " + b.shape());
        }
        return DenseMatrix(MatrixStorage(a.data_ * b.data_));
    }

    friend DenseMatrix operator*(double s, const DenseMatrix& a) {
        return DenseMatrix(MatrixStorage(s * a.data_));
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows() == b.rows() && a.cols() == b.cols() && a.data_ == b.data_;
    }

    std::string shape() const { return std::to_string(rows()) + "x" + std::to_string(cols()); }

private:
    static Eigen::Index check_index(std::size_t n) {
        if (n == 0) {
            throw InvalidInput("matrix dimensions must be positive");
        }
        return static_cast<Eigen::Index>(n);
    }

    static MatrixStorage check_dims(std::size_t rows, std::size_t cols) {
        return MatrixStorage(check_index(rows), check_index(cols));
    }

    void check_finite() const {
        if (!data_.allFinite()) {
            throw InvalidInput("matrix has non-finite entries");
        }
    }

    MatrixStorage data_;
};

/// Largest absolute entrywise difference; dimensions must agree.
inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("shape mismatch " + a.shape() + " vs " + b.shape());
    }
    return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

/// ||M - I||_max for square M.
inline double identity_deviation(const DenseMatrix& m) {
    if (!m.is_square()) {
        throw InvalidInput("identity deviation needs a square matrix, got " + m.shape());
    }
    return (m.eigen() - MatrixStorage::Identity(m.eigen().rows(), m.eigen().cols())).cwiseAbs().maxCoeff();
}

} // namespace schauder
