#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "spm/error.hpp"

namespace spm {

/// Row-major dense matrix. Process networks are tens of nodes, so nothing
/// here tries to be clever about storage.
template <std::floating_point T>
class DenseMatrix {
public:
    using value_type = T;

    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{0}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) : rows_(rows.size()) {
        cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DomainError("ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    [[nodiscard]] std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

    [[nodiscard]] DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        }
        return t;
    }

    [[nodiscard]] T sum() const { return std::accumulate(data_.begin(), data_.end(), T{0}); }

    [[nodiscard]] T frobenius_norm() const {
        T s{0};
        for (T v : data_) s += v * v;
        return std::sqrt(s);
    }

    [[nodiscard]] bool is_symmetric(T tol) const {
        if (!square()) return false;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i + 1; j < cols_; ++j) {
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
            }
        }
        return true;
    }

    /// y = M x
    void multiply(std::span<const T> x, std::span<T> y) const {
        assert(x.size() == cols_ && y.size() == rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const T* r = data_.data() + i * cols_;
            T acc{0};
            for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
            y[i] = acc;
        }
    }

    [[nodiscard]] std::vector<T> operator*(std::span<const T> x) const {
        std::vector<T> y(rows_);
        multiply(x, y);
        return y;
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
        DenseMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T aik = a(i, k);
                if (aik == T{0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    friend DenseMatrix operator*(T s, DenseMatrix m) {
        for (T& v : m.data_) v *= s;
        return m;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using Matrix = DenseMatrix<double>;

template <std::floating_point T>
T dot(std::span<const T> a, std::span<const T> b) {
    assert(a.size() == b.size());
    return std::inner_product(a.begin(), a.end(), b.begin(), T{0});
}

template <std::floating_point T>
T norm2(std::span<const T> a) {
    return std::sqrt(dot(a, a));
}

/// Scales to unit 2-norm; returns the original norm (zero vectors stay zero).
template <std::floating_point T>
T normalize(std::span<T> a) {
    const T n = norm2(std::span<const T>(a));
    if (n > T{0}) {
        for (T& v : a) v /= n;
    }
    return n;
}

}  // namespace spm
