#pragma once

#include <optional>
#include <vector>

#include "canproj/field.hpp"

namespace canproj {

/// Dense matrix over an exact field. Row-major, sized on construction.
template <class K> class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, const FieldSpec& field)
        : rows_(rows), cols_(cols), field_(field),
          data_(rows * cols, FieldOps<K>::zero(field)) {}

    static DenseMatrix identity(std::size_t n, const FieldSpec& field) {
        DenseMatrix m(n, n, field);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldOps<K>::one(field);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    K& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const K& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_, field_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    DenseMatrix operator*(const DenseMatrix& o) const {
        if (cols_ != o.rows_) throw StructureError("matrix product shape mismatch");
        DenseMatrix r(rows_, o.cols_, field_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const K& a = at(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const K& b = o.at(k, j);
                    if (!b.is_zero()) r.at(i, j) += a * b;
                }
            }
        return r;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (v.size() != cols_) throw StructureError("matrix-vector shape mismatch");
        std::vector<K> r(rows_, FieldOps<K>::zero(field_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    FieldSpec field_;
    std::vector<K> data_;
};

/// Full row reduction. Returns the pivot columns; the matrix ends in RREF.
template <class K> std::vector<std::size_t> rref_in_place(DenseMatrix<K>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = col; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
        K inv = m.at(row, col).inv();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            K f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K> std::size_t rank(DenseMatrix<K> m) { return rref_in_place(m).size(); }

/// Basis of the right kernel, one vector per free column.
template <class K> std::vector<std::vector<K>> kernel_basis(DenseMatrix<K> m) {
    std::vector<std::size_t> pivots = rref_in_place(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<K>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<K> v(m.cols(), FieldOps<K>::zero(m.field()));
        v[free] = FieldOps<K>::one(m.field());
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m.at(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A x = b, when consistent.
template <class K>
std::optional<std::vector<K>> solve(const DenseMatrix<K>& a, const std::vector<K>& b) {
    if (b.size() != a.rows()) throw StructureError("solve shape mismatch");
    DenseMatrix<K> aug(a.rows(), a.cols() + 1, a.field());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    std::vector<std::size_t> pivots = rref_in_place(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt; // inconsistent
    std::vector<K> x(a.cols(), FieldOps<K>::zero(a.field()));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
    return x;
}

/// Solution set of A x = b: a particular solution plus a kernel basis.
template <class K> struct AffineSolutions {
    std::vector<K> particular;
    std::vector<std::vector<K>> kernel;
};

template <class K>
std::optional<AffineSolutions<K>> solve_affine(const DenseMatrix<K>& a, const std::vector<K>& b) {
    auto part = solve(a, b);
    if (!part) return std::nullopt;
    return AffineSolutions<K>{std::move(*part), kernel_basis(a)};
}

} // namespace canproj
