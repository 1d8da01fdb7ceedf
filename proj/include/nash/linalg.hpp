#pragma once

#include <gmpxx.h>

#include <vector>

#include "nash/errors.hpp"

namespace nash {

/// Dense matrix of exact rationals. Small sizes only (coordinate changes,
/// Sylvester blocks), so plain Gaussian elimination is fine.
class QMatrix {
public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, mpq_class(0)) {}

    static QMatrix identity(int n) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    mpq_class& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const mpq_class& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    QMatrix operator*(const QMatrix& o) const {
        if (cols_ != o.rows_) throw PreconditionError("QMatrix: shape mismatch in product");
        QMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const mpq_class& aik = at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
            }
        return r;
    }

    std::vector<mpq_class> apply(const std::vector<mpq_class>& v) const {
        if (static_cast<int>(v.size()) != cols_)
            throw PreconditionError("QMatrix: shape mismatch in apply");
        std::vector<mpq_class> r(rows_, mpq_class(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != 0) r[i] += at(i, j) * v[j];
        return r;
    }

    mpq_class det() const {
        if (rows_ != cols_) throw PreconditionError("QMatrix: determinant of non-square matrix");
        QMatrix m = *this;
        mpq_class d(1);
        for (int c = 0; c < cols_; ++c) {
            int p = -1;
            for (int r = c; r < rows_; ++r)
                if (m.at(r, c) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return mpq_class(0);
            if (p != c) {
                m.swap_rows(p, c);
                d = -d;
            }
            d *= m.at(c, c);
            mpq_class inv = 1 / m.at(c, c);
            for (int r = c + 1; r < rows_; ++r) {
                if (m.at(r, c) == 0) continue;
                mpq_class f = m.at(r, c) * inv;
                for (int j = c; j < cols_; ++j) m.at(r, j) -= f * m.at(c, j);
            }
        }
        return d;
    }

    /// Exact inverse; throws PreconditionError on singular input.
    QMatrix inverse() const {
        if (rows_ != cols_) throw PreconditionError("QMatrix: inverse of non-square matrix");
        int n = rows_;
        QMatrix m = *this;
        QMatrix inv = identity(n);
        for (int c = 0; c < n; ++c) {
            int p = -1;
            for (int r = c; r < n; ++r)
                if (m.at(r, c) != 0) {
                    p = r;
                    break;
                }
            if (p < 0) throw PreconditionError("QMatrix: singular matrix");
            if (p != c) {
                m.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            mpq_class piv = 1 / m.at(c, c);
            for (int j = 0; j < n; ++j) {
                m.at(c, j) *= piv;
                inv.at(c, j) *= piv;
            }
            for (int r = 0; r < n; ++r) {
                if (r == c || m.at(r, c) == 0) continue;
                mpq_class f = m.at(r, c);
                for (int j = 0; j < n; ++j) {
                    m.at(r, j) -= f * m.at(c, j);
                    inv.at(r, j) -= f * inv.at(c, j);
                }
            }
        }
        return inv;
    }

private:
    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    int rows_;
    int cols_;
    std::vector<mpq_class> a_;
};

}  // namespace nash
