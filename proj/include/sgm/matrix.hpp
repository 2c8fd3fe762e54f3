#pragma once

#include "sgm/integer.hpp"

#include <algorithm>
#include <cassert>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace sgm {

/// Dense row-major matrix of unbounded integers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            for (long long x : row) data_.emplace_back(x);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Integer& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const Integer& operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    IntVector row(std::size_t r) const {
        return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }
    IntVector column(std::size_t c) const {
        IntVector out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    IntMatrix transposed() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
    }
    /// row[dst] += factor * row[src]
    void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
        if (factor == 0) return;
        for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += factor * (*this)(src, c);
    }
    /// col[dst] += factor * col[src]
    void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
        if (factor == 0) return;
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += factor * (*this)(r, src);
    }
    void negate_row(std::size_t r) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch in product");
        IntMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    IntVector apply(const IntVector& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector length mismatch in matrix apply");
        IntVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (v[j] != 0) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
        os << '[';
        for (std::size_t r = 0; r < m.rows_; ++r) {
            os << (r ? "; " : "");
            for (std::size_t c = 0; c < m.cols_; ++c) os << (c ? "," : "") << m(r, c);
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    IntVector data_;
};

/// D = U * A * V with D diagonal, d_1 | d_2 | ..., U and V unimodular.
struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;

    /// Nonzero diagonal entries d_1, ..., d_r.
    IntVector invariant_factors() const {
        IntVector out;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i)
            if (D(i, i) != 0) out.push_back(D(i, i));
        return out;
    }
    std::size_t rank() const { return invariant_factors().size(); }
};

namespace detail {

// Smallest nonzero |entry| in the trailing block starting at (t, t).
inline bool find_pivot(const IntMatrix& a, std::size_t t, std::size_t& pr, std::size_t& pc) {
    bool found = false;
    Integer best;
    for (std::size_t r = t; r < a.rows(); ++r)
        for (std::size_t c = t; c < a.cols(); ++c) {
            const Integer& x = a(r, c);
            if (x == 0) continue;
            Integer ax = abs(x);
            if (!found || ax < best) {
                found = true;
                best = ax;
                pr = r;
                pc = c;
                if (best == 1) return true;
            }
        }
    return found;
}

// Quotient rounded to nearest, so the remainder has absolute value at most |m| / 2.
inline Integer nearest_quotient(const Integer& x, const Integer& m) {
    Integer q = floor_div(x, m);
    Integer r = x - q * m;
    if (2 * abs(r) > abs(m)) q += (m > 0) == (r > 0) ? 1 : -1;
    return q;
}

}  // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& input) {
    const std::size_t rows = input.rows();
    const std::size_t cols = input.cols();
    IntMatrix a = input;
    IntMatrix u = IntMatrix::identity(rows);
    IntMatrix v = IntMatrix::identity(cols);

    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Always eliminate with the smallest entry of the trailing block; keeps growth in check.
            std::size_t pr = t, pc = t;
            if (!detail::find_pivot(a, t, pr, pc)) break;
            a.swap_rows(t, pr);
            u.swap_rows(t, pr);
            a.swap_cols(t, pc);
            v.swap_cols(t, pc);

            bool clean = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                if (a(r, t) == 0) continue;
                Integer q = detail::nearest_quotient(a(r, t), a(t, t));
                a.add_row(r, t, -q);
                u.add_row(r, t, -q);
                clean = clean && a(r, t) == 0;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                if (a(t, c) == 0) continue;
                Integer q = detail::nearest_quotient(a(t, c), a(t, t));
                a.add_col(c, t, -q);
                v.add_col(c, t, -q);
                clean = clean && a(t, c) == 0;
            }
            if (!clean) continue;

            // The pivot must divide the remaining block; otherwise fold an offending row in.
            bool folded = false;
            for (std::size_t r = t + 1; r < rows && !folded; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (a(r, c) % a(t, t) != 0) {
                        a.add_row(t, r, 1);
                        u.add_row(t, r, 1);
                        folded = true;
                        break;
                    }
            if (!folded) break;
        }
        if (a(t, t) < 0) {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    return {std::move(u), std::move(a), std::move(v)};
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && a(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            a.swap_rows(k, swap);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

/// Inverse of a unimodular matrix, via its Smith form: U M V = I gives M^{-1} = V U.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    SmithForm s = smith_normal_form(m);
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (s.D(i, i) != 1) throw std::invalid_argument("matrix is not unimodular");
    return s.V * s.U;
}

/// Rank over Z (equivalently over Q).
inline std::size_t integer_rank(const IntMatrix& m) { return smith_normal_form(m).rank(); }

/// Rank over the prime field F_p.
inline std::size_t rank_mod_prime(const IntMatrix& m, const Integer& p) {
    IntMatrix a = m;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = floor_mod(a(r, c), p);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
        std::size_t pivot = rank;
        while (pivot < a.rows() && a(pivot, c) == 0) ++pivot;
        if (pivot == a.rows()) continue;
        a.swap_rows(rank, pivot);
        Integer inv = floor_mod(extended_gcd(a(rank, c), p).s, p);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == rank || a(r, c) == 0) continue;
            Integer f = floor_mod(a(r, c) * inv, p);
            for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = floor_mod(a(r, j) - f * a(rank, j), p);
        }
        ++rank;
    }
    return rank;
}

}  // namespace sgm
