#pragma once

// Exact linear algebra over the rationals.
//
// Everything goes through one sparse engine: rows are sorted (column, value)
// lists and EchelonBasis keeps pivot rows keyed by their leading column, each
// normalized to leading coefficient 1. Inserting a row reduces it against
// existing pivots in increasing column order; only columns to the right of
// the current lead can fill in, so the loop terminates.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/rational.hpp"

namespace hfsi {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;
using RatVector = std::vector<Rational>;

namespace detail {

/// a + s·b on sorted sparse rows; zeros dropped.
inline SparseRow axpy(const SparseRow& a, const Rational& s, const SparseRow& b) {
    SparseRow out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            out.push_back(*ia++);
        } else if (ia == a.end() || ib->first < ia->first) {
            out.emplace_back(ib->first, s * ib->second);
            ++ib;
        } else {
            Rational v = ia->second + s * ib->second;
            if (v != 0) out.emplace_back(ia->first, std::move(v));
            ++ia;
            ++ib;
        }
    }
    return out;
}

inline Rational entry(const SparseRow& row, std::size_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& p, std::size_t c) { return p.first < c; });
    return (it != row.end() && it->first == col) ? it->second : Rational(0);
}

}  // namespace detail

/// Sorts by column, merges duplicates and drops zeros.
inline SparseRow canonical_row(SparseRow row) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseRow out;
    out.reserve(row.size());
    for (auto& [c, v] : row) {
        if (!out.empty() && out.back().first == c)
            out.back().second += v;
        else
            out.emplace_back(c, std::move(v));
    }
    std::erase_if(out, [](const auto& p) { return p.second == 0; });
    return out;
}

inline SparseRow to_sparse(const RatVector& v) {
    SparseRow out;
    for (std::size_t c = 0; c < v.size(); ++c)
        if (v[c] != 0) out.emplace_back(c, v[c]);
    return out;
}

inline RatVector to_dense(const SparseRow& row, std::size_t cols) {
    RatVector out(cols, Rational(0));
    for (const auto& [c, v] : row) out.at(c) = v;
    return out;
}

/// Incrementally maintained row echelon form.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return pivots_.size(); }
    const std::map<std::size_t, SparseRow>& pivots() const { return pivots_; }

    /// Reduces `row` against the current pivots until its lead is a non-pivot
    /// column; empty result means the row was dependent.
    SparseRow reduce(SparseRow row) const {
        while (!row.empty()) {
            auto pv = pivots_.find(row.front().first);
            if (pv == pivots_.end()) break;
            Rational s = -row.front().second;
            row = detail::axpy(row, s, pv->second);
        }
        return row;
    }

    /// Inserts a row; returns true when it raised the rank.
    bool insert(SparseRow row) {
        for (const auto& p : row)
            if (p.first >= cols_) throw DimensionMismatch("row entry beyond column count");
        row = reduce(std::move(row));
        if (row.empty()) return false;
        Rational inv = 1 / row.front().second;
        for (auto& p : row) p.second *= inv;
        std::size_t lead = row.front().first;
        pivots_.emplace(lead, std::move(row));
        return true;
    }

    bool insert(const RatVector& row) { return insert(to_sparse(row)); }

    /// True when `row` lies in the span of the inserted rows.
    bool contains(SparseRow row) const { return reduce(std::move(row)).empty(); }

    /// Back-substitutes so every pivot column is zero in all other rows.
    void make_reduced() {
        for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
            const std::size_t col = it->first;
            const SparseRow& prow = it->second;
            for (auto& [lead, row] : pivots_) {
                if (lead >= col) break;
                Rational v = detail::entry(row, col);
                if (v != 0) row = detail::axpy(row, -v, prow);
            }
        }
    }

    /// Kernel basis of the inserted rows: one vector per free column f with
    /// x_f = 1, all other free entries 0. Unique for a given column order.
    std::vector<SparseRow> kernel() const {
        std::vector<SparseRow> out;
        std::vector<bool> is_pivot(cols_, false);
        for (const auto& [lead, row] : pivots_) is_pivot[lead] = true;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (is_pivot[f]) continue;
            // Back-substitute over pivots in decreasing lead order.
            std::map<std::size_t, Rational> x;
            x.emplace(f, Rational(1));
            for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
                if (it->first > f) continue;
                Rational s = 0;
                for (const auto& [c, v] : it->second) {
                    if (c == it->first) continue;
                    auto xv = x.find(c);
                    if (xv != x.end()) s -= v * xv->second;
                }
                if (s != 0) x.emplace(it->first, std::move(s));
            }
            SparseRow v(x.begin(), x.end());
            out.push_back(std::move(v));
        }
        return out;
    }

private:
    std::size_t cols_;
    std::map<std::size_t, SparseRow> pivots_;
};

/// Matrix stored as sparse rows. The workhorse for large coefficient-matched systems.
class SparseRatMatrix {
public:
    SparseRatMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}
    explicit SparseRatMatrix(std::size_t cols) : cols_(cols) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const std::vector<SparseRow>& row_data() const { return rows_; }
    const SparseRow& row(std::size_t r) const { return rows_.at(r); }

    void add_row(SparseRow row) {
        row = canonical_row(std::move(row));
        for (const auto& p : row)
            if (p.first >= cols_) throw DimensionMismatch("row entry beyond column count");
        rows_.push_back(std::move(row));
    }

    /// Number of rows with at least one nonzero entry.
    std::size_t nonzero_rows() const {
        return static_cast<std::size_t>(std::count_if(rows_.begin(), rows_.end(), [](const auto& r) { return !r.empty(); }));
    }

    RatVector apply(const RatVector& x) const {
        if (x.size() != cols_) throw DimensionMismatch("apply: vector length differs from column count");
        RatVector out(rows_.size(), Rational(0));
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (const auto& [c, v] : rows_[r]) out[r] += v * x[c];
        return out;
    }

    EchelonBasis echelon() const {
        EchelonBasis basis(cols_);
        for (const auto& row : rows_) basis.insert(row);
        return basis;
    }

private:
    std::size_t cols_;
    std::vector<SparseRow> rows_;
};

/// Dense rational matrix.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}
    RatMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& r : init) {
            if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_.at(r * cols_ + c); }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_.at(r * cols_ + c); }

    RatVector row(std::size_t r) const {
        return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        RatMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    RatVector operator*(const RatVector& x) const {
        if (x.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
        RatVector out(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * x[j];
        return out;
    }

    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    SparseRatMatrix sparse() const {
        SparseRatMatrix s(cols_);
        for (std::size_t r = 0; r < rows_; ++r) s.add_row(to_sparse(row(r)));
        return s;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

inline std::size_t rank(const SparseRatMatrix& m) { return m.echelon().rank(); }
inline std::size_t rank(const RatMatrix& m) { return rank(m.sparse()); }

inline std::vector<RatVector> nullspace(const SparseRatMatrix& m) {
    std::vector<RatVector> out;
    for (const auto& v : m.echelon().kernel()) out.push_back(to_dense(v, m.cols()));
    return out;
}

inline std::vector<RatVector> nullspace(const RatMatrix& m) { return nullspace(m.sparse()); }

/// Exact inverse by Gauss-Jordan; nullopt when singular.
inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = m.rows();
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a(piv, col) == 0) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        Rational s = 1 / a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) *= s;
            inv(col, j) *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            Rational f = a(r, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

}  // namespace hfsi
