#pragma once

// Constant metrics in affine coordinates. Christoffel symbols vanish, so every
// covariant derivative in this library is a plain coordinate derivative.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/laurent_poly.hpp"
#include "hfsi/linear_algebra.hpp"

namespace hfsi {

using IndexTuple = std::vector<int>;

class FlatMetric {
public:
    explicit FlatMetric(RatMatrix g) : g_(std::move(g)) {
        if (g_.rows() == 0 || g_.rows() != g_.cols()) throw FormatError("metric must be a non-empty square matrix");
        if (!g_.is_symmetric()) throw FormatError("metric is not symmetric");
        auto inv = inverse(g_);
        if (!inv) throw FormatError("metric is degenerate");
        g_inv_ = std::move(*inv);
    }

    static FlatMetric euclidean(std::size_t n) { return FlatMetric(RatMatrix::identity(n)); }

    /// Block-diagonal g ⊕ h, with h acting on the trailing coordinates.
    static FlatMetric direct_sum(const FlatMetric& a, const FlatMetric& b) {
        const std::size_t na = a.dim(), n = na + b.dim();
        RatMatrix g(n, n);
        for (std::size_t i = 0; i < na; ++i)
            for (std::size_t j = 0; j < na; ++j) g(i, j) = a.g(i, j);
        for (std::size_t i = 0; i < b.dim(); ++i)
            for (std::size_t j = 0; j < b.dim(); ++j) g(na + i, na + j) = b.g(i, j);
        return FlatMetric(std::move(g));
    }

    std::size_t dim() const { return g_.rows(); }
    const Rational& g(std::size_t i, std::size_t j) const { return g_(i, j); }
    const Rational& g_inv(std::size_t i, std::size_t j) const { return g_inv_(i, j); }
    const RatMatrix& matrix() const { return g_; }
    const RatMatrix& inverse_matrix() const { return g_inv_; }

    friend bool operator==(const FlatMetric& a, const FlatMetric& b) { return a.g_ == b.g_; }

private:
    RatMatrix g_;
    RatMatrix g_inv_;
};

/// Fully symmetric covariant tensor field; only sorted index tuples are stored,
/// and only nonzero components.
class SymTensorField {
public:
    SymTensorField(std::size_t dim, std::size_t degree) : dim_(dim), degree_(degree) {}

    std::size_t dim() const { return dim_; }
    std::size_t degree() const { return degree_; }
    const std::map<IndexTuple, LaurentPoly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    LaurentPoly get(IndexTuple idx) const {
        check(idx);
        std::sort(idx.begin(), idx.end());
        auto it = comps_.find(idx);
        return it == comps_.end() ? LaurentPoly(dim_) : it->second;
    }

    void set(IndexTuple idx, LaurentPoly value) {
        check(idx);
        if (value.arity() != dim_) throw ArityMismatch("tensor component arity differs from dimension");
        std::sort(idx.begin(), idx.end());
        if (value.is_zero())
            comps_.erase(idx);
        else
            comps_.insert_or_assign(std::move(idx), std::move(value));
    }

    void add(IndexTuple idx, const LaurentPoly& value) { set(idx, get(idx) + value); }

    friend bool operator==(const SymTensorField& a, const SymTensorField& b) {
        return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.comps_ == b.comps_;
    }

private:
    void check(const IndexTuple& idx) const {
        if (idx.size() != degree_) throw DimensionMismatch("index tuple length differs from tensor degree");
        for (int i : idx)
            if (i < 0 || static_cast<std::size_t>(i) >= dim_) throw DimensionMismatch("tensor index out of range");
    }

    std::size_t dim_, degree_;
    std::map<IndexTuple, LaurentPoly> comps_;
};

/// General tensor field over full index tuples. Which slots are contravariant is
/// a convention of the producer; raise_last_index makes the last slot upper.
class TensorField {
public:
    TensorField(std::size_t dim, std::size_t rank) : dim_(dim), rank_(rank) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rank_; }
    const std::map<IndexTuple, LaurentPoly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    LaurentPoly get(const IndexTuple& idx) const {
        check(idx);
        auto it = comps_.find(idx);
        return it == comps_.end() ? LaurentPoly(dim_) : it->second;
    }

    void set(IndexTuple idx, LaurentPoly value) {
        check(idx);
        if (value.is_zero())
            comps_.erase(idx);
        else
            comps_.insert_or_assign(std::move(idx), std::move(value));
    }

    friend bool operator==(const TensorField& a, const TensorField& b) {
        return a.dim_ == b.dim_ && a.rank_ == b.rank_ && a.comps_ == b.comps_;
    }

private:
    void check(const IndexTuple& idx) const {
        if (idx.size() != rank_) throw DimensionMismatch("index tuple length differs from tensor rank");
        for (int i : idx)
            if (i < 0 || static_cast<std::size_t>(i) >= dim_) throw DimensionMismatch("tensor index out of range");
    }

    std::size_t dim_, rank_;
    std::map<IndexTuple, LaurentPoly> comps_;
};

namespace detail {

/// Calls f on every index tuple of the given length over {0..dim-1}.
inline void for_each_tuple(std::size_t dim, std::size_t len, const std::function<void(const IndexTuple&)>& f) {
    IndexTuple idx(len, 0);
    if (len == 0) {
        f(idx);
        return;
    }
    while (true) {
        f(idx);
        std::size_t pos = len;
        while (pos > 0) {
            --pos;
            if (static_cast<std::size_t>(++idx[pos]) < dim) break;
            idx[pos] = 0;
            if (pos == 0) return;
        }
    }
}

/// Calls f on every non-decreasing index tuple of the given length.
inline void for_each_sorted_tuple(std::size_t dim, std::size_t len, const std::function<void(const IndexTuple&)>& f) {
    for_each_tuple(dim, len, [&](const IndexTuple& idx) {
        if (std::is_sorted(idx.begin(), idx.end())) f(idx);
    });
}

template <typename Tensor>
TensorField contract_last_with(const Tensor& t, std::size_t rank, const RatMatrix& m) {
    const std::size_t n = t.dim();
    TensorField out(n, rank);
    for_each_tuple(n, rank - 1, [&](const IndexTuple& lower) {
        IndexTuple src = lower;
        src.push_back(0);
        std::vector<LaurentPoly> column;
        column.reserve(n);
        bool any = false;
        for (std::size_t a = 0; a < n; ++a) {
            src.back() = static_cast<int>(a);
            column.push_back(t.get(src));
            any = any || !column.back().is_zero();
        }
        if (!any) return;
        for (std::size_t k = 0; k < n; ++k) {
            LaurentPoly acc(n);
            for (std::size_t a = 0; a < n; ++a)
                if (m(a, k) != 0 && !column[a].is_zero()) acc += column[a] * m(a, k);
            IndexTuple dst = lower;
            dst.push_back(static_cast<int>(k));
            out.set(std::move(dst), std::move(acc));
        }
    });
    return out;
}

}  // namespace detail

/// (t^{…})_{i₁…i_{d−1}}{}^k = t_{i₁…i_{d−1}a} g^{ak}.
inline TensorField raise_last_index(const SymTensorField& t, const FlatMetric& g) {
    if (t.dim() != g.dim()) throw DimensionMismatch("raise_last_index: tensor and metric dimensions differ");
    if (t.degree() == 0) throw DimensionMismatch("raise_last_index: degree-0 tensor has no index");
    return detail::contract_last_with(t, t.degree(), g.inverse_matrix());
}

inline TensorField raise_last_index(const TensorField& t, const FlatMetric& g) {
    if (t.dim() != g.dim()) throw DimensionMismatch("raise_last_index: tensor and metric dimensions differ");
    return detail::contract_last_with(t, t.rank(), g.inverse_matrix());
}

inline TensorField lower_last_index(const TensorField& t, const FlatMetric& g) {
    if (t.dim() != g.dim()) throw DimensionMismatch("lower_last_index: tensor and metric dimensions differ");
    return detail::contract_last_with(t, t.rank(), g.matrix());
}

/// g^{ab} t_{abk}.
inline SymTensorField metric_trace(const SymTensorField& t, const FlatMetric& g) {
    if (t.dim() != g.dim()) throw DimensionMismatch("metric_trace: tensor and metric dimensions differ");
    if (t.degree() != 3) throw DimensionMismatch("metric_trace expects a degree-3 tensor");
    const std::size_t n = g.dim();
    SymTensorField out(n, 1);
    for (std::size_t k = 0; k < n; ++k) {
        LaurentPoly acc(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (g.g_inv(a, b) != 0) acc += t.get({int(a), int(b), int(k)}) * g.g_inv(a, b);
        out.set({int(k)}, std::move(acc));
    }
    return out;
}

inline SymTensorField hessian(const LaurentPoly& v, const FlatMetric& g) {
    if (v.arity() != g.dim()) throw DimensionMismatch("hessian: arity differs from metric dimension");
    const std::size_t n = g.dim();
    SymTensorField h(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        LaurentPoly di = v.partial(i);
        for (std::size_t j = i; j < n; ++j) h.set({int(i), int(j)}, di.partial(j));
    }
    return h;
}

/// Laplace-Beltrami operator g^{ab} ∂_a ∂_b V.
inline LaurentPoly laplacian(const LaurentPoly& v, const FlatMetric& g) {
    if (v.arity() != g.dim()) throw DimensionMismatch("laplacian: arity differs from metric dimension");
    const std::size_t n = g.dim();
    LaurentPoly acc(n);
    for (std::size_t a = 0; a < n; ++a) {
        LaurentPoly da = v.partial(a);
        for (std::size_t b = 0; b < n; ++b)
            if (g.g_inv(a, b) != 0) acc += da.partial(b) * g.g_inv(a, b);
    }
    return acc;
}

/// g^{ab} t_{ab} for a symmetric 2-tensor.
inline LaurentPoly metric_trace2(const SymTensorField& t, const FlatMetric& g) {
    if (t.dim() != g.dim() || t.degree() != 2) throw DimensionMismatch("metric_trace2 expects a matching 2-tensor");
    LaurentPoly acc(g.dim());
    for (std::size_t a = 0; a < g.dim(); ++a)
        for (std::size_t b = 0; b < g.dim(); ++b)
            if (g.g_inv(a, b) != 0) acc += t.get({int(a), int(b)}) * g.g_inv(a, b);
    return acc;
}

}  // namespace hfsi
