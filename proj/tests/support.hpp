#pragma once

// Shared generators and small builders for the test binaries.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "hfsi/hfsi.hpp"

namespace hfsi::testing {

using OneForm = std::vector<LaurentPoly>;

/// x_i with i 1-based.
inline LaurentPoly x(std::size_t n, std::size_t i) { return LaurentPoly::variable(n, i - 1); }
inline LaurentPoly cst(std::size_t n, long p, long q = 1) { return LaurentPoly::constant(n, make_rational(p, q)); }
inline LaurentPoly mono(Exponents e, long p = 1, long q = 1) { return LaurentPoly::monomial(std::move(e), make_rational(p, q)); }

inline OneForm zero_form(std::size_t n) { return OneForm(n, LaurentPoly(n)); }

/// dx_i, 1-based.
inline OneForm dx(std::size_t n, std::size_t i) {
    OneForm f = zero_form(n);
    f[i - 1] = LaurentPoly::constant(n, 1);
    return f;
}

/// x_a dx_b − x_b dx_a, 1-based.
inline OneForm rot(std::size_t n, std::size_t a, std::size_t b) {
    OneForm f = zero_form(n);
    f[b - 1] = f[b - 1] + x(n, a);
    f[a - 1] = f[a - 1] - x(n, b);
    return f;
}

inline OneForm operator+(OneForm a, const OneForm& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}
inline OneForm operator-(OneForm a, const OneForm& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}
inline OneForm operator*(const LaurentPoly& f, OneForm a) {
    for (auto& c : a) c = f * c;
    return a;
}

/// Symmetric product αβ = ½(α⊗β + β⊗α).
inline SymTensorField sym(const OneForm& a, const OneForm& b) {
    const std::size_t n = a.size();
    SymTensorField k(n, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            k.set({int(i), int(j)}, (a[i] * b[j] + a[j] * b[i]) * make_rational(1, 2));
    return k;
}

inline SymTensorField operator+(const SymTensorField& a, const SymTensorField& b) {
    SymTensorField out = a;
    for (const auto& [idx, p] : b.components()) out.add(idx, p);
    return out;
}

inline SymTensorField scale(const SymTensorField& a, const LaurentPoly& f) {
    SymTensorField out(a.dim(), a.degree());
    for (const auto& [idx, p] : a.components()) out.set(idx, f * p);
    return out;
}

/// Dimension of the solution space of ∂_(i K_jk) = 0 over all symmetric
/// tensors with components of degree ≤ 2, by direct linear solve.
inline std::size_t killing_ansatz_dimension(std::size_t n) {
    std::vector<Exponents> monos;
    for (const auto& e : window_monomials(ExponentWindow::uniform(n, 0, 2, 2))) monos.push_back(e);
    std::map<std::pair<IndexTuple, Exponents>, std::size_t> col;
    std::vector<std::pair<IndexTuple, Exponents>> keys;
    detail::for_each_sorted_tuple(n, 2, [&](const IndexTuple& ij) {
        for (const auto& e : monos) {
            col[{ij, e}] = keys.size();
            keys.emplace_back(ij, e);
        }
    });
    // Each unknown contributes c·∂_l x^e to the (sorted i, j, l) equation.
    std::map<std::pair<IndexTuple, Exponents>, SparseRow> eqs;
    for (std::size_t c = 0; c < keys.size(); ++c) {
        const auto& [ij, e] = keys[c];
        for (std::size_t l = 0; l < n; ++l) {
            if (e[l] == 0) continue;
            Exponents d = e;
            d[l] -= 1;
            IndexTuple ijl{ij[0], ij[1], int(l)};
            std::sort(ijl.begin(), ijl.end());
            eqs[{ijl, d}].emplace_back(c, Rational(e[l]));
        }
    }
    SparseRatMatrix m(keys.size());
    for (auto& [k, row] : eqs) m.add_row(canonical_row(row));
    return nullspace(m).size();
}

/// Deterministic random objects.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

    Rational rational(long bound = 9) {
        long p = integer(-bound, bound);
        long q = integer(1, bound);
        return make_rational(p, q);
    }

    Rational nonzero_rational(long bound = 9) {
        Rational r = 0;
        while (r == 0) r = rational(bound);
        return r;
    }

    std::vector<Rational> point(std::size_t n) {
        std::vector<Rational> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(nonzero_rational());
        return out;
    }

    LaurentPoly poly(std::size_t n, std::size_t max_terms = 4, int lo = -2, int hi = 3) {
        LaurentPoly p(n);
        const long terms = integer(0, long(max_terms));
        for (long t = 0; t < terms; ++t) {
            Exponents e(n);
            for (auto& v : e) v = int(integer(lo, hi));
            p.add_term(e, rational());
        }
        return p;
    }

    RatMatrix matrix(std::size_t rows, std::size_t cols, long bound = 3) {
        RatMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = make_rational(integer(-bound, bound));
        return m;
    }

    /// Random low-rank matrix: product of rows×k and k×cols factors.
    RatMatrix low_rank_matrix(std::size_t rows, std::size_t cols) {
        const std::size_t k = std::size_t(integer(0, long(std::min(rows, cols))));
        return matrix(rows, k, 2) * matrix(k, cols, 2);
    }

    FlatMetric metric(std::size_t n) {
        while (true) {
            RatMatrix s = matrix(n, n, 2);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < i; ++j) s(i, j) = s(j, i);
            if (inverse(s)) return FlatMetric(s);
        }
    }

    PhasePoly phase_poly(std::size_t n, std::size_t max_terms = 3) {
        PhasePoly f(n);
        const long terms = integer(1, long(max_terms));
        for (long t = 0; t < terms; ++t) {
            Exponents e(n, 0);
            const long deg = integer(0, 2);
            for (long d = 0; d < deg; ++d) e[std::size_t(integer(0, long(n) - 1))] += 1;
            f.add_term(e, poly(n, 2, -1, 2));
        }
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace hfsi::testing
