#pragma once

// Superintegrable potentials as the kernel of the Wilczynski operator
//
//     R_ij(V) = ∂_i∂_j V − T̂^k_ij ∂_k V − (1/n) g_ij ΔV
//
// restricted to a finite window of Laurent monomials. The residual of each
// ansatz monomial is computed exactly, so every kernel element is a genuine
// solution; a small window can only lose solutions, never invent them.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/flat_geometry.hpp"
#include "hfsi/hesse_frobenius.hpp"
#include "hfsi/laurent_poly.hpp"
#include "hfsi/linear_algebra.hpp"

namespace hfsi {

/// Box lo ≤ e ≤ hi of exponent vectors, further cut by Σ|e_j| ≤ total_degree_cap.
struct ExponentWindow {
    Exponents lo;
    Exponents hi;
    int total_degree_cap = 4;

    void validate(std::size_t n) const {
        if (lo.size() != n || hi.size() != n) throw EmptyWindow("window length differs from dimension");
        for (std::size_t j = 0; j < n; ++j)
            if (lo[j] > hi[j]) throw EmptyWindow("window has lo > hi in coordinate " + std::to_string(j + 1));
        if (total_degree_cap < 0) throw EmptyWindow("negative total degree cap");
    }

    static ExponentWindow uniform(std::size_t n, int lo, int hi, int cap = 4) {
        return ExponentWindow{Exponents(n, lo), Exponents(n, hi), cap};
    }
};

/// All window monomials in canonical order.
inline std::vector<Exponents> window_monomials(const ExponentWindow& w) {
    const std::size_t n = w.lo.size();
    std::vector<Exponents> out;
    Exponents e(n);
    auto rec = [&](auto&& self, std::size_t j, int used) -> void {
        if (j == n) {
            out.push_back(e);
            return;
        }
        for (int v = w.lo[j]; v <= w.hi[j]; ++v) {
            int cost = used + std::abs(v);
            if (cost > w.total_degree_cap) continue;
            e[j] = v;
            self(self, j + 1, cost);
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

/// Applies the Wilczynski operator; holds T̂ so repeated application is cheap.
class WilczynskiOperator {
public:
    explicit WilczynskiOperator(const HesseFrobenius& hf)
        : metric_(hf.metric), t_hat_(structure_tensor(hf).T_hat), inv_n_(make_rational(1, long(hf.dim()))) {}

    const TensorField& t_hat() const { return t_hat_; }

    SymTensorField residual(const LaurentPoly& v) const {
        const std::size_t n = metric_.dim();
        if (v.arity() != n) throw DimensionMismatch("potential arity differs from structure dimension");
        std::vector<LaurentPoly> grad;
        grad.reserve(n);
        for (std::size_t k = 0; k < n; ++k) grad.push_back(v.partial(k));
        LaurentPoly lap(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (metric_.g_inv(a, b) != 0) lap += grad[a].partial(b) * metric_.g_inv(a, b);
        SymTensorField r(n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                LaurentPoly c = grad[i].partial(j);
                for (std::size_t k = 0; k < n; ++k) {
                    if (grad[k].is_zero()) continue;
                    LaurentPoly t = t_hat_.get({int(i), int(j), int(k)});
                    if (!t.is_zero()) c -= t * grad[k];
                }
                if (metric_.g(i, j) != 0) c -= lap * (metric_.g(i, j) * inv_n_);
                r.set({int(i), int(j)}, std::move(c));
            }
        return r;
    }

private:
    FlatMetric metric_;
    TensorField t_hat_;
    Rational inv_n_;
};

inline SymTensorField wilczynski_residual(const HesseFrobenius& hf, const LaurentPoly& v) {
    return WilczynskiOperator(hf).residual(v);
}

/// Lowest exponents go to −2 in coordinates where T̂ has a pole, otherwise 0;
/// highest exponent 3; Σ|e| ≤ 4.
inline ExponentWindow default_window(const HesseFrobenius& hf) {
    const std::size_t n = hf.dim();
    const TensorField t_hat = structure_tensor(hf).T_hat;
    ExponentWindow w = ExponentWindow::uniform(n, 0, 3, 4);
    for (const auto& [idx, v] : t_hat.components())
        for (std::size_t j = 0; j < n; ++j)
            if (v.has_pole_in(j)) w.lo[j] = -2;
    return w;
}

struct PotentialFamily {
    HesseFrobenius structure;
    std::vector<LaurentPoly> basis;
    ExponentWindow window;
    std::optional<std::string> warning;

    std::size_t size() const { return basis.size(); }
    std::size_t dim() const { return structure.dim(); }
};

namespace detail {

/// Columns for a set of polynomials: every monomial that occurs, highest first.
class MonomialIndex {
public:
    explicit MonomialIndex(const std::vector<LaurentPoly>& polys) {
        std::vector<Exponents> all;
        for (const auto& p : polys)
            for (const auto& [e, c] : p.terms()) all.push_back(e);
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return GradedLexLess{}(b, a); });
        all.erase(std::unique(all.begin(), all.end()), all.end());
        for (std::size_t k = 0; k < all.size(); ++k) index_.emplace(all[k], k);
        monomials_ = std::move(all);
    }

    std::size_t size() const { return monomials_.size(); }
    const Exponents& monomial(std::size_t k) const { return monomials_.at(k); }

    std::optional<SparseRow> row(const LaurentPoly& p) const {
        SparseRow r;
        for (const auto& [e, c] : p.terms()) {
            auto it = index_.find(e);
            if (it == index_.end()) return std::nullopt;
            r.emplace_back(it->second, c);
        }
        return canonical_row(std::move(r));
    }

    LaurentPoly poly(const SparseRow& row, std::size_t arity) const {
        LaurentPoly p(arity);
        for (const auto& [k, c] : row) p.add_term(monomials_.at(k), c);
        return p;
    }

private:
    std::map<Exponents, std::size_t> index_;
    std::vector<Exponents> monomials_;
};

}  // namespace detail

/// Reduced echelon basis of span(polys) with respect to the canonical order:
/// each element has leading monomial coefficient 1, and no other element
/// contains that monomial. Elements sorted by decreasing leading monomial.
inline std::vector<LaurentPoly> reduced_basis(const std::vector<LaurentPoly>& polys, std::size_t arity) {
    detail::MonomialIndex index(polys);
    EchelonBasis ech(index.size());
    for (const auto& p : polys) ech.insert(*index.row(p));
    ech.make_reduced();
    std::vector<LaurentPoly> out;
    for (const auto& [lead, row] : ech.pivots()) out.push_back(index.poly(row, arity));
    return out;
}

/// True when v is a rational linear combination of the given polynomials.
inline bool in_span(const std::vector<LaurentPoly>& basis, const LaurentPoly& v) {
    if (v.is_zero()) return true;
    std::vector<LaurentPoly> all = basis;
    all.push_back(v);
    detail::MonomialIndex index(all);
    EchelonBasis ech(index.size());
    for (const auto& p : basis) ech.insert(*index.row(p));
    return ech.contains(*index.row(v));
}

/// The coefficient-matched linear system: column c is the c-th window
/// monomial, one row per (component i ≤ j, residual monomial).
inline SparseRatMatrix wilczynski_system(const WilczynskiOperator& op, const std::vector<Exponents>& columns) {
    std::map<std::pair<IndexTuple, Exponents>, SparseRow> rows;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        SymTensorField r = op.residual(LaurentPoly::monomial(columns[c]));
        for (const auto& [idx, poly] : r.components())
            for (const auto& [e, coeff] : poly.terms()) rows[{idx, e}].emplace_back(c, coeff);
    }
    SparseRatMatrix m(columns.size());
    for (auto& [key, row] : rows) m.add_row(std::move(row));
    return m;
}

inline PotentialFamily solve_potentials(const HesseFrobenius& hf, const ExponentWindow& window) {
    const std::size_t n = hf.dim();
    window.validate(n);
    const std::vector<Exponents> columns = window_monomials(window);
    if (columns.empty()) throw EmptyWindow("window contains no monomials");

    WilczynskiOperator op(hf);
    SparseRatMatrix system = wilczynski_system(op, columns);

    std::vector<LaurentPoly> raw;
    for (const auto& v : system.echelon().kernel()) {
        LaurentPoly p(n);
        for (const auto& [c, coeff] : v) p.add_term(columns[c], coeff);
        raw.push_back(std::move(p));
    }
    PotentialFamily family{hf, reduced_basis(raw, n), window, std::nullopt};
    if (family.size() != n + 2)
        family.warning = "found " + std::to_string(family.size()) + " independent potentials, expected " +
                         std::to_string(n + 2) + " (window too small or structure not abundant)";
    return family;
}

inline PotentialFamily solve_potentials(const HesseFrobenius& hf) { return solve_potentials(hf, default_window(hf)); }

/// How a product family splits across coordinate blocks.
struct SeparationReport {
    std::vector<std::size_t> blocks;
    bool separated = true;               ///< no basis element has a monomial mixing two blocks
    std::vector<bool> element_separated;
    std::size_t coupled = 0;             ///< elements with non-constant parts in more than one block
    long factor_dimension_sum = 0;
    long deficit = 0;                    ///< factor_dimension_sum − family size
};

/// `blocks` lists consecutive block sizes; `factor_dims`, when given, are the
/// family dimensions of the factors, otherwise n_b + 2 is assumed per block.
inline SeparationReport check_separation(const PotentialFamily& family, const std::vector<std::size_t>& blocks,
                                         const std::vector<std::size_t>& factor_dims = {}) {
    const std::size_t n = family.dim();
    std::size_t total = 0;
    for (std::size_t b : blocks) {
        if (b == 0) throw SplitMismatch("empty block in split");
        total += b;
    }
    if (total != n) throw SplitMismatch("split sizes sum to " + std::to_string(total) + ", dimension is " + std::to_string(n));
    if (!factor_dims.empty() && factor_dims.size() != blocks.size())
        throw SplitMismatch("factor dimension count differs from block count");

    std::vector<std::size_t> block_of(n);
    for (std::size_t b = 0, start = 0; b < blocks.size(); start += blocks[b], ++b)
        for (std::size_t j = start; j < start + blocks[b]; ++j) block_of[j] = b;

    SeparationReport rep;
    rep.blocks = blocks;
    for (const auto& v : family.basis) {
        bool sep = true;
        std::vector<bool> touched(blocks.size(), false);
        for (const auto& [e, c] : v.terms()) {
            std::vector<bool> here(blocks.size(), false);
            std::size_t count = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (e[j] != 0 && !here[block_of[j]]) {
                    here[block_of[j]] = true;
                    touched[block_of[j]] = true;
                    ++count;
                }
            if (count > 1) sep = false;
        }
        rep.element_separated.push_back(sep);
        rep.separated = rep.separated && sep;
        if (std::count(touched.begin(), touched.end(), true) > 1) ++rep.coupled;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b)
        rep.factor_dimension_sum += long(factor_dims.empty() ? blocks[b] + 2 : factor_dims[b]);
    rep.deficit = rep.factor_dimension_sum - long(family.size());
    return rep;
}

}  // namespace hfsi
