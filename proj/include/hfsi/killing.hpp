#pragma once

// Killing tensors of a flat metric and their compatibility with a potential.
//
// Killing tensors are stored with lowered indices. In affine coordinates the
// Killing equation ∂_(i K_jk) = 0 does not involve the metric, and every
// solution has polynomial components of degree ≤ 2.
//
// A Killing tensor K is compatible with V when the 1-form ω_i = K_i^a ∂_a V is
// closed; then F = K^ij p_i p_j + W with dW = ω Poisson-commutes with
// H = g^ij p_i p_j + V.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/flat_geometry.hpp"
#include "hfsi/hesse_frobenius.hpp"
#include "hfsi/laurent_poly.hpp"
#include "hfsi/linear_algebra.hpp"
#include "hfsi/potential_solver.hpp"

namespace hfsi {

/// Symmetric covariant 2-tensor field with polynomial components.
using KillingTensor = SymTensorField;

/// Killing-space dimension of flat n-space: n(n+1)²(n+2)/12.
constexpr std::size_t killing_dimension(std::size_t n) { return n * (n + 1) * (n + 1) * (n + 2) / 12; }

/// ∂_i K_jk + ∂_j K_ki + ∂_k K_ij = 0 for all i ≤ j ≤ k.
inline bool check_killing(const SymTensorField& k, const FlatMetric& g) {
    if (k.degree() != 2 || k.dim() != g.dim()) throw DimensionMismatch("check_killing expects a matching 2-tensor");
    bool ok = true;
    detail::for_each_sorted_tuple(g.dim(), 3, [&](const IndexTuple& t) {
        if (!ok) return;
        const auto i = std::size_t(t[0]), j = std::size_t(t[1]), l = std::size_t(t[2]);
        LaurentPoly s = k.get({t[1], t[2]}).partial(i) + k.get({t[2], t[0]}).partial(j) + k.get({t[0], t[1]}).partial(l);
        ok = s.is_zero();
    });
    return ok;
}

/// Coordinates on the space of symmetric 2-tensors with polynomial components
/// of degree ≤ 2: one column per (i ≤ j, monomial). Quadratic columns first.
class TensorCoordinates {
public:
    explicit TensorCoordinates(std::size_t n) : n_(n) {
        std::vector<Exponents> monos;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                Exponents e(n, 0);
                e[a] += 1;
                e[b] += 1;
                monos.push_back(e);
            }
        for (std::size_t a = 0; a < n; ++a) {
            Exponents e(n, 0);
            e[a] = 1;
            monos.push_back(e);
        }
        monos.push_back(Exponents(n, 0));
        for (const auto& e : monos)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    index_.emplace(std::make_pair(IndexTuple{int(i), int(j)}, e), keys_.size());
                    keys_.emplace_back(IndexTuple{int(i), int(j)}, e);
                }
    }

    std::size_t dim() const { return n_; }
    std::size_t size() const { return keys_.size(); }
    const std::pair<IndexTuple, Exponents>& key(std::size_t c) const { return keys_.at(c); }

    /// Nullopt when some component leaves the degree-≤2 polynomial space.
    std::optional<SparseRow> row(const SymTensorField& k) const {
        SparseRow r;
        for (const auto& [idx, poly] : k.components())
            for (const auto& [e, c] : poly.terms()) {
                auto it = index_.find({idx, e});
                if (it == index_.end()) return std::nullopt;
                r.emplace_back(it->second, c);
            }
        return canonical_row(std::move(r));
    }

    SymTensorField tensor(const SparseRow& row) const {
        SymTensorField k(n_, 2);
        for (const auto& [c, v] : row) {
            const auto& [idx, e] = keys_.at(c);
            k.add(idx, LaurentPoly::monomial(e, v));
        }
        return k;
    }

private:
    std::size_t n_;
    std::map<std::pair<IndexTuple, Exponents>, std::size_t> index_;
    std::vector<std::pair<IndexTuple, Exponents>> keys_;
};

namespace detail {

using OneForm = std::vector<LaurentPoly>;

/// ½(α_i β_j + α_j β_i).
inline SymTensorField symmetric_product(const OneForm& a, const OneForm& b) {
    const std::size_t n = a.size();
    SymTensorField k(n, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            k.set({int(i), int(j)}, (a[i] * b[j] + a[j] * b[i]) * make_rational(1, 2));
    return k;
}

}  // namespace detail

/// A basis of the Killing tensors of g built from symmetrized products of the
/// Killing 1-forms dx_a and x_a dx_b − x_b dx_a, dependent products dropped by
/// exact rank. Ordered: translation squares, translation-rotation, rotation pairs.
inline std::vector<KillingTensor> killing_basis(const FlatMetric& g) {
    const std::size_t n = g.dim();
    std::vector<detail::OneForm> translations, rotations;
    for (std::size_t a = 0; a < n; ++a) {
        detail::OneForm f(n, LaurentPoly(n));
        f[a] = LaurentPoly::constant(n, 1);
        translations.push_back(std::move(f));
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            detail::OneForm f(n, LaurentPoly(n));
            f[b] = LaurentPoly::variable(n, a);
            f[a] = -LaurentPoly::variable(n, b);
            rotations.push_back(std::move(f));
        }

    TensorCoordinates coords(n);
    EchelonBasis ech(coords.size());
    std::vector<KillingTensor> out;
    auto consider = [&](const detail::OneForm& a, const detail::OneForm& b) {
        SymTensorField k = detail::symmetric_product(a, b);
        if (ech.insert(*coords.row(k))) out.push_back(std::move(k));
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) consider(translations[a], translations[b]);
    for (const auto& t : translations)
        for (const auto& r : rotations) consider(t, r);
    for (std::size_t a = 0; a < rotations.size(); ++a)
        for (std::size_t b = a; b < rotations.size(); ++b) consider(rotations[a], rotations[b]);
    return out;
}

namespace detail {

/// K_i^a = K_ib g^ba as an n×n table.
inline std::vector<std::vector<LaurentPoly>> mixed_components(const SymTensorField& k, const FlatMetric& g) {
    const std::size_t n = g.dim();
    std::vector<std::vector<LaurentPoly>> m(n, std::vector<LaurentPoly>(n, LaurentPoly(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < n; ++b) {
            LaurentPoly kib = k.get({int(i), int(b)});
            if (kib.is_zero()) continue;
            for (std::size_t a = 0; a < n; ++a)
                if (g.g_inv(b, a) != 0) m[i][a] += kib * g.g_inv(b, a);
        }
    return m;
}

inline std::vector<LaurentPoly> gradient(const LaurentPoly& v) {
    std::vector<LaurentPoly> out;
    for (std::size_t k = 0; k < v.arity(); ++k) out.push_back(v.partial(k));
    return out;
}

/// ω_i = K_i^a ∂_a V.
inline std::vector<LaurentPoly> contract_gradient(const std::vector<std::vector<LaurentPoly>>& mixed,
                                                  const std::vector<LaurentPoly>& grad) {
    const std::size_t n = grad.size();
    std::vector<LaurentPoly> w(n, LaurentPoly(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a)
            if (!mixed[i][a].is_zero() && !grad[a].is_zero()) w[i] += mixed[i][a] * grad[a];
    return w;
}

using BdRowKey = std::tuple<std::size_t, int, int, Exponents>;

inline SparseRatMatrix assemble(std::map<BdRowKey, SparseRow>& rows, std::size_t cols) {
    SparseRatMatrix m(cols);
    for (auto& [key, row] : rows) m.add_row(std::move(row));
    return m;
}

}  // namespace detail

/// The compatibility system on the coefficients β_ν of K = Σ β_ν K^(ν):
/// rows are the monomial coefficients of ∂_i ω_j − ∂_j ω_i, ω = K(dV^(μ)),
/// for every basis potential μ and every pair i < j.
inline SparseRatMatrix bd_system(const HesseFrobenius& hf, const PotentialFamily& family,
                                 const std::vector<KillingTensor>& basis) {
    const std::size_t n = hf.dim();
    if (family.dim() != n) throw DimensionMismatch("potential family dimension differs from structure");
    std::vector<std::vector<LaurentPoly>> grads;
    for (const auto& v : family.basis) grads.push_back(detail::gradient(v));

    std::map<detail::BdRowKey, SparseRow> rows;
    for (std::size_t nu = 0; nu < basis.size(); ++nu) {
        if (basis[nu].dim() != n) throw DimensionMismatch("Killing tensor dimension differs from structure");
        const auto mixed = detail::mixed_components(basis[nu], hf.metric);
        for (std::size_t mu = 0; mu < grads.size(); ++mu) {
            const auto w = detail::contract_gradient(mixed, grads[mu]);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    LaurentPoly e = w[j].partial(i) - w[i].partial(j);
                    for (const auto& [ex, c] : e.terms()) rows[{mu, int(i), int(j), ex}].emplace_back(nu, c);
                }
        }
    }
    return detail::assemble(rows, basis.size());
}

/// The same system written with the structure tensor instead of second
/// derivatives of V:
///   (∂_j K_i^k − ∂_i K_j^k + K_i^a T̂^k_ja − K_j^a T̂^k_ia) ∂_k V = 0.
/// It agrees with bd_system on every solution of the Wilczynski equation.
inline SparseRatMatrix bd_system_structure_form(const HesseFrobenius& hf, const PotentialFamily& family,
                                                const std::vector<KillingTensor>& basis) {
    const std::size_t n = hf.dim();
    const TensorField t_hat = structure_tensor(hf).T_hat;
    std::vector<std::vector<LaurentPoly>> grads;
    for (const auto& v : family.basis) grads.push_back(detail::gradient(v));

    std::map<detail::BdRowKey, SparseRow> rows;
    for (std::size_t nu = 0; nu < basis.size(); ++nu) {
        const auto mixed = detail::mixed_components(basis[nu], hf.metric);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                std::vector<LaurentPoly> coef(n, LaurentPoly(n));
                for (std::size_t k = 0; k < n; ++k) {
                    coef[k] = mixed[i][k].partial(j) - mixed[j][k].partial(i);
                    for (std::size_t a = 0; a < n; ++a) {
                        if (!mixed[i][a].is_zero()) {
                            LaurentPoly t = t_hat.get({int(j), int(a), int(k)});
                            if (!t.is_zero()) coef[k] += mixed[i][a] * t;
                        }
                        if (!mixed[j][a].is_zero()) {
                            LaurentPoly t = t_hat.get({int(i), int(a), int(k)});
                            if (!t.is_zero()) coef[k] -= mixed[j][a] * t;
                        }
                    }
                }
                for (std::size_t mu = 0; mu < grads.size(); ++mu) {
                    LaurentPoly e(n);
                    for (std::size_t k = 0; k < n; ++k)
                        if (!coef[k].is_zero() && !grads[mu][k].is_zero()) e += coef[k] * grads[mu][k];
                    for (const auto& [ex, c] : e.terms()) rows[{mu, int(i), int(j), ex}].emplace_back(nu, c);
                }
            }
    }
    return detail::assemble(rows, basis.size());
}

/// W with ∂_i W = K_i^a ∂_a V and zero constant term.
inline LaurentPoly integrate_companion(const SymTensorField& k, const LaurentPoly& v, const FlatMetric& g) {
    const std::size_t n = g.dim();
    if (k.dim() != n || v.arity() != n) throw DimensionMismatch("integrate_companion: dimensions differ");
    const auto omega = detail::contract_gradient(detail::mixed_components(k, g), detail::gradient(v));
    LaurentPoly w(n);
    for (std::size_t i = 0; i < n; ++i) {
        LaurentPoly rest = omega[i] - w.partial(i);
        for (std::size_t prev = 0; prev < i; ++prev)
            if (rest.depends_on(prev)) throw NotClosed("companion 1-form is not closed");
        w += rest.antiderivative(i);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(w.partial(i) == omega[i])) throw NotClosed("companion 1-form is not closed");
    w.add_term(Exponents(n, 0), -w.constant_term());
    return w;
}

struct CompatibleSystem {
    HesseFrobenius structure;
    PotentialFamily family;
    std::size_t killing_space_dim = 0;
    std::vector<KillingTensor> tensors;
    /// companions[ν][μ] pairs tensors[ν] with family.basis[μ].
    std::vector<std::vector<LaurentPoly>> companions;
    /// Kernel of the structure-tensor form equals the closedness kernel.
    bool structure_form_agrees = true;

    std::size_t size() const { return tensors.size(); }
};

/// Reduced echelon basis of span(tensors) in TensorCoordinates.
inline std::vector<KillingTensor> reduced_tensor_basis(const std::vector<SymTensorField>& tensors, std::size_t n) {
    TensorCoordinates coords(n);
    EchelonBasis ech(coords.size());
    for (const auto& k : tensors) {
        auto r = coords.row(k);
        if (!r) throw DimensionMismatch("tensor outside the degree-2 polynomial space");
        ech.insert(std::move(*r));
    }
    ech.make_reduced();
    std::vector<KillingTensor> out;
    for (const auto& [lead, row] : ech.pivots()) out.push_back(coords.tensor(row));
    return out;
}

namespace detail {

inline std::vector<SymTensorField> combine(const std::vector<KillingTensor>& basis, const std::vector<SparseRow>& kernel,
                                           std::size_t n) {
    std::vector<SymTensorField> out;
    for (const auto& beta : kernel) {
        SymTensorField k(n, 2);
        for (const auto& [nu, c] : beta)
            for (const auto& [idx, poly] : basis[nu].components()) k.add(idx, poly * c);
        out.push_back(std::move(k));
    }
    return out;
}

inline bool same_span(const std::vector<SparseRow>& a, const std::vector<SparseRow>& b, std::size_t cols) {
    if (a.size() != b.size()) return false;
    EchelonBasis ech(cols);
    for (const auto& r : a) ech.insert(r);
    for (const auto& r : b)
        if (!ech.contains(r)) return false;
    return true;
}

}  // namespace detail

/// Solves the compatibility system for the whole family and integrates a
/// companion potential for every (tensor, basis potential) pair.
inline CompatibleSystem compatible_killing(const HesseFrobenius& hf, const PotentialFamily& family,
                                           bool cross_check = true) {
    const std::size_t n = hf.dim();
    const std::vector<KillingTensor> basis = killing_basis(hf.metric);
    const auto kernel = bd_system(hf, family, basis).echelon().kernel();

    CompatibleSystem out{hf, family, basis.size(), reduced_tensor_basis(detail::combine(basis, kernel, n), n), {}, true};
    if (cross_check) {
        const auto alt = bd_system_structure_form(hf, family, basis).echelon().kernel();
        out.structure_form_agrees = detail::same_span(kernel, alt, basis.size());
    }
    for (const auto& k : out.tensors) {
        std::vector<LaurentPoly> row;
        for (const auto& v : family.basis) row.push_back(integrate_companion(k, v, hf.metric));
        out.companions.push_back(std::move(row));
    }
    return out;
}

/// True when K (lowered indices) lies in the span of the compatible tensors.
inline bool compatible_contains(const CompatibleSystem& sys, const SymTensorField& k) {
    TensorCoordinates coords(sys.structure.dim());
    auto r = coords.row(k);
    if (!r) return false;
    EchelonBasis ech(coords.size());
    for (const auto& t : sys.tensors) ech.insert(*coords.row(t));
    return ech.contains(std::move(*r));
}

/// A factor of a glued structure, given by the coordinates (0-based) it occupies.
struct FactorNode {
    std::string name;
    std::vector<std::size_t> coords;
    std::vector<FactorNode> children;
};

struct InheritanceEntry {
    std::string name;
    std::vector<std::size_t> coords;
    std::size_t depth = 0;
    std::size_t supported = 0;   ///< compatible tensors living entirely on these coordinates
    std::size_t additional = 0;  ///< supported minus what the children already account for
};

struct InheritanceReport {
    std::vector<InheritanceEntry> entries;  ///< pre-order walk of the factor tree
    std::size_t total = 0;
    std::size_t inherited = 0;  ///< supported by some proper factor of the root
    std::size_t mixed = 0;      ///< additional at the root

    const InheritanceEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

/// Dimension of the subspace of compatible tensors supported on `coords`:
/// components K_ij with i, j in the set, depending only on those coordinates.
inline std::size_t supported_dimension(const CompatibleSystem& sys, const std::vector<std::size_t>& coords) {
    const std::size_t n = sys.structure.dim();
    std::vector<bool> inside(n, false);
    for (std::size_t c : coords) inside.at(c) = true;
    TensorCoordinates tc(n);
    auto column_inside = [&](std::size_t col) {
        const auto& [idx, e] = tc.key(col);
        if (!inside[std::size_t(idx[0])] || !inside[std::size_t(idx[1])]) return false;
        for (std::size_t j = 0; j < n; ++j)
            if (e[j] != 0 && !inside[j]) return false;
        return true;
    };
    // dim(span ∩ coordinate subspace) = k − rank of the projection onto the complement.
    EchelonBasis outside(tc.size());
    for (const auto& t : sys.tensors) {
        SparseRow r = *tc.row(t);
        std::erase_if(r, [&](const auto& p) { return column_inside(p.first); });
        outside.insert(std::move(r));
    }
    return sys.size() - outside.rank();
}

inline InheritanceReport inheritance_report(const CompatibleSystem& product, const FactorNode& root) {
    InheritanceReport rep;
    rep.total = product.size();
    auto walk = [&](auto&& self, const FactorNode& node, std::size_t depth) -> std::size_t {
        const std::size_t index = rep.entries.size();
        rep.entries.push_back({node.name, node.coords, depth, supported_dimension(product, node.coords), 0});
        std::size_t from_children = 0;
        for (const auto& child : node.children) from_children += self(self, child, depth + 1);
        rep.entries[index].additional = rep.entries[index].supported - from_children;
        return rep.entries[index].supported;
    };
    walk(walk, root, 0);
    rep.mixed = rep.entries.front().additional;
    rep.inherited = rep.total - rep.mixed;
    return rep;
}

}  // namespace hfsi
