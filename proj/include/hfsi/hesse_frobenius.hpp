#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/flat_geometry.hpp"
#include "hfsi/laurent_poly.hpp"

namespace hfsi {

/// A flat metric together with the cubic tensor C of a product
/// X⋆Y = C_ijk X^i Y^j g^kl ∂_l. Full symmetry of C is structural.
struct HesseFrobenius {
    FlatMetric metric;
    SymTensorField C;

    HesseFrobenius(FlatMetric g, SymTensorField c) : metric(std::move(g)), C(std::move(c)) {
        if (C.dim() != metric.dim() || C.degree() != 3)
            throw DimensionMismatch("cubic tensor does not match metric dimension");
    }

    std::size_t dim() const { return metric.dim(); }
};

/// Outcome of a single axiom check. `failing` holds the first violating index
/// tuple (0-based) and `residual` the nonzero expression found there.
struct AxiomCheck {
    std::string axiom;
    bool passed = true;
    IndexTuple failing;
    std::string residual;
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    const AxiomCheck* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

/// Cubic tensor as read from input, before symmetrization: any index order.
/// Missing permutations of a listed entry are implied by symmetry.
using RawCubic = std::map<std::array<int, 3>, LaurentPoly>;

inline AxiomCheck check_symmetry(const RawCubic& raw, std::size_t dim) {
    AxiomCheck out{"symmetry", true, {}, {}};
    for (const auto& [idx, value] : raw) {
        if (value.arity() != dim) throw ArityMismatch("cubic entry arity differs from dimension");
        std::array<int, 3> p = idx;
        std::sort(p.begin(), p.end());
        do {
            auto it = raw.find(p);
            if (it == raw.end()) continue;
            const LaurentPoly& other = it->second;
            if (!(other == value)) {
                out.passed = false;
                out.failing = {idx[0], idx[1], idx[2]};
                out.residual = (value - other).str();
                return out;
            }
        } while (std::next_permutation(p.begin(), p.end()));
    }
    return out;
}

/// Collapses a raw cubic onto sorted index tuples. Call check_symmetry first;
/// for asymmetric input the last-written permutation wins.
inline SymTensorField symmetrize(const RawCubic& raw, std::size_t dim) {
    SymTensorField c(dim, 3);
    for (const auto& [idx, value] : raw) c.set({idx[0], idx[1], idx[2]}, value);
    return c;
}

/// Always passes for a constructed structure; kept so reports list all three axioms.
inline AxiomCheck check_symmetry(const HesseFrobenius& hf) {
    AxiomCheck out{"symmetry", true, {}, {}};
    for (const auto& [idx, value] : hf.C.components())
        if (value.arity() != hf.dim() || !std::is_sorted(idx.begin(), idx.end())) {
            out.passed = false;
            out.failing = idx;
        }
    return out;
}

namespace detail {

/// Cache of P(ij, kl) = C_ija g^ab C_klb keyed on sorted pairs.
class CubicSquare {
public:
    explicit CubicSquare(const HesseFrobenius& hf) : hf_(hf), raised_(raise_last_index(hf.C, hf.metric)) {}

    const LaurentPoly& operator()(int i, int j, int k, int l) {
        if (i > j) std::swap(i, j);
        if (k > l) std::swap(k, l);
        std::array<int, 4> key{i, j, k, l};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const std::size_t n = hf_.dim();
        LaurentPoly acc(n);
        for (std::size_t a = 0; a < n; ++a) {
            LaurentPoly cija = hf_.C.get({i, j, int(a)});
            if (cija.is_zero()) continue;
            LaurentPoly up = raised_.get({k, l, int(a)});
            if (!up.is_zero()) acc += cija * up;
        }
        return cache_.emplace(key, std::move(acc)).first->second;
    }

private:
    const HesseFrobenius& hf_;
    TensorField raised_;
    std::map<std::array<int, 4>, LaurentPoly> cache_;
};

}  // namespace detail

/// g^ab (C_ija C_klb − C_ika C_jlb) = 0 for all (i, j, k, l).
inline AxiomCheck check_wdvv(const HesseFrobenius& hf) {
    AxiomCheck out{"wdvv", true, {}, {}};
    detail::CubicSquare sq(hf);
    const int n = int(hf.dim());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    LaurentPoly r = sq(i, j, k, l) - sq(i, k, j, l);
                    if (!r.is_zero()) {
                        out.passed = false;
                        out.failing = {i, j, k, l};
                        out.residual = r.str();
                        return out;
                    }
                }
    return out;
}

/// ∂_l C_ijk = C_ija g^ab C_klb for all (i, j, k, l).
inline AxiomCheck check_differential(const HesseFrobenius& hf) {
    AxiomCheck out{"differential", true, {}, {}};
    detail::CubicSquare sq(hf);
    const int n = int(hf.dim());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                LaurentPoly c = hf.C.get({i, j, k});
                for (int l = 0; l < n; ++l) {
                    LaurentPoly r = c.partial(std::size_t(l)) - sq(i, j, k, l);
                    if (!r.is_zero()) {
                        out.passed = false;
                        out.failing = {i, j, k, l};
                        out.residual = r.str();
                        return out;
                    }
                }
            }
    return out;
}

inline AxiomReport check_axioms(const HesseFrobenius& hf) {
    return AxiomReport{{check_symmetry(hf), check_wdvv(hf), check_differential(hf)}};
}

/// T_ijk = 3(C_ijk − (1/n) g_ij g^ab C_abk) (symmetric in i, j only) and
/// T̂ stored as T_hat(i, j, k) = T̂^k_ij = T_ija g^ak.
struct StructurePair {
    TensorField T;
    TensorField T_hat;
};

inline StructurePair structure_tensor(const HesseFrobenius& hf) {
    const std::size_t n = hf.dim();
    const SymTensorField trace = metric_trace(hf.C, hf.metric);
    const Rational inv_n = make_rational(1, long(n));
    TensorField t(n, 3);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                LaurentPoly v = hf.C.get({int(i), int(j), int(k)});
                if (hf.metric.g(i, j) != 0) v -= trace.get({int(k)}) * (hf.metric.g(i, j) * inv_n);
                t.set({int(i), int(j), int(k)}, v * Rational(3));
            }
    TensorField t_hat = raise_last_index(t, hf.metric);
    return StructurePair{std::move(t), std::move(t_hat)};
}

/// C = ∇³φ. The axioms are not implied; run check_axioms on the result.
inline HesseFrobenius from_frobenius_potential(const LaurentPoly& phi, const FlatMetric& g) {
    if (phi.arity() != g.dim()) throw DimensionMismatch("Frobenius potential arity differs from metric dimension");
    const std::size_t n = g.dim();
    SymTensorField c(n, 3);
    detail::for_each_sorted_tuple(n, 3, [&](const IndexTuple& idx) {
        c.set(idx, phi.partial(idx[0]).partial(idx[1]).partial(idx[2]));
    });
    return HesseFrobenius(g, std::move(c));
}

/// Euclidean metric with C_jjj = lambda_j and no other entries.
inline HesseFrobenius diagonal_structure(const std::vector<LaurentPoly>& lambdas) {
    const std::size_t n = lambdas.size();
    SymTensorField c(n, 3);
    for (std::size_t j = 0; j < n; ++j) c.set({int(j), int(j), int(j)}, lambdas[j]);
    return HesseFrobenius(FlatMetric::euclidean(n), std::move(c));
}

/// Semi-simple structure in canonical coordinates: λ_j = −1/x_j where the mask
/// is set (the branch with ∂λ = λ², translation constant absorbed), else 0.
inline HesseFrobenius semisimple_structure(std::size_t n, const std::vector<bool>& mask) {
    if (n < 3) throw DimensionMismatch("semi-simple structures need n >= 3");
    if (mask.size() != n) throw DimensionMismatch("mask length differs from n");
    std::vector<LaurentPoly> lambdas;
    for (std::size_t j = 0; j < n; ++j) {
        Exponents e(n, 0);
        e[j] = -1;
        lambdas.push_back(mask[j] ? LaurentPoly::monomial(e, Rational(-1)) : LaurentPoly(n));
    }
    return diagonal_structure(lambdas);
}

inline HesseFrobenius zero_structure(const FlatMetric& g) { return HesseFrobenius(g, SymTensorField(g.dim(), 3)); }

/// Product structure on U × W: G = g ⊕ h, C = C_U ⊕ C_W, b's coordinates after a's.
inline HesseFrobenius glue(const HesseFrobenius& a, const HesseFrobenius& b) {
    const std::size_t na = a.dim(), n = na + b.dim();
    SymTensorField c(n, 3);
    for (const auto& [idx, v] : a.C.components()) c.set(idx, v.embed(n, 0));
    for (const auto& [idx, v] : b.C.components()) {
        IndexTuple shifted = idx;
        for (int& i : shifted) i += int(na);
        c.set(std::move(shifted), v.embed(n, na));
    }
    return HesseFrobenius(FlatMetric::direct_sum(a.metric, b.metric), std::move(c));
}

/// Index tuple rendered 1-based, e.g. "(1,1,3)".
inline std::string format_indices(const IndexTuple& idx) {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k] + 1;
    os << ")";
    return os.str();
}

}  // namespace hfsi
