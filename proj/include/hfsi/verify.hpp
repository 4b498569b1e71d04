#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/flat_geometry.hpp"
#include "hfsi/killing.hpp"
#include "hfsi/laurent_poly.hpp"
#include "hfsi/linear_algebra.hpp"

namespace hfsi {

/// Polynomial in the momenta p_1..p_n with Laurent-polynomial coefficients in x.
class PhasePoly {
public:
    using TermMap = std::map<Exponents, LaurentPoly, GradedLexLess>;

    explicit PhasePoly(std::size_t dim) : dim_(dim) {}

    static PhasePoly from_position(const LaurentPoly& f) {
        PhasePoly p(f.arity());
        p.add_term(Exponents(f.arity(), 0), f);
        return p;
    }

    /// The momentum p_i.
    static PhasePoly momentum(std::size_t dim, std::size_t i) {
        PhasePoly p(dim);
        Exponents e(dim, 0);
        e.at(i) = 1;
        p.add_term(e, LaurentPoly::constant(dim, 1));
        return p;
    }

    std::size_t dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    LaurentPoly coefficient(const Exponents& momenta) const {
        auto it = terms_.find(momenta);
        return it == terms_.end() ? LaurentPoly(dim_) : it->second;
    }

    int momentum_degree() const {
        long d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return int(d);
    }

    void add_term(const Exponents& momenta, const LaurentPoly& coeff) {
        if (momenta.size() != dim_ || coeff.arity() != dim_) throw DimensionMismatch("phase term dimension mismatch");
        if (coeff.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(momenta, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    PhasePoly& operator+=(const PhasePoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    PhasePoly& operator-=(const PhasePoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend PhasePoly operator+(PhasePoly a, const PhasePoly& b) { return a += b; }
    friend PhasePoly operator-(PhasePoly a, const PhasePoly& b) { return a -= b; }
    friend PhasePoly operator*(PhasePoly a, const Rational& s) {
        if (s == 0) return PhasePoly(a.dim_);
        for (auto& [e, c] : a.terms_) c *= s;
        return a;
    }

    friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
        a.check(b);
        PhasePoly out(a.dim_);
        Exponents e(a.dim_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    friend bool operator==(const PhasePoly& a, const PhasePoly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

    PhasePoly partial_x(std::size_t i) const {
        PhasePoly out(dim_);
        for (const auto& [e, c] : terms_) out.add_term(e, c.partial(i));
        return out;
    }

    PhasePoly partial_p(std::size_t i) const {
        PhasePoly out(dim_);
        for (const auto& [e, c] : terms_) {
            if (e.at(i) == 0) continue;
            Exponents d = e;
            d[i] -= 1;
            out.add_term(d, c * Rational(e[i]));
        }
        return out;
    }

    Rational evaluate(std::span<const Rational> x, std::span<const Rational> p) const {
        if (x.size() != dim_ || p.size() != dim_) throw DimensionMismatch("phase point has wrong length");
        Rational sum = 0;
        for (const auto& [e, c] : terms_) {
            Rational term = c.evaluate(x);
            for (std::size_t k = 0; k < dim_; ++k)
                if (e[k] != 0) term *= rational_pow(p[k], e[k]);
            sum += term;
        }
        return sum;
    }

    /// Terms as (coefficient)*p1^a*p2^b, highest momentum degree first.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            if (!out.empty()) out += " + ";
            const bool bare = total_degree(e) == 0;
            out += bare ? c.str() : "(" + c.str() + ")";
            for (std::size_t k = 0; k < dim_; ++k) {
                if (e[k] == 0) continue;
                out += "*p" + std::to_string(k + 1);
                if (e[k] != 1) out += "^" + std::to_string(e[k]);
            }
        }
        return out;
    }

private:
    void check(const PhasePoly& o) const {
        if (o.dim_ != dim_) throw DimensionMismatch("phase polynomial dimension mismatch");
    }

    std::size_t dim_;
    TermMap terms_;
};

/// {F, G} = Σ_j (∂F/∂x_j ∂G/∂p_j − ∂G/∂x_j ∂F/∂p_j).
inline PhasePoly poisson_bracket(const PhasePoly& f, const PhasePoly& g) {
    if (f.dim() != g.dim()) throw DimensionMismatch("poisson_bracket: dimension mismatch");
    PhasePoly out(f.dim());
    for (std::size_t j = 0; j < f.dim(); ++j) {
        out += f.partial_x(j) * g.partial_p(j);
        out -= g.partial_x(j) * f.partial_p(j);
    }
    return out;
}

/// Σ A^ij p_i p_j for a symmetric table of coefficients.
inline PhasePoly quadratic_form(const std::vector<std::vector<LaurentPoly>>& a) {
    const std::size_t n = a.size();
    PhasePoly out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (a[i][j].is_zero()) continue;
            Exponents e(n, 0);
            e[i] += 1;
            e[j] += 1;
            out.add_term(e, i == j ? a[i][j] : a[i][j] * Rational(2));
        }
    return out;
}

/// H = g^ij p_i p_j + V (inverse metric in the kinetic term).
inline PhasePoly build_hamiltonian(const FlatMetric& g, const LaurentPoly& v) {
    const std::size_t n = g.dim();
    if (v.arity() != n) throw DimensionMismatch("build_hamiltonian: potential arity differs from metric");
    std::vector<std::vector<LaurentPoly>> a(n, std::vector<LaurentPoly>(n, LaurentPoly(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = LaurentPoly::constant(n, g.g_inv(i, j));
    return quadratic_form(a) + PhasePoly::from_position(v);
}

/// F = K^ij p_i p_j + W with K^ij = g^ia K_ab g^bj.
inline PhasePoly build_integral(const SymTensorField& k, const LaurentPoly& w, const FlatMetric& g) {
    const std::size_t n = g.dim();
    const auto mixed = detail::mixed_components(k, g);  // K_i^b
    std::vector<std::vector<LaurentPoly>> up(n, std::vector<LaurentPoly>(n, LaurentPoly(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < n; ++a) {
            if (g.g_inv(i, a) == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!mixed[a][j].is_zero()) up[i][j] += mixed[a][j] * g.g_inv(i, a);
        }
    return quadratic_form(up) + PhasePoly::from_position(w);
}

/// Phase-space gradient (∂/∂x, ∂/∂p) evaluated at (x, p).
inline RatVector phase_gradient(const PhasePoly& f, std::span<const Rational> x, std::span<const Rational> p) {
    RatVector out;
    for (std::size_t j = 0; j < f.dim(); ++j) out.push_back(f.partial_x(j).evaluate(x, p));
    for (std::size_t j = 0; j < f.dim(); ++j) out.push_back(f.partial_p(j).evaluate(x, p));
    return out;
}

/// Exact rank of the gradient matrix at a phase point given as (x_1..x_n, p_1..p_n).
inline std::size_t independence_rank(const std::vector<PhasePoly>& fns, std::span<const Rational> point) {
    if (fns.empty()) return 0;
    const std::size_t n = fns.front().dim();
    if (point.size() != 2 * n) throw DimensionMismatch("phase point must have 2n entries");
    EchelonBasis ech(2 * n);
    for (const auto& f : fns) ech.insert(phase_gradient(f, point.subspan(0, n), point.subspan(n)));
    return ech.rank();
}

/// Deterministic source of small nonzero rationals a/b, a ∈ [−9, 9]∖{0}, b ∈ [1, 9].
class RationalSampler {
public:
    explicit RationalSampler(std::uint64_t seed) : engine_(seed) {}

    Rational next() {
        long a = long(engine_() % 18);
        a = a < 9 ? a - 9 : a - 8;
        long b = long(engine_() % 9) + 1;
        return make_rational(a, b);
    }

    std::vector<Rational> next(std::size_t count) {
        std::vector<Rational> out;
        for (std::size_t k = 0; k < count; ++k) out.push_back(next());
        return out;
    }

private:
    std::mt19937_64 engine_;
};

/// H and the candidate integrals F^(ν) for one potential V = Σ c_μ V^(μ).
struct IntegralSet {
    LaurentPoly potential;
    PhasePoly hamiltonian;
    std::vector<PhasePoly> integrals;
};

inline IntegralSet build_integrals(const CompatibleSystem& sys, const std::vector<Rational>& coefficients) {
    const std::size_t n = sys.structure.dim();
    if (coefficients.size() != sys.family.size()) throw DimensionMismatch("one coefficient per basis potential required");
    LaurentPoly v(n);
    for (std::size_t mu = 0; mu < coefficients.size(); ++mu) v += sys.family.basis[mu] * coefficients[mu];
    IntegralSet out{v, build_hamiltonian(sys.structure.metric, v), {}};
    for (std::size_t nu = 0; nu < sys.size(); ++nu) {
        LaurentPoly w(n);
        for (std::size_t mu = 0; mu < coefficients.size(); ++mu) w += sys.companions[nu][mu] * coefficients[mu];
        out.integrals.push_back(build_integral(sys.tensors[nu], w, sys.structure.metric));
    }
    return out;
}

/// (ν, μ) pairs for which {F^(ν,μ), H^(μ)} ≠ 0, each potential taken on its own.
inline std::vector<std::pair<std::size_t, std::size_t>> bracket_failures(const CompatibleSystem& sys) {
    std::vector<std::pair<std::size_t, std::size_t>> bad;
    for (std::size_t mu = 0; mu < sys.family.size(); ++mu) {
        const PhasePoly h = build_hamiltonian(sys.structure.metric, sys.family.basis[mu]);
        for (std::size_t nu = 0; nu < sys.size(); ++nu) {
            const PhasePoly f = build_integral(sys.tensors[nu], sys.companions[nu][mu], sys.structure.metric);
            if (!poisson_bracket(f, h).is_zero()) bad.emplace_back(nu, mu);
        }
    }
    return bad;
}

struct Certificate {
    std::string system_id;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<Rational> coefficients;       ///< c_μ of the generic potential
    std::vector<PhasePoly> integrals;         ///< H first, then the selected F^(ν)
    std::vector<std::size_t> selected;        ///< indices ν of the selected integrals
    bool brackets_zero = false;
    std::size_t rank = 0;
    std::size_t target = 0;
    std::vector<Rational> witness;            ///< (x, p) where the rank was reached
    std::size_t points_tried = 0;
    std::vector<std::size_t> full_ranks;      ///< rank of H ∪ all F at each tested point
    bool upper_bound_holds = true;            ///< every full rank ≤ 2n − 1

    bool valid() const { return brackets_zero && rank == target; }
};

/// Diagonal quadratic part (only p_i² terms) first, original order otherwise.
inline std::vector<std::size_t> selection_order(const std::vector<PhasePoly>& integrals) {
    std::vector<std::size_t> diag, rest;
    for (std::size_t nu = 0; nu < integrals.size(); ++nu) {
        bool is_diag = true;
        for (const auto& [e, c] : integrals[nu].terms())
            if (total_degree(e) == 2 && std::count(e.begin(), e.end(), 0) != long(e.size()) - 1) is_diag = false;
        (is_diag ? diag : rest).push_back(nu);
    }
    diag.insert(diag.end(), rest.begin(), rest.end());
    return diag;
}

/// Builds H and every F^(ν) for one seeded generic potential, checks all
/// brackets symbolically (BracketNonzero on failure), then greedily selects
/// 2n − 2 integrals whose gradients together with dH reach rank 2n − 1 at a
/// seeded rational point, trying up to `max_points` points.
inline Certificate certify(const CompatibleSystem& sys, std::uint64_t seed, std::string system_id = {},
                           std::size_t max_points = 5) {
    const std::size_t n = sys.structure.dim();
    RationalSampler rng(seed);
    Certificate cert;
    cert.system_id = std::move(system_id);
    cert.n = n;
    cert.seed = seed;
    cert.target = 2 * n - 1;
    cert.coefficients = rng.next(sys.family.size());

    const IntegralSet set = build_integrals(sys, cert.coefficients);
    for (std::size_t nu = 0; nu < set.integrals.size(); ++nu)
        if (!poisson_bracket(set.integrals[nu], set.hamiltonian).is_zero())
            throw BracketNonzero("integral " + std::to_string(nu + 1) + " does not commute with H");
    cert.brackets_zero = true;

    const auto order = selection_order(set.integrals);
    for (std::size_t attempt = 0; attempt < max_points; ++attempt) {
        std::vector<Rational> point = rng.next(2 * n);
        std::span<const Rational> x(point.data(), n), p(point.data() + n, n);
        ++cert.points_tried;

        EchelonBasis ech(2 * n);
        ech.insert(phase_gradient(set.hamiltonian, x, p));
        std::vector<RatVector> grads(set.integrals.size());
        for (std::size_t nu = 0; nu < set.integrals.size(); ++nu) grads[nu] = phase_gradient(set.integrals[nu], x, p);

        std::vector<std::size_t> chosen;
        for (std::size_t nu : order) {
            if (ech.rank() == cert.target) break;
            if (ech.insert(grads[nu])) chosen.push_back(nu);
        }
        EchelonBasis full = ech;
        for (const auto& gvec : grads) full.insert(gvec);
        cert.full_ranks.push_back(full.rank());
        if (full.rank() > cert.target) cert.upper_bound_holds = false;

        if (ech.rank() > cert.rank || cert.witness.empty()) {
            cert.rank = ech.rank();
            cert.selected = chosen;
            cert.witness = point;
        }
        if (ech.rank() == cert.target) break;
    }
    cert.integrals.push_back(set.hamiltonian);
    for (std::size_t nu : cert.selected) cert.integrals.push_back(set.integrals[nu]);
    return cert;
}

}  // namespace hfsi
