#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/rational.hpp"

namespace hfsi {

/// Exponent vector of a Laurent monomial; entries may be negative.
using Exponents = std::vector<int>;

inline long total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0L); }

/// Canonical monomial order: signed total degree first, then lexicographic.
struct GradedLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        const long da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

/// Raise a rational to an integer power; negative powers of zero are a pole.
inline Rational rational_pow(const Rational& base, int exponent) {
    if (exponent == 0) return Rational(1);
    if (exponent < 0) {
        if (base == 0) throw PoleAtPoint("negative power of zero");
        Rational inv = 1 / base;
        return rational_pow(inv, -exponent);
    }
    BigInt num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
///
/// The term map never holds a zero coefficient, so two equal polynomials
/// always have identical term maps. Coordinates are indexed from 0.
class LaurentPoly {
public:
    using TermMap = std::map<Exponents, Rational, GradedLexLess>;

    explicit LaurentPoly(std::size_t arity = 1) : arity_(arity) {
        if (arity == 0) throw ArityMismatch("LaurentPoly arity must be positive");
    }

    static LaurentPoly constant(std::size_t arity, const Rational& c) {
        LaurentPoly p(arity);
        if (c != 0) p.terms_.emplace(Exponents(arity, 0), c);
        return p;
    }

    static LaurentPoly monomial(Exponents e, const Rational& c = 1) {
        LaurentPoly p(e.size());
        if (c != 0) p.terms_.emplace(std::move(e), c);
        return p;
    }

    /// The coordinate function x_i.
    static LaurentPoly variable(std::size_t arity, std::size_t i) {
        Exponents e(arity, 0);
        e.at(i) = 1;
        return monomial(std::move(e));
    }

    std::size_t arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                                                  [](int v) { return v == 0; }));
    }

    Rational coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient(Exponents(arity_, 0)); }

    /// Adds c·x^e in place.
    void add_term(const Exponents& e, const Rational& c) {
        if (e.size() != arity_) throw ArityMismatch("exponent length differs from arity");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        require_same_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    LaurentPoly& operator-=(const LaurentPoly& o) {
        require_same_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    LaurentPoly& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const Rational& s) { return a *= s; }
    friend LaurentPoly operator*(const Rational& s, LaurentPoly a) { return a *= s; }
    friend LaurentPoly operator-(LaurentPoly a) { return a *= Rational(-1); }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        a.require_same_arity(b);
        LaurentPoly out(a.arity_);
        Exponents e(a.arity_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

    /// ∂/∂x_i, term by term.
    LaurentPoly partial(std::size_t i) const {
        if (i >= arity_) throw std::out_of_range("partial: coordinate index out of range");
        LaurentPoly out(arity_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponents d = e;
            d[i] -= 1;
            out.terms_.emplace(std::move(d), c * e[i]);
        }
        return out;
    }

    /// Antiderivative in x_i with zero integration "constant" (no x_i-free term added).
    LaurentPoly antiderivative(std::size_t i) const {
        if (i >= arity_) throw std::out_of_range("antiderivative: coordinate index out of range");
        LaurentPoly out(arity_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == -1)
                throw LogObstruction("antiderivative of x" + std::to_string(i + 1) + "^-1 needs a logarithm");
            Exponents d = e;
            d[i] += 1;
            Rational coeff = c / d[i];
            out.terms_.emplace(std::move(d), std::move(coeff));
        }
        return out;
    }

    Rational evaluate(std::span<const Rational> point) const {
        if (point.size() != arity_) throw ArityMismatch("evaluate: point has wrong length");
        Rational sum = 0;
        for (const auto& [e, c] : terms_) {
            Rational term = c;
            for (std::size_t k = 0; k < arity_; ++k) {
                if (e[k] == 0) continue;
                if (e[k] < 0 && point[k] == 0)
                    throw PoleAtPoint("pole in x" + std::to_string(k + 1) + " at evaluation point");
                term *= rational_pow(point[k], e[k]);
            }
            sum += term;
        }
        return sum;
    }

    bool depends_on(std::size_t i) const {
        return std::any_of(terms_.begin(), terms_.end(), [i](const auto& t) { return t.first[i] != 0; });
    }

    bool has_pole_in(std::size_t i) const {
        return std::any_of(terms_.begin(), terms_.end(), [i](const auto& t) { return t.first[i] < 0; });
    }

    /// Smallest exponent of x_i over all terms (0 for the zero polynomial).
    int min_exponent(std::size_t i) const {
        int m = 0;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            m = first ? e[i] : std::min(m, e[i]);
            first = false;
        }
        return m;
    }

    /// Re-express in `new_arity` variables, coordinate k mapped to k + offset.
    LaurentPoly embed(std::size_t new_arity, std::size_t offset) const {
        if (offset + arity_ > new_arity) throw ArityMismatch("embed: target arity too small");
        LaurentPoly out(new_arity);
        for (const auto& [e, c] : terms_) {
            Exponents d(new_arity, 0);
            std::copy(e.begin(), e.end(), d.begin() + static_cast<std::ptrdiff_t>(offset));
            out.terms_.emplace(std::move(d), c);
        }
        return out;
    }

    /// Human-readable form, e.g. "1/2*x1^3 + x1*x3 - 3".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rational mag = abs(c);
            os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
            first = false;
            bool unit = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
            if (mag != 1 || unit) {
                os << mag.get_str();
                if (!unit) os << "*";
            }
            bool first_var = true;
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (e[k] == 0) continue;
                if (!first_var) os << "*";
                first_var = false;
                os << "x" << (k + 1);
                if (e[k] != 1) os << "^" << e[k];
            }
        }
        return os.str();
    }

private:
    void require_same_arity(const LaurentPoly& o) const {
        if (o.arity_ != arity_)
            throw ArityMismatch("arity mismatch: " + std::to_string(arity_) + " vs " + std::to_string(o.arity_));
    }

    std::size_t arity_;
    TermMap terms_;
};

}  // namespace hfsi
