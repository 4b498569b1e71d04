#pragma once

// Builtin structures and the check → solve → compatible → certify pipeline.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfsi/errors.hpp"
#include "hfsi/hesse_frobenius.hpp"
#include "hfsi/killing.hpp"
#include "hfsi/potential_solver.hpp"
#include "hfsi/verify.hpp"

namespace hfsi {

namespace structures {

/// Split-signature plane, g = [[0,1],[1,0]], with φ = x₁³/6.
inline HesseFrobenius nilpotent2d() {
    FlatMetric g(RatMatrix{{0, 1}, {1, 0}});
    return from_frobenius_potential(LaurentPoly::monomial({3, 0}, make_rational(1, 6)), g);
}

/// g pairs x₁↔x₃ and x₂↔x₄, φ = (x₁³ + x₂³)/6, so C = dx₁³ + dx₂³.
inline HesseFrobenius nilpotent4d() {
    FlatMetric g(RatMatrix{{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}});
    LaurentPoly phi = LaurentPoly::monomial({3, 0, 0, 0}, make_rational(1, 6)) +
                      LaurentPoly::monomial({0, 3, 0, 0}, make_rational(1, 6));
    return from_frobenius_potential(phi, g);
}

inline HesseFrobenius oscillator1d() { return zero_structure(FlatMetric::euclidean(1)); }

/// Inverse-square in every coordinate.
inline HesseFrobenius sw3d() { return semisimple_structure(3, {true, true, true}); }

/// Inverse-square in x₁..x₃, oscillator with linear term in x₄.
inline HesseFrobenius sw4d() { return semisimple_structure(4, {true, true, true, false}); }

/// nilpotent4d on x₁..x₄, sw3d on x₅..x₇, oscillator1d on x₈.
inline HesseFrobenius glued8d() { return glue(nilpotent4d(), glue(sw3d(), oscillator1d())); }

}  // namespace structures

/// Dimensions a catalog system must reproduce: potential family n + 2,
/// compatible Killing tensors n(n+1)/2, independence rank 2n − 1.
struct Expected {
    std::size_t family = 0;
    std::size_t compatible = 0;
    std::size_t rank = 0;

    static Expected abundant(std::size_t n) { return {n + 2, n * (n + 1) / 2, 2 * n - 1}; }
    friend bool operator==(const Expected&, const Expected&) = default;
};

struct CatalogEntry {
    std::string name;
    std::string description;
    std::function<HesseFrobenius()> build;
    std::optional<Expected> expected;    ///< absent where the pipeline does not apply (n = 1)
    std::optional<FactorNode> factors;   ///< gluing tree for product structures
};

namespace detail {

inline FactorNode leaf(std::string name, std::vector<std::size_t> coords) { return {std::move(name), std::move(coords), {}}; }

inline std::optional<std::pair<std::size_t, std::vector<bool>>> parse_semisimple(const std::string& name) {
    const std::string prefix = "semisimple:";
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    const auto colon = name.find(':', prefix.size());
    if (colon == std::string::npos) throw UnknownName("expected semisimple:<n>:<mask>, got '" + name + "'");
    std::size_t n = 0;
    try {
        std::size_t used = 0;
        n = std::stoul(name.substr(prefix.size(), colon - prefix.size()), &used);
        if (used != colon - prefix.size()) throw UnknownName("bad dimension in '" + name + "'");
    } catch (const std::logic_error&) {
        throw UnknownName("bad dimension in '" + name + "'");
    }
    const std::string mask_text = name.substr(colon + 1);
    if (mask_text.size() != n) throw UnknownName("mask length differs from n in '" + name + "'");
    std::vector<bool> mask;
    for (char ch : mask_text) {
        if (ch != '0' && ch != '1') throw UnknownName("mask must be 0/1 digits in '" + name + "'");
        mask.push_back(ch == '1');
    }
    return std::make_pair(n, mask);
}

}  // namespace detail

/// The fixed part of the catalog; `semisimple:<n>:<mask>` names are generated on demand.
inline std::vector<CatalogEntry> catalog_entries() {
    using detail::leaf;
    std::vector<CatalogEntry> out;
    out.push_back({"oscillator1d", "1D harmonic oscillator factor (C = 0)", structures::oscillator1d, std::nullopt,
                   std::nullopt});
    out.push_back({"nilpotent2d", "split-signature plane with C = dx1^3", structures::nilpotent2d, Expected::abundant(2),
                   std::nullopt});
    out.push_back({"sw3d", "3D Smorodinski-Winternitz (semisimple:3:111)", structures::sw3d, Expected::abundant(3),
                   std::nullopt});
    out.push_back({"sw4d", "4D Smorodinski-Winternitz (semisimple:4:1110) = sw3d x oscillator1d", structures::sw4d,
                   Expected::abundant(4),
                   FactorNode{"sw4d", {0, 1, 2, 3}, {leaf("sw3d", {0, 1, 2}), leaf("oscillator1d", {3})}}});
    out.push_back({"nilpotent4d", "nilpotent 4D structure, C = dx1^3 + dx2^3 (nilpotent2d on x1,x3 and on x2,x4)",
                   structures::nilpotent4d, Expected::abundant(4),
                   FactorNode{"nilpotent4d", {0, 1, 2, 3}, {leaf("nilpotent2d(x1,x3)", {0, 2}), leaf("nilpotent2d(x2,x4)", {1, 3})}}});
    out.push_back({"glued8d", "nilpotent4d x (sw3d x oscillator1d)", structures::glued8d, Expected::abundant(8),
                   FactorNode{"glued8d",
                              {0, 1, 2, 3, 4, 5, 6, 7},
                              {FactorNode{"nilpotent4d",
                                          {0, 1, 2, 3},
                                          {leaf("nilpotent2d(x1,x3)", {0, 2}), leaf("nilpotent2d(x2,x4)", {1, 3})}},
                               FactorNode{"sw3d+oscillator1d", {4, 5, 6, 7}, {leaf("sw3d", {4, 5, 6}), leaf("oscillator1d", {7})}}}}});
    return out;
}

/// Structures used for pairwise gluing sweeps (every product stays ≤ 8D).
inline std::vector<std::string> base_catalog_names() { return {"oscillator1d", "nilpotent2d", "sw3d", "nilpotent4d", "sw4d"}; }

inline CatalogEntry catalog_entry(const std::string& name) {
    for (auto& e : catalog_entries())
        if (e.name == name) return e;
    if (auto ss = detail::parse_semisimple(name)) {
        auto [n, mask] = *ss;
        if (n < 3) throw UnknownName("semi-simple structures need n >= 3");
        return {name, "semi-simple structure", [n = n, mask = mask] { return semisimple_structure(n, mask); },
                Expected::abundant(n), std::nullopt};
    }
    throw UnknownName("unknown catalog name '" + name + "'");
}

inline HesseFrobenius catalog(const std::string& name) { return catalog_entry(name).build(); }

/// Raised by run_pipeline when a stage cannot continue.
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& message, int exit_code)
        : Error(stage + ": " + message), stage_(std::move(stage)), exit_code_(exit_code) {}
    const std::string& stage() const { return stage_; }
    int exit_code() const { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

struct RunReport {
    std::string name;
    std::size_t dim = 0;
    AxiomReport axioms;
    std::optional<PotentialFamily> family;
    std::optional<CompatibleSystem> compatible;
    std::optional<InheritanceReport> inheritance;
    std::optional<Certificate> certificate;
    std::optional<Expected> expected;

    Expected achieved() const {
        return {family ? family->size() : 0, compatible ? compatible->size() : 0, certificate ? certificate->rank : 0};
    }
    bool matches_expected() const { return expected && achieved() == *expected; }
};

/// Axioms → structure tensor → potentials → compatible Killing tensors →
/// certificate. Aborts with PipelineError at the first stage that fails hard
/// (axioms: exit code 2; non-commuting integral: exit code 4).
inline RunReport run_pipeline(const HesseFrobenius& hf, const ExponentWindow& window, std::uint64_t seed,
                              const std::string& name = "structure", const std::optional<FactorNode>& factors = std::nullopt) {
    RunReport rep;
    rep.name = name;
    rep.dim = hf.dim();
    rep.axioms = check_axioms(hf);
    if (const AxiomCheck* bad = rep.axioms.first_failure())
        throw PipelineError("check_" + bad->axiom,
                            "fails at index tuple " + format_indices(bad->failing) + ", residual " + bad->residual, 2);

    rep.family = solve_potentials(hf, window);
    rep.compatible = compatible_killing(hf, *rep.family);
    if (factors) rep.inheritance = inheritance_report(*rep.compatible, *factors);
    try {
        rep.certificate = certify(*rep.compatible, seed, name);
    } catch (const BracketNonzero& e) {
        throw PipelineError("certify", e.what(), 4);
    }
    return rep;
}

inline RunReport run_pipeline(const CatalogEntry& entry, std::uint64_t seed) {
    HesseFrobenius hf = entry.build();
    RunReport rep = run_pipeline(hf, default_window(hf), seed, entry.name, entry.factors);
    rep.expected = entry.expected;
    return rep;
}

}  // namespace hfsi
