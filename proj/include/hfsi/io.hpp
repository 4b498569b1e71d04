#pragma once

// JSON forms of every file format. Indices, coordinates and momenta are
// 1-based in all serialized data; the library is 0-based internally.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hfsi/catalog.hpp"
#include "hfsi/errors.hpp"
#include "hfsi/hesse_frobenius.hpp"
#include "hfsi/killing.hpp"
#include "hfsi/laurent_poly.hpp"
#include "hfsi/potential_solver.hpp"
#include "hfsi/verify.hpp"

namespace hfsi::io {

using json = nlohmann::ordered_json;

inline json to_json(const LaurentPoly& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back({{"c", to_string(c)}, {"e", e}});
    return out;
}

inline LaurentPoly poly_from_json(const json& j, std::size_t arity) {
    if (!j.is_array()) throw FormatError("polynomial must be a list of terms");
    LaurentPoly p(arity);
    for (const auto& t : j) {
        if (!t.is_object() || !t.contains("c") || !t.contains("e")) throw FormatError("term needs \"c\" and \"e\"");
        if (!t["c"].is_string()) throw FormatError("coefficient must be a \"p/q\" string");
        Exponents e;
        for (const auto& v : t["e"]) {
            if (!v.is_number_integer()) throw FormatError("exponents must be integers");
            e.push_back(v.get<int>());
        }
        if (e.size() != arity) throw FormatError("exponent vector length differs from dimension");
        p.add_term(e, parse_rational(t["c"].get<std::string>()));
    }
    return p;
}

inline json matrix_to_json(const RatMatrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

inline RatMatrix matrix_from_json(const json& j, std::size_t n) {
    if (!j.is_array() || j.size() != n) throw FormatError("metric must be an n x n list");
    RatMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!j[r].is_array() || j[r].size() != n) throw FormatError("metric must be an n x n list");
        for (std::size_t c = 0; c < n; ++c) {
            const auto& v = j[r][c];
            if (v.is_string())
                m(r, c) = parse_rational(v.get<std::string>());
            else if (v.is_number_integer())
                m(r, c) = make_rational(v.get<long>());
            else
                throw FormatError("metric entries must be rational strings");
        }
    }
    return m;
}

inline json to_json(const FlatMetric& g) { return {{"dim", g.dim()}, {"g", matrix_to_json(g.matrix())}}; }

inline FlatMetric metric_from_json(const json& j) {
    if (!j.contains("dim") || !j.contains("g")) throw FormatError("metric needs \"dim\" and \"g\"");
    return FlatMetric(matrix_from_json(j["g"], j["dim"].get<std::size_t>()));
}

inline json one_based(const IndexTuple& idx) {
    json out = json::array();
    for (int i : idx) out.push_back(i + 1);
    return out;
}

inline json to_json(const HesseFrobenius& hf) {
    json c = json::array();
    for (const auto& [idx, poly] : hf.C.components()) c.push_back({{"i", one_based(idx)}, {"poly", to_json(poly)}});
    return {{"dim", hf.dim()}, {"metric", matrix_to_json(hf.metric.matrix())}, {"C", c}};
}

/// A structure file before symmetrization.
struct StructureFile {
    FlatMetric metric;
    RawCubic raw;
};

inline StructureFile structure_file_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("metric") || !j.contains("C"))
        throw FormatError("structure needs \"dim\", \"metric\" and \"C\"");
    const auto n = j["dim"].get<std::size_t>();
    if (n == 0) throw FormatError("dimension must be positive");
    StructureFile out{FlatMetric(matrix_from_json(j["metric"], n)), {}};
    for (const auto& entry : j["C"]) {
        const auto& i = entry.at("i");
        if (!i.is_array() || i.size() != 3) throw FormatError("C index must have three entries");
        std::array<int, 3> idx{};
        for (std::size_t k = 0; k < 3; ++k) {
            int v = i[k].get<int>();
            if (v < 1 || std::size_t(v) > n) throw FormatError("C index out of range");
            idx[k] = v - 1;
        }
        LaurentPoly p = poly_from_json(entry.at("poly"), n);
        if (out.raw.count(idx)) throw FormatError("duplicate C entry " + format_indices({idx[0], idx[1], idx[2]}));
        if (!p.is_zero()) out.raw.emplace(idx, std::move(p));
    }
    return out;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

inline json to_json(const AxiomCheck& c) {
    json out = {{"axiom", c.axiom}, {"passed", c.passed}};
    if (!c.passed) {
        out["failing_indices"] = one_based(c.failing);
        out["residual"] = c.residual;
    }
    return out;
}

inline json to_json(const AxiomReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"passed", r.passed()}, {"checks", checks}};
}

inline json to_json(const ExponentWindow& w) { return {{"lo", w.lo}, {"hi", w.hi}, {"total_degree_cap", w.total_degree_cap}}; }

inline json to_json(const PotentialFamily& f) {
    json basis = json::array();
    for (const auto& v : f.basis) basis.push_back(to_json(v));
    json out = {{"dim_family", f.size()}, {"basis", basis}, {"window", to_json(f.window)}};
    if (f.warning) out["warning"] = *f.warning;
    return out;
}

inline json tensor_to_json(const SymTensorField& k) {
    json comps = json::array();
    for (const auto& [idx, poly] : k.components()) comps.push_back({{"i", one_based(idx)}, {"poly", to_json(poly)}});
    return comps;
}

inline json to_json(const CompatibleSystem& s) {
    json tensors = json::array(), companions = json::array();
    for (const auto& k : s.tensors) tensors.push_back(tensor_to_json(k));
    for (const auto& row : s.companions) {
        json r = json::array();
        for (const auto& w : row) r.push_back(to_json(w));
        companions.push_back(std::move(r));
    }
    return {{"killing_space_dim", s.killing_space_dim},
            {"compatible_dim", s.size()},
            {"family_dim", s.family.size()},
            {"structure_form_agrees", s.structure_form_agrees},
            {"tensors", tensors},
            {"companions", companions}};
}

inline json to_json(const PhasePoly& p) {
    json out = json::array();
    for (const auto& [e, c] : p.terms()) out.push_back({{"p", e}, {"coeff", to_json(c)}});
    return out;
}

inline json rationals(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& r : v) out.push_back(to_string(r));
    return out;
}

inline json to_json(const Certificate& c) {
    json integrals = json::array();
    for (const auto& f : c.integrals) integrals.push_back(to_json(f));
    json selected = json::array();
    for (auto nu : c.selected) selected.push_back(nu + 1);
    std::vector<Rational> x(c.witness.begin(), c.witness.begin() + std::ptrdiff_t(c.witness.empty() ? 0 : c.n));
    std::vector<Rational> p(c.witness.begin() + std::ptrdiff_t(c.witness.empty() ? 0 : c.n), c.witness.end());
    return {{"system", c.system_id},
            {"n", c.n},
            {"seed", c.seed},
            {"valid", c.valid()},
            {"brackets_zero", c.brackets_zero},
            {"rank", c.rank},
            {"target", c.target},
            {"coefficients", rationals(c.coefficients)},
            {"witness", {{"x", rationals(x)}, {"p", rationals(p)}}},
            {"points_tried", c.points_tried},
            {"full_ranks", c.full_ranks},
            {"upper_bound_holds", c.upper_bound_holds},
            {"selected", selected},
            {"integrals", integrals}};
}

inline json to_json(const InheritanceReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries) {
        json coords = json::array();
        for (auto c : e.coords) coords.push_back(c + 1);
        entries.push_back({{"factor", e.name}, {"coords", coords}, {"depth", e.depth}, {"supported", e.supported},
                           {"additional", e.additional}});
    }
    return {{"total", r.total}, {"inherited", r.inherited}, {"mixed", r.mixed}, {"factors", entries}};
}

inline json to_json(const SeparationReport& r) {
    return {{"blocks", r.blocks},       {"separated", r.separated}, {"element_separated", r.element_separated},
            {"coupled", r.coupled},     {"factor_dimension_sum", r.factor_dimension_sum},
            {"deficit", r.deficit}};
}

inline json to_json(const RunReport& r) {
    json out = {{"name", r.name}, {"dim", r.dim}, {"axioms", to_json(r.axioms)}};
    if (r.family) out["family"] = to_json(*r.family);
    if (r.compatible) out["compatible"] = to_json(*r.compatible);
    if (r.inheritance) out["inheritance"] = to_json(*r.inheritance);
    if (r.certificate) out["certificate"] = to_json(*r.certificate);
    if (r.expected) {
        out["expected"] = {{"family", r.expected->family}, {"compatible", r.expected->compatible}, {"rank", r.expected->rank}};
        out["matches_expected"] = r.matches_expected();
    }
    return out;
}

}  // namespace hfsi::io
