// hfsi: check, solve, glue and certify Hesse-Frobenius structures.
//
// Exit codes: 0 ok, 2 axiom failure, 3 unexpected family dimension,
// 4 rank deficiency or non-commuting integral, 5 I/O or format error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfsi/hfsi.hpp"
#include "hfsi/io.hpp"

namespace {

using hfsi::io::json;

enum Exit { kOk = 0, kAxiom = 2, kFamily = 3, kRank = 4, kFormat = 5 };

/// Exit with a specific code after printing a message.
struct Abort {
    int code;
    std::string message;
};

struct Target {
    std::string name;
    hfsi::HesseFrobenius hf;
    std::optional<hfsi::CatalogEntry> entry;
};

Target load(const std::string& spec) {
    if (std::filesystem::exists(spec)) {
        auto file = hfsi::io::structure_file_from_json(hfsi::io::read_json_file(spec));
        const std::size_t n = file.metric.dim();
        auto sym = hfsi::check_symmetry(file.raw, n);
        if (!sym.passed)
            throw Abort{kAxiom, "check_symmetry fails at index tuple " + hfsi::format_indices(sym.failing) + ", residual " +
                                    sym.residual};
        return {std::filesystem::path(spec).stem().string(),
                hfsi::HesseFrobenius(file.metric, hfsi::symmetrize(file.raw, n)), std::nullopt};
    }
    auto entry = hfsi::catalog_entry(spec);
    return {entry.name, entry.build(), entry};
}

int parse_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::logic_error&) {
        throw hfsi::FormatError("bad integer '" + s + "' in --window");
    }
    if (used != s.size()) throw hfsi::FormatError("bad integer '" + s + "' in --window");
    return v;
}

std::pair<int, int> parse_pair(std::string s) {
    if (auto dots = s.find(".."); dots != std::string::npos) s.replace(dots, 2, ":");
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw hfsi::FormatError("window pair must look like lo:hi, got '" + s + "'");
    return {parse_int(s.substr(0, colon)), parse_int(s.substr(colon + 1))};
}

/// "lo:hi" for every coordinate, or "lo:hi,lo:hi,..." with one pair each.
hfsi::ExponentWindow parse_window(const std::string& text, std::size_t n, int cap) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
    hfsi::ExponentWindow w{hfsi::Exponents(n), hfsi::Exponents(n), cap};
    if (parts.size() == 1) {
        auto [lo, hi] = parse_pair(parts[0]);
        w = hfsi::ExponentWindow::uniform(n, lo, hi, cap);
    } else if (parts.size() == n) {
        for (std::size_t j = 0; j < n; ++j) std::tie(w.lo[j], w.hi[j]) = parse_pair(parts[j]);
    } else {
        throw hfsi::FormatError("--window needs one pair or " + std::to_string(n) + " pairs");
    }
    w.validate(n);
    return w;
}

hfsi::ExponentWindow window_for(const hfsi::HesseFrobenius& hf, const std::string& text, std::optional<int> cap) {
    hfsi::ExponentWindow w = hfsi::default_window(hf);
    if (!text.empty()) w = parse_window(text, hf.dim(), cap.value_or(w.total_degree_cap));
    else if (cap) w.total_degree_cap = *cap;
    w.validate(hf.dim());
    return w;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HFSI_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::logic_error&) {
            throw hfsi::FormatError(std::string("HFSI_SEED is not an integer: '") + env + "'");
        }
    }
    return 1;
}

// Terminal stdout; std::cout is muted when JSON goes to stdout.
std::streambuf* terminal = std::cout.rdbuf();

void emit(const std::string& path, const json& j) {
    if (path.empty()) return;
    if (path == "-")
        std::ostream(terminal) << j.dump(2) << "\n";
    else
        hfsi::io::write_json_file(path, j);
}

std::string one_based(const std::vector<std::size_t>& v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k] + 1);
    return s + "}";
}

void print_axioms(const std::string& name, const hfsi::HesseFrobenius& hf, const hfsi::AxiomReport& r) {
    std::cout << name << " (n = " << hf.dim() << ")\n";
    for (const auto& c : r.checks) {
        std::cout << "  " << c.axiom << ": " << (c.passed ? "ok" : "FAIL");
        if (!c.passed) std::cout << " at " << hfsi::format_indices(c.failing) << ", residual " << c.residual;
        std::cout << "\n";
    }
}

void require_axioms(const hfsi::AxiomReport& r) {
    if (const auto* bad = r.first_failure())
        throw Abort{kAxiom, "check_" + bad->axiom + " fails at index tuple " + hfsi::format_indices(bad->failing) +
                                ", residual " + bad->residual};
}

void print_family(const hfsi::PotentialFamily& f) {
    std::cout << "potential family: " << f.size() << " (expected " << f.dim() + 2 << ")\n";
    for (std::size_t mu = 0; mu < f.size(); ++mu) std::cout << "  V" << mu + 1 << " = " << f.basis[mu].str() << "\n";
    if (f.warning) std::cout << "  warning: " << *f.warning << "\n";
}

void print_tensor(const hfsi::SymTensorField& k) {
    bool first = true;
    for (const auto& [idx, p] : k.components()) {
        std::cout << (first ? "" : ", ") << "K" << idx[0] + 1 << idx[1] + 1 << " = " << p.str();
        first = false;
    }
    std::cout << "\n";
}

void print_compatible(const hfsi::CompatibleSystem& s, bool verbose) {
    std::cout << "killing tensors: " << s.killing_space_dim << ", compatible: " << s.size()
              << ", structure form agrees: " << (s.structure_form_agrees ? "yes" : "no") << "\n";
    if (!verbose) return;
    for (std::size_t nu = 0; nu < s.size(); ++nu) {
        std::cout << "  K" << nu + 1 << ": ";
        print_tensor(s.tensors[nu]);
    }
}

void print_certificate(const hfsi::Certificate& c) {
    std::cout << "brackets {F,H} = 0: " << (c.brackets_zero ? "yes" : "no") << "\n";
    std::cout << "independence rank: " << c.rank << " / " << c.target << " after " << c.points_tried << " point(s)";
    std::cout << ", seed " << c.seed << ", integrals " << one_based(c.selected) << "\n";
    std::cout << "rank <= 2n-1 at every point: " << (c.upper_bound_holds ? "yes" : "no") << "\n";
}

void print_inheritance(const hfsi::InheritanceReport& r) {
    std::cout << "inheritance: total " << r.total << ", inherited " << r.inherited << ", mixed " << r.mixed << "\n";
    for (const auto& e : r.entries)
        std::cout << "  " << std::string(2 * e.depth, ' ') << e.name << " " << one_based(e.coords) << ": supported "
                  << e.supported << ", additional " << e.additional << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superintegrable systems from Hesse-Frobenius structures"};
    app.require_subcommand(1);

    std::string target, target_b, json_out, window_text, out_file;
    std::optional<int> cap;
    std::optional<std::uint64_t> seed;
    bool verbose = false;

    auto* catalog = app.add_subcommand("catalog", "Builtin structures");
    auto* list = catalog->add_subcommand("list", "List catalog names");
    catalog->require_subcommand(1);
    list->add_option("--json", json_out, "Write JSON to a file ('-' for stdout)");

    auto* check = app.add_subcommand("check", "Check the Hesse-Frobenius axioms");
    check->add_option("target", target, "Structure file or catalog name")->required();
    check->add_option("--json", json_out, "Write JSON to a file ('-' for stdout)");

    auto* solve = app.add_subcommand("solve", "Solve for the superintegrable potentials");
    solve->add_option("target", target, "Structure file or catalog name")->required();
    solve->add_option("--window", window_text, "Exponent window lo:hi, or one pair per coordinate separated by commas");
    solve->add_option("--cap", cap, "Bound on the sum of absolute exponents");
    solve->add_option("--json", json_out, "Write JSON to a file ('-' for stdout)");

    auto* glue = app.add_subcommand("glue", "Glue two structures into a product structure file");
    glue->add_option("a", target, "First structure")->required();
    glue->add_option("b", target_b, "Second structure")->required();
    glue->add_option("-o,--output", out_file, "Output structure file")->required();

    auto* certify = app.add_subcommand("certify", "Build integrals and certify superintegrability");
    certify->add_option("target", target, "Structure file or catalog name")->required();
    certify->add_option("--seed", seed, "Random seed (default: HFSI_SEED or 1)");
    certify->add_option("--window", window_text, "Exponent window");
    certify->add_option("--cap", cap, "Bound on the sum of absolute exponents");
    certify->add_option("--json", json_out, "Write JSON to a file ('-' for stdout)");

    auto* run = app.add_subcommand("run", "Full pipeline with report");
    run->add_option("target", target, "Structure file or catalog name")->required();
    run->add_option("--seed", seed, "Random seed (default: HFSI_SEED or 1)");
    run->add_option("--window", window_text, "Exponent window");
    run->add_option("--cap", cap, "Bound on the sum of absolute exponents");
    run->add_option("--json", json_out, "Write JSON to a file ('-' for stdout)");
    run->add_flag("-v,--verbose", verbose, "Print compatible tensors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kFormat;
    }

    std::ostringstream muted;
    if (json_out == "-") std::cout.rdbuf(muted.rdbuf());
    struct Restore {
        ~Restore() { std::cout.rdbuf(terminal); }
    } restore;

    try {
        if (list->parsed()) {
            json j = json::array();
            for (const auto& e : hfsi::catalog_entries()) {
                std::cout << e.name << "  " << e.description;
                if (e.expected)
                    std::cout << "  [family " << e.expected->family << ", compatible " << e.expected->compatible
                              << ", rank " << e.expected->rank << "]";
                std::cout << "\n";
                json item = {{"name", e.name}, {"description", e.description}};
                if (e.expected)
                    item["expected"] = {{"family", e.expected->family}, {"compatible", e.expected->compatible},
                                        {"rank", e.expected->rank}};
                j.push_back(item);
            }
            std::cout << "semisimple:<n>:<mask>  semi-simple structure, mask bit 1 = inverse-square coordinate (n >= 3)\n";
            emit(json_out, j);
            return kOk;
        }

        if (glue->parsed()) {
            Target a = load(target), b = load(target_b);
            hfsi::HesseFrobenius g = hfsi::glue(a.hf, b.hf);
            hfsi::io::write_json_file(out_file, hfsi::io::to_json(g));
            std::cout << "wrote " << out_file << " (n = " << g.dim() << ")\n";
            return kOk;
        }

        Target t = load(target);
        const auto axioms = hfsi::check_axioms(t.hf);

        if (check->parsed()) {
            print_axioms(t.name, t.hf, axioms);
            emit(json_out, hfsi::io::to_json(axioms));
            return axioms.passed() ? kOk : kAxiom;
        }

        require_axioms(axioms);
        const auto window = window_for(t.hf, window_text, cap);

        if (solve->parsed()) {
            auto family = hfsi::solve_potentials(t.hf, window);
            print_family(family);
            emit(json_out, hfsi::io::to_json(family));
            return family.warning ? kFamily : kOk;
        }

        const std::uint64_t s = seed ? *seed : default_seed();

        if (certify->parsed()) {
            auto family = hfsi::solve_potentials(t.hf, window);
            auto sys = hfsi::compatible_killing(t.hf, family);
            hfsi::Certificate cert;
            try {
                cert = hfsi::certify(sys, s, t.name);
            } catch (const hfsi::BracketNonzero& e) {
                throw Abort{kRank, std::string("certify: ") + e.what()};
            }
            std::cout << t.name << " (n = " << t.hf.dim() << "): family " << family.size() << ", compatible "
                      << sys.size() << "\n";
            print_certificate(cert);
            emit(json_out, hfsi::io::to_json(cert));
            return cert.valid() ? kOk : kRank;
        }

        if (run->parsed()) {
            hfsi::RunReport rep;
            try {
                rep = hfsi::run_pipeline(t.hf, window, s, t.name, t.entry ? t.entry->factors : std::nullopt);
            } catch (const hfsi::PipelineError& e) {
                throw Abort{e.exit_code(), e.what()};
            }
            if (t.entry) rep.expected = t.entry->expected;
            print_axioms(t.name, t.hf, rep.axioms);
            print_family(*rep.family);
            print_compatible(*rep.compatible, verbose);
            if (rep.inheritance) print_inheritance(*rep.inheritance);
            print_certificate(*rep.certificate);
            if (rep.expected) std::cout << "matches expected: " << (rep.matches_expected() ? "yes" : "no") << "\n";
            emit(json_out, hfsi::io::to_json(rep));
            if (rep.family->warning) return kFamily;
            return rep.certificate->valid() ? kOk : kRank;
        }
    } catch (const Abort& a) {
        std::cerr << "error: " << a.message << "\n";
        return a.code;
    } catch (const hfsi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFormat;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFormat;
    }
    return kOk;
}
