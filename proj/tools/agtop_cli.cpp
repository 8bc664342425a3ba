#include "agtop/verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace agtop;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    int g = 0;
    std::string catalog;
    std::string out;
    int jobs = 1;
    std::string level = "fast";
    std::uint64_t seed = 0;
};

class ValidationFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string catalog_dir(const RunConfig& cfg) { return cfg.catalog.empty() ? bundled_catalog_dir() : cfg.catalog; }

Atlas make_atlas(const RunConfig& cfg, AtlasOptions opts)
{
    opts.jobs = cfg.jobs;
    return Atlas::build(cfg.g, load_catalogs(catalog_dir(cfg), cfg.g), opts);
}

Atlas make_atlas(const RunConfig& cfg)
{
    AtlasOptions o;
    o.seed = cfg.seed;
    return make_atlas(cfg, o);
}

// Writes to <out>/<name> when --out is given, else to stdout.
template <class F>
void emit(const RunConfig& cfg, const std::string& name, F&& body)
{
    if (cfg.out.empty()) {
        body(std::cout);
        return;
    }
    fs::create_directories(cfg.out);
    const fs::path p = fs::path(cfg.out) / name;
    std::ofstream f(p);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    body(f);
    std::cout << "wrote " << p.string() << '\n';
}

void cmd_forms(const RunConfig& cfg)
{
    const std::string path = catalog_dir(cfg) + "/g" + std::to_string(cfg.g) + ".txt";
    const FormCatalog cat = load_form_catalog_file(path);
    std::cout << "catalog " << path << ": " << cat.forms.size() << " form(s)\n";
    std::cout << std::left << std::setw(12) << "name" << std::setw(10) << "minimum" << std::setw(8) << "pairs"
              << "perfect\n";
    for (std::size_t i = 0; i < cat.forms.size(); ++i) {
        const auto mv = minimal_vectors(cat.forms[i]);
        std::cout << std::setw(12) << cat.names[i] << std::setw(10) << mv.minimum.get_str() << std::setw(8)
                  << mv.vectors.size() << (is_perfect(cat.forms[i]) ? "yes" : "no") << '\n';
    }
}

void cmd_orbits(const RunConfig& cfg)
{
    const Atlas at = make_atlas(cfg);
    std::map<int, std::array<int, 3>> per_dim;  // orbits, alternating, boundary
    for (const auto& o : at.registry().orbits()) {
        auto& row = per_dim[o.dim];
        ++row[0];
        row[1] += o.alternating;
        row[2] += o.rank < cfg.g;
    }
    std::cout << "orbits of perfect cones for g=" << cfg.g << ": " << at.registry().size() << '\n';
    std::cout << std::setw(6) << "dim" << std::setw(9) << "orbits" << std::setw(13) << "alternating" << std::setw(10)
              << "boundary" << '\n';
    for (const auto& [d, row] : per_dim)
        std::cout << std::setw(6) << d << std::setw(9) << row[0] << std::setw(13) << row[1] << std::setw(10) << row[2]
                  << '\n';
    for (const auto& n : at.notes())
        std::cout << "note: " << n << '\n';
    if (!cfg.out.empty())
        emit(cfg, "orbits_g" + std::to_string(cfg.g) + ".txt", [&](std::ostream& os) { at.registry().write(os); });
}

void cmd_complex(const RunConfig& cfg, const std::string& kind)
{
    const ComplexKind k = parse_kind(kind);
    const Atlas at = make_atlas(cfg);
    const ChainComplexQ c = build_complex(at, k, cfg.g);
    emit(cfg, c.label + ".cplx", [&](std::ostream& os) { write_complex(os, c); });
}

void cmd_homology(const RunConfig& cfg, const std::string& file)
{
    std::ifstream f(file);
    if (!f)
        throw std::runtime_error("cannot open " + file);
    const ChainComplexQ c = read_complex(f);
    const VerifyResult v = verify_complex(c);
    if (!v.ok)
        throw ValidationFailure(file + ": not a complex: " + v.message);
    const BettiReport b = betti(c);
    emit(cfg, c.label + ".betti", [&](std::ostream& os) { write_betti(os, b); });
}

void cmd_verify(const RunConfig& cfg)
{
    const Atlas at = make_atlas(cfg);
    InvariantOptions opts;
    opts.level = parse_level(cfg.level);
    opts.jobs = cfg.jobs;
    opts.rebuild = [&](const AtlasOptions& o) { return make_atlas(cfg, o); };
    const auto checks = run_invariants(at, opts);
    for (const auto& c : checks)
        std::cout << (c.ok ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  [" + c.detail + "]")
                  << '\n';
    if (!all_ok(checks))
        throw ValidationFailure("verification failed");
    std::cout << "all " << checks.size() << " checks passed\n";
}

// H(P^(g)) computed for g <= 5, solved from the bundled sequence inputs above that.
std::map<int, int> perfect_homology(const RunConfig& cfg, std::string& how)
{
    if (cfg.g <= 5) {
        how = "computed";
        return betti(build_perfect_complex(make_atlas(cfg), cfg.g)).h;
    }
    const LesResult r = les_solve_chain(cfg.g, std::string(AGTOP_DATA_DIR) + "/tables");
    if (!r.consistent || r.unknowns() > 0)
        throw ValidationFailure("sequence inputs do not determine H(P^(" + std::to_string(cfg.g) + "))");
    how = "solved from the long exact sequence with literature inputs";
    std::map<int, int> h;
    for (const auto& [n, e] : r.p)
        h[n] = *e.dim;
    return h;
}

void cmd_tables(const RunConfig& cfg)
{
    std::string how;
    const auto h = perfect_homology(cfg, how);
    const auto top = top_weight_table(cfg.g, h);
    emit(cfg, "tables_g" + std::to_string(cfg.g) + ".txt", [&](std::ostream& os) {
        const int w = cfg.g * (cfg.g + 1);
        os << "H(P" << cfg.g << ") " << how << '\n';
        os << "top-weight cohomology Gr^W_" << w << " H^k(A_" << cfg.g << "):";
        if (top.empty())
            os << " zero";
        os << '\n';
        for (const auto& [k, d] : top)
            os << "  k=" << k << " dim " << d << '\n';
        os << "top-weight Euler characteristic " << top_weight_euler(top) << '\n';
        os << "weight-0 E1 column p=" << cfg.g << ":";
        const auto col = satake_weight0_column(cfg.g, h);
        if (col.empty())
            os << " zero";
        os << '\n';
        for (const auto& e : col)
            os << "E1 " << e.p << ' ' << e.q << ' ' << e.dim << '\n';
    });
}

void cmd_les(const RunConfig& cfg, const std::string& file)
{
    const std::string path = file.empty() ? bundled_les_path(cfg.g) : file;
    LesInput in = read_les_input_file(path);
    if (cfg.g != 0 && in.g != cfg.g)
        throw ValidationFailure(path + " declares g " + std::to_string(in.g) + ", expected " + std::to_string(cfg.g));
    if (!in.has_prev)
        in.h_prev = degree_map(les_solve_chain(in.g - 1, fs::path(path).parent_path().string()));
    const LesResult r = les_solve(in);
    emit(cfg, "les_g" + std::to_string(in.g) + ".txt", [&](std::ostream& os) {
        for (const auto& s : in.sources)
            os << "# input:" << s << '\n';
        for (const auto& [n, e] : r.p)
            os << "H " << n << ' ' << (e.dim ? std::to_string(*e.dim) : "?") << "  # " << e.reason << '\n';
        os << "unknown " << r.unknowns() << '\n';
        for (const auto& p : r.problems)
            os << "inconsistent: " << p << '\n';
    });
    if (!r.consistent)
        throw ValidationFailure("sequence inputs are inconsistent");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Top-weight cohomology of A_g from perfect cone complexes"};
    app.require_subcommand(1);
    RunConfig cfg;
    auto common = [&](CLI::App* sub, bool need_g) {
        auto* opt = sub->add_option("--g", cfg.g, "ambient dimension")->check(CLI::Range(1, 64));
        if (need_g)
            opt->required();
        sub->add_option("--catalog", cfg.catalog, "directory holding g<r>.txt form catalogs")->check(CLI::ExistingDirectory);
        sub->add_option("--out", cfg.out, "output directory (default: stdout)");
        sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--level", cfg.level, "verification level")->check(CLI::IsMember({"fast", "full"}));
        sub->add_option("--seed", cfg.seed, "seed for representative and orientation choices (0 = canonical)");
    };

    auto* forms = app.add_subcommand("forms", "list the perfect forms of a catalog");
    common(forms, true);
    auto* orbits = app.add_subcommand("orbits", "classify cone orbits and summarize them");
    common(orbits, true);
    auto* complex = app.add_subcommand("complex", "build one of the complexes P, V, I, R, C");
    common(complex, true);
    std::string kind = "P";
    complex->add_option("--kind", kind, "complex kind")->check(CLI::IsMember({"P", "V", "I", "R", "C"}));
    auto* homology = app.add_subcommand("homology", "rational homology of a complex file");
    common(homology, false);
    std::string file;
    homology->add_option("file", file, "complex file")->required()->check(CLI::ExistingFile);
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    common(verify, true);
    auto* tables = app.add_subcommand("tables", "top-weight and weight-0 tables");
    common(tables, true);
    auto* les = app.add_subcommand("les", "solve the long exact sequence from an inputs file");
    common(les, false);
    les->add_option("inputs", file, "inputs file (default: bundled for --g)")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (les->parsed() && file.empty() && cfg.g == 0) {
        std::cerr << "les: give --g or an inputs file\n";
        return 2;
    }

    try {
        if (forms->parsed())
            cmd_forms(cfg);
        else if (orbits->parsed())
            cmd_orbits(cfg);
        else if (complex->parsed())
            cmd_complex(cfg, kind);
        else if (homology->parsed())
            cmd_homology(cfg, file);
        else if (verify->parsed())
            cmd_verify(cfg);
        else if (tables->parsed())
            cmd_tables(cfg);
        else if (les->parsed())
            cmd_les(cfg, file);
    } catch (const ValidationFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
