// Command-line front end: every pipeline with deterministic JSON/CSV/SVG
// output. Artifacts go to --out (or stdout); the reproducibility header and
// one-line summaries go to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fractal/connectivity.hpp"
#include "fractal/embedding.hpp"
#include "fractal/errors.hpp"
#include "fractal/harmonic.hpp"
#include "fractal/measures.hpp"
#include "fractal/spec.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    int k = 0;
    std::string spec_arg;
    std::string mode = "exact";
    double tol = 1e-12;
    int level = 1;
    std::string anchors;
    std::string h1, h2;
    std::string p_list;
    int m_max = 8;
    std::string format;
    std::string out;
    int threads = 0;
    bool kusuoka = false;
};

fractal::FractalSpec resolve_spec(const CommonOpts& o) {
    if (o.k > 0 && !o.spec_arg.empty())
        throw fractal::InvalidArgument("--k and --spec are mutually exclusive");
    if (o.k > 0) return fractal::gasket_spec(o.k);
    if (o.spec_arg.empty()) throw fractal::InvalidArgument("one of --k or --spec is required");
    if (o.spec_arg == "vicsek" || o.spec_arg == "hexagasket3" || o.spec_arg.rfind("sg:", 0) == 0)
        return fractal::fixture(o.spec_arg);
    return fractal::load_spec(o.spec_arg);
}

fractal::Mode parse_mode(const std::string& m) {
    if (m == "exact") return fractal::Mode::exact;
    if (m == "float") return fractal::Mode::floating;
    throw fractal::InvalidArgument("--mode must be exact or float");
}

int effective_threads(const CommonOpts& o) {
    if (o.threads > 0) return o.threads;
    if (const char* env = std::getenv("FRACTAL_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

void emit(const CommonOpts& o, const std::string& payload) {
    if (o.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw fractal::InvalidArgument("cannot open --out path '" + o.out + "'");
    f << payload;
}

void header(const CommonOpts& o, const fractal::FractalSpec& spec) {
    std::cerr << "# fractal-harmonics " << kVersion << "\n"
              << "# spec: " << spec.name << " (hash " << fractal::spec_hash(spec) << ")  mode: " << o.mode
              << "  threads: " << effective_threads(o) << "\n"
              << "# conventions: boundary=(q1,q2,q3; apex first for gaskets); gasket cells row-major "
                 "from bottom-left; word letters outermost first; rationals as \"p/q\"\n";
}

std::vector<fractal::Rat> parse_vec(const std::string& text, int n0, const char* flag) {
    std::vector<fractal::Rat> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(fractal::Rat::from_string(tok));
    if (static_cast<int>(v.size()) != n0)
        throw fractal::InvalidArgument(std::string(flag) + ": expected " + std::to_string(n0) + " components");
    return v;
}

std::vector<std::array<fractal::Rat, 2>> anchors_for(const CommonOpts& o, const fractal::FractalSpec& spec) {
    if (!o.anchors.empty()) return fractal::parse_anchors(o.anchors, spec.boundary_size);
    bool have_draw = true;
    for (int b : spec.boundary)
        if (!spec.draw_coords.count(b)) have_draw = false;
    if (have_draw) {
        std::vector<std::array<fractal::Rat, 2>> a;
        for (int b : spec.boundary) a.push_back(spec.draw_coords.at(b));
        return a;
    }
    return fractal::generic_anchors(spec.boundary_size);
}

std::vector<std::pair<int, int>> plain_edges(const fractal::GraphApprox& g) {
    std::vector<std::pair<int, int>> e;
    e.reserve(g.edges.size());
    for (const auto& ed : g.edges) e.emplace_back(ed.u, ed.v);
    return e;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic structures on finitely ramified self-similar sets"};
    app.require_subcommand(1);
    CommonOpts o;

    auto add_common = [&](CLI::App* sub, bool with_level = false) {
        sub->add_option("--k", o.k, "gasket level k (builds the level-k triangle subdivision spec)");
        sub->add_option("--spec", o.spec_arg, "spec file path or fixture name (vicsek, hexagasket3, sg:<k>)");
        sub->add_option("--mode", o.mode, "arithmetic mode: exact | float")->default_str("exact");
        sub->add_option("--tol", o.tol, "float solve tolerance (relative residual)")->default_val(1e-12);
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--threads", o.threads, "worker threads (default FRACTAL_THREADS or 1)");
        if (with_level) sub->add_option("--level", o.level, "graph refinement level m")->default_val(1);
    };

    auto* c_spec = app.add_subcommand("spec", "emit the first-level cell structure as JSON");
    add_common(c_spec);
    auto* c_refine = app.add_subcommand("refine", "build the level-m graph approximation");
    add_common(c_refine, true);
    auto* c_renorm = app.add_subcommand("renorm", "renormalization constant from the exact traced form");
    add_common(c_renorm);
    auto* c_matrices = app.add_subcommand("matrices", "harmonic extension matrices per cell");
    add_common(c_matrices);
    auto* c_check = app.add_subcommand("check", "non-degeneracy verdict from extension-matrix determinants");
    add_common(c_check);
    auto* c_conn = app.add_subcommand("connectivity",
                                      "vertex connectivity of the boundary-augmented first approximation");
    add_common(c_conn);
    auto* c_embed = app.add_subcommand("embed", "barycentric embedding with pinned boundary anchors");
    add_common(c_embed, true);
    c_embed->add_option("--anchors", o.anchors, "anchor points \"x1,y1;x2,y2;...\" (exact rationals)");
    c_embed->add_option("--format", o.format, "json | svg")->default_str("json");
    auto* c_certify = app.add_subcommand("certify",
                                         "exact embedding certificate: no crossings, no degenerate cells");
    add_common(c_certify, true);
    c_certify->add_option("--anchors", o.anchors, "anchor points (exact rationals)");
    auto* c_measure = app.add_subcommand("measure", "energy/Kusuoka measure table per cell");
    add_common(c_measure, true);
    c_measure->add_option("--h1", o.h1, "boundary values \"a,b,c\" (exact rationals)");
    c_measure->add_option("--h2", o.h2, "second boundary vector");
    c_measure->add_flag("--kusuoka", o.kusuoka, "include the Kusuoka column");
    auto* c_identity = app.add_subcommand("identity",
                                          "max discrepancy between renormalized embedded side sums and "
                                          "Kusuoka cell values");
    add_common(c_identity, true);
    auto* c_table = app.add_subcommand("rn-table", "S(m,p) and ratio-test R(m,p) table as CSV");
    add_common(c_table);
    c_table->add_option("--h1", o.h1, "boundary values of h1 (exact rationals)")->required();
    c_table->add_option("--h2", o.h2, "boundary values of h2 (exact rationals)")->required();
    c_table->add_option("--p", o.p_list, "comma-separated p values")->required();
    c_table->add_option("--m-max", o.m_max, "largest level m")->default_val(8);
    auto* c_pbound = app.add_subcommand("p-bound", "corner decay eigenvalue and the induced exponent bound");
    add_common(c_pbound);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        fractal::FractalSpec spec = resolve_spec(o);
        header(o, spec);
        fractal::Mode mode = parse_mode(o.mode);
        const int threads = effective_threads(o);

        if (c_spec->parsed()) {
            emit(o, fractal::spec_to_json(spec));
        } else if (c_refine->parsed()) {
            emit(o, fractal::graph_to_json(fractal::refine(spec, o.level)));
        } else if (c_renorm->parsed()) {
            nlohmann::json j;
            fractal::Rat r = fractal::renorm_factor(spec);
            j["r"] = r.str();
            j["r_float"] = r.to_double();
            if (mode == fractal::Mode::floating) j["r_float_crosscheck"] = fractal::renorm_factor_float(spec, o.tol);
            emit(o, j.dump(2) + "\n");
        } else if (c_matrices->parsed()) {
            emit(o, fractal::extension_to_json(fractal::extension_matrices(spec, mode)));
        } else if (c_check->parsed()) {
            fractal::NondegeneracyReport rep = fractal::nondegeneracy_check(spec, mode);
            emit(o, fractal::nondegeneracy_to_json(rep));
            const char* verdict = rep.verdict == fractal::NondegeneracyReport::Verdict::nondegenerate
                                      ? "nondegenerate"
                                      : rep.verdict == fractal::NondegeneracyReport::Verdict::degenerate
                                            ? "degenerate"
                                            : "inconclusive";
            std::cerr << "verdict: " << verdict << " (min |det| = " << rep.min_abs_det << ")\n";
        } else if (c_conn->parsed()) {
            fractal::Prop21Result r = fractal::prop21_check(spec);
            emit(o, fractal::prop21_to_json(r));
            if (r.trivial) {
                std::cerr << "trivial: no interior vertex, test inapplicable\n";
            } else if (r.verdict == fractal::Prop21Result::Verdict::degenerate) {
                std::cerr << "kappa=" << r.kappa << " < |V_0|=" << r.v0 << ": degenerate\n";
            } else {
                std::cerr << "kappa=" << r.kappa << " >= |V_0|=" << r.v0 << ": necessary condition passed\n";
            }
        } else if (c_embed->parsed()) {
            fractal::GraphApprox g = fractal::refine(spec, o.level);
            fractal::Embedding emb = fractal::tutte_embed(g, anchors_for(o, spec), mode, o.tol);
            if (o.format == "svg") {
                emit(o, fractal::export_svg(emb, plain_edges(g)));
            } else {
                emit(o, fractal::embedding_to_json(emb));
            }
        } else if (c_certify->parsed()) {
            fractal::GraphApprox g = fractal::refine(spec, o.level);
            // Boundary clique for the outer face, as in the augmented graph.
            std::vector<std::pair<int, int>> edges = plain_edges(g);
            for (size_t a = 0; a < g.boundary.size(); ++a) {
                for (size_t b = a + 1; b < g.boundary.size(); ++b) {
                    int u = g.boundary[a], v = g.boundary[b];
                    bool present = false;
                    for (const auto& e : edges)
                        if ((e.first == u && e.second == v) || (e.first == v && e.second == u)) present = true;
                    if (!present) edges.emplace_back(std::min(u, v), std::max(u, v));
                }
            }
            if (mode == fractal::Mode::floating) {
                // Tolerance scan only; never a certificate.
                fractal::Embedding emb = fractal::tutte_embed(g, anchors_for(o, spec), mode, o.tol);
                fractal::FloatScan scan = fractal::scan_embedding_float(g, edges, emb);
                nlohmann::json j;
                bool clean = scan.crossings_at_tolerance == 0 && scan.flat_cells_at_tolerance == 0;
                j["verdict"] = clean ? "no-crossings-found-at-tolerance" : "suspect-features-found";
                j["certified"] = false;
                j["crossings_at_tolerance"] = scan.crossings_at_tolerance;
                j["flat_cells_at_tolerance"] = scan.flat_cells_at_tolerance;
                emit(o, j.dump(2) + "\n");
                std::cerr << "float scan (not a certificate): " << j["verdict"].get<std::string>() << "\n";
            } else {
                fractal::Embedding emb = fractal::tutte_embed(g, anchors_for(o, spec), fractal::Mode::exact);
                fractal::CertificationRecord rec = fractal::certify_embedding(g, edges, emb);
                nlohmann::json j;
                j["verdict"] = rec.certified ? "certified" : "refuted";
                nlohmann::json crossings = nlohmann::json::array();
                for (auto [x, y] : rec.crossings) crossings.push_back({x, y});
                j["crossings"] = crossings;
                nlohmann::json cells = nlohmann::json::array();
                for (const auto& w : rec.degenerate_cells) cells.push_back(fractal::word_str(w));
                j["degenerate_cells"] = cells;
                emit(o, j.dump(2) + "\n");
                std::cerr << (rec.certified ? "certified\n" : "refuted\n");
            }
        } else if (c_measure->parsed()) {
            fractal::ExtensionSet ext = fractal::extension_matrices(spec, fractal::Mode::exact);
            std::optional<std::vector<fractal::Rat>> h1, h2;
            if (!o.h1.empty()) h1 = parse_vec(o.h1, spec.boundary_size, "--h1");
            if (!o.h2.empty()) h2 = parse_vec(o.h2, spec.boundary_size, "--h2");
            bool kus = o.kusuoka || (!h1 && !h2);
            emit(o, fractal::measure_table_to_json(
                        fractal::measure_table(spec, ext, o.level, h1, h2, kus)));
        } else if (c_identity->parsed()) {
            fractal::ExtensionSet ext = fractal::extension_matrices(spec, fractal::Mode::exact);
            double d = fractal::kusuoka_embedding_identity(spec, ext, o.level, std::min(o.tol, 1e-13));
            nlohmann::json j;
            j["level"] = o.level;
            j["max_discrepancy"] = d;
            emit(o, j.dump(2) + "\n");
        } else if (c_table->parsed()) {
            fractal::ExtensionSet ext = fractal::extension_matrices(spec, fractal::Mode::exact);
            std::vector<fractal::Rat> h1 = parse_vec(o.h1, spec.boundary_size, "--h1");
            std::vector<fractal::Rat> h2 = parse_vec(o.h2, spec.boundary_size, "--h2");
            std::vector<double> ps;
            std::vector<std::string> labels;
            std::stringstream ss(o.p_list);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                labels.push_back(tok);
                ps.push_back(fractal::Rat::from_string(tok).to_double());
            }
            if (ps.empty()) throw fractal::InvalidArgument("--p: at least one value required");
            fractal::RatioTable t = fractal::ratio_table(spec, ext, h1, h2, o.m_max, ps, labels, threads);
            emit(o, fractal::ratio_table_csv(t));
        } else if (c_pbound->parsed()) {
            fractal::ExtensionSet ext = fractal::extension_matrices(spec, fractal::Mode::exact);
            emit(o, fractal::p_bound_to_json(fractal::p_bound(spec, ext)));
        }
        return 0;
    } catch (const fractal::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fractal::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fractal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
