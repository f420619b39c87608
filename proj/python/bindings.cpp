#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fractal/connectivity.hpp"
#include "fractal/embedding.hpp"
#include "fractal/harmonic.hpp"
#include "fractal/measures.hpp"
#include "fractal/spec.hpp"

namespace py = pybind11;
using namespace fractal;

namespace {

FractalSpec from_arg(const std::string& arg) {
    // Fixture name, "sg:<k>", or inline JSON.
    if (arg == "vicsek" || arg == "hexagasket3" || arg.rfind("sg:", 0) == 0) return fixture(arg);
    return spec_from_json(arg);
}

std::vector<Rat> rat_vec(const std::vector<std::string>& v) {
    std::vector<Rat> out;
    for (const auto& s : v) out.push_back(Rat::from_string(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(fractal_harmonics, m) {
    m.doc() = "harmonic structures on finitely ramified self-similar sets";

    m.def("gasket_spec_json", [](int k) { return spec_to_json(gasket_spec(k)); },
          py::arg("k"), "first-level cell structure of the level-k gasket, as JSON");
    m.def("fixture_json", [](const std::string& name) { return spec_to_json(fixture(name)); },
          py::arg("name"));
    m.def("refine_json", [](const std::string& spec, int m_) { return graph_to_json(refine(from_arg(spec), m_)); },
          py::arg("spec"), py::arg("m"));
    m.def("renorm", [](const std::string& spec) { return renorm_factor(from_arg(spec)).str(); },
          py::arg("spec"), "exact renormalization constant as a rational string");
    m.def("renorm_float", [](const std::string& spec) { return renorm_factor_float(from_arg(spec)); },
          py::arg("spec"));
    m.def("extension_matrices_json",
          [](const std::string& spec, const std::string& mode) {
              return extension_to_json(extension_matrices(from_arg(spec), mode == "float" ? Mode::floating : Mode::exact));
          },
          py::arg("spec"), py::arg("mode") = "exact");
    m.def("nondegeneracy_json",
          [](const std::string& spec, const std::string& mode) {
              return nondegeneracy_to_json(nondegeneracy_check(from_arg(spec), mode == "float" ? Mode::floating : Mode::exact));
          },
          py::arg("spec"), py::arg("mode") = "exact");
    m.def("vertex_connectivity",
          [](const std::string& spec) {
              FractalSpec s = from_arg(spec);
              AugmentedGraph g = augment(s);
              return vertex_connectivity(g.base.vertex_count, g.all_edges());
          },
          py::arg("spec"), "vertex connectivity of the boundary-augmented first approximation");
    m.def("prop21_json", [](const std::string& spec) { return prop21_to_json(prop21_check(from_arg(spec))); },
          py::arg("spec"));
    m.def("embed_svg",
          [](const std::string& spec, int m_, const std::string& anchors) {
              FractalSpec s = from_arg(spec);
              GraphApprox g = refine(s, m_);
              auto a = anchors.empty() ? generic_anchors(s.boundary_size) : parse_anchors(anchors, s.boundary_size);
              Embedding emb = tutte_embed(g, a, Mode::floating, 1e-12);
              std::vector<std::pair<int, int>> edges;
              for (const auto& e : g.edges) edges.emplace_back(e.u, e.v);
              return export_svg(emb, edges);
          },
          py::arg("spec"), py::arg("m") = 1, py::arg("anchors") = "");
    m.def("certify",
          [](const std::string& spec, const std::string& anchors) {
              FractalSpec s = from_arg(spec);
              AugmentedGraph g = augment(s);
              auto a = anchors.empty() ? generic_anchors(s.boundary_size) : parse_anchors(anchors, s.boundary_size);
              Embedding emb = tutte_embed(g, a, Mode::exact);
              CertificationRecord rec = certify_embedding(g, emb);
              return rec.certified;
          },
          py::arg("spec"), py::arg("anchors") = "",
          "exact crossing-free certificate of the augmented first approximation");
    m.def("energy_measure",
          [](const std::string& spec, const std::vector<std::string>& h, const std::string& word) {
              FractalSpec s = from_arg(spec);
              ExtensionSet ext = extension_matrices(s, Mode::exact);
              return energy_measure_cell(s, ext, rat_vec(h), parse_word(word, s.cell_count())).str();
          },
          py::arg("spec"), py::arg("h"), py::arg("word"));
    m.def("kusuoka",
          [](const std::string& spec, const std::string& word) {
              FractalSpec s = from_arg(spec);
              ExtensionSet ext = extension_matrices(s, Mode::exact);
              return kusuoka_cell(s, ext, parse_word(word, s.cell_count())).str();
          },
          py::arg("spec"), py::arg("word"));
    m.def("sg2_closed_forms",
          [](const std::string& a, int m_) {
              auto v = sg2_closed_forms(Rat::from_string(a), m_);
              return std::vector<std::string>{v[0].str(), v[1].str(), v[2].str()};
          },
          py::arg("a"), py::arg("m"));
    m.def("ratio_table_csv",
          [](const std::string& spec, const std::vector<std::string>& h1, const std::vector<std::string>& h2,
             int m_max, const std::vector<double>& p, int threads) {
              FractalSpec s = from_arg(spec);
              ExtensionSet ext = extension_matrices(s, Mode::exact);
              return ratio_table_csv(ratio_table(s, ext, rat_vec(h1), rat_vec(h2), m_max, p, {}, threads));
          },
          py::arg("spec"), py::arg("h1"), py::arg("h2"), py::arg("m_max"), py::arg("p"), py::arg("threads") = 1);
    m.def("p_bound",
          [](const std::string& spec) {
              FractalSpec s = from_arg(spec);
              ExtensionSet ext = extension_matrices(s, Mode::exact);
              DecayEigenvalue d = p_bound(s, ext);
              py::dict out;
              out["corner_eig_min"] = d.corner_eig_min.str();
              out["lambda"] = d.lambda.str();
              out["r"] = d.r.str();
              out["p_bound"] = d.p_bound;
              return out;
          },
          py::arg("spec"));
    m.def("embedding_identity",
          [](const std::string& spec, int m_) {
              FractalSpec s = from_arg(spec);
              ExtensionSet ext = extension_matrices(s, Mode::exact);
              return kusuoka_embedding_identity(s, ext, m_);
          },
          py::arg("spec"), py::arg("m"));

    m.attr("__version__") = "0.1.0";
}
