#include "fractal/graph.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "fractal/errors.hpp"

namespace fractal {

long long GraphApprox::word_index(const Word& w) const {
    if (static_cast<int>(w.size()) != level) throw InvalidArgument("word length does not match graph level");
    long long idx = 0;
    for (int letter : w) {
        if (letter < 0 || letter >= cell_alphabet) throw InvalidArgument("word letter out of range");
        idx = idx * cell_alphabet + letter;
    }
    return idx;
}

namespace {

void merge_edges(std::vector<Edge>& edges) {
    for (auto& e : edges)
        if (e.u > e.v) std::swap(e.u, e.v);
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    std::vector<Edge> merged;
    for (auto& e : edges) {
        if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
            merged.back().c += e.c;  // two cells sharing two vertices
        } else {
            merged.push_back(std::move(e));
        }
    }
    edges = std::move(merged);
}

GraphApprox base_graph(const FractalSpec& spec) {
    // G_0: complete graph on the boundary, vertex a <-> boundary slot a.
    GraphApprox g;
    g.level = 0;
    g.cell_alphabet = spec.cell_count();
    g.vertex_count = spec.boundary_size;
    for (int a = 0; a < spec.boundary_size; ++a) g.boundary.push_back(a);
    for (int a = 0; a < spec.boundary_size; ++a)
        for (int b = a + 1; b < spec.boundary_size; ++b)
            g.edges.push_back({a, b, spec.conductance(spec.boundary[a], spec.boundary[b])});
    g.words.push_back({});
    g.cell_vertices.push_back(g.boundary);
    merge_edges(g.edges);
    return g;
}

GraphApprox level_one(const FractalSpec& spec) {
    GraphApprox g;
    g.level = 1;
    g.cell_alphabet = spec.cell_count();
    g.vertex_count = spec.vertex_count;
    g.boundary = spec.boundary;
    for (int i = 0; i < spec.cell_count(); ++i) {
        const auto& cell = spec.cells[i];
        g.words.push_back({i});
        g.cell_vertices.push_back(cell);
        for (size_t a = 0; a < cell.size(); ++a)
            for (size_t b = a + 1; b < cell.size(); ++b)
                g.edges.push_back({cell[a], cell[b], spec.conductance(cell[a], cell[b])});
    }
    merge_edges(g.edges);
    return g;
}

}  // namespace

GraphApprox refine(const FractalSpec& spec, int m) {
    spec.validate();
    if (m < 0) throw InvalidArgument("refine: level must be non-negative");
    if (m == 0) return base_graph(spec);
    GraphApprox prev = level_one(spec);
    for (int lvl = 2; lvl <= m; ++lvl) {
        GraphApprox g;
        g.level = lvl;
        g.cell_alphabet = spec.cell_count();
        const int n0 = spec.boundary_size;
        // Junction ids are keyed by the spec (G_1) vertex they refine.
        std::vector<int> shared_id(spec.vertex_count, -1);
        int next = 0;
        std::vector<int> vmap(prev.vertex_count);
        std::vector<char> is_prev_boundary(prev.vertex_count, 0);
        std::vector<int> prev_slot(prev.vertex_count, -1);
        for (int a = 0; a < n0; ++a) {
            is_prev_boundary[prev.boundary[a]] = 1;
            prev_slot[prev.boundary[a]] = a;
        }
        g.edges.reserve(prev.edges.size() * spec.cell_count());
        g.words.reserve(prev.words.size() * spec.cell_count());
        g.cell_vertices.reserve(prev.words.size() * spec.cell_count());
        for (int i = 0; i < spec.cell_count(); ++i) {
            for (int v = 0; v < prev.vertex_count; ++v) {
                if (is_prev_boundary[v]) {
                    int spec_vertex = spec.cells[i][prev_slot[v]];
                    if (shared_id[spec_vertex] < 0) shared_id[spec_vertex] = next++;
                    vmap[v] = shared_id[spec_vertex];
                } else {
                    vmap[v] = next++;
                }
            }
            for (const Edge& e : prev.edges) g.edges.push_back({vmap[e.u], vmap[e.v], e.c});
            for (size_t w = 0; w < prev.words.size(); ++w) {
                Word word;
                word.reserve(prev.words[w].size() + 1);
                word.push_back(i);
                word.insert(word.end(), prev.words[w].begin(), prev.words[w].end());
                g.words.push_back(std::move(word));
                std::vector<int> cv(prev.cell_vertices[w].size());
                for (size_t j = 0; j < cv.size(); ++j) cv[j] = vmap[prev.cell_vertices[w][j]];
                g.cell_vertices.push_back(std::move(cv));
            }
        }
        g.vertex_count = next;
        g.boundary.resize(n0);
        for (int a = 0; a < n0; ++a) {
            if (shared_id[spec.boundary[a]] < 0)
                throw InternalError("refine: boundary vertex lost during substitution");
            g.boundary[a] = shared_id[spec.boundary[a]];
        }
        merge_edges(g.edges);
        prev = std::move(g);
    }
    return prev;
}

RatMatrix rat_laplacian(const GraphApprox& g) {
    RatMatrix l(g.vertex_count, g.vertex_count);
    for (const Edge& e : g.edges) {
        l.at(e.u, e.u) += e.c;
        l.at(e.v, e.v) += e.c;
        l.at(e.u, e.v) -= e.c;
        l.at(e.v, e.u) -= e.c;
    }
    return l;
}

InteriorSystem interior_system(const GraphApprox& g) {
    InteriorSystem s;
    const int n0 = static_cast<int>(g.boundary.size());
    s.pos.assign(g.vertex_count, -1);
    std::vector<int> bslot(g.vertex_count, -1);
    for (int a = 0; a < n0; ++a) bslot[g.boundary[a]] = a;
    for (int v = 0; v < g.vertex_count; ++v) {
        if (bslot[v] < 0) {
            s.pos[v] = static_cast<int>(s.interior.size());
            s.interior.push_back(v);
        }
    }
    const int ni = static_cast<int>(s.interior.size());
    s.lii.n = ni;
    s.coupling.assign(n0, std::vector<double>(ni, 0.0));
    std::vector<double> diag(ni, 0.0);
    for (const Edge& e : g.edges) {
        double c = e.c.to_double();
        int pu = s.pos[e.u], pv = s.pos[e.v];
        if (pu >= 0) diag[pu] += c;
        if (pv >= 0) diag[pv] += c;
        if (pu >= 0 && pv >= 0) {
            s.lii.add(std::min(pu, pv), std::max(pu, pv), -c);
        } else if (pu >= 0) {
            s.coupling[bslot[e.v]][pu] += c;
        } else if (pv >= 0) {
            s.coupling[bslot[e.u]][pv] += c;
        }
    }
    for (int i = 0; i < ni; ++i) s.lii.add(i, i, diag[i]);
    return s;
}

std::string graph_to_json(const GraphApprox& g) {
    nlohmann::json j;
    j["level"] = g.level;
    j["vertex_count"] = g.vertex_count;
    j["cell_count"] = g.cell_count();
    j["boundary"] = g.boundary;
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : g.edges) edges.push_back({e.u, e.v, e.c.str()});
    j["edges"] = edges;
    nlohmann::json cells = nlohmann::json::object();
    for (size_t i = 0; i < g.words.size(); ++i) cells[word_str(g.words[i])] = g.cell_vertices[i];
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

}  // namespace fractal
