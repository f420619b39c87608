#include "fractal/spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fractal/errors.hpp"

namespace fractal {

using nlohmann::json;

std::string word_str(const Word& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(w[i]);
    }
    return s;
}

Word parse_word(const std::string& s, int cell_count) {
    Word w;
    if (s.empty()) return w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
        if (tok.empty()) throw InvalidArgument("bad word string: '" + s + "'");
        int v = std::stoi(tok);
        if (v < 0 || v >= cell_count)
            throw InvalidArgument("word letter " + tok + " out of range [0," + std::to_string(cell_count) + ")");
        w.push_back(v);
    }
    return w;
}

Rat FractalSpec::conductance(int u, int v) const {
    auto key = std::minmax(u, v);
    auto it = conductances.find({key.first, key.second});
    return it == conductances.end() ? Rat(1) : it->second;
}

int FractalSpec::boundary_slot(int v) const {
    for (size_t a = 0; a < boundary.size(); ++a)
        if (boundary[a] == v) return static_cast<int>(a);
    return -1;
}

void FractalSpec::validate() const {
    const int n0 = boundary_size;
    if (n0 < 2) throw SpecError("boundary_size must be at least 2");
    if (vertex_count < n0) throw SpecError("vertex_count smaller than boundary_size");
    if (static_cast<int>(boundary.size()) != n0)
        throw SpecError("boundary: expected " + std::to_string(n0) + " ids, got " +
                        std::to_string(boundary.size()));
    std::vector<char> seen_boundary(vertex_count, 0);
    for (int v : boundary) {
        if (v < 0 || v >= vertex_count) throw SpecError("boundary: vertex id " + std::to_string(v) + " out of range");
        if (seen_boundary[v]) throw SpecError("boundary: duplicate vertex id " + std::to_string(v));
        seen_boundary[v] = 1;
    }
    if (cells.empty()) throw SpecError("cells: at least one cell required");
    std::vector<char> covered(vertex_count, 0);
    for (size_t i = 0; i < cells.size(); ++i) {
        const auto& c = cells[i];
        if (static_cast<int>(c.size()) != n0)
            throw SpecError("cells[" + std::to_string(i) + "]: cell arity mismatch (expected " +
                            std::to_string(n0) + " entries, got " + std::to_string(c.size()) + ")");
        std::vector<char> in_cell(vertex_count, 0);
        for (int v : c) {
            if (v < 0 || v >= vertex_count)
                throw SpecError("cells[" + std::to_string(i) + "]: vertex id " + std::to_string(v) + " out of range");
            if (in_cell[v])
                throw SpecError("cells[" + std::to_string(i) + "]: repeated vertex id " + std::to_string(v));
            in_cell[v] = 1;
            covered[v] = 1;
        }
    }
    for (int v = 0; v < vertex_count; ++v)
        if (!covered[v]) throw SpecError("vertex " + std::to_string(v) + " appears in no cell");
    // Connectivity of the within-cell pair graph.
    std::vector<std::vector<int>> adj(vertex_count);
    for (const auto& c : cells) {
        for (size_t a = 0; a < c.size(); ++a)
            for (size_t b = a + 1; b < c.size(); ++b) {
                adj[c[a]].push_back(c[b]);
                adj[c[b]].push_back(c[a]);
            }
    }
    std::vector<char> vis(vertex_count, 0);
    std::vector<int> stack = {0};
    vis[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : adj[u])
            if (!vis[w]) {
                vis[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    if (count != vertex_count) throw SpecError("spec graph disconnected");
    for (const auto& [key, c] : conductances) {
        if (key.first < 0 || key.second >= vertex_count || key.first >= key.second)
            throw SpecError("conductances: bad vertex pair (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ")");
        if (c.sign() <= 0) throw SpecError("conductances: value must be positive");
    }
    for (const auto& [v, pt] : draw_coords) {
        (void)pt;
        if (v < 0 || v >= vertex_count) throw SpecError("draw_coords: vertex id " + std::to_string(v) + " out of range");
    }
    if (renorm_override && renorm_override->sign() <= 0) throw SpecError("renorm_override must be positive");
}

// ---------------------------------------------------------------------------

FractalSpec gasket_spec(int k) {
    if (k < 2) throw SpecError("gasket_spec: k must be at least 2");
    FractalSpec s;
    s.name = "sg" + std::to_string(k);
    s.boundary_size = 3;
    // Lattice points (c, r) with r in [0,k], c in [0, k-r]; ids row-major from
    // the bottom row. q_2 = (0,0), q_3 = (k,0), q_1 = (0,k).
    auto vid = [k](int c, int r) {
        // Rows 0..r-1 hold k+1, k, ..., k+2-r points.
        return r * (k + 1) - r * (r - 1) / 2 + c;
    };
    s.vertex_count = (k + 1) * (k + 2) / 2;
    s.boundary = {vid(0, k), vid(0, 0), vid(k, 0)};
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c + r < k; ++c) {
            // Upward triangle with corners (c,r), (c+1,r), (c,r+1).
            // Slot order (q1, q2, q3) = (top, bottom-left, bottom-right).
            s.cells.push_back({vid(c, r + 1), vid(c, r), vid(c + 1, r)});
        }
    }
    for (int r = 0; r <= k; ++r)
        for (int c = 0; c + r <= k; ++c) s.draw_coords[vid(c, r)] = {Rat(c), Rat(r)};
    s.validate();
    return s;
}

FractalSpec fixture(const std::string& name) {
    if (name.rfind("sg:", 0) == 0) {
        int k;
        try {
            k = std::stoi(name.substr(3));
        } catch (...) {
            throw SpecError("fixture: bad gasket level in '" + name + "'");
        }
        return gasket_spec(k);
    }
    if (name == "vicsek") {
        FractalSpec s;
        s.name = "vicsek";
        s.boundary_size = 4;
        s.vertex_count = 16;
        // Four corner squares of the unit-third subdivision plus the center
        // square; each corner cell shares exactly one vertex with the center.
        // Ids assigned in first-occurrence order over the cells below.
        s.boundary = {0, 5, 10, 15};
        s.cells = {
            {0, 1, 2, 3},      // corner at q_1, inner corner 2
            {4, 5, 6, 7},      // corner at q_2, inner corner 7
            {8, 9, 10, 11},    // corner at q_3, inner corner 8
            {12, 13, 14, 15},  // corner at q_4, inner corner 13
            {2, 7, 8, 13},     // center
        };
        s.draw_coords = {
            {0, {Rat(0), Rat(0)}},  {1, {Rat(1), Rat(0)}},  {2, {Rat(1), Rat(1)}},  {3, {Rat(0), Rat(1)}},
            {4, {Rat(2), Rat(0)}},  {5, {Rat(3), Rat(0)}},  {6, {Rat(3), Rat(1)}},  {7, {Rat(2), Rat(1)}},
            {8, {Rat(2), Rat(2)}},  {9, {Rat(3), Rat(2)}},  {10, {Rat(3), Rat(3)}}, {11, {Rat(2), Rat(3)}},
            {12, {Rat(0), Rat(2)}}, {13, {Rat(1), Rat(2)}}, {14, {Rat(1), Rat(3)}}, {15, {Rat(0), Rat(3)}},
        };
        s.validate();
        return s;
    }
    if (name == "hexagasket3") {
        FractalSpec s;
        s.name = "hexagasket3";
        s.boundary_size = 3;
        s.vertex_count = 12;
        // Six triangular cells in a ring; cell i shares vertex s_i with cell
        // i+1 (mod 6). Shared vertices are 0..5, free vertices 6..11; the free
        // corners of cells 0, 2, 4 are the boundary.
        s.boundary = {6, 8, 10};
        s.cells = {
            {6, 5, 0},   // contains q_1 at slot 0
            {0, 7, 1},   //
            {1, 8, 2},   // contains q_2 at slot 1
            {2, 9, 3},   //
            {3, 4, 10},  // contains q_3 at slot 2
            {4, 11, 5},  //
        };
        s.validate();
        return s;
    }
    throw SpecError("unknown fixture '" + name + "' (expected vicsek, hexagasket3, or sg:<k>)");
}

// ---------------------------------------------------------------------------

namespace {

json rat_json(const Rat& r) { return r.str(); }

Rat rat_from_json(const json& j, const std::string& where) {
    if (!j.is_string()) throw SpecError(where + ": expected a rational string");
    try {
        return Rat::from_string(j.get<std::string>());
    } catch (const Error& e) {
        throw SpecError(where + ": " + e.what());
    }
}

json spec_json(const FractalSpec& s) {
    json j;
    j["name"] = s.name;
    j["boundary_size"] = s.boundary_size;
    j["vertex_count"] = s.vertex_count;
    j["boundary"] = s.boundary;
    j["cells"] = s.cells;
    if (!s.conductances.empty()) {
        json arr = json::array();
        for (const auto& [key, c] : s.conductances) arr.push_back({key.first, key.second, rat_json(c)});
        j["conductances"] = arr;
    }
    if (!s.draw_coords.empty()) {
        json obj = json::object();
        for (const auto& [v, pt] : s.draw_coords)
            obj[std::to_string(v)] = {rat_json(pt[0]), rat_json(pt[1])};
        j["draw_coords"] = obj;
    }
    if (s.renorm_override) j["renorm_override"] = rat_json(*s.renorm_override);
    return j;
}

}  // namespace

std::string spec_to_json(const FractalSpec& spec) { return spec_json(spec).dump(2) + "\n"; }

FractalSpec spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec JSON parse error: ") + e.what());
    }
    FractalSpec s;
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
        return j.at(key);
    };
    try {
        s.name = need("name").get<std::string>();
        s.boundary_size = need("boundary_size").get<int>();
        s.vertex_count = need("vertex_count").get<int>();
        s.boundary = need("boundary").get<std::vector<int>>();
        s.cells = need("cells").get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
        throw SpecError(std::string("spec JSON type error: ") + e.what());
    }
    if (j.contains("conductances")) {
        if (!j["conductances"].is_array()) throw SpecError("conductances: expected an array");
        for (const auto& ent : j["conductances"]) {
            if (!ent.is_array() || ent.size() != 3) throw SpecError("conductances: expected [u, v, \"p/q\"] entries");
            int u, v;
            try {
                u = ent[0].get<int>();
                v = ent[1].get<int>();
            } catch (const json::exception&) {
                throw SpecError("conductances: bad vertex ids");
            }
            if (u == v) throw SpecError("conductances: loop edge not allowed");
            auto key = std::minmax(u, v);
            s.conductances[{key.first, key.second}] = rat_from_json(ent[2], "conductances");
        }
    }
    if (j.contains("draw_coords")) {
        if (!j["draw_coords"].is_object()) throw SpecError("draw_coords: expected an object");
        for (auto it = j["draw_coords"].begin(); it != j["draw_coords"].end(); ++it) {
            int v;
            try {
                v = std::stoi(it.key());
            } catch (...) {
                throw SpecError("draw_coords: bad vertex id key '" + it.key() + "'");
            }
            const json& pt = it.value();
            if (!pt.is_array() || pt.size() != 2) throw SpecError("draw_coords: expected [\"x\",\"y\"]");
            s.draw_coords[v] = {rat_from_json(pt[0], "draw_coords"), rat_from_json(pt[1], "draw_coords")};
        }
    }
    if (j.contains("renorm_override")) s.renorm_override = rat_from_json(j["renorm_override"], "renorm_override");
    s.validate();
    return s;
}

void save_spec(const FractalSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecError("cannot open '" + path + "' for writing");
    out << spec_to_json(spec);
}

FractalSpec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

std::string spec_hash(const FractalSpec& spec) {
    std::string canon = spec_json(spec).dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace fractal
