#include "fractal/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fractal/errors.hpp"

namespace fractal {

std::array<Rat, 2> Embedding::exact_coord(int v) const {
    if (mode != Mode::exact) throw NotExactMode("embedding has no exact coordinates");
    return {Rat(exact_num[v][0], exact_den), Rat(exact_num[v][1], exact_den)};
}

namespace {

// Strictly convex polygon test in vertex order (either orientation).
void check_anchors(const std::vector<std::array<Rat, 2>>& anchors) {
    const int n = static_cast<int>(anchors.size());
    if (n < 3) throw DegenerateAnchors("need at least 3 anchors");
    int sign = 0;
    for (int i = 0; i < n; ++i) {
        const auto& a = anchors[i];
        const auto& b = anchors[(i + 1) % n];
        const auto& c = anchors[(i + 2) % n];
        Rat cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        int s = cross.sign();
        if (s == 0) throw DegenerateAnchors("anchors are collinear at position " + std::to_string(i));
        if (sign == 0) sign = s;
        else if (s != sign) throw DegenerateAnchors("anchors do not form a convex polygon");
    }
}

}  // namespace

Embedding tutte_embed(const GraphApprox& g, const std::vector<std::array<Rat, 2>>& anchors,
                      Mode mode, double tol) {
    const int n0 = static_cast<int>(g.boundary.size());
    if (static_cast<int>(anchors.size()) != n0)
        throw InvalidArgument("tutte_embed: expected " + std::to_string(n0) + " anchors");
    check_anchors(anchors);
    Embedding emb;
    emb.mode = mode;
    emb.vertex_count = g.vertex_count;
    emb.anchors = anchors;
    emb.coords.assign(g.vertex_count, {0.0, 0.0});
    if (mode == Mode::exact) {
        std::vector<std::vector<Rat>> bvs(2, std::vector<Rat>(n0));
        for (int a = 0; a < n0; ++a) {
            bvs[0][a] = anchors[a][0];
            bvs[1][a] = anchors[a][1];
        }
        ScaledValues sv = dirichlet_solve_exact_scaled(g, bvs);
        emb.exact_den = sv.den;
        emb.exact_num.resize(g.vertex_count);
        for (int v = 0; v < g.vertex_count; ++v) {
            emb.exact_num[v] = {std::move(sv.num[0][v]), std::move(sv.num[1][v])};
            emb.coords[v] = {Rat(emb.exact_num[v][0], emb.exact_den).to_double(),
                             Rat(emb.exact_num[v][1], emb.exact_den).to_double()};
        }
    } else {
        std::vector<double> bx(n0), by(n0);
        for (int a = 0; a < n0; ++a) {
            bx[a] = anchors[a][0].to_double();
            by[a] = anchors[a][1].to_double();
        }
        FloatDirichlet fx = dirichlet_solve_float(g, bx, tol);
        FloatDirichlet fy = dirichlet_solve_float(g, by, tol);
        emb.residual = std::max(fx.residual, fy.residual);
        for (int v = 0; v < g.vertex_count; ++v) emb.coords[v] = {fx.values[v], fy.values[v]};
    }
    return emb;
}

Embedding tutte_embed(const AugmentedGraph& g, const std::vector<std::array<Rat, 2>>& anchors,
                      Mode mode, double tol) {
    // Boundary clique edges touch only pinned vertices; the solve is the same.
    return tutte_embed(g.base, anchors, mode, tol);
}

Embedding tutte_embed_float(const GraphApprox& g, const std::vector<std::array<double, 2>>& anchors,
                            double tol) {
    const int n0 = static_cast<int>(g.boundary.size());
    if (static_cast<int>(anchors.size()) != n0)
        throw InvalidArgument("tutte_embed: expected " + std::to_string(n0) + " anchors");
    // Convexity check at float precision.
    int sign = 0;
    for (int i = 0; i < n0; ++i) {
        const auto& a = anchors[i];
        const auto& b = anchors[(i + 1) % n0];
        const auto& c = anchors[(i + 2) % n0];
        double cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        int s = cross > 0 ? 1 : cross < 0 ? -1 : 0;
        if (s == 0) throw DegenerateAnchors("anchors are collinear at position " + std::to_string(i));
        if (sign == 0) sign = s;
        else if (s != sign) throw DegenerateAnchors("anchors do not form a convex polygon");
    }
    Embedding emb;
    emb.mode = Mode::floating;
    emb.vertex_count = g.vertex_count;
    emb.coords.assign(g.vertex_count, {0.0, 0.0});
    std::vector<double> bx(n0), by(n0);
    for (int a = 0; a < n0; ++a) {
        bx[a] = anchors[a][0];
        by[a] = anchors[a][1];
    }
    FloatDirichlet fx = dirichlet_solve_float(g, bx, tol);
    FloatDirichlet fy = dirichlet_solve_float(g, by, tol);
    emb.residual = std::max(fx.residual, fy.residual);
    for (int v = 0; v < g.vertex_count; ++v) emb.coords[v] = {fx.values[v], fy.values[v]};
    return emb;
}

namespace {

int orient(const std::array<BigInt, 2>& a, const std::array<BigInt, 2>& b,
           const std::array<BigInt, 2>& c) {
    BigInt cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    return cross.sign();
}

bool on_segment_collinear(const std::array<BigInt, 2>& a, const std::array<BigInt, 2>& b,
                          const std::array<BigInt, 2>& p) {
    // Assumes a, b, p collinear; is p within the closed box of [a, b]?
    const BigInt& lox = a[0] < b[0] ? a[0] : b[0];
    const BigInt& hix = a[0] < b[0] ? b[0] : a[0];
    const BigInt& loy = a[1] < b[1] ? a[1] : b[1];
    const BigInt& hiy = a[1] < b[1] ? b[1] : a[1];
    return lox <= p[0] && p[0] <= hix && loy <= p[1] && p[1] <= hiy;
}

// Closed-segment intersection test, exact.
bool segments_intersect(const std::array<BigInt, 2>& p1, const std::array<BigInt, 2>& p2,
                        const std::array<BigInt, 2>& q1, const std::array<BigInt, 2>& q2) {
    int o1 = orient(p1, p2, q1);
    int o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1);
    int o4 = orient(q1, q2, p2);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;  // proper crossing
    if (o1 == 0 && on_segment_collinear(p1, p2, q1)) return true;
    if (o2 == 0 && on_segment_collinear(p1, p2, q2)) return true;
    if (o3 == 0 && on_segment_collinear(q1, q2, p1)) return true;
    if (o4 == 0 && on_segment_collinear(q1, q2, p2)) return true;
    return false;
}

}  // namespace

CertificationRecord certify_embedding(const GraphApprox& g,
                                      const std::vector<std::pair<int, int>>& edges,
                                      const Embedding& emb) {
    if (emb.mode != Mode::exact) throw NotExactMode("certification requires an exact embedding");
    CertificationRecord rec;
    const auto& pt = emb.exact_num;

    const int ne = static_cast<int>(edges.size());
    for (int i = 0; i < ne; ++i) {
        const auto [a, b] = edges[i];
        if (pt[a] == pt[b]) {
            rec.crossings.emplace_back(i, i);  // zero-length edge
            continue;
        }
        for (int j = i + 1; j < ne; ++j) {
            const auto [c, d] = edges[j];
            const bool share = a == c || a == d || b == c || b == d;
            if (!share) {
                if (segments_intersect(pt[a], pt[b], pt[c], pt[d])) rec.crossings.emplace_back(i, j);
                continue;
            }
            // Adjacent edges may touch only at the shared endpoint; collinear
            // overlap beyond it is a degenerate drawing.
            int s = a == c || a == d ? a : b;
            int x = a == s ? b : a;
            int y = c == s ? d : c;
            if (orient(pt[s], pt[x], pt[y]) != 0) continue;
            // Same direction from the shared endpoint means overlap.
            BigInt dot = (pt[x][0] - pt[s][0]) * (pt[y][0] - pt[s][0]) +
                         (pt[x][1] - pt[s][1]) * (pt[y][1] - pt[s][1]);
            if (dot.sign() > 0) rec.crossings.emplace_back(i, j);
        }
    }

    for (size_t ci = 0; ci < g.cell_vertices.size(); ++ci) {
        const auto& cv = g.cell_vertices[ci];
        // Degenerate iff all corners coincide or are collinear.
        bool degenerate = true;
        int p = -1;
        for (size_t t = 1; t < cv.size() && p < 0; ++t)
            if (!(pt[cv[t]] == pt[cv[0]])) p = static_cast<int>(t);
        if (p >= 0) {
            for (size_t t = 1; t < cv.size(); ++t) {
                if (static_cast<int>(t) == p) continue;
                if (orient(pt[cv[0]], pt[cv[p]], pt[cv[t]]) != 0) {
                    degenerate = false;
                    break;
                }
            }
        }
        if (degenerate) rec.degenerate_cells.push_back(g.words[ci]);
    }

    rec.certified = rec.crossings.empty() && rec.degenerate_cells.empty();
    return rec;
}

CertificationRecord certify_embedding(const AugmentedGraph& g, const Embedding& emb) {
    return certify_embedding(g.base, g.all_edges(), emb);
}

namespace {

double forient(const std::array<double, 2>& a, const std::array<double, 2>& b,
               const std::array<double, 2>& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

}  // namespace

FloatScan scan_embedding_float(const GraphApprox& g, const std::vector<std::pair<int, int>>& edges,
                               const Embedding& emb, double tol) {
    FloatScan scan;
    const auto& pt = emb.coords;
    const int ne = static_cast<int>(edges.size());
    auto d2 = [&](int u, int v) {
        double dx = pt[u][0] - pt[v][0], dy = pt[u][1] - pt[v][1];
        return dx * dx + dy * dy;
    };
    for (int i = 0; i < ne; ++i) {
        auto [a, b] = edges[i];
        for (int j = i + 1; j < ne; ++j) {
            auto [c, d] = edges[j];
            if (a == c || a == d || b == c || b == d) continue;
            // Orientations scaled so the test is invariant under zoom.
            double s = std::sqrt(std::max(d2(a, b), d2(c, d)));
            double o1 = forient(pt[a], pt[b], pt[c]) / (s * s);
            double o2 = forient(pt[a], pt[b], pt[d]) / (s * s);
            double o3 = forient(pt[c], pt[d], pt[a]) / (s * s);
            double o4 = forient(pt[c], pt[d], pt[b]) / (s * s);
            bool crossing = o1 * o2 < 0 && o3 * o4 < 0;
            bool touching = std::min({std::abs(o1), std::abs(o2), std::abs(o3), std::abs(o4)}) <= tol &&
                            o1 * o2 <= 0 && o3 * o4 <= 0;
            if (crossing || touching) ++scan.crossings_at_tolerance;
        }
    }
    for (const auto& cv : g.cell_vertices) {
        double area = std::abs(forient(pt[cv[0]], pt[cv[1]], pt[cv[2 % cv.size()]]));
        double side = std::max({d2(cv[0], cv[1]), d2(cv[0], cv[2 % cv.size()])});
        if (area <= tol * std::max(side, 1e-300)) ++scan.flat_cells_at_tolerance;
    }
    return scan;
}

std::vector<std::array<Rat, 2>> generic_anchors(int n0) {
    if (n0 == 3)
        return {{Rat(0), Rat(1)}, {Rat(2), Rat(0)}, {Rat(3), Rat(5)}};
    // Strictly convex chain on a parabola: (i^2, i(i - n0)), i = 0..n0-1.
    std::vector<std::array<Rat, 2>> a;
    for (int i = 0; i < n0; ++i) a.push_back({Rat(i * i), Rat(i * (i - n0))});
    return a;
}

std::vector<std::array<Rat, 2>> parse_anchors(const std::string& text, int n0) {
    std::vector<std::array<Rat, 2>> anchors;
    std::stringstream ss(text);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        size_t comma = pair.find(',');
        if (comma == std::string::npos) throw InvalidArgument("--anchors: expected \"x,y\" pairs separated by ';'");
        anchors.push_back({Rat::from_string(pair.substr(0, comma)), Rat::from_string(pair.substr(comma + 1))});
    }
    if (static_cast<int>(anchors.size()) != n0)
        throw InvalidArgument("--anchors: expected " + std::to_string(n0) + " points, got " +
                              std::to_string(anchors.size()));
    return anchors;
}

std::string export_svg(const Embedding& emb, const std::vector<std::pair<int, int>>& edges,
                       const SvgStyle& style) {
    double minx = 0, maxx = 0, miny = 0, maxy = 0;
    bool first = true;
    for (const auto& c : emb.coords) {
        if (first) {
            minx = maxx = c[0];
            miny = maxy = c[1];
            first = false;
        } else {
            minx = std::min(minx, c[0]);
            maxx = std::max(maxx, c[0]);
            miny = std::min(miny, c[1]);
            maxy = std::max(maxy, c[1]);
        }
    }
    double w = maxx - minx, h = maxy - miny;
    if (w <= 0) w = 1;
    if (h <= 0) h = 1;
    double mx = 0.05 * w, my = 0.05 * h;

    auto fmt = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", v);
        std::string s(buf);
        if (s == "-0.000000") s = "0.000000";
        return s;
    };
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(minx - mx) + " " +
           fmt(-(maxy + my)) + " " + fmt(w + 2 * mx) + " " + fmt(h + 2 * my) + "\">\n";
    if (!style.background.empty())
        out += "  <rect x=\"" + fmt(minx - mx) + "\" y=\"" + fmt(-(maxy + my)) + "\" width=\"" +
               fmt(w + 2 * mx) + "\" height=\"" + fmt(h + 2 * my) + "\" fill=\"" + style.background +
               "\"/>\n";
    double sw = style.stroke_width_factor * std::max(w, h);
    out += "  <g stroke=\"" + style.stroke + "\" stroke-width=\"" + fmt(sw) +
           "\" stroke-linecap=\"round\" fill=\"none\">\n";
    // SVG y grows downward; flip so the drawing matches the plane.
    for (const auto& [u, v] : edges) {
        out += "    <line x1=\"" + fmt(emb.coords[u][0]) + "\" y1=\"" + fmt(-emb.coords[u][1]) +
               "\" x2=\"" + fmt(emb.coords[v][0]) + "\" y2=\"" + fmt(-emb.coords[v][1]) + "\"/>\n";
    }
    out += "  </g>\n</svg>\n";
    return out;
}

std::string embedding_to_json(const Embedding& emb) {
    nlohmann::json j;
    j["mode"] = emb.mode == Mode::exact ? "exact" : "float";
    nlohmann::json anchors = nlohmann::json::array();
    for (const auto& a : emb.anchors) anchors.push_back({a[0].str(), a[1].str()});
    j["anchors"] = anchors;
    nlohmann::json coords = nlohmann::json::array();
    if (emb.mode == Mode::exact) {
        for (int v = 0; v < emb.vertex_count; ++v) {
            auto c = emb.exact_coord(v);
            coords.push_back({c[0].str(), c[1].str()});
        }
    } else {
        for (const auto& c : emb.coords) coords.push_back({c[0], c[1]});
        j["residual"] = emb.residual;
    }
    j["coords"] = coords;
    return j.dump(2) + "\n";
}

}  // namespace fractal
