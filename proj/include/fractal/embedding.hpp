#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fractal/connectivity.hpp"
#include "fractal/graph.hpp"
#include "fractal/harmonic.hpp"
#include "fractal/spec.hpp"

namespace fractal {

// Barycentric (Tutte) embedding: boundary vertices pinned at the anchors,
// every other vertex at the conductance-weighted average of its neighbors.
// Exact mode keeps a scaled integer representation (num / den) so geometric
// predicates can run without rounding.
struct Embedding {
    Mode mode = Mode::exact;
    int vertex_count = 0;
    std::vector<std::array<Rat, 2>> anchors;
    std::vector<std::array<double, 2>> coords;   // always populated
    std::vector<std::array<BigInt, 2>> exact_num;  // exact mode only
    BigInt exact_den;                              // > 0 in exact mode
    double residual = 0.0;  // float mode: max relative residual of the two solves

    std::array<Rat, 2> exact_coord(int v) const;
};

// Anchors must form a nondegenerate convex polygon in boundary-slot order.
Embedding tutte_embed(const GraphApprox& g, const std::vector<std::array<Rat, 2>>& anchors,
                      Mode mode = Mode::exact, double tol = 1e-12);
// Same drawing over the augmented graph (the boundary clique does not change
// the interior equations, only the edge set used for certification).
Embedding tutte_embed(const AugmentedGraph& g, const std::vector<std::array<Rat, 2>>& anchors,
                      Mode mode = Mode::exact, double tol = 1e-12);
// Float-only variant for irrational anchor coordinates.
Embedding tutte_embed_float(const GraphApprox& g, const std::vector<std::array<double, 2>>& anchors,
                            double tol = 1e-12);

struct CertificationRecord {
    bool certified = false;
    std::vector<std::pair<int, int>> crossings;  // offending edge index pairs
    std::vector<Word> degenerate_cells;          // cells with collinear/coincident corners
};

// Exact certificate over the given edge list: (a) no two edges cross or
// overlap except at shared endpoints, via exact orientation predicates;
// (b) no cell has all of its corners collinear. Throws NotExactMode for
// float embeddings.
CertificationRecord certify_embedding(const GraphApprox& g,
                                      const std::vector<std::pair<int, int>>& edges,
                                      const Embedding& emb);
CertificationRecord certify_embedding(const AugmentedGraph& g, const Embedding& emb);

// Float diagnostic for sizes beyond exact certification: counts segment
// pairs closer than tol and cells with near-zero area. Finding nothing is
// NOT a certificate; the result only reports what a tolerance scan sees.
struct FloatScan {
    int crossings_at_tolerance = 0;
    int flat_cells_at_tolerance = 0;
};
FloatScan scan_embedding_float(const GraphApprox& g, const std::vector<std::pair<int, int>>& edges,
                               const Embedding& emb, double tol = 1e-9);

// Default generic anchor triple (0,1), (2,0), (3,5): full rank, no symmetry.
std::vector<std::array<Rat, 2>> generic_anchors(int n0);
// Parses "x1,y1;x2,y2;..." with exact rational coordinates.
std::vector<std::array<Rat, 2>> parse_anchors(const std::string& text, int n0);

struct SvgStyle {
    double stroke_width_factor = 0.004;  // fraction of the larger bbox side
    std::string stroke = "#1a1a1a";
    std::string background;  // empty = none
};

// Deterministic SVG: line per edge in edge order, 6-decimal coordinates,
// viewBox fitted with a 5% margin.
std::string export_svg(const Embedding& emb, const std::vector<std::pair<int, int>>& edges,
                       const SvgStyle& style = {});

std::string embedding_to_json(const Embedding& emb);

}  // namespace fractal
