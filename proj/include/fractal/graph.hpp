#pragma once

#include <string>
#include <vector>

#include "fractal/floatsolve.hpp"
#include "fractal/linalg.hpp"
#include "fractal/spec.hpp"

namespace fractal {

struct Edge {
    int u = 0, v = 0;
    Rat c;  // conductance, positive
};

// Level-m graph approximation G_m. Cells are listed in lexicographic word
// order; cell_vertices[i][j] is the vertex at boundary slot j of cell i.
// Vertex numbering is deterministic: G_1 keeps the spec's own vertex ids, and
// deeper levels number copies in word order with shared junctions taking the
// id of their first occurrence.
struct GraphApprox {
    int level = 0;
    int cell_alphabet = 0;  // number of spec cells; words are over [0, this)
    int vertex_count = 0;
    std::vector<Edge> edges;  // sorted by (u, v); duplicates merged by summing
    std::vector<int> boundary;
    std::vector<Word> words;                      // lexicographic
    std::vector<std::vector<int>> cell_vertices;  // parallel to words

    long long cell_count() const { return static_cast<long long>(words.size()); }
    // Index of a word in `words` (mixed-radix value); word must have length == level.
    long long word_index(const Word& w) const;
};

// Builds G_m by substituting each cell with a copy of G_{m-1} and identifying
// shared vertices, purely combinatorially from the cell tuples.
GraphApprox refine(const FractalSpec& spec, int m);

// Weighted graph Laplacian (dense, exact).
RatMatrix rat_laplacian(const GraphApprox& g);

// Laplacian restricted to interior rows/cols plus the interior-boundary
// coupling block, in float sparse form. interior maps interior index -> vertex.
struct InteriorSystem {
    SparseSym lii;
    std::vector<int> interior;           // interior position -> vertex id
    std::vector<int> pos;                // vertex id -> interior position or -1
    std::vector<std::vector<double>> coupling;  // per boundary slot: column of -L_ib
};
InteriorSystem interior_system(const GraphApprox& g);

std::string graph_to_json(const GraphApprox& g);

}  // namespace fractal
