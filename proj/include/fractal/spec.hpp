#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractal/rat.hpp"

namespace fractal {

// A word indexes a cell at level |w|: letters are cell indices, the first
// letter is the outermost map.
using Word = std::vector<int>;

std::string word_str(const Word& w);        // "0.3.1", "" for the empty word
Word parse_word(const std::string& s, int cell_count);

// First-level cell structure of a finitely ramified self-similar set.
//
// Conventions (fixed for reproducibility):
//  - boundary[j] is the vertex q_{j+1}; for SG_k: q_1 = apex, q_2 =
//    bottom-left, q_3 = bottom-right.
//  - slot j of cell i holds the image of boundary vertex j under cell i's map.
//  - SG_k cells are numbered row by row from the bottom-left, so the cell
//    containing q_2 has index 0, the one containing q_3 has index k-1, and
//    the apex cell is last.
struct FractalSpec {
    std::string name;
    int boundary_size = 0;  // n0
    int vertex_count = 0;
    std::vector<int> boundary;            // n0 distinct vertex ids
    std::vector<std::vector<int>> cells;  // each of length n0, distinct entries
    std::map<std::pair<int, int>, Rat> conductances;  // keys normalized u < v; default 1
    std::map<int, std::array<Rat, 2>> draw_coords;    // optional exact layout
    std::optional<Rat> renorm_override;

    int cell_count() const { return static_cast<int>(cells.size()); }
    // Conductance of the undirected pair {u, v} (default 1).
    Rat conductance(int u, int v) const;
    // Slot of v in the boundary list, or -1.
    int boundary_slot(int v) const;

    // Checks all invariants; throws SpecError with a field-level message.
    void validate() const;
};

// The G_1 cell structure of SG_k: upward triangles of the side-k subdivision,
// vertices at integer lattice points, all conductances 1. Rejects k < 2.
FractalSpec gasket_spec(int k);

// Built-in degenerate fixtures: "vicsek", "hexagasket3", plus "sg:<k>".
FractalSpec fixture(const std::string& name);

// JSON round-trip per the documented schema. load validates all invariants.
std::string spec_to_json(const FractalSpec& spec);
FractalSpec spec_from_json(const std::string& text);
void save_spec(const FractalSpec& spec, const std::string& path);
FractalSpec load_spec(const std::string& path);

// FNV-1a 64 over the canonical JSON serialization; used in the CLI header.
std::string spec_hash(const FractalSpec& spec);

}  // namespace fractal
