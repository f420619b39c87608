#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fractal/harmonic.hpp"
#include "fractal/spec.hpp"

namespace fractal {

// Boundary energy form: Laplacian of the complete graph on the boundary with
// the spec's conductances (unit by default). Symmetric, zero row sums,
// kernel = constants.
RatMatrix energy_form(const FractalSpec& spec);

Rat energy_inner(const FractalSpec& spec, const std::vector<Rat>& u, const std::vector<Rat>& v);
double energy_inner_float(const FractalSpec& spec, const std::vector<double>& u,
                          const std::vector<double>& v);

// Energy-orthonormal pair of harmonic functions modulo constants (Gram matrix
// the identity to 1e-14). A seed pair that is already orthonormal is returned
// unchanged; otherwise Gram-Schmidt runs on the seeds (defaults for n0 = 3:
// (0,1,1) and (0,1,-1)).
std::pair<std::vector<double>, std::vector<double>> orthonormal_pair(
    const FractalSpec& spec,
    std::optional<std::pair<std::vector<double>, std::vector<double>>> seed = std::nullopt);

// Energy measure of a cell for harmonic boundary data h:
// nu_h(F_w K) = r^{-|w|} * (M_w h)^T Q (M_w h). Requires a known
// renormalization constant (computed or override).
Rat energy_measure_cell(const FractalSpec& spec, const ExtensionSet& ext,
                        const std::vector<Rat>& h, const Word& w);
double energy_measure_cell_float(const FractalSpec& spec, const ExtensionSet& ext,
                                 const std::vector<double>& h, const Word& w);

// Corner-cell closed forms for the level-2 gasket with boundary data
// (0, a, 1) at (q_1, q_2, q_3). Returns the values on the cells containing
// q_1, q_2, q_3 (spec cell indices 2, 0, 1) for the m-fold corner word.
// The middle coefficient is 2(a - 1/2)^2; `printed_middle` switches to the
// non-squared variant 2(a - 1/2), which fails the m = 0 identity and is kept
// only for comparison.
std::array<Rat, 3> sg2_closed_forms(const Rat& a, int m, bool printed_middle = false);

// Kusuoka measure of a cell: nu_{h1} + nu_{h2} for an energy-orthonormal
// pair. The exact form uses the pair (0,1,1)/sqrt(2), (0,1,-1)/sqrt(6), whose
// squared norms keep everything rational; it requires n0 = 3 and the unit
// boundary form.
Rat kusuoka_cell(const FractalSpec& spec, const ExtensionSet& ext, const Word& w);
double kusuoka_cell_float(const FractalSpec& spec, const ExtensionSet& ext, const Word& w,
                          const std::vector<double>& h1, const std::vector<double>& h2);

// Embeds G_m with the orthonormal anchor triple (0,0), (-1/sqrt6, 1/sqrt2),
// (1/sqrt6, 1/sqrt2) at (q_1, q_2, q_3), sums squared side lengths per cell
// scaled by r^{-m}, and compares with the Kusuoka cell values computed from
// word matrices. Returns the maximum absolute discrepancy over all cells.
double kusuoka_embedding_identity(const FractalSpec& spec, const ExtensionSet& ext, int m,
                                  double tol = 1e-13);

// S(m,p) = sum over |w| = m of nu_{h1}(F_w K)^p nu_{h2}(F_w K)^{1-p}.
// Depth-first with prefix word-matrix products; leaves are summed pairwise in
// a fixed blocked order so results are identical for any thread count.
double s_sum(const FractalSpec& spec, const ExtensionSet& ext, const std::vector<Rat>& h1,
             const std::vector<Rat>& h2, int m, double p, int threads = 1);

struct RatioTable {
    int m_min = 1;
    int m_max = 3;
    std::vector<double> p;
    std::vector<std::string> p_labels;
    // s[mi][pi] for m = m_min + mi; r[mi][pi] is NaN where undefined (m < m_min+2).
    std::vector<std::vector<double>> s;
    std::vector<std::vector<double>> r;
};

RatioTable ratio_table(const FractalSpec& spec, const ExtensionSet& ext, const std::vector<Rat>& h1,
                       const std::vector<Rat>& h2, int m_max, const std::vector<double>& p,
                       const std::vector<std::string>& p_labels = {}, int threads = 1);
// CSV with header "m,p,S,R"; S to 15 significant digits, R to 4 decimals.
std::string ratio_table_csv(const RatioTable& t);

// Decay data at a corner cell: lambda = (smallest eigenvalue of the corner
// extension matrix)^2 / r, and the induced exponent bound
// log(1/lambda) / log(r/lambda).
struct DecayEigenvalue {
    Rat corner_eig_min;  // smallest eigenvalue of the corner matrix itself
    Rat lambda;          // measure decay eigenvalue
    Rat r;
    double p_bound = 0.0;
};
DecayEigenvalue p_bound(const FractalSpec& spec, const ExtensionSet& ext);
std::string p_bound_to_json(const DecayEigenvalue& d);

// Per-word measure table at one level.
struct MeasureTable {
    int level = 0;
    std::vector<std::string> columns;
    std::vector<Word> words;
    std::vector<std::vector<Rat>> values;  // [word][column]
};
MeasureTable measure_table(const FractalSpec& spec, const ExtensionSet& ext, int level,
                           const std::optional<std::vector<Rat>>& h1,
                           const std::optional<std::vector<Rat>>& h2, bool kusuoka);
std::string measure_table_to_json(const MeasureTable& t);

// Published reference values for the transfer of the quadratic energy triple
// onto two cells of the level-3 gasket; fixture data for consistency tests.
struct Sg3TransferReference {
    RatMatrix e0, e3;
};
Sg3TransferReference sg3_transfer_reference();

// Our own transfer matrix of the energy triple (E(h1), E(h1,h2), E(h2)) onto
// cell i, in the harmonic basis (0,1,1), (0,1,-1) modulo constants:
// (1/r) * Sym^2(C_i). Requires n0 = 3 and an exact extension set with r.
RatMatrix cell_transfer_matrix(const FractalSpec& spec, const ExtensionSet& ext, int cell);

}  // namespace fractal
