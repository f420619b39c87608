#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fractal/graph.hpp"
#include "fractal/linalg.hpp"
#include "fractal/spec.hpp"

namespace fractal {

// Exact Dirichlet solve on G_m: boundary values fixed, weighted Laplacian
// zero at every other vertex. Throws SingularInterior if some interior
// component has no path to the boundary.
std::vector<Rat> dirichlet_solve_exact(const GraphApprox& g, const std::vector<Rat>& boundary_values);
std::vector<std::vector<Rat>> dirichlet_solve_exact_multi(const GraphApprox& g,
                                                          const std::vector<std::vector<Rat>>& bvs);

// Same values in scaled integer form: value(rhs, v) = num[rhs][v] / den with
// den > 0. Lets downstream geometry predicates stay in integers.
struct ScaledValues {
    std::vector<std::vector<BigInt>> num;
    BigInt den;
};
ScaledValues dirichlet_solve_exact_scaled(const GraphApprox& g,
                                          const std::vector<std::vector<Rat>>& bvs);

struct FloatDirichlet {
    std::vector<double> values;
    double residual = 0.0;
};
FloatDirichlet dirichlet_solve_float(const GraphApprox& g, const std::vector<double>& boundary_values,
                                     double tol = 1e-12);

// Renormalization constant: the exact Schur complement of the G_1 Laplacian
// onto the boundary must equal c * (unit complete-graph Laplacian); returns c.
// Throws NotProportional otherwise.
Rat renorm_factor(const FractalSpec& spec);
// Float cross-check of the same quantity (mean off-diagonal of the traced form).
double renorm_factor_float(const FractalSpec& spec, double tol = 1e-12);

enum class Mode { exact, floating };

// Harmonic extension matrices A_i, one per cell: row s of A_i holds the values
// of the harmonic basis at slot s of cell i, so boundary values of h on cell
// F_w are word_matrix(w) * u.
struct ExtensionSet {
    Mode mode = Mode::exact;
    int n0 = 0;
    std::vector<RatMatrix> matrices;                         // exact mode
    std::vector<std::vector<std::vector<double>>> fmatrices; // float mode
    std::vector<Rat> determinants;
    std::vector<double> fdeterminants;
    double entry_error_bound = 0.0;  // float mode: per-entry forward error
    double det_error_bound = 0.0;    // float mode: induced determinant error
    std::optional<Rat> r;            // renormalization constant when available

    int cell_count() const {
        return mode == Mode::exact ? static_cast<int>(matrices.size())
                                   : static_cast<int>(fmatrices.size());
    }
    std::vector<std::vector<double>> matrix_float(int i) const;
};

ExtensionSet extension_matrices(const FractalSpec& spec, Mode mode = Mode::exact);

struct NondegeneracyReport {
    Mode mode = Mode::exact;
    enum class Verdict { nondegenerate, degenerate, inconclusive };
    Verdict verdict = Verdict::inconclusive;
    std::vector<Rat> determinants;      // exact mode
    std::vector<double> fdeterminants;  // float mode
    double min_abs_det = 0.0;
    double det_error_bound = 0.0;       // float mode only
    std::vector<int> degenerate_cells;  // exact mode: cells with det == 0
};

NondegeneracyReport nondegeneracy_check(const FractalSpec& spec, Mode mode = Mode::exact);
std::string nondegeneracy_to_json(const NondegeneracyReport& r);

// A_{w_m} ... A_{w_1} (last letter applied last); empty word gives identity.
RatMatrix word_matrix(const ExtensionSet& ext, const Word& w);

std::string extension_to_json(const ExtensionSet& ext);

}  // namespace fractal
