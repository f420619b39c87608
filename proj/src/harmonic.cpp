#include "fractal/harmonic.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fractal/errors.hpp"

namespace fractal {

namespace {

struct InteriorIndex {
    std::vector<int> interior;  // position -> vertex
    std::vector<int> pos;       // vertex -> position or -1
    std::vector<int> bslot;     // vertex -> boundary slot or -1
};

InteriorIndex index_interior(const GraphApprox& g) {
    InteriorIndex ix;
    ix.pos.assign(g.vertex_count, -1);
    ix.bslot.assign(g.vertex_count, -1);
    for (size_t a = 0; a < g.boundary.size(); ++a) ix.bslot[g.boundary[a]] = static_cast<int>(a);
    for (int v = 0; v < g.vertex_count; ++v) {
        if (ix.bslot[v] < 0) {
            ix.pos[v] = static_cast<int>(ix.interior.size());
            ix.interior.push_back(v);
        }
    }
    return ix;
}

}  // namespace

ScaledValues dirichlet_solve_exact_scaled(const GraphApprox& g,
                                          const std::vector<std::vector<Rat>>& bvs) {
    const int n0 = static_cast<int>(g.boundary.size());
    const int k = static_cast<int>(bvs.size());
    for (const auto& bv : bvs)
        if (static_cast<int>(bv.size()) != n0)
            throw InvalidArgument("dirichlet_solve: boundary values must have length " + std::to_string(n0));
    InteriorIndex ix = index_interior(g);
    const int ni = static_cast<int>(ix.interior.size());

    // Common integer scaling of the boundary data.
    BigInt db(1);
    for (const auto& bv : bvs)
        for (const Rat& r : bv) db = BigInt::lcm(db, r.den());
    std::vector<std::vector<BigInt>> u_int(k, std::vector<BigInt>(n0));
    for (int t = 0; t < k; ++t)
        for (int a = 0; a < n0; ++a) u_int[t][a] = bvs[t][a].num() * db.exact_div(bvs[t][a].den());

    ScaledValues out;
    out.num.assign(k, std::vector<BigInt>(g.vertex_count));
    if (ni == 0) {
        out.den = db;
        for (int t = 0; t < k; ++t)
            for (int a = 0; a < n0; ++a) out.num[t][g.boundary[a]] = u_int[t][a];
        return out;
    }

    RatMatrix lii(ni, ni), rhs(ni, k);
    for (const Edge& e : g.edges) {
        int pu = ix.pos[e.u], pv = ix.pos[e.v];
        if (pu >= 0) lii.at(pu, pu) += e.c;
        if (pv >= 0) lii.at(pv, pv) += e.c;
        if (pu >= 0 && pv >= 0) {
            lii.at(pu, pv) -= e.c;
            lii.at(pv, pu) -= e.c;
        } else if (pu >= 0) {
            for (int t = 0; t < k; ++t) rhs.at(pu, t) += e.c * Rat(u_int[t][ix.bslot[e.v]], BigInt(1));
        } else if (pv >= 0) {
            for (int t = 0; t < k; ++t) rhs.at(pv, t) += e.c * Rat(u_int[t][ix.bslot[e.u]], BigInt(1));
        }
    }
    ScaledSolution sol;
    try {
        sol = solve_exact_scaled(lii, rhs);
    } catch (const SingularMatrix&) {
        throw SingularInterior("interior system singular: some interior component has no path to the boundary");
    }
    out.den = sol.den * db;
    for (int t = 0; t < k; ++t) {
        for (int i = 0; i < ni; ++i) out.num[t][ix.interior[i]] = std::move(sol.num[i][t]);
        for (int a = 0; a < n0; ++a) out.num[t][g.boundary[a]] = u_int[t][a] * sol.den;
    }
    return out;
}

std::vector<std::vector<Rat>> dirichlet_solve_exact_multi(const GraphApprox& g,
                                                          const std::vector<std::vector<Rat>>& bvs) {
    ScaledValues sv = dirichlet_solve_exact_scaled(g, bvs);
    std::vector<std::vector<Rat>> out(bvs.size(), std::vector<Rat>(g.vertex_count));
    for (size_t t = 0; t < bvs.size(); ++t)
        for (int v = 0; v < g.vertex_count; ++v) out[t][v] = Rat(sv.num[t][v], sv.den);
    return out;
}

std::vector<Rat> dirichlet_solve_exact(const GraphApprox& g, const std::vector<Rat>& boundary_values) {
    return dirichlet_solve_exact_multi(g, {boundary_values})[0];
}

FloatDirichlet dirichlet_solve_float(const GraphApprox& g, const std::vector<double>& boundary_values,
                                     double tol) {
    const int n0 = static_cast<int>(g.boundary.size());
    if (static_cast<int>(boundary_values.size()) != n0)
        throw InvalidArgument("dirichlet_solve: boundary values must have length " + std::to_string(n0));
    InteriorSystem sys = interior_system(g);
    FloatDirichlet out;
    out.values.assign(g.vertex_count, 0.0);
    for (int a = 0; a < n0; ++a) out.values[g.boundary[a]] = boundary_values[a];
    if (sys.interior.empty()) return out;
    std::vector<double> rhs(sys.interior.size(), 0.0);
    for (int a = 0; a < n0; ++a)
        for (size_t i = 0; i < rhs.size(); ++i) rhs[i] += boundary_values[a] * sys.coupling[a][i];
    FloatSolveResult res = solve_float(sys.lii, rhs, tol);
    out.residual = res.residual;
    for (size_t i = 0; i < sys.interior.size(); ++i) out.values[sys.interior[i]] = res.x[i];
    return out;
}

// ---------------------------------------------------------------------------

Rat renorm_factor(const FractalSpec& spec) {
    GraphApprox g1 = refine(spec, 1);
    RatMatrix l = rat_laplacian(g1);
    RatMatrix s = schur_complement(l, g1.boundary);
    const int n0 = spec.boundary_size;
    // Proportionality to the unit complete-graph Laplacian.
    Rat c = -s.at(0, 1);
    if (c.sign() <= 0) throw NotProportional("traced form is not a positive multiple of the complete-graph form");
    for (int i = 0; i < n0; ++i) {
        for (int j = 0; j < n0; ++j) {
            const Rat want = i == j ? Rat(n0 - 1) * c : -c;
            if (s.at(i, j) != want)
                throw NotProportional(
                    "traced form is not proportional to the complete-graph form (entry (" +
                    std::to_string(i) + "," + std::to_string(j) + ") = " + s.at(i, j).str() +
                    ", expected " + want.str() + ")");
        }
    }
    return c;
}

double renorm_factor_float(const FractalSpec& spec, double tol) {
    GraphApprox g1 = refine(spec, 1);
    InteriorSystem sys = interior_system(g1);
    const int n0 = spec.boundary_size;
    // Boundary block of the Laplacian.
    std::vector<std::vector<double>> lbb(n0, std::vector<double>(n0, 0.0));
    std::vector<int> bslot(g1.vertex_count, -1);
    for (int a = 0; a < n0; ++a) bslot[g1.boundary[a]] = a;
    for (const Edge& e : g1.edges) {
        int bu = bslot[e.u], bv = bslot[e.v];
        double c = e.c.to_double();
        if (bu >= 0) lbb[bu][bu] += c;
        if (bv >= 0) lbb[bv][bv] += c;
        if (bu >= 0 && bv >= 0) {
            lbb[bu][bv] -= c;
            lbb[bv][bu] -= c;
        }
    }
    std::vector<std::vector<double>> s(lbb);
    if (!sys.interior.empty()) {
        CholeskyDense chol(sys.lii);
        for (int a = 0; a < n0; ++a) {
            std::vector<double> x = chol.solve_refined(sys.lii, sys.coupling[a]);
            // S_ba = L_bb - L_bi Lii^{-1} L_ib; coupling columns are -L_ib.
            for (int b = 0; b < n0; ++b) {
                double dot = 0.0;
                for (size_t i = 0; i < x.size(); ++i) dot += sys.coupling[b][i] * x[i];
                s[b][a] -= dot;
            }
        }
    }
    double c = 0.0;
    int pairs = 0;
    for (int i = 0; i < n0; ++i)
        for (int j = i + 1; j < n0; ++j) {
            c += -s[i][j];
            ++pairs;
        }
    c /= pairs;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j) {
            double want = i == j ? (n0 - 1) * c : -c;
            if (std::abs(s[i][j] - want) > tol * std::max(1.0, std::abs(c)) * 100)
                throw NotProportional("traced form is not proportional to the complete-graph form (float)");
        }
    return c;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<double>> ExtensionSet::matrix_float(int i) const {
    if (mode == Mode::floating) return fmatrices[i];
    std::vector<std::vector<double>> m(n0, std::vector<double>(n0));
    for (int s = 0; s < n0; ++s)
        for (int t = 0; t < n0; ++t) m[s][t] = matrices[i].at(s, t).to_double();
    return m;
}

namespace {

double det_small(std::vector<std::vector<double>> m) {
    const int n = static_cast<int>(m.size());
    double det = 1.0;
    for (int t = 0; t < n; ++t) {
        int piv = t;
        for (int i = t + 1; i < n; ++i)
            if (std::abs(m[i][t]) > std::abs(m[piv][t])) piv = i;
        if (m[piv][t] == 0.0) return 0.0;
        if (piv != t) {
            std::swap(m[piv], m[t]);
            det = -det;
        }
        det *= m[t][t];
        for (int i = t + 1; i < n; ++i) {
            double f = m[i][t] / m[t][t];
            for (int j = t; j < n; ++j) m[i][j] -= f * m[t][j];
        }
    }
    return det;
}

void attach_renorm(const FractalSpec& spec, ExtensionSet& ext) {
    if (spec.renorm_override) {
        ext.r = *spec.renorm_override;
        return;
    }
    // The exact traced form costs a full rational elimination; only the exact
    // pipeline (measures, certificates) needs r, so float mode skips it.
    if (ext.mode != Mode::exact) return;
    try {
        ext.r = renorm_factor(spec);
    } catch (const NotProportional&) {
        ext.r.reset();
    }
}

}  // namespace

ExtensionSet extension_matrices(const FractalSpec& spec, Mode mode) {
    spec.validate();
    GraphApprox g1 = refine(spec, 1);
    const int n0 = spec.boundary_size;
    ExtensionSet ext;
    ext.mode = mode;
    ext.n0 = n0;
    if (mode == Mode::exact) {
        std::vector<std::vector<Rat>> basis(n0, std::vector<Rat>(n0));
        for (int t = 0; t < n0; ++t) basis[t][t] = Rat(1);
        std::vector<std::vector<Rat>> h = dirichlet_solve_exact_multi(g1, basis);
        for (int i = 0; i < spec.cell_count(); ++i) {
            RatMatrix a(n0, n0);
            for (int s = 0; s < n0; ++s)
                for (int t = 0; t < n0; ++t) a.at(s, t) = h[t][g1.cell_vertices[i][s]];
            ext.determinants.push_back(det_exact(a));
            ext.matrices.push_back(std::move(a));
        }
    } else {
        InteriorSystem sys = interior_system(g1);
        std::vector<std::vector<double>> h(n0, std::vector<double>(g1.vertex_count, 0.0));
        double max_resid = 0.0;
        double inv_norm = 0.0;
        if (!sys.interior.empty()) {
            CholeskyDense chol(sys.lii);
            inv_norm = chol.inv_norm_estimate();
            for (int t = 0; t < n0; ++t) {
                std::vector<double> x = chol.solve_refined(sys.lii, sys.coupling[t]);
                // Residual in the infinity norm, for the forward error bound.
                std::vector<double> ax = sys.lii.mul(x);
                double rinf = 0.0;
                for (size_t i = 0; i < ax.size(); ++i)
                    rinf = std::max(rinf, std::abs(ax[i] - sys.coupling[t][i]));
                max_resid = std::max(max_resid, rinf);
                for (size_t i = 0; i < sys.interior.size(); ++i) h[t][sys.interior[i]] = x[i];
            }
        }
        for (int t = 0; t < n0; ++t) h[t][g1.boundary[t]] = 1.0;
        // ||dx||_inf <= ||Lii^{-1}||_inf * ||r||_inf; factor 8 covers the
        // norm-estimate slack and the rounding of the assembly itself.
        ext.entry_error_bound = 8.0 * inv_norm * max_resid + 1e-15;
        for (int i = 0; i < spec.cell_count(); ++i) {
            std::vector<std::vector<double>> a(n0, std::vector<double>(n0));
            for (int s = 0; s < n0; ++s)
                for (int t = 0; t < n0; ++t) a[s][t] = h[t][g1.cell_vertices[i][s]];
            ext.fdeterminants.push_back(det_small(a));
            ext.fmatrices.push_back(std::move(a));
        }
        // |det(A+E) - det(A)| <= sum_j C(n,j) eps^j (sqrt(n) * amax)^{n-j}.
        double eps = ext.entry_error_bound;
        double amax = 1.0 + eps;
        double rown = std::sqrt(static_cast<double>(n0)) * amax;
        double bound = 0.0;
        double binom = 1.0;
        for (int j = 1; j <= n0; ++j) {
            binom = binom * (n0 - j + 1) / j;
            bound += binom * std::pow(eps * std::sqrt(static_cast<double>(n0)), j) * std::pow(rown, n0 - j);
        }
        ext.det_error_bound = bound;
    }
    attach_renorm(spec, ext);
    return ext;
}

NondegeneracyReport nondegeneracy_check(const FractalSpec& spec, Mode mode) {
    ExtensionSet ext = extension_matrices(spec, mode);
    NondegeneracyReport rep;
    rep.mode = mode;
    if (mode == Mode::exact) {
        rep.determinants = ext.determinants;
        bool any_zero = false;
        double min_abs = -1.0;
        for (size_t i = 0; i < ext.determinants.size(); ++i) {
            if (ext.determinants[i].is_zero()) {
                any_zero = true;
                rep.degenerate_cells.push_back(static_cast<int>(i));
            }
            double d = std::abs(ext.determinants[i].to_double());
            if (min_abs < 0 || d < min_abs) min_abs = d;
        }
        rep.min_abs_det = min_abs < 0 ? 0.0 : min_abs;
        rep.verdict = any_zero ? NondegeneracyReport::Verdict::degenerate
                               : NondegeneracyReport::Verdict::nondegenerate;
    } else {
        rep.fdeterminants = ext.fdeterminants;
        rep.det_error_bound = ext.det_error_bound;
        double min_abs = -1.0;
        for (double d : ext.fdeterminants) {
            double a = std::abs(d);
            if (min_abs < 0 || a < min_abs) min_abs = a;
        }
        rep.min_abs_det = min_abs < 0 ? 0.0 : min_abs;
        rep.verdict = rep.min_abs_det > rep.det_error_bound
                          ? NondegeneracyReport::Verdict::nondegenerate
                          : NondegeneracyReport::Verdict::inconclusive;
    }
    return rep;
}

RatMatrix word_matrix(const ExtensionSet& ext, const Word& w) {
    if (ext.mode != Mode::exact) throw NotExactMode("word_matrix requires an exact extension set");
    RatMatrix m = RatMatrix::identity(ext.n0);
    for (int letter : w) {
        if (letter < 0 || letter >= ext.cell_count()) throw InvalidArgument("word letter out of range");
        m = ext.matrices[letter] * m;
    }
    return m;
}

std::string extension_to_json(const ExtensionSet& ext) {
    nlohmann::json j;
    j["mode"] = ext.mode == Mode::exact ? "exact" : "float";
    j["cell_order"] = "spec cell index order";
    if (ext.r) j["r"] = ext.r->str();
    nlohmann::json cells = nlohmann::json::array();
    for (int i = 0; i < ext.cell_count(); ++i) {
        nlohmann::json cell;
        if (ext.mode == Mode::exact) {
            nlohmann::json rows = nlohmann::json::array();
            for (int s = 0; s < ext.n0; ++s) {
                nlohmann::json row = nlohmann::json::array();
                for (int t = 0; t < ext.n0; ++t) row.push_back(ext.matrices[i].at(s, t).str());
                rows.push_back(row);
            }
            cell["matrix"] = rows;
            cell["det"] = ext.determinants[i].str();
        } else {
            cell["matrix"] = ext.fmatrices[i];
            cell["det"] = ext.fdeterminants[i];
        }
        cells.push_back(cell);
    }
    j["cells"] = cells;
    if (ext.mode == Mode::floating) {
        j["entry_error_bound"] = ext.entry_error_bound;
        j["det_error_bound"] = ext.det_error_bound;
    }
    return j.dump(2) + "\n";
}

std::string nondegeneracy_to_json(const NondegeneracyReport& r) {
    nlohmann::json j;
    j["mode"] = r.mode == Mode::exact ? "exact" : "float";
    switch (r.verdict) {
        case NondegeneracyReport::Verdict::nondegenerate: j["verdict"] = "nondegenerate"; break;
        case NondegeneracyReport::Verdict::degenerate: j["verdict"] = "degenerate"; break;
        case NondegeneracyReport::Verdict::inconclusive: j["verdict"] = "inconclusive"; break;
    }
    if (r.mode == Mode::exact) {
        nlohmann::json dets = nlohmann::json::array();
        for (const Rat& d : r.determinants) dets.push_back(d.str());
        j["determinants"] = dets;
        j["degenerate_cells"] = r.degenerate_cells;
    } else {
        j["determinants"] = r.fdeterminants;
        j["det_error_bound"] = r.det_error_bound;
    }
    j["min_abs_det"] = r.min_abs_det;
    return j.dump(2) + "\n";
}

}  // namespace fractal
