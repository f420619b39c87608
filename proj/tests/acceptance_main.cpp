// Acceptance suite: one line per criterion, exit code = number of failures.
// Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fractal/connectivity.hpp"
#include "fractal/embedding.hpp"
#include "fractal/errors.hpp"
#include "fractal/harmonic.hpp"
#include "fractal/measures.hpp"
#include "fractal/spec.hpp"

using namespace fractal;

namespace {

struct Check {
    bool ok = true;
    std::string detail;
    void fail(const std::string& msg) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
    void note(const std::string& msg) {
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
};

int failures = 0;

void criterion(int num, const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!c.ok) ++failures;
    std::printf("criterion %2d [%s]: %s (%.2f s)%s%s\n", num, name.c_str(), c.ok ? "PASS" : "FAIL", secs,
                c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
}

double reference_table[6][3] = {
    // reference R values, rows m = 3..8, columns p = 1.1, 1.14, 1.185
    {0.7865, 0.8940, 1.0392}, {0.7511, 0.8598, 1.0068}, {0.7424, 0.8514, 0.9991},
    {0.7345, 0.8447, 0.9938}, {0.7297, 0.8409, 0.9910}, {0.7269, 0.8389, 0.9897},
};

Rat exact_level_sum(const FractalSpec& spec, const ExtensionSet& ext, const std::vector<Rat>& u, int m) {
    // Depth-first prefix products, exact.
    RatMatrix q = energy_form(spec);
    Rat total;
    std::function<void(int, const std::vector<Rat>&)> dfs = [&](int depth, const std::vector<Rat>& v) {
        if (depth == m) {
            std::vector<Rat> qv = q.mul_vec(v);
            for (size_t i = 0; i < v.size(); ++i) total += v[i] * qv[i];
            return;
        }
        for (const RatMatrix& a : ext.matrices) dfs(depth + 1, a.mul_vec(v));
    };
    dfs(0, u);
    return total * ext.r->pow(-m);
}

}  // namespace

int main() {
    criterion(1, "renormalization", [](Check& c) {
        auto t0 = std::chrono::steady_clock::now();
        if (renorm_factor(gasket_spec(2)) != Rat(3, 5)) c.fail("r(sg2) != 3/5");
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= 1.0) c.fail("sg2 renormalization took " + std::to_string(secs) + " s (budget 1 s)");
        for (int k = 2; k <= 12; ++k) {
            Rat r = renorm_factor(gasket_spec(k));
            if (!(r > Rat(0) && r < Rat(1))) c.fail("r(sg" + std::to_string(k) + ") out of (0,1)");
            double rf = renorm_factor_float(gasket_spec(k));
            if (std::abs(r.to_double() - rf) > 1e-12)
                c.fail("float cross-check off at k=" + std::to_string(k));
        }
        c.note("r(sg2)=3/5, r(sg3)=" + renorm_factor(gasket_spec(3)).str() + ", k<=12 exact+float agree to 1e-12");
    });

    criterion(2, "extension matrices", [](Check& c) {
        ExtensionSet e2 = extension_matrices(gasket_spec(2));
        const RatMatrix& a0 = e2.matrices[0];
        const Rat f15(1, 5), f25(2, 5);
        if (!(a0.at(0, 0) == f25 && a0.at(0, 1) == f25 && a0.at(0, 2) == f15 && a0.at(2, 0) == f15 &&
              a0.at(2, 1) == f25 && a0.at(2, 2) == f25 && a0.at(1, 1) == Rat(1)))
            c.fail("sg2 midpoint rows are not (2/5,2/5,1/5)-patterned");
        std::vector<Rat> cp = char_poly(a0);
        if (!(cp[2] == Rat(-9, 5) && cp[1] == Rat(23, 25) && cp[0] == Rat(-3, 25)))
            c.fail("sg2 corner spectrum is not {1, 3/5, 1/5}");
        for (int k = 2; k <= 12; ++k) {
            ExtensionSet e = extension_matrices(gasket_spec(k));
            for (const RatMatrix& a : e.matrices)
                for (int s = 0; s < 3; ++s)
                    if (a.row_sum(s) != Rat(1)) c.fail("row sum != 1 at k=" + std::to_string(k));
        }
        c.note("midpoint rows, corner spectrum {1,3/5,1/5}, row sums exact for k<=12");
    });

    criterion(3, "non-degeneracy", [](Check& c) {
        for (int k = 2; k <= 12; ++k) {
            NondegeneracyReport r = nondegeneracy_check(gasket_spec(k), Mode::exact);
            if (r.verdict != NondegeneracyReport::Verdict::nondegenerate)
                c.fail("exact verdict not nondegenerate at k=" + std::to_string(k));
        }
        double min_margin = 1e300;
        for (int k = 2; k <= 50; ++k) {
            NondegeneracyReport r = nondegeneracy_check(gasket_spec(k), Mode::floating);
            if (r.verdict != NondegeneracyReport::Verdict::nondegenerate)
                c.fail("float verdict not nondegenerate at k=" + std::to_string(k));
            if (r.det_error_bound > 0) min_margin = std::min(min_margin, r.min_abs_det / r.det_error_bound);
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "exact k<=12, float k<=50; min margin min|det|/bound = %.1e", min_margin);
        c.note(buf);
    });

    criterion(4, "embedding certificates", [](Check& c) {
        for (int k = 2; k <= 15; ++k) {
            FractalSpec s = gasket_spec(k);
            AugmentedGraph g = augment(s);
            Embedding emb = tutte_embed(g, generic_anchors(3));
            CertificationRecord rec = certify_embedding(g, emb);
            if (!rec.certified) c.fail("not certified at k=" + std::to_string(k));
            NondegeneracyReport nd = nondegeneracy_check(s, Mode::exact);
            bool agree = rec.certified == (nd.verdict == NondegeneracyReport::Verdict::nondegenerate);
            if (!agree) c.fail("certificate and determinant verdicts disagree at k=" + std::to_string(k));
        }
        c.note("exact certificates for k<=15 with anchors (0,1),(2,0),(3,5); verdicts agree with criterion 3");
    });

    criterion(5, "degenerate fixtures", [](Check& c) {
        Prop21Result v = prop21_check(fixture("vicsek"));
        if (!(v.kappa == 2 && v.v0 == 4 && v.verdict == Prop21Result::Verdict::degenerate))
            c.fail("vicsek connectivity verdict wrong");
        Prop21Result h = prop21_check(fixture("hexagasket3"));
        if (!(h.kappa == 2 && h.v0 == 3 && h.verdict == Prop21Result::Verdict::degenerate))
            c.fail("hexagasket3 connectivity verdict wrong");
        for (const char* name : {"vicsek", "hexagasket3"}) {
            NondegeneracyReport nd = nondegeneracy_check(fixture(name), Mode::exact);
            if (nd.verdict != NondegeneracyReport::Verdict::degenerate || nd.degenerate_cells.empty())
                c.fail(std::string(name) + ": no singular extension matrix found");
        }
        c.note("vicsek kappa=2<4, hexagasket3 kappa=2<3; exact determinants confirm singular cells");
    });

    criterion(6, "corner closed forms", [](Check& c) {
        FractalSpec s = gasket_spec(2);
        ExtensionSet ext = extension_matrices(s);
        const int cell_of[3] = {2, 0, 1};  // cells containing q_1, q_2, q_3
        for (const Rat& a : {Rat(0), Rat(1, 2), Rat(1), Rat(2)}) {
            std::vector<Rat> h = {Rat(0), a, Rat(1)};
            Rat e = Rat(2) * a * a - Rat(2) * a + Rat(2);
            for (int m = 0; m <= 10; ++m) {
                auto nu = sg2_closed_forms(a, m);
                if (m == 0)
                    for (int i = 0; i < 3; ++i)
                        if (nu[i] != e) c.fail("level-0 identity fails");
                for (int i = 0; i < 3; ++i) {
                    Word w(m, cell_of[i]);
                    if (energy_measure_cell(s, ext, h, w) != nu[i])
                        c.fail("closed form mismatch at a=" + a.str() + " m=" + std::to_string(m));
                }
            }
        }
        c.note("nu_1, nu_3 verbatim and nu_2 with the squared middle coefficient, exact for a in {0,1/2,1,2}, m<=10");
    });

    criterion(7, "ratio-table reproduction", [](Check& c) {
        FractalSpec s = gasket_spec(3);
        ExtensionSet ext = extension_matrices(s);
        std::vector<Rat> h1 = {Rat(0), Rat(1), Rat(1)}, h2 = {Rat(0), Rat(1), Rat(-1)};
        RatioTable t = ratio_table(s, ext, h1, h2, 8, {1.1, 1.14, 1.185}, {"1.1", "1.14", "1.185"});
        int beyond = 0, trunc_matches = 0, within_1ulp = 0;
        double maxdiff = 0;
        for (int m = 3; m <= 8; ++m) {
            for (int pi = 0; pi < 3; ++pi) {
                double ours = t.r[m - t.m_min][pi];
                double ref = reference_table[m - 3][pi];
                double diff = std::abs(ours - ref);
                maxdiff = std::max(maxdiff, diff);
                if (diff > 5e-5) ++beyond;
                if (diff <= 1.2e-4) ++within_1ulp;
                if (m <= 7 && std::floor(ours * 10000.0) / 10000.0 == ref) ++trunc_matches;
            }
        }
        if (beyond > 0) {
            char buf[352];
            std::snprintf(buf, sizeof buf,
                          "%d/18 entries exceed the 5e-5 gate (max diff %.2e); diagnostic: %d/18 within "
                          "1.2e-4 and %d/15 of the m<=7 entries equal the 4-decimal TRUNCATION of our "
                          "values exactly -- the reference table is truncated, not rounded",
                          beyond, maxdiff, within_1ulp, trunc_matches);
            c.fail(buf);
        } else {
            c.note("all 18 reference values within 5e-5");
        }
    });

    criterion(8, "measure-embedding identity", [](Check& c) {
        FractalSpec s = gasket_spec(2);
        ExtensionSet ext = extension_matrices(s);
        double worst = 0;
        for (int m = 0; m <= 6; ++m) worst = std::max(worst, kusuoka_embedding_identity(s, ext, m));
        if (worst > 1e-10) c.fail("max discrepancy " + std::to_string(worst));
        char buf[64];
        std::snprintf(buf, sizeof buf, "max discrepancy %.2e over m<=6", worst);
        c.note(buf);
    });

    criterion(9, "decay exponent bounds", [](Check& c) {
        DecayEigenvalue d2 = p_bound(gasket_spec(2), extension_matrices(gasket_spec(2)));
        if (std::abs(d2.p_bound - std::log(15.0) / std::log(9.0)) > 1e-12)
            c.fail("sg2 bound differs from log15/log9");
        if (d2.lambda != Rat(1, 15)) c.fail("sg2 lambda != 1/15");
        DecayEigenvalue d3 = p_bound(gasket_spec(3), extension_matrices(gasket_spec(3)));
        if (std::abs(d3.p_bound - std::log(105.0) / std::log(49.0)) > 1e-9)
            c.fail("sg3 bound differs from log105/log49");
        char buf[96];
        std::snprintf(buf, sizeof buf, "sg2: log15/log9 to 1e-12; sg3: lambda=%s, log105/log49 to 1e-9",
                      d3.lambda.str().c_str());
        c.note(buf);
    });

    criterion(10, "property suites", [](Check& c) {
        // Additivity, exact, m <= 6.
        {
            FractalSpec s2 = gasket_spec(2);
            ExtensionSet e2 = extension_matrices(s2);
            std::vector<Rat> u = {Rat(0), Rat(1), Rat(1, 3)};
            Rat e = energy_inner(s2, u, u);
            for (int m = 1; m <= 6; ++m)
                if (exact_level_sum(s2, e2, u, m) != e) c.fail("sg2 additivity fails at m=" + std::to_string(m));
            FractalSpec s3 = gasket_spec(3);
            ExtensionSet e3 = extension_matrices(s3);
            std::vector<Rat> u3 = {Rat(1), Rat(-1, 2), Rat(0)};
            Rat e3v = energy_inner(s3, u3, u3);
            for (int m = 1; m <= 6; ++m)
                if (exact_level_sum(s3, e3, u3, m) != e3v) c.fail("sg3 additivity fails at m=" + std::to_string(m));
        }
        // Kusuoka basis independence, 20 rotations, 1e-12, m <= 4.
        {
            FractalSpec s = gasket_spec(2);
            ExtensionSet ext = extension_matrices(s);
            const double isq2 = 1.0 / std::sqrt(2.0), isq6 = 1.0 / std::sqrt(6.0);
            std::vector<double> h1 = {0.0, isq2, isq2}, h2 = {0.0, isq6, -isq6};
            for (int rot = 0; rot < 20; ++rot) {
                double th = 0.17 + 0.29 * rot;
                double co = std::cos(th), si = std::sin(th);
                std::vector<double> g1(3), g2(3);
                for (int i = 0; i < 3; ++i) {
                    g1[i] = co * h1[i] + si * h2[i];
                    g2[i] = -si * h1[i] + co * h2[i];
                }
                for (int m = 0; m <= 4; ++m) {
                    Word w;
                    for (int j = 0; j < m; ++j) w.push_back((rot + j) % 3);
                    double a = kusuoka_cell(s, ext, w).to_double();
                    double b = kusuoka_cell_float(s, ext, w, g1, g2);
                    if (std::abs(a - b) > 1e-12) c.fail("kusuoka rotation invariance fails");
                }
            }
        }
        // Maximum principle, 200 random cases.
        {
            FractalSpec s = gasket_spec(3);
            GraphApprox g = refine(s, 2);
            uint64_t seed = 0x5eed5eed5eedull;
            auto rnd = [&seed]() {
                seed = seed * 6364136223846793005ull + 1442695040888963407ull;
                return static_cast<double>(seed >> 11) / 9007199254740992.0 * 4.0 - 2.0;
            };
            for (int trial = 0; trial < 200; ++trial) {
                std::vector<double> bv = {rnd(), rnd(), rnd()};
                FloatDirichlet f = dirichlet_solve_float(g, bv);
                double lo = std::min({bv[0], bv[1], bv[2]}), hi = std::max({bv[0], bv[1], bv[2]});
                for (double v : f.values)
                    if (v < lo - 1e-12 || v > hi + 1e-12) c.fail("maximum principle violated");
            }
        }
        // Oracle equivalence: depth-(m+2) exact graph energy.
        {
            FractalSpec s2 = gasket_spec(2);
            ExtensionSet e2 = extension_matrices(s2);
            std::vector<Rat> h = {Rat(0), Rat(1, 2), Rat(1)};
            for (const Word& w : {Word{}, Word{0}, Word{2, 1}}) {
                GraphApprox g = refine(s2, static_cast<int>(w.size()) + 2);
                std::vector<Rat> sol = dirichlet_solve_exact(g, h);
                long long block = 9;
                Word full = w;
                full.resize(w.size() + 2, 0);
                long long start = g.word_index(full);
                Rat raw;
                for (long long idx = start; idx < start + block; ++idx) {
                    const auto& cv = g.cell_vertices[idx];
                    for (size_t a = 0; a < cv.size(); ++a)
                        for (size_t b = a + 1; b < cv.size(); ++b) {
                            Rat d = sol[cv[a]] - sol[cv[b]];
                            raw += d * d;
                        }
                }
                Rat oracle = raw * e2.r->pow(-static_cast<int>(w.size()) - 2);
                if (energy_measure_cell(s2, e2, h, w) != oracle)
                    c.fail("graph-energy oracle mismatch on sg2 word " + word_str(w));
            }
            FractalSpec s3 = gasket_spec(3);
            ExtensionSet e3 = extension_matrices(s3);
            std::vector<Rat> h3 = {Rat(0), Rat(1), Rat(-1)};
            for (const Word& w : {Word{}, Word{3}}) {
                GraphApprox g = refine(s3, static_cast<int>(w.size()) + 2);
                std::vector<Rat> sol = dirichlet_solve_exact(g, h3);
                long long block = 36;
                Word full = w;
                full.resize(w.size() + 2, 0);
                long long start = g.word_index(full);
                Rat raw;
                for (long long idx = start; idx < start + block; ++idx) {
                    const auto& cv = g.cell_vertices[idx];
                    for (size_t a = 0; a < cv.size(); ++a)
                        for (size_t b = a + 1; b < cv.size(); ++b) {
                            Rat d = sol[cv[a]] - sol[cv[b]];
                            raw += d * d;
                        }
                }
                Rat oracle = raw * e3.r->pow(-static_cast<int>(w.size()) - 2);
                if (energy_measure_cell(s3, e3, h3, w) != oracle)
                    c.fail("graph-energy oracle mismatch on sg3 word " + word_str(w));
            }
        }
        // Determinism: byte-identical reruns and thread counts.
        {
            FractalSpec s = gasket_spec(3);
            ExtensionSet ext = extension_matrices(s);
            std::vector<Rat> h1 = {Rat(0), Rat(1), Rat(1)}, h2 = {Rat(0), Rat(1), Rat(-1)};
            std::string a = ratio_table_csv(ratio_table(s, ext, h1, h2, 5, {1.1, 1.14}, {"1.1", "1.14"}, 1));
            std::string b = ratio_table_csv(ratio_table(s, ext, h1, h2, 5, {1.1, 1.14}, {"1.1", "1.14"}, 1));
            std::string d4 = ratio_table_csv(ratio_table(s, ext, h1, h2, 5, {1.1, 1.14}, {"1.1", "1.14"}, 4));
            if (a != b || a != d4) c.fail("ratio table not byte-identical across reruns/threads");
            GraphApprox g = refine(gasket_spec(2), 3);
            Embedding emb = tutte_embed(g, generic_anchors(3), Mode::floating);
            std::vector<std::pair<int, int>> edges;
            for (const auto& e : g.edges) edges.emplace_back(e.u, e.v);
            if (export_svg(emb, edges) != export_svg(emb, edges)) c.fail("svg export not deterministic");
        }
        c.note("additivity exact m<=6; 20-rotation basis independence at 1e-12; 200-case maximum principle; "
               "exact graph-energy oracle; byte-identical reruns");
    });

    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
