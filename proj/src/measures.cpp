#include "fractal/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>

#include <json.hpp>

#include "fractal/embedding.hpp"
#include "fractal/errors.hpp"

namespace fractal {

RatMatrix energy_form(const FractalSpec& spec) {
    const int n0 = spec.boundary_size;
    RatMatrix q(n0, n0);
    for (int a = 0; a < n0; ++a) {
        for (int b = a + 1; b < n0; ++b) {
            Rat c = spec.conductance(spec.boundary[a], spec.boundary[b]);
            q.at(a, a) += c;
            q.at(b, b) += c;
            q.at(a, b) -= c;
            q.at(b, a) -= c;
        }
    }
    return q;
}

Rat energy_inner(const FractalSpec& spec, const std::vector<Rat>& u, const std::vector<Rat>& v) {
    RatMatrix q = energy_form(spec);
    if (static_cast<int>(u.size()) != q.rows() || static_cast<int>(v.size()) != q.rows())
        throw InvalidArgument("energy_inner: vectors must have length " + std::to_string(q.rows()));
    std::vector<Rat> qv = q.mul_vec(v);
    Rat s;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * qv[i];
    return s;
}

double energy_inner_float(const FractalSpec& spec, const std::vector<double>& u,
                          const std::vector<double>& v) {
    const int n0 = spec.boundary_size;
    double s = 0.0;
    for (int a = 0; a < n0; ++a)
        for (int b = a + 1; b < n0; ++b) {
            double c = spec.conductance(spec.boundary[a], spec.boundary[b]).to_double();
            s += c * (u[a] - u[b]) * (v[a] - v[b]);
        }
    return s;
}

std::pair<std::vector<double>, std::vector<double>> orthonormal_pair(
    const FractalSpec& spec,
    std::optional<std::pair<std::vector<double>, std::vector<double>>> seed) {
    const int n0 = spec.boundary_size;
    if (n0 < 3)
        throw InvalidArgument("orthonormal_pair: the harmonic space modulo constants needs n0 >= 3");
    std::vector<double> s1, s2;
    if (seed) {
        s1 = seed->first;
        s2 = seed->second;
    } else if (n0 == 3) {
        s1 = {0, 1, 1};
        s2 = {0, 1, -1};
    } else {
        s1.assign(n0, 0.0);
        s2.assign(n0, 0.0);
        s1[1] = 1;
        s1[0] = -1;
        s2[2] = 1;
        s2[0] = -1;
    }
    double g11 = energy_inner_float(spec, s1, s1);
    double g12 = energy_inner_float(spec, s1, s2);
    double g22 = energy_inner_float(spec, s2, s2);
    if (std::abs(g11 - 1) < 1e-14 && std::abs(g12) < 1e-14 && std::abs(g22 - 1) < 1e-14)
        return {s1, s2};
    if (g11 <= 0) throw InvalidArgument("orthonormal_pair: first seed has zero energy");
    std::vector<double> h1(n0), h2(n0);
    double n1 = std::sqrt(g11);
    for (int i = 0; i < n0; ++i) h1[i] = s1[i] / n1;
    double proj = energy_inner_float(spec, s2, h1);
    for (int i = 0; i < n0; ++i) h2[i] = s2[i] - proj * h1[i];
    double g = energy_inner_float(spec, h2, h2);
    if (g <= 1e-28) throw InvalidArgument("orthonormal_pair: seeds are energy-dependent");
    double n2 = std::sqrt(g);
    for (int i = 0; i < n0; ++i) h2[i] /= n2;
    return {h1, h2};
}

namespace {

Rat quad_form(const RatMatrix& q, const std::vector<Rat>& u) {
    std::vector<Rat> qu = q.mul_vec(u);
    Rat s;
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * qu[i];
    return s;
}

const Rat& require_r(const ExtensionSet& ext) {
    if (!ext.r)
        throw Error(
            "renormalization constant unavailable (traced form not proportional); supply "
            "renorm_override in the spec");
    return *ext.r;
}

std::vector<std::vector<std::vector<double>>> float_matrices(const ExtensionSet& ext) {
    std::vector<std::vector<std::vector<double>>> out;
    for (int i = 0; i < ext.cell_count(); ++i) out.push_back(ext.matrix_float(i));
    return out;
}

}  // namespace

Rat energy_measure_cell(const FractalSpec& spec, const ExtensionSet& ext,
                        const std::vector<Rat>& h, const Word& w) {
    const Rat& r = require_r(ext);
    RatMatrix m = word_matrix(ext, w);
    std::vector<Rat> hw = m.mul_vec(h);
    return quad_form(energy_form(spec), hw) * r.pow(-static_cast<int>(w.size()));
}

double energy_measure_cell_float(const FractalSpec& spec, const ExtensionSet& ext,
                                 const std::vector<double>& h, const Word& w) {
    const Rat& r = require_r(ext);
    auto mats = float_matrices(ext);
    std::vector<double> v = h;
    for (int letter : w) {
        const auto& a = mats[letter];
        std::vector<double> nv(v.size(), 0.0);
        for (size_t s = 0; s < v.size(); ++s)
            for (size_t t = 0; t < v.size(); ++t) nv[s] += a[s][t] * v[t];
        v = std::move(nv);
    }
    return energy_inner_float(spec, v, v) * std::pow(r.to_double(), -static_cast<double>(w.size()));
}

std::array<Rat, 3> sg2_closed_forms(const Rat& a, int m, bool printed_middle) {
    const Rat r35 = Rat(3, 5).pow(m);
    const Rat r115 = Rat(1, 15).pow(m);
    const Rat half(1, 2);
    const Rat threehalf(3, 2);
    Rat nu1 = (a + Rat(1)).pow(2) * half * r35 + threehalf * (a - Rat(1)).pow(2) * r115;
    Rat mid = printed_middle ? Rat(2) * (a - half) : Rat(2) * (a - half).pow(2);
    Rat nu2 = mid * r35 + threehalf * r115;
    Rat nu3 = (a - Rat(2)).pow(2) * half * r35 + threehalf * a.pow(2) * r115;
    return {nu1, nu2, nu3};
}

Rat kusuoka_cell(const FractalSpec& spec, const ExtensionSet& ext, const Word& w) {
    if (spec.boundary_size != 3)
        throw InvalidArgument("exact Kusuoka values are implemented for 3-boundary structures");
    RatMatrix q = energy_form(spec);
    const Rat& r = require_r(ext);
    RatMatrix m = word_matrix(ext, w);
    std::vector<Rat> sym = {Rat(0), Rat(1), Rat(1)};
    std::vector<Rat> skew = {Rat(0), Rat(1), Rat(-1)};
    Rat qs = quad_form(q, std::vector<Rat>(sym));
    Rat qk = quad_form(q, std::vector<Rat>(skew));
    if (qs != Rat(2) || qk != Rat(6) || !energy_inner(spec, sym, skew).is_zero())
        throw InvalidArgument("exact Kusuoka values require the unit boundary form");
    std::vector<Rat> v1 = m.mul_vec(sym);
    std::vector<Rat> v2 = m.mul_vec(skew);
    Rat total = quad_form(q, v1) * Rat(1, 2) + quad_form(q, v2) * Rat(1, 6);
    return total * r.pow(-static_cast<int>(w.size()));
}

double kusuoka_cell_float(const FractalSpec& spec, const ExtensionSet& ext, const Word& w,
                          const std::vector<double>& h1, const std::vector<double>& h2) {
    return energy_measure_cell_float(spec, ext, h1, w) + energy_measure_cell_float(spec, ext, h2, w);
}

double kusuoka_embedding_identity(const FractalSpec& spec, const ExtensionSet& ext, int m,
                                  double tol) {
    if (spec.boundary_size != 3)
        throw InvalidArgument("the embedding identity is implemented for 3-boundary structures");
    const Rat& r = require_r(ext);
    GraphApprox g = refine(spec, m);
    // Orthonormal anchor triple at (q_1, q_2, q_3).
    const double isq6 = 1.0 / std::sqrt(6.0), isq2 = 1.0 / std::sqrt(2.0);
    std::vector<double> bx = {0.0, -isq6, isq6};
    std::vector<double> by = {0.0, isq2, isq2};
    FloatDirichlet fx = dirichlet_solve_float(g, bx, tol);
    FloatDirichlet fy = dirichlet_solve_float(g, by, tol);

    const double scale = std::pow(r.to_double(), -m);
    auto mats = float_matrices(ext);
    const int cc = spec.cell_count();

    // Kusuoka values per word via prefix products, iterated in lexicographic
    // word order with an odometer and coordinate-vector stacks.
    long long idx = 0;
    std::vector<int> word(m, 0);
    std::vector<std::vector<double>> sx(m + 1, bx), sy(m + 1, by);
    auto apply = [&](int depth) {
        // Recompute stacks sx/sy from `depth` down to m.
        for (int d = depth; d < m; ++d) {
            const auto& a = mats[word[d]];
            for (int s = 0; s < 3; ++s) {
                sx[d + 1][s] = a[s][0] * sx[d][0] + a[s][1] * sx[d][1] + a[s][2] * sx[d][2];
                sy[d + 1][s] = a[s][0] * sy[d][0] + a[s][1] * sy[d][1] + a[s][2] * sy[d][2];
            }
        }
    };
    apply(0);
    double maxdisc = 0.0;
    while (true) {
        // Word-matrix side: the Kusuoka value of this cell.
        double qx = energy_inner_float(spec, sx[m], sx[m]);
        double qy = energy_inner_float(spec, sy[m], sy[m]);
        double kus = scale * (qx + qy);
        // Independent side: squared side lengths of the embedded cell.
        const auto& cv = g.cell_vertices[static_cast<size_t>(idx)];
        double ssq = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                double dx = fx.values[cv[a]] - fx.values[cv[b]];
                double dy = fy.values[cv[a]] - fy.values[cv[b]];
                ssq += dx * dx + dy * dy;
            }
        maxdisc = std::max(maxdisc, std::abs(scale * ssq - kus));
        // Next word.
        int d = m - 1;
        while (d >= 0 && word[d] == cc - 1) {
            word[d] = 0;
            --d;
        }
        if (d < 0) break;
        ++word[d];
        apply(d);
        ++idx;
    }
    return maxdisc;
}

// ---------------------------------------------------------------------------

namespace {

// Deterministic pairwise accumulator (binary counter over partial blocks).
class PairwiseSum {
public:
    void add(double x) {
        for (size_t i = 0;; ++i) {
            if (i == slots_.size()) {
                slots_.push_back(x);
                used_.push_back(true);
                break;
            }
            if (!used_[i]) {
                slots_[i] = x;
                used_[i] = true;
                break;
            }
            x += slots_[i];
            used_[i] = false;
        }
    }
    double total() const {
        double s = 0.0;
        for (size_t i = 0; i < slots_.size(); ++i)
            if (used_[i]) s += slots_[i];
        return s;
    }

private:
    std::vector<double> slots_;
    std::vector<bool> used_;
};

struct SSumContext {
    const std::vector<std::vector<std::vector<double>>>* mats;
    const FractalSpec* spec;
    double p;
    int m;
};

double leaf_term(const SSumContext& ctx, const std::vector<double>& v1,
                 const std::vector<double>& v2) {
    double q1 = energy_inner_float(*ctx.spec, v1, v1);
    double q2 = energy_inner_float(*ctx.spec, v2, v2);
    if (q2 <= 0.0)
        throw ZeroMeasureCell("nu_h2 vanishes on a cell (degenerate structure or constant h2)");
    if (q1 <= 0.0) {
        if (ctx.p > 0.0) return 0.0;
        if (ctx.p == 0.0) return q2;
        throw ZeroMeasureCell("nu_h1 vanishes on a cell and p < 0");
    }
    return std::exp(ctx.p * std::log(q1) + (1.0 - ctx.p) * std::log(q2));
}

void dfs_sum(const SSumContext& ctx, int depth, const std::vector<double>& v1,
             const std::vector<double>& v2, PairwiseSum& acc) {
    if (depth == ctx.m) {
        acc.add(leaf_term(ctx, v1, v2));
        return;
    }
    const int n0 = static_cast<int>(v1.size());
    std::vector<double> w1(n0), w2(n0);
    for (const auto& a : *ctx.mats) {
        for (int s = 0; s < n0; ++s) {
            double x1 = 0, x2 = 0;
            for (int t = 0; t < n0; ++t) {
                x1 += a[s][t] * v1[t];
                x2 += a[s][t] * v2[t];
            }
            w1[s] = x1;
            w2[s] = x2;
        }
        dfs_sum(ctx, depth + 1, w1, w2, acc);
    }
}

}  // namespace

double s_sum(const FractalSpec& spec, const ExtensionSet& ext, const std::vector<Rat>& h1,
             const std::vector<Rat>& h2, int m, double p, int threads) {
    if (m < 0) throw InvalidArgument("s_sum: level must be non-negative");
    const Rat& r = require_r(ext);
    const int n0 = spec.boundary_size;
    if (static_cast<int>(h1.size()) != n0 || static_cast<int>(h2.size()) != n0)
        throw InvalidArgument("s_sum: boundary vectors must have length " + std::to_string(n0));
    auto mats = float_matrices(ext);
    SSumContext ctx{&mats, &spec, p, 0};
    std::vector<double> v1(n0), v2(n0);
    for (int i = 0; i < n0; ++i) {
        v1[i] = h1[i].to_double();
        v2[i] = h2[i].to_double();
    }
    const int cc = spec.cell_count();
    // Fixed split depth: the summation structure may not depend on `threads`.
    const int split = m >= 4 ? 2 : 0;
    double total;
    if (split == 0) {
        ctx.m = m;
        PairwiseSum acc;
        dfs_sum(ctx, 0, v1, v2, acc);
        total = acc.total();
    } else {
        const int jobs = cc * cc;
        std::vector<double> partial(jobs, 0.0);
        auto run_job = [&](int j) {
            int l1 = j / cc, l2 = j % cc;
            std::vector<double> w1(n0), w2(n0), u1(n0), u2(n0);
            for (int s = 0; s < n0; ++s) {
                double x1 = 0, x2 = 0;
                for (int t = 0; t < n0; ++t) {
                    x1 += mats[l1][s][t] * v1[t];
                    x2 += mats[l1][s][t] * v2[t];
                }
                w1[s] = x1;
                w2[s] = x2;
            }
            for (int s = 0; s < n0; ++s) {
                double x1 = 0, x2 = 0;
                for (int t = 0; t < n0; ++t) {
                    x1 += mats[l2][s][t] * w1[t];
                    x2 += mats[l2][s][t] * w2[t];
                }
                u1[s] = x1;
                u2[s] = x2;
            }
            SSumContext local{&mats, &spec, p, m - 2};
            PairwiseSum acc;
            dfs_sum(local, 0, u1, u2, acc);
            return acc.total();
        };
        if (threads <= 1) {
            for (int j = 0; j < jobs; ++j) partial[j] = run_job(j);
        } else {
            std::vector<std::future<void>> pool;
            std::atomic<int> next{0};
            int nt = std::min(threads, jobs);
            for (int t = 0; t < nt; ++t) {
                pool.push_back(std::async(std::launch::async, [&]() {
                    while (true) {
                        int j = next.fetch_add(1);
                        if (j >= jobs) break;
                        partial[j] = run_job(j);
                    }
                }));
            }
            for (auto& f : pool) f.get();
        }
        // Combine in fixed prefix order.
        total = 0.0;
        for (int j = 0; j < jobs; ++j) total += partial[j];
    }
    return total * std::pow(r.to_double(), -static_cast<double>(m));
}

RatioTable ratio_table(const FractalSpec& spec, const ExtensionSet& ext, const std::vector<Rat>& h1,
                       const std::vector<Rat>& h2, int m_max, const std::vector<double>& p,
                       const std::vector<std::string>& p_labels, int threads) {
    if (m_max < 3) throw InvalidArgument("ratio_table: m_max must be at least 3");
    RatioTable t;
    t.m_min = 1;
    t.m_max = m_max;
    t.p = p;
    if (!p_labels.empty()) {
        t.p_labels = p_labels;
    } else {
        for (double v : p) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", v);
            t.p_labels.push_back(buf);
        }
    }
    const int rows = m_max - t.m_min + 1;
    t.s.assign(rows, std::vector<double>(p.size(), 0.0));
    t.r.assign(rows, std::vector<double>(p.size(), std::nan("")));
    for (size_t pi = 0; pi < p.size(); ++pi) {
        for (int m = t.m_min; m <= m_max; ++m)
            t.s[m - t.m_min][pi] = s_sum(spec, ext, h1, h2, m, p[pi], threads);
        for (int m = t.m_min + 2; m <= m_max; ++m) {
            double d1 = t.s[m - t.m_min][pi] - t.s[m - 1 - t.m_min][pi];
            double d0 = t.s[m - 1 - t.m_min][pi] - t.s[m - 2 - t.m_min][pi];
            if (d0 == 0.0) throw Error("ratio test undefined: successive S values coincide");
            t.r[m - t.m_min][pi] = d1 / d0;
        }
    }
    return t;
}

std::string ratio_table_csv(const RatioTable& t) {
    std::string out = "m,p,S,R\n";
    char buf[128];
    for (int m = t.m_min; m <= t.m_max; ++m) {
        for (size_t pi = 0; pi < t.p.size(); ++pi) {
            double s = t.s[m - t.m_min][pi];
            double r = t.r[m - t.m_min][pi];
            if (std::isnan(r)) {
                std::snprintf(buf, sizeof buf, "%d,%s,%.15g,\n", m, t.p_labels[pi].c_str(), s);
            } else {
                std::snprintf(buf, sizeof buf, "%d,%s,%.15g,%.4f\n", m, t.p_labels[pi].c_str(), s, r);
            }
            out += buf;
        }
    }
    return out;
}

DecayEigenvalue p_bound(const FractalSpec& spec, const ExtensionSet& ext) {
    if (spec.boundary_size != 3) throw InvalidArgument("p-bound is implemented for 3-boundary structures");
    if (ext.mode != Mode::exact) throw NotExactMode("p-bound requires exact extension matrices");
    const Rat& r = require_r(ext);
    // First cell that fixes one of the boundary vertices.
    int corner = -1;
    for (int i = 0; i < spec.cell_count() && corner < 0; ++i)
        for (int a = 0; a < spec.boundary_size; ++a)
            if (spec.cells[i][a] == spec.boundary[a]) {
                corner = i;
                break;
            }
    if (corner < 0) throw Error("no corner cell (no cell fixes a boundary vertex)");
    const RatMatrix& a = ext.matrices[corner];
    std::vector<Rat> c = char_poly(a);  // x^3 + c2 x^2 + c1 x + c0
    // Row sums are 1, so x = 1 is a root; deflate.
    Rat rem = Rat(1) + c[2] + c[1] + c[0];
    if (!rem.is_zero()) throw InternalError("corner matrix does not fix constants");
    Rat b = c[2] + Rat(1);
    Rat cc = c[1] + c[2] + Rat(1);
    Rat disc = b * b - Rat(4) * cc;
    Rat sq;
    if (disc.sign() < 0 || !disc.sqrt_exact(sq))
        throw Error("corner spectrum is not rational; decay eigenvalue unavailable");
    Rat lo = (-b - sq) / Rat(2);
    DecayEigenvalue d;
    d.corner_eig_min = lo;
    d.r = r;
    d.lambda = lo * lo / r;
    if (d.lambda.sign() <= 0) throw Error("corner decay eigenvalue vanishes (degenerate corner)");
    double lam = d.lambda.to_double();
    d.p_bound = std::log(1.0 / lam) / std::log(r.to_double() / lam);
    return d;
}

std::string p_bound_to_json(const DecayEigenvalue& d) {
    nlohmann::json j;
    j["corner_eig_min"] = d.corner_eig_min.str();
    j["lambda"] = d.lambda.str();
    j["r"] = d.r.str();
    j["p_bound"] = d.p_bound;
    return j.dump(2) + "\n";
}

MeasureTable measure_table(const FractalSpec& spec, const ExtensionSet& ext, int level,
                           const std::optional<std::vector<Rat>>& h1,
                           const std::optional<std::vector<Rat>>& h2, bool kusuoka) {
    MeasureTable t;
    t.level = level;
    if (h1) t.columns.push_back("nu_h1");
    if (h2) t.columns.push_back("nu_h2");
    if (kusuoka) t.columns.push_back("kusuoka");
    if (t.columns.empty()) throw InvalidArgument("measure_table: nothing to compute");
    const int cc = spec.cell_count();
    Word w(level, 0);
    while (true) {
        t.words.push_back(w);
        std::vector<Rat> row;
        if (h1) row.push_back(energy_measure_cell(spec, ext, *h1, w));
        if (h2) row.push_back(energy_measure_cell(spec, ext, *h2, w));
        if (kusuoka) row.push_back(kusuoka_cell(spec, ext, w));
        t.values.push_back(std::move(row));
        int d = level - 1;
        while (d >= 0 && w[d] == cc - 1) {
            w[d] = 0;
            --d;
        }
        if (d < 0) break;
        ++w[d];
    }
    return t;
}

std::string measure_table_to_json(const MeasureTable& t) {
    nlohmann::json j;
    j["level"] = t.level;
    j["columns"] = t.columns;
    nlohmann::json cells = nlohmann::json::object();
    for (size_t i = 0; i < t.words.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (const Rat& v : t.values[i]) row.push_back(v.str());
        cells[word_str(t.words[i])] = row;
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

Sg3TransferReference sg3_transfer_reference() {
    auto fill = [](long long den, std::array<std::array<long long, 3>, 3> m) {
        RatMatrix r(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.at(i, j) = Rat(m[i][j], den);
        return r;
    };
    Sg3TransferReference ref;
    ref.e0 = fill(7875, {{{3701, -49, -49}, {962, 287, -238}, {962, -238, 287}}});
    ref.e3 = fill(31500, {{{1174, 49, 49}, {-962, 3613, 1213}, {-962, 1213, 3613}}});
    return ref;
}

RatMatrix cell_transfer_matrix(const FractalSpec& spec, const ExtensionSet& ext, int cell) {
    if (spec.boundary_size != 3) throw InvalidArgument("cell transfer is implemented for 3-boundary structures");
    if (ext.mode != Mode::exact) throw NotExactMode("cell transfer requires exact extension matrices");
    const Rat& r = require_r(ext);
    if (cell < 0 || cell >= ext.cell_count()) throw InvalidArgument("cell index out of range");
    // Express A_i u_j in the basis (u_1, u_2) mod constants, with
    // u_1 = (0,1,1), u_2 = (0,1,-1): coordinates recover from components.
    const RatMatrix& a = ext.matrices[cell];
    std::vector<Rat> u1 = {Rat(0), Rat(1), Rat(1)};
    std::vector<Rat> u2 = {Rat(0), Rat(1), Rat(-1)};
    auto coords = [&](const std::vector<Rat>& v) {
        // v = alpha u1 + beta u2 + gamma (1,1,1):
        // alpha = (v2 + v3 - 2 v1)/2 ... solved from the affine system.
        Rat alpha = (v[1] + v[2] - Rat(2) * v[0]) / Rat(2);
        Rat beta = (v[1] - v[2]) / Rat(2);
        return std::pair<Rat, Rat>(alpha, beta);
    };
    auto [c11, c12] = coords(a.mul_vec(u1));
    auto [c21, c22] = coords(a.mul_vec(u2));
    RatMatrix t(3, 3);
    t.at(0, 0) = c11 * c11;
    t.at(0, 1) = Rat(2) * c11 * c12;
    t.at(0, 2) = c12 * c12;
    t.at(1, 0) = c11 * c21;
    t.at(1, 1) = c11 * c22 + c12 * c21;
    t.at(1, 2) = c12 * c22;
    t.at(2, 0) = c21 * c21;
    t.at(2, 1) = Rat(2) * c21 * c22;
    t.at(2, 2) = c22 * c22;
    return t.scaled(r.inv());
}

}  // namespace fractal
