#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fractal/errors.hpp"
#include "fractal/floatsolve.hpp"
#include "fractal/linalg.hpp"

using fractal::Rat;
using fractal::RatMatrix;

namespace {

struct Rng {
    uint64_t s = 0x9e3779b97f4a7c15ull;
    uint64_t next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s >> 11;
    }
    long long range(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
    Rat rat() { return Rat(range(-9, 9), range(1, 7)); }
};

RatMatrix laplacian_from_edges(int n, const std::vector<std::tuple<int, int, Rat>>& edges) {
    RatMatrix l(n, n);
    for (const auto& [u, v, c] : edges) {
        l.at(u, u) += c;
        l.at(v, v) += c;
        l.at(u, v) -= c;
        l.at(v, u) -= c;
    }
    return l;
}

}  // namespace

TEST_CASE("solve_exact on the identity returns the rhs") {
    RatMatrix b(3, 2);
    Rng rng;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) b.at(i, j) = rng.rat();
    CHECK(fractal::solve_exact(RatMatrix::identity(3), b) == b);
}

TEST_CASE("solve_exact small symmetric system") {
    RatMatrix a(2, 2), b(2, 1);
    a.at(0, 0) = Rat(2);
    a.at(0, 1) = Rat(1);
    a.at(1, 0) = Rat(1);
    a.at(1, 1) = Rat(2);
    b.at(0, 0) = Rat(1);
    b.at(1, 0) = Rat(1);
    RatMatrix x = fractal::solve_exact(a, b);
    CHECK(x.at(0, 0) == Rat(1, 3));
    CHECK(x.at(1, 0) == Rat(1, 3));
}

TEST_CASE("solve_exact round trip on random rational systems") {
    Rng rng;
    for (int trial = 0; trial < 100; ++trial) {
        int n = static_cast<int>(rng.range(1, 12));
        RatMatrix a(n, n), x(n, 2);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) a.at(i, j) = rng.rat();
            a.at(i, i) += Rat(20);  // keep it comfortably nonsingular
            x.at(i, 0) = rng.rat();
            x.at(i, 1) = rng.rat();
        }
        RatMatrix b = a * x;
        CHECK(fractal::solve_exact(a, b) == x);
    }
}

TEST_CASE("solve_exact reports exact singularity") {
    RatMatrix a(3, 3), b(3, 1);
    // Row 2 = row 0 + row 1.
    Rng rng;
    for (int j = 0; j < 3; ++j) {
        a.at(0, j) = rng.rat();
        a.at(1, j) = rng.rat();
        a.at(2, j) = a.at(0, j) + a.at(1, j);
    }
    CHECK_THROWS_AS(fractal::solve_exact(a, b), fractal::SingularMatrix);
}

TEST_CASE("det_exact known values and char_poly consistency") {
    RatMatrix a(3, 3);
    long long vals[3][3] = {{2, 1, 0}, {1, 3, 1}, {0, 1, 2}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a.at(i, j) = Rat(vals[i][j]);
    // det = 2*(6-1) - 1*(2-0) = 8
    CHECK(fractal::det_exact(a) == Rat(8));
    std::vector<Rat> c = fractal::char_poly(a);
    // det(xI - A) at x=0 gives (-1)^n det(A).
    CHECK(c[0] == Rat(-8));
    CHECK(c[2] == Rat(-7));  // -trace
    RatMatrix sing(2, 2);
    sing.at(0, 0) = Rat(1);
    sing.at(0, 1) = Rat(2);
    sing.at(1, 0) = Rat(2);
    sing.at(1, 1) = Rat(4);
    CHECK(fractal::det_exact(sing).is_zero());
}

TEST_CASE("schur complement of a path graph is the series conductance") {
    // a - b - c with unit conductances; eliminating b leaves one edge of 1/2.
    RatMatrix l = laplacian_from_edges(3, {{0, 1, Rat(1)}, {1, 2, Rat(1)}});
    RatMatrix s = fractal::schur_complement(l, {0, 2});
    CHECK(s.at(0, 0) == Rat(1, 2));
    CHECK(s.at(0, 1) == Rat(-1, 2));
    CHECK(s.at(1, 1) == Rat(1, 2));
}

TEST_CASE("schur complement with no interior returns the kept block") {
    RatMatrix l = laplacian_from_edges(2, {{0, 1, Rat(2)}});  // two parallel unit edges merged
    RatMatrix s = fractal::schur_complement(l, {0, 1});
    CHECK(s.at(0, 0) == Rat(2));
    CHECK(s.at(0, 1) == Rat(-2));
}

TEST_CASE("schur complement of the level-2 gasket G_1 onto the boundary is 3/5 K_3") {
    // Corners 0,1,2; midpoints 3 = (01), 4 = (02), 5 = (12).
    RatMatrix l = laplacian_from_edges(6, {
                                              {0, 3, Rat(1)},
                                              {0, 4, Rat(1)},
                                              {1, 3, Rat(1)},
                                              {1, 5, Rat(1)},
                                              {2, 4, Rat(1)},
                                              {2, 5, Rat(1)},
                                              {3, 4, Rat(1)},
                                              {3, 5, Rat(1)},
                                              {4, 5, Rat(1)},
                                          });
    RatMatrix s = fractal::schur_complement(l, {0, 1, 2});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(s.at(i, j) == (i == j ? Rat(6, 5) : Rat(-3, 5)));
}

TEST_CASE("schur complement keeps symmetry and zero row sums exactly") {
    Rng rng;
    for (int trial = 0; trial < 20; ++trial) {
        int n = static_cast<int>(rng.range(5, 10));
        std::vector<std::tuple<int, int, Rat>> edges;
        // Random connected graph: spanning path plus extras.
        for (int v = 1; v < n; ++v)
            edges.emplace_back(static_cast<int>(rng.range(0, v - 1)), v, Rat(rng.range(1, 9), rng.range(1, 5)));
        for (int e = 0; e < n; ++e) {
            int u = static_cast<int>(rng.range(0, n - 1)), v = static_cast<int>(rng.range(0, n - 1));
            if (u != v) edges.emplace_back(u, v, Rat(rng.range(1, 9), rng.range(1, 5)));
        }
        RatMatrix l = laplacian_from_edges(n, edges);
        std::vector<int> keep = {0, 1, 2};
        RatMatrix s = fractal::schur_complement(l, keep);
        for (int i = 0; i < 3; ++i) {
            CHECK(s.row_sum(i).is_zero());
            for (int j = 0; j < 3; ++j) CHECK(s.at(i, j) == s.at(j, i));
        }
        // Transitivity on nested keeps: eliminate in two stages.
        std::vector<int> keep1 = {0, 1, 2, 3, 4};
        RatMatrix s1 = fractal::schur_complement(l, keep1);
        RatMatrix s2 = fractal::schur_complement(s1, {0, 1, 2});
        CHECK(s2 == s);
    }
}

TEST_CASE("schur complement rejects interior with no path to kept set") {
    // Two components: 0-1 and 2-3; keep {0,1} leaves interior {2,3} singular.
    RatMatrix l = laplacian_from_edges(4, {{0, 1, Rat(1)}, {2, 3, Rat(1)}});
    CHECK_THROWS_AS(fractal::schur_complement(l, {0, 1}), fractal::SingularInterior);
}

TEST_CASE("solve_float identity and residual") {
    fractal::SparseSym a;
    a.n = 4;
    for (int i = 0; i < 4; ++i) a.add(i, i, 1.0);
    std::vector<double> b = {1, 2, 3, 4};
    auto res = fractal::solve_float(a, b, 1e-12);
    for (int i = 0; i < 4; ++i) CHECK(res.x[i] == doctest::Approx(b[i]).epsilon(1e-15));
    CHECK(res.residual <= 1e-15);
}

TEST_CASE("solve_float matches exact solve") {
    // SPD matrix: Laplacian interior block of a path 0-1-2-3-4 with ends fixed.
    fractal::SparseSym a;
    a.n = 3;
    a.add(0, 0, 2.0);
    a.add(1, 1, 2.0);
    a.add(2, 2, 2.0);
    a.add(0, 1, -1.0);
    a.add(1, 2, -1.0);
    std::vector<double> b = {1.0, 0.0, 0.0};
    auto res = fractal::solve_float(a, b, 1e-12);
    // Exact: x = A^{-1} b with A tridiag(2,-1): x = (3/4, 1/2, 1/4).
    CHECK(res.x[0] == doctest::Approx(0.75).epsilon(1e-13));
    CHECK(res.x[1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(res.x[2] == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("solve_float throws NoConvergence with achieved residual") {
    fractal::SparseSym a;
    a.n = 6;
    for (int i = 0; i < 6; ++i) a.add(i, i, 2.0 + 0.1 * i);
    for (int i = 0; i + 1 < 6; ++i) a.add(i, i + 1, -1.0);
    std::vector<double> b = {1, -1, 2, -2, 3, -3};
    try {
        fractal::solve_float(a, b, 1e-300);
        FAIL("expected NoConvergence");
    } catch (const fractal::NoConvergence& e) {
        CHECK(e.achieved_residual > 0.0);
        CHECK(e.achieved_residual < 1e-12);
    }
}

TEST_CASE("conjugate gradient path agrees with dense path") {
    fractal::SparseSym a;
    a.n = 50;
    for (int i = 0; i < 50; ++i) a.add(i, i, 3.0);
    for (int i = 0; i + 1 < 50; ++i) a.add(i, i + 1, -1.0);
    std::vector<double> b(50);
    for (int i = 0; i < 50; ++i) b[i] = std::sin(i + 1.0);
    auto dense = fractal::solve_float(a, b, 1e-12);
    auto cg = fractal::solve_float(a, b, 1e-12, /*dense_limit=*/4);
    for (int i = 0; i < 50; ++i) CHECK(cg.x[i] == doctest::Approx(dense.x[i]).epsilon(1e-10));
    CHECK(cg.residual <= 1e-12);
}
