#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <set>

#include "fractal/errors.hpp"
#include "fractal/spec.hpp"

using fractal::FractalSpec;
using fractal::Rat;

TEST_CASE("gasket_spec counts for small k") {
    FractalSpec s2 = fractal::gasket_spec(2);
    CHECK(s2.cell_count() == 3);
    CHECK(s2.vertex_count == 6);
    FractalSpec s3 = fractal::gasket_spec(3);
    CHECK(s3.cell_count() == 6);
    CHECK(s3.vertex_count == 10);
    CHECK_THROWS_AS(fractal::gasket_spec(1), fractal::SpecError);
}

TEST_CASE("gasket_spec counts cross-checked by lattice enumeration") {
    for (int k : {2, 3, 7, 20, 50}) {
        FractalSpec s = fractal::gasket_spec(k);
        // Oracle: enumerate the lattice directly and collect distinct ids
        // through the cell tuples.
        std::set<int> verts;
        for (const auto& c : s.cells)
            for (int v : c) verts.insert(v);
        long long lattice_points = 0;
        for (int r = 0; r <= k; ++r)
            for (int c = 0; c + r <= k; ++c) ++lattice_points;
        long long up_triangles = 0;
        for (int r = 0; r < k; ++r)
            for (int c = 0; c + r < k; ++c) ++up_triangles;
        CHECK(static_cast<long long>(verts.size()) == lattice_points);
        CHECK(s.vertex_count == lattice_points);
        CHECK(s.cell_count() == up_triangles);
        CHECK(s.cell_count() == k * (k + 1) / 2);
        CHECK(s.vertex_count == (k + 1) * (k + 2) / 2);
    }
    FractalSpec s50 = fractal::gasket_spec(50);
    CHECK(s50.cell_count() == 1275);
    CHECK(s50.vertex_count == 1326);
    for (int k = 2; k <= 50; ++k) {
        FractalSpec s = fractal::gasket_spec(k);
        CHECK(s.vertex_count == (k + 1) * (k + 2) / 2);
        CHECK(s.cell_count() == k * (k + 1) / 2);
    }
}

TEST_CASE("gasket orientation conventions") {
    // q_1 apex, q_2 bottom-left, q_3 bottom-right; cell 0 contains q_2,
    // cell k-1 contains q_3, the last cell contains q_1, each at its own slot.
    for (int k : {2, 3, 5}) {
        FractalSpec s = fractal::gasket_spec(k);
        CHECK(s.cells[0][1] == s.boundary[1]);
        CHECK(s.cells[k - 1][2] == s.boundary[2]);
        CHECK(s.cells.back()[0] == s.boundary[0]);
    }
}

TEST_CASE("fixtures") {
    FractalSpec v = fractal::fixture("vicsek");
    CHECK(v.vertex_count == 16);
    CHECK(v.cell_count() == 5);
    CHECK(v.boundary_size == 4);
    // Each corner cell shares exactly one vertex with the center cell.
    for (int i = 0; i < 4; ++i) {
        int shared = 0;
        for (int a : v.cells[i])
            for (int b : v.cells[4])
                if (a == b) ++shared;
        CHECK(shared == 1);
    }
    FractalSpec h = fractal::fixture("hexagasket3");
    CHECK(h.vertex_count == 12);
    CHECK(h.cell_count() == 6);
    CHECK(h.boundary_size == 3);
    for (int i = 0; i < 6; ++i) {
        int shared = 0;
        for (int a : h.cells[i])
            for (int b : h.cells[(i + 1) % 6])
                if (a == b) ++shared;
        CHECK(shared == 1);
    }
    CHECK(fractal::spec_to_json(fractal::fixture("sg:2")) == fractal::spec_to_json(fractal::gasket_spec(2)));
    CHECK_THROWS_AS(fractal::fixture("snowflake"), fractal::SpecError);
}

TEST_CASE("spec json round trip") {
    FractalSpec s = fractal::gasket_spec(3);
    s.conductances[{0, 1}] = Rat(3, 7);
    s.renorm_override = Rat(7, 15);
    std::string j = fractal::spec_to_json(s);
    FractalSpec t = fractal::spec_from_json(j);
    CHECK(fractal::spec_to_json(t) == j);
    CHECK(t.conductance(1, 0) == Rat(3, 7));
    CHECK(t.conductance(1, 2) == Rat(1));
    CHECK(*t.renorm_override == Rat(7, 15));
    CHECK(fractal::spec_hash(t) == fractal::spec_hash(s));

    std::string path = "spec_roundtrip_tmp.json";
    fractal::save_spec(s, path);
    FractalSpec u = fractal::load_spec(path);
    CHECK(fractal::spec_to_json(u) == j);
    std::remove(path.c_str());
}

TEST_CASE("validation errors carry field-level messages") {
    // Cell arity mismatch.
    CHECK_THROWS_WITH_AS(
        fractal::spec_from_json(R"({"name":"bad","boundary_size":3,"vertex_count":3,
            "boundary":[0,1,2],"cells":[[0,1]]})"),
        doctest::Contains("cell arity mismatch"), fractal::SpecError);
    // Disconnected cells.
    CHECK_THROWS_WITH_AS(
        fractal::spec_from_json(R"({"name":"bad","boundary_size":2,"vertex_count":4,
            "boundary":[0,2],"cells":[[0,1],[2,3]]})"),
        doctest::Contains("spec graph disconnected"), fractal::SpecError);
    // Duplicate boundary id.
    CHECK_THROWS_AS(
        fractal::spec_from_json(R"({"name":"bad","boundary_size":3,"vertex_count":3,
            "boundary":[0,1,1],"cells":[[0,1,2]]})"),
        fractal::SpecError);
    // Vertex in no cell.
    CHECK_THROWS_WITH_AS(
        fractal::spec_from_json(R"({"name":"bad","boundary_size":3,"vertex_count":4,
            "boundary":[0,1,2],"cells":[[0,1,2]]})"),
        doctest::Contains("appears in no cell"), fractal::SpecError);
    // Repeated entry within one cell.
    CHECK_THROWS_AS(
        fractal::spec_from_json(R"({"name":"bad","boundary_size":3,"vertex_count":3,
            "boundary":[0,1,2],"cells":[[0,1,1]]})"),
        fractal::SpecError);
    // Malformed JSON.
    CHECK_THROWS_AS(fractal::spec_from_json("{"), fractal::SpecError);
    // Missing field.
    CHECK_THROWS_WITH_AS(fractal::spec_from_json(R"({"name":"x"})"), doctest::Contains("boundary_size"),
                         fractal::SpecError);
}

TEST_CASE("word strings") {
    CHECK(fractal::word_str({}) == "");
    CHECK(fractal::word_str({0, 3, 1}) == "0.3.1");
    CHECK(fractal::parse_word("0.3.1", 6) == fractal::Word{0, 3, 1});
    CHECK(fractal::parse_word("", 6).empty());
    CHECK_THROWS_AS(fractal::parse_word("7", 6), fractal::InvalidArgument);
}
