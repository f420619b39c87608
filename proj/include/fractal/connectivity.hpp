#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fractal/graph.hpp"
#include "fractal/spec.hpp"

namespace fractal {

// G_1 with the boundary turned into a clique. Added edges carry flag marks;
// the graph stays simple (pairs already adjacent are not duplicated).
struct AugmentedGraph {
    GraphApprox base;
    std::vector<std::pair<int, int>> added;  // boundary pairs not in G_1
    std::vector<std::pair<int, int>> all_edges() const;
};

AugmentedGraph augment(const FractalSpec& spec);

// Exact vertex connectivity of a simple graph via Menger's theorem (max-flow
// with unit vertex capacities). Complete graphs return n-1; disconnected
// input returns 0.
int vertex_connectivity(int n, const std::vector<std::pair<int, int>>& edges);

// Also extracts a minimum separating vertex set when connectivity < n-1.
struct ConnectivityResult {
    int kappa = 0;
    std::vector<int> separator;  // empty for complete graphs
};
ConnectivityResult vertex_connectivity_witness(int n, const std::vector<std::pair<int, int>>& edges);

// Necessary-condition test: vertex connectivity of the augmented first
// approximation below |V_0| forces a degenerate harmonic structure. Passing
// is not a certificate of non-degeneracy.
struct Prop21Result {
    bool trivial = false;  // no interior vertex: the test does not apply
    int kappa = 0;
    int v0 = 0;
    enum class Verdict { degenerate, passed, inapplicable };
    Verdict verdict = Verdict::inapplicable;
    std::vector<int> separator;
};

Prop21Result prop21_check(const FractalSpec& spec);
std::string prop21_to_json(const Prop21Result& r);

}  // namespace fractal
