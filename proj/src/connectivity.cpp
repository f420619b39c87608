#include "fractal/connectivity.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

#include "fractal/errors.hpp"

namespace fractal {

std::vector<std::pair<int, int>> AugmentedGraph::all_edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(base.edges.size() + added.size());
    for (const Edge& be : base.edges) e.emplace_back(be.u, be.v);
    e.insert(e.end(), added.begin(), added.end());
    return e;
}

AugmentedGraph augment(const FractalSpec& spec) {
    AugmentedGraph g;
    g.base = refine(spec, 1);
    const int n0 = spec.boundary_size;
    auto adjacent = [&](int u, int v) {
        for (const Edge& e : g.base.edges)
            if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return true;
        return false;
    };
    for (int a = 0; a < n0; ++a) {
        for (int b = a + 1; b < n0; ++b) {
            int u = g.base.boundary[a], v = g.base.boundary[b];
            if (!adjacent(u, v)) g.added.emplace_back(std::min(u, v), std::max(u, v));
        }
    }
    return g;
}

namespace {

// Unit-vertex-capacity max flow between non-adjacent s, t via vertex
// splitting: node v becomes v_in (2v) -> v_out (2v+1) with capacity 1; edges
// get capacity n (effectively unbounded) so minimum cuts use vertex arcs only.
class VertexFlow {
public:
    VertexFlow(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
        head_.assign(2 * n, std::vector<int>());
        for (int v = 0; v < n; ++v) add_arc(2 * v, 2 * v + 1, 1);
        for (auto [u, v] : edges) {
            add_arc(2 * u + 1, 2 * v, n);
            add_arc(2 * v + 1, 2 * u, n);
        }
    }

    // Max flow from s_out to t_in; separator receives the cut vertices.
    int max_flow(int s, int t, std::vector<int>* separator) {
        for (auto& a : arcs_) a.flow = 0;
        cap_override_.assign(n_, 1);
        cap_override_[s] = cap_override_[t] = 2 * n_;  // endpoints uncut
        for (int v = 0; v < n_; ++v) arcs_[vertex_arc_[v]].cap = cap_override_[v];
        int source = 2 * s + 1, sink = 2 * t;
        int flow = 0;
        while (flow <= n_) {
            // BFS augmenting path.
            std::vector<int> pred(2 * n_, -1);
            std::queue<int> q;
            q.push(source);
            pred[source] = -2;
            while (!q.empty() && pred[sink] == -1) {
                int u = q.front();
                q.pop();
                for (int ai : head_[u]) {
                    const Arc& a = arcs_[ai];
                    if (pred[a.to] == -1 && a.cap - a.flow > 0) {
                        pred[a.to] = ai;
                        q.push(a.to);
                    }
                }
            }
            if (pred[sink] == -1) break;
            for (int u = sink; u != source;) {
                int ai = pred[u];
                arcs_[ai].flow += 1;
                arcs_[ai ^ 1].flow -= 1;
                u = arcs_[ai ^ 1].to;
            }
            ++flow;
        }
        if (separator) {
            separator->clear();
            std::vector<char> reach(2 * n_, 0);
            std::queue<int> q;
            q.push(source);
            reach[source] = 1;
            while (!q.empty()) {
                int u = q.front();
                q.pop();
                for (int ai : head_[u]) {
                    const Arc& a = arcs_[ai];
                    if (!reach[a.to] && a.cap - a.flow > 0) {
                        reach[a.to] = 1;
                        q.push(a.to);
                    }
                }
            }
            for (int v = 0; v < n_; ++v)
                if (reach[2 * v] && !reach[2 * v + 1]) separator->push_back(v);
        }
        return flow;
    }

private:
    struct Arc {
        int to = 0, cap = 0, flow = 0;
    };
    int n_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> head_;
    std::vector<int> vertex_arc_ = {};
    std::vector<int> cap_override_;

    void add_arc(int u, int v, int cap) {
        if (u % 2 == 0 && v == u + 1) vertex_arc_.push_back(static_cast<int>(arcs_.size()));
        head_[u].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back({v, cap, 0});
        head_[v].push_back(static_cast<int>(arcs_.size()));
        arcs_.push_back({u, 0, 0});
    }
};

}  // namespace

ConnectivityResult vertex_connectivity_witness(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 2) throw InvalidArgument("vertex_connectivity: need at least 2 vertices");
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<int> deg(n, 0);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw InvalidArgument("vertex_connectivity: bad edge");
        if (adj[u][v]) continue;
        adj[u][v] = adj[v][u] = 1;
        ++deg[u];
        ++deg[v];
    }
    // Connectivity check first.
    {
        std::vector<char> vis(n, 0);
        std::vector<int> stack = {0};
        vis[0] = 1;
        int cnt = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (adj[u][v] && !vis[v]) {
                    vis[v] = 1;
                    ++cnt;
                    stack.push_back(v);
                }
        }
        if (cnt != n) return {0, {}};
    }
    bool complete = true;
    for (int u = 0; u < n && complete; ++u)
        if (deg[u] != n - 1) complete = false;
    if (complete) return {n - 1, {}};

    // Menger with the standard pair reduction: a fixed vertex s against all
    // its non-neighbors, plus all non-adjacent pairs of neighbors of s
    // (covers minimum separators containing s).
    int s = 0;
    for (int v = 1; v < n; ++v)
        if (deg[v] < deg[s]) s = v;
    VertexFlow flow(n, edges);
    ConnectivityResult best;
    best.kappa = n - 1;
    std::vector<int> sep;
    auto consider = [&](int a, int b) {
        int f = flow.max_flow(a, b, &sep);
        if (f < best.kappa) {
            best.kappa = f;
            best.separator = sep;
        }
    };
    for (int t = 0; t < n; ++t)
        if (t != s && !adj[s][t]) consider(s, t);
    std::vector<int> nbrs;
    for (int v = 0; v < n; ++v)
        if (adj[s][v]) nbrs.push_back(v);
    for (size_t i = 0; i < nbrs.size(); ++i)
        for (size_t j = i + 1; j < nbrs.size(); ++j)
            if (!adj[nbrs[i]][nbrs[j]]) consider(nbrs[i], nbrs[j]);
    return best;
}

int vertex_connectivity(int n, const std::vector<std::pair<int, int>>& edges) {
    return vertex_connectivity_witness(n, edges).kappa;
}

Prop21Result prop21_check(const FractalSpec& spec) {
    spec.validate();
    Prop21Result r;
    r.v0 = spec.boundary_size;
    if (spec.vertex_count == spec.boundary_size) {
        r.trivial = true;
        r.verdict = Prop21Result::Verdict::inapplicable;
        return r;
    }
    AugmentedGraph g = augment(spec);
    ConnectivityResult c = vertex_connectivity_witness(g.base.vertex_count, g.all_edges());
    r.kappa = c.kappa;
    r.separator = c.separator;
    r.verdict = c.kappa < r.v0 ? Prop21Result::Verdict::degenerate : Prop21Result::Verdict::passed;
    return r;
}

std::string prop21_to_json(const Prop21Result& r) {
    nlohmann::json j;
    if (r.trivial) {
        j["verdict"] = "inapplicable";
        j["reason"] = "no interior vertex: a single-cell structure is trivially non-degenerate";
    } else {
        j["kappa"] = r.kappa;
        j["v0"] = r.v0;
        j["verdict"] = r.verdict == Prop21Result::Verdict::degenerate ? "degenerate" : "necessary-condition-passed";
        if (r.verdict == Prop21Result::Verdict::degenerate) j["separator"] = r.separator;
    }
    return j.dump(2) + "\n";
}

}  // namespace fractal
