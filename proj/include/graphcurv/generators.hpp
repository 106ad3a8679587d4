#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <graphcurv/graph.hpp>
#include <graphcurv/report.hpp>
#include <graphcurv/rng.hpp>

namespace graphcurv {

/// Edge-map witness of local flatness: d maps eta_i with
/// x ~ eta_i(x).  For map i an optional per-map weight w_i records the
/// intended (weakly) consistent weighting.
struct RicciFlatStructure {
  std::vector<std::vector<int>> eta;  // eta[i][x]
  std::vector<double> map_weights;    // empty means unweighted / all ones

  int maps() const { return static_cast<int>(eta.size()); }
};

enum class RicciFlatMode { unweighted, weakly_consistent, consistent };

struct RicciFlatReport {
  bool passed = true;
  std::string violation;  // empty when passed
  int vertex = -1, map_i = -1, map_j = -1;

  ojson to_json() const {
    ojson j;
    j["passed"] = passed;
    j["violation"] = violation;
    j["vertex"] = vertex;
    j["map_i"] = map_i;
    j["map_j"] = map_j;
    return j;
  }
};

/// Checks the edge-map conditions (adjacency, distinctness, commuting
/// neighborhoods as multisets) at every vertex, or at `at_vertex` only when
/// >= 0.  The weight modes additionally check the per-map weighting and, for
/// `consistent`, global weight symmetry.
inline RicciFlatReport verify_ricci_flat(const WeightedGraph& g, const RicciFlatStructure& s,
                                         RicciFlatMode mode, int at_vertex = -1) {
  RicciFlatReport rep;
  const int d = s.maps();
  auto fail = [&](std::string what, int x, int i, int j) {
    rep.passed = false;
    rep.violation = std::move(what);
    rep.vertex = x;
    rep.map_i = i;
    rep.map_j = j;
    return rep;
  };
  if (d == 0) return fail("no maps", -1, -1, -1);
  for (int i = 0; i < d; ++i)
    if (static_cast<int>(s.eta[static_cast<std::size_t>(i)].size()) != g.num_vertices())
      return fail("map not defined on all vertices", -1, i, -1);

  std::vector<int> scope;
  if (at_vertex >= 0) {
    // local test: maps need only be checked on x and its neighbors
    scope.push_back(at_vertex);
    for (const Edge& e : g.neighbors(at_vertex)) scope.push_back(e.to);
  } else {
    scope.resize(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) scope[static_cast<std::size_t>(v)] = v;
  }

  for (int x : scope) {
    for (int i = 0; i < d; ++i) {
      const int y = s.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
      if (y < 0 || y >= g.num_vertices() || !g.has_edge(x, y))
        return fail("condition 1: eta_i(x) is not a neighbor of x", x, i, -1);
      for (int j = i + 1; j < d; ++j)
        if (s.eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)] == y)
          return fail("condition 2: eta_i(x) == eta_j(x)", x, i, j);
    }
  }

  // condition 3 is a statement about the second neighborhood of x
  std::vector<int> cond3_scope = at_vertex >= 0 ? std::vector<int>{at_vertex} : scope;
  for (int x : cond3_scope) {
    for (int i = 0; i < d; ++i) {
      std::vector<int> lhs, rhs;
      lhs.reserve(static_cast<std::size_t>(d));
      rhs.reserve(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) {
        const int xj = s.eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)];
        const int xi = s.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
        lhs.push_back(s.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(xj)]);
        rhs.push_back(s.eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(xi)]);
      }
      std::sort(lhs.begin(), lhs.end());
      std::sort(rhs.begin(), rhs.end());
      if (lhs != rhs) return fail("condition 3: neighborhoods do not commute", x, i, -1);
    }
  }

  if (mode == RicciFlatMode::unweighted) return rep;

  if (static_cast<int>(s.map_weights.size()) != d)
    return fail("weight mode requires one weight per map", -1, -1, -1);
  for (int x : scope)
    for (int i = 0; i < d; ++i) {
      const int y = s.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
      if (g.weight(x, y) != s.map_weights[static_cast<std::size_t>(i)])
        return fail("weight condition 1: w(x, eta_i(x)) != w_i", x, i, -1);
    }
  // whenever eta_j(eta_i(x)) == eta_i(eta_k(x)), the weights w_j and w_k agree
  for (int x : cond3_scope)
    for (int i = 0; i < d; ++i) {
      const int xi = s.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)];
      for (int j = 0; j < d; ++j) {
        const int a = s.eta[static_cast<std::size_t>(j)][static_cast<std::size_t>(xi)];
        for (int k = 0; k < d; ++k) {
          const int xk = s.eta[static_cast<std::size_t>(k)][static_cast<std::size_t>(x)];
          if (s.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(xk)] == a &&
              s.map_weights[static_cast<std::size_t>(j)] !=
                  s.map_weights[static_cast<std::size_t>(k)])
            return fail("weight condition 2: forced w_j == w_k violated", x, j, k);
        }
      }
    }

  if (mode == RicciFlatMode::consistent && !g.symmetric())
    return fail("consistency requires symmetric weights", -1, -1, -1);
  return rep;
}

enum class MeasureKind { unit, degree };

inline VertexMeasure make_measure(const WeightedGraph& g, MeasureKind kind) {
  return kind == MeasureKind::unit ? VertexMeasure::unit(g.num_vertices())
                                   : VertexMeasure::degree(g);
}

/// Cayley graph of (Z_m)^d with generators +-e_i, plus its edge-map structure.
struct TorusGraph {
  WeightedGraph graph;
  VertexMeasure measure;
  RicciFlatStructure structure;
  int d = 0;
  int m = 0;
};

/// weights: one positive weight per map in the order (+e_1, -e_1, +e_2, ...),
/// or empty for the unweighted torus.  Vertex index is sum_i c_i m^i.
inline TorusGraph make_torus(int d, int m, std::vector<double> weights = {},
                             MeasureKind measure = MeasureKind::unit) {
  if (d < 1) throw domain_error("make_torus: d must be >= 1");
  if (m < 3) throw domain_error("make_torus: m must be >= 3 so that +-e_i are distinct");
  if (weights.empty()) weights.assign(static_cast<std::size_t>(2 * d), 1.0);
  if (static_cast<int>(weights.size()) != 2 * d)
    throw domain_error("make_torus: need one weight per generator (2d values)");

  std::int64_t n64 = 1;
  for (int i = 0; i < d; ++i) n64 *= m;
  if (n64 > (1 << 24)) throw domain_error("make_torus: torus too large");
  const int n = static_cast<int>(n64);

  std::vector<int> stride(static_cast<std::size_t>(d), 1);
  for (int i = 1; i < d; ++i)
    stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i - 1)] * m;

  auto shift = [&](int v, int coord, int delta) {
    const int st = stride[static_cast<std::size_t>(coord)];
    const int c = (v / st) % m;
    const int c2 = (c + delta + m) % m;
    return v + (c2 - c) * st;
  };

  TorusGraph out;
  out.d = d;
  out.m = m;
  out.structure.eta.assign(static_cast<std::size_t>(2 * d),
                           std::vector<int>(static_cast<std::size_t>(n)));
  out.structure.map_weights = weights;
  std::vector<DirectedEdge> edges;
  edges.reserve(static_cast<std::size_t>(2 * d) * static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) {
      const int up = shift(v, i, +1);
      const int dn = shift(v, i, -1);
      out.structure.eta[static_cast<std::size_t>(2 * i)][static_cast<std::size_t>(v)] = up;
      out.structure.eta[static_cast<std::size_t>(2 * i + 1)][static_cast<std::size_t>(v)] = dn;
      edges.emplace_back(v, up, weights[static_cast<std::size_t>(2 * i)]);
      edges.emplace_back(v, dn, weights[static_cast<std::size_t>(2 * i + 1)]);
    }
  out.graph = WeightedGraph(n, edges);
  out.measure = make_measure(out.graph, measure);
  return out;
}

/// Finite truncation of the D-ary rooted tree: the root (vertex 0) has D
/// children and every internal non-root vertex has D-1 children, through
/// depth L, so every vertex at depth < L has degree exactly D.  Unweighted.
struct TreeGraph {
  WeightedGraph graph;
  std::vector<int> depth;
  int root = 0;
};

inline TreeGraph make_tree(int branching, int depth_limit) {
  if (branching < 2) throw domain_error("make_tree: branching degree must be >= 2");
  if (depth_limit < 2) throw domain_error("make_tree: depth must be >= 2 (2-ball of the root)");
  TreeGraph out;
  std::vector<DirectedEdge> edges;
  out.depth.push_back(0);
  std::vector<int> frontier{0};
  int next = 1;
  for (int level = 1; level <= depth_limit; ++level) {
    std::vector<int> next_frontier;
    const int kids = (level == 1) ? branching : branching - 1;
    for (int parent : frontier)
      for (int c = 0; c < kids; ++c) {
        edges.emplace_back(parent, next, 1.0);
        out.depth.push_back(level);
        next_frontier.push_back(next);
        ++next;
      }
    frontier = std::move(next_frontier);
  }
  out.graph = WeightedGraph::undirected(next, edges);
  return out;
}

inline WeightedGraph make_path(int n) {
  if (n < 2) throw domain_error("make_path: need at least 2 vertices");
  std::vector<DirectedEdge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1, 1.0);
  return WeightedGraph::undirected(n, e);
}

inline WeightedGraph make_cycle(int n) {
  if (n < 3) throw domain_error("make_cycle: need at least 3 vertices");
  std::vector<DirectedEdge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n, 1.0);
  return WeightedGraph::undirected(n, e);
}

inline WeightedGraph make_complete(int n) {
  if (n < 2) throw domain_error("make_complete: need at least 2 vertices");
  std::vector<DirectedEdge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j, 1.0);
  return WeightedGraph::undirected(n, e);
}

/// Star with the center at vertex 0.
inline WeightedGraph make_star(int leaves) {
  if (leaves < 1) throw domain_error("make_star: need at least 1 leaf");
  std::vector<DirectedEdge> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i, 1.0);
  return WeightedGraph::undirected(leaves + 1, e);
}

/// Hypercube Q_d with its coordinate-flip edge maps (which locally commute).
struct HypercubeGraph {
  WeightedGraph graph;
  RicciFlatStructure structure;
};

inline HypercubeGraph make_hypercube(int d) {
  if (d < 1) throw domain_error("make_hypercube: d must be >= 1");
  if (d > 20) throw domain_error("make_hypercube: too large");
  const int n = 1 << d;
  HypercubeGraph out;
  out.structure.eta.assign(static_cast<std::size_t>(d),
                           std::vector<int>(static_cast<std::size_t>(n)));
  out.structure.map_weights.assign(static_cast<std::size_t>(d), 1.0);
  std::vector<DirectedEdge> edges;
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) {
      const int u = v ^ (1 << i);
      out.structure.eta[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] = u;
      edges.emplace_back(v, u, 1.0);
    }
  out.graph = WeightedGraph(n, edges);
  return out;
}

/// Random weighted graph on n vertices: each unordered pair becomes an edge
/// with probability edge_prob; weights uniform in [0.2, 2], drawn per
/// direction when symmetric_weights is false.  Isolated vertices get one
/// extra random edge so every vertex has a neighbor.
inline WeightedGraph random_graph(int n, double edge_prob, bool symmetric_weights,
                                  CounterRng& rng) {
  if (n < 2) throw domain_error("random_graph: need at least 2 vertices");
  std::vector<DirectedEdge> edges;
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  auto add = [&](int a, int b) {
    const double w1 = rng.uniform(0.2, 2.0);
    const double w2 = symmetric_weights ? w1 : rng.uniform(0.2, 2.0);
    edges.emplace_back(a, b, w1);
    edges.emplace_back(b, a, w2);
    covered[static_cast<std::size_t>(a)] = covered[static_cast<std::size_t>(b)] = 1;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (rng.uniform() < edge_prob) add(a, b);
  for (int a = 0; a < n; ++a)
    if (!covered[static_cast<std::size_t>(a)]) {
      int b = rng.uniform_int(0, n - 2);
      if (b >= a) ++b;
      add(a, b);
    }
  return WeightedGraph(n, edges);
}

}  // namespace graphcurv
