#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace graphcurv {

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Edge {
  int to;
  double weight;
};

using DirectedEdge = std::tuple<int, int, double>;  // (from, to, weight)

/// Locally finite weighted graph on vertices 0..n-1.  Edge weights are
/// directed (w_xy and w_yx are stored independently) and must be strictly
/// positive.  Whether the weighting happens to be symmetric is detected once
/// at construction and cached; operations that need symmetry check the flag.
/// Immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(int n, const std::vector<DirectedEdge>& edges,
                std::vector<std::string> labels = {})
      : n_(n), adj_(static_cast<std::size_t>(std::max(n, 0))), labels_(std::move(labels)) {
    if (n < 0) throw domain_error("vertex count must be nonnegative");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
      throw domain_error("label table size does not match vertex count");
    for (const auto& [x, y, w] : edges) {
      if (x < 0 || x >= n || y < 0 || y >= n)
        throw domain_error("edge endpoint out of range: (" + std::to_string(x) + "," +
                           std::to_string(y) + ")");
      if (x == y) throw domain_error("self-loops are not allowed");
      if (!(w > 0.0) || !std::isfinite(w))
        throw domain_error("edge weight must be strictly positive and finite");
      adj_[static_cast<std::size_t>(x)].push_back({y, w});
    }
    for (auto& nb : adj_) {
      std::sort(nb.begin(), nb.end(), [](const Edge& a, const Edge& b) { return a.to < b.to; });
      for (std::size_t i = 1; i < nb.size(); ++i)
        if (nb[i].to == nb[i - 1].to) throw domain_error("duplicate edge in input");
    }
    deg_.assign(static_cast<std::size_t>(n_), 0.0);
    for (int x = 0; x < n_; ++x)
      for (const Edge& e : adj_[static_cast<std::size_t>(x)])
        deg_[static_cast<std::size_t>(x)] += e.weight;
    symmetric_ = detect_symmetry();
  }

  /// Convenience: build from undirected edges (each materializes both directions).
  static WeightedGraph undirected(int n, const std::vector<DirectedEdge>& edges,
                                  std::vector<std::string> labels = {}) {
    std::vector<DirectedEdge> both;
    both.reserve(2 * edges.size());
    for (const auto& [x, y, w] : edges) {
      both.emplace_back(x, y, w);
      both.emplace_back(y, x, w);
    }
    return WeightedGraph(n, both, std::move(labels));
  }

  int num_vertices() const { return n_; }
  bool empty() const { return n_ == 0; }

  const std::vector<Edge>& neighbors(int x) const {
    check_vertex(x);
    return adj_[static_cast<std::size_t>(x)];
  }

  /// deg(x) = sum of outgoing weights.
  double degree(int x) const {
    check_vertex(x);
    return deg_[static_cast<std::size_t>(x)];
  }

  int neighbor_count(int x) const { return static_cast<int>(neighbors(x).size()); }

  bool symmetric() const { return symmetric_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has_edge(int x, int y) const {
    const auto& nb = neighbors(x);
    auto it = std::lower_bound(nb.begin(), nb.end(), y,
                               [](const Edge& e, int v) { return e.to < v; });
    return it != nb.end() && it->to == y;
  }

  double weight(int x, int y) const {
    const auto& nb = neighbors(x);
    auto it = std::lower_bound(nb.begin(), nb.end(), y,
                               [](const Edge& e, int v) { return e.to < v; });
    if (it == nb.end() || it->to != y)
      throw domain_error("no edge (" + std::to_string(x) + "," + std::to_string(y) + ")");
    return it->weight;
  }

  /// Hop distances from x0 by BFS; -1 marks unreachable vertices.
  std::vector<int> hop_distances(int x0) const {
    check_vertex(x0);
    std::vector<int> dist(static_cast<std::size_t>(n_), -1);
    std::deque<int> queue{x0};
    dist[static_cast<std::size_t>(x0)] = 0;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (const Edge& e : adj_[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(e.to)] < 0) {
          dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(e.to);
        }
      }
    }
    return dist;
  }

  int hop_distance(int x, int y) const {
    check_vertex(y);
    return hop_distances(x)[static_cast<std::size_t>(y)];
  }

  /// B(x0, r) = { x : d(x, x0) <= r } under unweighted hop distance, sorted.
  std::vector<int> ball(int x0, double r) const {
    if (r < 0) return {};
    const auto dist = hop_distances(x0);
    std::vector<int> out;
    for (int v = 0; v < n_; ++v)
      if (dist[static_cast<std::size_t>(v)] >= 0 &&
          static_cast<double>(dist[static_cast<std::size_t>(v)]) <= r)
        out.push_back(v);
    return out;
  }

  void check_vertex(int x) const {
    if (x < 0 || x >= n_) throw domain_error("unknown vertex " + std::to_string(x));
  }

 private:
  bool detect_symmetry() const {
    for (int x = 0; x < n_; ++x)
      for (const Edge& e : adj_[static_cast<std::size_t>(x)]) {
        const auto& back = adj_[static_cast<std::size_t>(e.to)];
        auto it = std::lower_bound(back.begin(), back.end(), x,
                                   [](const Edge& a, int v) { return a.to < v; });
        if (it == back.end() || it->to != x || it->weight != e.weight) return false;
      }
    return true;
  }

  int n_ = 0;
  std::vector<std::vector<Edge>> adj_;
  std::vector<double> deg_;
  bool symmetric_ = true;
  std::vector<std::string> labels_;
};

/// Positive vertex measure; defines the mu-Laplacian together with the graph.
class VertexMeasure {
 public:
  enum class Kind { unit, degree, explicit_values };

  VertexMeasure() = default;

  static VertexMeasure unit(int n) {
    VertexMeasure m;
    m.kind_ = Kind::unit;
    m.mu_.assign(static_cast<std::size_t>(n), 1.0);
    m.mu_max_ = n > 0 ? 1.0 : 0.0;
    return m;
  }

  static VertexMeasure degree(const WeightedGraph& g) {
    VertexMeasure m;
    m.kind_ = Kind::degree;
    m.mu_.resize(static_cast<std::size_t>(g.num_vertices()));
    for (int x = 0; x < g.num_vertices(); ++x) {
      const double d = g.degree(x);
      if (!(d > 0.0))
        throw domain_error("degree measure undefined on isolated vertex " + std::to_string(x));
      m.mu_[static_cast<std::size_t>(x)] = d;
    }
    m.recompute_max();
    return m;
  }

  static VertexMeasure explicit_values(std::vector<double> values) {
    VertexMeasure m;
    m.kind_ = Kind::explicit_values;
    for (double v : values)
      if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error("measure values must be strictly positive and finite");
    m.mu_ = std::move(values);
    m.recompute_max();
    return m;
  }

  double operator[](int x) const { return mu_[static_cast<std::size_t>(x)]; }
  double mu_max() const { return mu_max_; }
  int size() const { return static_cast<int>(mu_.size()); }
  Kind kind() const { return kind_; }
  const std::vector<double>& values() const { return mu_; }

  /// vol(U) = sum of mu over U.
  template <typename Iterable>
  double volume(const Iterable& vertices) const {
    double v = 0.0;
    for (int x : vertices) v += mu_[static_cast<std::size_t>(x)];
    return v;
  }

  double total() const {
    double v = 0.0;
    for (double m : mu_) v += m;
    return v;
  }

 private:
  void recompute_max() {
    mu_max_ = 0.0;
    for (double v : mu_) mu_max_ = std::max(mu_max_, v);
  }

  Kind kind_ = Kind::unit;
  std::vector<double> mu_;
  double mu_max_ = 0.0;
};

using VertexFunction = std::vector<double>;

/// The regularity constants D_w = max deg(x)/w_xy, D_mu = max deg(x)/mu(x),
/// plus w_min and mu_max, found by exhaustive scan.
struct GraphConstants {
  double d_w = 0.0;
  double d_mu = 0.0;
  double w_min = 0.0;
  double mu_max = 0.0;
};

inline GraphConstants graph_constants(const WeightedGraph& g, const VertexMeasure& mu) {
  if (g.empty()) throw domain_error("graph_constants: empty graph");
  if (mu.size() != g.num_vertices()) throw domain_error("measure size mismatch");
  GraphConstants c;
  c.w_min = std::numeric_limits<double>::infinity();
  c.mu_max = mu.mu_max();
  bool any_edge = false;
  for (int x = 0; x < g.num_vertices(); ++x) {
    const double deg = g.degree(x);
    c.d_mu = std::max(c.d_mu, deg / mu[x]);
    for (const Edge& e : g.neighbors(x)) {
      any_edge = true;
      c.d_w = std::max(c.d_w, deg / e.weight);
      c.w_min = std::min(c.w_min, e.weight);
    }
  }
  if (!any_edge) c.w_min = 0.0;
  return c;
}

/// Induced subgraph on a sorted vertex subset.  Returns the subgraph and the
/// global->local index map (-1 for vertices outside the subset).
struct InducedSubgraph {
  WeightedGraph graph;
  std::vector<int> global_to_local;
  std::vector<int> local_to_global;
};

inline InducedSubgraph induced_subgraph(const WeightedGraph& g, const std::vector<int>& verts) {
  InducedSubgraph out;
  out.global_to_local.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  out.local_to_global = verts;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    g.check_vertex(verts[i]);
    out.global_to_local[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);
  }
  std::vector<DirectedEdge> edges;
  for (int v : verts) {
    const int lv = out.global_to_local[static_cast<std::size_t>(v)];
    for (const Edge& e : g.neighbors(v)) {
      const int lu = out.global_to_local[static_cast<std::size_t>(e.to)];
      if (lu >= 0) edges.emplace_back(lv, lu, e.weight);
    }
  }
  out.graph = WeightedGraph(static_cast<int>(verts.size()), edges);
  return out;
}

inline VertexMeasure restrict_measure(const VertexMeasure& mu, const std::vector<int>& verts) {
  std::vector<double> vals;
  vals.reserve(verts.size());
  for (int v : verts) vals.push_back(mu[v]);
  return VertexMeasure::explicit_values(std::move(vals));
}

}  // namespace graphcurv
