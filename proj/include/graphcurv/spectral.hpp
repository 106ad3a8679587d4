#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include <graphcurv/heat.hpp>

namespace graphcurv {

// ---------------------------------------------------------------------------
// spectrum of -Delta
// ---------------------------------------------------------------------------

/// Eigenvalues 0 = lambda_0 <= lambda_1 <= ... of -Delta and eigenfunctions
/// orthonormal with respect to the mu-inner product (f,g) = sum mu f g.
/// Requires symmetric edge weights.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfunctions;  // column i = psi_i
  double volume = 0.0;             // sum mu

  Eigen::VectorXd coefficients(const WeightedGraph&, const VertexMeasure& mu,
                               const VertexFunction& f) const {
    const int n = static_cast<int>(f.size());
    Eigen::VectorXd weighted(n);
    for (int x = 0; x < n; ++x) weighted(x) = mu[x] * f[static_cast<std::size_t>(x)];
    return eigenfunctions.transpose() * weighted;
  }

  /// P_t f reconstructed as sum e^{-lambda_i t} alpha_i psi_i.
  Eigen::VectorXd semigroup_apply(const WeightedGraph& g, const VertexMeasure& mu,
                                  const VertexFunction& f, double t) const {
    const Eigen::VectorXd alpha = coefficients(g, mu, f);
    const Eigen::VectorXd damped = (-eigenvalues.array() * t).exp() * alpha.array();
    return eigenfunctions * damped;
  }

  /// Fundamental solution P_t(x,y) = sum e^{-lambda_i t} psi_i(x) psi_i(y),
  /// so that u(x,t) = sum_y P_t(x,y) mu(y) u0(y).
  double heat_kernel(double t, int x, int y) const {
    const Eigen::ArrayXd damped = (-eigenvalues.array() * t).exp();
    return (damped * eigenfunctions.row(x).transpose().array() *
            eigenfunctions.row(y).transpose().array())
        .sum();
  }
};

inline Spectrum spectrum(const WeightedGraph& g, const VertexMeasure& mu) {
  if (!g.symmetric()) throw domain_error("spectrum: requires symmetric weights");
  const int n = g.num_vertices();
  if (n == 0) throw domain_error("spectrum: empty graph");
  Eigen::VectorXd sqrt_mu(n), inv_sqrt_mu(n);
  for (int x = 0; x < n; ++x) {
    sqrt_mu(x) = std::sqrt(mu[x]);
    inv_sqrt_mu(x) = 1.0 / sqrt_mu(x);
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (const Edge& e : g.neighbors(x)) s(x, e.to) -= e.weight * inv_sqrt_mu(x) * inv_sqrt_mu(e.to);
    s(x, x) = g.degree(x) / mu[x];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw domain_error("spectrum: eigensolve failed");
  Spectrum out;
  out.eigenvalues = es.eigenvalues();
  out.eigenfunctions = inv_sqrt_mu.asDiagonal() * es.eigenvectors();
  for (int x = 0; x < n; ++x) out.volume += mu[x];
  // deterministic sign convention
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < n; ++x) {
      if (std::abs(out.eigenfunctions(x, i)) > 1e-12) {
        if (out.eigenfunctions(x, i) < 0) out.eigenfunctions.col(i) *= -1.0;
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cheeger constant
// ---------------------------------------------------------------------------

struct CheegerCut {
  std::vector<int> subset;
  double boundary_weight = 0.0;  // sum_{x in U, y not in U} w_xy
  double volume = 0.0;           // sum_{x in U} mu(x)
  double ratio = 0.0;
  bool exact = true;

  ojson to_json() const {
    ojson j;
    j["subset"] = subset;
    j["boundary_weight"] = boundary_weight;
    j["volume"] = volume;
    j["ratio"] = ratio;
    j["exact"] = exact;
    return j;
  }
};

enum class CheegerMethod { exact, sweep };

namespace detail {

inline bool graph_connected(const WeightedGraph& g) {
  if (g.num_vertices() == 0) return true;
  const auto d = g.hop_distances(0);
  return std::all_of(d.begin(), d.end(), [](int v) { return v >= 0; });
}

// Gray-code scan over all subsets; cut and volume maintained incrementally.
inline CheegerCut cheeger_exact_scan(const WeightedGraph& g, const VertexMeasure& mu) {
  const int n = g.num_vertices();
  const double half_vol = 0.5 * mu.total();
  // in-edges are needed to update the directed cut when a vertex flips
  std::vector<std::vector<Edge>> in_adj(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    for (const Edge& e : g.neighbors(x))
      in_adj[static_cast<std::size_t>(e.to)].push_back({x, e.weight});

  std::vector<char> in(static_cast<std::size_t>(n), 0);
  double cut = 0.0, vol = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_mask = 0, mask = 0;
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = static_cast<int>(__builtin_ctzll(i));  // Gray code flip position
    const bool entering = !in[static_cast<std::size_t>(v)];
    in[static_cast<std::size_t>(v)] = entering;
    mask ^= 1ULL << v;
    vol += entering ? mu[v] : -mu[v];
    const double sign = entering ? 1.0 : -1.0;
    for (const Edge& e : g.neighbors(v))  // edges v -> u join/leave the cut when u is outside
      if (!in[static_cast<std::size_t>(e.to)]) cut += sign * e.weight;
    for (const Edge& e : in_adj[static_cast<std::size_t>(v)])  // edges u -> v with u inside
      if (in[static_cast<std::size_t>(e.to)]) cut -= sign * e.weight;
    if (vol > 0.0 && vol <= half_vol + 1e-12) {
      const double ratio = cut / vol;
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && mask < best_mask)) {
        best = ratio;
        best_mask = mask;
      }
    }
  }
  CheegerCut out;
  out.ratio = best;
  for (int v = 0; v < n; ++v)
    if (best_mask >> v & 1ULL) out.subset.push_back(v);
  out.volume = mu.volume(out.subset);
  // recompute the boundary exactly
  std::vector<char> member(static_cast<std::size_t>(n), 0);
  for (int v : out.subset) member[static_cast<std::size_t>(v)] = 1;
  for (int v : out.subset)
    for (const Edge& e : g.neighbors(v))
      if (!member[static_cast<std::size_t>(e.to)]) out.boundary_weight += e.weight;
  out.ratio = out.boundary_weight / out.volume;
  return out;
}

}  // namespace detail

/// h = inf |dU| / vol(U) over nonempty U with vol(U) <= vol(V)/2.  The exact
/// method enumerates subsets (|V| <= 22); the sweep method orders vertices by
/// the Fiedler vector and scans prefix cuts (upper bound, flagged inexact).
/// A disconnected graph returns h = 0 with a component as witness.
inline std::pair<double, CheegerCut> cheeger_constant(const WeightedGraph& g,
                                                      const VertexMeasure& mu,
                                                      CheegerMethod method) {
  const int n = g.num_vertices();
  if (n < 2) throw domain_error("cheeger_constant: need at least 2 vertices");
  if (!detail::graph_connected(g)) {
    CheegerCut cut;
    cut.exact = true;
    const auto dist = g.hop_distances(0);
    std::vector<int> comp, rest;
    for (int v = 0; v < n; ++v)
      (dist[static_cast<std::size_t>(v)] >= 0 ? comp : rest).push_back(v);
    cut.subset = mu.volume(comp) <= mu.volume(rest) ? comp : rest;
    cut.volume = mu.volume(cut.subset);
    cut.ratio = 0.0;
    return {0.0, cut};
  }

  if (method == CheegerMethod::exact) {
    if (n > 22) throw domain_error("cheeger_constant: exact enumeration capped at 22 vertices");
    auto cut = detail::cheeger_exact_scan(g, mu);
    cut.exact = true;
    return {cut.ratio, cut};
  }

  // sweep cuts along the Fiedler order
  const auto spec = spectrum(g, mu);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double fa = spec.eigenfunctions(a, 1), fb = spec.eigenfunctions(b, 1);
    if (fa != fb) return fa < fb;
    return a < b;
  });
  const double half_vol = 0.5 * mu.total();
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  double cut_w = 0.0, vol = 0.0;
  double best = std::numeric_limits<double>::infinity();
  int best_prefix = 0;
  bool best_side_prefix = true;
  for (int i = 0; i + 1 < n; ++i) {
    const int v = order[static_cast<std::size_t>(i)];
    in[static_cast<std::size_t>(v)] = 1;
    vol += mu[v];
    for (const Edge& e : g.neighbors(v))  // symmetric weights here
      cut_w += in[static_cast<std::size_t>(e.to)] ? -e.weight : e.weight;
    const bool prefix_small = vol <= half_vol + 1e-12;
    const double side_vol = prefix_small ? vol : mu.total() - vol;
    if (side_vol <= 0.0) continue;
    const double ratio = cut_w / side_vol;  // same cut weight for symmetric graphs
    if (ratio < best) {
      best = ratio;
      best_prefix = i + 1;
      best_side_prefix = prefix_small;
    }
  }
  CheegerCut cut;
  cut.exact = false;
  if (best_side_prefix) {
    cut.subset.assign(order.begin(), order.begin() + best_prefix);
  } else {
    cut.subset.assign(order.begin() + best_prefix, order.end());
  }
  std::sort(cut.subset.begin(), cut.subset.end());
  cut.volume = mu.volume(cut.subset);
  std::vector<char> member(static_cast<std::size_t>(n), 0);
  for (int v : cut.subset) member[static_cast<std::size_t>(v)] = 1;
  for (int v : cut.subset)
    for (const Edge& e : g.neighbors(v))
      if (!member[static_cast<std::size_t>(e.to)]) cut.boundary_weight += e.weight;
  cut.ratio = cut.boundary_weight / cut.volume;
  return {cut.ratio, cut};
}

/// The sweep curve behind the spectral upper bound: prefix cuts along the
/// Fiedler order as (subset size, ratio) points, using the smaller-volume
/// side of each prefix.
inline std::vector<std::pair<int, double>> cheeger_sweep_curve(const WeightedGraph& g,
                                                               const VertexMeasure& mu) {
  const int n = g.num_vertices();
  const auto spec = spectrum(g, mu);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) order[static_cast<std::size_t>(v)] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double fa = spec.eigenfunctions(a, 1), fb = spec.eigenfunctions(b, 1);
    if (fa != fb) return fa < fb;
    return a < b;
  });
  std::vector<std::pair<int, double>> curve;
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  double cut_w = 0.0, vol = 0.0;
  const double half_vol = 0.5 * mu.total();
  for (int i = 0; i + 1 < n; ++i) {
    const int v = order[static_cast<std::size_t>(i)];
    in[static_cast<std::size_t>(v)] = 1;
    vol += mu[v];
    for (const Edge& e : g.neighbors(v))
      cut_w += in[static_cast<std::size_t>(e.to)] ? -e.weight : e.weight;
    const double side_vol = vol <= half_vol + 1e-12 ? vol : mu.total() - vol;
    if (side_vol > 0.0) curve.emplace_back(i + 1, cut_w / side_vol);
  }
  return curve;
}

/// Exact Cheeger constant of the unweighted (Z_m)^2 torus with a constant
/// vertex measure: a transfer-matrix pass over column profiles computes, for
/// every cardinality, the exact minimum edge boundary over all subsets.
/// Covers the sizes the generic enumeration cannot reach.
inline std::pair<double, CheegerCut> cheeger_exact_torus2d(int m, double mu_per_vertex = 1.0) {
  if (m < 3 || m > 8) throw domain_error("cheeger_exact_torus2d: m in [3,8]");
  const int profiles = 1 << m;
  const int n = m * m;
  const int max_cut = 2 * n;  // undirected edge count of the torus
  auto vertical_cut = [&](int s) {
    const int rot = ((s << 1) | (s >> (m - 1))) & (profiles - 1);
    return __builtin_popcount(s ^ rot);
  };
  const int kmax = n / 2;  // only vol(U) <= vol(V)/2 matters

  const auto idx = [&](int col, int prof, int cnt, int cut) {
    return ((static_cast<std::size_t>(col) * profiles + static_cast<std::size_t>(prof)) *
                (kmax + 1) +
            static_cast<std::size_t>(cnt)) *
               (max_cut + 1) +
           static_cast<std::size_t>(cut);
  };
  double best_ratio = std::numeric_limits<double>::infinity();
  int best_count = -1;
  std::vector<int> best_profiles;

  std::vector<std::int16_t> parent(
      static_cast<std::size_t>(m) * profiles * (kmax + 1) * (max_cut + 1), -1);
  for (int first = 0; first < profiles; ++first) {
    // reachable states (profile, count, cut) after each column
    std::vector<char> cur(static_cast<std::size_t>(profiles) * (kmax + 1) * (max_cut + 1), 0);
    auto cidx = [&](int prof, int cnt, int cut) {
      return (static_cast<std::size_t>(prof) * (kmax + 1) + static_cast<std::size_t>(cnt)) *
                 (max_cut + 1) +
             static_cast<std::size_t>(cut);
    };
    const int c0 = __builtin_popcount(first);
    if (c0 > kmax) continue;
    cur[cidx(first, c0, vertical_cut(first))] = 1;
    for (int col = 1; col < m; ++col) {
      std::vector<char> nxt(cur.size(), 0);
      for (int prof = 0; prof < profiles; ++prof)
        for (int cnt = 0; cnt <= kmax; ++cnt)
          for (int cut = 0; cut <= max_cut; ++cut) {
            if (!cur[cidx(prof, cnt, cut)]) continue;
            for (int np = 0; np < profiles; ++np) {
              const int ncnt = cnt + __builtin_popcount(np);
              if (ncnt > kmax) continue;
              const int ncut = cut + vertical_cut(np) + __builtin_popcount(prof ^ np);
              if (ncut > max_cut) continue;
              const auto id = cidx(np, ncnt, ncut);
              if (!nxt[id]) {
                nxt[id] = 1;
                parent[idx(col, np, ncnt, ncut)] = static_cast<std::int16_t>(prof);
              }
            }
          }
      cur.swap(nxt);
    }
    // close the wrap between the last column and the first
    for (int prof = 0; prof < profiles; ++prof)
      for (int cnt = 1; cnt <= kmax; ++cnt)
        for (int cut = 0; cut <= max_cut; ++cut) {
          if (!cur[cidx(prof, cnt, cut)]) continue;
          const int total_cut = cut + __builtin_popcount(prof ^ first);
          const double ratio =
              static_cast<double>(total_cut) / (mu_per_vertex * static_cast<double>(cnt));
          if (ratio < best_ratio - 1e-15) {
            best_ratio = ratio;
            best_count = cnt;
            best_profiles.assign(static_cast<std::size_t>(m), 0);
            int p = prof, c = cnt, q = cut;
            for (int col = m - 1; col >= 1; --col) {
              best_profiles[static_cast<std::size_t>(col)] = p;
              const int fp = parent[idx(col, p, c, q)];
              q -= vertical_cut(p) + __builtin_popcount(fp ^ p);
              c -= __builtin_popcount(p);
              p = fp;
            }
            best_profiles[0] = p;
          }
        }
  }
  CheegerCut cut;
  cut.exact = true;
  for (int col = 0; col < m; ++col)
    for (int row = 0; row < m; ++row)
      if (best_profiles[static_cast<std::size_t>(col)] >> row & 1)
        cut.subset.push_back(row + col * m);  // make_torus indexing: c0 + c1 m
  std::sort(cut.subset.begin(), cut.subset.end());
  cut.volume = mu_per_vertex * static_cast<double>(best_count);
  const auto torus = make_torus(2, m);
  std::vector<char> member(static_cast<std::size_t>(n), 0);
  for (int v : cut.subset) member[static_cast<std::size_t>(v)] = 1;
  for (int v : cut.subset)
    for (const Edge& e : torus.graph.neighbors(v))
      if (!member[static_cast<std::size_t>(e.to)]) cut.boundary_weight += e.weight;
  cut.ratio = cut.boundary_weight / cut.volume;
  return {cut.ratio, cut};
}

// ---------------------------------------------------------------------------
// Buser-type bound and the two norm lemmas behind it
// ---------------------------------------------------------------------------

struct BuserOptions {
  CheegerMethod cheeger = CheegerMethod::exact;
  HypothesisCheck hypothesis = HypothesisCheck::sampled;
  std::uint64_t seed = 0;
  double precomputed_h = -1.0;  // skip the Cheeger solve when >= 0
};

/// lambda_1 <= max{2C sqrt(K) h, 4 C^2 h^2} under CDE(n,-K), with
/// C = 8 sqrt(3 mu_max (2-alpha) n / (alpha (1-alpha)^2)) for K > 0 and
/// C = 8 sqrt(3 n mu_max) for K = 0.
inline BoundReport verify_buser(const WeightedGraph& g, const VertexMeasure& mu, Dim n, double k,
                                double alpha, const BuserOptions& opt = {}) {
  if (!g.symmetric()) throw domain_error("verify_buser: requires symmetric weights");
  if (!detail::graph_connected(g))
    throw domain_error("verify_buser: disconnected graph (h = 0 makes the bound vacuous)");
  if (n.infinite) throw domain_error("verify_buser: needs a finite dimension");
  if (k > 0.0 && !(alpha > 0.0 && alpha < 1.0))
    throw domain_error("verify_buser: K > 0 needs alpha in (0,1)");

  const auto spec = spectrum(g, mu);
  const double lambda1 = spec.eigenvalues(1);
  double h;
  CheegerCut cut;
  if (opt.precomputed_h >= 0.0) {
    h = opt.precomputed_h;
  } else {
    std::tie(h, cut) = cheeger_constant(g, mu, opt.cheeger);
  }
  const double c = k > 0.0
                       ? 8.0 * std::sqrt(3.0 * mu.mu_max() * (2.0 - alpha) * n.n /
                                         (alpha * (1.0 - alpha) * (1.0 - alpha)))
                       : 8.0 * std::sqrt(3.0 * n.n * mu.mu_max());
  const double rhs = std::max(2.0 * c * std::sqrt(k) * h, 4.0 * c * c * h * h);

  BoundReport rep = BoundReport::of(lambda1, rhs);
  rep.witness["lambda1"] = lambda1;
  rep.witness["h"] = h;
  rep.witness["C"] = c;
  rep.witness["cheeger_cut"] = cut.to_json();
  if (opt.hypothesis == HypothesisCheck::assume) {
    rep.hypothesis_checked = false;
  } else {
    std::vector<int> verts(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) verts[static_cast<std::size_t>(v)] = v;
    rep.hypothesis_checked =
        detail::hypothesis_probe(g, mu, n, k, verts, opt.hypothesis, opt.seed);
  }
  return rep;
}

/// || Gamma(P_t f) ||_inf <= 12 c / ((1-alpha) t) ||f||_inf^2 for 0 < t <= t0,
/// where c = n/(2(1-alpha)) + K n t0 / alpha.
inline BoundReport check_infnorm_lemma(const WeightedGraph& g, const VertexMeasure& mu,
                                       const VertexFunction& f, Dim n, double k, double alpha,
                                       const std::vector<double>& t_grid, double t0) {
  if (n.infinite) throw domain_error("check_infnorm_lemma: needs a finite dimension");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw domain_error("check_infnorm_lemma: alpha must lie in (0,1)");
  const double c = n.n / (2.0 * (1.0 - alpha)) + (k > 0.0 ? k * n.n * t0 / alpha : 0.0);
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, std::abs(v));

  const auto spec = spectrum(g, mu);
  BoundReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= t0)) continue;
    const Eigen::VectorXd ptf = spec.semigroup_apply(g, mu, f, t);
    VertexFunction pt(ptf.data(), ptf.data() + ptf.size());
    double lhs = 0.0;
    for (int x = 0; x < g.num_vertices(); ++x) lhs = std::max(lhs, gamma(g, mu, pt, x));
    const double rhs = 12.0 * c / ((1.0 - alpha) * t) * fmax * fmax;
    if (rhs - lhs < rep.margin) {
      rep.margin = rhs - lhs;
      rep.lhs = lhs;
      rep.rhs = rhs;
      rep.witness["t"] = t;
    }
  }
  rep.witness["c"] = c;
  return rep;
}

/// || f - P_t f ||_1 <= 8 sqrt(3c/(1-alpha)) || |grad f| ||_1 sqrt(t), with
/// |grad f| = sqrt(Gamma(f)) and mu-weighted 1-norms.
inline BoundReport check_l1_lemma(const WeightedGraph& g, const VertexMeasure& mu,
                                  const VertexFunction& f, Dim n, double k, double alpha,
                                  const std::vector<double>& t_grid, double t0) {
  if (n.infinite) throw domain_error("check_l1_lemma: needs a finite dimension");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw domain_error("check_l1_lemma: alpha must lie in (0,1)");
  const double c = n.n / (2.0 * (1.0 - alpha)) + (k > 0.0 ? k * n.n * t0 / alpha : 0.0);
  double grad_norm1 = 0.0;
  for (int x = 0; x < g.num_vertices(); ++x)
    grad_norm1 += mu[x] * std::sqrt(std::max(0.0, gamma(g, mu, f, x)));

  const auto spec = spectrum(g, mu);
  BoundReport rep;
  rep.margin = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t > 0.0 && t <= t0)) continue;
    const Eigen::VectorXd ptf = spec.semigroup_apply(g, mu, f, t);
    double lhs = 0.0;
    for (int x = 0; x < g.num_vertices(); ++x)
      lhs += mu[x] * std::abs(f[static_cast<std::size_t>(x)] - ptf(x));
    const double rhs = 8.0 * std::sqrt(3.0 * c / (1.0 - alpha)) * grad_norm1 * std::sqrt(t);
    if (rhs - lhs < rep.margin) {
      rep.margin = rhs - lhs;
      rep.lhs = lhs;
      rep.rhs = rhs;
      rep.witness["t"] = t;
    }
  }
  rep.witness["c"] = c;
  return rep;
}

// ---------------------------------------------------------------------------
// heat kernel bounds, volume growth, doubling and Poincare constants
// ---------------------------------------------------------------------------

struct HeatKernelBoundConstants {
  double c_lower = 0.0;   // C  in C t^{-n} exp(-C' d^2/(t-1)) <= P_t(x,y)
  double c_prime = 0.0;   // C'
  double c_upper = 0.0;   // C'' in P_t(x,y) <= C'' mu(y) / vol(B(x, sqrt t))
  double n = 0.0;

  ojson to_json() const {
    ojson j;
    j["C"] = c_lower;
    j["C_prime"] = c_prime;
    j["C_upper"] = c_upper;
    j["n"] = n;
    return j;
  }
};

struct HeatKernelFitReport {
  HeatKernelBoundConstants constants;
  double slack = 0.05;  // fitted constants are relaxed by this relative margin
  double min_upper_margin = std::numeric_limits<double>::infinity();
  double min_lower_margin = std::numeric_limits<double>::infinity();
  double max_volume_growth = 0.0;  // max vol(B(x, sqrt t)) / (mu(x) (C''/C) t^n)
  bool passed = false;

  ojson to_json() const {
    ojson j;
    j["constants"] = constants.to_json();
    j["slack"] = slack;
    j["min_upper_margin"] = min_upper_margin;
    j["min_lower_margin"] = min_lower_margin;
    j["max_volume_growth"] = max_volume_growth;
    j["passed"] = passed;
    return j;
  }
};

/// Fit mode: finds the smallest C'' and, on a grid of C' values, the largest
/// C making the two-sided bound hold on the sampled pairs, then relaxes both
/// by `slack`.  The theorem only asserts existence of constants; the fitted
/// values are empirical.
inline HeatKernelBoundConstants fit_heat_kernel_bounds(
    const WeightedGraph& g, const VertexMeasure& mu, double n,
    const std::vector<std::pair<int, int>>& pairs, const std::vector<double>& t_grid,
    double slack = 0.05, const std::vector<double>& c_prime_grid = {0.5, 1.0, 2.0, 4.0, 8.0}) {
  const auto spec = spectrum(g, mu);
  const auto dist_cache = [&] {
    std::vector<std::vector<int>> d;
    d.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
      (void)y;
      d.push_back(g.hop_distances(x));
    }
    return d;
  }();

  HeatKernelBoundConstants best;
  best.n = n;
  double c_upper = 0.0;
  double best_c = -std::numeric_limits<double>::infinity();
  double best_cp = c_prime_grid.front();
  for (double cp : c_prime_grid) {
    double c_low = std::numeric_limits<double>::infinity();
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto [x, y] = pairs[pi];
      const double d = dist_cache[pi][static_cast<std::size_t>(y)];
      for (double t : t_grid) {
        if (!(t > 1.0)) continue;
        const double pt = spec.heat_kernel(t, x, y);
        c_low = std::min(c_low, pt * std::pow(t, n) * std::exp(cp * d * d / (t - 1.0)));
      }
    }
    if (c_low > best_c) {
      best_c = c_low;
      best_cp = cp;
    }
  }
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    const auto [x, y] = pairs[pi];
    for (double t : t_grid) {
      if (!(t > 1.0)) continue;
      const double pt = spec.heat_kernel(t, x, y);
      const double vol = mu.volume(g.ball(x, std::sqrt(t)));
      c_upper = std::max(c_upper, pt * vol / mu[y]);
    }
  }
  best.c_lower = best_c * (1.0 - slack);
  best.c_prime = best_cp;
  best.c_upper = c_upper * (1.0 + slack);
  return best;
}

/// Re-verifies fitted (or supplied) constants on a sample of pairs, and
/// checks the polynomial-growth consequence vol(B(x,sqrt t)) <= (C''/C) mu(x) t^n.
inline HeatKernelFitReport verify_heat_kernel_bounds(
    const WeightedGraph& g, const VertexMeasure& mu, const HeatKernelBoundConstants& constants,
    const std::vector<std::pair<int, int>>& pairs, const std::vector<double>& t_grid) {
  const auto spec = spectrum(g, mu);
  HeatKernelFitReport rep;
  rep.constants = constants;
  for (const auto& [x, y] : pairs) {
    const auto dist = g.hop_distances(x);
    const double d = dist[static_cast<std::size_t>(y)];
    for (double t : t_grid) {
      if (!(t > 1.0)) throw domain_error("verify_heat_kernel_bounds: needs t > 1");
      const double pt = spec.heat_kernel(t, x, y);
      const double vol = mu.volume(g.ball(x, std::sqrt(t)));
      const double lower =
          constants.c_lower * std::pow(t, -constants.n) * std::exp(-constants.c_prime * d * d /
                                                                   (t - 1.0));
      const double upper = constants.c_upper * mu[y] / vol;
      rep.min_lower_margin = std::min(rep.min_lower_margin, pt - lower);
      rep.min_upper_margin = std::min(rep.min_upper_margin, upper - pt);
      // growth: vol(B(x, sqrt t)) <= (C''/C) mu(x) t^n
      const double growth_cap =
          constants.c_upper / constants.c_lower * mu[x] * std::pow(t, constants.n);
      rep.max_volume_growth = std::max(rep.max_volume_growth, vol / growth_cap);
    }
  }
  rep.passed = rep.min_lower_margin >= -1e-12 && rep.min_upper_margin >= -1e-12 &&
               rep.max_volume_growth <= 1.0 + 1e-12;
  return rep;
}

/// max over x and r in the grid of vol(B(x,2r)) / vol(B(x,r)).
inline double volume_doubling_constant(const WeightedGraph& g, const VertexMeasure& mu,
                                       const std::vector<double>& r_grid) {
  if (g.empty()) throw domain_error("volume_doubling_constant: empty graph");
  double worst = 0.0;
  for (int x = 0; x < g.num_vertices(); ++x)
    for (double r : r_grid) {
      const double v1 = mu.volume(g.ball(x, r));
      const double v2 = mu.volume(g.ball(x, 2.0 * r));
      if (v1 <= 0.0) throw domain_error("volume_doubling_constant: empty ball");
      worst = std::max(worst, v2 / v1);
    }
  return worst;
}

/// Optimal constant in
///   sum_{B(x0,r)} mu (f - f_B)^2 <= C r^2 sum_{x,y in B(x0,2r)} w_xy (f(y)-f(x))^2
/// as the largest generalized Rayleigh quotient of the centered quadratic
/// form against the r^2-scaled Dirichlet form of the induced 2r-ball.
inline double poincare_constant(const WeightedGraph& g, const VertexMeasure& mu, int x0,
                                double r) {
  if (!g.symmetric()) throw domain_error("poincare_constant: requires symmetric weights");
  const auto b1 = g.ball(x0, r);
  const auto b2 = g.ball(x0, 2.0 * r);
  if (b1.empty() || b2.empty()) throw domain_error("poincare_constant: empty ball");
  const auto sub = induced_subgraph(g, b2);
  if (!detail::graph_connected(sub.graph))
    throw domain_error("poincare_constant: induced 2r-ball disconnected (constant is infinite)");
  const int n2 = static_cast<int>(b2.size());

  // numerator form: sum_{B1} mu f^2 - (sum_{B1} mu f)^2 / vol(B1)
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n2, n2);
  Eigen::VectorXd mvec = Eigen::VectorXd::Zero(n2);
  double vol1 = 0.0;
  for (int v : b1) {
    const int lv = sub.global_to_local[static_cast<std::size_t>(v)];
    a(lv, lv) += mu[v];
    mvec(lv) = mu[v];
    vol1 += mu[v];
  }
  a -= mvec * mvec.transpose() / vol1;

  // denominator: r^2 * ordered-pair Dirichlet sum over the induced 2r-ball
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n2, n2);
  for (int lv = 0; lv < n2; ++lv)
    for (const Edge& e : sub.graph.neighbors(lv)) {
      b(lv, lv) += e.weight;
      b(lv, e.to) -= e.weight;
    }
  b = (b + b.transpose()).eval();  // ordered pairs count each edge twice
  b *= r * r;

  // restrict to the complement of constants (the common null direction)
  Eigen::MatrixXd p(n2, n2 - 1);
  p.setZero();
  for (int k = 1; k < n2; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) p(i, k - 1) = 1.0 / norm;
    p(k, k - 1) = -static_cast<double>(k) / norm;
  }
  Eigen::MatrixXd ap = p.transpose() * a * p;
  Eigen::MatrixXd bp = p.transpose() * b * p;
  ap = 0.5 * (ap + ap.transpose()).eval();
  bp = 0.5 * (bp + bp.transpose()).eval();
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ap, bp);
  if (es.info() != Eigen::Success) throw domain_error("poincare_constant: eigensolve failed");
  return es.eigenvalues().maxCoeff();
}

}  // namespace graphcurv
