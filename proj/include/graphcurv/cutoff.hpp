#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <graphcurv/graph.hpp>
#include <graphcurv/operators.hpp>
#include <graphcurv/report.hpp>

namespace graphcurv {

struct CutoffFunction {
  enum class Kind { distance, zd_strong, custom };

  std::vector<double> phi;   // one value per vertex, in [0,1]
  int center = 0;
  double radius = 0.0;       // the R parameter
  std::vector<int> support;  // {x : phi(x) > 0}, sorted
  Kind kind = Kind::custom;
  double strength_c = 0.0;   // intended c for the strong dichotomy, when known

  void rebuild_support() {
    support.clear();
    for (int v = 0; v < static_cast<int>(phi.size()); ++v)
      if (phi[static_cast<std::size_t>(v)] > 0.0) support.push_back(v);
  }
};

/// Linear-ramp cut-off: 1 on B(x0,R), (2R-d)/R on the annulus, 0 outside
/// B(x0,2R).
inline CutoffFunction make_distance_cutoff(const WeightedGraph& g, int x0, double r) {
  if (r < 1.0) throw domain_error("make_distance_cutoff: R must be >= 1");
  g.check_vertex(x0);
  CutoffFunction out;
  out.center = x0;
  out.radius = r;
  out.kind = CutoffFunction::Kind::distance;
  out.phi.assign(static_cast<std::size_t>(g.num_vertices()), 0.0);
  const auto dist = g.hop_distances(x0);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const int d = dist[static_cast<std::size_t>(v)];
    if (d < 0) continue;
    const double dd = static_cast<double>(d);
    if (dd < r)
      out.phi[static_cast<std::size_t>(v)] = 1.0;
    else if (dd <= 2.0 * r)
      out.phi[static_cast<std::size_t>(v)] = (2.0 * r - dd) / r;
  }
  out.rebuild_support();
  return out;
}

/// Quartic lattice cut-off phi(x) = (max{0, (R^2-|x|^2)/R^2})^2 centered at
/// the origin of the (Z_m)^d torus (vertex 0, make_torus indexing).  The
/// support is the Euclidean ball |x| < R, inside the hop-ball of radius
/// sqrt(d) R.  Requires m > 2R+2 so the ball does not wrap.
inline CutoffFunction make_zd_strong_cutoff(int d, double r, int m) {
  if (d < 1 || r <= 0.0) throw domain_error("make_zd_strong_cutoff: bad parameters");
  if (static_cast<double>(m) <= 2.0 * r + 2.0)
    throw domain_error("make_zd_strong_cutoff: torus wraps (need m > 2R+2)");
  std::int64_t n64 = 1;
  for (int i = 0; i < d; ++i) n64 *= m;
  if (n64 > (1 << 24)) throw domain_error("make_zd_strong_cutoff: torus too large");
  const int n = static_cast<int>(n64);

  CutoffFunction out;
  out.center = 0;
  out.radius = r;
  out.kind = CutoffFunction::Kind::zd_strong;
  out.strength_c = 100.0;
  out.phi.assign(static_cast<std::size_t>(n), 0.0);
  const double r2 = r * r;
  for (int v = 0; v < n; ++v) {
    int rest = v;
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i) {
      int c = rest % m;
      rest /= m;
      if (c > m / 2) c -= m;  // centered representative
      norm2 += static_cast<double>(c) * c;
    }
    if (norm2 < r2) {
      const double t = (r2 - norm2) / r2;
      out.phi[static_cast<std::size_t>(v)] = t * t;
    }
  }
  out.rebuild_support();
  return out;
}

/// Per-vertex outcome of the strong cut-off dichotomy.
struct StrongCutoffReport {
  bool passed = true;
  int small_clause = 0;      // vertices settled by the small-value clause
  int operator_clause = 0;   // vertices settled by the Laplacian/Gamma clause
  int fail_vertex = -1;
  double min_margin = std::numeric_limits<double>::infinity();  // over clause-2 checks

  ojson to_json() const {
    ojson j;
    j["passed"] = passed;
    j["small_clause"] = small_clause;
    j["operator_clause"] = operator_clause;
    j["fail_vertex"] = fail_vertex;
    j["min_margin"] = min_margin;
    return j;
  }
};

/// Checks that phi is a (c,R)-strong cut-off: at every support vertex either
/// phi(x) < c(1+R sqrt(K))/(2R^2), or phi does not vanish on the closed
/// neighborhood and
///   phi^2 Delta(1/phi) < D_mu c (1+R sqrt(K)) / R^2   and
///   phi^3 Gamma(1/phi)  < D_mu c / R^2.
inline StrongCutoffReport verify_strong_cutoff(const WeightedGraph& g, const VertexMeasure& mu,
                                               const CutoffFunction& cutoff, double c, double r,
                                               double k) {
  if (static_cast<int>(cutoff.phi.size()) != g.num_vertices())
    throw domain_error("verify_strong_cutoff: cutoff size mismatch");
  if (cutoff.phi[static_cast<std::size_t>(cutoff.center)] != 1.0)
    throw domain_error("verify_strong_cutoff: phi(x0) must equal 1");
  for (double v : cutoff.phi)
    if (v < 0.0 || v > 1.0) throw domain_error("verify_strong_cutoff: phi must map into [0,1]");
  if (k < 0.0) throw domain_error("verify_strong_cutoff: K must be >= 0");

  const auto cst = graph_constants(g, mu);
  const double small_thresh = c * (1.0 + r * std::sqrt(k)) / (2.0 * r * r);
  const double lap_thresh = cst.d_mu * c * (1.0 + r * std::sqrt(k)) / (r * r);
  const double gamma_thresh = cst.d_mu * c / (r * r);

  StrongCutoffReport rep;
  for (int x : cutoff.support) {
    const double px = cutoff.phi[static_cast<std::size_t>(x)];
    if (px < small_thresh) {
      ++rep.small_clause;
      continue;
    }
    bool vanishes = false;
    for (const Edge& e : g.neighbors(x))
      if (!(cutoff.phi[static_cast<std::size_t>(e.to)] > 0.0)) vanishes = true;
    if (!vanishes) {
      // phi^2 Delta(1/phi) and phi^3 Gamma(1/phi) at x
      double lap = 0.0, gam = 0.0;
      const double inv_px = 1.0 / px;
      for (const Edge& e : g.neighbors(x)) {
        const double diff = 1.0 / cutoff.phi[static_cast<std::size_t>(e.to)] - inv_px;
        lap += e.weight * diff;
        gam += e.weight * diff * diff;
      }
      lap /= mu[x];
      gam /= 2.0 * mu[x];
      const double lap_val = px * px * lap;
      const double gam_val = px * px * px * gam;
      if (lap_val < lap_thresh && gam_val < gamma_thresh) {
        ++rep.operator_clause;
        rep.min_margin = std::min({rep.min_margin, lap_thresh - lap_val, gamma_thresh - gam_val});
        continue;
      }
    }
    rep.passed = false;
    if (rep.fail_vertex < 0) rep.fail_vertex = x;
  }
  return rep;
}

/// Closed-form constant of the strong-ball gradient estimate,
///   C(alpha,n,K,theta,eta,eps) = sqrt( n theta/(1-alpha)
///     + K^2 n^2 / ((1-eps) alpha^2)
///     + ( n (1+alpha D_w) eta / ((1-alpha) alpha^{1/2} eps^{1/4}) )^{4/3} ),
/// plus the full per-time bound it enters.
struct StrongBoundConstants {
  double alpha = 0.5, epsilon = 0.5;
  double n = 0.0;
  double k = 0.0, theta = 0.0, eta = 0.0;
  double d_mu = 0.0, d_w = 0.0;
  double c = 100.0;  // cutoff strength
  double value = 0.0;

  static StrongBoundConstants make(double alpha, double epsilon, double n, double k,
                                   double theta, double eta, double d_mu, double d_w,
                                   double c) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw domain_error("alpha must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw domain_error("epsilon must lie in (0,1)");
    StrongBoundConstants s{alpha, epsilon, n, k, theta, eta, d_mu, d_w, c, 0.0};
    s.value = s.recompute();
    return s;
  }

  double recompute() const {
    const double term_theta = n * theta / (1.0 - alpha);
    const double term_k = k * k * n * n / ((1.0 - epsilon) * alpha * alpha);
    const double term_eta =
        std::pow(n * (1.0 + alpha * d_w) * eta /
                     ((1.0 - alpha) * std::sqrt(alpha) * std::pow(epsilon, 0.25)),
                 4.0 / 3.0);
    return std::sqrt(term_theta + term_k + term_eta);
  }

  /// Full strong-ball bound at time t for cut-off radius R:
  ///   n/(2(1-a)t) + D_mu c n/(2(1-a)R^2) (1 + R sqrt(K) + n(D_w+1)^2/(4a(1-a)))
  ///   + C/2.
  double bound(double t, double r) const {
    const double lead = n / (2.0 * (1.0 - alpha) * t);
    const double mid = d_mu * c * n / (2.0 * (1.0 - alpha) * r * r) *
                       (1.0 + r * std::sqrt(k) +
                        n * (d_w + 1.0) * (d_w + 1.0) / (4.0 * alpha * (1.0 - alpha)));
    return lead + mid + 0.5 * value;
  }

  ojson to_json() const {
    ojson j;
    j["alpha"] = alpha;
    j["epsilon"] = epsilon;
    j["n"] = n;
    j["K"] = k;
    j["theta"] = theta;
    j["eta"] = eta;
    j["d_mu"] = d_mu;
    j["d_w"] = d_w;
    j["c"] = c;
    j["C"] = value;
    return j;
  }
};

}  // namespace graphcurv
