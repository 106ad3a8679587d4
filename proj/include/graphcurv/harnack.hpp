#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <graphcurv/heat.hpp>

namespace graphcurv {

// ---------------------------------------------------------------------------
// space-time (Agmon-type) distance
// ---------------------------------------------------------------------------

struct AgmonQuery {
  int x = 0, y = 0;
  double t1 = 0.0, t2 = 1.0;
  int x0 = -1;  // ball center; -1 means unrestricted
  double radius = std::numeric_limits<double>::infinity();
  double alpha = 0.0;
  const Potential* q = nullptr;
  int max_path_length = -1;  // -1: max(4 d(x,y), 16)
};

struct AgmonResult {
  double rho = 0.0;
  std::vector<int> path;  // a path realizing the minimum
  int length = 0;
  bool cap_exceeded = false;
  bool closed_form = false;

  ojson to_json() const {
    ojson j;
    j["rho"] = rho;
    j["path"] = path;
    j["length"] = length;
    j["cap_exceeded"] = cap_exceeded;
    j["closed_form"] = closed_form;
    return j;
  }
};

namespace detail {

// exact for piecewise-linear integrands: composite Simpson split at the grid
// knots of q
template <typename F>
inline double simpson_on_knots(const std::vector<double>& knots, double a, double b, F&& f) {
  if (b <= a) return 0.0;
  double total = 0.0;
  double lo = a;
  auto it = std::upper_bound(knots.begin(), knots.end(), a);
  while (lo < b) {
    double hi = b;
    if (it != knots.end() && *it < b) {
      hi = *it;
      ++it;
    }
    const double mid = 0.5 * (lo + hi);
    total += (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
    lo = hi;
  }
  return total;
}

inline double integral_q(const Potential& q, int x, double a, double b) {
  return simpson_on_knots(q.times, a, b, [&](double t) { return q.at(x, t); });
}

inline double integral_q_weighted(const Potential& q, int x, double a, double b, double t0) {
  return simpson_on_knots(q.times, a, b,
                          [&](double t) { return (t - t0) * (t - t0) * q.at(x, t); });
}

}  // namespace detail

/// The path functional rho(x,y,T1,T2): over paths p_0..p_k inside B(x0,R)
/// (x to y) with the even time subdivision t_i = T1 + i (T2-T1)/k,
///   2 mu_max k^2 / (w_min (1-alpha)(T2-T1))
///   + sum_i [ int q(p_i) dt + k/(T2-T1)^2 int (t-t_i)^2 (q(p_i)-q(p_{i+1})) dt ].
/// For q = none the kinetic term alone decides and the infimum is the closed
/// form with k = d(x,y); for general q a layered shortest-path pass runs per
/// path length up to the cap.
inline AgmonResult agmon_distance(const WeightedGraph& g, const VertexMeasure& mu,
                                  const AgmonQuery& query) {
  if (!(query.t1 < query.t2)) throw domain_error("agmon_distance: need T1 < T2");
  if (!(query.alpha >= 0.0 && query.alpha < 1.0))
    throw domain_error("agmon_distance: alpha must lie in [0,1)");
  g.check_vertex(query.x);
  g.check_vertex(query.y);

  std::vector<char> allowed(static_cast<std::size_t>(g.num_vertices()), 1);
  if (query.x0 >= 0 && std::isfinite(query.radius)) {
    std::fill(allowed.begin(), allowed.end(), 0);
    for (int v : g.ball(query.x0, query.radius)) allowed[static_cast<std::size_t>(v)] = 1;
    if (!allowed[static_cast<std::size_t>(query.x)] ||
        !allowed[static_cast<std::size_t>(query.y)])
      throw domain_error("agmon_distance: endpoint outside the ball");
  }

  // restricted BFS from x
  std::vector<int> dist(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()), -1);
  {
    std::vector<int> queue{query.x};
    dist[static_cast<std::size_t>(query.x)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (const Edge& e : g.neighbors(v))
        if (allowed[static_cast<std::size_t>(e.to)] && dist[static_cast<std::size_t>(e.to)] < 0) {
          dist[static_cast<std::size_t>(e.to)] = dist[static_cast<std::size_t>(v)] + 1;
          parent[static_cast<std::size_t>(e.to)] = v;
          queue.push_back(e.to);
        }
    }
  }
  const int d = dist[static_cast<std::size_t>(query.y)];
  if (d < 0) throw domain_error("agmon_distance: unreachable within the ball");

  const auto cst = graph_constants(g, mu);
  const double dt_total = query.t2 - query.t1;
  auto kinetic = [&](int k) {
    return 2.0 * cst.mu_max * static_cast<double>(k) * k /
           (cst.w_min * (1.0 - query.alpha) * dt_total);
  };

  AgmonResult out;
  if (query.x == query.y) {
    out.rho = 0.0;
    out.path = {query.x};
    out.length = 0;
    out.closed_form = true;
    return out;
  }

  if (!query.q) {
    out.rho = kinetic(d);
    out.length = d;
    out.closed_form = true;
    for (int v = query.y; v >= 0; v = parent[static_cast<std::size_t>(v)]) {
      out.path.push_back(v);
      if (v == query.x) break;
    }
    std::reverse(out.path.begin(), out.path.end());
    return out;
  }

  const int cap = query.max_path_length > 0 ? query.max_path_length : std::max(4 * d, 16);
  if (cap < d) {
    out.rho = std::numeric_limits<double>::infinity();
    out.cap_exceeded = true;
    return out;
  }

  const Potential& q = *query.q;
  double best = std::numeric_limits<double>::infinity();
  int best_k = -1;
  std::vector<int> best_path;
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = d; k <= cap; ++k) {
    const double step = dt_total / k;
    // per-hop integrals: a(i,v) = int q(v) over [t_i, t_{i+1}],
    // jj(i,v) = int (t - t_i)^2 q(v) over the same interval
    const int n = g.num_vertices();
    std::vector<double> cost(static_cast<std::size_t>(n), inf);
    std::vector<std::vector<int>> back(static_cast<std::size_t>(k),
                                       std::vector<int>(static_cast<std::size_t>(n), -1));
    cost[static_cast<std::size_t>(query.x)] = 0.0;
    std::vector<double> avals(static_cast<std::size_t>(n)), jvals(static_cast<std::size_t>(n));
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int i = 0; i < k; ++i) {
      const double ta = query.t1 + i * step;
      const double tb = query.t1 + (i + 1) * step;
      for (int v = 0; v < n; ++v)
        if (allowed[static_cast<std::size_t>(v)]) {
          avals[static_cast<std::size_t>(v)] = detail::integral_q(q, v, ta, tb);
          jvals[static_cast<std::size_t>(v)] = detail::integral_q_weighted(q, v, ta, tb, ta);
        }
      std::fill(next.begin(), next.end(), inf);
      const double jscale = static_cast<double>(k) / (dt_total * dt_total);
      for (int v = 0; v < n; ++v) {
        if (!allowed[static_cast<std::size_t>(v)] || cost[static_cast<std::size_t>(v)] >= inf)
          continue;
        const double base = cost[static_cast<std::size_t>(v)] +
                            avals[static_cast<std::size_t>(v)] +
                            jscale * jvals[static_cast<std::size_t>(v)];
        for (const Edge& e : g.neighbors(v)) {
          if (!allowed[static_cast<std::size_t>(e.to)]) continue;
          const double c = base - jscale * jvals[static_cast<std::size_t>(e.to)];
          if (c < next[static_cast<std::size_t>(e.to)]) {
            next[static_cast<std::size_t>(e.to)] = c;
            back[static_cast<std::size_t>(i)][static_cast<std::size_t>(e.to)] = v;
          }
        }
      }
      cost.swap(next);
    }
    const double total = cost[static_cast<std::size_t>(query.y)] + kinetic(k);
    if (cost[static_cast<std::size_t>(query.y)] < inf && total < best) {
      best = total;
      best_k = k;
      best_path.assign(static_cast<std::size_t>(k) + 1, -1);
      best_path[static_cast<std::size_t>(k)] = query.y;
      for (int i = k - 1; i >= 0; --i)
        best_path[static_cast<std::size_t>(i)] =
            back[static_cast<std::size_t>(i)]
                [static_cast<std::size_t>(best_path[static_cast<std::size_t>(i + 1)])];
    }
  }
  out.rho = best;
  out.length = best_k;
  out.path = best_path;
  out.cap_exceeded = best_k == cap;
  return out;
}

// ---------------------------------------------------------------------------
// Harnack inequality
// ---------------------------------------------------------------------------

struct HarnackConstants {
  double c1 = 0.0;
  double c2 = 0.0;
};

struct HarnackPair {
  int x = 0, y = 0;
  double t1 = 0.0, t2 = 0.0;
};

struct HarnackReport {
  bool hypothesis_checked = true;
  bool hypothesis_ok = true;
  // log-margins of sqrt(u)(x,T1) <= sqrt(u)(y,T2) (T2/T1)^c1 exp(c2 dT + rho)
  double min_log_margin = std::numeric_limits<double>::infinity();
  double min_log_margin_u = std::numeric_limits<double>::infinity();  // squared form
  std::vector<ojson> rows;

  ojson to_json() const {
    ojson j;
    j["hypothesis_checked"] = hypothesis_checked;
    j["hypothesis_ok"] = hypothesis_ok;
    j["min_log_margin"] = min_log_margin;
    j["min_log_margin_u"] = min_log_margin_u;
    j["pairs"] = rows;
    return j;
  }
};

/// Verifies the Harnack conclusion for f = sqrt(u) against the space-time
/// distance: the hypothesis sweep checks (1-a)Gamma(f)/f^2 - dt f/f - q/2 <=
/// c1/t + c2 at every grid point, and each queried pair is checked in log
/// space.  The u-level (squared) margin doubles the f-level one.
inline HarnackReport verify_harnack(const WeightedGraph& g, const VertexMeasure& mu,
                                    const HeatSolution& sol, const HarnackConstants& constants,
                                    const std::vector<HarnackPair>& pairs, double alpha = 0.0,
                                    const Potential* q = nullptr, int x0 = -1,
                                    double radius = std::numeric_limits<double>::infinity()) {
  HarnackReport rep;
  // hypothesis sweep over the grid (t > 0), restricted to the ball if given
  std::vector<int> sweep;
  if (x0 >= 0 && std::isfinite(radius)) {
    sweep = g.ball(x0, radius);
  } else {
    sweep.resize(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) sweep[static_cast<std::size_t>(v)] = v;
  }
  for (int ti = 0; ti < static_cast<int>(sol.times.size()); ++ti) {
    const double t = sol.times[static_cast<std::size_t>(ti)];
    if (!(t > 0.0)) continue;
    for (int x : sweep) {
      const double lhs = li_yau_f(g, mu, sol, x, ti, alpha);
      if (lhs > constants.c1 / t + constants.c2 + 1e-9) rep.hypothesis_ok = false;
    }
  }

  // the f-level potential is q/2
  Potential half_q;
  if (q) {
    half_q = *q;
    half_q.values *= 0.5;
    half_q.theta *= 0.5;
    half_q.eta *= 0.5;  // Gamma scales quadratically: Gamma(q/2) = Gamma(q)/4 <= (eta/2)^2
  }

  for (const auto& pr : pairs) {
    AgmonQuery aq;
    aq.x = pr.x;
    aq.y = pr.y;
    aq.t1 = pr.t1;
    aq.t2 = pr.t2;
    aq.alpha = alpha;
    aq.x0 = x0;
    aq.radius = radius;
    aq.q = q ? &half_q : nullptr;
    const auto agmon = agmon_distance(g, mu, aq);

    const int i1 = sol.time_index(pr.t1);
    const int i2 = sol.time_index(pr.t2);
    const double fx = 0.5 * std::log(sol.values(pr.x, i1));
    const double fy = 0.5 * std::log(sol.values(pr.y, i2));
    const double log_margin = constants.c1 * std::log(pr.t2 / pr.t1) +
                              constants.c2 * (pr.t2 - pr.t1) + agmon.rho + fy - fx;
    rep.min_log_margin = std::min(rep.min_log_margin, log_margin);
    rep.min_log_margin_u = std::min(rep.min_log_margin_u, 2.0 * log_margin);
    ojson row;
    row["x"] = pr.x;
    row["y"] = pr.y;
    row["t1"] = pr.t1;
    row["t2"] = pr.t2;
    row["rho"] = agmon.rho;
    row["log_margin"] = log_margin;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// the averaging lemma behind the Harnack chaining
// ---------------------------------------------------------------------------

namespace detail {

// cumulative integral of uniformly sampled values by local quadratic
// interpolation (O(h^4) per interval)
inline std::vector<double> cumulative_integral(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    double seg;
    if (n == 2)
      seg = 0.5 * h * (y[j] + y[j + 1]);
    else if (j == 0)
      seg = h * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0;
    else
      seg = h * (-y[j - 1] + 8.0 * y[j] + 5.0 * y[j + 1]) / 12.0;
    c[j + 1] = c[j] + seg;
  }
  return c;
}

}  // namespace detail

/// For any c > 0 and sampled psi, q1, q2 on [T1,T2]:
///   min_s [ psi(s) - (1/c) int_s^{T2} psi^2 + int_{T1}^s q1 + int_s^{T2} q2 ]
///   <= c/(T2-T1) + int q1 + (T2-T1)^{-2} int (t-T1)^2 (q2-q1).
/// The minimum is taken over the sample grid; margins beyond quadrature
/// accuracy are the caller's business.
inline BoundReport check_averaging_lemma(const std::vector<double>& psi,
                                         const std::vector<double>& q1,
                                         const std::vector<double>& q2, double t1, double t2,
                                         double c) {
  if (!(c > 0.0)) throw domain_error("check_averaging_lemma: c must be positive");
  const std::size_t n = psi.size();
  if (n < 64 || q1.size() != n || q2.size() != n)
    throw domain_error("check_averaging_lemma: need >= 64 aligned samples");
  if (!(t2 > t1)) throw domain_error("check_averaging_lemma: need T1 < T2");
  const double h = (t2 - t1) / static_cast<double>(n - 1);

  std::vector<double> psi2(n), w2diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    psi2[i] = psi[i] * psi[i];
    const double t = t1 + h * static_cast<double>(i);
    w2diff[i] = (t - t1) * (t - t1) * (q2[i] - q1[i]);
  }
  const auto cum_psi2 = detail::cumulative_integral(psi2, h);
  const auto cum_q1 = detail::cumulative_integral(q1, h);
  const auto cum_q2 = detail::cumulative_integral(q2, h);
  const auto cum_w2 = detail::cumulative_integral(w2diff, h);

  double lhs = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = psi[i] - (cum_psi2[n - 1] - cum_psi2[i]) / c + cum_q1[i] +
                     (cum_q2[n - 1] - cum_q2[i]);
    if (v < lhs) {
      lhs = v;
      arg = i;
    }
  }
  const double rhs =
      c / (t2 - t1) + cum_q1[n - 1] + cum_w2[n - 1] / ((t2 - t1) * (t2 - t1));
  BoundReport rep = BoundReport::of(lhs, rhs);
  rep.witness["argmin_s"] = t1 + h * static_cast<double>(arg);
  return rep;
}

// ---------------------------------------------------------------------------
// empirical Harnack property on a parabolic cylinder
// ---------------------------------------------------------------------------

struct HPropertyParams {
  double theta1 = 1.0, theta2 = 2.0, theta3 = 3.0, theta4 = 4.0;
  double radius = 1.0;
  double start = 0.0;  // the s in [s, s + theta4 R^2]
  int x0 = 0;
  int time_samples = 24;  // per window
};

struct HPropertyReport {
  double max_ratio = 0.0;  // empirical lower estimate of the best C0
  int trials = 0;
  ojson to_json() const {
    ojson j;
    j["max_ratio"] = max_ratio;
    j["trials"] = trials;
    return j;
  }
};

/// Empirical sup_{Q-} u / inf_{Q+} u over random positive initial data.  The
/// heat flow runs on the induced subgraph of B(x0,2R) with its own Laplacian,
/// i.e. zero-flux dynamics at the spatial boundary of the cylinder.
inline HPropertyReport verify_h_property(const WeightedGraph& g, const VertexMeasure& mu,
                                         const HPropertyParams& p, int trials,
                                         std::uint64_t seed) {
  if (!(0 < p.theta1 && p.theta1 < p.theta2 && p.theta2 < p.theta3 && p.theta3 < p.theta4))
    throw domain_error("verify_h_property: need 0 < theta1 < theta2 < theta3 < theta4");
  const auto ball2 = g.ball(p.x0, 2.0 * p.radius);
  const auto sub = induced_subgraph(g, ball2);
  const auto sub_mu = restrict_measure(mu, ball2);
  const double r2 = p.radius * p.radius;

  // sample grid covering both windows (times relative to s)
  std::vector<double> times;
  for (int i = 0; i < p.time_samples; ++i)
    times.push_back(r2 * (p.theta1 + (p.theta2 - p.theta1) * i / (p.time_samples - 1)));
  for (int i = 0; i < p.time_samples; ++i)
    times.push_back(r2 * (p.theta3 + (p.theta4 - p.theta3) * i / (p.time_samples - 1)));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<int> inner;  // B(x0, R) in local indices
  for (int v : g.ball(p.x0, p.radius))
    inner.push_back(sub.global_to_local[static_cast<std::size_t>(v)]);

  const double split = r2 * 0.5 * (p.theta2 + p.theta3);
  HPropertyReport rep;
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, {0x4a11u, static_cast<std::uint64_t>(trial)});
    VertexFunction u0(static_cast<std::size_t>(sub.graph.num_vertices()));
    for (auto& v : u0) v = rng.lognormal(1.5);
    const auto sol = heat_semigroup(sub.graph, sub_mu, u0, times);
    double sup_minus = 0.0;
    double inf_plus = std::numeric_limits<double>::infinity();
    for (int ti = 0; ti < static_cast<int>(times.size()); ++ti) {
      const bool minus_window = times[static_cast<std::size_t>(ti)] < split;
      for (int lv : inner) {
        const double v = sol.values(lv, ti);
        if (minus_window)
          sup_minus = std::max(sup_minus, v);
        else
          inf_plus = std::min(inf_plus, v);
      }
    }
    if (!(inf_plus > 0.0)) throw domain_error("verify_h_property: degenerate solution");
    rep.max_ratio = std::max(rep.max_ratio, sup_minus / inf_plus);
  }
  return rep;
}

}  // namespace graphcurv
