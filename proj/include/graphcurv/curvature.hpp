#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <graphcurv/generators.hpp>
#include <graphcurv/graph.hpp>
#include <graphcurv/operators.hpp>
#include <graphcurv/report.hpp>
#include <graphcurv/rng.hpp>

namespace graphcurv {

/// Dimension parameter n in (0, inf].  Infinity is an explicit state, never a
/// large float.
struct Dim {
  double n = 0.0;
  bool infinite = false;

  static Dim inf() { return {0.0, true}; }
  static Dim finite(double n) {
    if (!(n > 0.0)) throw domain_error("dimension parameter must be positive");
    return {n, false};
  }

  double inv() const { return infinite ? 0.0 : 1.0 / n; }

  std::string str() const { return infinite ? "inf" : std::to_string(n); }

  ojson to_json() const {
    if (infinite) return ojson("inf");
    return ojson(n);
  }
};

enum class CurvCondition { CD, CDE, CDEprime };

inline const char* condition_name(CurvCondition c) {
  switch (c) {
    case CurvCondition::CD: return "cd";
    case CurvCondition::CDE: return "cde";
    case CurvCondition::CDEprime: return "cdeprime";
  }
  return "?";
}

/// Per-vertex curvature optimum: the supremum of K such that the condition
/// holds at the vertex, with the minimizing test function over the 2-ball.
struct CurvatureReport {
  int vertex = -1;
  Dim n;
  CurvCondition condition = CurvCondition::CDE;
  double optimal_k = 0.0;
  std::vector<int> ball;          // 2-ball vertex ids, [0] is the vertex itself
  std::vector<double> witness;    // test function values on `ball`
  std::string method;             // eigensolve | multistart | sampling
  bool boundary_approach = false;
  double witness_slack = 0.0;

  ojson to_json() const {
    ojson j;
    j["vertex"] = vertex;
    j["n"] = n.to_json();
    j["condition"] = condition_name(condition);
    j["optimal_k"] = optimal_k;
    ojson w;
    w["vertices"] = ball;
    w["values"] = witness;
    j["witness"] = std::move(w);
    j["method"] = method;
    j["boundary_approach"] = boundary_approach;
    return j;
  }
};

// ---------------------------------------------------------------------------
// local 2-ball machinery
// ---------------------------------------------------------------------------

namespace detail {

// The curvature forms at x only see function values on the 2-ball of x and
// edges incident to its 1-ball.  This caches that local structure so the
// optimizer's inner loop touches no global state.
struct LocalBall {
  std::vector<int> verts;  // [0] = x, then the 1-sphere, then the 2-sphere
  int b1 = 0;              // 1 + #neighbors
  // per B1-vertex: local adjacency (local index, weight), measure, degree
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> mu;
  std::vector<double> deg;

  int size() const { return static_cast<int>(verts.size()); }

  static LocalBall build(const WeightedGraph& g, const VertexMeasure& measure, int x) {
    g.check_vertex(x);
    LocalBall lb;
    std::vector<int> loc(static_cast<std::size_t>(g.num_vertices()), -1);
    auto intern = [&](int v) {
      if (loc[static_cast<std::size_t>(v)] < 0) {
        loc[static_cast<std::size_t>(v)] = static_cast<int>(lb.verts.size());
        lb.verts.push_back(v);
      }
      return loc[static_cast<std::size_t>(v)];
    };
    intern(x);
    for (const Edge& e : g.neighbors(x)) intern(e.to);
    lb.b1 = static_cast<int>(lb.verts.size());
    for (int i = 1; i < lb.b1; ++i)
      for (const Edge& e : g.neighbors(lb.verts[static_cast<std::size_t>(i)])) intern(e.to);

    lb.adj.resize(static_cast<std::size_t>(lb.b1));
    lb.mu.resize(static_cast<std::size_t>(lb.b1));
    lb.deg.resize(static_cast<std::size_t>(lb.b1));
    for (int i = 0; i < lb.b1; ++i) {
      const int v = lb.verts[static_cast<std::size_t>(i)];
      lb.mu[static_cast<std::size_t>(i)] = measure[v];
      lb.deg[static_cast<std::size_t>(i)] = g.degree(v);
      for (const Edge& e : g.neighbors(v))
        lb.adj[static_cast<std::size_t>(i)].emplace_back(loc[static_cast<std::size_t>(e.to)],
                                                         e.weight);
    }
    return lb;
  }

  double llap(const std::vector<double>& f, int v) const {
    double s = 0.0;
    for (const auto& [u, w] : adj[static_cast<std::size_t>(v)])
      s += w * (f[static_cast<std::size_t>(u)] - f[static_cast<std::size_t>(v)]);
    return s / mu[static_cast<std::size_t>(v)];
  }

  double lgamma(const std::vector<double>& f, const std::vector<double>& h, int v) const {
    double s = 0.0;
    for (const auto& [u, w] : adj[static_cast<std::size_t>(v)])
      s += w * (f[static_cast<std::size_t>(u)] - f[static_cast<std::size_t>(v)]) *
           (h[static_cast<std::size_t>(u)] - h[static_cast<std::size_t>(v)]);
    return s / (2.0 * mu[static_cast<std::size_t>(v)]);
  }

  double lgamma(const std::vector<double>& f, int v) const { return lgamma(f, f, v); }

  struct Forms {
    double d0 = 0.0;    // Delta f (x)
    double g0 = 0.0;    // Gamma f (x)
    double gt2 = 0.0;   // corrected iterated form at x
  };

  // Gamma, Delta and the corrected iterated form at x for a positive local f.
  Forms eval(const std::vector<double>& f, std::vector<double>& dbuf,
             std::vector<double>& gbuf) const {
    Forms out;
    for (int v = 0; v < b1; ++v) {
      dbuf[static_cast<std::size_t>(v)] = llap(f, v);
      gbuf[static_cast<std::size_t>(v)] = lgamma(f, v);
    }
    out.d0 = dbuf[0];
    out.g0 = gbuf[0];
    double lap_gamma = 0.0, cross = 0.0, corr = 0.0;
    const double f0 = f[0], r0 = gbuf[0] / f0;
    for (const auto& [y, w] : adj[0]) {
      lap_gamma += w * (gbuf[static_cast<std::size_t>(y)] - gbuf[0]);
      const double df = f[static_cast<std::size_t>(y)] - f0;
      cross += w * df * (dbuf[static_cast<std::size_t>(y)] - dbuf[0]);
      corr += w * df *
              (gbuf[static_cast<std::size_t>(y)] / f[static_cast<std::size_t>(y)] - r0);
    }
    lap_gamma /= mu[0];
    cross /= 2.0 * mu[0];
    corr /= 2.0 * mu[0];
    out.gt2 = 0.5 * lap_gamma - cross - corr;
    return out;
  }

  double lap_log(const std::vector<double>& f) const {
    double s = 0.0;
    for (const auto& [u, w] : adj[0])
      s += w * (std::log(f[static_cast<std::size_t>(u)]) - std::log(f[0]));
    return s / mu[0];
  }
};

// Objective for the CDE / CDE' optimizers in log coordinates.  The gauge is
// f(x) = 1; coordinates are log f on the punctured 2-ball.  Gradients are
// propagated by hand through the dependency chain
//   u -> f -> {Delta f, Gamma f on B1} -> corrected form -> ratio.
struct CdeObjective {
  const LocalBall& lb;
  Dim n;
  bool prime = false;      // CDE' variant: no sign constraint, log-Laplacian term
  double barrier = 0.0;    // weight of -log(-Delta f(x)); CDE only

  mutable std::vector<double> f, d, g, fbar, dbar, gbar;

  explicit CdeObjective(const LocalBall& ball, Dim dim, bool prime_variant)
      : lb(ball), n(dim), prime(prime_variant) {
    const auto m = static_cast<std::size_t>(lb.size());
    f.assign(m, 1.0);
    d.assign(static_cast<std::size_t>(lb.b1), 0.0);
    g.assign(static_cast<std::size_t>(lb.b1), 0.0);
    fbar.assign(m, 0.0);
    dbar.assign(static_cast<std::size_t>(lb.b1), 0.0);
    gbar.assign(static_cast<std::size_t>(lb.b1), 0.0);
  }

  int dim() const { return lb.size() - 1; }

  void decode(const Eigen::VectorXd& u) const {
    f[0] = 1.0;
    for (int i = 1; i < lb.size(); ++i)
      f[static_cast<std::size_t>(i)] = std::exp(u(i - 1));
  }

  // ratio without the barrier; +inf when inadmissible
  double ratio(const Eigen::VectorXd& u) const {
    decode(u);
    return ratio_of_f();
  }

  double ratio_of_f() const {
    const auto forms = lb.eval(f, d, g);
    if (!(forms.g0 > 0.0)) return std::numeric_limits<double>::infinity();
    if (!prime && !(forms.d0 < 0.0)) return std::numeric_limits<double>::infinity();
    double sq;
    if (prime) {
      const double p = f[0] * lb.lap_log(f);
      sq = p * p;
    } else {
      sq = forms.d0 * forms.d0;
    }
    return (forms.gt2 - n.inv() * sq) / forms.g0;
  }

  // value with barrier, and gradient in log coordinates
  double eval(const Eigen::VectorXd& u, Eigen::VectorXd* grad) const {
    decode(u);
    const auto forms = lb.eval(f, d, g);
    const double g0 = forms.g0, d0 = forms.d0, gt2 = forms.gt2;
    if (!(g0 > 0.0)) return std::numeric_limits<double>::infinity();
    if (!prime && !(d0 < 0.0)) return std::numeric_limits<double>::infinity();

    double lam = 0.0;
    if (prime) lam = lb.lap_log(f);
    const double sq = prime ? lam * lam : d0 * d0;
    const double num = gt2 - n.inv() * sq;
    double value = num / g0;
    if (!prime && barrier > 0.0) value -= barrier * std::log(-d0);
    if (!grad) return value;

    std::fill(fbar.begin(), fbar.end(), 0.0);
    std::fill(dbar.begin(), dbar.end(), 0.0);
    std::fill(gbar.begin(), gbar.end(), 0.0);
    grad->setZero(dim());

    const double nbar = 1.0 / g0;           // d value / d num
    gbar[0] += -num / (g0 * g0);            // d value / d g0 (through the ratio)
    if (!prime) {
      dbar[0] += nbar * (-2.0 * n.inv() * d0);
      if (barrier > 0.0) dbar[0] += -barrier / d0;
    } else {
      // lam depends on log f directly; handled at the end
    }

    // gt2 = lap_gamma/2 - cross - corr
    const double lap_gamma_bar = 0.5 * nbar;
    const double cross_bar = -nbar;
    const double corr_bar = -nbar;
    const double f0 = f[0];
    const double mu0 = lb.mu[0];
    const double r0 = g[0] / f0;
    double sum_w_df = 0.0, sum_w_dd = 0.0, sum_w_dr = 0.0;
    for (const auto& [y, w] : lb.adj[0]) {
      const double fy = f[static_cast<std::size_t>(y)];
      const double df = fy - f0;
      const double dd = d[static_cast<std::size_t>(y)] - d[0];
      const double ry = g[static_cast<std::size_t>(y)] / fy;
      sum_w_df += w * df;
      sum_w_dd += w * dd;
      sum_w_dr += w * (ry - r0);

      // lap_gamma term
      gbar[static_cast<std::size_t>(y)] += lap_gamma_bar * w / mu0;
      // cross term: (1/2mu0) sum w df (d[y]-d[0])
      fbar[static_cast<std::size_t>(y)] += cross_bar * w * dd / (2.0 * mu0);
      dbar[static_cast<std::size_t>(y)] += cross_bar * w * df / (2.0 * mu0);
      // corr term: (1/2mu0) sum w df (g[y]/f[y] - g[0]/f[0])
      fbar[static_cast<std::size_t>(y)] +=
          corr_bar * w * ((ry - r0) + df * (-g[static_cast<std::size_t>(y)] / (fy * fy))) /
          (2.0 * mu0);
      gbar[static_cast<std::size_t>(y)] += corr_bar * w * df / (fy * 2.0 * mu0);
    }
    gbar[0] += lap_gamma_bar * (-lb.deg[0] / mu0);
    fbar[0] += cross_bar * (-sum_w_dd) / (2.0 * mu0);
    dbar[0] += cross_bar * (-sum_w_df) / (2.0 * mu0);
    fbar[0] += corr_bar * (-sum_w_dr + sum_w_df * (g[0] / (f0 * f0))) / (2.0 * mu0);
    gbar[0] += corr_bar * (-sum_w_df) / (f0 * 2.0 * mu0);

    // backprop through g[v] and d[v] for v in B1
    for (int v = 0; v < lb.b1; ++v) {
      const double gb = gbar[static_cast<std::size_t>(v)];
      const double db = dbar[static_cast<std::size_t>(v)];
      if (gb == 0.0 && db == 0.0) continue;
      const double muv = lb.mu[static_cast<std::size_t>(v)];
      for (const auto& [u2, w] : lb.adj[static_cast<std::size_t>(v)]) {
        const double diff = f[static_cast<std::size_t>(u2)] - f[static_cast<std::size_t>(v)];
        const double t = gb * w * diff / muv + db * w / muv;
        fbar[static_cast<std::size_t>(u2)] += t;
        fbar[static_cast<std::size_t>(v)] -= t;
      }
    }

    // chain rule to log coordinates
    for (int i = 1; i < lb.size(); ++i)
      (*grad)(i - 1) = fbar[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];

    if (prime) {
      // value term -(1/n) lam^2 / g0, with lam = (1/mu0) sum w (u_y - u_x)
      const double lam_bar = nbar * (-2.0 * n.inv() * lam);
      for (const auto& [y, w] : lb.adj[0])
        if (y >= 1) (*grad)(y - 1) += lam_bar * w / mu0;
      // y == 0 impossible (no self loops)
    }
    return value;
  }
};

// Plain dense BFGS with Armijo backtracking; objective may return +inf.
template <typename Objective>
inline double bfgs_minimize(const Objective& obj, Eigen::VectorXd& u, int max_iter,
                            double grad_tol) {
  const int dim = static_cast<int>(u.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd grad(dim), grad_new(dim), p(dim), u_new(dim);
  double value = obj.eval(u, &grad);
  if (!std::isfinite(value)) return value;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (grad.cwiseAbs().maxCoeff() <= grad_tol * std::max(1.0, std::abs(value))) break;
    p = -(h * grad);
    double slope = p.dot(grad);
    if (!(slope < 0.0)) {
      h.setIdentity();
      p = -grad;
      slope = p.dot(grad);
    }
    double step = 1.0;
    double value_new = std::numeric_limits<double>::infinity();
    for (int ls = 0; ls < 60; ++ls) {
      u_new = u + step * p;
      value_new = obj.eval(u_new, &grad_new);
      if (value_new <= value + 1e-4 * step * slope && std::isfinite(value_new)) break;
      step *= 0.5;
    }
    if (!std::isfinite(value_new) || value_new >= value) break;  // stalled
    const Eigen::VectorXd s = u_new - u;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd i = Eigen::MatrixXd::Identity(dim, dim);
      h = (i - rho * s * y.transpose()) * h * (i - rho * y * s.transpose()) +
          rho * s * s.transpose();
    }
    u = u_new;
    grad = grad_new;
    value = value_new;
  }
  return value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// pointwise condition checks
// ---------------------------------------------------------------------------

/// Signed margin of the exponential curvature-dimension test at x for a given
/// admissible f: Gamma2~(f) - (1/n)(Delta f)^2 - K Gamma(f).  Nonnegative iff
/// the test passes for this f.
inline double check_cde_at(const WeightedGraph& g, const VertexMeasure& mu, int x, Dim n,
                           double k, const VertexFunction& f) {
  detail::check_positive_on_two_ball(g, f, x, "check_cde_at");
  const double lap = laplacian(g, mu, f, x);
  if (!(lap < 0.0)) throw domain_error("inadmissible test function: Delta f(x) >= 0");
  return gamma2_tilde(g, mu, f, x) - n.inv() * lap * lap - k * gamma(g, mu, f, x);
}

/// Margin of the CDE' variant: Gamma2~(f) - (1/n) f(x)^2 (Delta log f)(x)^2
/// - K Gamma(f).  No sign condition on Delta f.
inline double check_cde_prime_at(const WeightedGraph& g, const VertexMeasure& mu, int x, Dim n,
                                 double k, const VertexFunction& f) {
  detail::check_positive_on_two_ball(g, f, x, "check_cde_prime_at");
  const double fx = f[static_cast<std::size_t>(x)];
  double lap_log = 0.0;
  for (const Edge& e : g.neighbors(x))
    lap_log += e.weight * (std::log(f[static_cast<std::size_t>(e.to)]) - std::log(fx));
  lap_log /= mu[x];
  const double p = fx * lap_log;
  return gamma2_tilde(g, mu, f, x) - n.inv() * p * p - k * gamma(g, mu, f, x);
}

// ---------------------------------------------------------------------------
// optimizers
// ---------------------------------------------------------------------------

struct CurvatureOptions {
  int starts = 64;
  int stages = 8;
  double barrier_init = 1e-1;
  double barrier_final = 1e-13;
  int max_iter = 60;       // BFGS iterations per continuation stage
  double grad_tol = 1e-10;
  std::uint64_t seed = 0;
  bool sampling_oracle = false;        // test mode: cross-check by random search
  long long sampling_count = 1000000;
  double sampling_sigma = 1.5;
};

/// Random-search lower-probe for the CDE ratio: iid log-normal values on the
/// 2-ball, rejecting draws with Delta f(x) >= 0.  Returns the minimum ratio
/// seen and its witness.  Independent of the multistart path.
inline CurvatureReport cde_sampling_min(const WeightedGraph& g, const VertexMeasure& mu, int x,
                                        Dim n, long long count, std::uint64_t seed,
                                        double sigma = 1.5) {
  const auto lb = detail::LocalBall::build(g, mu, x);
  if (lb.b1 <= 1) throw domain_error("no admissible test function");
  CounterRng rng(seed, {0x5a3917eULL, static_cast<std::uint64_t>(x)});
  std::vector<double> f(static_cast<std::size_t>(lb.size()));
  std::vector<double> dbuf(static_cast<std::size_t>(lb.b1)), gbuf(static_cast<std::size_t>(lb.b1));
  CurvatureReport rep;
  rep.vertex = x;
  rep.n = n;
  rep.condition = CurvCondition::CDE;
  rep.method = "sampling";
  rep.ball = lb.verts;
  rep.optimal_k = std::numeric_limits<double>::infinity();
  for (long long it = 0; it < count; ++it) {
    for (auto& v : f) v = rng.lognormal(sigma);
    const auto forms = lb.eval(f, dbuf, gbuf);
    if (!(forms.d0 < 0.0) || !(forms.g0 > 0.0)) continue;
    const double ratio = (forms.gt2 - n.inv() * forms.d0 * forms.d0) / forms.g0;
    if (ratio < rep.optimal_k) {
      rep.optimal_k = ratio;
      rep.witness = f;
    }
  }
  if (!std::isfinite(rep.optimal_k)) throw domain_error("no admissible test function");
  const double scale = rep.witness[0];
  for (auto& v : rep.witness) v /= scale;
  return rep;
}

namespace detail {

inline CurvatureReport optimal_exponential_k(const WeightedGraph& g, const VertexMeasure& mu,
                                             int x, Dim n, const CurvatureOptions& opt,
                                             bool prime) {
  const auto lb = LocalBall::build(g, mu, x);
  if (lb.b1 <= 1) throw domain_error("no admissible test function");
  const int dim = lb.size() - 1;

  CdeObjective obj(lb, n, prime);
  CounterRng start_rng(opt.seed, {0xcde0u, static_cast<std::uint64_t>(x)});

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u;
  const double sigmas[4] = {0.25, 0.5, 1.0, 2.0};

  for (int s = 0; s < opt.starts; ++s) {
    Eigen::VectorXd u(dim);
    bool admissible = false;
    if (s == 0) {
      // deterministic seed point: strictly smaller on the whole punctured ball
      u.setConstant(-1.0);
      admissible = std::isfinite(obj.ratio(u));
    }
    for (int attempt = 0; !admissible && attempt < 64; ++attempt) {
      const double sigma = sigmas[s % 4];
      for (int i = 0; i < dim; ++i) u(i) = sigma * start_rng.normal();
      admissible = std::isfinite(obj.ratio(u));
    }
    if (!admissible) continue;

    if (prime) {
      obj.barrier = 0.0;
      bfgs_minimize(obj, u, opt.max_iter * opt.stages, opt.grad_tol);
    } else {
      for (int stage = 0; stage < opt.stages; ++stage) {
        const double t = opt.stages == 1 ? 1.0
                                         : static_cast<double>(stage) /
                                               static_cast<double>(opt.stages - 1);
        obj.barrier = std::exp(std::log(opt.barrier_init) +
                               t * (std::log(opt.barrier_final) - std::log(opt.barrier_init)));
        bfgs_minimize(obj, u, opt.max_iter, opt.grad_tol);
      }
    }
    const double value = obj.ratio(u);
    if (!std::isfinite(value)) continue;
    if (value < best - 1e-12) {
      best = value;
      best_u = u;
    } else if (value <= best + 1e-12 && best_u.size() == u.size()) {
      // deterministic tie-break: lexicographically smallest witness
      for (int i = 0; i < dim; ++i) {
        if (u(i) == best_u(i)) continue;
        if (u(i) < best_u(i)) {
          best = std::min(best, value);
          best_u = u;
        }
        break;
      }
    }
  }
  if (!std::isfinite(best)) throw domain_error("no admissible test function");

  CurvatureReport rep;
  rep.vertex = x;
  rep.n = n;
  rep.condition = prime ? CurvCondition::CDEprime : CurvCondition::CDE;
  rep.method = "multistart";
  rep.ball = lb.verts;
  rep.optimal_k = best;
  rep.witness.assign(static_cast<std::size_t>(lb.size()), 1.0);
  for (int i = 1; i < lb.size(); ++i)
    rep.witness[static_cast<std::size_t>(i)] = std::exp(best_u(i - 1));

  if (opt.sampling_oracle && !prime) {
    auto sampled = cde_sampling_min(g, mu, x, n, opt.sampling_count, opt.seed,
                                    opt.sampling_sigma);
    if (sampled.optimal_k < rep.optimal_k) {
      sampled.method = "sampling";
      rep = std::move(sampled);
    }
  }

  // diagnostics at the reported witness
  {
    std::vector<double> dbuf(static_cast<std::size_t>(lb.b1)),
        gbuf(static_cast<std::size_t>(lb.b1));
    const auto forms = lb.eval(rep.witness, dbuf, gbuf);
    rep.boundary_approach = std::abs(forms.d0) < 1e-6;
    const double sq = prime ? [&] {
      const double p = rep.witness[0] * lb.lap_log(rep.witness);
      return p * p;
    }()
                            : forms.d0 * forms.d0;
    rep.witness_slack = forms.gt2 - n.inv() * sq - rep.optimal_k * forms.g0;
  }
  return rep;
}

}  // namespace detail

/// inf over admissible positive f (Delta f(x) < 0) of the CDE ratio
/// [Gamma2~(f) - (1/n)(Delta f)^2] / Gamma(f) at x.  Multi-start quasi-Newton
/// in log coordinates with a log-barrier continuation on -Delta f(x).
inline CurvatureReport optimal_cde_k(const WeightedGraph& g, const VertexMeasure& mu, int x,
                                     Dim n, const CurvatureOptions& opt = {}) {
  return detail::optimal_exponential_k(g, mu, x, n, opt, false);
}

/// Same machinery for the CDE' ratio (no sign condition on Delta f).  On some
/// graphs (trees) this is unbounded below; the report then carries the best
/// value found within the iteration budget.
inline CurvatureReport optimal_cde_prime_k(const WeightedGraph& g, const VertexMeasure& mu,
                                           int x, Dim n, const CurvatureOptions& opt = {}) {
  return detail::optimal_exponential_k(g, mu, x, n, opt, true);
}

/// Batch variant over a vertex set (all vertices when `interior` is empty).
/// Every solve owns its seed stream, so the items are independent and the
/// result does not depend on evaluation order.
inline std::vector<CurvatureReport> optimal_cde_k_all(const WeightedGraph& g,
                                                      const VertexMeasure& mu, Dim n,
                                                      const CurvatureOptions& opt = {},
                                                      std::vector<int> interior = {}) {
  if (interior.empty()) {
    interior.resize(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) interior[static_cast<std::size_t>(v)] = v;
  }
  std::vector<CurvatureReport> out;
  out.reserve(interior.size());
  for (int v : interior) out.push_back(optimal_cde_k(g, mu, v, n, opt));
  return out;
}

/// Exact CD optimum at x: Gamma2, (Delta f)^2 and Gamma are quadratic forms in
/// the 2-ball values, so the optimal K is the smallest generalized Rayleigh
/// quotient of A = Gamma2 - (1/n) Delta (x) Delta against B = Gamma, after
/// eliminating the 2-sphere coordinates (where B vanishes and A is positive
/// definite) by a Schur complement and restricting to the complement of the
/// constants.
inline CurvatureReport optimal_cd_k(const WeightedGraph& g, const VertexMeasure& mu, int x,
                                    Dim n) {
  const auto lb = detail::LocalBall::build(g, mu, x);
  if (lb.b1 <= 1) throw domain_error("no admissible test function");
  const int m = lb.size();
  const int b1 = lb.b1;
  if (m > 4096) throw domain_error("optimal_cd_k: 2-ball too large for the dense eigensolve");

  // basis evaluations of the three forms
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    basis[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(m), 0.0);
    basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  }
  std::vector<std::vector<double>> lap_of_basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    lap_of_basis[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(b1), 0.0);
    for (int v = 0; v < b1; ++v)
      lap_of_basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] =
          lb.llap(basis[static_cast<std::size_t>(i)], v);
  }

  Eigen::MatrixXd a(m, m), gm(m, m);
  Eigen::VectorXd dvec(m);
  a.setZero();
  gm.setZero();
  for (int i = 0; i < m; ++i)
    dvec(i) = lap_of_basis[static_cast<std::size_t>(i)][0];
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const auto& ei = basis[static_cast<std::size_t>(i)];
      const auto& ej = basis[static_cast<std::size_t>(j)];
      gm(i, j) = gm(j, i) = lb.lgamma(ei, ej, 0);
      // Gamma2(ei, ej)(x) = (Delta Gamma(ei,ej) - Gamma(ei, Delta ej) - Gamma(Delta ei, ej))/2
      double lap_gamma = 0.0;
      for (const auto& [y, w] : lb.adj[0])
        lap_gamma += w * (lb.lgamma(ei, ej, y) - lb.lgamma(ei, ej, 0));
      lap_gamma /= lb.mu[0];
      // Gamma(ei, Delta ej)(x): Delta ej known on B1
      double c1 = 0.0, c2 = 0.0;
      const auto& dj = lap_of_basis[static_cast<std::size_t>(j)];
      const auto& di = lap_of_basis[static_cast<std::size_t>(i)];
      for (const auto& [y, w] : lb.adj[0]) {
        c1 += w * (ei[static_cast<std::size_t>(y)] - ei[0]) *
              (dj[static_cast<std::size_t>(y)] - dj[0]);
        c2 += w * (ej[static_cast<std::size_t>(y)] - ej[0]) *
              (di[static_cast<std::size_t>(y)] - di[0]);
      }
      c1 /= 2.0 * lb.mu[0];
      c2 /= 2.0 * lb.mu[0];
      const double g2 = 0.5 * (lap_gamma - c1 - c2);
      a(i, j) = a(j, i) = g2;
    }
  a -= n.inv() * dvec * dvec.transpose();
  a = 0.5 * (a + a.transpose()).eval();

  // Schur-eliminate the 2-sphere block
  Eigen::MatrixXd s11 = a.topLeftCorner(b1, b1);
  if (m > b1) {
    const Eigen::MatrixXd a12 = a.topRightCorner(b1, m - b1);
    const Eigen::MatrixXd a22 = a.bottomRightCorner(m - b1, m - b1);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(a22);
    s11 -= a12 * ldlt.solve(a12.transpose());
  }
  const Eigen::MatrixXd b11 = gm.topLeftCorner(b1, b1);

  // Helmert basis of the complement of constants
  Eigen::MatrixXd p(b1, b1 - 1);
  p.setZero();
  for (int k = 1; k < b1; ++k) {
    const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) p(i, k - 1) = 1.0 / norm;
    p(k, k - 1) = -static_cast<double>(k) / norm;
  }
  Eigen::MatrixXd sp = p.transpose() * s11 * p;
  Eigen::MatrixXd bp = p.transpose() * b11 * p;
  sp = 0.5 * (sp + sp.transpose()).eval();
  bp = 0.5 * (bp + bp.transpose()).eval();

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sp, bp);
  if (es.info() != Eigen::Success)
    throw domain_error("optimal_cd_k: generalized eigensolve failed");

  CurvatureReport rep;
  rep.vertex = x;
  rep.n = n;
  rep.condition = CurvCondition::CD;
  rep.method = "eigensolve";
  rep.ball = lb.verts;
  rep.optimal_k = es.eigenvalues()(0);

  Eigen::VectorXd f1 = p * es.eigenvectors().col(0);
  Eigen::VectorXd full(m);
  full.head(b1) = f1;
  if (m > b1) {
    const Eigen::MatrixXd a12 = a.topRightCorner(b1, m - b1);
    const Eigen::MatrixXd a22 = a.bottomRightCorner(m - b1, m - b1);
    full.tail(m - b1) = -Eigen::LDLT<Eigen::MatrixXd>(a22).solve(a12.transpose() * f1);
  }
  // deterministic normalization
  double scale = full.cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i)
    if (std::abs(full(i)) > 1e-14 * scale) {
      if (full(i) < 0) scale = -scale;
      break;
    }
  full /= scale;
  rep.witness.assign(full.data(), full.data() + m);
  rep.witness_slack =
      full.dot((a - rep.optimal_k * gm) * full);  // ~0 at the optimum by construction
  return rep;
}

/// Universal curvature floor: every graph satisfies CDE(2, -D_mu (D_w/2 + 1)).
inline double universal_cde_lower_bound(const WeightedGraph& g, const VertexMeasure& mu) {
  const auto c = graph_constants(g, mu);
  return -c.d_mu * (c.d_w / 2.0 + 1.0);
}

/// The tree witness showing the universal floor is nearly sharp: on the D-ary
/// tree with the normalized Laplacian, the function with a single heavy
/// neighbor ((1-eps)D), light remaining neighbors (eps) and squared values on
/// the 2-sphere drives the CDE ratio to -(1+o(1)) D/2 as D grows.
struct TreeSharpnessWitness {
  TreeGraph tree;
  VertexMeasure mu;
  VertexFunction f;
  double eps = 0.0;
  double ratio = 0.0;  // Gamma2~(f)/Gamma(f) at the root
};

inline TreeSharpnessWitness tree_sharpness_witness(int branching, double eps = -1.0) {
  if (branching < 2) throw domain_error("tree_sharpness_witness: D must be >= 2");
  TreeSharpnessWitness out;
  out.eps = eps > 0.0 ? eps : std::pow(static_cast<double>(branching), -1.5);
  out.tree = make_tree(branching, 2);
  out.mu = VertexMeasure::degree(out.tree.graph);
  const auto& g = out.tree.graph;
  out.f.assign(static_cast<std::size_t>(g.num_vertices()), 0.0);
  out.f[0] = 1.0;
  const auto& root_nb = g.neighbors(0);
  for (std::size_t i = 0; i < root_nb.size(); ++i)
    out.f[static_cast<std::size_t>(root_nb[i].to)] =
        i == 0 ? (1.0 - out.eps) * branching : out.eps;
  for (const Edge& e : root_nb) {
    const double fy = out.f[static_cast<std::size_t>(e.to)];
    for (const Edge& e2 : g.neighbors(e.to))
      if (e2.to != 0) out.f[static_cast<std::size_t>(e2.to)] = fy * fy;
  }
  out.ratio = gamma2_tilde(g, out.mu, out.f, 0) / gamma(g, out.mu, out.f, 0);
  return out;
}

/// Curvature consequence of the edge-map structure: d-regular, mu constant,
/// consistent weighting gives CDE(d, 0); weakly consistent gives CDE(inf, 0).
/// Verified by running the CDE optimizer at every (interior) vertex.
inline BoundReport ricci_flat_cde_check(const WeightedGraph& g, const VertexMeasure& mu,
                                        const RicciFlatStructure& s, RicciFlatMode mode,
                                        const CurvatureOptions& opt = {},
                                        const std::vector<int>& interior = {}) {
  if (mode == RicciFlatMode::unweighted)
    throw domain_error("ricci_flat_cde_check: pick weakly_consistent or consistent");
  const auto rf = verify_ricci_flat(g, s, mode);
  if (!rf.passed)
    throw domain_error("ricci_flat_cde_check: structure fails verification: " + rf.violation);
  for (int v = 1; v < g.num_vertices(); ++v)
    if (!approx_equal(mu[v], mu[0]))
      throw domain_error("ricci_flat_cde_check: measure must be constant");

  const Dim n = mode == RicciFlatMode::consistent ? Dim::finite(s.maps()) : Dim::inf();
  std::vector<int> scope = interior;
  if (scope.empty()) {
    scope.resize(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) scope[static_cast<std::size_t>(v)] = v;
  }
  double min_k = std::numeric_limits<double>::infinity();
  int argmin = -1;
  for (int v : scope) {
    const auto rep = optimal_cde_k(g, mu, v, n, opt);
    if (rep.optimal_k < min_k) {
      min_k = rep.optimal_k;
      argmin = v;
    }
  }
  BoundReport rep = BoundReport::of(-min_k, 1e-6);
  rep.witness["n"] = n.to_json();
  rep.witness["min_optimal_k"] = min_k;
  rep.witness["vertex"] = argmin;
  return rep;
}

}  // namespace graphcurv
