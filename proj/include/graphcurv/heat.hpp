#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <graphcurv/curvature.hpp>
#include <graphcurv/cutoff.hpp>
#include <graphcurv/graph.hpp>
#include <graphcurv/io.hpp>
#include <graphcurv/operators.hpp>
#include <graphcurv/report.hpp>

namespace graphcurv {

struct integration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// potentials
// ---------------------------------------------------------------------------

/// Space-time potential q with certified bounds Delta q <= theta and
/// Gamma(q) <= eta^2, verified over the stored grid at construction.
struct Potential {
  std::vector<double> times;  // increasing, size >= 1
  Eigen::MatrixXd values;     // n x T
  double theta = 0.0;
  double eta = 0.0;

  bool time_independent() const { return times.size() == 1; }

  double at(int x, double t) const {
    if (times.size() == 1) return values(x, 0);
    if (t <= times.front()) return values(x, 0);
    if (t >= times.back()) return values(x, static_cast<int>(times.size()) - 1);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const int hi = static_cast<int>(it - times.begin());
    const int lo = hi - 1;
    const double s = (t - times[static_cast<std::size_t>(lo)]) /
                     (times[static_cast<std::size_t>(hi)] - times[static_cast<std::size_t>(lo)]);
    return (1.0 - s) * values(x, lo) + s * values(x, hi);
  }

  Eigen::VectorXd column(double t) const {
    Eigen::VectorXd q(values.rows());
    for (int x = 0; x < values.rows(); ++x) q(x) = at(x, t);
    return q;
  }

  /// Measures theta and eta by exhaustive scan over the grid.
  static Potential measured(const WeightedGraph& g, const VertexMeasure& mu,
                            Eigen::MatrixXd vals, std::vector<double> grid) {
    Potential p;
    p.values = std::move(vals);
    p.times = std::move(grid);
    p.validate_shape(g);
    double th = 0.0, e2 = 0.0;
    VertexFunction col(static_cast<std::size_t>(g.num_vertices()));
    for (int ti = 0; ti < p.values.cols(); ++ti) {
      for (int x = 0; x < g.num_vertices(); ++x) col[static_cast<std::size_t>(x)] = p.values(x, ti);
      for (int x = 0; x < g.num_vertices(); ++x) {
        th = std::max(th, laplacian(g, mu, col, x));
        e2 = std::max(e2, gamma(g, mu, col, x));
      }
    }
    p.theta = th;
    p.eta = std::sqrt(e2);
    return p;
  }

  /// Declares bounds and verifies them by scan.
  static Potential declared(const WeightedGraph& g, const VertexMeasure& mu,
                            Eigen::MatrixXd vals, std::vector<double> grid, double theta,
                            double eta) {
    Potential p = measured(g, mu, std::move(vals), std::move(grid));
    if (p.theta > theta + 1e-12 || p.eta > eta + 1e-12)
      throw domain_error("potential: declared (theta, eta) bounds fail the scan");
    p.theta = theta;
    p.eta = eta;
    return p;
  }

 private:
  void validate_shape(const WeightedGraph& g) const {
    if (values.rows() != g.num_vertices()) throw domain_error("potential: vertex count mismatch");
    if (static_cast<int>(times.size()) != values.cols() || times.empty())
      throw domain_error("potential: time grid mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1])) throw domain_error("potential: times must increase");
  }
};

// ---------------------------------------------------------------------------
// heat solutions
// ---------------------------------------------------------------------------

enum class HeatMethod { automatic, dense, ode };

struct HeatOptions {
  HeatMethod method = HeatMethod::automatic;
  int dense_limit = 512;
  double ode_tol = 1e-9;
  bool check_positivity = true;
  bool check_conservation = true;
};

struct HeatSolution {
  std::vector<double> times;  // increasing, >= 0
  Eigen::MatrixXd values;     // n x T
  bool positive = false;
  std::string provenance;     // "matrix_exponential" or "ode_integration"
  double mass_drift = 0.0;    // max relative drift of sum mu*u (symmetric, q = 0)

  double u(int x, int ti) const { return values(x, ti); }

  int time_index(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
        return static_cast<int>(i);
    throw domain_error("time " + std::to_string(t) + " is not on the solution grid");
  }

  VertexFunction column(int ti) const {
    VertexFunction f(static_cast<std::size_t>(values.rows()));
    for (int x = 0; x < values.rows(); ++x) f[static_cast<std::size_t>(x)] = values(x, ti);
    return f;
  }
};

namespace detail {

inline void check_times(const std::vector<double>& times) {
  if (times.empty()) throw domain_error("heat: empty time grid");
  if (times.front() < 0.0) throw domain_error("heat: times must be >= 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw domain_error("heat: times must be strictly increasing");
}

inline Eigen::MatrixXd generator_matrix(const WeightedGraph& g, const VertexMeasure& mu) {
  const int n = g.num_vertices();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (const Edge& e : g.neighbors(x)) l(x, e.to) += e.weight / mu[x];
    l(x, x) = -g.degree(x) / mu[x];
  }
  return l;
}

// Cash-Karp embedded Runge-Kutta with local error control.
template <typename Rhs>
inline void integrate_adaptive(const Rhs& rhs, Eigen::VectorXd& u, double t0, double t1,
                               double tol) {
  static const double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
  static const double b21 = 1.0 / 5;
  static const double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static const double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static const double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  static const double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                      b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static const double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
  static const double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                      d5 = 277.0 / 14336, d6 = 1.0 / 4;

  if (t1 <= t0) return;
  double t = t0;
  double h = (t1 - t0) / 16.0;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, utmp, u5;
  int rejects_in_a_row = 0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    k1 = rhs(t, u);
    utmp = u + h * b21 * k1;
    k2 = rhs(t + a2 * h, utmp);
    utmp = u + h * (b31 * k1 + b32 * k2);
    k3 = rhs(t + a3 * h, utmp);
    utmp = u + h * (b41 * k1 + b42 * k2 + b43 * k3);
    k4 = rhs(t + a4 * h, utmp);
    utmp = u + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4);
    k5 = rhs(t + a5 * h, utmp);
    utmp = u + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5);
    k6 = rhs(t + a6 * h, utmp);
    u5 = u + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const Eigen::VectorXd u4 = u + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
    const double scale = tol * (1.0 + u.cwiseAbs().maxCoeff());
    const double err = (u5 - u4).cwiseAbs().maxCoeff();
    if (err <= scale) {
      t += h;
      u = u5;
      rejects_in_a_row = 0;
      const double grow = err > 0.0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(scale / err, 0.25));
      if (++rejects_in_a_row > 200)
        throw integration_error("heat: step control failed near t=" + std::to_string(t));
    }
    if (h < 1e-14 * std::max(1.0, t1))
      throw integration_error("heat: step size underflow near t=" + std::to_string(t));
  }
}

inline void check_positive(const HeatSolution& sol, const char* what) {
  const double scale = std::max(1.0, sol.values.cwiseAbs().maxCoeff());
  if (sol.values.minCoeff() < -1e-12 * scale)
    throw integration_error(std::string(what) + ": solution left the positive cone");
}

}  // namespace detail

/// Solves du/dt = Delta u from u0 and samples the solution on the given time
/// grid.  Dense matrix exponential (exact eigen route when the weights are
/// symmetric) up to `dense_limit` vertices, adaptive Runge-Kutta beyond.
inline HeatSolution heat_semigroup(const WeightedGraph& g, const VertexMeasure& mu,
                                   const VertexFunction& u0, std::vector<double> times,
                                   const HeatOptions& opt = {}) {
  detail::check_times(times);
  detail::check_function_size(g, u0, "heat_semigroup");
  for (double v : u0)
    if (!std::isfinite(v)) throw domain_error("heat_semigroup: u0 has NaN/Inf entries");
  const int n = g.num_vertices();
  const int nt = static_cast<int>(times.size());
  const bool dense = opt.method == HeatMethod::dense ||
                     (opt.method == HeatMethod::automatic && n <= opt.dense_limit);

  HeatSolution sol;
  sol.times = std::move(times);
  sol.values.resize(n, nt);
  Eigen::VectorXd v0 = Eigen::Map<const Eigen::VectorXd>(u0.data(), n);

  if (dense && g.symmetric()) {
    // exact route: symmetrize with M^{1/2} and diagonalize
    Eigen::VectorXd sqrt_mu(n), inv_sqrt_mu(n);
    for (int x = 0; x < n; ++x) {
      sqrt_mu(x) = std::sqrt(mu[x]);
      inv_sqrt_mu(x) = 1.0 / sqrt_mu(x);
    }
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    for (int x = 0; x < n; ++x) {
      for (const Edge& e : g.neighbors(x))
        s(x, e.to) += e.weight * inv_sqrt_mu(x) * inv_sqrt_mu(e.to);
      s(x, x) = -g.degree(x) / mu[x];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    if (es.info() != Eigen::Success) throw integration_error("heat: eigensolve failed");
    const Eigen::VectorXd w0 = es.eigenvectors().transpose() * (sqrt_mu.asDiagonal() * v0);
    for (int ti = 0; ti < nt; ++ti) {
      const Eigen::VectorXd scaled =
          (es.eigenvalues().array() * sol.times[static_cast<std::size_t>(ti)]).exp() *
          w0.array();
      sol.values.col(ti) = inv_sqrt_mu.asDiagonal() * (es.eigenvectors() * scaled);
    }
    sol.provenance = "matrix_exponential";
  } else if (dense) {
    const Eigen::MatrixXd l = detail::generator_matrix(g, mu);
    for (int ti = 0; ti < nt; ++ti) {
      const Eigen::MatrixXd e = (l * sol.times[static_cast<std::size_t>(ti)]).exp();
      sol.values.col(ti) = e * v0;
    }
    sol.provenance = "matrix_exponential";
  } else {
    auto rhs = [&](double, const Eigen::VectorXd& u) {
      Eigen::VectorXd out(n);
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (const Edge& e : g.neighbors(x)) s += e.weight * (u(e.to) - u(x));
        out(x) = s / mu[x];
      }
      return out;
    };
    Eigen::VectorXd u = v0;
    double t = 0.0;
    for (int ti = 0; ti < nt; ++ti) {
      detail::integrate_adaptive(rhs, u, t, sol.times[static_cast<std::size_t>(ti)], opt.ode_tol);
      t = sol.times[static_cast<std::size_t>(ti)];
      sol.values.col(ti) = u;
    }
    sol.provenance = "ode_integration";
  }

  const bool positive_data = *std::min_element(u0.begin(), u0.end()) > 0.0;
  if (positive_data && opt.check_positivity) detail::check_positive(sol, "heat_semigroup");
  sol.positive = positive_data;

  if (g.symmetric() && opt.check_conservation) {
    double mass0 = 0.0;
    for (int x = 0; x < n; ++x) mass0 += mu[x] * v0(x);
    double drift = 0.0;
    for (int ti = 0; ti < nt; ++ti) {
      double m = 0.0;
      for (int x = 0; x < n; ++x) m += mu[x] * sol.values(x, ti);
      drift = std::max(drift, std::abs(m - mass0));
    }
    sol.mass_drift = drift / std::max(1e-300, std::abs(mass0));
    if (sol.mass_drift > 1e-8)
      throw integration_error("heat_semigroup: mass conservation violated");
  }
  return sol;
}

/// Solves du/dt = Delta u - q u for a positive u0.  Positivity loss beyond
/// -1e-12 (relative) aborts with an error.
inline HeatSolution heat_with_potential(const WeightedGraph& g, const VertexMeasure& mu,
                                        const VertexFunction& u0, const Potential& q,
                                        std::vector<double> times, const HeatOptions& opt = {}) {
  detail::check_times(times);
  detail::check_function_size(g, u0, "heat_with_potential");
  if (*std::min_element(u0.begin(), u0.end()) <= 0.0)
    throw domain_error("heat_with_potential: u0 must be positive");
  const int n = g.num_vertices();
  const int nt = static_cast<int>(times.size());

  HeatSolution sol;
  sol.times = std::move(times);
  sol.values.resize(n, nt);
  Eigen::VectorXd v0 = Eigen::Map<const Eigen::VectorXd>(u0.data(), n);

  const bool dense = q.time_independent() &&
                     (opt.method == HeatMethod::dense ||
                      (opt.method == HeatMethod::automatic && n <= opt.dense_limit));
  if (dense) {
    Eigen::MatrixXd l = detail::generator_matrix(g, mu);
    for (int x = 0; x < n; ++x) l(x, x) -= q.values(x, 0);
    for (int ti = 0; ti < nt; ++ti) {
      const Eigen::MatrixXd e = (l * sol.times[static_cast<std::size_t>(ti)]).exp();
      sol.values.col(ti) = e * v0;
    }
    sol.provenance = "matrix_exponential";
  } else {
    auto rhs = [&](double t, const Eigen::VectorXd& u) {
      Eigen::VectorXd out(n);
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (const Edge& e : g.neighbors(x)) s += e.weight * (u(e.to) - u(x));
        out(x) = s / mu[x] - q.at(x, t) * u(x);
      }
      return out;
    };
    Eigen::VectorXd u = v0;
    double t = 0.0;
    for (int ti = 0; ti < nt; ++ti) {
      detail::integrate_adaptive(rhs, u, t, sol.times[static_cast<std::size_t>(ti)], opt.ode_tol);
      t = sol.times[static_cast<std::size_t>(ti)];
      sol.values.col(ti) = u;
    }
    sol.provenance = "ode_integration";
  }
  if (opt.check_positivity) detail::check_positive(sol, "heat_with_potential");
  sol.positive = true;
  return sol;
}

// ---------------------------------------------------------------------------
// the Li-Yau quantity and the gradient-estimate verifiers
// ---------------------------------------------------------------------------

/// Per-time Li-Yau quantity (1-alpha) Gamma(sqrt u)/u - dt(sqrt u)/sqrt(u)
/// - q/2 at (x, t_i).  The time derivative is evaluated through the equation,
/// dt(sqrt u) = (Delta u - q u)/(2 sqrt u), which makes the q-terms cancel:
/// the value reduces to (1-alpha) Gamma(sqrt u)/u - Delta u/(2u).
inline double li_yau_f(const WeightedGraph& g, const VertexMeasure& mu, const HeatSolution& sol,
                       int x, int ti, double alpha) {
  g.check_vertex(x);
  const double ux = sol.values(x, ti);
  if (!(ux > 0.0)) throw domain_error("li_yau_f: u must be positive at (x,t)");
  const double sx = std::sqrt(ux);
  double lap = 0.0, gam = 0.0;
  for (const Edge& e : g.neighbors(x)) {
    const double uy = sol.values(e.to, ti);
    if (!(uy > 0.0)) throw domain_error("li_yau_f: u must be positive on the 1-ball");
    lap += e.weight * (uy - ux);
    const double ds = std::sqrt(uy) - sx;
    gam += e.weight * ds * ds;
  }
  lap /= mu[x];
  gam /= 2.0 * mu[x];
  return (1.0 - alpha) * gam / ux - lap / (2.0 * ux);
}

enum class GradientTheorem { finite_n0, finite_nK, potential, ball_weak, ball_strong };

enum class HypothesisCheck { assume, sampled, full };

struct GradientEstimateParams {
  Dim n;
  double k = 0.0;
  double alpha = 0.0;
  const Potential* q = nullptr;  // bounds (theta, eta) are read from here
  int x0 = 0;
  double radius = 0.0;
  const CutoffFunction* cutoff = nullptr;  // ball_strong
  double epsilon = 0.5;                    // ball_strong
  HypothesisCheck hypothesis = HypothesisCheck::sampled;
  std::uint64_t seed = 0;
  std::vector<int> domain;  // vertices where the equation is known to hold; empty = all
};

struct LiYauRow {
  int x = -1;
  double t = 0.0, value = 0.0, bound = 0.0, margin = 0.0;
};

struct LiYauReport {
  GradientTheorem theorem = GradientTheorem::finite_n0;
  double alpha = 0.0;
  std::vector<LiYauRow> rows;
  LiYauRow worst;
  double min_margin = std::numeric_limits<double>::infinity();
  bool hypothesis_checked = false;
  bool hypothesis_ok = false;
  double proof_constant_min_margin = std::numeric_limits<double>::quiet_NaN();  // ball_weak

  ojson to_json() const {
    ojson j;
    const char* names[] = {"finite_n0", "finite_nK", "potential", "ball_weak", "ball_strong"};
    j["theorem"] = names[static_cast<int>(theorem)];
    j["alpha"] = alpha;
    j["rows"] = rows.size();
    j["min_margin"] = min_margin;
    ojson w;
    w["x"] = worst.x;
    w["t"] = worst.t;
    w["value"] = worst.value;
    w["bound"] = worst.bound;
    w["margin"] = worst.margin;
    j["worst"] = std::move(w);
    j["hypothesis_checked"] = hypothesis_checked;
    j["hypothesis_ok"] = hypothesis_ok;
    if (!std::isnan(proof_constant_min_margin))
      j["proof_constant_min_margin"] = proof_constant_min_margin;
    return j;
  }
};

namespace detail {

// Probabilistic curvature probe: random admissible test functions at a few
// vertices.  Cheap, and enough to catch wrong hypotheses in practice; `full`
// runs the optimizer instead.
inline bool hypothesis_probe(const WeightedGraph& g, const VertexMeasure& mu, Dim n, double k,
                             const std::vector<int>& verts, HypothesisCheck mode,
                             std::uint64_t seed) {
  if (mode == HypothesisCheck::assume) return true;
  if (mode == HypothesisCheck::full) {
    CurvatureOptions opt;
    opt.seed = seed;
    for (int x : verts) {
      const auto rep = optimal_cde_k(g, mu, x, n, opt);
      if (rep.optimal_k < -k - 1e-6) return false;
    }
    return true;
  }
  std::vector<int> probe_verts;
  const int stride = std::max<int>(1, static_cast<int>(verts.size()) / 8);
  for (std::size_t i = 0; i < verts.size(); i += static_cast<std::size_t>(stride))
    probe_verts.push_back(verts[i]);
  CounterRng rng(seed, {0xcde9u});
  VertexFunction f(static_cast<std::size_t>(g.num_vertices()));
  for (int x : probe_verts) {
    int accepted = 0;
    for (int trial = 0; trial < 512 && accepted < 48; ++trial) {
      for (auto& v : f) v = rng.lognormal(1.0);
      if (!(laplacian(g, mu, f, x) < 0.0)) continue;
      ++accepted;
      if (check_cde_at(g, mu, x, n, -k, f) < -1e-9) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Sweeps the Li-Yau quantity against the chosen theorem's explicit bound.
/// Margins are bound - value; the worst (x,t) is reported as witness.
inline LiYauReport verify_gradient_estimate(const WeightedGraph& g, const VertexMeasure& mu,
                                            const HeatSolution& sol, GradientTheorem theorem,
                                            const GradientEstimateParams& p) {
  LiYauReport rep;
  rep.theorem = theorem;
  rep.alpha = p.alpha;
  if (!sol.positive) {
    // the theorems speak about positive solutions; report, don't throw
    rep.hypothesis_checked = true;
    rep.hypothesis_ok = false;
    return rep;
  }
  const auto cst = graph_constants(g, mu);
  const double n = p.n.infinite
                       ? throw domain_error("gradient estimates need a finite dimension")
                       : p.n.n;

  // sweep set
  std::vector<int> sweep;
  if (theorem == GradientTheorem::ball_strong) {
    if (!p.cutoff) throw domain_error("ball_strong needs a cutoff function");
    sweep.push_back(p.cutoff->center);
  } else if (theorem == GradientTheorem::ball_weak) {
    sweep = g.ball(p.x0, p.radius);
  } else {
    sweep.resize(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) sweep[static_cast<std::size_t>(v)] = v;
  }
  // exclude vertices whose 2-ball leaves the declared solution domain
  if (!p.domain.empty()) {
    std::vector<char> inside(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : p.domain) inside[static_cast<std::size_t>(v)] = 1;
    std::vector<int> kept;
    for (int x : sweep) {
      if (!inside[static_cast<std::size_t>(x)]) continue;
      bool ok = true;
      for (const Edge& e : g.neighbors(x)) {
        if (!inside[static_cast<std::size_t>(e.to)]) ok = false;
        for (const Edge& e2 : g.neighbors(e.to))
          if (!inside[static_cast<std::size_t>(e2.to)]) ok = false;
      }
      if (ok) kept.push_back(x);
    }
    sweep = std::move(kept);
  }
  if (sweep.empty()) throw domain_error("verify_gradient_estimate: empty sweep set");

  // bound as a function of t
  const double theta = p.q ? p.q->theta : 0.0;
  const double eta = p.q ? p.q->eta : 0.0;
  double c_potential = 0.0;
  if (theorem == GradientTheorem::potential || theorem == GradientTheorem::ball_weak) {
    if (p.alpha > 0.0) {
      // sqrt(K^2 n^2/a^2 + n/(1-a) (theta + eta [(1-a) sqrt(2 Dmu(Dw+1)) + a sqrt(2 Dmu(Dw^3+1))]))
      const double root1 = std::sqrt(2.0 * cst.d_mu * (cst.d_w + 1.0));
      const double root3 = std::sqrt(2.0 * cst.d_mu * (cst.d_w * cst.d_w * cst.d_w + 1.0));
      c_potential = std::sqrt(p.k * p.k * n * n / (p.alpha * p.alpha) +
                              n / (1.0 - p.alpha) *
                                  (theta + eta * ((1.0 - p.alpha) * root1 + p.alpha * root3)));
    }
  }
  StrongBoundConstants strong;
  if (theorem == GradientTheorem::ball_strong) {
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
      throw domain_error("ball_strong needs alpha in (0,1)");
    strong = StrongBoundConstants::make(p.alpha, p.epsilon, n, p.k, theta, eta, cst.d_mu,
                                        cst.d_w, p.cutoff->strength_c);
  }

  auto bound_at = [&](double t) {
    switch (theorem) {
      case GradientTheorem::finite_n0:
        return n / (2.0 * t);
      case GradientTheorem::finite_nK:
        if (!(p.alpha > 0.0 && p.alpha < 1.0))
          throw domain_error("finite_nK needs alpha in (0,1)");
        return n / ((1.0 - p.alpha) * 2.0 * t) + p.k * n / p.alpha;
      case GradientTheorem::potential:
        if (p.alpha == 0.0) {
          const double root1 = std::sqrt(2.0 * cst.d_mu * (cst.d_w + 1.0));
          return n / (2.0 * t) + 0.5 * std::sqrt(n * (theta + eta * root1));
        }
        return n / (2.0 * (1.0 - p.alpha) * t) + 0.5 * c_potential;
      case GradientTheorem::ball_weak:
        if (p.alpha == 0.0)
          return n / (2.0 * t) + n * (1.0 + cst.d_w) * cst.d_mu / p.radius;
        return n / ((1.0 - p.alpha) * 2.0 * t) +
               n * (2.0 + cst.d_w) * cst.d_mu / ((1.0 - p.alpha) * p.radius) +
               0.5 * c_potential;
      case GradientTheorem::ball_strong:
        return strong.bound(t, p.cutoff->radius);
    }
    return 0.0;
  };

  double proof_margin = std::numeric_limits<double>::infinity();
  for (int ti = 0; ti < static_cast<int>(sol.times.size()); ++ti) {
    const double t = sol.times[static_cast<std::size_t>(ti)];
    if (!(t > 0.0)) continue;
    const double bound = bound_at(t);
    for (int x : sweep) {
      LiYauRow row;
      row.x = x;
      row.t = t;
      row.value = li_yau_f(g, mu, sol, x, ti, p.alpha);
      row.bound = bound;
      row.margin = bound - row.value;
      if (row.margin < rep.min_margin) {
        rep.min_margin = row.margin;
        rep.worst = row;
      }
      if (theorem == GradientTheorem::ball_weak && p.alpha == 0.0) {
        const double proof_bound = n / (2.0 * t) + n * cst.d_w * cst.d_mu / p.radius;
        proof_margin = std::min(proof_margin, proof_bound - row.value);
      }
      rep.rows.push_back(row);
    }
  }
  if (theorem == GradientTheorem::ball_weak && p.alpha == 0.0)
    rep.proof_constant_min_margin = proof_margin;

  // hypothesis: CDE(n, -K) on the sweep set, with K = 0 for the K-less forms
  double hyp_k = p.k;
  if (theorem == GradientTheorem::finite_n0) hyp_k = 0.0;
  if (theorem == GradientTheorem::potential && p.alpha == 0.0) hyp_k = 0.0;
  if (p.hypothesis == HypothesisCheck::assume) {
    rep.hypothesis_checked = false;
    rep.hypothesis_ok = true;
  } else {
    rep.hypothesis_checked = true;
    rep.hypothesis_ok =
        detail::hypothesis_probe(g, mu, p.n, hyp_k, sweep, p.hypothesis, p.seed);
    if (theorem == GradientTheorem::ball_strong) {
      const auto sc = verify_strong_cutoff(g, mu, *p.cutoff, p.cutoff->strength_c,
                                           p.cutoff->radius, p.k);
      rep.hypothesis_ok = rep.hypothesis_ok && sc.passed;
    }
    if (!sol.positive) rep.hypothesis_ok = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// heat solution files: JSON header + columnar CSV
// ---------------------------------------------------------------------------

inline void save_heat_solution(const std::string& base_path, const WeightedGraph& g,
                               const VertexMeasure& mu, const HeatSolution& sol,
                               const Potential* q = nullptr) {
  const std::string csv_path = base_path + ".csv";
  const std::string json_path = base_path + ".json";
  {
    std::ofstream csv(csv_path);
    if (!csv) throw parse_error("cannot open for writing: " + csv_path);
    csv << "t,vertex,u\n";
    char buf[64];
    for (int ti = 0; ti < static_cast<int>(sol.times.size()); ++ti)
      for (int x = 0; x < sol.values.rows(); ++x) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g\n",
                      sol.times[static_cast<std::size_t>(ti)], x, sol.values(x, ti));
        csv << buf;
      }
  }
  ojson j;
  j["format"] = "graphcurv-heat-v1";
  j["times"] = sol.times;
  j["provenance"] = sol.provenance;
  j["positive"] = sol.positive;
  j["conservation"] = ojson{{"max_rel_mass_drift", sol.mass_drift}};
  j["graph"] = graph_to_json(g, mu);
  if (q) {
    ojson pj;
    pj["times"] = q->times;
    ojson cols = ojson::array();
    for (int ti = 0; ti < q->values.cols(); ++ti) {
      ojson col = ojson::array();
      for (int x = 0; x < q->values.rows(); ++x) col.push_back(q->values(x, ti));
      cols.push_back(std::move(col));
    }
    pj["values"] = std::move(cols);
    pj["theta"] = q->theta;
    pj["eta"] = q->eta;
    j["potential"] = std::move(pj);
  }
  j["csv"] = csv_path;
  std::ofstream out(json_path);
  if (!out) throw parse_error("cannot open for writing: " + json_path);
  out << j.dump(2) << "\n";
}

struct LoadedHeatSolution {
  WeightedGraph graph;
  VertexMeasure measure;
  HeatSolution solution;
  bool has_potential = false;
  Potential potential;
};

inline LoadedHeatSolution load_heat_solution(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw parse_error("cannot open: " + json_path);
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(json_path + ": " + e.what());
  }
  if (j.value("format", "") != "graphcurv-heat-v1")
    throw parse_error(json_path + ": not a heat solution header");
  LoadedHeatSolution out;
  auto lg = graph_from_json(j.at("graph"));
  out.graph = std::move(lg.graph);
  out.measure = std::move(lg.measure);
  out.solution.times = j.at("times").get<std::vector<double>>();
  out.solution.provenance = j.value("provenance", "unknown");
  out.solution.positive = j.value("positive", false);
  if (j.contains("conservation"))
    out.solution.mass_drift = j["conservation"].value("max_rel_mass_drift", 0.0);
  if (j.contains("potential")) {
    const auto& pj = j.at("potential");
    auto grid = pj.at("times").get<std::vector<double>>();
    const auto& cols = pj.at("values");
    Eigen::MatrixXd vals(out.graph.num_vertices(), static_cast<int>(cols.size()));
    for (int ti = 0; ti < vals.cols(); ++ti)
      for (int x = 0; x < vals.rows(); ++x)
        vals(x, ti) = cols[static_cast<std::size_t>(ti)][static_cast<std::size_t>(x)].get<double>();
    out.potential = Potential::declared(out.graph, out.measure, std::move(vals), std::move(grid),
                                        pj.at("theta").get<double>(), pj.at("eta").get<double>());
    out.has_potential = true;
  }

  const std::string csv_path = j.at("csv").get<std::string>();
  std::ifstream csv(csv_path);
  if (!csv) throw parse_error("cannot open: " + csv_path);
  out.solution.values.resize(out.graph.num_vertices(),
                             static_cast<int>(out.solution.times.size()));
  std::string line;
  std::getline(csv, line);  // header
  int lineno = 1;
  while (std::getline(csv, line)) {
    ++lineno;
    if (line.empty()) continue;
    double t, u;
    int x;
    if (std::sscanf(line.c_str(), "%lg,%d,%lg", &t, &x, &u) != 3)
      throw parse_error(csv_path + ":" + std::to_string(lineno) + ": expected 't,vertex,u'");
    out.solution.values(x, out.solution.time_index(t)) = u;
  }
  return out;
}

}  // namespace graphcurv
