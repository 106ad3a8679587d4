#pragma once

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include <graphcurv/graph.hpp>
#include <graphcurv/report.hpp>

namespace graphcurv {

// Cross-checking of algebraically equivalent formulas (e.g. the two forms of
// the corrected iterated gradient).  Off by default in release builds; tests
// switch it on.
inline std::atomic<bool>& identity_check_flag() {
#ifdef NDEBUG
  static std::atomic<bool> on{false};
#else
  static std::atomic<bool> on{true};
#endif
  return on;
}

inline void set_identity_checks(bool on) { identity_check_flag().store(on); }

namespace detail {

inline void check_function_size(const WeightedGraph& g, const VertexFunction& f,
                                const char* what) {
  if (static_cast<int>(f.size()) != g.num_vertices())
    throw domain_error(std::string(what) + ": function size does not match vertex count");
}

template <typename F>
inline double averaged_sum(const WeightedGraph& g, const VertexMeasure& mu, int x, F&& h) {
  double s = 0.0;
  for (const Edge& e : g.neighbors(x)) s += e.weight * h(e.to);
  return s / mu[x];
}

inline void check_positive_on_two_ball(const WeightedGraph& g, const VertexFunction& f, int x,
                                       const char* what) {
  auto bad = [&](int v) { return !(f[static_cast<std::size_t>(v)] > 0.0); };
  if (bad(x)) throw domain_error(std::string(what) + ": f must be positive on the 2-ball");
  for (const Edge& e : g.neighbors(x)) {
    if (bad(e.to)) throw domain_error(std::string(what) + ": f must be positive on the 2-ball");
    for (const Edge& e2 : g.neighbors(e.to))
      if (bad(e2.to)) throw domain_error(std::string(what) + ": f must be positive on the 2-ball");
  }
}

inline void check_finite_on_two_ball(const WeightedGraph& g, const VertexFunction& f, int x,
                                     const char* what) {
  auto bad = [&](int v) { return !std::isfinite(f[static_cast<std::size_t>(v)]); };
  if (bad(x)) throw domain_error(std::string(what) + ": f undefined on the 2-ball");
  for (const Edge& e : g.neighbors(x)) {
    if (bad(e.to)) throw domain_error(std::string(what) + ": f undefined on the 2-ball");
    for (const Edge& e2 : g.neighbors(e.to))
      if (bad(e2.to)) throw domain_error(std::string(what) + ": f undefined on the 2-ball");
  }
}

}  // namespace detail

/// mu-Laplacian: (Delta f)(x) = (1/mu(x)) sum_{y~x} w_xy (f(y) - f(x)).
inline double laplacian(const WeightedGraph& g, const VertexMeasure& mu, const VertexFunction& f,
                        int x) {
  g.check_vertex(x);
  detail::check_function_size(g, f, "laplacian");
  const double fx = f[static_cast<std::size_t>(x)];
  double s = 0.0;
  for (const Edge& e : g.neighbors(x)) s += e.weight * (f[static_cast<std::size_t>(e.to)] - fx);
  return s / mu[x];
}

/// Gradient form: Gamma(f,g)(x) = (1/2mu(x)) sum w_xy (f(y)-f(x))(g(y)-g(x)).
inline double gamma(const WeightedGraph& g, const VertexMeasure& mu, const VertexFunction& f,
                    const VertexFunction& h, int x) {
  g.check_vertex(x);
  detail::check_function_size(g, f, "gamma");
  detail::check_function_size(g, h, "gamma");
  const double fx = f[static_cast<std::size_t>(x)];
  const double hx = h[static_cast<std::size_t>(x)];
  double s = 0.0;
  for (const Edge& e : g.neighbors(x))
    s += e.weight * (f[static_cast<std::size_t>(e.to)] - fx) *
         (h[static_cast<std::size_t>(e.to)] - hx);
  return s / (2.0 * mu[x]);
}

inline double gamma(const WeightedGraph& g, const VertexMeasure& mu, const VertexFunction& f,
                    int x) {
  return gamma(g, mu, f, f, x);
}

/// Iterated form, bilinear: Gamma2(f,h) = (Delta Gamma(f,h) - Gamma(f, Delta h)
/// - Gamma(Delta f, h)) / 2, evaluated at x.  Needs f,h on the 2-ball of x.
inline double gamma2(const WeightedGraph& g, const VertexMeasure& mu, const VertexFunction& f,
                     const VertexFunction& h, int x) {
  g.check_vertex(x);
  detail::check_finite_on_two_ball(g, f, x, "gamma2");
  detail::check_finite_on_two_ball(g, h, x, "gamma2");
  const double gfh_x = gamma(g, mu, f, h, x);
  double lap_gamma = 0.0;  // Delta Gamma(f,h)(x)
  for (const Edge& e : g.neighbors(x))
    lap_gamma += e.weight * (gamma(g, mu, f, h, e.to) - gfh_x);
  lap_gamma /= mu[x];

  // Gamma(f, Delta h)(x) + Gamma(Delta f, h)(x), inlined to avoid temporaries
  const double fx = f[static_cast<std::size_t>(x)];
  const double hx = h[static_cast<std::size_t>(x)];
  const double lf_x = laplacian(g, mu, f, x);
  const double lh_x = laplacian(g, mu, h, x);
  double cross = 0.0;
  for (const Edge& e : g.neighbors(x)) {
    const int y = e.to;
    cross += e.weight * ((f[static_cast<std::size_t>(y)] - fx) * (laplacian(g, mu, h, y) - lh_x) +
                         (laplacian(g, mu, f, y) - lf_x) * (h[static_cast<std::size_t>(y)] - hx));
  }
  cross /= 2.0 * mu[x];
  return 0.5 * (lap_gamma - cross);
}

inline double gamma2(const WeightedGraph& g, const VertexMeasure& mu, const VertexFunction& f,
                     int x) {
  return gamma2(g, mu, f, f, x);
}

namespace detail {

// Corrected iterated form, definition route: Gamma2(f) - Gamma(f, Gamma(f)/f).
inline double gamma2_tilde_def(const WeightedGraph& g, const VertexMeasure& mu,
                               const VertexFunction& f, int x) {
  const double g2 = gamma2(g, mu, f, x);
  const double gx = gamma(g, mu, f, x);
  const double fx = f[static_cast<std::size_t>(x)];
  double corr = 0.0;
  for (const Edge& e : g.neighbors(x)) {
    const int y = e.to;
    corr += e.weight * (f[static_cast<std::size_t>(y)] - fx) *
            (gamma(g, mu, f, y) / f[static_cast<std::size_t>(y)] - gx / fx);
  }
  corr /= 2.0 * mu[x];
  return g2 - corr;
}

}  // namespace detail

/// Equivalent form (1/2) Delta Gamma(f) - Gamma(f, Delta(f^2)/(2f)) at x.
inline double gamma2_tilde_alt(const WeightedGraph& g, const VertexMeasure& mu,
                               const VertexFunction& f, int x) {
  g.check_vertex(x);
  detail::check_positive_on_two_ball(g, f, x, "gamma2_tilde");
  const double gx = gamma(g, mu, f, x);
  double lap_gamma = 0.0;
  for (const Edge& e : g.neighbors(x)) lap_gamma += e.weight * (gamma(g, mu, f, e.to) - gx);
  lap_gamma /= mu[x];

  auto half_lap_sq_over_f = [&](int v) {
    // Delta(f^2)(v) / (2 f(v))
    const double fv = f[static_cast<std::size_t>(v)];
    double s = 0.0;
    for (const Edge& e : g.neighbors(v)) {
      const double fy = f[static_cast<std::size_t>(e.to)];
      s += e.weight * (fy * fy - fv * fv);
    }
    return s / (2.0 * mu[v] * fv);
  };
  const double fx = f[static_cast<std::size_t>(x)];
  const double qx = half_lap_sq_over_f(x);
  double cross = 0.0;
  for (const Edge& e : g.neighbors(x))
    cross += e.weight * (f[static_cast<std::size_t>(e.to)] - fx) *
             (half_lap_sq_over_f(e.to) - qx);
  cross /= 2.0 * mu[x];
  return 0.5 * lap_gamma - cross;
}

/// Corrected iterated gradient form used by the exponential curvature
/// condition.  Requires f > 0 on the 2-ball of x.  When identity checks are
/// on, the two equivalent formulas must agree to 1e-10 relative.
inline double gamma2_tilde(const WeightedGraph& g, const VertexMeasure& mu,
                           const VertexFunction& f, int x) {
  g.check_vertex(x);
  detail::check_positive_on_two_ball(g, f, x, "gamma2_tilde");
  const double v = detail::gamma2_tilde_def(g, mu, f, x);
  if (identity_check_flag().load(std::memory_order_relaxed)) {
    const double w = gamma2_tilde_alt(g, mu, f, x);
    if (!approx_equal(v, w, 1e-10, 1e-10))
      throw std::logic_error("gamma2_tilde: the two equivalent forms disagree: " +
                             std::to_string(v) + " vs " + std::to_string(w));
  }
  return v;
}

// ---------------------------------------------------------------------------
// batch variants for the verifier sweeps
// ---------------------------------------------------------------------------

inline VertexFunction laplacian_all(const WeightedGraph& g, const VertexMeasure& mu,
                                    const VertexFunction& f) {
  VertexFunction out(static_cast<std::size_t>(g.num_vertices()));
  for (int x = 0; x < g.num_vertices(); ++x) out[static_cast<std::size_t>(x)] = laplacian(g, mu, f, x);
  return out;
}

inline VertexFunction gamma_all(const WeightedGraph& g, const VertexMeasure& mu,
                                const VertexFunction& f) {
  VertexFunction out(static_cast<std::size_t>(g.num_vertices()));
  for (int x = 0; x < g.num_vertices(); ++x) out[static_cast<std::size_t>(x)] = gamma(g, mu, f, x);
  return out;
}

}  // namespace graphcurv
