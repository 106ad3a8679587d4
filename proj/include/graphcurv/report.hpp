#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

namespace graphcurv {

using ojson = nlohmann::ordered_json;

// Tolerance policy: equality assertions use relative 1e-10 with absolute
// floor 1e-12; inequality verdicts always carry the signed margin.
inline constexpr double rel_tol = 1e-10;
inline constexpr double abs_tol = 1e-12;

inline bool approx_equal(double a, double b, double rel = rel_tol, double abs = abs_tol) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

/// Generic verification record: LHS <= RHS with margin = RHS - LHS.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool hypothesis_checked = true;
  ojson witness = ojson::object();

  static BoundReport of(double lhs, double rhs) {
    BoundReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    return r;
  }

  bool passed(double tol = 0.0) const { return margin >= -tol; }

  ojson to_json() const {
    ojson j;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["margin"] = margin;
    j["witness"] = witness;
    j["hypothesis_checked"] = hypothesis_checked;
    return j;
  }
};

}  // namespace graphcurv
