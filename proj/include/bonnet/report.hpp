#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bonnet/charts.hpp"

namespace bonnet {

/// A named residual with the tolerance it is held to by default.
struct Measurement {
  std::string name;
  ResidualStats stats;
  double tolerance;
};

struct Check {
  std::string name;
  double max = 0.0;
  double mean = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<double> ratio;  // Richardson ratio, convergence checks only
  std::string note;
};

class Report {
 public:
  /// Adds a measurement; an entry in overrides replaces its tolerance.
  void add(const Measurement& m, const std::map<std::string, double>& overrides = {}) {
    double tol = m.tolerance;
    if (const auto it = overrides.find(m.name); it != overrides.end()) tol = it->second;
    add(m.name, m.stats.max, m.stats.mean, tol);
  }

  void add(const std::string& name, double max, double mean, double tolerance) {
    Check c;
    c.name = name;
    c.max = max;
    c.mean = mean;
    c.tolerance = tolerance;
    c.pass = max <= tolerance;  // NaN fails
    checks_.push_back(std::move(c));
  }

  void add(Check c) { checks_.push_back(std::move(c)); }

  const std::vector<Check>& checks() const { return checks_; }

  bool all_pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks_)
      if (!c.pass) out.push_back(c.name);
    return out;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

 private:
  std::vector<Check> checks_;
};

/// Richardson check between a residual on spacing h and on h/2: passes when
/// coarse/fine lies in [lo, hi]. Residuals at rounding level on both grids
/// (the discrete identity holds exactly) carry no rate and are reported as
/// exact.
inline Check richardson_check(const std::string& name, double coarse, double fine, double scale, double lo = 3.2,
                              double hi = 4.8) {
  Check c;
  c.name = name;
  const double floor = 1e-13 * std::max(1.0, scale);
  const double mid = 0.5 * (lo + hi);
  c.tolerance = 0.5 * (hi - lo);
  c.mean = fine;
  if (coarse <= floor && fine <= floor) {
    c.max = 0.0;
    c.pass = true;
    c.note = "exact";
    return c;
  }
  const double ratio = coarse / fine;
  c.ratio = ratio;
  c.max = std::abs(ratio - mid);
  c.pass = c.max <= c.tolerance;
  return c;
}

/// One-sided variant: passes when coarse/fine is at least min_ratio. Used
/// where only a lower bound on the order is claimed.
inline Check convergence_floor_check(const std::string& name, double coarse, double fine, double scale,
                                     double min_ratio) {
  Check c;
  c.name = name;
  c.mean = fine;
  c.tolerance = 0.0;
  const double floor = 1e-13 * std::max(1.0, scale);
  if (coarse <= floor && fine <= floor) {
    c.pass = true;
    c.note = "exact";
    return c;
  }
  const double ratio = coarse / fine;
  c.ratio = ratio;
  c.max = std::max(0.0, min_ratio - ratio);
  c.pass = ratio >= min_ratio;
  c.note = "ratio >= " + std::to_string(min_ratio).substr(0, 3);
  return c;
}

}  // namespace bonnet
