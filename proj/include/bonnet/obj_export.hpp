#pragma once

// Wavefront OBJ export of grid surfaces. Each grid cell becomes two
// triangles, (i,j),(i+1,j),(i+1,j+1) and (i,j),(i+1,j+1),(i,j+1), so the
// winding follows the (u,v) orientation of the chart.

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "bonnet/charts.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/exterior4.hpp"
#include "bonnet/json_io.hpp"

namespace bonnet {

using Point3 = std::array<double, 3>;

inline void write_obj(const std::string& path, const Field<Point3>& pts, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  for (const auto& line : header) out << "# " << line << '\n';
  const GridChart& g = pts.chart();
  for (std::size_t k = 0; k < g.size(); ++k) {
    out << "v " << format_double(pts[k][0]) << ' ' << format_double(pts[k][1]) << ' ' << format_double(pts[k][2])
        << '\n';
  }
  auto id = [&](int i, int j) { return g.index(i, j) + 1; };
  for (int i = 0; i + 1 < g.nu; ++i)
    for (int j = 0; j + 1 < g.nv; ++j) {
      out << "f " << id(i, j) << ' ' << id(i + 1, j) << ' ' << id(i + 1, j + 1) << '\n';
      out << "f " << id(i, j) << ' ' << id(i + 1, j + 1) << ' ' << id(i, j + 1) << '\n';
    }
  if (!out) throw PreconditionError("write to '" + path + "' failed");
}

/// Coordinates of a bivector in an orthonormal basis of a 3-dim subspace.
inline Field<Point3> coordinates_in(const Field<Bivector4>& f, const std::array<Bivector4, 3>& basis) {
  return map(f, [&](const Bivector4& b) { return Point3{dot(b, basis[0]), dot(b, basis[1]), dot(b, basis[2])}; });
}

inline std::vector<std::string> bivector_obj_header(const char* which) {
  const bool plus = which[0] == '+';
  return {std::string("F") + which + " as a surface in R^3",
          std::string("coordinates: inner products with the orthonormal ") + (plus ? "self-dual" : "anti-self-dual") +
              " basis",
          plus ? "(e12+e34)/sqrt2, (e13-e24)/sqrt2, (e14+e23)/sqrt2" : "(e12-e34)/sqrt2, (e13+e24)/sqrt2, (e14-e23)/sqrt2",
          "the so(3) = R^3 scale is not canonical; the unit-basis convention here differs from the "
          "entrywise (e12, e13, e14) reading by a factor sqrt2"};
}

/// Stereographic projection from e4: X = (x1, x2, x3) / (1 - x4). Returns
/// nothing when some node has 1 - x4 below pole_gap.
inline std::optional<Field<Point3>> stereographic(const Field<Vec4>& x, double pole_gap = 1e-3) {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!(1.0 - x[k][3] >= pole_gap)) return std::nullopt;
  return map(x, [](const Vec4& p) {
    const double s = 1.0 / (1.0 - p[3]);
    return Point3{s * p[0], s * p[1], s * p[2]};
  });
}

}  // namespace bonnet
