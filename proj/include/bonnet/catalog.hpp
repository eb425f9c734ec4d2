#pragma once

// Closed-form isothermic surfaces x: Sigma -> S^3 in R^4, given in conformal
// curvature-line coordinates, with analytic first derivatives, unit normal in
// S^3 and the Christoffel-dual 1-form omega = dx o Q#.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bonnet/charts.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/exterior4.hpp"

namespace bonnet {

using Complex = std::complex<double>;
using QuadraticForm = Field<Sym2>;

/// Pointwise data of a surface in S^3 at one parameter value.
struct SurfacePoint {
  Vec4 x, x_u, x_v;
  Vec4 n, n_u, n_v;
  double e2phi = 1.0;  // conformal factor |x_u|^2 = |x_v|^2
};

/// A surface in conformal curvature-line coordinates (s,t), carrying the
/// holomorphic quadratic differential q = c dz^2 on the chart.
///
/// For q = c dz^2 to commute with the second fundamental form, the chart
/// coordinate z = u + iv must be a rotation of the curvature-line coordinate
/// w = s + it with dw^2 proportional to c dz^2, so w = exp(i arg(c)/2) z.
/// For real positive c the chart is the curvature-line chart itself.
class IsothermicPatch {
 public:
  using Evaluator = std::function<SurfacePoint(double, double)>;

  IsothermicPatch(std::string name, std::map<std::string, double> params, Complex c, Evaluator curvature_line)
      : name_(std::move(name)), params_(std::move(params)), c_(c), eval_(std::move(curvature_line)) {
    if (c_ == Complex(0.0, 0.0)) throw PreconditionError("quadratic differential coefficient c must be nonzero");
    const double theta = 0.5 * std::arg(c_);
    cos_ = std::cos(theta);
    sin_ = std::sin(theta);
  }

  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }
  Complex c() const { return c_; }

  SurfacePoint operator()(double u, double v) const {
    const double s = cos_ * u - sin_ * v;
    const double t = sin_ * u + cos_ * v;
    SurfacePoint p = eval_(s, t);
    SurfacePoint r = p;
    r.x_u = cos_ * p.x_u + sin_ * p.x_v;
    r.x_v = -sin_ * p.x_u + cos_ * p.x_v;
    r.n_u = cos_ * p.n_u + sin_ * p.n_v;
    r.n_v = -sin_ * p.n_u + cos_ * p.n_v;
    // vol_x ^ x ^ n = vol
    if (wedge4(r.x_u, r.x_v, r.x, r.n) < 0.0) {
      r.n = -r.n;
      r.n_u = -r.n_u;
      r.n_v = -r.n_v;
    }
    return r;
  }

 private:
  std::string name_;
  std::map<std::string, double> params_;
  Complex c_;
  Evaluator eval_;
  double cos_ = 1.0, sin_ = 0.0;
};

// ---------------------------------------------------------------------------
// Surface constructions.

namespace detail {

using Vec3 = std::array<double, 3>;

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

/// Conformal R^3 surface data in curvature-line coordinates.
struct EuclideanPoint {
  Vec3 X, X_s, X_t;
  Vec3 N, N_s, N_t;
  double e2phi = 1.0;
};

/// Inverse stereographic projection R^3 -> S^3,
/// X -> (2X, |X|^2 - 1) / (|X|^2 + 1), applied to a surface with its normal.
inline SurfacePoint inverse_stereographic(const EuclideanPoint& e) {
  const double r2 = dot3(e.X, e.X);
  const double lam = 2.0 / (1.0 + r2);
  const double a = dot3(e.X, e.N);

  auto push = [&](const Vec3& V) {
    const double xv = dot3(e.X, V);
    Vec4 out;
    for (int k = 0; k < 3; ++k) out[k] = lam * V[k] - lam * lam * xv * e.X[k];
    out[3] = lam * lam * xv;
    return out;
  };
  auto normal_derivative = [&](const Vec3& X_d, const Vec3& N_d) {
    const double lam_d = -lam * lam * dot3(e.X, X_d);
    const double a_d = dot3(X_d, e.N) + dot3(e.X, N_d);
    Vec4 out;
    for (int k = 0; k < 3; ++k) out[k] = N_d[k] - (lam_d * a + lam * a_d) * e.X[k] - lam * a * X_d[k];
    out[3] = lam_d * a + lam * a_d;
    return out;
  };

  SurfacePoint p;
  for (int k = 0; k < 3; ++k) p.x[k] = lam * e.X[k];
  p.x[3] = (r2 - 1.0) / (r2 + 1.0);
  p.x_u = push(e.X_s);
  p.x_v = push(e.X_t);
  for (int k = 0; k < 3; ++k) p.n[k] = e.N[k] - lam * a * e.X[k];
  p.n[3] = lam * a;
  p.n_u = normal_derivative(e.X_s, e.N_s);
  p.n_v = normal_derivative(e.X_t, e.N_t);
  p.e2phi = lam * lam * e.e2phi;
  return p;
}

}  // namespace detail

/// Homogeneous torus (r cos(s/r), r sin(s/r), q cos(t/q), q sin(t/q)),
/// q = sqrt(1 - r^2). Flat: e^{2 phi} = 1.
inline IsothermicPatch homogeneous_torus(double r, Complex c = 1.0) {
  if (!(r > 0.0 && r < 1.0)) throw PreconditionError("homogeneous_torus: r must lie in (0,1)");
  const double q = std::sqrt(1.0 - r * r);
  return IsothermicPatch("homogeneous_torus", {{"r", r}}, c, [r, q](double s, double t) {
    const double cu = std::cos(s / r), su = std::sin(s / r);
    const double cv = std::cos(t / q), sv = std::sin(t / q);
    SurfacePoint p;
    p.x = Vec4{{r * cu, r * su, q * cv, q * sv}};
    p.x_u = Vec4{{-su, cu, 0.0, 0.0}};
    p.x_v = Vec4{{0.0, 0.0, -sv, cv}};
    p.n = Vec4{{q * cu, q * su, -r * cv, -r * sv}};
    p.n_u = (q / r) * Vec4{{-su, cu, 0.0, 0.0}};
    p.n_v = (r / q) * Vec4{{0.0, 0.0, sv, -cv}};
    p.e2phi = 1.0;
    return p;
  });
}

/// Inverse stereographic image of the circular cylinder of radius rho,
/// (rho cos(s/rho), rho sin(s/rho), t), in its isothermic coordinates.
inline IsothermicPatch stereo_cylinder(double rho, Complex c = 1.0) {
  if (!(rho > 0.0)) throw PreconditionError("stereo_cylinder: rho must be positive");
  return IsothermicPatch("stereo_cylinder", {{"rho", rho}}, c, [rho](double s, double t) {
    const double cs = std::cos(s / rho), ss = std::sin(s / rho);
    detail::EuclideanPoint e;
    e.X = {rho * cs, rho * ss, t};
    e.X_s = {-ss, cs, 0.0};
    e.X_t = {0.0, 0.0, 1.0};
    e.N = {cs, ss, 0.0};
    e.N_s = {-ss / rho, cs / rho, 0.0};
    e.N_t = {0.0, 0.0, 0.0};
    return detail::inverse_stereographic(e);
  });
}

/// Totally umbilic control: inverse stereographic image of the plane z = 0.
inline IsothermicPatch great_sphere(Complex c = 1.0) {
  return IsothermicPatch("great_sphere", {}, c, [](double s, double t) {
    detail::EuclideanPoint e;
    e.X = {s, t, 0.0};
    e.X_s = {1.0, 0.0, 0.0};
    e.X_t = {0.0, 1.0, 0.0};
    e.N = {0.0, 0.0, 1.0};
    e.N_s = {0.0, 0.0, 0.0};
    e.N_t = {0.0, 0.0, 0.0};
    return detail::inverse_stereographic(e);
  });
}

struct ParamInfo {
  std::string name;
  double default_value;
  double lower;
  std::optional<double> upper;  // both bounds exclusive
};

struct SurfaceInfo {
  std::string name;
  std::vector<ParamInfo> params;
  std::string summary;
};

inline const std::vector<SurfaceInfo>& surface_registry() {
  static const std::vector<SurfaceInfo> reg{
      {"homogeneous_torus",
       {{"r", 1.0 / std::numbers::sqrt2, 0.0, 1.0}},
       "flat torus (r cos(u/r), r sin(u/r), s cos(v/s), s sin(v/s)), s = sqrt(1 - r^2)"},
      {"stereo_cylinder",
       {{"rho", 1.0, 0.0, std::nullopt}},
       "inverse stereographic image of the circular cylinder of radius rho"},
      {"great_sphere", {}, "totally umbilic 2-sphere, inverse stereographic image of a plane"},
  };
  return reg;
}

inline std::string describe_range(const ParamInfo& p) {
  std::ostringstream os;
  os << p.name << "∈(" << p.lower << ",";
  if (p.upper)
    os << *p.upper;
  else
    os << "inf";
  os << ")";
  return os.str();
}

/// Builds a catalog surface by name; missing parameters take their defaults.
inline IsothermicPatch surface(const std::string& name, const std::map<std::string, double>& params = {},
                               Complex c = 1.0) {
  const SurfaceInfo* info = nullptr;
  for (const auto& s : surface_registry())
    if (s.name == name) info = &s;
  if (!info) throw PreconditionError("unknown surface '" + name + "'");
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& p : info->params) known = known || p.name == key;
    if (!known) throw PreconditionError("surface '" + name + "' has no parameter '" + key + "'");
  }
  auto get = [&](const std::string& key) {
    const auto it = params.find(key);
    if (it != params.end()) return it->second;
    for (const auto& p : info->params)
      if (p.name == key) return p.default_value;
    return 0.0;
  };
  if (name == "homogeneous_torus") return homogeneous_torus(get("r"), c);
  if (name == "stereo_cylinder") return stereo_cylinder(get("rho"), c);
  return great_sphere(c);
}

// ---------------------------------------------------------------------------
// Sampling.

enum class DerivMode { analytic, finite_difference };

/// A surface sampled on a chart: positions, normals and their differentials.
struct SurfaceSample {
  Field<Vec4> x;
  OneForm<Vec4> dx;
  Field<Vec4> n;
  OneForm<Vec4> dn;
  Field<double> e2phi;
  Complex c{1.0, 0.0};

  const GridChart& chart() const { return x.chart(); }
};

inline SurfaceSample sample_surface(const IsothermicPatch& p, const GridChart& chart,
                                    DerivMode mode = DerivMode::analytic) {
  const Field<SurfacePoint> pts = sample(chart, [&](double u, double v) { return p(u, v); });
  SurfaceSample s;
  s.c = p.c();
  s.x = map(pts, [](const SurfacePoint& q) { return q.x; });
  s.n = map(pts, [](const SurfacePoint& q) { return q.n; });
  if (mode == DerivMode::analytic) {
    s.dx = {map(pts, [](const SurfacePoint& q) { return q.x_u; }), map(pts, [](const SurfacePoint& q) { return q.x_v; })};
    s.dn = {map(pts, [](const SurfacePoint& q) { return q.n_u; }), map(pts, [](const SurfacePoint& q) { return q.n_v; })};
    s.e2phi = map(pts, [](const SurfacePoint& q) { return q.e2phi; });
  } else {
    s.dx = d_scalar(s.x);
    s.dn = d_scalar(s.n);
    s.e2phi = zip(s.dx.coeff_u, s.dx.coeff_v,
                  [](const Vec4& a, const Vec4& b) { return 0.5 * (dot(a, a) + dot(b, b)); });
  }
  return s;
}

// ---------------------------------------------------------------------------
// Quadratic differential and the Christoffel 1-form.

/// Q = 2 Re(c dz^2) = 2a(du^2 - dv^2) - 4b du dv, c = a + ib.
constexpr Sym2 two_re_q(Complex c) { return make_sym2(2.0 * c.real(), -2.0 * c.imag(), -2.0 * c.real()); }

/// Re(i c dz^2) = -b(du^2 - dv^2) - 2a du dv.
constexpr Sym2 re_iq(Complex c) { return make_sym2(-c.imag(), -c.real(), c.imag()); }

/// Inverse of re_iq: reads c off a trace-free symmetric Re(iq) matrix.
constexpr Complex c_from_re_iq(const Sym2& m) { return {-m[1], -0.5 * (m[0] - m[2])}; }

inline QuadraticForm constant_form(const GridChart& chart, const Sym2& value) { return QuadraticForm(chart, value); }

/// omega = dx o Q# with Q# = e^{-2phi} (2a, -2b; -2b, -2a) in the (d/du, d/dv) frame.
inline OneForm<Vec4> christoffel_omega(const OneForm<Vec4>& dx, const Field<double>& e2phi, Complex c) {
  if (c == Complex(0.0, 0.0)) throw PreconditionError("christoffel_omega: c must be nonzero");
  const double a = c.real(), b = c.imag();
  const GridChart& g = dx.chart();
  OneForm<Vec4> w;
  w.coeff_u = generate(g, [&](std::size_t k) {
    return Vec4((2.0 * a * dx.coeff_u[k] - 2.0 * b * dx.coeff_v[k]) / e2phi[k]);
  });
  w.coeff_v = generate(g, [&](std::size_t k) {
    return Vec4((-2.0 * b * dx.coeff_u[k] - 2.0 * a * dx.coeff_v[k]) / e2phi[k]);
  });
  return w;
}

/// Symmetrized pairing <alpha, beta> of two R^4-valued 1-forms; the
/// antisymmetric remainder is pairing_antisymmetric().
inline QuadraticForm pairing(const OneForm<Vec4>& a, const OneForm<Vec4>& b) {
  return generate(a.chart(), [&](std::size_t k) {
    return make_sym2(dot(a.coeff_u[k], b.coeff_u[k]),
                     0.5 * (dot(a.coeff_u[k], b.coeff_v[k]) + dot(a.coeff_v[k], b.coeff_u[k])),
                     dot(a.coeff_v[k], b.coeff_v[k]));
  });
}

/// Antisymmetric part <alpha_u, beta_v> - <alpha_v, beta_u> of the pairing.
inline Field<double> pairing_antisymmetric(const OneForm<Vec4>& a, const OneForm<Vec4>& b) {
  return generate(a.chart(), [&](std::size_t k) {
    return dot(a.coeff_u[k], b.coeff_v[k]) - dot(a.coeff_v[k], b.coeff_u[k]);
  });
}

/// Christoffel 1-form of a catalog patch, with the defining relation
/// <dx o Q#, dx> = 2 Re q checked at every node.
inline OneForm<Vec4> christoffel_omega(const SurfaceSample& s, double tolerance = 1e-9) {
  OneForm<Vec4> w = christoffel_omega(s.dx, s.e2phi, s.c);
  const Sym2 Q = two_re_q(s.c);
  const auto P = pairing(w, s.dx);
  const ResidualStats r = stats(map(P, [&](const Sym2& m) { return Sym2(m - Q); }));
  const double scale = std::max(1.0, norm(Q));
  if (!(r.max <= tolerance * scale)) {
    std::ostringstream os;
    os << "christoffel_omega: <omega, dx> deviates from 2 Re q by " << r.max << " at "
       << describe_node(s.chart(), r.argmax) << " (chart not conformal?)";
    throw NumericalRefusal(os.str());
  }
  return w;
}

inline QuadraticForm first_fundamental_form(const OneForm<Vec4>& dx) { return pairing(dx, dx); }

/// II(X,Y) = -<dx(X), dn(Y)>, symmetrized.
inline QuadraticForm second_fundamental_form_S3(const SurfaceSample& s) {
  return generate(s.chart(), [&](std::size_t k) {
    const Vec4 &xu = s.dx.coeff_u[k], &xv = s.dx.coeff_v[k];
    const Vec4 &nu = s.dn.coeff_u[k], &nv = s.dn.coeff_v[k];
    return make_sym2(-dot(xu, nu), -0.5 * (dot(xu, nv) + dot(xv, nu)), -dot(xv, nv));
  });
}

}  // namespace bonnet
