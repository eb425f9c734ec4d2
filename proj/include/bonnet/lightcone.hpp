#pragma once

// Light-cone model of the conformal 3-sphere inside R^{4,1}: Minkowski
// algebra, the lift x -> x + q of S^3 onto the null cone, the retraction
// form eta = omega^x + omega^q, and Moebius transformations.

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "bonnet/catalog.hpp"
#include "bonnet/charts.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/exterior4.hpp"

namespace bonnet {

struct Vec5Tag {};
struct Bivector5Tag {};

/// R^{4,1} = R^4 + span{q}, <q,q> = -1; q is the fifth basis vector.
using Vec5 = Coords<5, Vec5Tag>;

/// Lambda^2 R^{4,1} = Lambda^2 R^4 + R^4 ^ q: six so(4) coordinates followed
/// by the four coefficients t of t ^ q.
using Bivector5 = Coords<10, Bivector5Tag>;

using Mat5 = Eigen::Matrix<double, 5, 5>;

constexpr Vec5 make_vec5(const Vec4& spatial, double timelike) {
  return Vec5{{spatial[0], spatial[1], spatial[2], spatial[3], timelike}};
}
constexpr Vec4 spatial(const Vec5& v) { return Vec4{{v[0], v[1], v[2], v[3]}}; }
constexpr double timelike(const Vec5& v) { return v[4]; }
constexpr Vec5 q_vector() { return make_vec5(Vec4{}, 1.0); }

constexpr Bivector5 make_bivector5(const Bivector4& so4, const Vec4& translationlike) {
  Bivector5 b;
  for (std::size_t k = 0; k < 6; ++k) b[k] = so4[k];
  for (std::size_t k = 0; k < 4; ++k) b[6 + k] = translationlike[k];
  return b;
}
constexpr Bivector4 so4_part(const Bivector5& b) { return Bivector4{{b[0], b[1], b[2], b[3], b[4], b[5]}}; }
constexpr Vec4 translationlike(const Bivector5& b) { return Vec4{{b[6], b[7], b[8], b[9]}}; }

/// Signature (4,1) inner product.
constexpr double mink_inner(const Vec5& a, const Vec5& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3] - a[4] * b[4];
}

inline Mat5 minkowski_gram() {
  Mat5 G = Mat5::Identity();
  G(4, 4) = -1.0;
  return G;
}

/// Null lift y = x + q of a point of S^3; <y,q> = -1.
inline Vec5 lift(const Vec4& x) {
  if (std::abs(norm(x) - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "lift: point is not on S^3 (|x| = " << norm(x) << ")";
    throw PreconditionError(os.str());
  }
  return make_vec5(x, 1.0);
}

/// a^b for a = a4 + alpha q, b = b4 + beta q:
/// a4^b4 + (beta a4 - alpha b4)^q.
constexpr Bivector5 wedge5(const Vec5& a, const Vec5& b) {
  return make_bivector5(wedge(spatial(a), spatial(b)), timelike(b) * spatial(a) - timelike(a) * spatial(b));
}

/// so(4,1) action (a^b)c = <a,c>b - <b,c>a with the Minkowski product.
/// For t^q: (t^q)c = (t.c4) q + c5 t.
constexpr Vec5 act(const Bivector5& B, const Vec5& c) {
  const Vec4 t = translationlike(B);
  const Vec4 c4 = spatial(c);
  return make_vec5(act(so4_part(B), c4) + timelike(c) * t, dot(t, c4));
}

/// Matrix of c -> act(B, c).
inline Mat5 as_matrix(const Bivector5& B) {
  Mat5 M;
  for (int col = 0; col < 5; ++col) {
    Vec5 e;
    e[static_cast<std::size_t>(col)] = 1.0;
    const Vec5 img = act(B, e);
    for (int row = 0; row < 5; ++row) M(row, col) = img[static_cast<std::size_t>(row)];
  }
  return M;
}

/// Inverse of as_matrix on so(4,1).
inline Bivector5 from_matrix(const Mat5& M) {
  Bivector4 so4;
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [p, q] = b4::pairs[k];
    so4[k] = 0.5 * (M(q, p) - M(p, q));
  }
  Vec4 t;
  for (int k = 0; k < 4; ++k) t[static_cast<std::size_t>(k)] = 0.5 * (M(4, k) + M(k, 4));
  return make_bivector5(so4, t);
}

/// Max entry of g^T G g - G.
inline double lorentz_defect(const Mat5& g) {
  const Mat5 G = minkowski_gram();
  return (g.transpose() * G * g - G).cwiseAbs().maxCoeff();
}

inline Vec5 apply(const Mat5& g, const Vec5& v) {
  Vec5 out;
  for (int r = 0; r < 5; ++r) {
    double s = 0.0;
    for (int c = 0; c < 5; ++c) s += g(r, c) * v[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = s;
  }
  return out;
}

inline void require_lorentz(const Mat5& g) {
  const double defect = lorentz_defect(g);
  if (!(defect <= 1e-10)) {
    std::ostringstream os;
    os << "Moebius map does not preserve the Minkowski product (defect " << defect << ")";
    throw PreconditionError(os.str());
  }
}

/// Ad_g B = g B g^{-1}, with g^{-1} = G g^T G.
inline Bivector5 adjoint_action(const Mat5& g, const Bivector5& B) {
  const Mat5 G = minkowski_gram();
  return from_matrix(g * as_matrix(B) * (G * g.transpose() * G));
}

// ---------------------------------------------------------------------------
// Retraction form.

/// eta as a 1-form with values in Lambda^2 R^{4,1}.
using EtaField = OneForm<Bivector5>;

inline Bivector5 eta_value(const Vec4& omega, const Vec4& x) { return make_bivector5(wedge(omega, x), omega); }

/// eta = omega^x + omega^q. Requires omega orthogonal to x at every node.
inline EtaField assemble_eta(const OneForm<Vec4>& omega, const Field<Vec4>& x, double tolerance = 1e-8) {
  const GridChart& g = x.chart();
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double du = std::abs(dot(omega.coeff_u[k], x[k]));
    const double dv = std::abs(dot(omega.coeff_v[k], x[k]));
    if (du > tolerance || dv > tolerance) {
      std::ostringstream os;
      os << "assemble_eta: omega is not orthogonal to x (|<omega,x>| = " << std::max(du, dv) << ") at "
         << describe_node(g, k);
      throw PreconditionError(os.str());
    }
  }
  return pointwise(omega, x, [](const Vec4& w, const Vec4& p) { return eta_value(w, p); });
}

/// Distance of B from f ^ f-perp, f = span{y}, y = x + q: B must kill y and
/// send every vector of y-perp into span{y}. y-perp is spanned by y and
/// (e,0) for e orthogonal to x.
inline double retraction_range_residual(const Bivector5& B, const Vec4& x) {
  const Vec5 y = make_vec5(x, 1.0);
  double r = norm(act(B, y));
  // Orthonormal complement of x in R^4 via projection of the standard basis.
  Eigen::Matrix4d P = Eigen::Matrix4d::Identity();
  const Eigen::Vector4d xv(x[0], x[1], x[2], x[3]);
  P -= xv * xv.transpose() / xv.squaredNorm();
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector4d e = P.col(k);
    const Vec5 img = act(B, make_vec5(Vec4{{e[0], e[1], e[2], e[3]}}, 0.0));
    // img parallel to y = (x, 1) iff spatial(img) = timelike(img) x
    r = std::max(r, norm(spatial(img) - timelike(img) * x));
  }
  return r;
}

/// |act(eta_X, dsigma(Y)) + act(eta_Y, dsigma(X)) - 2 Q(X,Y) sigma|, maximized
/// over X,Y in {d/du, d/dv}, with sigma = x + q and dsigma = (dx, 0).
inline Field<double> theorem1_residual(const EtaField& eta, const Field<Vec4>& x, const OneForm<Vec4>& dx,
                                       const QuadraticForm& Q) {
  return generate(x.chart(), [&](std::size_t k) {
    const Vec5 sigma = make_vec5(x[k], 1.0);
    const Vec5 ds[2] = {make_vec5(dx.coeff_u[k], 0.0), make_vec5(dx.coeff_v[k], 0.0)};
    const Bivector5 e[2] = {eta.coeff_u[k], eta.coeff_v[k]};
    const double q[2][2] = {{Q[k][0], Q[k][1]}, {Q[k][1], Q[k][2]}};
    double worst = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        const Vec5 lhs = act(e[a], ds[b]) + act(e[b], ds[a]);
        worst = std::max(worst, norm(lhs - 2.0 * q[a][b] * sigma));
      }
    return worst;
  });
}

struct EtaClosure {
  TwoForm<Bivector5> d_eta;              // finite-difference d eta
  ResidualStats eta;                     // |d eta|
  ResidualStats d_omega;                 // |d omega|, the R^4 ^ q component
  ResidualStats d_omega_wedge_x;         // |d(omega ^ x)|, the so(4) component
  ResidualStats omega_wedge_dx;          // |omega ^ dx|, algebraic
  ResidualStats product_rule_mismatch;   // |d(omega^x) - (d omega ^ x - omega ^ dx)|
};

/// Closure of eta, split into d omega = 0 and omega ^ dx = 0. omega is read
/// off the R^4 ^ q component of eta.
inline EtaClosure eta_closure_residual(const EtaField& eta, const Field<Vec4>& x, const OneForm<Vec4>& dx) {
  EtaClosure out;
  const GridChart& g = x.chart();
  out.d_eta = d_oneform(eta);
  out.eta = stats(out.d_eta.coeff);
  const OneForm<Vec4> omega{map(eta.coeff_u, [](const Bivector5& b) { return translationlike(b); }),
                            map(eta.coeff_v, [](const Bivector5& b) { return translationlike(b); })};
  const TwoForm<Vec4> d_omega = d_oneform(omega);
  const Field<Bivector4> d_so4 = map(out.d_eta.coeff, [](const Bivector5& b) { return so4_part(b); });
  const TwoForm<Bivector4> w_dx = wedge_vv(omega, dx);
  out.d_omega = stats(d_omega.coeff);
  out.d_omega_wedge_x = stats(d_so4);
  out.omega_wedge_dx = stats(w_dx.coeff);
  out.product_rule_mismatch = stats(generate(g, [&](std::size_t k) {
    return Bivector4(d_so4[k] - (wedge(d_omega.coeff[k], x[k]) - w_dx.coeff[k]));
  }));
  return out;
}

// ---------------------------------------------------------------------------
// Moebius transformations.

struct MovedSurface {
  Field<Vec4> x;
  OneForm<Vec4> dx;
  Field<double> e2phi;
};

/// Image of a sampled surface under g in O(4,1): y' = g(x+q) rescaled so that
/// <y',q> = -1, x' its spatial part; derivatives by the quotient rule.
inline MovedSurface mobius_apply(const Mat5& g, const Field<Vec4>& x, const OneForm<Vec4>& dx) {
  require_lorentz(g);
  const GridChart& chart = x.chart();
  for (std::size_t k = 0; k < chart.size(); ++k) {
    const Vec5 gy = apply(g, make_vec5(x[k], 1.0));
    if (!(std::abs(timelike(gy)) > 1e-9 * norm(gy))) {
      throw PreconditionError("mobius_apply: image leaves the affine chart at " + describe_node(chart, k));
    }
  }
  auto moved = [&](std::size_t k, int dir) {
    const Vec5 gy = apply(g, make_vec5(x[k], 1.0));
    const double mu = timelike(gy);
    if (dir < 0) return spatial(gy) / mu;
    const Vec5 gdy = apply(g, make_vec5(dx.at(k, dir), 0.0));
    return Vec4(spatial(gdy) / mu - (timelike(gdy) / (mu * mu)) * spatial(gy));
  };
  MovedSurface out;
  out.x = generate(chart, [&](std::size_t k) { return moved(k, -1); });
  out.dx = {generate(chart, [&](std::size_t k) { return moved(k, 0); }),
            generate(chart, [&](std::size_t k) { return moved(k, 1); })};
  out.e2phi = zip(out.dx.coeff_u, out.dx.coeff_v,
                  [](const Vec4& a, const Vec4& b) { return 0.5 * (dot(a, a) + dot(b, b)); });
  return out;
}

inline EtaField adjoint_action(const Mat5& g, const EtaField& eta) {
  require_lorentz(g);
  auto ad = [&g](const Bivector5& b) { return adjoint_action(g, b); };
  return {map(eta.coeff_u, ad), map(eta.coeff_v, ad)};
}

/// Boost of rapidity t along the unit spatial direction d.
inline Mat5 boost(const Vec4& d, double t) {
  const Eigen::Vector4d dv = Eigen::Vector4d(d[0], d[1], d[2], d[3]).normalized();
  Mat5 g = Mat5::Identity();
  g.topLeftCorner<4, 4>() += (std::cosh(t) - 1.0) * dv * dv.transpose();
  g.topRightCorner<4, 1>() = std::sinh(t) * dv;
  g.bottomLeftCorner<1, 4>() = std::sinh(t) * dv.transpose();
  g(4, 4) = std::cosh(t);
  return g;
}

/// Embeds an element of O(4) as the stabilizer of q.
inline Mat5 rotation(const Eigen::Matrix4d& R) {
  Mat5 g = Mat5::Identity();
  g.topLeftCorner<4, 4>() = R;
  return g;
}

}  // namespace bonnet
