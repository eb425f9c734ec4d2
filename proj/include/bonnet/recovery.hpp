#pragma once

// Reconstruction of the isothermic surface behind a Bonnet pair (F+, F-) with
// unit normals n+-. The planes W+- = span{im(dF+ +- dF-), n+ +- n-} are
// kappa-isotropic and swapped by the Hodge star; exactly one of them has the
// form R^4 ^ x, which yields x, then omega from dF = omega ^ x.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "bonnet/bonnet_pair.hpp"
#include "bonnet/catalog.hpp"
#include "bonnet/charts.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/exterior4.hpp"
#include "bonnet/report.hpp"

namespace bonnet {

/// Orthonormal basis of a 3-plane in Lambda^2 R^4, with the singular values
/// of the spanning set it was built from.
struct PlaneBasis {
  std::array<Bivector4, 3> basis{};
  std::array<double, 3> singular_values{};
};

struct IsotropicPlanes {
  PlaneBasis plus;   // W+
  PlaneBasis minus;  // W-
};

using IsotropicPlaneField = Field<IsotropicPlanes>;

inline PlaneBasis orthonormal_span(const std::array<Bivector4, 3>& vectors) {
  Eigen::Matrix<double, 6, 3> A;
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 6; ++r) A(r, c) = vectors[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 3>> svd(A, Eigen::ComputeFullU);
  PlaneBasis p;
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 6; ++r) p.basis[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = svd.matrixU()(r, c);
    p.singular_values[static_cast<std::size_t>(c)] = svd.singularValues()(c);
  }
  return p;
}

/// max |kappa(b_i, b_j)| over the basis.
inline double klein_gram_residual(const PlaneBasis& W) {
  double r = 0.0;
  for (const auto& a : W.basis)
    for (const auto& b : W.basis) r = std::max(r, std::abs(klein(a, b)));
  return r;
}

/// Distance of S(a) from the plane B, maximized over a in the basis of A.
inline double hodge_swap_residual(const PlaneBasis& A, const PlaneBasis& B) {
  double r = 0.0;
  for (const auto& a : A.basis) {
    const Bivector4 s = hodge(a);
    Bivector4 proj;
    for (const auto& b : B.basis) proj += dot(s, b) * b;
    r = std::max(r, norm(Bivector4(s - proj)));
  }
  return r;
}

/// Builds W+- at every node. Requires II+ - II- nowhere zero (min norm above
/// 1e-8) and rank 3 spanning sets (sigma_3 above 1e-10 sigma_1).
inline IsotropicPlaneField build_W(const BonnetPairPatch& bp) {
  const GridChart& g = bp.chart;
  if (bp.IIp.size() == g.size() && bp.IIm.size() == g.size()) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!(norm(Sym2(bp.IIp[k] - bp.IIm[k])) > 1e-8)) {
        throw NumericalRefusal("build_W: II+ - II- vanishes at " + describe_node(g, k));
      }
    }
  }
  IsotropicPlaneField W = generate(g, [&](std::size_t k) {
    const Bivector4 &pu = bp.dFp.coeff_u[k], &pv = bp.dFp.coeff_v[k];
    const Bivector4 &mu = bp.dFm.coeff_u[k], &mv = bp.dFm.coeff_v[k];
    IsotropicPlanes planes;
    planes.plus = orthonormal_span({pu + mu, pv + mv, bp.np[k] + bp.nm[k]});
    planes.minus = orthonormal_span({pu - mu, pv - mv, bp.np[k] - bp.nm[k]});
    return planes;
  });
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (const PlaneBasis* P : {&W[k].plus, &W[k].minus}) {
      const auto& sv = P->singular_values;
      if (!(sv[2] > 1e-10 * sv[0])) {
        std::ostringstream os;
        os << "build_W: spanning set has rank below 3 (sigma3/sigma1 = " << sv[2] / sv[0] << ") at "
           << describe_node(g, k);
        throw NumericalRefusal(os.str());
      }
    }
  }
  return W;
}

/// Singular data of the 12x4 map v -> (B_1^v, B_2^v, B_3^v) into (Lambda^3 R^4)^3.
struct WedgeKernel {
  Vec4 direction;                // right singular vector of the smallest singular value
  std::array<double, 4> sigma;   // descending
  bool one_dimensional = false;  // sigma_4 <= 1e-8 sigma_1 < sigma_3
};

inline WedgeKernel wedge_kernel(const std::array<Bivector4, 3>& W) {
  // Lambda^3 basis e_abc, a<b<c; coefficient of e_abc in B^v is
  // B_ab v_c - B_ac v_b + B_bc v_a.
  static constexpr std::array<std::array<int, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  Eigen::Matrix<double, 12, 4> M = Eigen::Matrix<double, 12, 4>::Zero();
  for (int i = 0; i < 3; ++i) {
    const Bivector4& B = W[static_cast<std::size_t>(i)];
    for (int t = 0; t < 4; ++t) {
      const auto [a, b, c] = triples[static_cast<std::size_t>(t)];
      const int row = 4 * i + t;
      M(row, c) += B[b4::index_of(a, b)];
      M(row, b) -= B[b4::index_of(a, c)];
      M(row, a) += B[b4::index_of(b, c)];
    }
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 12, 4>> svd(M, Eigen::ComputeFullV);
  WedgeKernel k;
  for (int i = 0; i < 4; ++i) k.sigma[static_cast<std::size_t>(i)] = svd.singularValues()(i);
  const auto v = svd.matrixV().col(3);
  k.direction = Vec4{{v(0), v(1), v(2), v(3)}};
  k.direction /= norm(k.direction);
  const double s1 = k.sigma[0];
  k.one_dimensional = s1 > 0.0 && k.sigma[3] <= 1e-8 * s1 && k.sigma[2] > 1e-8 * s1;
  return k;
}

/// Unit x (up to sign) with W = R^4 ^ x; NumericalRefusal when W is not of
/// that form.
inline Vec4 extract_line(const std::array<Bivector4, 3>& W) {
  const WedgeKernel k = wedge_kernel(W);
  if (!k.one_dimensional) {
    std::ostringstream os;
    os << "extract_line: plane is not of the form R^4 ^ L (singular values " << k.sigma[0] << ", " << k.sigma[1]
       << ", " << k.sigma[2] << ", " << k.sigma[3] << ")";
    throw NumericalRefusal(os.str());
  }
  return k.direction;
}

struct LineChoice {
  Vec4 x;
  int sign = 1;  // +1: W+ = R^4 ^ x, use F+ + F-; -1: W- = R^4 ^ x, use F+ - F-
  double kernel_ratio = 0.0;  // sigma_4 / sigma_1 of the chosen plane
  double gap_ratio = 0.0;     // sigma_3 / sigma_1 of the chosen plane
};

inline LineChoice choose_line(const IsotropicPlanes& planes) {
  const WedgeKernel kp = wedge_kernel(planes.plus.basis);
  const WedgeKernel km = wedge_kernel(planes.minus.basis);
  if (kp.one_dimensional == km.one_dimensional) {
    throw NumericalRefusal(kp.one_dimensional ? "choose_line: both W+ and W- have the form R^4 ^ L"
                                              : "choose_line: neither W+ nor W- has the form R^4 ^ L");
  }
  const WedgeKernel& k = kp.one_dimensional ? kp : km;
  return {k.direction, kp.one_dimensional ? 1 : -1, k.sigma[3] / k.sigma[0], k.sigma[2] / k.sigma[0]};
}

struct Recovery {
  Field<Vec4> x;
  Field<Vec4> n;
  OneForm<Vec4> omega;
  OneForm<Vec4> dx;
  QuadraticForm re_iq;     // (II+ - II-) / (2 sqrt 2)
  QuadraticForm two_re_q;  // 2 Re q read off re_iq
  int sign = 1;            // see LineChoice::sign
  bool labels_swapped = false;
  std::vector<Measurement> certificates;
};

/// Largest principal angle between span{a1,a2} and span{b1,b2}.
inline double principal_angle(const Vec4& a1, const Vec4& a2, const Vec4& b1, const Vec4& b2) {
  Eigen::Matrix<double, 4, 2> A, B;
  for (int r = 0; r < 4; ++r) {
    const auto i = static_cast<std::size_t>(r);
    A(r, 0) = a1[i];
    A(r, 1) = a2[i];
    B(r, 0) = b1[i];
    B(r, 1) = b2[i];
  }
  const Eigen::Matrix<double, 4, 2> Qa = Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>>(A).householderQ() *
                                         Eigen::Matrix<double, 4, 2>::Identity();
  const Eigen::Matrix<double, 4, 2> Qb = Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>>(B).householderQ() *
                                         Eigen::Matrix<double, 4, 2>::Identity();
  const Eigen::Matrix<double, 4, 2> residual = Qa - Qb * (Qb.transpose() * Qa);
  const double s = Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>>(residual).singularValues()(0);
  return std::asin(std::min(1.0, s));
}

/// Propagates the sign of a unit line field along the serpentine order and
/// then checks every grid edge; a sign that cannot be made continuous is a
/// double-cover obstruction.
inline void make_sign_continuous(Field<Vec4>& x) {
  const GridChart& g = x.chart();
  const auto order = serpentine_order(g);
  for (std::size_t s = 1; s < order.size(); ++s) {
    const double d = dot(x[order[s]], x[order[s - 1]]);
    if (std::abs(d) < 0.5) {
      throw NumericalRefusal("recover_isothermic: line field jumps at " + describe_node(g, order[s]) +
                             " (chart too coarse)");
    }
    if (d < 0.0) x[order[s]] = -x[order[s]];
  }
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      if (i + 1 < g.nu && dot(x(i, j), x(i + 1, j)) <= 0.0)
        throw NumericalRefusal("recover_isothermic: sign of x cannot be chosen continuously near " +
                               describe_node(g, g.index(i, j)) + "; pass to a double cover");
      if (j + 1 < g.nv && dot(x(i, j), x(i, j + 1)) <= 0.0)
        throw NumericalRefusal("recover_isothermic: sign of x cannot be chosen continuously near " +
                               describe_node(g, g.index(i, j)) + "; pass to a double cover");
    }
}

/// Recovers x, n, omega and dx from the pair data alone (F+-, n+- and their
/// differentials) and certifies that x is isothermic with Christoffel form
/// omega. When a reference surface is given, the global sign of x is chosen
/// to agree with it at node (0,0).
inline Recovery recover_isothermic(const BonnetPairPatch& bp, const Field<Vec4>* reference = nullptr) {
  const GridChart& g = bp.chart;
  const IsotropicPlaneField W = build_W(bp);

  Recovery rec;
  Field<LineChoice> lines(g);
  for (std::size_t k = 0; k < g.size(); ++k) lines[k] = choose_line(W[k]);
  rec.sign = lines[0].sign;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (lines[k].sign != rec.sign)
      throw NumericalRefusal("recover_isothermic: the plane of the form R^4 ^ x switches between W+ and W- at " +
                             describe_node(g, k));
  rec.labels_swapped = rec.sign < 0;

  rec.x = map(lines, [](const LineChoice& l) { return l.x; });
  make_sign_continuous(rec.x);
  if (reference && dot(rec.x[0], (*reference)[0]) < 0.0) rec.x = -1.0 * rec.x;

  const double s = rec.sign;
  const double r2 = std::numbers::sqrt2;
  const OneForm<Bivector4> dF = bp.dFp + s * bp.dFm;
  const Field<Bivector4> nsum = bp.np + s * bp.nm;
  const OneForm<Bivector4> dnsum = bp.dnp + s * bp.dnm;

  // (omega ^ x) x = -omega for omega orthogonal to unit x.
  rec.omega = pointwise(dF, rec.x, [](const Bivector4& b, const Vec4& x) { return Vec4(-act(b, x)); });
  // n+ + n- = sqrt 2 n ^ x and (n ^ x) x = -n.
  rec.n = zip(nsum, rec.x, [r2](const Bivector4& b, const Vec4& x) {
    const Vec4 n = -act(b, x) / r2;
    return Vec4(n / norm(n));
  });
  // d(n ^ x) = dn ^ x + n ^ dx, and (n ^ dx) n = dx, (dn ^ x) n = 0.
  rec.dx = pointwise(dnsum, rec.n, [r2](const Bivector4& b, const Vec4& n) { return Vec4(act(b / r2, n)); });

  if (bp.IIp.size() != g.size()) throw PreconditionError("recover_isothermic: second fundamental forms missing");
  rec.re_iq = zip(bp.IIp, bp.IIm, [](const Sym2& a, const Sym2& b) { return Sym2((a - b) / (2.0 * std::numbers::sqrt2)); });
  rec.two_re_q = map(rec.re_iq, [](const Sym2& m) { return two_re_q(c_from_re_iq(m)); });

  auto& cert = rec.certificates;
  auto add = [&](const char* name, double tol, auto&& fn) { cert.push_back({name, stats(generate(g, fn)), tol}); };

  add("w_kappa_isotropy", 1e-10,
      [&](std::size_t k) { return std::max(klein_gram_residual(W[k].plus), klein_gram_residual(W[k].minus)); });
  add("w_hodge_swap", 1e-10, [&](std::size_t k) {
    return std::max(hodge_swap_residual(W[k].plus, W[k].minus), hodge_swap_residual(W[k].minus, W[k].plus));
  });
  add("line_kernel", 1e-8, [&](std::size_t k) { return lines[k].kernel_ratio; });
  add("immersion_condition", 1e8, [&](std::size_t k) {
    Eigen::Matrix<double, 4, 2> D;
    for (int r = 0; r < 4; ++r) {
      D(r, 0) = rec.dx.coeff_u[k][static_cast<std::size_t>(r)];
      D(r, 1) = rec.dx.coeff_v[k][static_cast<std::size_t>(r)];
    }
    const auto sv = Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>>(D).singularValues();
    return sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  });
  cert.push_back({"d_omega", stats(d_oneform(rec.omega).coeff), closure_tolerance(rec.omega)});
  cert.push_back({"omega_wedge_dx", stats(wedge_vv(rec.omega, rec.dx).coeff), 1e-10});
  add("omega_perp_x", 1e-10, [&](std::size_t k) {
    return std::max(std::abs(dot(rec.omega.coeff_u[k], rec.x[k])), std::abs(dot(rec.omega.coeff_v[k], rec.x[k])));
  });
  add("omega_perp_n", 1e-10, [&](std::size_t k) {
    return std::max(std::abs(dot(rec.omega.coeff_u[k], rec.n[k])), std::abs(dot(rec.omega.coeff_v[k], rec.n[k])));
  });
  add("normal_perp_dx", 1e-10, [&](std::size_t k) {
    return std::max({std::abs(dot(rec.dx.coeff_u[k], rec.n[k])), std::abs(dot(rec.dx.coeff_v[k], rec.n[k])),
                     std::abs(dot(rec.n[k], rec.x[k]))});
  });
  {
    const Field<double> anti = pairing_antisymmetric(rec.omega, rec.dx);
    cert.push_back({"pairing_antisymmetric", stats(anti), 1e-10});
  }
  {
    const QuadraticForm P = pairing(rec.omega, rec.dx);
    add("pairing_vs_2req", 1e-9, [&](std::size_t k) { return norm(Sym2(P[k] - rec.two_re_q[k])); });
  }
  add("recovered_twisted_pairing", 1e-9, [&](std::size_t k) {
    const Sym2 lhs = omega_x_n_dx(rec.omega.coeff_u[k], rec.omega.coeff_v[k], rec.x[k], rec.n[k], rec.dx.coeff_u[k],
                                  rec.dx.coeff_v[k]);
    return norm(Sym2(lhs + 2.0 * rec.re_iq[k]));
  });
  add("image_angle", 1e-8, [&](std::size_t k) {
    return principal_angle(rec.omega.coeff_u[k], rec.omega.coeff_v[k], rec.dx.coeff_u[k], rec.dx.coeff_v[k]);
  });
  return rec;
}

}  // namespace bonnet
