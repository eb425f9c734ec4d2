#pragma once

// Bonnet pairs from isothermic surfaces: integrate dF = omega ^ x, split F
// into self-dual and anti-self-dual parts F+ and F-, build their unit normals
// n+- = (n^x +- S(n^x)) / sqrt 2, and measure the identities that make
// (F+, F-) a Bonnet pair.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bonnet/catalog.hpp"
#include "bonnet/charts.hpp"
#include "bonnet/exterior4.hpp"
#include "bonnet/report.hpp"

namespace bonnet {

struct BonnetPairPatch {
  GridChart chart;
  Field<Bivector4> F, Fp, Fm;  // F = Fp + Fm, S Fp = Fp, S Fm = -Fm
  Field<Bivector4> np, nm;
  OneForm<Bivector4> dFp, dFm, dnp, dnm;
  QuadraticForm Ip, Im_, IIp, IIm;
  Field<double> Hp, Hm;
  std::vector<std::size_t> degenerate_nodes;  // where I+ or I- is singular
  double loop_defect = 0.0;
  double closure_residual = 0.0;
};

inline OneForm<Bivector4> split_plus(const OneForm<Bivector4>& a) {
  auto f = [](const Bivector4& b) { return sd_asd_split(b).plus; };
  return {map(a.coeff_u, f), map(a.coeff_v, f)};
}
inline OneForm<Bivector4> split_minus(const OneForm<Bivector4>& a) {
  auto f = [](const Bivector4& b) { return sd_asd_split(b).minus; };
  return {map(a.coeff_u, f), map(a.coeff_v, f)};
}

/// dF = omega ^ x.
inline OneForm<Bivector4> retraction_so4_part(const OneForm<Vec4>& omega, const Field<Vec4>& x) {
  return pointwise(omega, x, [](const Vec4& w, const Vec4& p) { return wedge(w, p); });
}

/// I(X,Y) = <dF(X), dF(Y)>, II(X,Y) = -sym <dF(X), dn(Y)>.
inline QuadraticForm first_form(const OneForm<Bivector4>& dF) {
  return generate(dF.chart(), [&](std::size_t k) {
    const Bivector4 &a = dF.coeff_u[k], &b = dF.coeff_v[k];
    return make_sym2(dot(a, a), dot(a, b), dot(b, b));
  });
}

inline QuadraticForm second_form(const OneForm<Bivector4>& dF, const OneForm<Bivector4>& dn) {
  return generate(dF.chart(), [&](std::size_t k) {
    const Bivector4 &fu = dF.coeff_u[k], &fv = dF.coeff_v[k];
    const Bivector4 &nu = dn.coeff_u[k], &nv = dn.coeff_v[k];
    return make_sym2(-dot(fu, nu), -0.5 * (dot(fu, nv) + dot(fv, nu)), -dot(fv, nv));
  });
}

inline double det(const Sym2& m) { return m[0] * m[2] - m[1] * m[1]; }

/// Mean curvature (1/2) tr(I^{-1} II).
inline double mean_curvature(const Sym2& I, const Sym2& II) {
  return 0.5 * (I[2] * II[0] - 2.0 * I[1] * II[1] + I[0] * II[2]) / det(I);
}

/// Fills I+-, II+- and H+- from dF+- and dn+-. Nodes where I+ or I- is
/// singular (det below 1e-14 scale^2) are recorded and get H = NaN.
inline void fundamental_forms(BonnetPairPatch& bp) {
  bp.Ip = first_form(bp.dFp);
  bp.Im_ = first_form(bp.dFm);
  bp.IIp = second_form(bp.dFp, bp.dnp);
  bp.IIm = second_form(bp.dFm, bp.dnm);
  bp.degenerate_nodes.clear();
  for (std::size_t k = 0; k < bp.chart.size(); ++k) {
    for (const Sym2* I : {&bp.Ip[k], &bp.Im_[k]}) {
      const double scale = norm(*I);
      if (!(std::abs(det(*I)) > 1e-14 * scale * scale) || scale == 0.0) {
        bp.degenerate_nodes.push_back(k);
        break;
      }
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bp.Hp = zip(bp.Ip, bp.IIp, [](const Sym2& I, const Sym2& II) { return mean_curvature(I, II); });
  bp.Hm = zip(bp.Im_, bp.IIm, [](const Sym2& I, const Sym2& II) { return mean_curvature(I, II); });
  for (std::size_t k : bp.degenerate_nodes) bp.Hp[k] = bp.Hm[k] = nan;
}

/// Builds the Bonnet pair of an isothermic surface with Christoffel form
/// omega. F is integrated from `base` at node (0,0); refuses with
/// NumericalRefusal when omega or omega^x fails the closure gate
/// (closure_tolerance unless gate is positive).
inline BonnetPairPatch synthesize(const SurfaceSample& s, const OneForm<Vec4>& omega, const Bivector4& base = {},
                                  double gate = -1.0) {
  BonnetPairPatch bp;
  bp.chart = s.chart();

  const double omega_closure = max_norm(d_oneform(omega).coeff);
  if (!(omega_closure <= (gate > 0.0 ? gate : closure_tolerance(omega)))) {
    throw NumericalRefusal("synthesize: Christoffel form omega is not closed (|d omega| = " +
                           std::to_string(omega_closure) + ")");
  }
  const OneForm<Bivector4> dF = retraction_so4_part(omega, s.x);
  Primitive<Bivector4> prim = integrate_closed(dF, base, gate > 0.0 ? std::max(gate, closure_tolerance(dF)) : -1.0);
  bp.F = std::move(prim.values);
  bp.loop_defect = prim.loop_defect;
  bp.closure_residual = prim.closure_residual;

  bp.Fp = map(bp.F, [](const Bivector4& b) { return sd_asd_split(b).plus; });
  bp.Fm = map(bp.F, [](const Bivector4& b) { return sd_asd_split(b).minus; });
  bp.dFp = split_plus(dF);
  bp.dFm = split_minus(dF);

  const double r2 = std::numbers::sqrt2;
  const Field<Bivector4> nx = zip(s.n, s.x, [](const Vec4& n, const Vec4& x) { return wedge(n, x); });
  const OneForm<Bivector4> dnx = pointwise(s.dn, s.x, [](const Vec4& a, const Vec4& x) { return wedge(a, x); }) +
                                 OneForm<Bivector4>{zip(s.n, s.dx.coeff_u, [](const Vec4& n, const Vec4& a) { return wedge(n, a); }),
                                                    zip(s.n, s.dx.coeff_v, [](const Vec4& n, const Vec4& a) { return wedge(n, a); })};
  bp.np = map(nx, [r2](const Bivector4& b) { return Bivector4(r2 * sd_asd_split(b).plus); });
  bp.nm = map(nx, [r2](const Bivector4& b) { return Bivector4(r2 * sd_asd_split(b).minus); });
  bp.dnp = r2 * split_plus(dnx);
  bp.dnm = r2 * split_minus(dnx);

  fundamental_forms(bp);
  return bp;
}

inline BonnetPairPatch synthesize(const SurfaceSample& s, const Bivector4& base = {}) {
  return synthesize(s, christoffel_omega(s.dx, s.e2phi, s.c), base);
}

// ---------------------------------------------------------------------------
// Verification.

/// J on the tangent plane: J x_u = x_v |x_u|/|x_v|, J x_v = -x_u |x_v|/|x_u|.
inline std::pair<Vec4, Vec4> complex_structure(const Vec4& xu, const Vec4& xv) {
  const double a = norm(xu), b = norm(xv);
  return {(a / b) * xv, -(b / a) * xu};
}

/// Symmetrized coefficient matrix of omega(X) ^ x ^ n ^ dx(Y) (vol units).
inline Sym2 omega_x_n_dx(const Vec4& wu, const Vec4& wv, const Vec4& x, const Vec4& n, const Vec4& xu,
                         const Vec4& xv) {
  return make_sym2(wedge4(wu, x, n, xu), 0.5 * (wedge4(wu, x, n, xv) + wedge4(wv, x, n, xu)),
                   wedge4(wv, x, n, xv));
}

/// Residuals of the Bonnet-pair identities for the pair synthesized from s.
inline std::vector<Measurement> verify_theorem2(const BonnetPairPatch& bp, const SurfaceSample& s,
                                                const OneForm<Vec4>& omega) {
  const GridChart& g = bp.chart;
  const Sym2 target = (2.0 * std::numbers::sqrt2) * re_iq(s.c);
  const OneForm<Bivector4> dF = bp.dFp + bp.dFm;
  const Field<Bivector4> nx = zip(s.n, s.x, [](const Vec4& n, const Vec4& x) { return wedge(n, x); });

  std::vector<Measurement> out;
  auto add = [&](const char* name, double tol, auto&& fn) {
    out.push_back({name, stats(generate(g, fn)), tol});
  };

  // Quadratic residuals relative to max(1, |omega|^2), linear ones to max(1, |omega|).
  const Field<double> w2 = generate(g, [&](std::size_t k) {
    return std::max(1.0, 0.5 * (dot(omega.coeff_u[k], omega.coeff_u[k]) + dot(omega.coeff_v[k], omega.coeff_v[k])));
  });
  auto w1 = [&](std::size_t k) { return std::sqrt(w2[k]); };

  add("isometry", 1e-10, [&](std::size_t k) { return norm(Sym2(bp.Ip[k] - bp.Im_[k])) / w2[k]; });
  // relative to the conformal factor of I+
  auto i_scale = [&](std::size_t k) { return std::max(0.5 * (bp.Ip[k][0] + bp.Ip[k][2]), 1e-300); };
  add("conformal_offdiag", 1e-10, [&](std::size_t k) { return std::abs(bp.Ip[k][1]) / i_scale(k); });
  add("conformal_anisotropy", 1e-10,
      [&](std::size_t k) { return std::abs(bp.Ip[k][0] - bp.Ip[k][2]) / i_scale(k); });
  add("conformal_factor", 1e-10, [&](std::size_t k) {
    const double lambda = 0.5 * (bp.Ip[k][0] + bp.Ip[k][2]) / s.e2phi[k];
    const double ww = 0.5 * (dot(omega.coeff_u[k], omega.coeff_u[k]) + dot(omega.coeff_v[k], omega.coeff_v[k]));
    const double expected = 0.5 * ww / s.e2phi[k];
    return std::abs(lambda - expected) / std::max(1.0, std::abs(expected));
  });
  add("first_form_pairing", 1e-10, [&](std::size_t k) {
    const Vec4 &wu = omega.coeff_u[k], &wv = omega.coeff_v[k];
    const Bivector4 &fu = dF.coeff_u[k], &fv = dF.coeff_v[k];
    const Sym2 lhs = make_sym2(dot(fu, fu), dot(fu, fv), dot(fv, fv));
    return norm(Sym2(lhs - make_sym2(dot(wu, wu), dot(wu, wv), dot(wv, wv)))) / w2[k];
  });
  add("second_ff_difference", 1e-9,
      [&](std::size_t k) { return norm(Sym2(bp.IIp[k] - bp.IIm[k] - target)); });
  add("mean_curvature", 1e-9, [&](std::size_t k) { return std::abs(bp.Hp[k] - bp.Hm[k]); });
  add("normal_orthogonal", 1e-10, [&](std::size_t k) {
    return std::max(std::abs(dot(dF.coeff_u[k], nx[k])), std::abs(dot(dF.coeff_v[k], nx[k]))) / w1(k);
  });
  add("normal_unit", 1e-10, [&](std::size_t k) {
    return std::max(std::abs(norm(bp.np[k]) - 1.0), std::abs(norm(bp.nm[k]) - 1.0));
  });
  add("klein_dF_dF", 1e-10, [&](std::size_t k) {
    const Bivector4 &a = dF.coeff_u[k], &b = dF.coeff_v[k];
    return std::max({std::abs(klein(a, a)), std::abs(klein(a, b)), std::abs(klein(b, b))}) / w2[k];
  });
  add("klein_dF_nx", 1e-10, [&](std::size_t k) {
    return std::max(std::abs(klein(dF.coeff_u[k], nx[k])), std::abs(klein(dF.coeff_v[k], nx[k]))) / w1(k);
  });
  add("tangent_normal", 1e-10, [&](std::size_t k) {
    return std::max({std::abs(dot(bp.dFp.coeff_u[k], bp.np[k])), std::abs(dot(bp.dFp.coeff_v[k], bp.np[k])),
                     std::abs(dot(bp.dFm.coeff_u[k], bp.nm[k])), std::abs(dot(bp.dFm.coeff_v[k], bp.nm[k]))}) /
           w1(k);
  });
  add("twisted_pairing", 1e-10, [&](std::size_t k) {
    const Vec4 &wu = omega.coeff_u[k], &wv = omega.coeff_v[k];
    const Vec4 &xu = s.dx.coeff_u[k], &xv = s.dx.coeff_v[k];
    const Sym2 lhs = omega_x_n_dx(wu, wv, s.x[k], s.n[k], xu, xv);
    const auto [Jxu, Jxv] = complex_structure(xu, xv);
    const Sym2 rhs = make_sym2(-dot(wu, Jxu), -0.5 * (dot(wu, Jxv) + dot(wv, Jxu)), -dot(wv, Jxv));
    return norm(Sym2(lhs - rhs));
  });
  out.push_back({"degenerate_first_form", {static_cast<double>(bp.degenerate_nodes.size()), 0.0, 0}, 0.0});
  return out;
}

/// Anti-self-dual derivative in the opposite sign convention, where the
/// anti-self-dual factor of so(4) = Im H + Im H is negated.
inline Quat opposite_convention_minus(const Bivector4& dFm) {
  const SplitBivector z = to_quat_pair(dFm);
  return -(kLeftFactorSelfDual ? z.zr : z.zl);
}

/// Residuals of dF+ = (1/2) x conj(omega), dF- = -(1/2) conj(omega) x and the
/// quaternionic closure conditions conj(omega) ^ dx = 0 = dx ^ conj(omega).
inline std::vector<Measurement> quaternionic_check(const BonnetPairPatch& bp, const SurfaceSample& s,
                                                   const OneForm<Vec4>& omega) {
  const GridChart& g = bp.chart;
  std::vector<Measurement> out;
  auto add = [&](const char* name, double tol, auto&& fn) {
    out.push_back({name, stats(generate(g, fn)), tol});
  };
  // residuals relative to max(1, |omega|)
  auto scale = [&](std::size_t k) {
    return std::max({1.0, norm(omega.coeff_u[k]), norm(omega.coeff_v[k])});
  };
  // Factor carrying the self-dual part, as determined by exterior4.
  auto sd = [](const SplitBivector& z) { return kLeftFactorSelfDual ? z.zl : z.zr; };
  auto asd = [](const SplitBivector& z) { return kLeftFactorSelfDual ? z.zr : z.zl; };

  add("quat_dF_plus", 1e-12, [&](std::size_t k) {
    const Quat x = to_quat(s.x[k]);
    double worst = 0.0;
    for (int dir = 0; dir < 2; ++dir) {
      const SplitBivector z = to_quat_pair(dir == 0 ? bp.dFp.coeff_u[k] : bp.dFp.coeff_v[k]);
      const Quat w = to_quat(omega.at(k, dir));
      const Quat expected = 0.5 * quat_mul(x, quat_conj(w));
      worst = std::max({worst, norm(Quat(sd(z) - expected)), norm(asd(z))});
    }
    return worst / scale(k);
  });
  add("quat_dF_minus", 1e-12, [&](std::size_t k) {
    const Quat x = to_quat(s.x[k]);
    double worst = 0.0;
    for (int dir = 0; dir < 2; ++dir) {
      const SplitBivector z = to_quat_pair(dir == 0 ? bp.dFm.coeff_u[k] : bp.dFm.coeff_v[k]);
      const Quat w = to_quat(omega.at(k, dir));
      const Quat expected = -0.5 * quat_mul(quat_conj(w), x);
      worst = std::max({worst, norm(Quat(asd(z) - expected)), norm(sd(z))});
    }
    return worst / scale(k);
  });
  add("quat_imaginary", 1e-13, [&](std::size_t k) {
    const Quat x = to_quat(s.x[k]);
    return std::max(std::abs(quat_re(quat_mul(x, quat_conj(to_quat(omega.coeff_u[k]))))),
                    std::abs(quat_re(quat_mul(x, quat_conj(to_quat(omega.coeff_v[k])))))) /
           scale(k);
  });
  add("quat_wedge_left", 1e-12, [&](std::size_t k) {
    const Quat wu = quat_conj(to_quat(omega.coeff_u[k])), wv = quat_conj(to_quat(omega.coeff_v[k]));
    const Quat xu = to_quat(s.dx.coeff_u[k]), xv = to_quat(s.dx.coeff_v[k]);
    return norm(Quat(quat_mul(wu, xv) - quat_mul(wv, xu)));
  });
  add("quat_wedge_right", 1e-12, [&](std::size_t k) {
    const Quat wu = quat_conj(to_quat(omega.coeff_u[k])), wv = quat_conj(to_quat(omega.coeff_v[k]));
    const Quat xu = to_quat(s.dx.coeff_u[k]), xv = to_quat(s.dx.coeff_v[k]);
    return norm(Quat(quat_mul(xu, wv) - quat_mul(xv, wu)));
  });
  return out;
}

}  // namespace bonnet
