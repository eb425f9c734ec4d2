#pragma once

// End-to-end runs: sample a catalog surface, synthesize its Bonnet pair and
// collect every residual into one list of measurements.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "bonnet/bonnet_pair.hpp"
#include "bonnet/catalog.hpp"
#include "bonnet/charts.hpp"
#include "bonnet/lightcone.hpp"
#include "bonnet/recovery.hpp"
#include "bonnet/report.hpp"

namespace bonnet {

struct Instance {
  SurfaceSample s;
  OneForm<Vec4> omega;
  BonnetPairPatch bp;
  DerivMode mode = DerivMode::analytic;
};

/// Closure gate for a 1-form: O(h^2) with analytic derivatives; first order
/// with sampled ones, whose one-sided boundary stencils leave an O(h) error
/// in d(1/e^{2phi}).
template <class T>
double closure_gate(const OneForm<T>& a, DerivMode mode) {
  if (mode == DerivMode::analytic) return closure_tolerance(a);
  const GridChart& g = a.chart();
  return std::max(closure_tolerance(a), 10.0 * std::max(g.hu(), g.hv()) * max_norm(a));
}

inline Instance make_instance(const IsothermicPatch& p, const GridChart& chart, DerivMode mode = DerivMode::analytic) {
  Instance in;
  in.s = sample_surface(p, chart, mode);
  in.omega = christoffel_omega(in.s.dx, in.s.e2phi, in.s.c);
  in.bp = synthesize(in.s, in.omega, {}, mode == DerivMode::analytic ? -1.0 : closure_gate(in.omega, mode));
  in.mode = mode;
  return in;
}

/// Tolerance floor for sampled derivatives: dx, dn carry O(h^2) errors, so
/// identities hold to 100 h^2 times the largest of |omega| and the relative
/// metric scale |omega|^2 / e^{2phi}. Zero with analytic derivatives.
inline double fd_tolerance_floor(const Instance& in) {
  if (in.mode == DerivMode::analytic) return 0.0;
  const GridChart& g = in.s.chart();
  const double h = std::max(g.hu(), g.hv());
  double scale = 1.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = std::max(norm(in.omega.coeff_u[k]), norm(in.omega.coeff_v[k]));
    scale = std::max({scale, w, w * w / in.s.e2phi[k]});
  }
  return 100.0 * h * h * scale;
}

inline EtaField instance_eta(const Instance& in) {
  return assemble_eta(in.omega, in.s.x, std::max(1e-8, fd_tolerance_floor(in)));
}

/// Differential residuals of one instance, each held to the closure gate.
struct DifferentialResiduals {
  double d_eta = 0.0, d_omega = 0.0, d_omega_wedge_x = 0.0, product_rule = 0.0;
  double scale = 1.0;  // max |eta|
};

inline DifferentialResiduals differential_residuals(const Instance& in) {
  const EtaField eta = instance_eta(in);
  const EtaClosure cl = eta_closure_residual(eta, in.s.x, in.s.dx);
  return {cl.eta.max, cl.d_omega.max, cl.d_omega_wedge_x.max, cl.product_rule_mismatch.max, max_norm(eta)};
}

/// Forward verification: Bonnet pair identities, quaternionic formulas,
/// retraction form and the Christoffel relation.
inline std::vector<Measurement> verify_measurements(const Instance& in) {
  const SurfaceSample& s = in.s;
  const GridChart& g = s.chart();
  std::vector<Measurement> out = verify_theorem2(in.bp, s, in.omega);
  for (auto& m : quaternionic_check(in.bp, s, in.omega)) out.push_back(std::move(m));

  const Sym2 Q = two_re_q(s.c);
  const double qscale = std::max(1.0, norm(Q));
  out.push_back({"christoffel_pairing",
                 stats(map(pairing(in.omega, s.dx), [&](const Sym2& m) { return Sym2(m - Q); })), 1e-9 * qscale});

  const EtaField eta = instance_eta(in);
  const EtaClosure cl = eta_closure_residual(eta, s.x, s.dx);
  out.push_back({"omega_wedge_dx", cl.omega_wedge_dx, 1e-12});
  out.push_back({"theorem1", stats(theorem1_residual(eta, s.x, s.dx, constant_form(g, Q))), 1e-10});
  out.push_back({"eta_range", stats(generate(g, [&](std::size_t k) {
                   return std::max(retraction_range_residual(eta.coeff_u[k], s.x[k]),
                                   retraction_range_residual(eta.coeff_v[k], s.x[k]));
                 })),
                 1e-10});
  const double eta_tol = closure_gate(eta, in.mode);
  out.push_back({"d_eta", cl.eta, eta_tol});
  out.push_back({"d_omega", cl.d_omega, closure_gate(in.omega, in.mode)});
  out.push_back({"product_rule", cl.product_rule_mismatch, eta_tol});
  out.push_back({"integration_loop_defect",
                 {in.bp.loop_defect, in.bp.loop_defect, 0},
                 closure_gate(OneForm<Bivector4>(in.bp.dFp + in.bp.dFm), in.mode) * g.hu() * g.hv()});
  return out;
}

/// Converse run on the synthesized pair: recovery certificates plus the
/// deviation of the recovered data from the catalog surface.
struct RoundTrip {
  Recovery rec;
  std::vector<Measurement> measurements;
};

inline RoundTrip roundtrip_measurements(const Instance& in) {
  RoundTrip rt;
  rt.rec = recover_isothermic(in.bp, &in.s.x);
  rt.measurements = rt.rec.certificates;
  const GridChart& g = in.s.chart();
  auto dev = [&](auto&& fn) { return stats(generate(g, fn)); };
  rt.measurements.push_back({"x_deviation", dev([&](std::size_t k) { return norm(Vec4(rt.rec.x[k] - in.s.x[k])); }), 1e-8});
  // Flipping x flips omega = -(dF) x and n.
  const double sx = dot(rt.rec.x[0], in.s.x[0]) < 0.0 ? -1.0 : 1.0;
  rt.measurements.push_back({"omega_deviation", dev([&](std::size_t k) {
                               return std::max(norm(Vec4(rt.rec.omega.coeff_u[k] - sx * in.omega.coeff_u[k])),
                                               norm(Vec4(rt.rec.omega.coeff_v[k] - sx * in.omega.coeff_v[k])));
                             }),
                             1e-8});
  rt.measurements.push_back({"n_deviation", dev([&](std::size_t k) { return norm(Vec4(rt.rec.n[k] - sx * in.s.n[k])); }),
                             1e-8});
  rt.measurements.push_back({"dx_deviation", dev([&](std::size_t k) {
                               return std::max(norm(Vec4(rt.rec.dx.coeff_u[k] - sx * in.s.dx.coeff_u[k])),
                                               norm(Vec4(rt.rec.dx.coeff_v[k] - sx * in.s.dx.coeff_v[k])));
                             }),
                             1e-8});
  return rt;
}

}  // namespace bonnet
