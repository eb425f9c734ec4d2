#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bonnet/catalog.hpp"
#include "oracles.hpp"

using namespace bonnet;

namespace {

const GridChart kChart(0.0, std::numbers::pi, 0.0, std::numbers::pi, 33, 33);

std::vector<IsothermicPatch> patches(Complex c) {
  return {homogeneous_torus(0.5, c), homogeneous_torus(1.0 / std::numbers::sqrt2, c), stereo_cylinder(0.7, c),
          great_sphere(c)};
}

const Complex kCs[] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {2.0, -1.0}};

}  // namespace

TEST(Catalog, PointwiseInvariants) {
  for (const Complex c : kCs)
    for (const auto& p : patches(c)) {
      const auto s = sample_surface(p, kChart);
      for (std::size_t k = 0; k < kChart.size(); ++k) {
        const Vec4 &x = s.x[k], &n = s.n[k];
        ASSERT_NEAR(norm(x), 1.0, 1e-12) << p.name();
        ASSERT_NEAR(norm(n), 1.0, 1e-12) << p.name();
        ASSERT_NEAR(dot(x, n), 0.0, 1e-12);
        for (int d = 0; d < 2; ++d) {
          ASSERT_NEAR(dot(s.dx.at(k, d), x), 0.0, 1e-12);
          ASSERT_NEAR(dot(s.dx.at(k, d), n), 0.0, 1e-12);
          ASSERT_NEAR(dot(s.dn.at(k, d), x), 0.0, 1e-12);
          ASSERT_NEAR(dot(s.dn.at(k, d), n), 0.0, 1e-12);
        }
        ASSERT_GT(oracle::det4(s.dx.coeff_u[k], s.dx.coeff_v[k], x, n), 0.0);
      }
    }
}

TEST(Catalog, ChartIsConformal) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> r(0.05, 0.95), rho(0.2, 3.0);
  for (int t = 0; t < 10; ++t)
    for (const auto& p : {homogeneous_torus(r(rng), kCs[t % 4]), stereo_cylinder(rho(rng), kCs[(t + 1) % 4])}) {
      const auto s = sample_surface(p, kChart);
      for (std::size_t k = 0; k < kChart.size(); ++k) {
        const Vec4 &xu = s.dx.coeff_u[k], &xv = s.dx.coeff_v[k];
        const double e = s.e2phi[k];
        ASSERT_NEAR(dot(xu, xu) / e, 1.0, 1e-14);
        ASSERT_NEAR(dot(xv, xv) / e, 1.0, 1e-14);
        ASSERT_NEAR(dot(xu, xv) / e, 0.0, 1e-14);
      }
    }
}

TEST(Catalog, AnalyticDerivativesAgreeWithFiniteDifferences) {
  auto error = [](const IsothermicPatch& p, int n) {
    const GridChart g(0.1, 1.3, -0.4, 0.8, n, n);
    const auto a = sample_surface(p, g, DerivMode::analytic);
    const auto f = sample_surface(p, g, DerivMode::finite_difference);
    return std::max(max_norm(a.dx - f.dx), max_norm(a.dn - f.dn));
  };
  for (const auto& p : patches({1.0, 1.0})) {
    const double coarse = error(p, 33), fine = error(p, 65);
    if (fine < 1e-13) continue;  // great sphere normal has exact stencils
    const double ratio = oracle::richardson_ratio(coarse, fine);
    EXPECT_GT(ratio, 3.2) << p.name();
    EXPECT_LT(ratio, 4.8) << p.name();
  }
}

TEST(Catalog, CurvatureLinesWhenCIsRealPositive) {
  for (const auto& p : {homogeneous_torus(0.6), stereo_cylinder(1.5)}) {
    const auto II = second_fundamental_form_S3(sample_surface(p, kChart));
    for (std::size_t k = 0; k < kChart.size(); ++k) EXPECT_NEAR(II[k][1], 0.0, 1e-12) << p.name();
  }
  // torus: II = diag(-q/r, r/q) in the chart
  const double r = 0.6, q = 0.8;
  const auto II = second_fundamental_form_S3(sample_surface(homogeneous_torus(r), kChart));
  EXPECT_NEAR(II[100][0], -q / r, 1e-12);
  EXPECT_NEAR(II[100][2], r / q, 1e-12);
}

TEST(Catalog, GreatSphereIsTotallyUmbilic) {
  for (const Complex c : kCs) {
    const auto s = sample_surface(great_sphere(c), kChart);
    const auto I = first_fundamental_form(s.dx);
    const auto II = second_fundamental_form_S3(s);
    for (std::size_t k = 0; k < kChart.size(); ++k) {
      // II proportional to I: trace-free part vanishes
      const double h = 0.5 * (II[k][0] + II[k][2]) / s.e2phi[k];
      EXPECT_LT(norm(Sym2(II[k] - h * I[k])), 1e-12);
    }
  }
}

TEST(Catalog, RotatedChartCommutesQWithII) {
  // Q = 2 Re(c dz^2) and the trace-free part of II are proportional.
  for (const Complex c : kCs) {
    const auto s = sample_surface(stereo_cylinder(0.9, c), kChart);
    const Sym2 Q = two_re_q(c);
    const auto II = second_fundamental_form_S3(s);
    for (std::size_t k = 0; k < kChart.size(); k += 11) {
      const double tr = 0.5 * (II[k][0] + II[k][2]);
      const Sym2 T = make_sym2(II[k][0] - tr, II[k][1], II[k][2] - tr);
      // commuting trace-free symmetric 2x2 matrices are parallel
      EXPECT_NEAR(T[0] * Q[1] - T[1] * Q[0], 0.0, 1e-12) << c;
    }
  }
}

TEST(Christoffel, TorusFormula) {
  const auto s = sample_surface(homogeneous_torus(0.6), kChart);
  const auto w = christoffel_omega(s);
  EXPECT_LT(max_norm(w.coeff_u - 2.0 * s.dx.coeff_u), 1e-14);
  EXPECT_LT(max_norm(w.coeff_v + 2.0 * s.dx.coeff_v), 1e-14);
}

TEST(Christoffel, PairingIsTwoReQ) {
  for (const Complex c : kCs)
    for (const auto& p : patches(c)) {
      const auto s = sample_surface(p, kChart);
      const auto w = christoffel_omega(s);
      const auto P = pairing(w, s.dx);
      const Sym2 Q = two_re_q(c);
      EXPECT_NEAR(Q[0], 2.0 * c.real(), 0.0);
      EXPECT_NEAR(Q[1], -2.0 * c.imag(), 0.0);
      for (std::size_t k = 0; k < kChart.size(); ++k) {
        ASSERT_LT(norm(Sym2(P[k] - Q)), 1e-12);
        // the pairing is symmetric
        ASSERT_NEAR(pairing_antisymmetric(w, s.dx)[k], 0.0, 1e-12);
      }
    }
}

TEST(Christoffel, ParallelPlanesReversedOrientation) {
  for (const Complex c : kCs)
    for (const auto& p : patches(c)) {
      const auto s = sample_surface(p, kChart);
      const auto w = christoffel_omega(s);
      for (std::size_t k = 0; k < kChart.size(); k += 7) {
        const Vec4 &xu = s.dx.coeff_u[k], &xv = s.dx.coeff_v[k];
        for (int d = 0; d < 2; ++d) {
          EXPECT_NEAR(dot(w.at(k, d), s.x[k]), 0.0, 1e-12);
          EXPECT_NEAR(dot(w.at(k, d), s.n[k]), 0.0, 1e-12);
        }
        // coordinates of omega in the (x_u, x_v) frame
        const double e = s.e2phi[k];
        const double a = dot(w.coeff_u[k], xu) / e, b = dot(w.coeff_u[k], xv) / e;
        const double cc = dot(w.coeff_v[k], xu) / e, d = dot(w.coeff_v[k], xv) / e;
        EXPECT_LT(a * d - b * cc, 0.0);
      }
    }
}

TEST(Christoffel, OmegaIsClosed) {
  auto residual = [](int n) {
    const GridChart g(0.1, 1.3, -0.4, 0.8, n, n);
    const auto s = sample_surface(stereo_cylinder(0.7, {1.0, 1.0}), g);
    return max_norm(d_oneform(christoffel_omega(s)).coeff);
  };
  const double ratio = oracle::richardson_ratio(residual(65), residual(129));
  EXPECT_GT(ratio, 3.2);
  EXPECT_LT(ratio, 4.8);
}

TEST(QuadraticDifferential, ReIqRoundTrip) {
  for (const Complex c : kCs) {
    const Sym2 m = re_iq(c);
    EXPECT_EQ(c_from_re_iq(m), c);
    EXPECT_DOUBLE_EQ(m[0] + m[2], 0.0);
    // Re(i c dz^2) = Re(c' dz^2)/2 with c' = i c
    const Sym2 t = two_re_q(Complex(0.0, 1.0) * c);
    EXPECT_LT(norm(Sym2(0.5 * t - m)), 1e-15);
  }
}

TEST(Registry, NamesAndErrors) {
  std::vector<std::string> names;
  for (const auto& s : surface_registry()) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"homogeneous_torus", "stereo_cylinder", "great_sphere"}));
  EXPECT_EQ(describe_range(surface_registry()[0].params[0]), "r∈(0,1)");
  EXPECT_EQ(surface("homogeneous_torus").params().at("r"), 1.0 / std::numbers::sqrt2);
  EXPECT_EQ(surface("stereo_cylinder", {{"rho", 2.0}}).params().at("rho"), 2.0);
  EXPECT_THROW(surface("klein_bottle"), PreconditionError);
  EXPECT_THROW(surface("homogeneous_torus", {{"r", 1.5}}), PreconditionError);
  EXPECT_THROW(surface("homogeneous_torus", {{"rho", 0.5}}), PreconditionError);
  EXPECT_THROW(surface("stereo_cylinder", {{"rho", -1.0}}), PreconditionError);
  EXPECT_THROW(homogeneous_torus(0.5, 0.0), PreconditionError);
}
