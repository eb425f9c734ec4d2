#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bonnet/charts.hpp"
#include "oracles.hpp"

using namespace bonnet;

namespace {

GridChart unit_chart(int n) { return GridChart(0.0, 1.0, 0.0, 1.0, n, n); }

double max_abs(const Field<double>& f) { return max_norm(f); }

}  // namespace

TEST(GridChart, SpacingAndIndexing) {
  const GridChart g(0.0, 2.0, -1.0, 1.0, 5, 3);
  EXPECT_DOUBLE_EQ(g.hu(), 0.5);
  EXPECT_DOUBLE_EQ(g.hv(), 1.0);
  EXPECT_EQ(g.index(2, 1), 7u);
  EXPECT_EQ(g.node(7), std::make_pair(2, 1));
  EXPECT_EQ(g.size(), 15u);
  EXPECT_EQ(g.refined().nu, 9);
  EXPECT_DOUBLE_EQ(g.refined().hu(), 0.25);
}

TEST(GridChart, RejectsInvalid) {
  EXPECT_THROW(GridChart(1.0, 0.0, 0.0, 1.0, 5, 5), PreconditionError);
  EXPECT_THROW(GridChart(0.0, 1.0, 0.0, 0.0, 5, 5), PreconditionError);
  EXPECT_THROW(GridChart(0.0, 1.0, 0.0, 1.0, 2, 5), PreconditionError);
}

TEST(DScalar, ExactOnAffineFields) {
  const GridChart g = unit_chart(7);
  const auto u = sample(g, [](double u, double) { return u; });
  const auto df = d_scalar(u);
  EXPECT_LT(max_norm(df.coeff_u - Field<double>(g, 1.0)), 1e-13);
  EXPECT_LT(max_abs(df.coeff_v), 1e-13);
  const auto c = d_scalar(Field<double>(g, 3.5));
  EXPECT_LT(max_abs(c.coeff_u), 1e-13);
  EXPECT_LT(max_abs(c.coeff_v), 1e-13);
  const auto aff = d_scalar(sample(g, [](double u, double v) { return 2.0 - u + 4.0 * v; }));
  EXPECT_LT(max_norm(aff.coeff_u - Field<double>(g, -1.0)), 1e-12);
  EXPECT_LT(max_norm(aff.coeff_v - Field<double>(g, 4.0)), 1e-12);
}

TEST(DScalar, SecondOrderOnCubic) {
  auto error = [](int n) {
    const GridChart g = unit_chart(n);
    const auto df = d_scalar(sample(g, [](double u, double) { return u * u * u; }));
    return max_norm(df.coeff_u - sample(g, [](double u, double) { return 3.0 * u * u; }));
  };
  const double ratio = oracle::richardson_ratio(error(33), error(65));
  EXPECT_GT(ratio, 3.2);
  EXPECT_LT(ratio, 4.8);
}

TEST(DOneForm, SignConventions) {
  const GridChart g = unit_chart(6);
  const auto u = sample(g, [](double u, double) { return u; });
  const auto v = sample(g, [](double, double v) { return v; });
  const Field<double> zero(g, 0.0);
  // d(v du) = -du^dv, d(u dv) = du^dv
  EXPECT_LT(max_norm(d_oneform(OneForm<double>{v, zero}).coeff - Field<double>(g, -1.0)), 1e-12);
  EXPECT_LT(max_norm(d_oneform(OneForm<double>{zero, u}).coeff - Field<double>(g, 1.0)), 1e-12);
}

TEST(DOneForm, DSquaredVanishes) {
  // The u and v stencils commute, so d(d f) is zero up to rounding.
  const GridChart g(0.0, 1.0, 0.0, 1.0, 33, 21);
  const auto f = sample(g, [](double u, double v) { return std::sin(2.0 * u) * std::exp(v) + u * u * v * v * v; });
  EXPECT_LT(max_norm(d_oneform(d_scalar(f)).coeff), 1e-10);
}

TEST(WedgeVV, BasisAndSymmetry) {
  const GridChart g = unit_chart(4);
  const Field<Vec4> zero(g);
  const OneForm<Vec4> a{Field<Vec4>(g, unit4(0)), zero};
  const OneForm<Vec4> b{zero, Field<Vec4>(g, unit4(1))};
  const auto w = wedge_vv(a, b);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(w.coeff[k], unit_bivector(b4::e12));

  std::mt19937_64 rng(11);
  const OneForm<Vec4> r{generate(g, [&](std::size_t) { return oracle::random_vec(rng); }),
                        generate(g, [&](std::size_t) { return oracle::random_vec(rng); })};
  const OneForm<Vec4> s{generate(g, [&](std::size_t) { return oracle::random_vec(rng); }),
                        generate(g, [&](std::size_t) { return oracle::random_vec(rng); })};
  const auto rs = wedge_vv(r, s), sr = wedge_vv(s, r), rr = wedge_vv(r, r);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(rs.coeff[k], sr.coeff[k]);
    EXPECT_LT(norm(Bivector4(rr.coeff[k] - 2.0 * wedge(r.coeff_u[k], r.coeff_v[k]))), 1e-14);
  }
}

TEST(IntegrateClosed, RecoversPrimitive) {
  auto error = [](int n) {
    const GridChart g(0.0, 1.0, 0.0, 2.0, n, n);
    const auto f = sample(g, [](double u, double v) { return std::sin(u) * std::cos(v) + u * v; });
    const auto p = integrate_closed(d_scalar(f), f[0]);
    return max_norm(p.values - f);
  };
  EXPECT_LT(error(65), 1e-3);
  const double ratio = oracle::richardson_ratio(error(33), error(65));
  EXPECT_GT(ratio, 3.2);
  EXPECT_LT(ratio, 4.8);
}

TEST(IntegrateClosed, ExactFormOfProduct) {
  const GridChart g = unit_chart(17);
  const auto uv = sample(g, [](double u, double v) { return u * v; });
  const auto p = integrate_closed(d_scalar(uv), 0.0);
  EXPECT_LT(max_norm(p.values - uv), 1e-12);
  EXPECT_LT(p.loop_defect, 1e-15);
}

TEST(IntegrateClosed, RefusesNonClosedForm) {
  const GridChart g = unit_chart(17);
  const auto u = sample(g, [](double u, double) { return u; });
  const Field<double> zero(g, 0.0);
  EXPECT_THROW(integrate_closed(OneForm<double>{zero, u}, 0.0), NumericalRefusal);
}

TEST(IntegrateClosed, DifferentiatingThePrimitiveReproducesTheForm) {
  const GridChart g(0.0, 1.0, 0.0, 1.0, 65, 65);
  const OneForm<double> a{sample(g, [](double u, double v) { return std::cos(u) * v; }),
                          sample(g, [](double u, double) { return std::sin(u); })};
  const auto p = integrate_closed(a, 0.0);
  const auto back = d_scalar(p.values);
  EXPECT_LT(max_norm(back.coeff_u - a.coeff_u), 1e-3);
  EXPECT_LT(max_norm(back.coeff_v - a.coeff_v), 1e-3);
}

TEST(Serpentine, VisitsEveryNodeWithUnitSteps) {
  const GridChart g(0.0, 1.0, 0.0, 1.0, 5, 4);
  const auto order = serpentine_order(g);
  ASSERT_EQ(order.size(), g.size());
  std::vector<bool> seen(g.size(), false);
  for (std::size_t s = 0; s < order.size(); ++s) {
    seen[order[s]] = true;
    if (s) {
      const auto [i0, j0] = g.node(order[s - 1]);
      const auto [i1, j1] = g.node(order[s]);
      EXPECT_EQ(std::abs(i1 - i0) + std::abs(j1 - j0), 1);
    }
  }
  for (bool b : seen) EXPECT_TRUE(b);
}

TEST(Stats, MaxMeanArgmax) {
  const GridChart g(0.0, 1.0, 0.0, 1.0, 3, 3);
  Field<double> f(g, 1.0);
  f(1, 2) = -4.0;
  const ResidualStats s = stats(f);
  EXPECT_DOUBLE_EQ(s.max, 4.0);
  EXPECT_DOUBLE_EQ(s.mean, 12.0 / 9.0);
  EXPECT_EQ(s.argmax, g.index(1, 2));
}
