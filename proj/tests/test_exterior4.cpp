#include <gtest/gtest.h>

#include <random>

#include "bonnet/exterior4.hpp"
#include "oracles.hpp"

using namespace bonnet;

namespace {

Vec4 e(int i) { return unit4(i); }

double dist(const Bivector4& a, const Bivector4& b) { return norm(Bivector4(a - b)); }
double dist(const Vec4& a, const Vec4& b) { return norm(Vec4(a - b)); }
double dist(const Quat& a, const Quat& b) { return norm(Quat(a - b)); }

Quat qi() { return make_quat(0, 1, 0, 0); }
Quat qj() { return make_quat(0, 0, 1, 0); }
Quat qk() { return make_quat(0, 0, 0, 1); }

}  // namespace

TEST(Wedge, BasisAndBilinearity) {
  const Bivector4 w = wedge(e(0), e(1));
  EXPECT_EQ(w, unit_bivector(b4::e12));
  EXPECT_EQ(wedge(Vec4(e(0) + e(1)), e(1)), unit_bivector(b4::e12));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Vec4 a = oracle::random_vec(rng), b = oracle::random_vec(rng);
    EXPECT_LT(norm(wedge(a, a)), 1e-15);
    EXPECT_LT(dist(wedge(a, b), oracle::wedge(a, b)), 1e-14);
    EXPECT_LT(dist(wedge(a, b), Bivector4(-wedge(b, a))), 1e-15);
  }
}

TEST(Act, DefiningFormulaOnBasis) {
  const Bivector4 B = wedge(e(0), e(1));
  EXPECT_EQ(act(B, e(0)), e(1));
  EXPECT_EQ(act(B, e(1)), Vec4(-e(0)));
  EXPECT_EQ(act(B, e(2)), Vec4{});
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const Vec4 a = oracle::random_vec(rng), b = oracle::random_vec(rng), c = oracle::random_vec(rng);
    const Vec4 expected = dot(a, c) * b - dot(b, c) * a;
    EXPECT_LT(dist(act(wedge(a, b), c), expected), 1e-13);
    const Bivector4 R = oracle::random_bivector(rng);
    EXPECT_LT(dist(act(R, c), oracle::act(R, c)), 1e-14);
  }
}

TEST(Hodge, BasisImagesAgreeWithDefiningRelation) {
  EXPECT_EQ(hodge(unit_bivector(b4::e12)), unit_bivector(b4::e34));
  EXPECT_EQ(hodge(unit_bivector(b4::e13)), Bivector4(-unit_bivector(b4::e24)));
  for (std::size_t k = 0; k < 6; ++k) {
    const Bivector4 b = unit_bivector(k);
    EXPECT_LT(dist(hodge(b), oracle::hodge(b)), 1e-14) << "basis element " << k;
  }
}

TEST(Hodge, InvolutiveIsometry) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 1000; ++t) {
    const Bivector4 a = oracle::random_bivector(rng), b = oracle::random_bivector(rng);
    EXPECT_LT(dist(hodge(hodge(a)), a), 1e-14);
    EXPECT_NEAR(dot(hodge(a), hodge(b)), dot(a, b), 1e-13);
    // <a,b> vol = a ^ S(b)
    EXPECT_NEAR(oracle::four_form(a, hodge(b)), dot(a, b), 1e-12);
  }
}

TEST(Klein, ValuesAndSignature) {
  EXPECT_EQ(klein(unit_bivector(b4::e12), unit_bivector(b4::e34)), 1.0);
  EXPECT_EQ(klein(unit_bivector(b4::e12), unit_bivector(b4::e12)), 0.0);
  Eigen::Matrix<double, 6, 6> G;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      G(static_cast<int>(i), static_cast<int>(j)) = klein(unit_bivector(i), unit_bivector(j));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(G);
  const auto ev = es.eigenvalues();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), -1.0, 1e-12);
  for (int i = 3; i < 6; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-12);
}

TEST(Klein, DecomposableIffIsotropic) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 1000; ++t) {
    const Vec4 a = oracle::random_vec(rng), b = oracle::random_vec(rng);
    const Bivector4 B = wedge(a, b);
    EXPECT_LT(std::abs(klein(B, B)), 1e-12 * dot(B, B));
    EXPECT_TRUE(is_decomposable(B));
    EXPECT_NEAR(klein(B, B), oracle::four_form(B, B), 1e-12);
    // rank(act(B, .)) <= 2
    Eigen::Matrix4d M;
    for (int c = 0; c < 4; ++c) {
      const Vec4 col = act(B, e(c));
      for (int r = 0; r < 4; ++r) M(r, c) = col[static_cast<std::size_t>(r)];
    }
    const auto sv = Eigen::JacobiSVD<Eigen::Matrix4d>(M).singularValues();
    EXPECT_LT(sv(2), 1e-12 * sv(0));
  }
  EXPECT_FALSE(is_decomposable(Bivector4(unit_bivector(b4::e12) + unit_bivector(b4::e34))));
}

TEST(Wedge4, IsTheDeterminant) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Vec4 a = oracle::random_vec(rng), b = oracle::random_vec(rng), c = oracle::random_vec(rng),
               d = oracle::random_vec(rng);
    EXPECT_NEAR(wedge4(a, b, c, d), oracle::det4(a, b, c, d), 1e-12);
  }
  EXPECT_EQ(wedge4(e(0), e(1), e(2), e(3)), 1.0);
}

TEST(Split, EigenspacesAndOrthogonality) {
  const SdAsd s = sd_asd_split(unit_bivector(b4::e12));
  EXPECT_EQ(s.plus, Bivector4(0.5 * (unit_bivector(b4::e12) + unit_bivector(b4::e34))));
  EXPECT_EQ(s.minus, Bivector4(0.5 * (unit_bivector(b4::e12) - unit_bivector(b4::e34))));
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const Bivector4 B = oracle::random_bivector(rng);
    const SdAsd p = sd_asd_split(B);
    EXPECT_LT(dist(hodge(p.plus), p.plus), 1e-15);
    EXPECT_LT(dist(hodge(p.minus), Bivector4(-p.minus)), 1e-15);
    EXPECT_LT(dist(Bivector4(p.plus + p.minus), B), 1e-15);
    EXPECT_NEAR(dot(p.plus, p.minus), 0.0, 1e-14);
    EXPECT_NEAR(dot(B, B), dot(p.plus, p.plus) + dot(p.minus, p.minus), 1e-12);
    const SdAsd again = sd_asd_split(p.plus);
    EXPECT_LT(dist(again.plus, p.plus), 1e-15);
    EXPECT_LT(norm(again.minus), 1e-15);
  }
}

TEST(Split, OrthonormalBases) {
  for (const auto* basis : {&self_dual_basis(), &anti_self_dual_basis()}) {
    const double sign = basis == &self_dual_basis() ? 1.0 : -1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_LT(dist(hodge((*basis)[i]), Bivector4(sign * (*basis)[i])), 1e-15);
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(dot((*basis)[i], (*basis)[j]), i == j ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(Quaternion, MultiplicationTable) {
  EXPECT_EQ(quat_mul(qi(), qj()), qk());
  EXPECT_EQ(quat_mul(qj(), qk()), qi());
  EXPECT_EQ(quat_mul(qk(), qi()), qj());
  const Quat minus_one = make_quat(-1, 0, 0, 0);
  EXPECT_EQ(quat_mul(qi(), qi()), minus_one);
  EXPECT_EQ(quat_mul(qj(), qj()), minus_one);
  EXPECT_EQ(quat_mul(quat_mul(qi(), qj()), qk()), minus_one);
}

TEST(Quaternion, AgreesWithEigenAndInnerProduct) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const Vec4 a = oracle::random_vec(rng), b = oracle::random_vec(rng);
    const Quat p = to_quat(a), q = to_quat(b);
    EXPECT_LT(dist(to_vec4(quat_mul(p, q)), oracle::v(oracle::q(a) * oracle::q(b))), 1e-13);
    EXPECT_NEAR(eucl_inner(p, q), dot(a, b), 1e-13);
    EXPECT_NEAR(quat_re(quat_mul(quat_conj(p), q)), dot(a, b), 1e-13);
    EXPECT_LT(dist(quat_conj(quat_mul(p, q)), quat_mul(quat_conj(q), quat_conj(p))), 1e-13);
  }
}

TEST(QuatPair, WedgeImageAndInverse) {
  const SplitBivector z = to_quat_pair(wedge(e(0), e(1)));
  EXPECT_EQ(z.zl, Quat(0.5 * qi()));
  EXPECT_EQ(z.zr, Quat(-0.5 * qi()));
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const Bivector4 B = oracle::random_bivector(rng);
    EXPECT_LT(dist(from_quat_pair(to_quat_pair(B)), B), 1e-14);
    const SplitBivector s = to_quat_pair(B);
    EXPECT_EQ(s.zl[0], 0.0);
    EXPECT_EQ(s.zr[0], 0.0);
    const Vec4 a = oracle::random_vec(rng), b = oracle::random_vec(rng);
    const auto [zl, zr] = oracle::split_of_wedge(a, b);
    const SplitBivector w = to_quat_pair(wedge(a, b));
    EXPECT_LT(dist(to_vec4(w.zl), oracle::v(zl)), 1e-13);
    EXPECT_LT(dist(to_vec4(w.zr), oracle::v(zr)), 1e-13);
  }
}

TEST(QuatPair, IntertwinesTheActions) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const Bivector4 B = oracle::random_bivector(rng);
    const Vec4 c = oracle::random_vec(rng);
    const SplitBivector z = to_quat_pair(B);
    const Vec4 quaternionic = oracle::quaternion_act(oracle::q(to_vec4(z.zl)), oracle::q(to_vec4(z.zr)), c);
    EXPECT_LT(dist(act(B, c), quaternionic), 1e-14);
  }
  for (std::size_t k = 0; k < 6; ++k)
    for (int i = 0; i < 4; ++i) {
      const Bivector4 B = unit_bivector(k);
      EXPECT_LT(dist(to_vec4(act(to_quat_pair(B), to_quat(e(i)))), act(B, e(i))), 1e-15);
    }
}

TEST(QuatPair, SelfDualFactorConvention) {
  EXPECT_TRUE(kLeftFactorSelfDual);
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    const SdAsd p = sd_asd_split(oracle::random_bivector(rng));
    const SplitBivector zp = to_quat_pair(p.plus), zm = to_quat_pair(p.minus);
    EXPECT_LT(norm(zp.zr), 1e-14);
    EXPECT_LT(norm(zm.zl), 1e-14);
  }
}
