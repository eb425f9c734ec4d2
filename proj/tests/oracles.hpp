#pragma once

// Reference implementations that share no code with the library: outer
// products for wedges, Levi-Civita sums for volumes and the Hodge star,
// Eigen quaternions for Hamilton products.

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <utility>

#include "bonnet/exterior4.hpp"

namespace oracle {

using bonnet::Bivector4;
using bonnet::Vec4;

inline int perm_sign(std::array<int, 4> p) {
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[static_cast<std::size_t>(i)] == p[static_cast<std::size_t>(j)])
        return 0;
      else if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)])
        sign = -sign;
  return sign;
}

/// Antisymmetric 4x4 matrix of a bivector, A(p,q) = B_pq.
inline Eigen::Matrix4d as_antisymmetric(const Bivector4& B) {
  static constexpr int P[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  for (int k = 0; k < 6; ++k) {
    A(P[k][0], P[k][1]) = B[static_cast<std::size_t>(k)];
    A(P[k][1], P[k][0]) = -B[static_cast<std::size_t>(k)];
  }
  return A;
}

inline Bivector4 from_antisymmetric(const Eigen::Matrix4d& A) {
  return Bivector4{{A(0, 1), A(0, 2), A(0, 3), A(1, 2), A(1, 3), A(2, 3)}};
}

/// a^b from the outer product a b^T - b a^T.
inline Bivector4 wedge(const Vec4& a, const Vec4& b) {
  const Eigen::Vector4d av(a[0], a[1], a[2], a[3]), bv(b[0], b[1], b[2], b[3]);
  return from_antisymmetric(av * bv.transpose() - bv * av.transpose());
}

/// Coefficient of vol in alpha ^ beta: (1/4) sum eps_{pqrs} A_pq B_rs.
inline double four_form(const Bivector4& alpha, const Bivector4& beta) {
  const Eigen::Matrix4d A = as_antisymmetric(alpha), B = as_antisymmetric(beta);
  double s = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      for (int r = 0; r < 4; ++r)
        for (int t = 0; t < 4; ++t) s += perm_sign({p, q, r, t}) * A(p, q) * B(r, t);
  return 0.25 * s;
}

/// Hodge star from its definition <alpha,beta> vol = alpha ^ S(beta): with
/// K_IJ = e_I ^ e_J / vol, the matrix of S is K^{-1}.
inline Eigen::Matrix<double, 6, 6> hodge_matrix() {
  Eigen::Matrix<double, 6, 6> K;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Bivector4 a, b;
      a[static_cast<std::size_t>(i)] = 1.0;
      b[static_cast<std::size_t>(j)] = 1.0;
      K(i, j) = four_form(a, b);
    }
  return K.inverse();
}

inline Bivector4 hodge(const Bivector4& B) {
  static const Eigen::Matrix<double, 6, 6> S = hodge_matrix();
  Eigen::Matrix<double, 6, 1> v;
  for (int i = 0; i < 6; ++i) v(i) = B[static_cast<std::size_t>(i)];
  const Eigen::Matrix<double, 6, 1> w = S * v;
  Bivector4 out;
  for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = w(i);
  return out;
}

/// (a^b)c = <a,c> b - <b,c> a, extended linearly: act(B)c = -A c with A(p,q) = B_pq.
inline Vec4 act(const Bivector4& B, const Vec4& c) {
  const Eigen::Vector4d cv(c[0], c[1], c[2], c[3]);
  const Eigen::Vector4d r = -as_antisymmetric(B) * cv;
  return Vec4{{r(0), r(1), r(2), r(3)}};
}

inline double det4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  Eigen::Matrix4d M;
  for (int i = 0; i < 4; ++i) {
    const auto k = static_cast<std::size_t>(i);
    M(i, 0) = a[k];
    M(i, 1) = b[k];
    M(i, 2) = c[k];
    M(i, 3) = d[k];
  }
  return M.determinant();
}

// Quaternions through Eigen: e1 -> 1, e2 -> i, e3 -> j, e4 -> k.
inline Eigen::Quaterniond q(const Vec4& v) { return Eigen::Quaterniond(v[0], v[1], v[2], v[3]); }
inline Vec4 v(const Eigen::Quaterniond& p) { return Vec4{{p.w(), p.x(), p.y(), p.z()}}; }

inline Eigen::Quaterniond im(const Eigen::Quaterniond& p) { return Eigen::Quaterniond(0.0, p.x(), p.y(), p.z()); }

/// a^b as the pair (Im(b conj a)/2, -Im(conj a b)/2).
inline std::pair<Eigen::Quaterniond, Eigen::Quaterniond> split_of_wedge(const Vec4& a, const Vec4& b) {
  const Eigen::Quaterniond A = q(a), B = q(b);
  const Eigen::Quaterniond zl = im(B * A.conjugate()), zr = im(A.conjugate() * B);
  return {Eigen::Quaterniond(0.5 * zl.coeffs()), Eigen::Quaterniond(-0.5 * zr.coeffs())};
}

/// c -> zl c - c zr.
inline Vec4 quaternion_act(const Eigen::Quaterniond& zl, const Eigen::Quaterniond& zr, const Vec4& c) {
  const Eigen::Quaterniond C = q(c);
  return v(zl * C) - v(C * zr);
}

inline Vec4 random_vec(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec4{{n(rng), n(rng), n(rng), n(rng)}};
}

inline Vec4 random_unit(std::mt19937_64& rng) {
  Vec4 x = random_vec(rng);
  return x / bonnet::norm(x);
}

inline Bivector4 random_bivector(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Bivector4 B;
  for (auto& c : B.c) c = n(rng);
  return B;
}

/// Random element of SO(4) by QR of a Gaussian matrix.
inline Eigen::Matrix4d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix4d M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = n(rng);
  Eigen::HouseholderQR<Eigen::Matrix4d> qr(M);
  Eigen::Matrix4d Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1.0;
  return Q;
}

inline double richardson_ratio(double coarse, double fine) { return coarse / fine; }

}  // namespace oracle
