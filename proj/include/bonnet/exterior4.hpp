#pragma once

// Pointwise exterior algebra of R^4: wedge products, the so(4) action,
// Hodge star, Klein form, (anti-)self-dual splitting and the quaternionic
// picture so(4) = Im H + Im H.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

namespace bonnet {

/// Fixed-size coordinate tuple with vector-space operations. The tag makes
/// each instantiation a distinct strong type.
template <std::size_t N, class Tag>
struct Coords {
  static constexpr std::size_t size = N;
  std::array<double, N> c{};

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr Coords& operator+=(const Coords& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Coords& operator-=(const Coords& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Coords& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  constexpr Coords& operator/=(double s) {
    for (auto& x : c) x /= s;
    return *this;
  }
  friend constexpr Coords operator+(Coords a, const Coords& b) { return a += b; }
  friend constexpr Coords operator-(Coords a, const Coords& b) { return a -= b; }
  friend constexpr Coords operator-(Coords a) { return a *= -1.0; }
  friend constexpr Coords operator*(double s, Coords a) { return a *= s; }
  friend constexpr Coords operator*(Coords a, double s) { return a *= s; }
  friend constexpr Coords operator/(Coords a, double s) { return a /= s; }
  friend constexpr bool operator==(const Coords&, const Coords&) = default;
};

template <std::size_t N, class Tag>
constexpr double dot(const Coords<N, Tag>& a, const Coords<N, Tag>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t N, class Tag>
double norm(const Coords<N, Tag>& a) {
  return std::sqrt(dot(a, a));
}

inline double norm(double a) { return std::abs(a); }

struct Vec4Tag {};
struct Bivector4Tag {};
struct QuatTag {};

using Vec4 = Coords<4, Vec4Tag>;

/// Element of Lambda^2 R^4 in the ordered basis
/// e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4. That basis is orthonormal
/// for the induced inner product, so dot() is the Lambda^2 inner product.
using Bivector4 = Coords<6, Bivector4Tag>;

/// Quaternion stored as (re, i, j, k).
using Quat = Coords<4, QuatTag>;

namespace b4 {
inline constexpr std::size_t e12 = 0, e13 = 1, e14 = 2, e23 = 3, e24 = 4, e34 = 5;

/// Index pairs (p,q), p<q, of each basis bivector.
inline constexpr std::array<std::pair<int, int>, 6> pairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Basis index of e_p^e_q for p<q.
constexpr std::size_t index_of(int p, int q) {
  for (std::size_t k = 0; k < 6; ++k)
    if (pairs[k].first == p && pairs[k].second == q) return k;
  return 6;
}
}  // namespace b4

constexpr Vec4 unit4(int i) {
  Vec4 e;
  e[static_cast<std::size_t>(i)] = 1.0;
  return e;
}

constexpr Bivector4 unit_bivector(std::size_t k) {
  Bivector4 b;
  b[k] = 1.0;
  return b;
}

constexpr Bivector4 wedge(const Vec4& a, const Vec4& b) {
  Bivector4 r;
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [p, q] = b4::pairs[k];
    r[k] = a[p] * b[q] - a[q] * b[p];
  }
  return r;
}

/// so(4) action: (a^b)c = <a,c>b - <b,c>a, extended linearly.
constexpr Vec4 act(const Bivector4& B, const Vec4& c) {
  Vec4 r;
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [p, q] = b4::pairs[k];
    r[q] += B[k] * c[p];
    r[p] -= B[k] * c[q];
  }
  return r;
}

/// Hodge star for vol = e1^e2^e3^e4.
constexpr Bivector4 hodge(const Bivector4& B) {
  using namespace b4;
  Bivector4 r;
  r[e12] = B[e34];
  r[e13] = -B[e24];
  r[e14] = B[e23];
  r[e23] = B[e14];
  r[e24] = -B[e13];
  r[e34] = B[e12];
  return r;
}

/// Klein form: kappa(a,b) vol = a^b.
constexpr double klein(const Bivector4& a, const Bivector4& b) {
  return dot(a, hodge(b));
}

/// Coefficient of vol in a^b^c^d, i.e. det[a b c d].
constexpr double wedge4(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
  return klein(wedge(a, b), wedge(c, d));
}

struct SdAsd {
  Bivector4 plus;
  Bivector4 minus;
};

constexpr SdAsd sd_asd_split(const Bivector4& B) {
  const Bivector4 s = hodge(B);
  return {0.5 * (B + s), 0.5 * (B - s)};
}

/// Scale-invariant decomposability test |kappa(B,B)| <= tol <B,B>.
inline bool is_decomposable(const Bivector4& B, double rel_tol = 1e-10) {
  return std::abs(klein(B, B)) <= rel_tol * dot(B, B);
}

// ---------------------------------------------------------------------------
// Quaternions. R^4 is identified with H via e1->1, e2->i, e3->j, e4->k.

constexpr Quat make_quat(double re, double i, double j, double k) { return Quat{{re, i, j, k}}; }

constexpr Quat to_quat(const Vec4& v) { return Quat{v.c}; }
constexpr Vec4 to_vec4(const Quat& q) { return Vec4{q.c}; }

constexpr Quat quat_mul(const Quat& p, const Quat& q) {
  return make_quat(p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
                   p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
                   p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
                   p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]);
}

constexpr Quat quat_conj(const Quat& q) { return make_quat(q[0], -q[1], -q[2], -q[3]); }

constexpr Quat quat_im(const Quat& q) { return make_quat(0.0, q[1], q[2], q[3]); }

constexpr double quat_re(const Quat& q) { return q[0]; }

/// <a,b> = Re(a conj(b)).
constexpr double eucl_inner(const Quat& a, const Quat& b) { return quat_re(quat_mul(a, quat_conj(b))); }

/// Pair of imaginary quaternions acting on H by c -> zl c - c zr.
struct SplitBivector {
  Quat zl;
  Quat zr;

  friend constexpr SplitBivector operator+(const SplitBivector& a, const SplitBivector& b) {
    return {a.zl + b.zl, a.zr + b.zr};
  }
  friend constexpr SplitBivector operator*(double s, const SplitBivector& a) { return {s * a.zl, s * a.zr}; }
};

constexpr Quat act(const SplitBivector& z, const Quat& c) {
  return quat_mul(z.zl, c) - quat_mul(c, z.zr);
}

/// Image of a^b under Lambda^2 H = Im H + Im H: (Im(b conj a), -Im(conj a b)) / 2.
constexpr SplitBivector split_of_wedge(const Quat& a, const Quat& b) {
  return {0.5 * quat_im(quat_mul(b, quat_conj(a))), -0.5 * quat_im(quat_mul(quat_conj(a), b))};
}

namespace detail {
constexpr std::array<SplitBivector, 6> basis_split_images() {
  std::array<SplitBivector, 6> out{};
  for (std::size_t k = 0; k < 6; ++k) {
    const auto [p, q] = b4::pairs[k];
    out[k] = split_of_wedge(to_quat(unit4(p)), to_quat(unit4(q)));
  }
  return out;
}
}  // namespace detail

constexpr SplitBivector to_quat_pair(const Bivector4& B) {
  constexpr auto images = detail::basis_split_images();
  SplitBivector r{};
  for (std::size_t k = 0; k < 6; ++k) r = r + B[k] * images[k];
  return r;
}

/// Inverse of to_quat_pair. From the basis images: the i, j, k parts of
/// (zl - zr) and (zl + zr) recover the six coordinates.
constexpr Bivector4 from_quat_pair(const SplitBivector& z) {
  using namespace b4;
  Bivector4 B;
  B[e12] = z.zl[1] - z.zr[1];
  B[e34] = z.zl[1] + z.zr[1];
  B[e13] = z.zl[2] - z.zr[2];
  B[e24] = -z.zl[2] - z.zr[2];
  B[e14] = z.zl[3] - z.zr[3];
  B[e23] = z.zl[3] + z.zr[3];
  return B;
}

/// True when the left factor zl carries the self-dual (S = +1) part.
/// Determined by applying S to from_quat_pair((i, 0)).
inline constexpr bool kLeftFactorSelfDual = [] {
  const Bivector4 b = from_quat_pair({make_quat(0, 1, 0, 0), Quat{}});
  return hodge(b) == b;
}();

/// Orthonormal bases of the self-dual and anti-self-dual subspaces.
inline const std::array<Bivector4, 3>& self_dual_basis() {
  static const std::array<Bivector4, 3> basis = [] {
    const double s = 1.0 / std::sqrt(2.0);
    using namespace b4;
    return std::array<Bivector4, 3>{s * (unit_bivector(e12) + unit_bivector(e34)),
                                    s * (unit_bivector(e13) - unit_bivector(e24)),
                                    s * (unit_bivector(e14) + unit_bivector(e23))};
  }();
  return basis;
}

inline const std::array<Bivector4, 3>& anti_self_dual_basis() {
  static const std::array<Bivector4, 3> basis = [] {
    const double s = 1.0 / std::sqrt(2.0);
    using namespace b4;
    return std::array<Bivector4, 3>{s * (unit_bivector(e12) - unit_bivector(e34)),
                                    s * (unit_bivector(e13) + unit_bivector(e24)),
                                    s * (unit_bivector(e14) - unit_bivector(e23))};
  }();
  return basis;
}

}  // namespace bonnet
