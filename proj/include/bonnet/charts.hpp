#pragma once

// Grid-chart calculus: node-centred sampled fields on a rectangular (u,v)
// patch, second-order finite differences, exterior derivatives, the
// R^4-valued wedge of 1-forms, and path-independent integration of closed
// 1-forms with a per-cell circulation certificate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bonnet/errors.hpp"
#include "bonnet/exterior4.hpp"
#include "bonnet/parallel.hpp"

namespace bonnet {

struct GridChart {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
  int nu = 3, nv = 3;

  GridChart() = default;
  GridChart(double u0_, double u1_, double v0_, double v1_, int nu_, int nv_)
      : u0(u0_), u1(u1_), v0(v0_), v1(v1_), nu(nu_), nv(nv_) {
    validate();
  }

  void validate() const {
    if (!(u1 > u0) || !(v1 > v0)) throw PreconditionError("chart: need u1 > u0 and v1 > v0");
    if (nu < 3 || nv < 3) throw PreconditionError("chart: need at least 3 nodes per direction");
  }

  double hu() const { return (u1 - u0) / (nu - 1); }
  double hv() const { return (v1 - v0) / (nv - 1); }
  double u(int i) const { return u0 + i * hu(); }
  double v(int j) const { return v0 + j * hv(); }

  /// Row-major in u: node (i,j) lives at i*nv + j.
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j);
  }
  std::size_t size() const { return static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv); }
  std::pair<int, int> node(std::size_t k) const {
    return {static_cast<int>(k / static_cast<std::size_t>(nv)), static_cast<int>(k % static_cast<std::size_t>(nv))};
  }

  /// Same rectangle with each spacing halved.
  GridChart refined() const { return GridChart(u0, u1, v0, v1, 2 * nu - 1, 2 * nv - 1); }

  friend bool operator==(const GridChart&, const GridChart&) = default;
};

inline std::string describe_node(const GridChart& chart, std::size_t k) {
  const auto [i, j] = chart.node(k);
  std::ostringstream os;
  os << "node (" << i << "," << j << ") at (u,v)=(" << chart.u(i) << "," << chart.v(j) << ")";
  return os.str();
}

struct Sym2Tag {};

/// Symmetric 2x2 matrix (uu, uv, vv) in the (d/du, d/dv) basis.
using Sym2 = Coords<3, Sym2Tag>;

constexpr Sym2 make_sym2(double uu, double uv, double vv) { return Sym2{{uu, uv, vv}}; }

/// Max-abs entry; the natural size for residuals of quadratic forms.
inline double norm(const Sym2& s) {
  return std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
}

template <class T>
class Field {
 public:
  Field() = default;
  explicit Field(const GridChart& chart, const T& init = T{}) : chart_(chart), data_(chart.size(), init) {}

  const GridChart& chart() const { return chart_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int i, int j) { return data_[chart_.index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[chart_.index(i, j)]; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  const std::vector<T>& values() const { return data_; }
  std::vector<T>& values() { return data_; }

 private:
  GridChart chart_;
  std::vector<T> data_;
};

template <class T>
struct OneForm {
  Field<T> coeff_u;
  Field<T> coeff_v;

  const GridChart& chart() const { return coeff_u.chart(); }
  const T& at(std::size_t k, int dir) const { return dir == 0 ? coeff_u[k] : coeff_v[k]; }
};

template <class T>
struct TwoForm {
  Field<T> coeff;  // du^dv coefficient
};

/// Pointwise map; fn receives the node's flat index and returns the value.
template <class Fn>
auto generate(const GridChart& chart, Fn&& fn) {
  using T = decltype(fn(std::size_t{}));
  Field<T> out(chart);
  parallel_for(chart.size(), [&](std::size_t k) { out[k] = fn(k); });
  return out;
}

/// Samples f(u,v) at every node.
template <class Fn>
auto sample(const GridChart& chart, Fn&& f) {
  return generate(chart, [&](std::size_t k) {
    const auto [i, j] = chart.node(k);
    return f(chart.u(i), chart.v(j));
  });
}

template <class T, class Fn>
auto map(const Field<T>& a, Fn&& fn) {
  return generate(a.chart(), [&](std::size_t k) { return fn(a[k]); });
}

template <class T, class U, class Fn>
auto zip(const Field<T>& a, const Field<U>& b, Fn&& fn) {
  if (!(a.chart() == b.chart())) throw PreconditionError("zip: fields live on different charts");
  return generate(a.chart(), [&](std::size_t k) { return fn(a[k], b[k]); });
}

template <class T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
  return zip(a, b, [](const T& x, const T& y) { return T(x + y); });
}
template <class T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
  return zip(a, b, [](const T& x, const T& y) { return T(x - y); });
}
template <class T>
Field<T> operator*(double s, const Field<T>& a) {
  return map(a, [s](const T& x) { return T(s * x); });
}
template <class T>
OneForm<T> operator*(double s, const OneForm<T>& a) {
  return {s * a.coeff_u, s * a.coeff_v};
}
template <class T>
OneForm<T> operator+(const OneForm<T>& a, const OneForm<T>& b) {
  return {a.coeff_u + b.coeff_u, a.coeff_v + b.coeff_v};
}
template <class T>
OneForm<T> operator-(const OneForm<T>& a, const OneForm<T>& b) {
  return {a.coeff_u - b.coeff_u, a.coeff_v - b.coeff_v};
}

struct ResidualStats {
  double max = 0.0;
  double mean = 0.0;
  std::size_t argmax = 0;
};

template <class T>
ResidualStats stats(const Field<T>& f) {
  ResidualStats s;
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double n = norm(f[k]);
    sum += n;
    if (!(n <= s.max)) {  // also propagates NaN
      s.max = n;
      s.argmax = k;
    }
  }
  s.mean = f.size() ? sum / static_cast<double>(f.size()) : 0.0;
  return s;
}

template <class T>
ResidualStats stats(const OneForm<T>& a) {
  const ResidualStats su = stats(a.coeff_u), sv = stats(a.coeff_v);
  ResidualStats s = su.max >= sv.max ? su : sv;
  s.mean = 0.5 * (su.mean + sv.mean);
  return s;
}

template <class T>
double max_norm(const Field<T>& f) {
  return stats(f).max;
}

template <class T>
double max_norm(const OneForm<T>& a) {
  return std::max(max_norm(a.coeff_u), max_norm(a.coeff_v));
}

// ---------------------------------------------------------------------------
// Finite differences: central in the interior, second-order one-sided at
// the boundary.

namespace detail {
template <class T>
T stencil(const T& fm, const T& f0, const T& fp, int pos, double h) {
  // pos: -1 first node (f0,fm,fp hold f0,f1,f2), +1 last node
  // (f0,fm,fp hold f_{N-1},f_{N-2},f_{N-3}), 0 interior (fm,fp neighbours).
  if (pos == 0) return T((fp - fm) / (2.0 * h));
  if (pos < 0) return T((-3.0 * f0 + 4.0 * fm - fp) / (2.0 * h));
  return T((3.0 * f0 - 4.0 * fm + fp) / (2.0 * h));
}
}  // namespace detail

template <class T>
Field<T> diff_u(const Field<T>& f) {
  const GridChart& g = f.chart();
  const double h = g.hu();
  return generate(g, [&](std::size_t k) {
    const auto [i, j] = g.node(k);
    if (i == 0) return detail::stencil(f(1, j), f(0, j), f(2, j), -1, h);
    if (i == g.nu - 1) return detail::stencil(f(i - 1, j), f(i, j), f(i - 2, j), 1, h);
    return detail::stencil(f(i - 1, j), f(i, j), f(i + 1, j), 0, h);
  });
}

template <class T>
Field<T> diff_v(const Field<T>& f) {
  const GridChart& g = f.chart();
  const double h = g.hv();
  return generate(g, [&](std::size_t k) {
    const auto [i, j] = g.node(k);
    if (j == 0) return detail::stencil(f(i, 1), f(i, 0), f(i, 2), -1, h);
    if (j == g.nv - 1) return detail::stencil(f(i, j - 1), f(i, j), f(i, j - 2), 1, h);
    return detail::stencil(f(i, j - 1), f(i, j), f(i, j + 1), 0, h);
  });
}

template <class T>
OneForm<T> d_scalar(const Field<T>& f) {
  return {diff_u(f), diff_v(f)};
}

/// d(a du + b dv) = (b_u - a_v) du^dv.
template <class T>
TwoForm<T> d_oneform(const OneForm<T>& a) {
  return {diff_u(a.coeff_v) - diff_v(a.coeff_u)};
}

/// alpha ^ beta for R^4-valued 1-forms, multiplying coefficients with the
/// wedge of R^4: (alpha_u ^ beta_v - alpha_v ^ beta_u) du^dv.
inline TwoForm<Bivector4> wedge_vv(const OneForm<Vec4>& a, const OneForm<Vec4>& b) {
  const GridChart& g = a.chart();
  return {generate(g, [&](std::size_t k) {
    return Bivector4(wedge(a.coeff_u[k], b.coeff_v[k]) - wedge(a.coeff_v[k], b.coeff_u[k]));
  })};
}

/// Pointwise product of a 1-form with a 0-form through a bilinear map.
template <class A, class B, class Fn>
auto pointwise(const OneForm<A>& a, const Field<B>& f, Fn&& fn) {
  using R = decltype(fn(a.coeff_u[0], f[0]));
  return OneForm<R>{zip(a.coeff_u, f, fn), zip(a.coeff_v, f, fn)};
}

// ---------------------------------------------------------------------------
// Integration of closed 1-forms.

/// Closure gate: max(1e-8, 10 h^2 scale(alpha)).
template <class T>
double closure_tolerance(const OneForm<T>& a) {
  const GridChart& g = a.chart();
  const double h = std::max(g.hu(), g.hv());
  return std::max(1e-8, 10.0 * h * h * max_norm(a));
}

/// Node visiting order: along u on even v-columns, back along u on odd ones.
inline std::vector<std::size_t> serpentine_order(const GridChart& g) {
  std::vector<std::size_t> order;
  order.reserve(g.size());
  for (int j = 0; j < g.nv; ++j) {
    if (j % 2 == 0)
      for (int i = 0; i < g.nu; ++i) order.push_back(g.index(i, j));
    else
      for (int i = g.nu - 1; i >= 0; --i) order.push_back(g.index(i, j));
  }
  return order;
}

/// Trapezoid circulation of alpha around every elementary cell, stored at
/// the cell's lower-left node (last row/column are zero).
template <class T>
Field<T> cell_circulation(const OneForm<T>& a) {
  const GridChart& g = a.chart();
  const double hu = g.hu(), hv = g.hv();
  const auto& A = a.coeff_u;
  const auto& B = a.coeff_v;
  return generate(g, [&](std::size_t k) {
    const auto [i, j] = g.node(k);
    if (i == g.nu - 1 || j == g.nv - 1) return T{};
    const T bottom = 0.5 * hu * (A(i, j) + A(i + 1, j));
    const T right = 0.5 * hv * (B(i + 1, j) + B(i + 1, j + 1));
    const T top = 0.5 * hu * (A(i, j + 1) + A(i + 1, j + 1));
    const T left = 0.5 * hv * (B(i, j) + B(i, j + 1));
    return T(bottom + right - top - left);
  });
}

template <class T>
struct Primitive {
  Field<T> values;
  double loop_defect = 0.0;        // worst |circulation| over all cells
  double closure_residual = 0.0;   // max |d alpha|
  double closure_tolerance = 0.0;
};

/// Integrates a closed 1-form from base_value at node (0,0) along the
/// serpentine path with the trapezoid rule. Refuses (NumericalRefusal) when
/// the finite-difference closure residual exceeds the closure gate.
template <class T>
Primitive<T> integrate_closed(const OneForm<T>& a, const T& base_value, double tolerance = -1.0) {
  const GridChart& g = a.chart();
  Primitive<T> out;
  out.closure_tolerance = tolerance > 0.0 ? tolerance : closure_tolerance(a);
  const ResidualStats closure = stats(d_oneform(a).coeff);
  out.closure_residual = closure.max;
  if (!(closure.max <= out.closure_tolerance)) {
    std::ostringstream os;
    os << "integrate_closed: 1-form is not closed: |d alpha| = " << closure.max << " exceeds tolerance "
       << out.closure_tolerance << " at " << describe_node(g, closure.argmax);
    throw NumericalRefusal(os.str());
  }

  out.values = Field<T>(g);
  const auto order = serpentine_order(g);
  out.values[order[0]] = base_value;
  for (std::size_t s = 1; s < order.size(); ++s) {
    const auto [i0, j0] = g.node(order[s - 1]);
    const auto [i1, j1] = g.node(order[s]);
    const T& prev = out.values[order[s - 1]];
    if (j0 == j1) {
      const double du = g.u(i1) - g.u(i0);
      out.values[order[s]] = prev + 0.5 * du * (a.coeff_u[order[s - 1]] + a.coeff_u[order[s]]);
    } else {
      const double dv = g.v(j1) - g.v(j0);
      out.values[order[s]] = prev + 0.5 * dv * (a.coeff_v[order[s - 1]] + a.coeff_v[order[s]]);
    }
  }
  out.loop_defect = max_norm(cell_circulation(a));
  return out;
}

}  // namespace bonnet
