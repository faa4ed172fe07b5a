/*
 * Copyright 2026 The uhlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UHLAB_MAT2_HPP
#define UHLAB_MAT2_HPP

// 2x2 real and complex matrices. Everything here is closed form; no
// general linear algebra is needed at this size.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace uhlab {

using cplx = std::complex<double>;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    const double n = norm();
    return {x / n, y / n};
  }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
};

template <typename T>
struct Mat2 {
  T a11{}, a12{}, a21{}, a22{};

  static constexpr Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

  T det() const { return a11 * a22 - a12 * a21; }
  T trace() const { return a11 + a22; }

  /// Inverse of a unimodular matrix: the adjugate.
  Mat2 adjugate() const { return {a22, -a12, -a21, a11}; }
  Mat2 inverse() const {
    const T d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend Mat2 operator*(T s, const Mat2& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }
};

using Mat2R = Mat2<double>;
using Mat2C = Mat2<cplx>;

inline Vec2 operator*(const Mat2R& m, Vec2 v) {
  return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
}

inline Mat2R transpose(const Mat2R& m) { return {m.a11, m.a21, m.a12, m.a22}; }

inline Mat2C adjoint(const Mat2C& m) {
  return {std::conj(m.a11), std::conj(m.a21), std::conj(m.a12), std::conj(m.a22)};
}

/// Largest absolute entry.
inline double max_abs(const Mat2R& m) {
  return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}
inline double max_abs(const Mat2C& m) {
  return std::max({std::abs(m.a11), std::abs(m.a12), std::abs(m.a21), std::abs(m.a22)});
}

/// Both singular values of a real 2x2, largest first.
inline std::array<double, 2> singular_values(const Mat2R& m) {
  // sigma_max/min = (sqrt((a+d)^2+(b-c)^2) +/- sqrt((a-d)^2+(b+c)^2)) / 2
  const double p = std::hypot(m.a11 + m.a22, m.a12 - m.a21);
  const double q = std::hypot(m.a11 - m.a22, m.a12 + m.a21);
  return {0.5 * (p + q), 0.5 * std::abs(p - q)};
}

/// Operator 2-norm.
inline double op_norm(const Mat2R& m) { return singular_values(m)[0]; }

/// Operator 2-norm of a complex 2x2 from the eigenvalues of M*M.
inline double op_norm(const Mat2C& m) {
  const double f = std::norm(m.a11) + std::norm(m.a12) + std::norm(m.a21) + std::norm(m.a22);
  const double d = std::abs(m.det());
  const double disc = std::max(0.0, f * f - 4.0 * d * d);
  return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

/// Counter-clockwise rotation R_angle.
inline Mat2R rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

/// The reflection S(theta) = [[-cos, sin], [sin, cos]]; S(theta) R_g = S(theta + g).
inline Mat2R reflection(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {-c, s, s, c};
}

/// Unit left singular vector for the largest singular value (the most
/// expanded image direction). Sign is normalized so the first nonzero
/// component is positive.
inline Vec2 top_left_singular(const Mat2R& m) {
  // Eigenvector of M M^T for its top eigenvalue.
  const double p = m.a11 * m.a11 + m.a12 * m.a12;
  const double q = m.a11 * m.a21 + m.a12 * m.a22;
  const double r = m.a21 * m.a21 + m.a22 * m.a22;
  // Angle of principal axis of the symmetric form [[p,q],[q,r]].
  const double phi = 0.5 * std::atan2(2.0 * q, p - r);
  Vec2 v{std::cos(phi), std::sin(phi)};
  if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) v = {-v.x, -v.y};
  return v;
}

/// Matrix exponential of a traceless real 2x2 (an sl(2,R) element); the
/// result has determinant one.
inline Mat2R exp_sl2(const Mat2R& g) {
  // g^2 = -det(g) I.
  const double delta = -g.det();
  double c, s;  // exp(g) = c I + s g
  if (delta > 1e-12) {
    const double k = std::sqrt(delta);
    c = std::cosh(k);
    s = std::sinh(k) / k;
  } else if (delta < -1e-12) {
    const double k = std::sqrt(-delta);
    c = std::cos(k);
    s = std::sin(k) / k;
  } else {
    c = 1.0 + 0.5 * delta;
    s = 1.0 + delta / 6.0;
  }
  return {c + s * g.a11, s * g.a12, s * g.a21, c + s * g.a22};
}

/// Projective distance between the lines spanned by u and v: |sin angle|.
inline double projective_distance(Vec2 u, Vec2 v) {
  const double nu = u.norm(), nv = v.norm();
  return std::abs(u.x * v.y - u.y * v.x) / (nu * nv);
}

inline double wrap_pi(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

inline double wrap_two_pi(double a) {
  double w = std::fmod(a, 2.0 * std::numbers::pi);
  if (w < 0.0) w += 2.0 * std::numbers::pi;
  if (w >= 2.0 * std::numbers::pi) w = 0.0;
  return w;
}

}  // namespace uhlab

#endif  // UHLAB_MAT2_HPP
