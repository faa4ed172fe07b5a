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

#ifndef UHLAB_BASE_DYNAMICS_HPP
#define UHLAB_BASE_DYNAMICS_HPP

// Base homeomorphisms of the torus: rotations and the skew-shift
// (x, y) -> (x + alpha, y + x). The compact space is only ever seen through
// finite lattices and orbit segments.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "uhlab/errors.hpp"

namespace uhlab {

/// (sqrt(5) - 1) / 2 to 17 significant digits.
inline constexpr double kGoldenFrequency = 0.61803398874989485;

/// Wraps a + b into [0, 1) assuming both summands already lie in (-1, 1).
inline double add_phase(double a, double b) {
  double v = a + b;
  if (v >= 1.0) v -= 1.0;
  if (v < 0.0) v += 1.0;
  if (v >= 1.0) v = 0.0;  // -tiny + 1 rounds to 1
  return v;
}

/// Distance on the circle R/Z.
inline double circle_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

class BasePoint {
 public:
  BasePoint() = default;
  explicit BasePoint(double x) : dim_(1), c_{x, 0.0} { check(); }
  BasePoint(double x, double y) : dim_(2), c_{x, y} { check(); }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const std::array<double, 2>& coords() const { return c_; }

  friend bool operator==(const BasePoint&, const BasePoint&) = default;

 private:
  void check() const {
    for (int i = 0; i < dim_; ++i) {
      const double v = c_[static_cast<std::size_t>(i)];
      if (!(v >= 0.0 && v < 1.0)) {
        throw Error(ErrorKind::DimensionMismatch,
                    "phase coordinate " + std::to_string(v) + " outside [0,1)");
      }
    }
  }

  int dim_ = 1;
  std::array<double, 2> c_{0.0, 0.0};
};

/// Makes a point from arbitrary reals by reducing each coordinate mod 1.
inline BasePoint reduced_point(int dim, double x, double y = 0.0) {
  auto red = [](double v) {
    double w = v - std::floor(v);
    return w >= 1.0 ? 0.0 : w;
  };
  return dim == 1 ? BasePoint(red(x)) : BasePoint(red(x), red(y));
}

/// Max coordinatewise circle distance.
inline double point_distance(const BasePoint& p, const BasePoint& q) {
  double d = 0.0;
  for (int i = 0; i < p.dim(); ++i) d = std::max(d, circle_distance(p[i], q[i]));
  return d;
}

enum class DynamicsKind { Rotation, SkewShift };

/// The base map T. For the skew-shift, the first coordinate is the factor
/// onto the circle rotation by alpha.
class BaseDynamics {
 public:
  static BaseDynamics rotation(double alpha) { return BaseDynamics(DynamicsKind::Rotation, 1, {alpha, 0.0}); }
  static BaseDynamics rotation2(double alpha1, double alpha2) {
    return BaseDynamics(DynamicsKind::Rotation, 2, {alpha1, alpha2});
  }
  static BaseDynamics skew_shift(double alpha) { return BaseDynamics(DynamicsKind::SkewShift, 2, {alpha, 0.0}); }

  DynamicsKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double frequency(int i = 0) const { return freq_[static_cast<std::size_t>(i)]; }

  std::string describe() const {
    if (kind_ == DynamicsKind::SkewShift) return "skew-shift(alpha=" + std::to_string(freq_[0]) + ")";
    if (dim_ == 1) return "rotation(alpha=" + std::to_string(freq_[0]) + ")";
    return "rotation(alpha=" + std::to_string(freq_[0]) + "," + std::to_string(freq_[1]) + ")";
  }

  BasePoint step(const BasePoint& p) const {
    check_dim(p);
    if (kind_ == DynamicsKind::SkewShift) return BasePoint(add_phase(p[0], freq_[0]), add_phase(p[1], p[0]));
    if (dim_ == 1) return BasePoint(add_phase(p[0], freq_[0]));
    return BasePoint(add_phase(p[0], freq_[0]), add_phase(p[1], freq_[1]));
  }

  BasePoint inverse_step(const BasePoint& p) const {
    check_dim(p);
    if (kind_ == DynamicsKind::SkewShift) {
      const double x = add_phase(p[0], -freq_[0]);
      return BasePoint(x, add_phase(p[1], -x));
    }
    if (dim_ == 1) return BasePoint(add_phase(p[0], -freq_[0]));
    return BasePoint(add_phase(p[0], -freq_[0]), add_phase(p[1], -freq_[1]));
  }

  /// T^n(p) for any integer n, by repeated single steps.
  BasePoint power(const BasePoint& p, long n) const {
    BasePoint q = p;
    for (long k = 0; k < n; ++k) q = step(q);
    for (long k = 0; k > n; --k) q = inverse_step(q);
    return q;
  }

 private:
  BaseDynamics(DynamicsKind kind, int dim, std::array<double, 2> freq) : kind_(kind), dim_(dim), freq_(freq) {
    for (int i = 0; i < dim_; ++i) {
      const double a = freq_[static_cast<std::size_t>(i)];
      if (!(a >= 0.0 && a < 1.0)) throw Error(ErrorKind::DimensionMismatch, "frequency outside [0,1)");
    }
  }
  void check_dim(const BasePoint& p) const {
    if (p.dim() != dim_) {
      throw Error(ErrorKind::DimensionMismatch, "point of dimension " + std::to_string(p.dim()) +
                                                    " for dynamics of dimension " + std::to_string(dim_));
    }
  }

  DynamicsKind kind_;
  int dim_;
  std::array<double, 2> freq_;
};

/// T^k(p) for k = n_from..n_to inclusive.
inline std::vector<BasePoint> orbit(const BaseDynamics& dyn, const BasePoint& p, long n_from, long n_to) {
  if (n_from > n_to) throw Error(ErrorKind::DimensionMismatch, "orbit range reversed");
  std::vector<BasePoint> out;
  out.reserve(static_cast<std::size_t>(n_to - n_from + 1));
  BasePoint q = dyn.power(p, n_from);
  out.push_back(q);
  for (long k = n_from; k < n_to; ++k) {
    q = dyn.step(q);
    out.push_back(q);
  }
  return out;
}

enum class GridProvenance { UniformLattice, ForwardOrbit };

struct OrbitGrid {
  std::vector<BasePoint> points;
  int resolution = 0;
  int dim = 1;
  GridProvenance provenance = GridProvenance::UniformLattice;

  std::size_t size() const { return points.size(); }
};

/// The lattice {i / resolution}^d, in row-major order (last coordinate fastest).
inline OrbitGrid make_grid(int dim, int resolution) {
  if (resolution < 2) throw Error(ErrorKind::ResolutionTooSmall, "grid resolution must be >= 2");
  if (dim != 1 && dim != 2) throw Error(ErrorKind::DimensionMismatch, "grid dimension must be 1 or 2");
  OrbitGrid g;
  g.resolution = resolution;
  g.dim = dim;
  const double h = 1.0 / resolution;
  if (dim == 1) {
    for (int i = 0; i < resolution; ++i) g.points.emplace_back(i * h);
  } else {
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j) g.points.emplace_back(i * h, j * h);
  }
  return g;
}

inline OrbitGrid make_grid(const BaseDynamics& dyn, int resolution) { return make_grid(dyn.dim(), resolution); }

/// A forward orbit segment used as a sampling set.
inline OrbitGrid make_orbit_grid(const BaseDynamics& dyn, const BasePoint& p, long length) {
  OrbitGrid g;
  g.points = orbit(dyn, p, 0, length - 1);
  g.resolution = static_cast<int>(length);
  g.dim = dyn.dim();
  g.provenance = GridProvenance::ForwardOrbit;
  return g;
}

/// Closed coordinate box on the torus, lo + [0, width] per coordinate
/// (mod 1). A width of 1 means the whole circle in that coordinate.
class SupportBox {
 public:
  SupportBox() = default;
  SupportBox(int dim, std::array<double, 2> lo, std::array<double, 2> width) : dim_(dim), lo_(lo), width_(width) {
    for (int i = 0; i < dim_; ++i) {
      const auto w = width_[static_cast<std::size_t>(i)];
      if (!(w > 0.0 && w <= 1.0)) throw Error(ErrorKind::ConfigInvalid, "support box width must be in (0,1]");
    }
  }

  int dim() const { return dim_; }
  double lo(int i) const { return lo_[static_cast<std::size_t>(i)]; }
  double width(int i) const { return width_[static_cast<std::size_t>(i)]; }
  bool full(int i) const { return width_[static_cast<std::size_t>(i)] >= 1.0; }

  /// Offset of p_i from lo_i, in [0, 1).
  double offset(const BasePoint& p, int i) const {
    double s = p[i] - lo(i);
    s -= std::floor(s);
    return s >= 1.0 ? 0.0 : s;
  }

  /// Membership in the box enlarged by `pad` on every side.
  bool contains(const BasePoint& p, double pad = 0.0) const {
    for (int i = 0; i < dim_; ++i) {
      if (full(i) || width(i) + 2.0 * pad >= 1.0) continue;
      double s = p[i] - (lo(i) - pad);
      s -= std::floor(s);
      if (s > width(i) + 2.0 * pad) return false;
    }
    return true;
  }

  /// Smooth bump: zero outside the box and on its 10% collar, one on the
  /// middle 40%, C^1 raised-cosine ramps in between.
  double bump(const BasePoint& p) const {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) {
      if (full(i)) continue;
      if (!contains_coord(p, i)) return 0.0;
      v *= ramp(offset(p, i) / width(i));
      if (v == 0.0) return 0.0;
    }
    return v;
  }

  std::string describe() const {
    std::string s = "[";
    for (int i = 0; i < dim_; ++i) {
      if (i) s += " x ";
      s += std::to_string(lo(i)) + "+" + std::to_string(width(i));
    }
    return s + "]";
  }

 private:
  bool contains_coord(const BasePoint& p, int i) const { return offset(p, i) <= width(i); }

  static double ramp(double s) {
    constexpr double c = 0.1;  // collar
    constexpr double r = 0.2;  // end of ramp
    if (s <= c || s >= 1.0 - c) return 0.0;
    if (s >= r && s <= 1.0 - r) return 1.0;
    const double t = s < r ? (s - c) / (r - c) : (1.0 - c - s) / (r - c);
    return 0.5 - 0.5 * std::cos(std::numbers::pi * t);
  }

  int dim_ = 1;
  std::array<double, 2> lo_{0.0, 0.0};
  std::array<double, 2> width_{1.0, 1.0};
};

}  // namespace uhlab

#endif  // UHLAB_BASE_DYNAMICS_HPP
