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

#ifndef UHLAB_COCYCLE_HPP
#define UHLAB_COCYCLE_HPP

// Szego and Jacobi cocycle generators, the SU(1,1) -> SL(2,R) conjugation,
// the S' and J matrix classes, and cocycle iteration over the base map.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <utility>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/mat2.hpp"
#include "uhlab/sampling_map.hpp"

namespace uhlab {

inline constexpr double kSL2Tol = 1e-12;

/// alpha = r e^{i phi}, 0 <= r < 1.
struct UnitDiskPoint {
  double r = 0.0;
  double phi = 0.0;

  UnitDiskPoint() = default;
  UnitDiskPoint(double r_, double phi_) : r(r_), phi(phi_) {
    if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::AlphaOutOfDisk, "|alpha| = " + std::to_string(r));
  }
  static UnitDiskPoint from_complex(cplx a) { return UnitDiskPoint(std::abs(a), std::arg(a)); }
  cplx value() const { return std::polar(r, phi); }
};

/// z = e^{i psi}, psi in [0, 2 pi). The half-phase psi/2 fixes the branch of z^{1/2}.
struct UnitCirclePhase {
  double psi = 0.0;

  UnitCirclePhase() = default;
  explicit UnitCirclePhase(double psi_) : psi(wrap_two_pi(psi_)) {}
  double half() const { return 0.5 * psi; }
  cplx z() const { return std::polar(1.0, psi); }
  cplx sqrt_z() const { return std::polar(1.0, 0.5 * psi); }
};

/// (1/sqrt(1-s^2)) (R_{theta'} + s S(theta)).
struct SPrimeParams {
  double s = 0.0;
  double theta_prime = 0.0;
  double theta = 0.0;

  Mat2R realize() const {
    if (!(s >= 0.0 && s < 1.0)) throw Error(ErrorKind::ROutOfRange, "S' parameter s = " + std::to_string(s));
    const double k = 1.0 / std::sqrt(1.0 - s * s);
    return k * (rotation(theta_prime) + s * reflection(theta));
  }
};

/// [[t, -1/a], [a, 0]] with a > 0; t = (E - b) / a for Jacobi cocycles.
struct JParams {
  double t = 0.0;
  double a = 1.0;

  static JParams from_energy(double E, double a, double b) { return {(E - b) / a, a}; }
  double b_for(double E) const { return E - t * a; }
  Mat2R realize() const {
    if (!(a > 0.0)) throw Error(ErrorKind::NonpositiveA, "J parameter a = " + std::to_string(a));
    return {t, -1.0 / a, a, 0.0};
  }
};

/// The unitary W with W^{-1} SU(1,1) W = SL(2,R).
inline Mat2C w_matrix() {
  const double s = 1.0 / std::numbers::sqrt2;
  return {cplx(s, 0), cplx(0, s), cplx(s, 0), cplx(0, -s)};
}
inline Mat2C w_inverse() { return adjoint(w_matrix()); }

inline const Mat2C kJ{cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(-1, 0)};

/// Residual of M* J M = J.
inline double su11_residual(const Mat2C& m) { return max_abs(adjoint(m) * kJ * m - kJ); }

/// Szego matrix (1 / (z^{1/2} sqrt(1-|a|^2))) [[z, -conj a], [-a z, 1]].
inline Mat2C szego_su11(const UnitDiskPoint& alpha, const UnitCirclePhase& z) {
  if (!(alpha.r < 1.0)) throw Error(ErrorKind::AlphaOutOfDisk, "|alpha| >= 1");
  const cplx a = alpha.value();
  const cplx zz = z.z();
  const cplx k = 1.0 / (z.sqrt_z() * std::sqrt(1.0 - alpha.r * alpha.r));
  return {k * zz, -k * std::conj(a), -k * a * zz, k};
}

/// W^{-1} M W with imaginary residue dropped.
inline Mat2R to_sl2(const Mat2C& m) {
  const Mat2C c = w_inverse() * m * w_matrix();
  const double im = std::max({std::abs(c.a11.imag()), std::abs(c.a12.imag()), std::abs(c.a21.imag()),
                              std::abs(c.a22.imag())});
  const double scale = std::max(1.0, max_abs(c));
  if (im > 1e-10 * scale) {
    throw Error(ErrorKind::NotSU11, "conjugate has imaginary part " + std::to_string(im));
  }
  return {c.a11.real(), c.a12.real(), c.a21.real(), c.a22.real()};
}

/// Inverse conjugation W M W^{-1}.
inline Mat2C to_su11(const Mat2R& m) {
  const Mat2C c{cplx(m.a11), cplx(m.a12), cplx(m.a21), cplx(m.a22)};
  return w_matrix() * c * w_inverse();
}

/// Direct S' parameters of the conjugated Szego matrix.
inline SPrimeParams szego_sl2(double r, double phi, const UnitCirclePhase& z) {
  if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::ROutOfRange, "r = " + std::to_string(r));
  return {r, z.half(), z.half() + phi};
}

inline Mat2R jacobi_step(double E, double a, double b) {
  if (!(a > 0.0)) throw Error(ErrorKind::NonpositiveA, "a = " + std::to_string(a));
  return {(E - b) / a, -1.0 / a, a, 0.0};
}

/// Solves M = (1/sqrt(1-r^2)) (R_{theta'} + r [b_ij]) for the b-block.
inline Mat2R sprime_extract(const Mat2R& m, double r, double theta_prime) {
  if (!(r >= 1e-9)) throw Error(ErrorKind::RZero, "r = " + std::to_string(r) + " leaves the b-block undefined");
  if (!(r < 1.0)) throw Error(ErrorKind::ROutOfRange, "r = " + std::to_string(r));
  return (1.0 / r) * (std::sqrt(1.0 - r * r) * m - rotation(theta_prime));
}

/// A continuous map X -> SL(2,R) over a base map.
class Cocycle {
 public:
  using Generator = std::function<Mat2R(const BasePoint&)>;

  Cocycle(BaseDynamics dyn, Generator gen, std::string description = "")
      : dyn_(std::move(dyn)), gen_(std::move(gen)), description_(std::move(description)) {}

  static Cocycle constant(const BaseDynamics& dyn, const Mat2R& m) {
    return Cocycle(dyn, [m](const BasePoint&) { return m; }, "constant");
  }

  /// Jacobi transfer matrices A_{E,a,b}(x) = (1/f_a) [[E - f_b, -1], [f_a^2, 0]].
  static Cocycle jacobi(const BaseDynamics& dyn, const SamplingMap& fa, const SamplingMap& fb, double E,
                        double a_floor = 1e-12) {
    fa.check_positive(a_floor);
    return Cocycle(
        dyn, [fa, fb, E](const BasePoint& p) { return jacobi_step(E, fa.real_value(p), fb.real_value(p)); },
        "jacobi(E=" + std::to_string(E) + ")");
  }

  /// The Szego cocycle conjugated into SL(2,R).
  static Cocycle szego(const BaseDynamics& dyn, const SamplingMap& f, const UnitCirclePhase& z) {
    f.check_disk();
    return Cocycle(
        dyn,
        [f, z](const BasePoint& p) {
          const cplx a = f(p);
          const double r = std::abs(a);
          if (r >= 1.0 - kDiskMargin) throw Error(ErrorKind::AlphaOutOfDisk, "|f(x)| = " + std::to_string(r));
          return szego_sl2(r, std::arg(a), z).realize();
        },
        "szego(psi=" + std::to_string(z.psi) + ")");
  }

  const BaseDynamics& dynamics() const { return dyn_; }
  const std::string& description() const { return description_; }
  Mat2R operator()(const BasePoint& p) const { return gen_(p); }
  const Generator& generator() const { return gen_; }

  Cocycle negated() const {
    auto g = gen_;
    return Cocycle(dyn_, [g](const BasePoint& p) { return -1.0 * g(p); }, description_ + " (negated)");
  }

 private:
  BaseDynamics dyn_;
  Generator gen_;
  std::string description_;
};

/// A^n(x): A(T^{n-1}x) ... A(x) for n >= 1, identity for n = 0, and
/// A(T^n x)^{-1} ... A(T^{-1} x)^{-1} for n < 0.
inline Mat2R iterate(const Cocycle& c, const BasePoint& x, long n) {
  Mat2R m = Mat2R::identity();
  BasePoint y = x;
  const auto& dyn = c.dynamics();
  if (n >= 0) {
    for (long k = 0; k < n; ++k) {
      m = c(y) * m;
      y = dyn.step(y);
    }
  } else {
    for (long k = 0; k < -n; ++k) {
      y = dyn.inverse_step(y);
      m = c(y).adjugate() * m;
    }
  }
  return m;
}

/// sup over the points of ||A(x) - B(x)||.
template <typename Points>
double c0_distance(const Cocycle& a, const Cocycle& b, const Points& pts) {
  double d = 0.0;
  for (const auto& p : pts) d = std::max(d, op_norm(a(p) - b(p)));
  return d;
}

}  // namespace uhlab

#endif  // UHLAB_COCYCLE_HPP
