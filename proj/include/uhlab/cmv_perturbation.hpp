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

#ifndef UHLAB_CMV_PERTURBATION_HPP
#define UHLAB_CMV_PERTURBATION_HPP

// Pulling a uniformly hyperbolic SL(2,R) perturbation B of a conjugated
// Szego cocycle A back into the Szego class.
//
// Write A(x) = (1/sqrt(1-r^2)) (R_{theta'} + r S(theta)) and let b(x) be the
// block of B(x) in the same form. With u(x) the unstable direction of B and
// u = R_tau e1, the first column of Y = b R_tau is eps (-cos th, sin th).
// B' replaces b by S(th) R_{-tau}; B'' then retunes (s, beta) so that
// B''(x) u(x) = B(x) u(x) while staying in the Szego class, which keeps B''
// uniformly hyperbolic. Finally beta(x) = s e^{i(th - tau + beta - theta')}
// is a Verblunsky map with W^{-1} Abar(beta, z) W = B''.
//
// Everything is evaluated pointwise. Flipping u to -u shifts tau and th by
// pi together, which leaves th - tau, eta and t unchanged, so no global lift
// of tau is needed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <tuple>
#include <utility>
#include <string>
#include <vector>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/cocycle.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/hyperbolicity.hpp"
#include "uhlab/mat2.hpp"
#include "uhlab/sampling_map.hpp"

namespace uhlab {

/// The annulus of radii r/sqrt(1-r^2), r in [r1, r2], and its admissible
/// window of stretch factors eps.
class AnnulusSpec {
 public:
  AnnulusSpec() = default;
  AnnulusSpec(double r1, double r2) : r1_(r1), r2_(r2) {
    if (!(r1 > 0.0 && r1 <= r2 && r2 < 1.0)) {
      throw Error(ErrorKind::ROutOfRange, "annulus needs 0 < r1 <= r2 < 1");
    }
  }

  static double rho_of(double r) { return r / std::sqrt(1.0 - r * r); }
  static double r_of(double rho) { return rho / std::sqrt(1.0 + rho * rho); }

  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double rho_lo() const { return rho_of(r1_); }
  double rho_hi() const { return rho_of(r2_); }
  /// Open window (eps_lo, eps_hi). Both bounds must hold on every radius in
  /// [r1, r2]. (1 - eps r) / sqrt(1 - r^2) < 1 binds at r2, since
  /// (1 - sqrt(1 - r^2)) / r grows with r; below it the target vector passes
  /// through (-1, 0) and h stops being monotone in eps. Above eps_hi the
  /// first coordinate of the target vector stops being negative.
  double eps_lo() const { return r2_ / (1.0 + std::sqrt(1.0 - r2_ * r2_)); }
  double eps_hi() const { return 1.0 / r2_; }
  bool in_window(double eps) const { return eps > eps_lo() && eps < eps_hi(); }

 private:
  double r1_ = 0.1;
  double r2_ = 0.9;
};

struct HG {
  double s = 0.0;
  double beta = 0.0;
};

/// (1/sqrt(1-r^2)) ((-1, 0) + r eps (-cos eta, sin eta)).
inline Vec2 target_vector(double r, double eta, double eps) {
  const double k = 1.0 / std::sqrt(1.0 - r * r);
  return {k * (-1.0 - r * eps * std::cos(eta)), k * r * eps * std::sin(eta)};
}

/// (1/sqrt(1-s^2)) ((-1, 0) + s (-cos(eta+beta), sin(eta+beta))).
inline Vec2 reconstruct_vector(double s, double eta, double beta) {
  const double k = 1.0 / std::sqrt(1.0 - s * s);
  return {k * (-1.0 - s * std::cos(eta + beta)), k * s * std::sin(eta + beta)};
}

/// Unique (s, beta) with reconstruct_vector(s, eta, beta) = v, for v with
/// v_1 < 0. With q = sqrt(1-s^2) the two coordinates give
/// s cos(phi) = -1 - q v_1 and s sin(phi) = q v_2; eliminating phi leaves
/// q = -2 v_1 / (1 + |v|^2).
inline HG solve_hg(Vec2 v, double eta) {
  const double q = -2.0 * v.x / (1.0 + v.x * v.x + v.y * v.y);
  const double s = std::sqrt(std::max(0.0, (1.0 - q) * (1.0 + q)));
  const double phi = std::atan2(q * v.y, -1.0 - q * v.x);
  return {s, std::remainder(phi - eta, 2.0 * std::numbers::pi)};
}

/// Angle eta with t = |t| (-cos eta, sin eta).
inline double annulus_angle(Vec2 t) { return std::atan2(t.y, -t.x); }

/// (h_eps(t), g_eps(t)).
inline HG h_g(Vec2 t, double eps, const AnnulusSpec& n) {
  if (!n.in_window(eps)) {
    throw Error(ErrorKind::EpsilonOutOfWindow, "eps = " + std::to_string(eps) + " outside (" +
                                                   std::to_string(n.eps_lo()) + ", " + std::to_string(n.eps_hi()) + ")");
  }
  const double rho = t.norm();
  if (rho < n.rho_lo() - 1e-9 || rho > n.rho_hi() + 1e-9) {
    throw Error(ErrorKind::TOffAnnulus, "|t| = " + std::to_string(rho) + " outside the annulus");
  }
  const double r = AnnulusSpec::r_of(rho), eta = annulus_angle(t);
  return solve_hg(target_vector(r, eta, eps), eta);
}

/// Frame data of B at one point of the closed support.
struct FramePoint {
  BasePoint x;
  double r = 0.0;
  double theta_prime = 0.0;
  Mat2R b_block;
  Vec2 u;
  double tau = 0.0;
  Mat2R Y;
  double theta_tilde = 0.0;
  double epsilon = 1.0;
  double omega = 0.0;
  double rho = 0.0;
  Vec2 t_point;
  double eta = 0.0;
  double s = 0.0;
  double beta = 0.0;

  SPrimeParams bprime() const { return {r, theta_prime, theta_tilde - tau}; }
  SPrimeParams bdoubleprime() const { return {s, theta_prime, theta_tilde - tau + beta}; }
  /// The Verblunsky value realizing B''.
  cplx verblunsky() const { return std::polar(s, theta_tilde - tau + beta - theta_prime); }
};

struct PerturbationFrame {
  std::vector<FramePoint> points;
  AnnulusSpec annulus;
  double max_t_violation = 0.0;      // | |t| - rho |
  double max_column_violation = 0.0;  // first column of Y vs eps (-cos th, sin th)
  double max_omega_violation = 0.0;   // R_omega R_theta' u vs (-1, 0)
  double eps_min = 1.0, eps_max = 1.0;
};

/// Everything the pointwise construction needs: the Szego data (f, z), the
/// UH perturbation B, the support, the annulus and the depth m used for
/// unstable directions.
struct PerturbationContext {
  SamplingMap f;
  UnitCirclePhase z;
  Cocycle B;
  SupportBox support;
  AnnulusSpec annulus;
  long m = 256;
  double r_floor = 1e-6;

  /// Frame at x for a given unstable direction u(x).
  FramePoint frame_at(const BasePoint& x, Vec2 u) const {
    FramePoint fp;
    fp.x = x;
    const cplx a = f(x);
    fp.r = std::abs(a);
    if (!(fp.r >= r_floor)) {
      throw Error(ErrorKind::RBelowFloor, "|f| = " + std::to_string(fp.r) + " on the closed support");
    }
    fp.theta_prime = z.half();
    fp.b_block = sprime_extract(B(x), fp.r, fp.theta_prime);
    fp.u = u.normalized();
    fp.tau = std::atan2(fp.u.y, fp.u.x);
    fp.Y = fp.b_block * rotation(fp.tau);
    fp.epsilon = std::hypot(fp.Y.a11, fp.Y.a21);
    fp.theta_tilde = std::atan2(fp.Y.a21, -fp.Y.a11);
    fp.omega = wrap_two_pi(std::numbers::pi - fp.theta_prime - fp.tau);
    fp.rho = AnnulusSpec::rho_of(fp.r);
    fp.t_point = fp.rho * (rotation(fp.omega) * (reflection(fp.theta_tilde) * (rotation(-fp.tau) * fp.u)));
    fp.eta = annulus_angle(fp.t_point);
    const HG hg = h_g(fp.t_point, fp.epsilon, annulus);
    fp.s = hg.s;
    fp.beta = hg.beta;
    return fp;
  }

  FramePoint frame_at(const BasePoint& x) const { return frame_at(x, unstable_direction(B, x, m)); }

  Mat2R bprime_at(const BasePoint& x) const {
    return support.contains(x) ? frame_at(x).bprime().realize() : B(x);
  }
  Mat2R bdoubleprime_at(const BasePoint& x) const {
    return support.contains(x) ? frame_at(x).bdoubleprime().realize() : B(x);
  }
  /// beta(x): the perturbed Verblunsky value (f(x) off the support).
  cplx beta_at(const BasePoint& x) const { return support.contains(x) ? frame_at(x).verblunsky() : f(x); }
};

/// Frames at the section's grid points inside the closed support, with the
/// frame invariants measured.
inline PerturbationFrame build_frame(const PerturbationContext& ctx, const UnstableSection& section) {
  PerturbationFrame fr;
  fr.annulus = ctx.annulus;
  for (std::size_t i = 0; i < section.grid.size(); ++i) {
    const auto& x = section.grid.points[i];
    if (!ctx.support.contains(x)) continue;
    const FramePoint fp = ctx.frame_at(x, section.u_values[i]);
    fr.max_t_violation = std::max(fr.max_t_violation, std::abs(fp.t_point.norm() - fp.rho));
    const Vec2 col{fp.Y.a11, fp.Y.a21};
    const Vec2 want = fp.epsilon * Vec2{-std::cos(fp.theta_tilde), std::sin(fp.theta_tilde)};
    fr.max_column_violation = std::max(fr.max_column_violation, (col - want).norm());
    const Vec2 w = rotation(fp.omega) * (rotation(fp.theta_prime) * fp.u);
    fr.max_omega_violation = std::max(fr.max_omega_violation, (w - Vec2{-1.0, 0.0}).norm());
    fr.eps_min = std::min(fr.eps_min, fp.epsilon);
    fr.eps_max = std::max(fr.eps_max, fp.epsilon);
    fr.points.push_back(fp);
  }
  return fr;
}

inline Cocycle bprime(const PerturbationContext& ctx) {
  return Cocycle(ctx.B.dynamics(), [ctx](const BasePoint& x) { return ctx.bprime_at(x); }, "B'");
}

inline Cocycle bdoubleprime(const PerturbationContext& ctx) {
  return Cocycle(ctx.B.dynamics(), [ctx](const BasePoint& x) { return ctx.bdoubleprime_at(x); }, "B''");
}

/// Certificate of B'' from orbit streams. The unstable direction is computed
/// once per starting point and then pushed forward by B, which keeps the
/// cost independent of the past-product depth.
inline UHCertificate certify_bdoubleprime(const PerturbationContext& ctx, const OrbitGrid& grid, const UHParams& prm) {
  const auto& dyn = ctx.B.dynamics();
  auto once = [&](const OrbitGrid& g) {
    return certify_streams(g.size(), g.resolution, prm, [&](std::size_t i) {
      return [&ctx, &dyn, y = g.points[i], u = unstable_direction(ctx.B, g.points[i], ctx.m)]() mutable {
        const Mat2R b = ctx.B(y);
        const Mat2R m = ctx.support.contains(y) ? ctx.frame_at(y, u).bdoubleprime().realize() : b;
        u = (b * u).normalized();
        y = dyn.step(y);
        return m;
      };
    });
  };
  auto cert = once(grid);
  if (cert.verdict == Verdict::Undetermined && prm.refine && grid.provenance == GridProvenance::UniformLattice) {
    cert = once(make_grid(grid.dim, grid.resolution * 2));
    cert.reason += " (after mesh refinement)";
  }
  return cert;
}

namespace detail {

inline std::pair<int, int> lattice_multi_index(int dims, int res, std::size_t i) {
  if (dims == 1) return {static_cast<int>(i), 0};
  return {static_cast<int>(i / static_cast<std::size_t>(res)), static_cast<int>(i % static_cast<std::size_t>(res))};
}

/// f with a lattice part at resolution `res` (reusing f's own lattice if any).
inline SamplingMap with_lattice(const SamplingMap& f, int res) {
  if (f.has_grid()) return f;
  SamplingMap g(f.codomain(), f.dims(), res);
  for (const auto& t : f.fourier_terms()) g.add_fourier(t.k1, t.k2, t.coef);
  g.set_grid(0, 0, cplx{});
  return g;
}

}  // namespace detail

/// beta as a sampling map: f plus a lattice correction carrying
/// beta(x) - f(x) at lattice points of the closed support. The correction
/// vanishes on the support collar, where B = A and hence beta = f.
/// `frames` may hold precomputed frames keyed by lattice index.
inline SamplingMap extract_beta(const PerturbationContext& ctx, int resolution,
                                const std::vector<std::optional<FramePoint>>* frames = nullptr) {
  SamplingMap out = detail::with_lattice(ctx.f, resolution);
  const int res = out.resolution();
  const auto lattice = make_grid(ctx.f.dims(), res);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& x = lattice.points[i];
    if (!ctx.support.contains(x)) continue;
    const FramePoint fp = (frames && (*frames)[i]) ? *(*frames)[i] : ctx.frame_at(x);
    const auto [ii, jj] = detail::lattice_multi_index(ctx.f.dims(), res, i);
    out.set_grid(ii, jj, out.grid_at(ii, jj) + (fp.verblunsky() - ctx.f(x)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline.

struct CmvPipelineOptions {
  UHParams uh;
  int grid_resolution = 64;  // certification lattice
  int map_resolution = 512;  // output lattice in 1-D; 2-D uses a quarter of it per axis
  double eps_target = 0.1;
  int search_budget = 24;
  int max_retries = 6;
  std::uint64_t seed = 1;
  double nudge = 0.01;
};

struct StageDistances {
  double nudge = 0.0;  // ||A - A'|| when f had to be made nonzero first
  double ab = 0.0;
  double bbp = 0.0;
  double bpbpp = 0.0;
  double abpp = 0.0;
};

struct CmvResiduals {
  double eq1 = 0.0;               // max |B u - B'' u|
  double sprime = 0.0;            // S' membership of B''
  double beta_roundtrip = 0.0;    // max ||W^{-1} Abar(beta, z) W - B''||
  double unitary_isometry = 0.0;  // | ||Abar(f)-Abar(beta)|| - ||A - B''|| |
  double frame_t = 0.0;
  double frame_column = 0.0;
  double frame_omega = 0.0;
};

struct PerturbationResult {
  bool found = false;
  std::string stage;  // last stage reached, or the one that failed
  SamplingMap beta;
  SamplingMap start_map;  // f or its nudged version
  bool nudged = false;
  StageDistances distances;
  CmvResiduals residuals;
  UHCertificate cert_a, cert_b, cert_bpp, cert_final;
  double map_distance = 0.0;    // sup |beta - f| on a fine lattice
  double final_distance = 0.0;  // sup ||A - W^{-1} Abar(beta) W|| on a fine lattice
  double eps_min = 1.0, eps_max = 1.0;
  double seek_epsilon = 0.0;
  long depth = 0;
  int retries = 0;
  std::vector<std::string> log;
};

namespace detail {

/// Box whose bump plateau contains `inner`; a full coordinate stays full.
inline SupportBox plateau_cover(const SupportBox& inner) {
  std::array<double, 2> lo{0.0, 0.0}, w{1.0, 1.0};
  for (int i = 0; i < inner.dim(); ++i) {
    if (inner.full(i)) continue;
    const double ww = (inner.width(i) + 0.04) / 0.6;
    if (ww >= 1.0) continue;
    w[static_cast<std::size_t>(i)] = ww;
    double l = inner.lo(i) - 0.02 - 0.2 * ww;
    l -= std::floor(l);
    lo[static_cast<std::size_t>(i)] = l;
  }
  return SupportBox(inner.dim(), lo, w);
}

inline int map_resolution_for(int dims, int res1d) { return dims == 1 ? res1d : std::max(32, res1d / 4); }

inline std::pair<double, double> modulus_range(const SamplingMap& f, const OrbitGrid& lattice, const SupportBox& box) {
  double lo = 1.0, hi = 0.0;
  for (const auto& p : lattice.points) {
    if (!box.contains(p)) continue;
    const double r = std::abs(f(p));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

}  // namespace detail

/// Runs seek -> section -> frame -> B' -> B'' -> beta. A candidate rejected
/// after the seek (stretch factor outside the window, unresolved section,
/// B'' or the final map not certified, distance over budget) triggers a
/// retry with half the search radius.
inline PerturbationResult perturb_cmv(const SamplingMap& f_in, const BaseDynamics& dyn, const UnitCirclePhase& z,
                                      const SupportBox& support, const CmvPipelineOptions& opt) {
  PerturbationResult res;
  if (f_in.codomain() != Codomain::Disk) throw Error(ErrorKind::ConfigInvalid, "CMV pipeline needs a disk-valued map");
  if (support.dim() != dyn.dim()) throw Error(ErrorKind::DimensionMismatch, "support box dimension");
  const auto grid = make_grid(dyn, opt.grid_resolution);
  const int map_res = f_in.has_grid() ? f_in.resolution() : detail::map_resolution_for(f_in.dims(), opt.map_resolution);
  const auto lattice = make_grid(f_in.dims(), map_res);
  const auto fine = make_grid(f_in.dims(), std::min(2 * map_res, f_in.dims() == 1 ? 4096 : 256));
  bool any = false;
  for (const auto& p : lattice.points) any = any || support.contains(p);
  if (!any) throw Error(ErrorKind::ConfigInvalid, "support box contains no lattice points");

  const Cocycle a0 = Cocycle::szego(dyn, f_in, z);
  res.stage = "certify-input";
  res.cert_a = certify(a0, grid, opt.uh);
  res.beta = f_in;
  res.start_map = f_in;
  if (res.cert_a.verdict == Verdict::UH) {
    res.found = true;
    res.cert_final = res.cert_a;
    res.log.push_back("input cocycle already UH; map returned unchanged");
    return res;
  }

  const double floor = 1e-6;
  SamplingMap f = f_in;
  auto [rmin, rmax] = detail::modulus_range(f, lattice, support);
  if (rmax < floor) {
    res.stage = "nudge";
    const SupportBox cover = detail::plateau_cover(support);
    SamplingMap g = detail::with_lattice(f, map_res);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const auto [ii, jj] = detail::lattice_multi_index(f.dims(), map_res, i);
      g.set_grid(ii, jj, g.grid_at(ii, jj) + opt.nudge * cover.bump(lattice.points[i]));
    }
    f = g;
    res.nudged = true;
    res.start_map = f;
    std::tie(rmin, rmax) = detail::modulus_range(f, lattice, support);
    res.distances.nudge = c0_distance(a0, Cocycle::szego(dyn, f, z), fine.points);
    res.log.push_back("f vanishes on the support; nudged by " + std::to_string(opt.nudge) + " on a covering bump");
  }
  if (rmin < floor) {
    throw Error(ErrorKind::RBelowFloor,
                "f vanishes somewhere on the closed support (min |f| = " + std::to_string(rmin) + ")");
  }
  const AnnulusSpec annulus(rmin * (1.0 - 1e-3), std::min(rmax * (1.0 + 1e-3), 1.0 - 1e-6));
  const Cocycle a = Cocycle::szego(dyn, f, z);

  double seek_eps = opt.eps_target / 3.0;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt, seek_eps *= 0.5) {
    res.retries = attempt;
    res.seek_epsilon = seek_eps;
    res.stage = "seek";
    SeekOptions so;
    so.uh = opt.uh;
    so.seed = opt.seed + static_cast<std::uint64_t>(attempt);
    auto sk = seek_uh_neighbor(a, support, seek_eps, opt.search_budget, grid, so);
    for (auto& l : sk.log) res.log.push_back("[seek eps=" + std::to_string(seek_eps) + "] " + l);
    if (!sk.found) {
      res.log.push_back("no UH neighbour within " + std::to_string(seek_eps));
      return res;
    }
    const Cocycle b = *sk.cocycle;
    res.cert_b = sk.certificate;
    try {
      res.stage = "section";
      const auto section = unstable_section(b, grid, section_depth(sk.certificate), sk.certificate);
      res.depth = section.m;
      const PerturbationContext ctx{f, z, b, support, annulus, section.m, floor};

      res.stage = "frame";
      const auto frame = build_frame(ctx, section);
      res.residuals.frame_t = frame.max_t_violation;
      res.residuals.frame_column = frame.max_column_violation;
      res.residuals.frame_omega = frame.max_omega_violation;

      res.stage = "b-double-prime";
      std::vector<std::optional<FramePoint>> frames(lattice.size());
      StageDistances d;
      d.nudge = res.distances.nudge;
      CmvResiduals rr = res.residuals;
      rr.eq1 = rr.sprime = rr.beta_roundtrip = rr.unitary_isometry = 0.0;
      double eps_min = 1.0, eps_max = 1.0;
      for (std::size_t i = 0; i < lattice.size(); ++i) {
        const auto& x = lattice.points[i];
        if (!support.contains(x)) continue;
        frames[i] = ctx.frame_at(x);
        const FramePoint& fp = *frames[i];
        eps_min = std::min(eps_min, fp.epsilon);
        eps_max = std::max(eps_max, fp.epsilon);
        const Mat2R A = a(x), B = b(x), Bp = fp.bprime().realize(), Bpp = fp.bdoubleprime().realize();
        d.ab = std::max(d.ab, op_norm(A - B));
        d.bbp = std::max(d.bbp, op_norm(B - Bp));
        d.bpbpp = std::max(d.bpbpp, op_norm(Bp - Bpp));
        d.abpp = std::max(d.abpp, op_norm(A - Bpp));
        rr.eq1 = std::max(rr.eq1, (B * fp.u - Bpp * fp.u).norm());
        const Mat2R blk = sprime_extract(Bpp, fp.s, fp.theta_prime);
        rr.sprime = std::max({rr.sprime, std::abs(blk.a11 + blk.a22), std::abs(blk.a12 - blk.a21),
                              std::abs(blk.a11 * blk.a11 + blk.a12 * blk.a12 - 1.0)});
        const Mat2C abar_beta = szego_su11(UnitDiskPoint::from_complex(fp.verblunsky()), z);
        rr.beta_roundtrip = std::max(rr.beta_roundtrip, max_abs(to_sl2(abar_beta) - Bpp));
        const Mat2C abar_f = szego_su11(UnitDiskPoint::from_complex(f(x)), z);
        rr.unitary_isometry = std::max(rr.unitary_isometry, std::abs(op_norm(abar_f - abar_beta) - op_norm(A - Bpp)));
      }
      res.distances = d;
      res.residuals = rr;
      res.eps_min = eps_min;
      res.eps_max = eps_max;

      res.stage = "beta";
      const SamplingMap beta = extract_beta(ctx, map_res, &frames);
      double rt = 0.0;
      for (std::size_t i = 0; i < lattice.size(); ++i) {
        if (!frames[i]) continue;
        const Mat2C abar = szego_su11(UnitDiskPoint::from_complex(beta(lattice.points[i])), z);
        rt = std::max(rt, max_abs(to_sl2(abar) - frames[i]->bdoubleprime().realize()));
      }
      res.residuals.beta_roundtrip = std::max(res.residuals.beta_roundtrip, rt);

      res.stage = "certify-b-double-prime";
      res.cert_bpp = certify_bdoubleprime(ctx, grid, opt.uh);
      res.stage = "certify-final";
      const Cocycle fin = Cocycle::szego(dyn, beta, z);
      res.cert_final = certify(fin, grid, opt.uh);
      res.final_distance = c0_distance(a0, fin, fine.points);
      double md = 0.0;
      for (const auto& p : fine.points) md = std::max(md, std::abs(beta(p) - f_in(p)));
      res.map_distance = md;
      res.beta = beta;
      const bool ok = res.cert_bpp.verdict == Verdict::UH && res.cert_final.verdict == Verdict::UH &&
                      res.final_distance <= opt.eps_target && d.nudge + d.abpp <= opt.eps_target;
      res.log.push_back("attempt " + std::to_string(attempt) + ": ||A-B''|| = " + std::to_string(d.abpp) + ", B'' " +
                        to_string(res.cert_bpp.verdict) + ", final map " + to_string(res.cert_final.verdict) +
                        ", final distance " + std::to_string(res.final_distance));
      if (ok) {
        res.found = true;
        res.stage = "done";
        return res;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EpsilonOutOfWindow && e.kind() != ErrorKind::TOffAnnulus &&
          e.kind() != ErrorKind::SectionNotConverged) {
        throw;
      }
      res.log.push_back("attempt " + std::to_string(attempt) + " rejected at " + res.stage + ": " + e.what());
    }
  }
  res.log.push_back("no admissible perturbation after " + std::to_string(opt.max_retries + 1) + " attempts");
  return res;
}

}  // namespace uhlab

#endif  // UHLAB_CMV_PERTURBATION_HPP
