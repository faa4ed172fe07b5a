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

#ifndef UHLAB_JACOBI_PROJECTION_HPP
#define UHLAB_JACOBI_PROJECTION_HPP

// Projection of a perturbation B of a Jacobi cocycle A, with B = A off a box
// K, back onto Jacobi form. On each orbit segment T^{-1}x, x, Tx (x in K)
// the three J-matrices are retuned so that their product equals
// A(Tx) B(x) A(T^{-1}x); the off-diagonal weights a are kept. The result
// Phi(B) is conjugate to B through Psi(B), which is the identity away from
// K and TK.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/cocycle.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/hyperbolicity.hpp"
#include "uhlab/mat2.hpp"
#include "uhlab/sampling_map.hpp"

namespace uhlab {

inline constexpr double kPivotFloor = 1e-6;

/// A box K whose images satisfy K n TK = 0 and K n T^2 K = 0, verified on a
/// lattice with a one-cell margin. Together these make T^{-1}K, K and TK
/// pairwise disjoint.
class ProjectionDomain {
 public:
  ProjectionDomain(const BaseDynamics& dyn, const SupportBox& box, int resolution = 256)
      : dyn_(dyn), box_(box), resolution_(resolution) {
    if (box.dim() != dyn.dim()) throw Error(ErrorKind::DimensionMismatch, "projection box dimension");
    const auto g = make_grid(dyn, resolution);
    const double pad = 1.0 / resolution;
    for (const auto& p : g.points) {
      if (!box.contains(p, pad)) continue;
      const BasePoint t1 = dyn.step(p), t2 = dyn.step(t1);
      if (box.contains(t1, pad)) throw Error(ErrorKind::DomainOverlap, "K meets T(K) in " + box.describe());
      if (box.contains(t2, pad)) throw Error(ErrorKind::DomainOverlap, "K meets T^2(K) in " + box.describe());
    }
  }

  const BaseDynamics& dynamics() const { return dyn_; }
  const SupportBox& box() const { return box_; }
  int resolution() const { return resolution_; }

  bool in_k(const BasePoint& x) const { return box_.contains(x); }
  bool in_tk(const BasePoint& x) const { return box_.contains(dyn_.inverse_step(x)); }
  bool in_tinv_k(const BasePoint& x) const { return box_.contains(dyn_.step(x)); }
  /// T^{-1}K u K u TK, where Phi(B) may differ from A.
  bool in_orbit_neighbourhood(const BasePoint& x) const { return in_k(x) || in_tk(x) || in_tinv_k(x); }

 private:
  BaseDynamics dyn_;
  SupportBox box_;
  int resolution_;
};

/// Retuned J-parameters on the segment T^{-1}x, x, Tx around a center x in K.
/// Index 1 is Tx, 2 is x, 3 is T^{-1}x.
struct LocalTriple {
  JParams j1, j2, j3;
};

/// Solves J(t1',a1) J(t2',a2) J(t3',a3) = J(t1,a1) P J(t3,a3) for the t'.
/// Matching the (2,2), (2,1) and (1,2) entries gives t2' = p,
/// t3' = (p t3 + q a3 + a3/a2) / p and t1' = t1 + (a2 - r) / (a1 p).
inline LocalTriple solve_local(const JParams& outer1, double a2, const JParams& outer3, const Mat2R& P,
                               double p_floor = kPivotFloor) {
  const double p = P.a11, q = P.a12, r = P.a21;
  if (!(std::abs(p) >= p_floor)) {
    throw Error(ErrorKind::PivotTooSmall, "|B_11| = " + std::to_string(std::abs(p)) + " below the pivot floor");
  }
  const double a1 = outer1.a, a3 = outer3.a;
  LocalTriple out;
  out.j2 = {p, a2};
  out.j3 = {(p * outer3.t + q * a3 + a3 / a2) / p, a3};
  out.j1 = {outer1.t + (a2 - r) / (a1 * p), a1};
  return out;
}

/// The Jacobi data (f_a, f_b, E) behind A together with the perturbation B.
struct ProjectionInput {
  SamplingMap fa;
  SamplingMap fb;
  double E = 0.0;
  Cocycle B;
};

inline JParams jparams_at(const ProjectionInput& in, const BasePoint& x) {
  return JParams::from_energy(in.E, in.fa.real_value(x), in.fb.real_value(x));
}

namespace detail {

inline bool same_matrix(const Mat2R& x, const Mat2R& y) {
  return x.a11 == y.a11 && x.a12 == y.a12 && x.a21 == y.a21 && x.a22 == y.a22;
}

/// B(x) == A(x) bitwise; the solved triple then reproduces A exactly, so the
/// solve is skipped to keep the fixed point free of rounding.
inline bool unperturbed_at(const ProjectionInput& in, const BasePoint& x) {
  const JParams j = jparams_at(in, x);
  return same_matrix(in.B(x), j.realize());
}

}  // namespace detail

/// J-parameters of Phi(B) at y.
inline JParams projected_params(const ProjectionInput& in, const ProjectionDomain& dom, const BasePoint& y,
                                double p_floor = kPivotFloor) {
  const auto& dyn = dom.dynamics();
  if (dom.in_k(y)) {
    if (detail::unperturbed_at(in, y)) return jparams_at(in, y);
    const auto t = solve_local(jparams_at(in, dyn.step(y)), in.fa.real_value(y), jparams_at(in, dyn.inverse_step(y)),
                               in.B(y), p_floor);
    return t.j2;
  }
  if (dom.in_tk(y)) {
    const BasePoint x = dyn.inverse_step(y);
    if (detail::unperturbed_at(in, x)) return jparams_at(in, y);
    const auto t =
        solve_local(jparams_at(in, y), in.fa.real_value(x), jparams_at(in, dyn.inverse_step(x)), in.B(x), p_floor);
    return t.j1;
  }
  if (dom.in_tinv_k(y)) {
    const BasePoint x = dyn.step(y);
    if (detail::unperturbed_at(in, x)) return jparams_at(in, y);
    const auto t = solve_local(jparams_at(in, dyn.step(x)), in.fa.real_value(x), jparams_at(in, y), in.B(x), p_floor);
    return t.j3;
  }
  return jparams_at(in, y);
}

inline Cocycle phi_cocycle(const ProjectionInput& in, const ProjectionDomain& dom, double p_floor = kPivotFloor) {
  return Cocycle(
      dom.dynamics(), [in, dom, p_floor](const BasePoint& y) { return projected_params(in, dom, y, p_floor).realize(); },
      "Phi(B)");
}

/// Psi(B)(y): Phi(T^{-1}y) B(T^{-1}y)^{-1} on K,
/// Phi(T^{-1}y) Phi(T^{-2}y) B(T^{-2}y)^{-1} B(T^{-1}y)^{-1} on TK, identity elsewhere.
inline Mat2R psi_at(const ProjectionInput& in, const ProjectionDomain& dom, const BasePoint& y,
                    double p_floor = kPivotFloor) {
  const auto& dyn = dom.dynamics();
  auto phi = [&](const BasePoint& p) { return projected_params(in, dom, p, p_floor).realize(); };
  if (dom.in_k(y)) {
    if (detail::unperturbed_at(in, y)) return Mat2R::identity();
    const BasePoint y1 = dyn.inverse_step(y);
    return phi(y1) * in.B(y1).inverse();
  }
  if (dom.in_tk(y)) {
    const BasePoint y1 = dyn.inverse_step(y), y2 = dyn.inverse_step(y1);
    if (detail::unperturbed_at(in, y1)) return Mat2R::identity();
    return phi(y1) * phi(y2) * in.B(y2).inverse() * in.B(y1).inverse();
  }
  return Mat2R::identity();
}

struct ProjectionResult {
  Cocycle phi;
  double triple_residual = 0.0;      // product identity on K
  double conjugacy_residual = 0.0;   // Psi(Tx) B(x) Psi(x)^{-1} - Phi(x)
  double distance_to_a = 0.0;        // sup ||Phi(B) - A||
  double distance_b = 0.0;           // sup ||B - A||
  double outside_residual = 0.0;     // sup ||Phi(B) - A|| off the orbit neighbourhood
  std::vector<Mat2R> psi;            // Psi(B) at the evaluation points
};

/// Builds Phi(B) and measures the product and conjugacy identities on `points`.
template <typename Points>
ProjectionResult project(const ProjectionInput& in, const ProjectionDomain& dom, const Points& points,
                         double p_floor = kPivotFloor) {
  const auto& dyn = dom.dynamics();
  const Cocycle a = Cocycle::jacobi(dyn, in.fa, in.fb, in.E);
  ProjectionResult out{phi_cocycle(in, dom, p_floor), 0.0, 0.0, 0.0, 0.0, 0.0, {}};
  for (const auto& x : points) {
    const Mat2R ax = a(x), bx = in.B(x);
    const double scale = std::max(1.0, op_norm(ax));
    if (!dom.in_k(x) && max_abs(bx - ax) > 1e-12 * scale) {
      throw Error(ErrorKind::NotCAK, "B differs from A outside K");
    }
    const Mat2R phx = out.phi(x);
    out.distance_to_a = std::max(out.distance_to_a, op_norm(phx - ax));
    out.distance_b = std::max(out.distance_b, op_norm(bx - ax));
    if (!dom.in_orbit_neighbourhood(x)) out.outside_residual = std::max(out.outside_residual, max_abs(phx - ax));
    if (dom.in_k(x)) {
      if (!(std::abs(jparams_at(in, x).t) >= p_floor)) {
        throw Error(ErrorKind::PivotTooSmall, "trace of A vanishes on K (E = b(x))");
      }
      const BasePoint xp = dyn.step(x), xm = dyn.inverse_step(x);
      const Mat2R lhs = out.phi(xp) * phx * out.phi(xm);
      const Mat2R rhs = a(xp) * bx * a(xm);
      out.triple_residual = std::max(out.triple_residual, max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)));
    }
    const Mat2R psx = psi_at(in, dom, x, p_floor);
    out.psi.push_back(psx);
    const Mat2R conj = psi_at(in, dom, dyn.step(x), p_floor) * bx * psx.inverse();
    out.conjugacy_residual = std::max(out.conjugacy_residual, max_abs(conj - phx) / std::max(1.0, max_abs(phx)));
  }
  return out;
}

/// The b-map of Phi(B): f_b plus a lattice correction at lattice points of
/// the orbit neighbourhood, where b' = E - t' a.
inline SamplingMap projected_b_map(const ProjectionInput& in, const ProjectionDomain& dom, int resolution,
                                   double p_floor = kPivotFloor) {
  SamplingMap out = in.fb;
  if (!out.has_grid()) {
    SamplingMap g(in.fb.codomain(), in.fb.dims(), resolution);
    for (const auto& t : in.fb.fourier_terms()) g.add_fourier(t.k1, t.k2, t.coef);
    g.set_grid(0, 0, cplx{});
    out = g;
  }
  const int res = out.resolution();
  const auto lattice = make_grid(in.fb.dims(), res);
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& y = lattice.points[i];
    if (!dom.in_orbit_neighbourhood(y)) continue;
    const JParams jp = projected_params(in, dom, y, p_floor);
    const int ii = in.fb.dims() == 1 ? static_cast<int>(i) : static_cast<int>(i) / res;
    const int jj = in.fb.dims() == 1 ? 0 : static_cast<int>(i) % res;
    out.set_grid(ii, jj, out.grid_at(ii, jj) + (jp.b_for(in.E) - in.fb.real_value(y)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline.

struct JacobiPipelineOptions {
  UHParams uh;
  int grid_resolution = 64;
  int map_resolution = 512;  // 1-D; 2-D uses a quarter of it per axis
  int domain_resolution = 256;
  double eps_target = 0.1;
  int search_budget = 24;
  int max_retries = 6;
  std::uint64_t seed = 1;
  double nudge = 1e-3;
};

struct JacobiPerturbationResult {
  bool found = false;
  std::string stage;
  SamplingMap fb_out;
  SamplingMap fb_start;
  bool nudged = false;
  double nudge_distance = 0.0;
  double distance_ab = 0.0;
  double distance_phi = 0.0;      // sup ||Phi(B) - A||
  double final_distance = 0.0;    // sup ||A - A_{E,a,b'}|| on a fine lattice
  double map_distance = 0.0;      // sup |b' - b|
  double triple_residual = 0.0;
  double conjugacy_residual = 0.0;
  double outside_residual = 0.0;
  UHCertificate cert_a, cert_b, cert_phi, cert_final;
  double seek_epsilon = 0.0;
  int retries = 0;
  std::vector<std::string> log;
};

namespace detail {

/// Box K' whose bump plateau contains K; a full coordinate stays full.
inline SupportBox covering_plateau(const SupportBox& inner) {
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

}  // namespace detail

/// seek -> project -> b'. A pivot failure or an uncertified result retries
/// with half the search radius.
inline JacobiPerturbationResult perturb_jacobi(const SamplingMap& fa, const SamplingMap& fb_in, double E,
                                               const BaseDynamics& dyn, const SupportBox& box,
                                               const JacobiPipelineOptions& opt) {
  JacobiPerturbationResult res;
  const ProjectionDomain dom(dyn, box, opt.domain_resolution);
  const auto grid = make_grid(dyn, opt.grid_resolution);
  const int map_res = fb_in.has_grid() ? fb_in.resolution()
                                       : (fb_in.dims() == 1 ? opt.map_resolution : std::max(32, opt.map_resolution / 4));
  const auto lattice = make_grid(fb_in.dims(), map_res);
  const auto fine = make_grid(fb_in.dims(), std::min(2 * map_res, fb_in.dims() == 1 ? 4096 : 256));

  const Cocycle a0 = Cocycle::jacobi(dyn, fa, fb_in, E);
  res.stage = "certify-input";
  res.cert_a = certify(a0, grid, opt.uh);
  res.fb_out = fb_in;
  res.fb_start = fb_in;
  if (res.cert_a.verdict == Verdict::UH) {
    res.found = true;
    res.cert_final = res.cert_a;
    res.log.push_back("input cocycle already UH; map returned unchanged");
    return res;
  }

  // Trace identically zero leaves no pivot anywhere.
  SamplingMap fb = fb_in;
  double trace_sup = 0.0;
  for (const auto& p : lattice.points) trace_sup = std::max(trace_sup, std::abs(E - fb.real_value(p)));
  if (trace_sup < 1e-12) {
    res.stage = "nudge";
    const SupportBox cover = detail::covering_plateau(box);
    SamplingMap g(fb.codomain(), fb.dims(), map_res);
    for (const auto& t : fb.fourier_terms()) g.add_fourier(t.k1, t.k2, t.coef);
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const int ii = fb.dims() == 1 ? static_cast<int>(i) : static_cast<int>(i) / map_res;
      const int jj = fb.dims() == 1 ? 0 : static_cast<int>(i) % map_res;
      g.set_grid(ii, jj, fb.grid_at(ii, jj) + opt.nudge * cover.bump(lattice.points[i]));
    }
    fb = g;
    res.nudged = true;
    res.fb_start = fb;
    res.nudge_distance = c0_distance(a0, Cocycle::jacobi(dyn, fa, fb, E), fine.points);
    res.log.push_back("trace vanishes identically; b nudged by " + std::to_string(opt.nudge) + " on a covering bump");
  }
  const Cocycle a = Cocycle::jacobi(dyn, fa, fb, E);
  for (const auto& p : lattice.points) {
    if (dom.in_k(p) && !(std::abs(JParams::from_energy(E, fa.real_value(p), fb.real_value(p)).t) >= kPivotFloor)) {
      throw Error(ErrorKind::PivotTooSmall, "trace of A vanishes somewhere on K");
    }
  }

  double seek_eps = opt.eps_target / 3.0;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt, seek_eps *= 0.5) {
    res.retries = attempt;
    res.seek_epsilon = seek_eps;
    res.stage = "seek";
    SeekOptions so;
    so.uh = opt.uh;
    so.seed = opt.seed + static_cast<std::uint64_t>(attempt);
    auto sk = seek_uh_neighbor(a, box, seek_eps, opt.search_budget, grid, so);
    for (auto& l : sk.log) res.log.push_back("[seek eps=" + std::to_string(seek_eps) + "] " + l);
    if (!sk.found) {
      res.log.push_back("no UH neighbour within " + std::to_string(seek_eps));
      return res;
    }
    res.cert_b = sk.certificate;
    const ProjectionInput in{fa, fb, E, *sk.cocycle};
    try {
      res.stage = "project";
      const auto pr = project(in, dom, lattice.points);
      res.triple_residual = pr.triple_residual;
      res.conjugacy_residual = pr.conjugacy_residual;
      res.outside_residual = pr.outside_residual;
      res.distance_ab = pr.distance_b;
      res.distance_phi = pr.distance_to_a;
      res.stage = "certify-phi";
      res.cert_phi = certify(pr.phi, grid, opt.uh);

      res.stage = "b-map";
      const SamplingMap fb_out = projected_b_map(in, dom, map_res);
      res.stage = "certify-final";
      const Cocycle fin = Cocycle::jacobi(dyn, fa, fb_out, E);
      res.cert_final = certify(fin, grid, opt.uh);
      res.final_distance = c0_distance(a0, fin, fine.points);
      double md = 0.0;
      for (const auto& p : fine.points) md = std::max(md, std::abs(fb_out.real_value(p) - fb_in.real_value(p)));
      res.map_distance = md;
      res.fb_out = fb_out;
      const bool ok = res.cert_final.verdict == Verdict::UH && res.final_distance <= opt.eps_target;
      res.log.push_back("attempt " + std::to_string(attempt) + ": ||A-Phi(B)|| = " + std::to_string(pr.distance_to_a) +
                        ", Phi(B) " + to_string(res.cert_phi.verdict) + ", final map " +
                        to_string(res.cert_final.verdict) + ", final distance " + std::to_string(res.final_distance));
      if (ok) {
        res.found = true;
        res.stage = "done";
        return res;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PivotTooSmall) throw;
      res.log.push_back("attempt " + std::to_string(attempt) + " rejected at " + res.stage + ": " + e.what());
    }
  }
  res.log.push_back("no admissible perturbation after " + std::to_string(opt.max_retries + 1) + " attempts");
  return res;
}

}  // namespace uhlab

#endif  // UHLAB_JACOBI_PROJECTION_HPP
