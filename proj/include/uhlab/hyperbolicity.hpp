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

#ifndef UHLAB_HYPERBOLICITY_HPP
#define UHLAB_HYPERBOLICITY_HPP

// Finite-scale uniform hyperbolicity certificates for SL(2,R) cocycles.
//
// A certificate is a heuristic, not a proof. On a finite grid of base points
// we follow m(n) = min_x ||A^n(x)|| for every n <= n_max:
//
//   UH        m(n) >= gamma for all n in [n_max/2, n_max], and m strictly
//             increases over the last three doubling-schedule points;
//   NotUH     m(n_max) <= 1.5, or m decreases over the last three schedule
//             points, or m(n) <= 1.5 somewhere in [n_max/2, n_max] (a norm
//             collapse, which elliptic and rotation-like cocycles produce
//             within one rotation period);
//   otherwise Undetermined.
//
// Requiring the whole tail to stay above gamma (not just three samples)
// keeps near-parabolic elliptic matrices from passing on lucky samples.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/cocycle.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/mat2.hpp"
#include "uhlab/parallel.hpp"

namespace uhlab {

enum class Verdict { UH, NotUH, Undetermined };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::UH: return "UH";
    case Verdict::NotUH: return "NotUH";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

struct UHParams {
  long n_max = 256;
  double gamma = 10.0;
  double collapse = 1.5;
  /// Re-run once at doubled lattice resolution on an Undetermined verdict.
  bool refine = true;
  int threads = 1;
};

struct GrowthSample {
  long n = 0;
  double min_norm = 0.0;
  double log_min_norm = 0.0;
};

struct UHCertificate {
  Verdict verdict = Verdict::Undetermined;
  long witness_n = 0;
  /// min over the grid of ||A^{witness_n}(x)||, saturating at exp(700).
  double min_norm = 0.0;
  std::vector<GrowthSample> growth_samples;
  /// log(tail minimum / gamma); positive for UH.
  double margin = 0.0;
  /// Per-step log growth of the minimal norm over the last schedule doubling.
  double growth_rate = 0.0;
  int grid_resolution = 0;
  std::size_t grid_size = 0;
  std::string reason;
};

namespace detail {

inline double saturating_exp(double l) { return std::exp(std::min(l, 700.0)); }

inline std::vector<long> doubling_schedule(long n_max) {
  std::vector<long> s;
  for (long n = 4; n <= n_max; n *= 2) s.push_back(n);
  if (s.empty() || s.back() != n_max) s.push_back(n_max);
  return s;
}

/// Running log-norms of the products A^k(x), k = 1..n_max, for one base
/// point. `next` yields A(T^{k-1} x) on the k-th call.
template <typename Next>
void log_norm_profile(long n_max, Next&& next, std::vector<double>& out) {
  out.resize(static_cast<std::size_t>(n_max) + 1);
  out[0] = 0.0;
  Mat2R p = Mat2R::identity();
  double log_scale = 0.0;
  for (long k = 1; k <= n_max; ++k) {
    p = next() * p;
    const double nrm = op_norm(p);
    out[static_cast<std::size_t>(k)] = log_scale + std::log(nrm);
    if (nrm > 1e8 || nrm < 1e-8) {
      p = (1.0 / nrm) * p;
      log_scale += std::log(nrm);
    }
  }
}

/// Verdict from the grid-minimal log-norm profile mlog[0..n_max].
inline UHCertificate assess(const std::vector<double>& mlog, const UHParams& prm, int resolution, std::size_t npts) {
  UHCertificate c;
  c.grid_resolution = resolution;
  c.grid_size = npts;
  const long n_max = prm.n_max;
  const double lg = std::log(prm.gamma), lc = std::log(prm.collapse);
  const auto sched = doubling_schedule(n_max);
  for (long n : sched) {
    const double l = mlog[static_cast<std::size_t>(n)];
    c.growth_samples.push_back({n, saturating_exp(l), l});
  }
  const long half = std::max<long>(1, n_max / 2);
  double tail_min = std::numeric_limits<double>::infinity();
  long tail_arg = n_max;
  for (long k = half; k <= n_max; ++k) {
    if (mlog[static_cast<std::size_t>(k)] < tail_min) {
      tail_min = mlog[static_cast<std::size_t>(k)];
      tail_arg = k;
    }
  }
  c.margin = tail_min - lg;
  c.growth_rate = (mlog[static_cast<std::size_t>(n_max)] - mlog[static_cast<std::size_t>(half)]) /
                  static_cast<double>(std::max<long>(1, n_max - half));

  const std::size_t m = sched.size();
  bool increasing = false, decreasing = false;
  if (m >= 3) {
    const double a = mlog[static_cast<std::size_t>(sched[m - 3])], b = mlog[static_cast<std::size_t>(sched[m - 2])],
                 d = mlog[static_cast<std::size_t>(sched[m - 1])];
    increasing = a < b && b < d;
    decreasing = a > b && b > d;
  }

  if (tail_min >= lg && increasing) {
    c.verdict = Verdict::UH;
    long w = n_max;
    for (auto it = sched.rbegin(); it != sched.rend(); ++it) {
      bool ok = true;
      for (long k = *it; k <= n_max && ok; ++k) ok = mlog[static_cast<std::size_t>(k)] >= lg;
      if (!ok) break;
      w = *it;
    }
    c.witness_n = w;
    c.min_norm = saturating_exp(mlog[static_cast<std::size_t>(w)]);
    c.reason = "minimal norm above gamma on [n_max/2, n_max] with increasing tail";
    return c;
  }
  const double last = mlog[static_cast<std::size_t>(n_max)];
  if (last <= lc || decreasing || tail_min <= lc) {
    c.verdict = Verdict::NotUH;
    if (tail_min <= lc && last > lc) {
      c.growth_samples.push_back({tail_arg, saturating_exp(tail_min), tail_min});
      c.witness_n = tail_arg;
      c.min_norm = saturating_exp(tail_min);
      c.reason = "norm collapse at n=" + std::to_string(tail_arg);
    } else {
      c.witness_n = n_max;
      c.min_norm = saturating_exp(last);
      c.reason = last <= lc ? "bounded norms at n_max" : "minimal norm decreasing over the schedule tail";
    }
    return c;
  }
  c.verdict = Verdict::Undetermined;
  c.witness_n = n_max;
  c.min_norm = saturating_exp(last);
  c.reason = "neither sustained growth nor collapse";
  return c;
}

}  // namespace detail

/// Certificate from per-point matrix streams. `make_stream(i)` returns a
/// callable producing A(x_i), A(T x_i), ... on successive calls.
template <typename StreamFactory>
UHCertificate certify_streams(std::size_t npts, int resolution, const UHParams& prm, StreamFactory&& make_stream) {
  if (prm.n_max < 4) throw Error(ErrorKind::ConfigInvalid, "n_max must be >= 4");
  if (!(prm.gamma > 1.0)) throw Error(ErrorKind::ConfigInvalid, "gamma must exceed 1");
  const std::size_t len = static_cast<std::size_t>(prm.n_max) + 1;
  const int nthreads = std::max(1, prm.threads);
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(nthreads),
                                           std::vector<double>(len, std::numeric_limits<double>::infinity()));
  parallel_chunks(npts, nthreads, [&](int tid, std::size_t begin, std::size_t end) {
    std::vector<double> prof;
    auto& mine = partial[static_cast<std::size_t>(tid)];
    for (std::size_t i = begin; i < end; ++i) {
      auto stream = make_stream(i);
      detail::log_norm_profile(prm.n_max, stream, prof);
      for (std::size_t k = 0; k < len; ++k) mine[k] = std::min(mine[k], prof[k]);
    }
  });
  std::vector<double> mlog(len, std::numeric_limits<double>::infinity());
  for (const auto& p : partial)
    for (std::size_t k = 0; k < len; ++k) mlog[k] = std::min(mlog[k], p[k]);
  return detail::assess(mlog, prm, resolution, npts);
}

inline UHCertificate certify_once(const Cocycle& c, const OrbitGrid& grid, const UHParams& prm) {
  const auto& dyn = c.dynamics();
  return certify_streams(grid.size(), grid.resolution, prm, [&](std::size_t i) {
    return [&c, &dyn, y = grid.points[i]]() mutable {
      const Mat2R m = c(y);
      y = dyn.step(y);
      return m;
    };
  });
}

/// Tri-state UH certificate on `grid`, escalating once to a doubled lattice
/// on an Undetermined verdict.
inline UHCertificate certify(const Cocycle& c, const OrbitGrid& grid, const UHParams& prm = {}) {
  auto cert = certify_once(c, grid, prm);
  if (cert.verdict == Verdict::Undetermined && prm.refine && grid.provenance == GridProvenance::UniformLattice) {
    auto finer = certify_once(c, make_grid(grid.dim, grid.resolution * 2), prm);
    finer.reason += " (after mesh refinement)";
    return finer;
  }
  return cert;
}

/// A^m(T^{-m} x) scaled to unit norm.
inline Mat2R normalized_past_product(const Cocycle& c, const BasePoint& x, long m) {
  const auto& dyn = c.dynamics();
  BasePoint y = dyn.power(x, -m);
  Mat2R p = Mat2R::identity();
  for (long k = 0; k < m; ++k) {
    p = c(y) * p;
    y = dyn.step(y);
    const double n = max_abs(p);
    if (n > 1e8) p = (1.0 / n) * p;
  }
  return (1.0 / max_abs(p)) * p;
}

/// Approximate unstable direction at x: the most expanded image direction of
/// A^m(T^{-m} x). Sign normalized to a nonnegative first component.
inline Vec2 unstable_direction(const Cocycle& c, const BasePoint& x, long m) {
  return top_left_singular(normalized_past_product(c, x, m));
}

/// Past-product depth that resolves the unstable direction of a certified
/// cocycle to roughly 1e-6: angles contract like exp(-2 lambda m).
inline long section_depth(const UHCertificate& cert, long cap = 16384) {
  long m = std::max<long>(64, 2 * cert.witness_n);
  if (cert.growth_rate > 0.0) m = std::max(m, static_cast<long>(std::ceil(10.0 / cert.growth_rate)));
  return std::min(m, cap);
}

struct UnstableSection {
  OrbitGrid grid;
  std::vector<Vec2> u_values;
  std::vector<double> tau_values;
  double invariance_residual = 0.0;
  long m = 0;
};

inline constexpr double kSectionTol = 1e-6;

/// Unstable directions on the grid, with the sign chosen continuously along
/// the grid order. Escalates m up to 4x before giving up.
inline UnstableSection unstable_section(const Cocycle& c, const OrbitGrid& grid, long m, const UHCertificate& cert) {
  if (cert.verdict != Verdict::UH) throw Error(ErrorKind::NotCertifiedUH, "unstable section needs a UH certificate");
  if (m < cert.witness_n) m = cert.witness_n;
  const long m_cap = 4 * m;
  const auto& dyn = c.dynamics();
  for (long mm = m; mm <= m_cap; mm *= 2) {
    UnstableSection s;
    s.grid = grid;
    s.m = mm;
    s.u_values.reserve(grid.size());
    double res = 0.0;
    for (const auto& p : grid.points) {
      const Vec2 u = unstable_direction(c, p, mm);
      const Vec2 image = c(p) * u;
      const Vec2 next = unstable_direction(c, dyn.step(p), mm);
      res = std::max(res, projective_distance(image, next));
      s.u_values.push_back(u);
    }
    s.invariance_residual = res;
    if (res <= kSectionTol) {
      s.tau_values.assign(grid.size(), 0.0);
      for (std::size_t i = 0; i < grid.size(); ++i) s.tau_values[i] = std::atan2(s.u_values[i].y, s.u_values[i].x);
      return s;
    }
  }
  throw Error(ErrorKind::SectionNotConverged, "invariance residual above 1e-6 at m = " + std::to_string(m_cap));
}

/// Lifts the angle of u to a real function tau with R_{-tau} u = (1, 0),
/// continuing along the grid order mod pi and flipping u to match. Every
/// lattice edge (including the periodic ones) must then change tau by at
/// most pi/4; a change near a nonzero multiple of pi is a winding
/// obstruction.
inline UnstableSection angle_lift(UnstableSection s) {
  const auto& g = s.grid;
  const std::size_t n = g.size();
  if (s.u_values.size() != n) throw Error(ErrorKind::DimensionMismatch, "section and grid sizes differ");
  s.tau_values.assign(n, 0.0);
  const double pi = std::numbers::pi;
  auto continue_from = [&](double prev, Vec2 u) {
    const double a = std::atan2(u.y, u.x);
    return a + pi * std::round((prev - a) / pi);  // exactly a when no unwrapping is needed
  };
  // Flips u to point along tau, then re-expresses tau through the flipped
  // vector so a second pass reproduces it bit for bit.
  auto settle = [&](std::size_t i, double tau) {
    Vec2 u = s.u_values[i];
    if (u.x * std::cos(tau) + u.y * std::sin(tau) < 0.0) u = {-u.x, -u.y};
    s.u_values[i] = u;
    const double a = std::atan2(u.y, u.x);
    s.tau_values[i] = a + 2.0 * pi * std::round((tau - a) / (2.0 * pi));
  };
  if (g.provenance != GridProvenance::UniformLattice) {
    double prev = std::atan2(s.u_values[0].y, s.u_values[0].x);
    settle(0, prev);
    for (std::size_t i = 1; i < n; ++i) {
      prev = continue_from(prev, s.u_values[i]);
      settle(i, prev);
    }
    return s;
  }
  const int r = g.resolution;
  auto idx = [&](int i, int j) { return g.dim == 1 ? static_cast<std::size_t>(i) : static_cast<std::size_t>(i * r + j); };
  const int rows = r, cols = g.dim == 1 ? 1 : r;
  settle(0, std::atan2(s.u_values[0].y, s.u_values[0].x));
  for (int i = 0; i < rows; ++i) {
    if (i > 0) settle(idx(i, 0), continue_from(s.tau_values[idx(i - 1, 0)], s.u_values[idx(i, 0)]));
    for (int j = 1; j < cols; ++j) settle(idx(i, j), continue_from(s.tau_values[idx(i, j - 1)], s.u_values[idx(i, j)]));
  }
  auto check_edge = [&](std::size_t a, std::size_t b) {
    const double d = s.tau_values[b] - s.tau_values[a];
    const double k = std::round(d / pi);
    if (std::abs(d - k * pi) > pi / 4) {
      throw Error(ErrorKind::WindingObstruction, "section varies by more than pi/4 across a lattice edge");
    }
    if (k != 0.0) {
      throw Error(ErrorKind::WindingObstruction,
                  "unstable direction winds by " + std::to_string(static_cast<long>(k)) + " pi around a grid cycle");
    }
  };
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      check_edge(idx(i, j), idx((i + 1) % rows, j));
      if (g.dim == 2) check_edge(idx(i, j), idx(i, (j + 1) % cols));
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Search for a nearby UH cocycle supported in a box.

struct SeekOptions {
  UHParams uh;
  std::uint64_t seed = 1;
  /// Fourier modes per coordinate in the random shape functions.
  int modes = 2;
};

struct SeekResult {
  bool found = false;
  std::optional<Cocycle> cocycle;
  UHCertificate certificate;
  double distance = 0.0;
  int candidates_tried = 0;
  std::vector<std::string> log;
};

namespace detail {

/// Shape of a dressing: x -> G(x) in sl(2,R), as coefficients on
/// rotation, diagonal and symmetric off-diagonal generators times low
/// frequency Fourier polynomials.
struct DressingShape {
  std::array<double, 3> weight{0.0, 0.0, 0.0};
  // cos/sin coefficients for modes (k1, k2) with |k| <= modes, per generator
  std::vector<std::array<double, 5>> terms;  // {gen, k1, k2, cos coef, sin coef}
  std::string label;

  Mat2R at(const BasePoint& p, const SupportBox& box) const {
    const double chi = box.bump(p);
    if (chi == 0.0) return Mat2R{};
    std::array<double, 3> g = weight;
    for (const auto& t : terms) {
      const double ph = 2.0 * std::numbers::pi * (t[1] * p[0] + (p.dim() == 2 ? t[2] * p[1] : 0.0));
      g[static_cast<std::size_t>(t[0])] += t[3] * std::cos(ph) + t[4] * std::sin(ph);
    }
    // rotation [[0,-1],[1,0]], diagonal [[1,0],[0,-1]], off-diagonal [[0,1],[1,0]]
    return chi * Mat2R{g[1], -g[0] + g[2], g[0] + g[2], -g[1]};
  }
};

inline std::vector<DressingShape> dressing_shapes(int count, int modes, int dim, std::uint64_t seed) {
  std::vector<DressingShape> out;
  const char* names[3] = {"rotation", "diagonal", "offdiag"};
  for (int gen = 0; gen < 3; ++gen) {
    for (double sgn : {-1.0, 1.0}) {
      DressingShape s;
      s.weight[static_cast<std::size_t>(gen)] = sgn;
      s.label = std::string(sgn < 0 ? "-" : "+") + names[gen];
      out.push_back(s);
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    DressingShape s;
    for (auto& w : s.weight) w = nd(rng);
    for (int gen = 0; gen < 3; ++gen) {
      for (int k1 = -modes; k1 <= modes; ++k1) {
        for (int k2 = (dim == 2 ? -modes : 0); k2 <= (dim == 2 ? modes : 0); ++k2) {
          if (k1 == 0 && k2 == 0) continue;
          const double decay = 0.5 / (std::abs(k1) + std::abs(k2));
          s.terms.push_back({static_cast<double>(gen), static_cast<double>(k1), static_cast<double>(k2),
                             decay * nd(rng), decay * nd(rng)});
        }
      }
    }
    s.label = "random#" + std::to_string(out.size());
    out.push_back(std::move(s));
  }
  out.resize(static_cast<std::size_t>(count));
  return out;
}

}  // namespace detail

/// exp(amplitude * chi(x) * G(x)) A(x).
inline Cocycle dressed_cocycle(const Cocycle& a, const SupportBox& box, std::shared_ptr<const detail::DressingShape> shape,
                               double amplitude) {
  return Cocycle(
      a.dynamics(),
      [a, box, shape, amplitude](const BasePoint& p) {
        const Mat2R g = shape->at(p, box);
        if (g.a11 == 0.0 && g.a12 == 0.0 && g.a21 == 0.0 && g.a22 == 0.0) return a(p);
        return exp_sl2(amplitude * g) * a(p);
      },
      a.description() + " dressed(" + shape->label + ")");
}

/// Looks for B = A off `support` with sup_grid ||A - B|| <= epsilon and a UH
/// certificate. Candidates are dressings exp(amp chi G) A; each shape is
/// scaled to use most of the distance budget, and both the full and half
/// amplitudes are tried. `budget` caps the number of certificates computed.
inline SeekResult seek_uh_neighbor(const Cocycle& a, const SupportBox& support, double epsilon, int budget,
                                   const OrbitGrid& grid, const SeekOptions& opt = {}) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::ConfigInvalid, "epsilon must be positive");
  SeekResult res;
  auto base = certify(a, grid, opt.uh);
  if (base.verdict == Verdict::UH) {
    res.found = true;
    res.cocycle = a;
    res.certificate = base;
    res.log.push_back("input already UH; returning it unchanged");
    return res;
  }
  res.log.push_back("input verdict " + to_string(base.verdict) + " (" + base.reason + ")");

  // Distance is measured on the certification grid refined twice, which
  // resolves the bump.
  const auto dist_grid = make_grid(grid.dim, std::max(grid.resolution * 2, 32));
  std::vector<BasePoint> in_support;
  for (const auto& p : dist_grid.points)
    if (support.bump(p) > 0.0) in_support.push_back(p);
  if (in_support.empty()) {
    res.log.push_back("support box contains no lattice points; nothing to search");
    return res;
  }

  const int nshapes = std::max(6, budget);
  const auto shapes = detail::dressing_shapes(nshapes, opt.modes, grid.dim, opt.seed);
  for (const auto& sh : shapes) {
    if (res.candidates_tried >= budget) break;
    auto shape = std::make_shared<const detail::DressingShape>(sh);
    // Scale to distance 0.95 epsilon by bisection on the amplitude.
    auto dist_at = [&](double amp) { return c0_distance(a, dressed_cocycle(a, support, shape, amp), in_support); };
    double lo = 0.0, hi = 1.0;
    while (dist_at(hi) < 0.95 * epsilon && hi < 1e3) hi *= 2.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dist_at(mid) <= 0.95 * epsilon ? lo : hi) = mid;
    }
    for (double frac : {1.0, 0.5}) {
      if (res.candidates_tried >= budget) break;
      const double amp = lo * frac;
      auto b = dressed_cocycle(a, support, shape, amp);
      const double d = dist_at(amp);
      auto cert = certify(b, grid, opt.uh);
      ++res.candidates_tried;
      res.log.push_back("candidate " + std::to_string(res.candidates_tried) + ": " + sh.label +
                        " amp=" + std::to_string(amp) + " dist=" + std::to_string(d) + " -> " + to_string(cert.verdict));
      if (cert.verdict == Verdict::UH && d <= epsilon) {
        res.found = true;
        res.cocycle = b;
        res.certificate = cert;
        res.distance = d;
        return res;
      }
    }
  }
  res.log.push_back("budget of " + std::to_string(budget) + " candidates exhausted");
  return res;
}

}  // namespace uhlab

#endif  // UHLAB_HYPERBOLICITY_HPP
