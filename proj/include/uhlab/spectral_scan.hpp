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

#ifndef UHLAB_SPECTRAL_SCAN_HPP
#define UHLAB_SPECTRAL_SCAN_HPP

// Spectra two ways: as the non-UH set of a parameter scan, and as
// eigenvalues of finite truncations along one orbit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/cocycle.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/hyperbolicity.hpp"
#include "uhlab/mat2.hpp"
#include "uhlab/parallel.hpp"
#include "uhlab/sampling_map.hpp"

namespace uhlab {

enum class ScanAxis { Line, Circle };

struct ScanParams {
  UHParams uh;
  int grid_resolution = 64;
};

struct SpectralScan {
  ScanAxis axis = ScanAxis::Line;
  std::vector<double> values;
  std::vector<UHCertificate> certificates;
  std::string model;

  std::size_t size() const { return values.size(); }
  Verdict verdict(std::size_t i) const { return certificates[i].verdict; }
};

/// Evenly spaced values lo, lo + step, ... up to hi (inclusive within
/// half a step). Computed as lo + i*step so grids are reproducible.
inline std::vector<double> linear_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw Error(ErrorKind::ConfigInvalid, "grid needs step > 0 and hi >= lo");
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 0.5));
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) v.push_back(lo + static_cast<double>(i) * step);
  return v;
}

/// psi = i*step for psi in [0, 2 pi).
inline std::vector<double> circle_grid(double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::ConfigInvalid, "grid step must be positive");
  std::vector<double> v;
  for (long i = 0;; ++i) {
    const double p = static_cast<double>(i) * step;
    if (p >= 2.0 * std::numbers::pi) break;
    v.push_back(p);
  }
  return v;
}

namespace detail {

inline void check_sorted(const std::vector<double>& g) {
  if (g.empty()) throw Error(ErrorKind::ConfigInvalid, "parameter grid is empty");
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw Error(ErrorKind::ConfigInvalid, "parameter grid must be strictly increasing");
}

/// Samples of a map along the first n_max steps of each lattice orbit, laid
/// out point-major.
template <typename Eval>
auto orbit_samples(const BaseDynamics& dyn, const OrbitGrid& grid, long n_max, Eval&& eval) {
  using T = decltype(eval(grid.points[0]));
  std::vector<T> out;
  out.reserve(grid.size() * static_cast<std::size_t>(n_max));
  for (const auto& p0 : grid.points) {
    BasePoint p = p0;
    for (long k = 0; k < n_max; ++k) {
      out.push_back(eval(p));
      p = dyn.step(p);
    }
  }
  return out;
}

/// Per-parameter certificates. `make_cocycle(value)` is only used when the
/// fast path is Undetermined and the mesh is refined.
template <typename FastCertify, typename MakeCocycle>
std::vector<UHCertificate> scan_values(const std::vector<double>& values, const ScanParams& prm, FastCertify&& fast,
                                       MakeCocycle&& make_cocycle, int dim) {
  UHParams inner = prm.uh;
  inner.threads = 1;
  return parallel_map<UHCertificate>(values.size(), prm.uh.threads, [&](std::size_t i) {
    auto cert = fast(values[i], inner);
    if (cert.verdict == Verdict::Undetermined && prm.uh.refine) {
      UHParams once = inner;
      once.refine = false;
      cert = certify_once(make_cocycle(values[i]), make_grid(dim, prm.grid_resolution * 2), once);
      cert.reason += " (after mesh refinement)";
    }
    return cert;
  });
}

}  // namespace detail

/// UH verdict of the Jacobi cocycle at each energy.
inline SpectralScan scan_jacobi(const SamplingMap& fa, const SamplingMap& fb, const BaseDynamics& dyn,
                                const std::vector<double>& energies, const ScanParams& prm = {}) {
  detail::check_sorted(energies);
  fa.check_positive(1e-12);
  const auto grid = make_grid(dyn, prm.grid_resolution);
  const long n = prm.uh.n_max;
  struct AB {
    double a, b;
  };
  const auto samples =
      detail::orbit_samples(dyn, grid, n, [&](const BasePoint& p) { return AB{fa.real_value(p), fb.real_value(p)}; });
  auto fast = [&](double E, const UHParams& up) {
    return certify_streams(grid.size(), grid.resolution, up, [&, E](std::size_t i) {
      return [E, it = samples.data() + i * static_cast<std::size_t>(n)]() mutable {
        const AB s = *it++;
        return Mat2R{(E - s.b) / s.a, -1.0 / s.a, s.a, 0.0};
      };
    });
  };
  SpectralScan s;
  s.axis = ScanAxis::Line;
  s.values = energies;
  s.model = "jacobi over " + dyn.describe();
  s.certificates = detail::scan_values(
      energies, prm, fast, [&](double E) { return Cocycle::jacobi(dyn, fa, fb, E); }, dyn.dim());
  return s;
}

/// UH verdict of the conjugated Szego cocycle at each psi.
inline SpectralScan scan_cmv(const SamplingMap& f, const BaseDynamics& dyn, const std::vector<double>& psis,
                             const ScanParams& prm = {}) {
  detail::check_sorted(psis);
  f.check_disk();
  const auto grid = make_grid(dyn, prm.grid_resolution);
  const long n = prm.uh.n_max;
  // S'(r, psi/2, psi/2 + phi) = k (I + r S(phi)) R_{psi/2}; the first factor
  // does not depend on psi.
  const auto samples = detail::orbit_samples(dyn, grid, n, [&](const BasePoint& p) {
    const cplx a = f(p);
    const double r = std::abs(a);
    if (r >= 1.0 - kDiskMargin) throw Error(ErrorKind::AlphaOutOfDisk, "|f(x)| reaches the unit circle");
    const double k = 1.0 / std::sqrt(1.0 - r * r);
    return k * (Mat2R::identity() + r * reflection(std::arg(a)));
  });
  auto fast = [&](double psi, const UHParams& up) {
    const Mat2R rot = rotation(0.5 * psi);
    return certify_streams(grid.size(), grid.resolution, up, [&, rot](std::size_t i) {
      return [rot, it = samples.data() + i * static_cast<std::size_t>(n)]() mutable { return *it++ * rot; };
    });
  };
  SpectralScan s;
  s.axis = ScanAxis::Circle;
  s.values = psis;
  s.model = "szego over " + dyn.describe();
  s.certificates = detail::scan_values(
      psis, prm, fast, [&](double psi) { return Cocycle::szego(dyn, f, UnitCirclePhase(psi)); }, dyn.dim());
  return s;
}

struct Gap {
  double lo = 0.0;
  double hi = 0.0;
  double width = 0.0;
};

struct GapReport {
  std::vector<Gap> gaps;
  std::size_t undetermined_count = 0;
  /// Every grid value was UH: an empty spectrum, suspicious for self-adjoint
  /// or unitary models.
  bool all_uh = false;
};

/// Maximal runs of UH verdicts. Interior endpoints sit midway between the
/// last UH and first non-UH value; runs touching the ends of a line grid are
/// bounded by the grid end. On a circle axis a run through psi = 0 is merged
/// into one arc (lo > hi then means it wraps). Undetermined counts as
/// spectrum.
inline GapReport gaps(const SpectralScan& s) {
  if (s.values.empty()) throw Error(ErrorKind::ConfigInvalid, "empty scan");
  GapReport rep;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    if (s.verdict(i) == Verdict::Undetermined) ++rep.undetermined_count;
  const double two_pi = 2.0 * std::numbers::pi;
  const bool circle = s.axis == ScanAxis::Circle;
  auto is_uh = [&](std::size_t i) { return s.verdict(i) == Verdict::UH; };

  std::size_t nuh = 0;
  for (std::size_t i = 0; i < n; ++i) nuh += is_uh(i) ? 1 : 0;
  if (nuh == n) {
    rep.all_uh = true;
    if (circle) rep.gaps.push_back({0.0, two_pi, two_pi});
    else rep.gaps.push_back({s.values.front(), s.values.back(), s.values.back() - s.values.front()});
    return rep;
  }

  auto left_edge = [&](std::size_t i) {
    if (i > 0) return 0.5 * (s.values[i - 1] + s.values[i]);
    return circle ? 0.5 * (s.values[n - 1] - two_pi + s.values[0]) : s.values[0];
  };
  auto right_edge = [&](std::size_t j) {
    if (j + 1 < n) return 0.5 * (s.values[j] + s.values[j + 1]);
    return circle ? 0.5 * (s.values[n - 1] + s.values[0] + two_pi) : s.values[n - 1];
  };

  // Start the sweep at a non-UH value so a circle run is never split.
  std::size_t start = 0;
  if (circle)
    while (is_uh(start)) ++start;
  std::size_t k = 0;
  while (k < n) {
    const std::size_t i = (start + k) % n;
    if (!is_uh(i)) {
      ++k;
      continue;
    }
    std::size_t len = 0;
    while (k + len < n && is_uh((start + k + len) % n)) ++len;
    const std::size_t j = (start + k + len - 1) % n;
    if (!circle) {
      const double lo = left_edge(i), hi = right_edge(j);
      rep.gaps.push_back({lo, hi, hi - lo});
    } else {
      const double lo = wrap_two_pi(left_edge(i)), hi = wrap_two_pi(right_edge(j));
      double w = hi - lo;
      if (w <= 0.0) w += two_pi;
      rep.gaps.push_back({lo, hi, w});
    }
    k += len;
  }
  std::sort(rep.gaps.begin(), rep.gaps.end(), [](const Gap& a, const Gap& b) { return a.lo < b.lo; });
  return rep;
}

struct TruncationSpectrum {
  std::size_t size = 0;
  std::vector<double> values;
  BasePoint base_point;
  /// Unimodular final coefficient phase (CMV only).
  double boundary_phase = 0.0;
  bool unitary = false;
  /// The matrix data along the orbit: diagonal/off-diagonal for Jacobi,
  /// alpha_0..alpha_{N-2} for CMV.
  std::vector<double> diagonal, offdiagonal;
  std::vector<cplx> alpha;
};

namespace detail {

/// Number of eigenvalues below x of the symmetric tridiagonal with diagonal
/// d and off-diagonal e (Sturm count via LDL^T pivots).
inline std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  std::size_t c = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1] * e[i - 1] / q;
    q = d[i] - x - off;
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++c;
  }
  return c;
}

}  // namespace detail

/// Eigenvalues of the N x N principal block of H_x (Dirichlet truncation):
/// diagonal f_b(T^n x), off-diagonal f_a(T^n x), n = 0..N-1.
inline TruncationSpectrum truncation_jacobi(const SamplingMap& fa, const SamplingMap& fb, const BaseDynamics& dyn,
                                            const BasePoint& x, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "truncation size must be >= 1");
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  BasePoint p = x;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = fb.real_value(p);
    if (i + 1 < n) {
      e[i] = fa.real_value(p);
      if (!(e[i] > 0.0)) throw Error(ErrorKind::NonpositiveA, "off-diagonal a_n <= 0 along the orbit");
    }
    p = dyn.step(p);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double rad = (i > 0 ? e[i - 1] : 0.0) + (i + 1 < n ? e[i] : 0.0);
    lo = std::min(lo, d[i] - rad);
    hi = std::max(hi, d[i] + rad);
  }
  lo -= 1e-9;
  hi += 1e-9;
  TruncationSpectrum ts;
  ts.size = n;
  ts.base_point = x;
  ts.diagonal = d;
  ts.offdiagonal = e;
  ts.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = lo, b = hi;
    while (b - a > 1e-11) {
      const double m = 0.5 * (a + b);
      (detail::sturm_count(d, e, m) > k ? b : a) = m;
    }
    ts.values[k] = 0.5 * (a + b);
  }
  return ts;
}

namespace detail {

/// Im of e^{i(psi(1 - N/2) + bp/2)} Phi_{N-1}(e^{i psi}); its zeros are the
/// zeros of the degree-N paraorthogonal polynomial with final coefficient
/// e^{i bp}. Positive rescaling during the recursion keeps the sign.
inline double popuc_phase_function(const std::vector<cplx>& alpha, double psi, double bp) {
  const cplx z = std::polar(1.0, psi);
  cplx phi{1.0, 0.0}, star{1.0, 0.0};
  for (const cplx& a : alpha) {
    const cplx nphi = z * phi - std::conj(a) * star;
    const cplx nstar = star - a * z * phi;
    phi = nphi;
    star = nstar;
    const double m = std::abs(star);
    if (!std::isfinite(m)) throw Error(ErrorKind::RecursionOverflow, "Szego recursion left the floating range");
    if (m > 1e100 || m < 1e-100) {
      phi /= m;
      star /= m;
    }
  }
  const double n = static_cast<double>(alpha.size() + 1);
  return (std::polar(1.0, psi * (1.0 - 0.5 * n) + 0.5 * bp) * phi).imag();
}

}  // namespace detail

/// Eigenphases of the unitary N x N CMV truncation: zeros of the
/// paraorthogonal polynomial built from alpha_0..alpha_{N-2} along the orbit
/// of x and the final coefficient e^{i boundary_phase}.
inline TruncationSpectrum truncation_cmv(const SamplingMap& f, const BaseDynamics& dyn, const BasePoint& x,
                                         std::size_t n, double boundary_phase) {
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "truncation size must be >= 1");
  std::vector<cplx> alpha;
  BasePoint p = x;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const cplx a = f(p);
    if (std::abs(a) >= 1.0) throw Error(ErrorKind::AlphaOutOfDisk, "|alpha_n| >= 1 along the orbit");
    alpha.push_back(a);
    p = dyn.step(p);
  }
  auto F = [&](double psi) { return detail::popuc_phase_function(alpha, psi, boundary_phase); };
  TruncationSpectrum ts;
  ts.size = n;
  ts.base_point = x;
  ts.boundary_phase = boundary_phase;
  ts.unitary = true;
  ts.alpha = alpha;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t m = 16 * n; ts.values.size() != n && m <= 256 * n; m *= 2) {
    ts.values.clear();
    const double h = two_pi / static_cast<double>(m);
    double a = -0.5 * h, fa = F(a);
    for (std::size_t j = 1; j <= m; ++j) {
      const double b = (static_cast<double>(j) - 0.5) * h, fb = F(b);
      if ((fa < 0.0) != (fb < 0.0)) {
        double lo = a, hi = b, flo = fa;
        while (hi - lo > 1e-11) {
          const double mid = 0.5 * (lo + hi), fm = F(mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double z = wrap_two_pi(0.5 * (lo + hi));
        if (z > two_pi - 1e-10) z = 0.0;  // a root at 0 bracketed from below
        ts.values.push_back(z);
      }
      a = b;
      fa = fb;
    }
  }
  std::sort(ts.values.begin(), ts.values.end());
  return ts;
}

/// Strict interlacing of two equal-size sets of circle phases.
inline bool interlace(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size() || a.empty()) return false;
  struct Tagged {
    double v;
    int tag;
  };
  std::vector<Tagged> all;
  for (double v : a) all.push_back({v, 0});
  for (double v : b) all.push_back({v, 1});
  std::sort(all.begin(), all.end(), [](const Tagged& x, const Tagged& y) { return x.v < y.v; });
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& nx = all[(i + 1) % all.size()];
    if (nx.tag == all[i].tag || nx.v == all[i].v) return false;
  }
  return true;
}

/// Distance from v to the closest non-UH scan value (circle distance on a
/// circle axis). Undetermined counts as spectrum. Infinity when the scan has
/// no spectrum at all.
inline double distance_to_spectrum(const SpectralScan& s, double v) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.verdict(i) == Verdict::UH) continue;
    double d = std::abs(s.values[i] - v);
    if (s.axis == ScanAxis::Circle) d = std::min(d, 2.0 * std::numbers::pi - d);
    best = std::min(best, d);
  }
  return best;
}

namespace detail {

/// Eigenvector for a known simple eigenvalue of a banded complex matrix
/// (dense row-major storage, bandwidth bw) by two steps of inverse iteration.
/// Gaussian elimination with partial pivoting touches only the band, whose
/// upper part widens to 2 bw.
inline std::vector<cplx> banded_eigenvector(std::vector<cplx> a, std::size_t n, std::size_t bw, cplx lambda) {
  const double scale = std::max(1.0, std::abs(lambda));
  for (std::size_t i = 0; i < n; ++i) a[i * n + i] -= lambda * (1.0 + 1e-12) + cplx(0, 1e-13 * scale);
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last = std::min(n - 1, k + bw);
    std::size_t piv = k;
    for (std::size_t i = k + 1; i <= last; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    perm[k] = piv;
    if (piv != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
    if (a[k * n + k] == cplx{}) a[k * n + k] = cplx(1e-300, 0);
    const std::size_t jend = std::min(n - 1, k + 2 * bw);
    for (std::size_t i = k + 1; i <= last; ++i) {
      const cplx m = a[i * n + k] / a[k * n + k];
      a[i * n + k] = m;
      for (std::size_t j = k + 1; j <= jend; ++j) a[i * n + j] -= m * a[k * n + j];
    }
  }
  std::vector<cplx> v(n, cplx(1.0, 0.0));
  for (int it = 0; it < 3; ++it) {
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(v[k], v[perm[k]]);
      for (std::size_t i = k + 1; i <= std::min(n - 1, k + bw); ++i) v[i] -= a[i * n + k] * v[k];
    }
    for (std::size_t k = n; k-- > 0;) {
      cplx acc = v[k];
      for (std::size_t j = k + 1; j <= std::min(n - 1, k + 2 * bw); ++j) acc -= a[k * n + j] * v[j];
      v[k] = acc / a[k * n + k];
    }
    double nrm = 0.0;
    for (const auto& c : v) nrm += std::norm(c);
    nrm = std::sqrt(nrm);
    for (auto& c : v) c /= nrm;
  }
  return v;
}

}  // namespace detail

/// The unitary N x N cut-off CMV matrix L M with alpha_{-1} = -1 and final
/// coefficient e^{i boundary_phase}; its characteristic polynomial is the
/// paraorthogonal polynomial whose zeros truncation_cmv returns.
inline std::vector<cplx> cmv_cutoff_matrix(const TruncationSpectrum& ts) {
  const std::size_t n = ts.size, m = n + 1;
  std::vector<cplx> al = ts.alpha;
  al.push_back(std::polar(1.0, ts.boundary_phase));
  std::vector<cplx> L(m * m), M(m * m), C(n * n);
  auto theta = [&](std::vector<cplx>& X, std::size_t k) {
    // Theta_k = [[conj a, rho], [rho, -a]] on rows/cols (k, k+1).
    const cplx a = al[k];
    const double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
    X[k * m + k] = std::conj(a);
    if (k + 1 < m) {
      X[k * m + k + 1] = rho;
      X[(k + 1) * m + k] = rho;
      X[(k + 1) * m + k + 1] = -a;
    }
  };
  for (std::size_t k = 0; k < n; k += 2) theta(L, k);
  M[0] = 1.0;
  for (std::size_t k = 1; k < n; k += 2) theta(M, k);
  if (n % 2 == 0) L[n * m + n] = 1.0;
  else M[n * m + n] = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = (i >= 1 ? i - 1 : 0); k <= std::min(m - 1, i + 1); ++k)
      for (std::size_t j = (k >= 1 ? k - 1 : 0); j <= std::min(n - 1, k + 1); ++j) C[i * n + j] += L[i * m + k] * M[k * m + j];
  return C;
}

/// Fraction of each eigenvector's squared mass on the outer tenth of the
/// sites at either end. Eigenvalues produced by the truncation boundary
/// (edge states in spectral gaps) concentrate there.
inline std::vector<double> boundary_masses(const TruncationSpectrum& ts) {
  const std::size_t n = ts.size;
  std::vector<cplx> a(n * n);
  if (ts.unitary) {
    a = cmv_cutoff_matrix(ts);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      a[i * n + i] = ts.diagonal[i];
      if (i + 1 < n) a[i * n + i + 1] = a[(i + 1) * n + i] = ts.offdiagonal[i];
    }
  }
  const std::size_t edge = std::max<std::size_t>(1, n / 10);
  std::vector<double> out;
  out.reserve(n);
  for (double v : ts.values) {
    const cplx lambda = ts.unitary ? std::polar(1.0, v) : cplx(v, 0.0);
    const auto vec = detail::banded_eigenvector(a, n, ts.unitary ? 2 : 1, lambda);
    double outer = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += std::norm(vec[i]);
      if (i < edge || i + edge >= n) outer += std::norm(vec[i]);
    }
    out.push_back(outer / total);
  }
  return out;
}

/// max_i |(A - lambda) v|_i for the eigenpair behind boundary_masses; used
/// to check the cut-off matrix against the polynomial zeros.
inline double eigen_residual(const TruncationSpectrum& ts, std::size_t k) {
  const std::size_t n = ts.size;
  std::vector<cplx> a(n * n);
  if (ts.unitary) {
    a = cmv_cutoff_matrix(ts);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      a[i * n + i] = ts.diagonal[i];
      if (i + 1 < n) a[i * n + i + 1] = a[(i + 1) * n + i] = ts.offdiagonal[i];
    }
  }
  const cplx lambda = ts.unitary ? std::polar(1.0, ts.values[k]) : cplx(ts.values[k], 0.0);
  const auto v = detail::banded_eigenvector(a, n, ts.unitary ? 2 : 1, lambda);
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = -lambda * v[i];
    for (std::size_t j = 0; j < n; ++j) acc += a[i * n + j] * v[j];
    r = std::max(r, std::abs(acc));
  }
  return r;
}

struct EigenCheck {
  double value = 0.0;
  double distance = 0.0;
  double boundary_mass = 0.0;
  bool edge_state = false;
};

struct ConsistencyReport {
  std::vector<EigenCheck> eigen;
  double delta = 1e-2;
  double max_distance_all = 0.0;
  double max_distance_bulk = 0.0;
  std::size_t edge_states = 0;
  /// Every non-edge eigenvalue within delta of the scan's non-UH set.
  bool consistent = true;
};

inline constexpr double kEdgeMassThreshold = 0.5;

/// Compares truncation eigenvalues with the scan's non-UH set. Eigenvalues
/// whose eigenvectors put more than half their mass on the outer tenth of
/// the block are classified as boundary states (only for N >= 20) and
/// reported separately; every eigenvalue keeps its distance in the report.
inline ConsistencyReport consistency(const SpectralScan& scan, const std::vector<TruncationSpectrum>& truncations,
                                     double delta = 1e-2) {
  ConsistencyReport rep;
  rep.delta = delta;
  for (const auto& ts : truncations) {
    const bool classify = ts.size >= 20;
    const auto mass = classify ? boundary_masses(ts) : std::vector<double>(ts.size, 0.0);
    for (std::size_t k = 0; k < ts.values.size(); ++k) {
      EigenCheck c;
      c.value = ts.values[k];
      c.distance = distance_to_spectrum(scan, c.value);
      c.boundary_mass = mass[k];
      c.edge_state = classify && mass[k] > kEdgeMassThreshold;
      rep.max_distance_all = std::max(rep.max_distance_all, c.distance);
      if (c.edge_state) ++rep.edge_states;
      else rep.max_distance_bulk = std::max(rep.max_distance_bulk, c.distance);
      rep.eigen.push_back(c);
    }
  }
  rep.consistent = rep.max_distance_bulk <= delta;
  return rep;
}

}  // namespace uhlab

#endif  // UHLAB_SPECTRAL_SCAN_HPP
