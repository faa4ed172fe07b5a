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

#ifndef UHLAB_SAMPLING_MAP_HPP
#define UHLAB_SAMPLING_MAP_HPP

// Continuous maps from the torus to the unit disk or the real line.
//
// A map is the sum of a short Fourier series and an optional lattice part
// evaluated by periodic multilinear interpolation. Either part may be empty.
// Real-codomain maps take the real part of the Fourier sum.
//
// Text format, one entry per line:
//
//   codomain=disk|real dims=1|2 resolution=N
//   fourier k1 [k2] re im
//   grid i [j] value_re [value_im]
//
// Lattice entries that are not listed are zero. Numbers are written with 17
// significant digits so a write/read cycle is bit exact.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uhlab/base_dynamics.hpp"
#include "uhlab/errors.hpp"
#include "uhlab/mat2.hpp"

namespace uhlab {

enum class Codomain { Disk, Real };

struct FourierTerm {
  int k1 = 0;
  int k2 = 0;
  cplx coef{0.0, 0.0};

  friend bool operator==(const FourierTerm&, const FourierTerm&) = default;
};

inline constexpr double kDiskMargin = 1e-9;

class SamplingMap {
 public:
  SamplingMap() = default;
  SamplingMap(Codomain codomain, int dims, int resolution) : codomain_(codomain), dims_(dims), resolution_(resolution) {
    if (dims != 1 && dims != 2) throw Error(ErrorKind::DimensionMismatch, "sampling map dims must be 1 or 2");
    if (resolution < 2) throw Error(ErrorKind::ResolutionTooSmall, "sampling map resolution must be >= 2");
  }

  static SamplingMap constant(Codomain codomain, int dims, cplx value, int resolution = 64) {
    SamplingMap m(codomain, dims, resolution);
    m.add_fourier(0, 0, value);
    return m;
  }

  Codomain codomain() const { return codomain_; }
  int dims() const { return dims_; }
  int resolution() const { return resolution_; }
  const std::vector<FourierTerm>& fourier_terms() const { return fourier_; }
  bool has_grid() const { return !grid_.empty(); }
  const std::vector<cplx>& grid_values() const { return grid_; }

  /// True when the map takes a single value everywhere.
  bool is_constant() const {
    for (const auto& t : fourier_)
      if ((t.k1 != 0 || t.k2 != 0) && t.coef != cplx{}) return false;
    for (const auto& g : grid_)
      if (g != grid_.front()) return false;
    return true;
  }

  void add_fourier(int k1, int k2, cplx coef) { fourier_.push_back({k1, k2, coef}); }

  /// Sets the lattice value at multi-index (i, j); allocates a zero lattice
  /// on first use.
  void set_grid(int i, int j, cplx value) {
    if (grid_.empty()) grid_.assign(lattice_size(), cplx{0.0, 0.0});
    grid_.at(lattice_index(i, j)) = value;
  }
  cplx grid_at(int i, int j) const { return grid_.empty() ? cplx{} : grid_.at(lattice_index(i, j)); }

  cplx operator()(const BasePoint& p) const {
    if (p.dim() != dims_) throw Error(ErrorKind::DimensionMismatch, "sampling map evaluated at wrong dimension");
    cplx v{0.0, 0.0};
    for (const auto& t : fourier_) {
      const double ph = 2.0 * std::numbers::pi * (t.k1 * p[0] + (dims_ == 2 ? t.k2 * p[1] : 0.0));
      v += t.coef * cplx(std::cos(ph), std::sin(ph));
    }
    if (codomain_ == Codomain::Real) v = cplx(v.real(), 0.0);
    if (!grid_.empty()) v += interpolate(p);
    return v;
  }

  double real_value(const BasePoint& p) const { return (*this)(p).real(); }

  /// sup |f| on the map's own evaluation lattice.
  double sup_modulus() const {
    double s = 0.0;
    for (const auto& p : make_grid(dims_, resolution_).points) s = std::max(s, std::abs((*this)(p)));
    return s;
  }

  double inf_real() const {
    double s = INFINITY;
    for (const auto& p : make_grid(dims_, resolution_).points) s = std::min(s, real_value(p));
    return s;
  }

  /// Disk maps must stay 1e-9 inside the unit circle on the evaluation lattice.
  void check_disk() const {
    if (codomain_ != Codomain::Disk) return;
    const double s = sup_modulus();
    if (s > 1.0 - kDiskMargin) {
      throw Error(ErrorKind::AlphaOutOfDisk, "sup|f| = " + std::to_string(s) + " reaches the unit circle");
    }
  }

  /// Maps used as off-diagonal Jacobi coefficients must be bounded below.
  void check_positive(double floor) const {
    const double m = inf_real();
    if (!(m >= floor) || floor <= 0.0) {
      throw Error(ErrorKind::NonpositiveA, "inf f_a = " + std::to_string(m) + " below floor " + std::to_string(floor));
    }
  }

  std::string to_text() const;
  static SamplingMap from_text(const std::string& text);

  void write_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorKind::ParseError, "cannot write " + path);
    os << to_text();
  }
  static SamplingMap read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorKind::ParseError, "cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_text(ss.str());
  }

  friend bool operator==(const SamplingMap&, const SamplingMap&) = default;

 private:
  std::size_t lattice_size() const {
    return dims_ == 1 ? static_cast<std::size_t>(resolution_)
                      : static_cast<std::size_t>(resolution_) * static_cast<std::size_t>(resolution_);
  }
  std::size_t lattice_index(int i, int j) const {
    if (i < 0 || i >= resolution_ || (dims_ == 2 && (j < 0 || j >= resolution_))) {
      throw Error(ErrorKind::ParseError, "lattice index out of range");
    }
    return dims_ == 1 ? static_cast<std::size_t>(i)
                      : static_cast<std::size_t>(i) * static_cast<std::size_t>(resolution_) + static_cast<std::size_t>(j);
  }

  cplx interpolate(const BasePoint& p) const {
    const int n = resolution_;
    auto split = [n](double x, int& i0, int& i1, double& w) {
      const double s = x * n;
      double fl = std::floor(s);
      w = s - fl;
      i0 = static_cast<int>(fl) % n;
      if (i0 < 0) i0 += n;
      i1 = (i0 + 1) % n;
    };
    int i0, i1;
    double wx;
    split(p[0], i0, i1, wx);
    if (dims_ == 1) return (1.0 - wx) * grid_[static_cast<std::size_t>(i0)] + wx * grid_[static_cast<std::size_t>(i1)];
    int j0, j1;
    double wy;
    split(p[1], j0, j1, wy);
    auto g = [&](int i, int j) { return grid_[lattice_index(i, j)]; };
    return (1.0 - wx) * ((1.0 - wy) * g(i0, j0) + wy * g(i0, j1)) + wx * ((1.0 - wy) * g(i1, j0) + wy * g(i1, j1));
  }

  Codomain codomain_ = Codomain::Real;
  int dims_ = 1;
  int resolution_ = 64;
  std::vector<FourierTerm> fourier_;
  std::vector<cplx> grid_;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_double(const std::string& tok) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "not a number: '" + tok + "'");
  }
  if (pos != tok.size()) throw Error(ErrorKind::ParseError, "trailing characters in number: '" + tok + "'");
  return v;
}

inline int parse_int(const std::string& tok) {
  const double v = parse_double(tok);
  if (v != std::floor(v)) throw Error(ErrorKind::ParseError, "not an integer: '" + tok + "'");
  return static_cast<int>(v);
}

}  // namespace detail

inline std::string SamplingMap::to_text() const {
  std::ostringstream os;
  os << "codomain=" << (codomain_ == Codomain::Disk ? "disk" : "real") << " dims=" << dims_
     << " resolution=" << resolution_ << "\n";
  for (const auto& t : fourier_) {
    os << "fourier " << t.k1;
    if (dims_ == 2) os << ' ' << t.k2;
    os << ' ' << detail::fmt17(t.coef.real()) << ' ' << detail::fmt17(t.coef.imag()) << "\n";
  }
  if (!grid_.empty()) {
    const int nj = dims_ == 2 ? resolution_ : 1;
    for (int i = 0; i < resolution_; ++i) {
      for (int j = 0; j < nj; ++j) {
        const cplx v = grid_[lattice_index(i, j)];
        if (v == cplx{0.0, 0.0} && (i != 0 || j != 0)) continue;
        os << "grid " << i;
        if (dims_ == 2) os << ' ' << j;
        os << ' ' << detail::fmt17(v.real());
        if (codomain_ == Codomain::Disk) os << ' ' << detail::fmt17(v.imag());
        os << "\n";
      }
    }
  }
  return os.str();
}

inline SamplingMap SamplingMap::from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::optional<SamplingMap> map;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    const std::string where = " (line " + std::to_string(lineno) + ")";
    if (!map) {
      std::optional<Codomain> cod;
      int dims = 0, res = 0;
      for (const auto& t : tok) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "bad header token '" + t + "'" + where);
        const std::string key = t.substr(0, eq), val = t.substr(eq + 1);
        if (key == "codomain") {
          if (val == "disk") cod = Codomain::Disk;
          else if (val == "real") cod = Codomain::Real;
          else throw Error(ErrorKind::ParseError, "unknown codomain '" + val + "'" + where);
        } else if (key == "dims") {
          dims = detail::parse_int(val);
        } else if (key == "resolution") {
          res = detail::parse_int(val);
        } else {
          throw Error(ErrorKind::ParseError, "unknown header key '" + key + "'" + where);
        }
      }
      if (!cod || dims == 0 || res == 0) throw Error(ErrorKind::ParseError, "incomplete header" + where);
      map.emplace(*cod, dims, res);
      continue;
    }
    const int d = map->dims();
    if (tok[0] == "fourier") {
      if (tok.size() != static_cast<std::size_t>(3 + d)) throw Error(ErrorKind::ParseError, "bad fourier entry" + where);
      const int k1 = detail::parse_int(tok[1]);
      const int k2 = d == 2 ? detail::parse_int(tok[2]) : 0;
      map->add_fourier(k1, k2, cplx(detail::parse_double(tok[1 + d]), detail::parse_double(tok[2 + d])));
    } else if (tok[0] == "grid") {
      const std::size_t base = 1 + static_cast<std::size_t>(d);
      if (tok.size() != base + 1 && tok.size() != base + 2) throw Error(ErrorKind::ParseError, "bad grid entry" + where);
      const int i = detail::parse_int(tok[1]);
      const int j = d == 2 ? detail::parse_int(tok[2]) : 0;
      const int n = map->resolution();
      if (i < 0 || i >= n || j < 0 || j >= (d == 2 ? n : 1)) throw Error(ErrorKind::ParseError, "grid index out of range" + where);
      const double re = detail::parse_double(tok[base]);
      const double im = tok.size() == base + 2 ? detail::parse_double(tok[base + 1]) : 0.0;
      map->set_grid(i, j, cplx(re, im));
    } else {
      throw Error(ErrorKind::ParseError, "unknown entry '" + tok[0] + "'" + where);
    }
  }
  if (!map) throw Error(ErrorKind::ParseError, "empty sampling map file");
  return *map;
}

}  // namespace uhlab

#endif  // UHLAB_SAMPLING_MAP_HPP
