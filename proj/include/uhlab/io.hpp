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

// JSON and CSV encodings of certificates, scans and pipeline results.
// Requires nlohmann/json. Objects keep insertion order and non-finite
// numbers become null, so identical runs serialize to identical bytes.

#ifndef UHLAB_IO_HPP
#define UHLAB_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "uhlab/cmv_perturbation.hpp"
#include "uhlab/jacobi_projection.hpp"
#include "uhlab/spectral_scan.hpp"

namespace uhlab::io {

using Json = nlohmann::ordered_json;

inline Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const UHCertificate& c) {
  Json samples = Json::array();
  for (const auto& g : c.growth_samples) samples.push_back({{"n", g.n}, {"log_min_norm", number(g.log_min_norm)}});
  return {{"verdict", to_string(c.verdict)},
          {"witness_n", c.witness_n},
          {"min_norm", number(c.min_norm)},
          {"margin", number(c.margin)},
          {"growth_rate", number(c.growth_rate)},
          {"grid_resolution", c.grid_resolution},
          {"grid_size", c.grid_size},
          {"reason", c.reason},
          {"growth_samples", samples}};
}

inline Json to_json(const GapReport& g) {
  Json arr = Json::array();
  for (const auto& x : g.gaps) arr.push_back({{"lo", number(x.lo)}, {"hi", number(x.hi)}, {"width", number(x.width)}});
  return {{"gaps", arr}, {"undetermined_count", g.undetermined_count}, {"all_uh", g.all_uh}};
}

inline Json to_json(const ConsistencyReport& r) {
  return {{"delta", r.delta},
          {"eigenvalues", r.eigen.size()},
          {"max_distance_all", number(r.max_distance_all)},
          {"max_distance_bulk", number(r.max_distance_bulk)},
          {"boundary_states", r.edge_states},
          {"boundary_mass_threshold", kEdgeMassThreshold},
          {"consistent_bulk", r.consistent},
          {"consistent_all", r.max_distance_all <= r.delta}};
}

inline Json to_json(const SupportBox& b) {
  Json lo = Json::array(), w = Json::array();
  for (int i = 0; i < b.dim(); ++i) {
    lo.push_back(b.lo(i));
    w.push_back(b.width(i));
  }
  return {{"lo", lo}, {"width", w}};
}

inline Json log_json(const std::vector<std::string>& log) {
  Json a = Json::array();
  for (const auto& l : log) a.push_back(l);
  return a;
}

inline Json to_json(const PerturbationResult& r) {
  const auto& d = r.distances;
  const auto& q = r.residuals;
  return {{"found", r.found},
          {"stage", r.stage},
          {"nudged", r.nudged},
          {"distances",
           {{"nudge", number(d.nudge)},
            {"a_b", number(d.ab)},
            {"b_bprime", number(d.bbp)},
            {"bprime_bdoubleprime", number(d.bpbpp)},
            {"a_bdoubleprime", number(d.abpp)},
            {"triangle_slack", number(d.ab + d.bbp + d.bpbpp - d.abpp)},
            {"final", number(r.final_distance)},
            {"map", number(r.map_distance)}}},
          {"residuals",
           {{"eq1", number(q.eq1)},
            {"sprime", number(q.sprime)},
            {"beta_roundtrip", number(q.beta_roundtrip)},
            {"unitary_isometry", number(q.unitary_isometry)},
            {"frame_t", number(q.frame_t)},
            {"frame_column", number(q.frame_column)},
            {"frame_omega", number(q.frame_omega)}}},
          {"epsilon_range", {number(r.eps_min), number(r.eps_max)}},
          {"seek_epsilon", number(r.seek_epsilon)},
          {"section_depth", r.depth},
          {"retries", r.retries},
          {"certificates",
           {{"input", to_json(r.cert_a)},
            {"b", to_json(r.cert_b)},
            {"bdoubleprime", to_json(r.cert_bpp)},
            {"final", to_json(r.cert_final)}}},
          {"log", log_json(r.log)}};
}

inline Json to_json(const JacobiPerturbationResult& r) {
  return {{"found", r.found},
          {"stage", r.stage},
          {"nudged", r.nudged},
          {"distances",
           {{"nudge", number(r.nudge_distance)},
            {"a_b", number(r.distance_ab)},
            {"a_phi", number(r.distance_phi)},
            {"final", number(r.final_distance)},
            {"map", number(r.map_distance)}}},
          {"residuals",
           {{"triple", number(r.triple_residual)},
            {"conjugacy", number(r.conjugacy_residual)},
            {"outside", number(r.outside_residual)}}},
          {"seek_epsilon", number(r.seek_epsilon)},
          {"retries", r.retries},
          {"certificates",
           {{"input", to_json(r.cert_a)},
            {"b", to_json(r.cert_b)},
            {"phi", to_json(r.cert_phi)},
            {"final", to_json(r.cert_final)}}},
          {"log", log_json(r.log)}};
}

inline Json to_json(const ProjectionResult& r, const SupportBox& box, double E) {
  return {{"residuals", {{"triple", number(r.triple_residual)}, {"conjugacy", number(r.conjugacy_residual)}}},
          {"distance", number(r.distance_to_a)},
          {"K_box", to_json(box)},
          {"E", E}};
}

/// Shortest round-trip decimal form, as used for CSV cells.
inline std::string fmt(double v) {
  if (!std::isfinite(v)) return v != v ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::ConfigInvalid, "cannot write " + path);
  os << text;
}

inline void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

/// value, verdict, witness_n, min_norm, margin per scan row.
inline std::string scan_csv(const SpectralScan& s) {
  std::string out = s.axis == ScanAxis::Circle ? "psi" : "E";
  out += ",verdict,witness_n,min_norm,margin\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& c = s.certificates[i];
    out += fmt(s.values[i]) + "," + to_string(c.verdict) + "," + std::to_string(c.witness_n) + "," + fmt(c.min_norm) +
           "," + fmt(c.margin) + "\n";
  }
  return out;
}

}  // namespace uhlab::io

#endif  // UHLAB_IO_HPP
