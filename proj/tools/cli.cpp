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

#include "cli.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace uhlab::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) invalid("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<double> numbers(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  std::vector<double> out;
  for (std::string tok; is >> tok;) {
    try {
      out.push_back(detail::parse_double(tok));
    } catch (const Error&) {
      invalid(key + ": not a number '" + tok + "'");
    }
  }
  if (out.empty()) invalid(key + ": missing value");
  return out;
}

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model", {"kind", "dynamics", "alpha", "alpha2", "a", "a_file", "b", "b_file", "f", "f_file", "param"}},
    {"uh", {"n_max", "gamma", "collapse", "grid_resolution", "refine"}},
    {"scan", {"lo", "hi", "step"}},
    {"truncate", {"size", "base_points", "boundary_phase", "delta"}},
    {"pipeline", {"support_lo", "support_width", "eps_target", "budget", "max_retries", "map_resolution", "seed"}},
};

struct Reader {
  const std::map<std::string, std::map<std::string, std::string>>& values;

  std::optional<std::string> get(const std::string& sec, const std::string& key) const {
    const auto s = values.find(sec);
    if (s == values.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }
  double real(const std::string& sec, const std::string& key, double fallback) const {
    const auto v = get(sec, key);
    if (!v) return fallback;
    const auto n = numbers(sec + "." + key, *v);
    if (n.size() != 1) invalid(sec + "." + key + ": expected one number");
    return n[0];
  }
  long integer(const std::string& sec, const std::string& key, long fallback) const {
    const double v = real(sec, key, static_cast<double>(fallback));
    if (v != std::floor(v)) invalid(sec + "." + key + ": expected an integer");
    return static_cast<long>(v);
  }
};

SamplingMap load_map(const Reader& r, const std::string& name, Codomain cod, int dims, const fs::path& base,
                     std::vector<InputFile>& inputs) {
  const auto inline_value = r.get("model", name);
  const auto file = r.get("model", name + "_file");
  if (inline_value && file) invalid("model." + name + " and model." + name + "_file are exclusive");
  if (file) {
    const fs::path p = fs::path(*file).is_absolute() ? fs::path(*file) : base / *file;
    const std::string text = read_file(p.string());
    inputs.push_back({*file, git_blob_sha1(text)});
    SamplingMap m = SamplingMap::from_text(text);
    if (m.codomain() != cod) invalid(name + "_file: wrong codomain");
    if (m.dims() != dims) invalid(name + "_file: dimension does not match the dynamics");
    return m;
  }
  if (!inline_value) invalid("model." + name + " is required");
  const auto v = numbers("model." + name, *inline_value);
  if (v.size() > 2 || (cod == Codomain::Real && v.size() != 1)) invalid("model." + name + ": bad constant");
  return SamplingMap::constant(cod, dims, cplx(v[0], v.size() == 2 ? v[1] : 0.0));
}

std::vector<BasePoint> parse_points(const std::string& text, int dim) {
  std::vector<BasePoint> out;
  std::istringstream is(text);
  for (std::string item; std::getline(is, item, ';');) {
    const auto c = numbers("truncate.base_points", item);
    if (static_cast<int>(c.size()) != dim) invalid("truncate.base_points: each point needs " + std::to_string(dim) + " coordinates");
    for (double x : c)
      if (!(x >= 0.0 && x < 1.0)) invalid("truncate.base_points: coordinates must lie in [0, 1)");
    out.push_back(dim == 1 ? BasePoint(c[0]) : BasePoint(c[0], c[1]));
  }
  return out;
}

std::vector<BasePoint> default_points(int dim) {
  std::vector<BasePoint> out;
  for (int k = 0; k < 5; ++k) {
    const double x = 0.1 + 0.17 * k, y = 0.3 + 0.11 * k;
    out.push_back(dim == 1 ? BasePoint(x) : BasePoint(x, y));
  }
  return out;
}

double param_of(const ExperimentConfig& cfg, const RunOptions& opt) {
  if (opt.param) return *opt.param;
  if (cfg.param) return *cfg.param;
  invalid("this command needs --param or model.param");
}

std::string model_label(const ExperimentConfig& cfg) { return cfg.kind + " over " + cfg.dynamics.describe(); }

UHParams uh_params(const ExperimentConfig& cfg, const RunOptions& opt) {
  UHParams p = cfg.scan_params.uh;
  p.threads = std::max(1, opt.threads);
  return p;
}

SpectralScan run_scan(const ExperimentConfig& cfg, const RunOptions& opt) {
  ScanParams sp = cfg.scan_params;
  sp.uh = uh_params(cfg, opt);
  if (cfg.kind == "jacobi") return scan_jacobi(cfg.a, cfg.b, cfg.dynamics, linear_grid(cfg.scan_lo, cfg.scan_hi, cfg.scan_step), sp);
  return scan_cmv(cfg.f, cfg.dynamics, circle_grid(cfg.scan_step), sp);
}

std::vector<TruncationSpectrum> run_truncations(const ExperimentConfig& cfg) {
  std::vector<TruncationSpectrum> out;
  for (const auto& x : cfg.base_points) {
    out.push_back(cfg.kind == "jacobi" ? truncation_jacobi(cfg.a, cfg.b, cfg.dynamics, x, cfg.truncation_size)
                                       : truncation_cmv(cfg.f, cfg.dynamics, x, cfg.truncation_size, cfg.boundary_phase));
  }
  return out;
}

Json point_json(const BasePoint& p) {
  Json a = Json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
  return a;
}

const char* kDisjointnessNote =
    "K is required to satisfy K n T(K) = 0 and K n T^2(K) = 0. A literal reading with T(X) in place of T(K) is "
    "impossible for a map of X onto itself, so the disjointness of K, T(K) and T^2(K) is what is checked.";

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, const RunOptions& opt, RunReport& rep)
      : cfg_(cfg), opt_(opt), rep_(rep), seed_(opt.seed ? *opt.seed : cfg.seed) {}

  void write(const std::string& name, const std::string& text) {
    io::write_text((fs::path(opt_.out_dir) / name).string(), text);
    rep_.outputs.push_back(name);
  }
  void write(const std::string& name, Json j) {
    Json head{{"command", rep_.command}, {"model", model_label(cfg_)}, {"seed", seed_}};
    head.update(j);
    write(name, head.dump(2) + "\n");
  }

  void scan() {
    const auto s = run_scan(cfg_, opt_);
    const auto g = gaps(s);
    write("scan.csv", io::scan_csv(s));
    Json gj = io::to_json(g);
    gj["axis"] = s.axis == ScanAxis::Circle ? "psi" : "E";
    gj["points"] = s.size();
    write("gaps.json", gj);
    rep_.summary = {{"points", s.size()}, {"gaps", g.gaps.size()}, {"undetermined", g.undetermined_count}};
  }

  void certify_cmd() {
    const double p = param_of(cfg_, opt_);
    const Cocycle c = cfg_.kind == "jacobi" ? Cocycle::jacobi(cfg_.dynamics, cfg_.a, cfg_.b, p)
                                            : Cocycle::szego(cfg_.dynamics, cfg_.f, UnitCirclePhase(p));
    const auto cert = certify(c, make_grid(cfg_.dynamics, cfg_.scan_params.grid_resolution), uh_params(cfg_, opt_));
    write("certificate.json", Json{{"param", p}, {"certificate", io::to_json(cert)}});
    rep_.summary = {{"param", p}, {"verdict", to_string(cert.verdict)}};
    if (cert.verdict == Verdict::Undetermined) {
      rep_.exit_code = kExitInconclusive;
      rep_.status = "undetermined";
    }
  }

  void perturb() {
    const double p = param_of(cfg_, opt_);
    if (cfg_.support.dim() != cfg_.dynamics.dim()) invalid("pipeline.support_lo/support_width are required");
    Json body{{"target", cfg_.kind}, {"param", p}, {"support", io::to_json(cfg_.support)}, {"eps_target", cfg_.eps_target}};
    bool found = false;
    if (cfg_.kind == "cmv") {
      CmvPipelineOptions o;
      o.uh = uh_params(cfg_, opt_);
      o.grid_resolution = cfg_.scan_params.grid_resolution;
      o.map_resolution = cfg_.map_resolution;
      o.eps_target = cfg_.eps_target;
      o.search_budget = cfg_.budget;
      o.max_retries = cfg_.max_retries;
      o.seed = seed_;
      const auto r = perturb_cmv(cfg_.f, cfg_.dynamics, UnitCirclePhase(p), cfg_.support, o);
      body["result"] = io::to_json(r);
      found = r.found;
      if (found) write("perturbed_map.txt", r.beta.to_text());
      rep_.summary = {{"found", r.found}, {"stage", r.stage}, {"final_distance", io::number(r.final_distance)},
                      {"final_verdict", to_string(r.cert_final.verdict)}};
    } else {
      rep_.notes.push_back(kDisjointnessNote);
      JacobiPipelineOptions o;
      o.uh = uh_params(cfg_, opt_);
      o.grid_resolution = cfg_.scan_params.grid_resolution;
      o.map_resolution = cfg_.map_resolution;
      o.eps_target = cfg_.eps_target;
      o.search_budget = cfg_.budget;
      o.max_retries = cfg_.max_retries;
      o.seed = seed_;
      const auto r = perturb_jacobi(cfg_.a, cfg_.b, p, cfg_.dynamics, cfg_.support, o);
      body["result"] = io::to_json(r);
      body["projection"] = {{"residuals", {{"triple", io::number(r.triple_residual)}, {"conjugacy", io::number(r.conjugacy_residual)}}},
                            {"distance", io::number(r.distance_phi)},
                            {"K_box", io::to_json(cfg_.support)},
                            {"E", p}};
      found = r.found;
      if (found) write("perturbed_map.txt", r.fb_out.to_text());
      rep_.summary = {{"found", r.found}, {"stage", r.stage}, {"final_distance", io::number(r.final_distance)},
                      {"final_verdict", to_string(r.cert_final.verdict)}};
    }
    write("perturbation.json", body);
    if (!found) {
      rep_.exit_code = kExitInconclusive;
      rep_.status = "not_found";
    }
  }

  void truncate() {
    const auto ts = run_truncations(cfg_);
    std::string csv = "base_point,index,value\n";
    for (std::size_t b = 0; b < ts.size(); ++b)
      for (std::size_t k = 0; k < ts[b].values.size(); ++k)
        csv += std::to_string(b) + "," + std::to_string(k) + "," + io::fmt(ts[b].values[k]) + "\n";
    write("truncation.csv", csv);
    Json pts = Json::array();
    for (const auto& x : cfg_.base_points) pts.push_back(point_json(x));
    write("truncation.json", Json{{"size", cfg_.truncation_size}, {"base_points", pts}, {"unitary", cfg_.kind == "cmv"},
                                  {"boundary_phase", cfg_.boundary_phase}});
    rep_.summary = {{"base_points", ts.size()}, {"size", cfg_.truncation_size}};
  }

  void compare() {
    const auto s = run_scan(cfg_, opt_);
    const auto ts = run_truncations(cfg_);
    const auto c = consistency(s, ts, cfg_.delta);
    std::string csv = "base_point,value,distance,boundary_mass,boundary_state\n";
    std::size_t k = 0;
    for (std::size_t b = 0; b < ts.size(); ++b)
      for (std::size_t i = 0; i < ts[b].values.size(); ++i, ++k) {
        const auto& e = c.eigen[k];
        csv += std::to_string(b) + "," + io::fmt(e.value) + "," + io::fmt(e.distance) + "," + io::fmt(e.boundary_mass) +
               "," + (e.edge_state ? "1" : "0") + "\n";
      }
    write("compare.csv", csv);
    write("compare.json", Json{{"size", cfg_.truncation_size}, {"base_points", ts.size()}, {"consistency", io::to_json(c)}});
    rep_.summary = {{"max_distance_all", io::number(c.max_distance_all)},
                    {"max_distance_bulk", io::number(c.max_distance_bulk)},
                    {"boundary_states", c.edge_states}};
  }

  void grid_dump() {
    const auto g = make_grid(cfg_.dynamics, cfg_.scan_params.grid_resolution);
    const bool with_matrix = opt_.param || cfg_.param;
    std::optional<Cocycle> c;
    if (with_matrix) {
      const double p = param_of(cfg_, opt_);
      c = cfg_.kind == "jacobi" ? Cocycle::jacobi(cfg_.dynamics, cfg_.a, cfg_.b, p)
                                : Cocycle::szego(cfg_.dynamics, cfg_.f, UnitCirclePhase(p));
    }
    std::string csv = g.dim == 2 ? "index,x,y" : "index,x";
    csv += cfg_.kind == "jacobi" ? ",a,b" : ",f_re,f_im";
    if (c) csv += ",m11,m12,m21,m22";
    csv += "\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& p = g.points[i];
      csv += std::to_string(i) + "," + io::fmt(p[0]);
      if (g.dim == 2) csv += "," + io::fmt(p[1]);
      if (cfg_.kind == "jacobi") {
        csv += "," + io::fmt(cfg_.a.real_value(p)) + "," + io::fmt(cfg_.b.real_value(p));
      } else {
        const cplx v = cfg_.f(p);
        csv += "," + io::fmt(v.real()) + "," + io::fmt(v.imag());
      }
      if (c) {
        const Mat2R m = (*c)(p);
        csv += "," + io::fmt(m.a11) + "," + io::fmt(m.a12) + "," + io::fmt(m.a21) + "," + io::fmt(m.a22);
      }
      csv += "\n";
    }
    write("grid.csv", csv);
    rep_.summary = {{"points", g.size()}, {"resolution", g.resolution}};
  }

  std::uint64_t seed() const { return seed_; }

 private:
  const ExperimentConfig& cfg_;
  const RunOptions& opt_;
  RunReport& rep_;
  std::uint64_t seed_;
};

}  // namespace

std::string git_blob_sha1(const std::string& contents) {
  const std::string head = "blob " + std::to_string(contents.size()) + std::string(1, '\0');
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) && EVP_DigestUpdate(ctx, head.data(), head.size()) &&
                  EVP_DigestUpdate(ctx, contents.data(), contents.size()) && EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg;
  cfg.path = path;
  const std::string text = read_file(path);
  cfg.sha1 = git_blob_sha1(text);
  boost::property_tree::ptree tree;
  try {
    std::istringstream is(text);
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    invalid(path + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& [sec, body] : tree) {
    const auto schema = kSchema.find(sec);
    if (schema == kSchema.end() || body.data() != "") invalid("unknown section [" + sec + "]");
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [key, val] : body) {
      if (!schema->second.count(key)) invalid("unknown key " + sec + "." + key);
      std::string v = val.get_value<std::string>();
      values[sec][key] = v;
      entries.emplace_back(key, v);
    }
    cfg.sections.emplace_back(sec, entries);
  }
  const Reader r{values};

  cfg.kind = r.get("model", "kind").value_or("");
  if (cfg.kind != "jacobi" && cfg.kind != "cmv") invalid("model.kind must be jacobi or cmv");
  const std::string dyn = r.get("model", "dynamics").value_or("rotation");
  const double alpha = r.real("model", "alpha", kGoldenFrequency);
  try {
    if (dyn == "rotation") cfg.dynamics = BaseDynamics::rotation(alpha);
    else if (dyn == "rotation2") cfg.dynamics = BaseDynamics::rotation2(alpha, r.real("model", "alpha2", std::sqrt(2.0) - 1.0));
    else if (dyn == "skew_shift") cfg.dynamics = BaseDynamics::skew_shift(alpha);
    else invalid("model.dynamics must be rotation, rotation2 or skew_shift");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    invalid(std::string("model.alpha: ") + e.what());
  }
  const int dim = cfg.dynamics.dim();
  const fs::path base = fs::path(path).parent_path();
  if (cfg.kind == "jacobi") {
    cfg.a = load_map(r, "a", Codomain::Real, dim, base, cfg.inputs);
    cfg.b = load_map(r, "b", Codomain::Real, dim, base, cfg.inputs);
    if (r.get("model", "f") || r.get("model", "f_file")) invalid("model.f is for cmv models");
    try {
      cfg.a.check_positive(1e-12);
    } catch (const Error& e) {
      invalid(std::string("model.a: ") + e.what());
    }
  } else {
    cfg.f = load_map(r, "f", Codomain::Disk, dim, base, cfg.inputs);
    for (const char* k : {"a", "a_file", "b", "b_file"})
      if (r.get("model", k)) invalid(std::string("model.") + k + " is for jacobi models");
    try {
      cfg.f.check_disk();
    } catch (const Error& e) {
      invalid(std::string("model.f: ") + e.what());
    }
  }
  if (r.get("model", "param")) cfg.param = r.real("model", "param", 0.0);

  auto& uh = cfg.scan_params.uh;
  uh.n_max = r.integer("uh", "n_max", uh.n_max);
  uh.gamma = r.real("uh", "gamma", uh.gamma);
  uh.collapse = r.real("uh", "collapse", uh.collapse);
  uh.refine = r.integer("uh", "refine", uh.refine ? 1 : 0) != 0;
  cfg.scan_params.grid_resolution = static_cast<int>(r.integer("uh", "grid_resolution", cfg.scan_params.grid_resolution));
  if (uh.n_max < 4) invalid("uh.n_max must be >= 4");
  if (!(uh.gamma > 1.0)) invalid("uh.gamma must exceed 1");
  if (!(uh.collapse > 0.0)) invalid("uh.collapse must be positive");
  if (cfg.scan_params.grid_resolution < 2) invalid("uh.grid_resolution must be >= 2");

  if (cfg.kind == "cmv" && (r.get("scan", "lo") || r.get("scan", "hi"))) invalid("cmv scans cover [0, 2 pi); drop scan.lo/scan.hi");
  cfg.scan_lo = r.real("scan", "lo", cfg.scan_lo);
  cfg.scan_hi = r.real("scan", "hi", cfg.scan_hi);
  cfg.scan_step = r.real("scan", "step", cfg.scan_step);
  if (!(cfg.scan_step > 0.0)) invalid("scan.step must be positive");
  if (!(cfg.scan_hi >= cfg.scan_lo)) invalid("scan.hi must be >= scan.lo");

  const long n = r.integer("truncate", "size", static_cast<long>(cfg.truncation_size));
  if (n < 1) invalid("truncate.size must be >= 1");
  cfg.truncation_size = static_cast<std::size_t>(n);
  const auto pts = r.get("truncate", "base_points");
  cfg.base_points = pts ? parse_points(*pts, dim) : default_points(dim);
  cfg.boundary_phase = r.real("truncate", "boundary_phase", 0.0);
  cfg.delta = r.real("truncate", "delta", cfg.delta);
  if (!(cfg.delta > 0.0)) invalid("truncate.delta must be positive");

  const auto lo = r.get("pipeline", "support_lo"), w = r.get("pipeline", "support_width");
  if (lo || w) {
    if (!lo || !w) invalid("pipeline.support_lo and pipeline.support_width go together");
    const auto l = numbers("pipeline.support_lo", *lo), ww = numbers("pipeline.support_width", *w);
    if (static_cast<int>(l.size()) != dim || static_cast<int>(ww.size()) != dim) invalid("pipeline.support_*: one value per dimension");
    try {
      cfg.support = SupportBox(dim, {l[0], dim == 2 ? l[1] : 0.0}, {ww[0], dim == 2 ? ww[1] : 1.0});
    } catch (const Error& e) {
      invalid(std::string("pipeline.support: ") + e.what());
    }
  }
  cfg.eps_target = r.real("pipeline", "eps_target", cfg.eps_target);
  cfg.budget = static_cast<int>(r.integer("pipeline", "budget", cfg.budget));
  cfg.max_retries = static_cast<int>(r.integer("pipeline", "max_retries", cfg.max_retries));
  cfg.map_resolution = static_cast<int>(r.integer("pipeline", "map_resolution", cfg.map_resolution));
  const long seed = r.integer("pipeline", "seed", static_cast<long>(cfg.seed));
  if (seed < 0) invalid("pipeline.seed must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);
  if (!(cfg.eps_target > 0.0)) invalid("pipeline.eps_target must be positive");
  if (cfg.budget < 1) invalid("pipeline.budget must be >= 1");
  if (cfg.max_retries < 0) invalid("pipeline.max_retries must be >= 0");
  if (cfg.map_resolution < 8) invalid("pipeline.map_resolution must be >= 8");
  return cfg;
}

RunReport run(const std::string& command, const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = command;
  rep.status = "ok";
  fs::create_directories(opt.out_dir);
  Runner runner(cfg, opt, rep);
  if (command == "scan") runner.scan();
  else if (command == "certify") runner.certify_cmd();
  else if (command == "perturb") runner.perturb();
  else if (command == "compare") runner.compare();
  else if (command == "truncate") runner.truncate();
  else if (command == "grid-dump") runner.grid_dump();
  else invalid("unknown command '" + command + "'");

  Json sections = Json::object();
  for (const auto& [sec, entries] : cfg.sections) {
    Json s = Json::object();
    for (const auto& [k, v] : entries) s[k] = v;
    sections[sec] = s;
  }
  Json inputs = Json::array();
  for (const auto& f : cfg.inputs) inputs.push_back({{"path", f.path}, {"git_blob_sha1", f.sha1}});
  Json outputs = Json::array();
  for (const auto& o : rep.outputs) outputs.push_back(o);
  outputs.push_back("report.json");
  Json notes = Json::array();
  for (const auto& n : rep.notes) notes.push_back(n);
  Json report{{"command", command},
              {"status", rep.status},
              {"exit_code", rep.exit_code},
              {"seed", runner.seed()},
              {"param", opt.param ? Json(*opt.param) : (cfg.param ? Json(*cfg.param) : Json(nullptr))},
              {"config", {{"path", cfg.path}, {"git_blob_sha1", cfg.sha1}, {"sections", sections}}},
              {"inputs", inputs},
              {"outputs", outputs},
              {"notes", notes},
              {"summary", rep.summary}};
  io::write_json((fs::path(opt.out_dir) / "report.json").string(), report);
  rep.outputs.push_back("report.json");
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace uhlab::cli
