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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "uhlab/cmv_perturbation.hpp"
#include "uhlab/jacobi_projection.hpp"
#include "uhlab/spectral_scan.hpp"

using namespace uhlab;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const fs::path kConfigs = fs::path(UHLAB_SOURCE_DIR) / "configs";

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "uhlab_acceptance" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

io::Json read_json(const fs::path& p) {
  std::ifstream is(p);
  return io::Json::parse(is);
}

cli::ExperimentConfig config(const std::string& name) { return cli::load_config((kConfigs / name).string()); }

// Verdict mismatches against an oracle, ignoring values within `tol` of an edge.
struct Mismatch {
  std::size_t count = 0;
  std::size_t undetermined = 0;
};

template <typename Oracle, typename EdgeDistance>
Mismatch compare_verdicts(const SpectralScan& s, Oracle&& in_spectrum, EdgeDistance&& edge_distance, double tol) {
  Mismatch m;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = s.values[i];
    if (s.verdict(i) == Verdict::Undetermined) ++m.undetermined;
    if (edge_distance(v) <= tol) continue;
    const bool uh = s.verdict(i) == Verdict::UH;
    if (uh == in_spectrum(v)) ++m.count;
  }
  return m;
}

// Free Jacobi operator: non-UH exactly on [-2, 2].
Outcome free_jacobi_spectrum() {
  Timer t;
  ScanParams prm;
  prm.grid_resolution = 64;
  prm.uh.n_max = 256;
  const auto dyn = BaseDynamics::rotation(kGoldenFrequency);
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  const auto zero = SamplingMap::constant(Codomain::Real, 1, 0.0);
  const auto s = scan_jacobi(one, zero, dyn, linear_grid(-3.0, 3.0, 1e-3), prm);
  const double secs = t.seconds();
  // constant cocycle: UH iff |trace| = |E| > 2
  const auto m = compare_verdicts(
      s, [](double E) { return std::abs(E) <= 2.0; }, [](double E) { return std::abs(std::abs(E) - 2.0); }, 2e-3);
  const auto g = gaps(s);
  double edge = 1.0;
  if (g.gaps.size() == 2) edge = std::max(std::abs(g.gaps[0].hi + 2.0), std::abs(g.gaps[1].lo - 2.0));
  Outcome o;
  o.pass = m.count == 0 && g.gaps.size() == 2 && edge <= 2e-3 && secs <= 60.0;
  o.detail = std::to_string(s.size()) + " energies, " + std::to_string(m.count) + " mismatches, " +
             std::to_string(m.undetermined) + " undetermined, " + std::to_string(g.gaps.size()) +
             " gaps, edge error " + num(edge) + ", " + num(secs) + " s";
  return o;
}

// Constant Verblunsky coefficient r: non-UH exactly where |sin(psi/2)| >= r.
Outcome constant_cmv_arcs() {
  Timer t;
  Outcome o;
  const auto dyn = BaseDynamics::rotation(kGoldenFrequency);
  ScanParams prm;
  prm.grid_resolution = 64;
  for (double r : {0.3, 0.5, 0.8}) {
    const auto f = SamplingMap::constant(Codomain::Disk, 1, cplx(r, 0.0));
    const auto s = scan_cmv(f, dyn, circle_grid(1e-3), prm);
    const double k = 1.0 / std::sqrt(1.0 - r * r);
    double trace_err = 0.0;
    for (double psi : s.values) {
      const double tr = to_sl2(szego_su11(UnitDiskPoint(r, 0.0), UnitCirclePhase(psi))).trace();
      trace_err = std::max(trace_err, std::abs(std::abs(tr) - 2.0 * k * std::abs(std::cos(psi / 2))));
    }
    const double e = 2.0 * std::asin(r);
    const auto m = compare_verdicts(
        s, [&](double psi) { return 2.0 * k * std::abs(std::cos(psi / 2)) <= 2.0; },
        [&](double psi) { return std::min(circle_distance(psi, e), circle_distance(psi, 2 * kPi - e)); }, 2e-3);
    const auto g = gaps(s);
    double edge = 1.0;
    if (g.gaps.size() == 1) {
      edge = std::max(circle_distance(g.gaps[0].hi, e), circle_distance(g.gaps[0].lo, 2 * kPi - e));
    }
    o.pass = o.pass && m.count == 0 && g.gaps.size() == 1 && edge <= 2e-3 && trace_err <= 1e-12;
    o.detail += "r=" + num(r) + ": " + std::to_string(m.count) + " mismatches, edge error " + num(edge) +
                ", trace error " + num(trace_err) + "; ";
  }
  o.detail += num(t.seconds()) + " s";
  return o;
}

// Truncation eigenvalues against the scan's non-UH set for the skew-shift models.
Outcome two_route_consistency() {
  Timer t;
  Outcome o;
  for (const char* name : {"skew_jacobi.ini", "skew_cmv.ini"}) {
    cli::RunOptions opt;
    opt.out_dir = scratch(std::string("compare_") + name).string();
    const auto rep = cli::run("compare", config(name), opt);
    const double all = rep.summary["max_distance_all"].get<double>();
    const double bulk = rep.summary["max_distance_bulk"].get<double>();
    const auto edge = rep.summary["boundary_states"].get<std::size_t>();
    o.pass = o.pass && all <= 1e-2;
    o.detail += std::string(name) + ": max distance " + num(all) + " (" + std::to_string(edge) +
                " boundary-localized eigenvalues; " + num(bulk) + " without them); ";
  }
  const double secs = t.seconds();
  o.pass = o.pass && secs <= 300.0;
  o.detail += num(secs) + " s";
  return o;
}

// Monotonicity, sign and limit laws for (h, g) on the (0.3, 0.8) annulus.
Outcome hg_laws() {
  const AnnulusSpec n(0.3, 0.8);
  std::vector<double> eps;
  for (int j = 0; j < 100; ++j) eps.push_back(n.eps_lo() + (n.eps_hi() - n.eps_lo()) * (j + 0.5) / 100);
  eps.push_back(1.0);
  std::sort(eps.begin(), eps.end());
  std::size_t violations = 0, samples = 0;
  double recon = 0.0, at_one = 0.0, limit = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = n.r1() + (n.r2() - n.r1()) * (i % 10) / 9.0;
    const double eta = -kPi + 2 * kPi * (i + 0.5) / 100;
    const Vec2 t = AnnulusSpec::rho_of(r) * Vec2{-std::cos(eta), std::sin(eta)};
    const double sign = t.y >= 0.0 ? 1.0 : -1.0;
    HG prev{-1.0, 0.0};
    for (std::size_t k = 0; k < eps.size(); ++k) {
      const double e = eps[k];
      const HG hg = h_g(t, e, n);
      ++samples;
      recon = std::max(recon, (target_vector(r, eta, e) - reconstruct_vector(hg.s, eta, hg.beta)).norm());
      if (e == 1.0) at_one = std::max({at_one, std::abs(hg.s - r), std::abs(hg.beta)});
      bool ok = true;
      if (e <= 1.0) ok = ok && hg.s <= r + 1e-15 && sign * hg.beta <= 1e-15;
      if (e >= 1.0) ok = ok && hg.s >= r - 1e-15 && sign * hg.beta >= -1e-15;
      if (k > 0) ok = ok && hg.s >= prev.s - 1e-15 && sign * (hg.beta - prev.beta) >= -1e-14;
      violations += ok ? 0 : 1;
      prev = hg;
    }
    for (double d : {1e-7, -1e-7}) {
      const HG hg = h_g(t, 1.0 + d, n);
      limit = std::max({limit, std::abs(hg.s - r), std::abs(hg.beta)});
    }
  }
  Outcome o;
  o.pass = violations == 0 && recon <= 1e-12 && at_one <= 1e-15 && limit <= 1e-6;
  o.detail = std::to_string(samples) + " samples, " + std::to_string(violations) + " law violations, reconstruction " +
             num(recon) + ", deviation at 1 " + num(at_one) + ", deviation at 1 +- 1e-7 " + num(limit);
  return o;
}

// Dressing of A inside the box scaled by bisection to sup distance `size` on the grid.
Cocycle dressed(const Cocycle& a, const SupportBox& box, std::uint64_t seed, int index, double size,
                const OrbitGrid& grid) {
  const auto shape =
      std::make_shared<const detail::DressingShape>(detail::dressing_shapes(index + 1, 2, 1, seed)[index]);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (c0_distance(a, dressed_cocycle(a, box, shape, mid), grid.points) < size ? lo : hi) = mid;
  }
  return dressed_cocycle(a, box, shape, lo);
}

Outcome projection_suite() {
  const auto dyn = BaseDynamics::rotation(kGoldenFrequency);
  const SupportBox box{1, {0.1, 0.0}, {0.2, 1.0}};
  const auto one = SamplingMap::constant(Codomain::Real, 1, 1.0);
  const auto zero = SamplingMap::constant(Codomain::Real, 1, 0.0);
  const double E = 3.0;
  const Cocycle a = Cocycle::jacobi(dyn, one, zero, E);
  const ProjectionDomain dom(dyn, box);
  const auto grid = make_grid(1, 256);

  double triple = 0.0, conj = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Cocycle b = dressed(a, box, 100 + static_cast<std::uint64_t>(trial), trial % 8, 1e-2, grid);
    const auto r = project({one, zero, E, b}, dom, grid.points);
    triple = std::max(triple, r.triple_residual);
    conj = std::max(conj, r.conjugacy_residual);
  }

  const auto fixed = project({one, zero, E, a}, dom, grid.points);
  bool exact = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Mat2R& p = fixed.psi[i];
    exact = exact && detail::same_matrix(fixed.phi(grid.points[i]), a(grid.points[i])) && p.a11 == 1.0 &&
            p.a12 == 0.0 && p.a21 == 0.0 && p.a22 == 1.0;
  }

  // b = E on K makes the trace of A vanish there
  const auto half = SamplingMap::constant(Codomain::Real, 1, 0.5);
  bool rejected = false;
  try {
    project({one, half, 0.5, Cocycle::jacobi(dyn, one, half, 0.5)}, dom, grid.points);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::PivotTooSmall;
  }

  Outcome o;
  o.pass = triple <= 1e-10 && conj <= 1e-10 && exact && rejected;
  o.detail = "20 perturbations: triple residual " + num(triple) + ", conjugacy residual " + num(conj) +
             "; fixed point exact: " + (exact ? "yes" : "no") + "; trace zero rejected: " + (rejected ? "yes" : "no");
  return o;
}

struct CmvRun {
  std::string name;
  SamplingMap f;
  BaseDynamics dyn;
  double psi;
  SupportBox box;
  CmvPipelineOptions opt;
};

CmvRun from_config(const std::string& name) {
  const auto cfg = config(name);
  CmvPipelineOptions o;
  o.uh = cfg.scan_params.uh;
  o.grid_resolution = cfg.scan_params.grid_resolution;
  o.map_resolution = cfg.map_resolution;
  o.eps_target = cfg.eps_target;
  o.search_budget = cfg.budget;
  o.max_retries = cfg.max_retries;
  o.seed = cfg.seed;
  return {name, cfg.f, cfg.dynamics, *cfg.param, cfg.support, o};
}

// Every successful CMV pipeline run: B'' identities and bookkeeping.
Outcome bdoubleprime_suite() {
  std::vector<CmvRun> runs;
  for (const char* name : {"constant_cmv.ini", "zero_cmv.ini", "skew_cmv.ini"}) runs.push_back(from_config(name));
  const auto circle = BaseDynamics::rotation(kGoldenFrequency);
  for (double r : {0.3, 0.5, 0.8}) {
    for (double inside : {0.005, 0.02}) {
      runs.push_back({"r=" + num(r) + " psi=edge+" + num(inside), SamplingMap::constant(Codomain::Disk, 1, cplx(r, 0.0)),
                      circle, 2.0 * std::asin(r) + inside, SupportBox{1, {0.2, 0.0}, {0.5, 1.0}}, CmvPipelineOptions{}});
    }
  }
  Outcome o;
  std::size_t succeeded = 0, rejected_bpp = 0;
  double eq1 = 0.0, sprime = 0.0, roundtrip = 0.0, slack = std::numeric_limits<double>::infinity();
  std::string failed;
  for (const auto& run : runs) {
    const auto r = perturb_cmv(run.f, run.dyn, UnitCirclePhase(run.psi), run.box, run.opt);
    for (const auto& line : r.log) {
      const bool attempt = line.find("B'' ") != std::string::npos;
      rejected_bpp += attempt && line.find("B'' UH,") == std::string::npos ? 1 : 0;
    }
    if (!r.found || r.stage != "done") {
      failed += " " + run.name;
      continue;
    }
    ++succeeded;
    const auto& d = r.distances;
    eq1 = std::max(eq1, r.residuals.eq1);
    sprime = std::max(sprime, r.residuals.sprime);
    roundtrip = std::max(roundtrip, r.residuals.beta_roundtrip);
    slack = std::min(slack, d.ab + d.bbp + d.bpbpp - d.abpp);
    o.pass = o.pass && r.cert_bpp.verdict == Verdict::UH;
  }
  o.pass = o.pass && succeeded > 0 && eq1 <= 1e-8 && sprime <= 1e-12 && roundtrip <= 1e-10 && slack >= -1e-12;
  o.detail = std::to_string(succeeded) + "/" + std::to_string(runs.size()) + " runs found a gap; eq1 " + num(eq1) +
             ", S' residual " + num(sprime) + ", round trip " + num(roundtrip) + ", triangle slack " + num(slack) +
             ", non-UH B'' attempts retried " + std::to_string(rejected_bpp);
  if (!failed.empty()) o.detail += "; no gap:" + failed;
  return o;
}

// cmd perturb on non-UH parameters of both model families.
Outcome gap_opening() {
  struct Case {
    std::string config;
    std::optional<double> param;
  };
  const std::vector<Case> cases{{"free_jacobi.ini", 1.999},
                                {"free_jacobi.ini", -1.999},
                                {"skew_jacobi.ini", {}},
                                {"constant_cmv.ini", {}},
                                {"skew_cmv.ini", {}}};
  Outcome o;
  for (const auto& c : cases) {
    cli::RunOptions opt;
    opt.param = c.param;
    opt.out_dir = scratch("perturb").string();
    const auto cfg = config(c.config);
    const auto rep = cli::run("perturb", cfg, opt);
    const auto res = read_json(fs::path(opt.out_dir) / "perturbation.json")["result"];
    const std::string input = res["certificates"]["input"]["verdict"].get<std::string>();
    const bool found = res["found"].get<bool>();
    const double dist = found ? res["distances"]["final"].get<double>() : -1.0;
    const std::string final_verdict = res["certificates"]["final"]["verdict"].get<std::string>();
    const bool ok = input != "UH" && found && final_verdict == "UH" && dist <= 0.1 &&
                    fs::exists(fs::path(opt.out_dir) / "perturbed_map.txt") && rep.exit_code == cli::kExitOk;
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += c.config + " at " + num(c.param.value_or(*cfg.param), 6) + ": input " + input + ", " +
                (found ? "UH at distance " + num(dist) : "not found");
  }
  return o;
}

Outcome algebraic_invariants() {
  Timer t;
  constexpr int kCount = 10000;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto disk = [&] { return UnitDiskPoint(0.95 * u(rng), 2 * kPi * u(rng)); };
  auto phase = [&] { return UnitCirclePhase(2 * kPi * u(rng)); };
  double su11 = 0.0, det = 0.0, hom = 0.0, refl = 0.0, law = 0.0, inv = 0.0;
  for (int i = 0; i < kCount; ++i) {
    const auto m1 = szego_su11(disk(), phase());
    const auto m2 = szego_su11(disk(), phase());
    su11 = std::max(su11, su11_residual(m1));
    det = std::max({det, std::abs(m1.det() - 1.0), std::abs(to_sl2(m1).det() - 1.0)});
    hom = std::max(hom, max_abs(to_sl2(m1 * m2) - to_sl2(m1) * to_sl2(m2)));
    const double th = 4 * kPi * (u(rng) - 0.5), g = 4 * kPi * (u(rng) - 0.5);
    refl = std::max(refl, max_abs(reflection(th) * rotation(g) - reflection(th + g)));
  }

  const auto skew = BaseDynamics::skew_shift(kGoldenFrequency);
  auto fa = SamplingMap::constant(Codomain::Real, 2, 1.0);
  fa.add_fourier(0, 1, 0.1);
  fa.add_fourier(0, -1, 0.1);
  SamplingMap fb(Codomain::Real, 2, 64);
  fb.add_fourier(1, 0, 1.0);
  SamplingMap ff(Codomain::Disk, 2, 64);
  ff.add_fourier(1, 0, 0.5);
  const std::vector<Cocycle> models{Cocycle::jacobi(skew, fa, fb, 1.3), Cocycle::szego(skew, ff, UnitCirclePhase(1.0))};
  std::uniform_int_distribution<long> steps(-25, 25), len(1, 50);
  for (int i = 0; i < kCount; ++i) {
    const Cocycle& c = models[static_cast<std::size_t>(i % 2)];
    const BasePoint x(u(rng), u(rng));
    const long n = steps(rng), m = steps(rng);
    const Mat2R lhs = iterate(c, x, m + n);
    const Mat2R rhs = iterate(c, skew.power(x, n), m) * iterate(c, x, n);
    law = std::max(law, max_abs(lhs - rhs) / std::max(1.0, max_abs(lhs)));
    const long k = len(rng);
    const Mat2R fwd = iterate(c, x, k);
    const Mat2R id = fwd * iterate(c, skew.power(x, k), -k);
    const double scale = std::max(1.0, op_norm(fwd) * op_norm(fwd));
    inv = std::max(inv, max_abs(id - Mat2R::identity()) / scale);
  }
  const double secs = t.seconds();
  Outcome o;
  o.pass = su11 <= 1e-12 && det <= 1e-12 && hom <= 1e-11 && refl <= 1e-14 && law <= 1e-10 && inv <= 1e-10 &&
           secs <= 30.0;
  o.detail = "SU(1,1) " + num(su11) + ", det " + num(det) + ", homomorphism " + num(hom) + ", reflection " +
             num(refl) + ", cocycle law " + num(law) + ", inverse identity " + num(inv) + "; " + num(secs) + " s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"free Jacobi spectrum", free_jacobi_spectrum},
      {"constant Verblunsky arcs", constant_cmv_arcs},
      {"two-route consistency", two_route_consistency},
      {"h/g laws", hg_laws},
      {"projection suite", projection_suite},
      {"B'' suite", bdoubleprime_suite},
      {"gap opening", gap_opening},
      {"algebraic invariants", algebraic_invariants},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
