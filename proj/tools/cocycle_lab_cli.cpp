// cocycle-lab: command-line front end over the shared-library C API.
//
// Subcommands: le, profile, bounds, sweep, verify, spectrum-scan.
// Exit codes: 0 ok, 1 bound/suite failure, 2 flag or config error,
// 3 unresolved profile, 4 internal error.

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cocycle_lab.h"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct CliTolerances {
  double slope = 0.1;
  double profile_slope = 0.15;
  double intercept = 0.05;
  double bound_slack_sigmas = 3.0;
  double bound_slack_abs = 0.02;
};

int apply_tolerance(CliTolerances& t, const std::string& kv) {
  const auto pos = kv.find('=');
  if (pos == std::string::npos) {
    std::cerr << "cocycle-lab: --tolerance expects KEY=VAL, got '" << kv << "'\n";
    return 2;
  }
  const std::string key = kv.substr(0, pos);
  double val;
  try {
    val = std::stod(kv.substr(pos + 1));
  } catch (...) {
    std::cerr << "cocycle-lab: bad tolerance value in '" << kv << "'\n";
    return 2;
  }
  if (key == "slope")
    t.slope = val;
  else if (key == "profile_slope")
    t.profile_slope = val;
  else if (key == "intercept")
    t.intercept = val;
  else if (key == "bound_slack_sigmas")
    t.bound_slack_sigmas = val;
  else if (key == "bound_slack_abs")
    t.bound_slack_abs = val;
  else {
    std::cerr << "cocycle-lab: unknown tolerance key '" << key << "'\n";
    return 2;
  }
  return 0;
}

int resolve_workers(int flagValue) {
  if (flagValue > 0) return flagValue;
  if (const char* env = std::getenv("COCYCLE_LAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 0; // library default: hardware concurrency
}

void warn_if_rational(double alpha) {
  for (int q = 1; q <= 1000; ++q) {
    const double p = std::round(alpha * q);
    if (std::abs(alpha - p / q) < 1e-12) {
      std::cerr << "cocycle-lab: warning: alpha = " << alpha
                << " looks rational (" << static_cast<long>(p) << "/" << q
                << "); the theory assumes irrational alpha\n";
      return;
    }
  }
}

int fail_status(const char* what, clab_status st) {
  std::cerr << "cocycle-lab: " << what << ": " << clab_status_name(st) << ": "
            << clab_last_error() << "\n";
  return (st == CLAB_ERR_INVALID_ARGUMENT || st == CLAB_ERR_DOMAIN) ? 2 : 4;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// scalar, comma list, or min:max:count range
std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double lo, hi;
    long count;
    char extra;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &count, &extra) != 3 ||
        count < 1)
      throw std::runtime_error("bad range '" + spec + "' (want min:max:count)");
    if (count == 1) {
      out.push_back(lo);
    } else {
      for (long i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    }
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
  }
  if (out.empty()) throw std::runtime_error("empty value list '" + spec + "'");
  return out;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << content;
    if (!f.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

json le_result_json(const clab_le_result& r) {
  json j;
  j["value"] = r.value;
  j["stdError"] = r.std_error;
  j["n"] = r.n;
  j["K"] = r.phases;
  return j;
}

// ----------------------------------------------------------------- le ----

struct PointFlags {
  double a1 = 0.0, a2 = 0.0, E = 0.0;
  double alpha = 0.0; // 0: golden mean
  double eps = 0.0, phaseOffset = 0.0;
  int64_t n = 100000;
  int32_t phases = 256;
  int workers = 0;

  clab_model model() const {
    return {a1, a2, E, alpha > 0.0 ? alpha : clab_golden_mean()};
  }
  clab_le_opts le_opts() const {
    return {n, phases, phaseOffset, resolve_workers(workers), 0};
  }
};

void add_point_flags(CLI::App* cmd, PointFlags& f, bool withEps = true) {
  cmd->add_option("--a1", f.a1, "first-harmonic coupling");
  cmd->add_option("--a2", f.a2, "second-harmonic coupling");
  cmd->add_option("--alpha", f.alpha, "frequency in (0,1); default golden mean");
  if (withEps) cmd->add_option("--eps", f.eps, "imaginary phase shift");
  cmd->add_option("--n", f.n, "orbit length")->check(CLI::PositiveNumber);
  cmd->add_option("--phases", f.phases, "phase-grid size K")->check(CLI::PositiveNumber);
  cmd->add_option("--phase-offset", f.phaseOffset, "phase grid offset");
  cmd->add_option("--workers", f.workers, "worker threads (default: all cores)");
}

int run_le(const PointFlags& f) {
  const clab_model m = f.model();
  warn_if_rational(m.alpha);
  const clab_le_opts o = f.le_opts();
  clab_le_result r;
  if (clab_status st = clab_le_estimate(&m, f.eps, &o, &r); st != CLAB_OK)
    return fail_status("le", st);
  std::cout << le_result_json(r).dump() << "\n";
  return 0;
}

// ------------------------------------------------------------- profile ----

struct ProfileFlags {
  PointFlags pt;
  double epsMax = 0.0; // 0: 3*eps0 when defined, else 1.0
  int32_t epsSteps = 24;
  std::string out;
  CliTolerances tol;
};

double default_eps_max(const clab_model& m) {
  double e0;
  if (clab_epsilon0(&m, &e0) == CLAB_OK) return 3.0 * e0;
  return 1.0;
}

int compute_profile(const clab_model& m, const ProfileFlags& f,
                    clab_profile** out) {
  clab_profile_opts po{};
  po.eps_max = f.epsMax > 0.0 ? f.epsMax : default_eps_max(m);
  po.grid_steps = f.epsSteps;
  po.le = f.pt.le_opts();
  po.integer_slope_tol = f.tol.slope;
  po.resolution_slope_tol = f.tol.profile_slope;
  po.intercept_tol = f.tol.intercept;
  if (clab_status st = clab_profile_compute(&m, &po, out); st != CLAB_OK)
    return fail_status("profile", st);
  return 0;
}

std::string profile_csv(const clab_profile* p) {
  std::string csv = "eps,le,stdError,slopeOver2pi,acceleration\n";
  const int32_t nodes = clab_profile_node_count(p);
  const int32_t gaps = clab_profile_gap_count(p);
  for (int32_t i = 0; i < nodes; ++i) {
    double eps, le, se;
    clab_profile_node(p, i, &eps, &le, &se);
    csv += fmt_double(eps) + "," + fmt_double(le) + "," + fmt_double(se) + ",";
    if (i < gaps) {
      double slope;
      int32_t accel, resolved;
      clab_profile_gap(p, i, &slope, &accel, &resolved);
      csv += fmt_double(slope) + ",";
      if (resolved) csv += std::to_string(accel);
    } else {
      csv += ",";
    }
    csv += "\n";
  }
  return csv;
}

int run_profile(const ProfileFlags& f) {
  const clab_model m = f.pt.model();
  warn_if_rational(m.alpha);
  clab_profile* p = nullptr;
  if (int rc = compute_profile(m, f, &p); rc != 0) return rc;
  const std::string csv = profile_csv(p);
  const clab_regime regime = clab_profile_regime(p);
  const clab_membership member = clab_profile_membership(p);
  clab_profile_free(p);
  if (f.out.empty())
    std::cout << csv;
  else
    write_file_atomic(f.out, csv);
  std::cerr << "profile: regime=" << clab_regime_name(regime)
            << " membership=" << clab_membership_name(member) << "\n";
  return regime == CLAB_REGIME_UNRESOLVED ? 3 : 0;
}

// -------------------------------------------------------------- bounds ----

json bounds_json(const clab_bounds_report& b) {
  json j;
  j["hermanBound"] = b.has_herman ? json(b.herman) : json(nullptr);
  j["theoremBound"] = b.has_theorem ? json(b.theorem) : json(nullptr);
  j["epsilon0"] = b.has_epsilon0 ? json(b.epsilon0) : json(nullptr);
  j["chosenDelta"] = b.chosen_delta == 0
                         ? json(nullptr)
                         : json(b.chosen_delta == 1 ? "eps0" : "2eps0");
  j["supDistance"] = b.chosen_delta == 0 ? json(nullptr) : json(b.sup_distance);
  if (b.has_measured) {
    json ml;
    ml["value"] = b.measured_le;
    ml["stdError"] = b.measured_std_error;
    j["measuredLE"] = ml;
    json margins;
    if (b.has_herman) margins["herman"] = b.herman_margin;
    if (b.has_theorem) margins["theorem"] = b.theorem_margin;
    j["margins"] = margins;
  } else {
    j["measuredLE"] = nullptr;
    j["margins"] = json::object();
  }
  return j;
}

int run_bounds(const PointFlags& f, bool measure, const CliTolerances& tol) {
  const clab_model m = f.model();
  clab_le_result le{};
  clab_le_result* lePtr = nullptr;
  if (measure) {
    const clab_le_opts o = f.le_opts();
    if (clab_status st = clab_le_estimate(&m, 0.0, &o, &le); st != CLAB_OK)
      return fail_status("bounds --measure", st);
    lePtr = &le;
  }
  clab_bounds_report rep;
  if (clab_status st = clab_bounds_evaluate(&m, lePtr, &rep); st != CLAB_OK)
    return fail_status("bounds", st);
  std::cout << bounds_json(rep).dump() << "\n";
  if (!measure) return 0;
  const double slack = tol.bound_slack_sigmas * le.std_error + tol.bound_slack_abs;
  bool ok = true;
  if (rep.has_herman && rep.herman_margin + slack < 0.0) ok = false;
  if (rep.has_theorem && rep.theorem_margin + slack < 0.0) ok = false;
  return ok ? 0 : 1;
}

// -------------------------------------------------------------- verify ----

json oracle_json(const clab_oracle_report& r) {
  json j;
  j["suite"] = r.name;
  j["trials"] = r.trials;
  j["worstCaseMargin"] = r.worst_margin;
  json input = json::array();
  for (int32_t i = 0; i < r.worst_input_len; ++i) input.push_back(r.worst_input[i]);
  j["worstCaseInput"] = input;
  j["passed"] = r.passed != 0;
  return j;
}

int run_verify(const std::string& suite, uint64_t seed, int workers,
               int64_t quantN, int32_t quantK) {
  std::vector<clab_suite> suites;
  if (suite == "lemma31")
    suites = {CLAB_SUITE_LEMMA31};
  else if (suite == "ellipse")
    suites = {CLAB_SUITE_ELLIPSE};
  else if (suite == "jensen")
    suites = {CLAB_SUITE_JENSEN};
  else if (suite == "quantization")
    suites = {CLAB_SUITE_QUANTIZATION};
  else if (suite == "all")
    suites = {CLAB_SUITE_LEMMA31, CLAB_SUITE_ELLIPSE, CLAB_SUITE_JENSEN,
              CLAB_SUITE_QUANTIZATION};
  else {
    std::cerr << "cocycle-lab: unknown suite '" << suite
              << "' (want lemma31|ellipse|jensen|quantization|all)\n";
    return 2;
  }
  bool allPassed = true;
  for (clab_suite s : suites) {
    clab_oracle_opts o{};
    o.seed = seed;
    o.workers = resolve_workers(workers);
    o.le_n = quantN;
    o.le_phases = quantK;
    clab_oracle_report rep;
    if (clab_status st = clab_oracle_run(s, &o, &rep); st != CLAB_OK)
      return fail_status("verify", st);
    std::cout << oracle_json(rep).dump() << "\n";
    allPassed = allPassed && rep.passed;
  }
  return allPassed ? 0 : 1;
}

// --------------------------------------------------------------- sweep ----

struct SweepPlan {
  std::vector<double> a1, a2, E, eps{0.0};
  double alpha = 0.0; // 0: golden
  int64_t n = 100000;
  int32_t phases = 256;
  uint64_t seed = 0;
  double phaseOffset = 0.0;
  bool profile = false;
  CliTolerances tol;
};

int parse_sweep_config(const std::string& path, SweepPlan& plan) {
  std::ifstream f(path);
  if (!f) {
    std::cerr << "cocycle-lab: sweep: cannot open config '" << path << "'\n";
    return 2;
  }
  std::string line;
  int lineno = 0;
  bool haveA1 = false, haveA2 = false, haveE = false;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto notSpace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notSpace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notSpace).base(), line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "cocycle-lab: sweep config line " << lineno
                << ": expected key = value\n";
      return 2;
    }
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notSpace).base(), key.end());
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notSpace));
    try {
      if (key == "a1") {
        plan.a1 = parse_values(val);
        haveA1 = true;
      } else if (key == "a2") {
        plan.a2 = parse_values(val);
        haveA2 = true;
      } else if (key == "E") {
        plan.E = parse_values(val);
        haveE = true;
      } else if (key == "eps") {
        plan.eps = parse_values(val);
      } else if (key == "alpha") {
        plan.alpha = std::stod(val);
      } else if (key == "n") {
        plan.n = std::stoll(val);
      } else if (key == "phases") {
        plan.phases = std::stoi(val);
      } else if (key == "seed") {
        plan.seed = std::stoull(val);
      } else if (key == "phase_offset") {
        plan.phaseOffset = std::stod(val);
      } else if (key == "profile") {
        plan.profile = (val == "on" || val == "true" || val == "1");
      } else if (key.rfind("tolerance.", 0) == 0) {
        if (int rc = apply_tolerance(plan.tol, key.substr(10) + "=" + val); rc != 0)
          return rc;
      } else {
        std::cerr << "cocycle-lab: sweep config: unknown key '" << key << "'\n";
        return 2;
      }
    } catch (const std::exception& e) {
      std::cerr << "cocycle-lab: sweep config key '" << key << "': " << e.what()
                << "\n";
      return 2;
    }
  }
  if (!haveA1 || !haveA2 || !haveE) {
    std::cerr << "cocycle-lab: sweep config must set a1, a2 and E\n";
    return 2;
  }
  if (plan.n < 1000) {
    std::cerr << "cocycle-lab: sweep: n must be >= 1000\n";
    return 2;
  }
  if (plan.n < 10000)
    std::cerr << "cocycle-lab: warning: n = " << plan.n
              << " is below 10000; estimates will be coarse\n";
  const double cells = static_cast<double>(plan.a1.size()) * plan.a2.size() *
                       plan.E.size() * plan.eps.size();
  if (cells > 1e7) {
    std::cerr << "cocycle-lab: sweep: " << cells << " cells exceed the 1e7 limit\n";
    return 2;
  }
  return 0;
}

int run_sweep(const std::string& configPath, const std::string& outDir,
              int workersFlag) {
  SweepPlan plan;
  if (int rc = parse_sweep_config(configPath, plan); rc != 0) return rc;
  const double alpha = plan.alpha > 0.0 ? plan.alpha : clab_golden_mean();
  warn_if_rational(alpha);
  const int workers = resolve_workers(workersFlag);

  std::error_code ec;
  fs::create_directories(outDir, ec);
  if (ec) {
    std::cerr << "cocycle-lab: sweep: cannot create out dir: " << ec.message()
              << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string csv =
      "a1,a2,E,eps,le,stdError,hermanBound,theoremBound,epsilon0,chosenDelta,"
      "hermanMargin,theoremMargin,regime,membership\n";
  long cells = 0, hermanApplicable = 0, hermanViolations = 0;
  long theoremApplicable = 0, theoremViolations = 0;
  std::optional<double> worstHerman, worstTheorem;

  for (double a1 : plan.a1) {
    for (double a2 : plan.a2) {
      for (double E : plan.E) {
        const clab_model m{a1, a2, E, alpha};
        clab_bounds_report bounds;
        if (clab_status st = clab_bounds_evaluate(&m, nullptr, &bounds);
            st != CLAB_OK)
          return fail_status("sweep bounds", st);

        std::string regime = "NA", membership = "NA";
        if (plan.profile) {
          ProfileFlags pf;
          pf.pt.a1 = a1;
          pf.pt.a2 = a2;
          pf.pt.E = E;
          pf.pt.alpha = alpha;
          pf.pt.phaseOffset = plan.phaseOffset;
          pf.pt.n = plan.n;
          pf.pt.phases = plan.phases;
          pf.pt.workers = workers;
          pf.tol = plan.tol;
          clab_profile* p = nullptr;
          if (int rc = compute_profile(m, pf, &p); rc != 0) return rc;
          regime = clab_regime_name(clab_profile_regime(p));
          membership = clab_membership_name(clab_profile_membership(p));
          clab_profile_free(p);
        }

        for (double eps : plan.eps) {
          const clab_le_opts o{plan.n, plan.phases, plan.phaseOffset, workers, 0};
          clab_le_result le;
          if (clab_status st = clab_le_estimate(&m, eps, &o, &le); st != CLAB_OK)
            return fail_status("sweep le", st);
          ++cells;
          const double slack =
              plan.tol.bound_slack_sigmas * le.std_error + plan.tol.bound_slack_abs;
          std::string hermanMargin, theoremMargin;
          if (bounds.has_herman) {
            const double margin = le.value - bounds.herman;
            hermanMargin = fmt_double(margin);
            ++hermanApplicable;
            if (margin + slack < 0.0) ++hermanViolations;
            if (!worstHerman || margin < *worstHerman) worstHerman = margin;
          }
          if (bounds.has_theorem) {
            const double margin = le.value - bounds.theorem;
            theoremMargin = fmt_double(margin);
            ++theoremApplicable;
            if (margin + slack < 0.0) ++theoremViolations;
            if (!worstTheorem || margin < *worstTheorem) worstTheorem = margin;
          }
          csv += fmt_double(a1) + "," + fmt_double(a2) + "," + fmt_double(E) +
                 "," + fmt_double(eps) + "," + fmt_double(le.value) + "," +
                 fmt_double(le.std_error) + ",";
          csv += (bounds.has_herman ? fmt_double(bounds.herman) : std::string()) + ",";
          csv += (bounds.has_theorem ? fmt_double(bounds.theorem) : std::string()) + ",";
          csv += (bounds.has_epsilon0 ? fmt_double(bounds.epsilon0) : std::string()) + ",";
          csv += bounds.chosen_delta == 0
                     ? ""
                     : (bounds.chosen_delta == 1 ? "eps0" : "2eps0");
          csv += "," + hermanMargin + "," + theoremMargin + "," + regime + "," +
                 membership + "\n";
        }
      }
    }
  }
  const double wallSec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json summary;
  summary["cells"] = cells;
  summary["hermanApplicable"] = hermanApplicable;
  summary["hermanViolations"] = hermanViolations;
  summary["theoremApplicable"] = theoremApplicable;
  summary["theoremViolations"] = theoremViolations;
  summary["worstHermanMargin"] = worstHerman ? json(*worstHerman) : json(nullptr);
  summary["worstTheoremMargin"] = worstTheorem ? json(*worstTheorem) : json(nullptr);
  summary["seed"] = plan.seed;
  summary["passed"] = theoremViolations == 0;

  write_file_atomic(fs::path(outDir) / "cells.csv", csv);
  write_file_atomic(fs::path(outDir) / "summary.json", summary.dump(2) + "\n");
  std::cerr << "sweep: " << cells << " cells in " << wallSec << " s -> " << outDir
            << "\n";
  return theoremViolations == 0 ? 0 : 1;
}

// ------------------------------------------------------- spectrum-scan ----

int run_spectrum_scan(const ProfileFlags& base, const std::string& eSpec,
                      const std::string& out) {
  std::vector<double> energies;
  try {
    energies = parse_values(eSpec);
  } catch (const std::exception& e) {
    std::cerr << "cocycle-lab: spectrum-scan --E: " << e.what() << "\n";
    return 2;
  }
  std::string csv = "E,le0,regime,membership\n";
  for (double E : energies) {
    ProfileFlags f = base;
    f.pt.E = E;
    const clab_model m = f.pt.model();
    clab_profile* p = nullptr;
    if (int rc = compute_profile(m, f, &p); rc != 0) return rc;
    double eps0node, le0, se0;
    clab_profile_node(p, 0, &eps0node, &le0, &se0);
    csv += fmt_double(E) + "," + fmt_double(le0) + "," +
           clab_regime_name(clab_profile_regime(p)) + "," +
           clab_membership_name(clab_profile_membership(p)) + "\n";
    clab_profile_free(p);
  }
  if (out.empty())
    std::cout << csv;
  else
    write_file_atomic(out, csv);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Lyapunov exponents of the "
               "two-harmonic Harper cocycle"};
  app.require_subcommand(1);
  std::vector<std::string> tolFlags;

  PointFlags leF;
  auto* cmdLe = app.add_subcommand("le", "Lyapunov exponent at one point");
  cmdLe->add_option("--E", leF.E, "spectral parameter");
  add_point_flags(cmdLe, leF);

  ProfileFlags prF;
  auto* cmdProfile =
      app.add_subcommand("profile", "eps |-> L(eps) profile with regime");
  cmdProfile->add_option("--E", prF.pt.E, "spectral parameter");
  add_point_flags(cmdProfile, prF.pt, false);
  cmdProfile->add_option("--eps-max", prF.epsMax,
                         "profile upper end (default 3*eps0 or 1.0)");
  cmdProfile->add_option("--eps-steps", prF.epsSteps, "initial grid gaps")
      ->check(CLI::Range(8, 100000));
  cmdProfile->add_option("--out", prF.out, "CSV output file (default stdout)");
  cmdProfile->add_option("--tolerance", tolFlags, "KEY=VAL override")
      ->take_all();

  PointFlags boF;
  bool measure = false;
  auto* cmdBounds = app.add_subcommand("bounds", "closed-form lower bounds");
  cmdBounds->add_option("--E", boF.E, "spectral parameter");
  add_point_flags(cmdBounds, boF, false);
  cmdBounds->add_flag("--measure", measure, "also measure L and report margins");
  cmdBounds->add_option("--tolerance", tolFlags, "KEY=VAL override")->take_all();

  std::string sweepConfig, sweepOut;
  int sweepWorkers = 0;
  auto* cmdSweep = app.add_subcommand("sweep", "parameter-grid sweep from config");
  cmdSweep->add_option("--config", sweepConfig, "key = value plan file")
      ->required();
  cmdSweep->add_option("--out", sweepOut, "output directory")->required();
  cmdSweep->add_option("--workers", sweepWorkers, "worker threads");

  std::string suite = "all";
  uint64_t verifySeed = 0;
  int verifyWorkers = 0;
  int64_t verifyN = 0;
  int32_t verifyK = 0;
  auto* cmdVerify = app.add_subcommand("verify", "brute-force oracle suites");
  cmdVerify->add_option("--suite", suite,
                        "lemma31|ellipse|jensen|quantization|all");
  cmdVerify->add_option("--seed", verifySeed, "oracle seed");
  cmdVerify->add_option("--workers", verifyWorkers, "worker threads");
  cmdVerify->add_option("--n", verifyN, "quantization suite orbit length");
  cmdVerify->add_option("--phases", verifyK, "quantization suite phase count");

  ProfileFlags scanF;
  std::string scanE, scanOut;
  auto* cmdScan = app.add_subcommand(
      "spectrum-scan", "profile + membership over an E range");
  add_point_flags(cmdScan, scanF.pt, false);
  cmdScan->add_option("--E", scanE, "energies: list a,b,c or min:max:count")
      ->required();
  cmdScan->add_option("--eps-max", scanF.epsMax, "profile upper end");
  cmdScan->add_option("--eps-steps", scanF.epsSteps, "initial grid gaps")
      ->check(CLI::Range(8, 100000));
  cmdScan->add_option("--out", scanOut, "CSV output file (default stdout)");
  cmdScan->add_option("--tolerance", tolFlags, "KEY=VAL override")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cocycle-lab: " << e.what() << "\n";
    std::cerr << "run 'cocycle-lab --help' for usage\n";
    return 2;
  }

  CliTolerances tol;
  for (const auto& kv : tolFlags)
    if (int rc = apply_tolerance(tol, kv); rc != 0) return rc;

  try {
    if (cmdLe->parsed()) return run_le(leF);
    if (cmdProfile->parsed()) {
      prF.tol = tol;
      return run_profile(prF);
    }
    if (cmdBounds->parsed()) return run_bounds(boF, measure, tol);
    if (cmdSweep->parsed()) return run_sweep(sweepConfig, sweepOut, sweepWorkers);
    if (cmdVerify->parsed())
      return run_verify(suite, verifySeed, verifyWorkers, verifyN, verifyK);
    if (cmdScan->parsed()) {
      scanF.tol = tol;
      return run_spectrum_scan(scanF, scanE, scanOut);
    }
  } catch (const std::exception& e) {
    std::cerr << "cocycle-lab: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
