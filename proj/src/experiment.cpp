#include "shearflow/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "shearflow/forcing.hpp"
#include "shearflow/io.hpp"
#include "shearflow/ops.hpp"
#include "shearflow/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace shearflow {

std::string version_string() { return "shearflow 0.1.0"; }

namespace {

[[noreturn]] void config_fail(const std::string& msg) {
  throw ConfigError("config error: " + msg);
}

template <class T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) config_fail("missing required key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_fail("bad value for '" + key + "': " + e.what());
  }
}

template <class T>
T optional_key(const json& j, const std::string& key, T def) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    config_fail("bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // report line and column from the byte offset
    size_t line = 1, col = 1;
    for (size_t i = 0; i < std::min(text.size(), (size_t)e.byte); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    config_fail("parse failure at line " + std::to_string(line) + ", column " +
                std::to_string(col) + ": " + e.what());
  }

  RunConfig c;
  const json& jg = j.contains("grid") ? j.at("grid") : json::object();
  if (!j.contains("grid")) config_fail("missing required key 'grid'");
  c.L1 = require<double>(jg, "L1");
  c.L2 = require<double>(jg, "L2");
  c.b = require<double>(jg, "b");
  c.N1 = require<int>(jg, "N1");
  c.N2 = require<int>(jg, "N2");
  c.N3 = require<int>(jg, "N3");
  c.max_order = optional_key<int>(jg, "max_order", 8);

  const json& jp = j.contains("params") ? j.at("params") : json::object();
  if (!j.contains("params")) config_fail("missing required key 'params'");
  c.params.sigma = require<double>(jp, "sigma");
  c.params.gamma = require<double>(jp, "gamma");
  c.params.g = optional_key<double>(jp, "g", 1.0);
  c.params.mu = optional_key<double>(jp, "mu", 1.0);
  c.params.P_ext = optional_key<double>(jp, "P_ext", 0.0);

  const json& ji = j.contains("initial") ? j.at("initial") : json::object();
  if (!j.contains("initial")) config_fail("missing required key 'initial'");
  std::string preset = require<std::string>(ji, "preset");
  if (preset == "equilibrium") {
    c.initial.preset = InitialData::Preset::equilibrium;
  } else if (preset == "single-mode") {
    c.initial.preset = InitialData::Preset::single_mode;
    auto k = require<std::vector<int>>(ji, "k");
    if (k.size() != 2) config_fail("'initial.k' must have two entries");
    c.initial.k1 = k[0];
    c.initial.k2 = k[1];
    c.initial.eps = require<double>(ji, "eps");
  } else if (preset == "random-band") {
    c.initial.preset = InitialData::Preset::random_band;
    c.initial.seed = require<std::uint64_t>(ji, "seed");
    c.initial.k_max = require<int>(ji, "k_max");
    c.initial.eps = require<double>(ji, "eps");
  } else {
    config_fail("unknown initial preset '" + preset + "'");
  }

  const json& js = j.contains("step") ? j.at("step") : json::object();
  if (!j.contains("step")) config_fail("missing required key 'step'");
  c.step.dt = require<double>(js, "dt");
  c.step.t_end = require<double>(js, "t_end");
  std::string scheme = optional_key<std::string>(js, "scheme", "imex1");
  if (scheme == "imex1")
    c.step.scheme = StepConfig::Scheme::imex1;
  else if (scheme == "imex2")
    c.step.scheme = StepConfig::Scheme::imex2;
  else
    config_fail("unknown scheme '" + scheme + "'");
  c.step.j_min = optional_key<double>(js, "j_min", 0.1);
  c.step.history_depth = optional_key<int>(js, "history_depth", 5);
  if (js.contains("kinematic_coeff"))
    c.step.kinematic_coeff = js.at("kinematic_coeff").get<double>();

  const json& jo = j.contains("observe") ? j.at("observe") : json::object();
  c.cadence = optional_key<int>(jo, "cadence", 10);
  c.tier = optional_key<int>(jo, "tier", 2);
  c.composite_N = optional_key<int>(jo, "composite_N", 0);
  c.write_checkpoints = optional_key<bool>(jo, "write_checkpoints", false);
  c.fit_t_min = optional_key<double>(jo, "fit_t_min", 1.0);

  c.output_dir = optional_key<std::string>(j, "output_dir", std::string{});
  c.overwrite = optional_key<bool>(j, "overwrite", false);
  c.experiment = optional_key<std::string>(j, "experiment", "single");
  c.sigmas = optional_key<std::vector<double>>(j, "sigmas", {});
  if (j.contains("members")) {
    for (const auto& m : j.at("members"))
      if (m.contains("grid"))
        config_fail("sweep members may not override the grid");
  }

  if (c.cadence < 1) config_fail("'observe.cadence' must be >= 1");
  if (c.tier < 2) config_fail("'observe.tier' must be >= 2");
  if (c.L1 <= 0 || c.L2 <= 0 || c.b <= 0)
    config_fail("grid lengths must be positive");
  if (c.N1 < 4 || c.N2 < 4 || c.N1 % 2 || c.N2 % 2 || c.N3 < 5)
    config_fail("grid needs even N1, N2 >= 4 and N3 >= 5");
  try {
    c.params.validate();
    c.step.validate();
  } catch (const std::exception& e) {
    config_fail(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) config_fail("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"L1", c.L1}, {"L2", c.L2}, {"b", c.b},
               {"N1", c.N1}, {"N2", c.N2}, {"N3", c.N3},
               {"max_order", c.max_order}};
  j["params"] = {{"sigma", c.params.sigma}, {"gamma", c.params.gamma},
                 {"g", c.params.g},         {"mu", c.params.mu},
                 {"P_ext", c.params.P_ext}};
  switch (c.initial.preset) {
    case InitialData::Preset::equilibrium:
      j["initial"] = {{"preset", "equilibrium"}};
      break;
    case InitialData::Preset::single_mode:
      j["initial"] = {{"preset", "single-mode"},
                      {"k", {c.initial.k1, c.initial.k2}},
                      {"eps", c.initial.eps}};
      break;
    case InitialData::Preset::random_band:
      j["initial"] = {{"preset", "random-band"},
                      {"seed", c.initial.seed},
                      {"k_max", c.initial.k_max},
                      {"eps", c.initial.eps}};
      break;
  }
  j["step"] = {{"dt", c.step.dt},
               {"t_end", c.step.t_end},
               {"scheme",
                c.step.scheme == StepConfig::Scheme::imex1 ? "imex1" : "imex2"},
               {"j_min", c.step.j_min},
               {"history_depth", c.step.history_depth}};
  j["observe"] = {{"cadence", c.cadence},
                  {"tier", c.tier},
                  {"composite_N", c.composite_N},
                  {"write_checkpoints", c.write_checkpoints},
                  {"fit_t_min", c.fit_t_min}};
  j["output_dir"] = c.output_dir;
  j["overwrite"] = c.overwrite;
  j["experiment"] = c.experiment;
  if (!c.sigmas.empty()) j["sigmas"] = c.sigmas;
  return j.dump(2);
}

Grid make_grid(const RunConfig& c) {
  try {
    return make_grid(c.L1, c.L2, c.b, c.N1, c.N2, c.N3, c.max_order);
  } catch (const std::invalid_argument& e) {
    config_fail(e.what());
  }
}

FlowState initial_state(const RunConfig& c, const Grid& g,
                        ProjectionReport* rep) {
  SurfaceField eta(g);
  VectorVolumeField u0(g);
  switch (c.initial.preset) {
    case InitialData::Preset::equilibrium:
      break;
    case InitialData::Preset::single_mode: {
      // eta0 = eps cos(xi . x')
      int k1 = c.initial.k1, k2 = c.initial.k2;
      if (k1 < 0 || k1 >= g.K1() - 1 || std::abs(k2) >= g.N2() / 2)
        config_fail("single-mode indices outside the dealiased band");
      int k2i = (k2 >= 0) ? k2 : g.N2() + k2;
      auto s = eta.spec_mut();
      cplx amp = 0.5 * c.initial.eps;
      s[(size_t)k2i * g.K1() + k1] += amp;
      if (k1 == 0) {
        int k2c = (g.N2() - k2i) % g.N2();
        s[(size_t)k2c * g.K1()] += std::conj(amp);
      }
      eta.enforce_hermitian();
      break;
    }
    case InitialData::Preset::random_band: {
      // Hermitian coefficients with uniform [-1,1] parts, drawn in row-major
      // (k2, k1) order, two draws per mode, then scaled by eps / n_modes
      CounterRng rng(c.initial.seed);
      auto s = eta.spec_mut();
      std::uint64_t counter = 0;
      int n_modes = 0;
      for (int k2 = 0; k2 < g.N2(); ++k2) {
        int m2 = (k2 <= g.N2() / 2) ? k2 : k2 - g.N2();
        for (int k1 = 0; k1 < g.K1(); ++k1) {
          if (k1 == 0 && k2 == 0) continue;
          if (std::abs(m2) > c.initial.k_max || k1 > c.initial.k_max) continue;
          if (g.nyquist1(k1) || g.nyquist2(k2)) continue;
          double re = rng.uniform(counter++);
          double im = rng.uniform(counter++);
          s[(size_t)k2 * g.K1() + k1] = cplx(re, im);
          ++n_modes;
        }
      }
      eta.enforce_hermitian();
      auto s2 = eta.spec_mut();
      for (auto& v : s2) v *= c.initial.eps / std::max(1, n_modes);
      break;
    }
  }
  try {
    return project_initial_data(u0, eta, c.params, g, c.step, rep);
  } catch (const std::invalid_argument& e) {
    config_fail(e.what());
  }
}

namespace {

std::string resolve_output_dir(const std::string& dir) {
  if (dir.empty()) return dir;
  fs::path p(dir);
  if (p.is_absolute()) return p.string();
  const char* root = std::getenv("SHEARFLOW_OUTPUT_ROOT");
  if (root && *root) return (fs::path(root) / p).string();
  return p.string();
}

void prepare_dir(const std::string& dir, bool overwrite) {
  fs::path p(dir);
  if (fs::exists(p)) {
    if (!fs::is_directory(p)) config_fail(dir + " exists and is not a directory");
    if (!fs::is_empty(p) && !overwrite)
      config_fail("output directory " + dir +
                  " is not empty (pass overwrite to rerun)");
  } else {
    fs::create_directories(p);
  }
}

json fit_to_json(const FitResult& f) {
  return {{"rate", f.rate},
          {"log_amplitude", f.log_amplitude},
          {"r2", f.r2},
          {"n_samples", f.n_samples}};
}

}  // namespace

void write_reports_csv(const std::string& path,
                       const std::vector<FunctionalReport>& reports,
                       int tier) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path);
  auto cols = report_columns(tier);
  // stable per-term columns from the first report that has them
  std::vector<std::string> term_cols;
  for (const auto& r : reports) {
    if (!r.terms.empty()) {
      for (const auto& [k, v] : r.terms) term_cols.push_back(k);
      break;
    }
  }
  f << cols[0];
  for (size_t i = 1; i < cols.size(); ++i) f << "," << cols[i];
  for (const auto& k : term_cols) f << "," << k;
  f << "\n";
  f.precision(17);
  for (const auto& r : reports) {
    auto vals = report_values(r);
    f << vals[0];
    for (size_t i = 1; i < vals.size(); ++i) f << "," << vals[i];
    for (const auto& k : term_cols) {
      auto it = r.terms.find(k);
      f << "," << (it == r.terms.end() ? 0.0 : it->second);
    }
    f << "\n";
  }
}

RunResult run_experiment(const RunConfig& config) {
  if (config.composite_N >= 3 && config.max_order < 4 * config.composite_N + 1)
    config_fail("composite_N = " + std::to_string(config.composite_N) +
                " needs grid max_order >= " +
                std::to_string(4 * config.composite_N + 1));
  Grid g = make_grid(config);
  ProjectionReport prep;
  FlowState state0 = initial_state(config, g, &prep);
  const double initial_rate =
      budget_rate(state0.snapshot(), config.params, BudgetForm::flattened);

  std::string dir = resolve_output_dir(config.output_dir);
  if (!dir.empty()) prepare_dir(dir, config.overwrite);

  RunResult res;
  res.artifact_dir = dir;
  CompositeAccumulator composite(std::max(3, config.composite_N));
  const bool use_composite = config.composite_N >= 3;

  int snapshot_index = 0;
  auto observer = [&](const FlowState& s) {
    FunctionalReport r =
        make_report(s.history, config.params, config.tier, true);
    res.reports.push_back(std::move(r));
    if (use_composite) composite.add(s.history, config.params);
    if (config.write_checkpoints && !dir.empty()) {
      std::string stem =
          dir + "/checkpoint_" + std::to_string(snapshot_index) + "_";
      write_field(stem + "u1.sflb", s.u.x);
      write_field(stem + "u2.sflb", s.u.y);
      write_field(stem + "u3.sflb", s.u.z);
      write_field(stem + "p.sflb", s.p);
      write_field(stem + "eta.sflb", s.eta);
    }
    ++snapshot_index;
  };

  Trajectory traj = run(std::move(state0), config.step, config.params, g,
                        config.cadence, observer, true);
  res.term = traj.term;
  res.samples = std::move(traj.samples);
  res.mean_drift = traj.mean_drift;
  res.cfl_advisory_dt = traj.cfl_advisory_dt;
  if (use_composite) res.composite = composite.value();

  // decay fits on E_full
  {
    std::vector<double> t, E;
    for (const auto& r : res.reports) {
      t.push_back(r.t);
      E.push_back(r.E_full);
    }
    try {
      res.fit_exp = fit_decay(t, E, DecayModel::exponential, config.fit_t_min);
    } catch (const std::exception&) {
    }
    try {
      res.fit_alg = fit_decay(t, E, DecayModel::algebraic, config.fit_t_min);
    } catch (const std::exception&) {
    }
  }

  if (!dir.empty()) {
    write_reports_csv(dir + "/diagnostics.csv", res.reports, config.tier);
    json summary;
    summary["version"] = version_string();
    summary["config"] = json::parse(config_to_json(config));
    summary["termination"] = {{"reason", res.term.reason_str()},
                              {"t_last", res.term.t_last},
                              {"detail", res.term.detail}};
    summary["projection"] = {{"displacement", prep.displacement},
                             {"eta_mean_shift", prep.eta_shift},
                             {"initial_energy_rate", initial_rate}};
    summary["mean_drift"] = res.mean_drift;
    summary["cfl_advisory_dt"] = traj.cfl_advisory_dt;
    summary["rng"] = CounterRng::name();
    if (!res.reports.empty()) {
      double maxE = 0.0;
      for (const auto& r : res.reports) maxE = std::max(maxE, r.E_full);
      summary["max_E_full"] = maxE;
      summary["final_E_full"] = res.reports.back().E_full;
    }
    if (res.fit_exp) summary["fit_exponential"] = fit_to_json(*res.fit_exp);
    if (res.fit_alg) summary["fit_algebraic"] = fit_to_json(*res.fit_alg);
    if (use_composite) summary["composite"] = res.composite;
    std::ofstream f(dir + "/summary.json", std::ios::trunc);
    f << summary.dump(2) << "\n";
  }
  return res;
}

SweepResult sweep_sigma(const RunConfig& base, std::vector<double> sigmas) {
  if (sigmas.empty() && !base.sigmas.empty()) sigmas = base.sigmas;
  if (sigmas.empty()) config_fail("sweep-sigma: no sigma list given");
  for (size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] < sigmas[i - 1]))
      config_fail("sweep-sigma: sigma list must be strictly descending");
  if (sigmas.back() != 0.0)
    config_fail("sweep-sigma: sigma list must end with 0");

  std::string dir = resolve_output_dir(base.output_dir);
  if (!dir.empty()) prepare_dir(dir, base.overwrite);

  struct Member {
    double sigma;
    RunResult result;
    std::string dir;
  };
  std::vector<Member> members;
  SweepResult out;

  for (double s : sigmas) {
    RunConfig c = base;
    c.params.sigma = s;
    c.experiment = "single";
    c.output_dir.clear();
    if (!dir.empty()) {
      c.output_dir = dir + "/sigma_" + std::to_string(s);
      c.overwrite = base.overwrite;
    }
    RunResult r = run_experiment(c);
    bool ok = r.term.ok();
    out.max_mean_drift = std::max(out.max_mean_drift, r.mean_drift);
    members.push_back({s, std::move(r), c.output_dir});
    if (!ok) break;  // partial table retained
  }

  const Member* ref = nullptr;
  for (const auto& m : members)
    if (m.sigma == 0.0 && m.result.term.ok()) ref = &m;

  if (ref) {
    for (const auto& m : members) {
      if (!m.result.term.ok()) continue;
      size_t nsamp =
          std::min(m.result.samples.size(), ref->result.samples.size());
      double delta = 0.0;
      for (size_t i = 0; i < nsamp; ++i) {
        const Snapshot& a = m.result.samples[i];
        const Snapshot& b = ref->result.samples[i];
        double du = 0.0;
        for (int cix = 0; cix < 3; ++cix) {
          double d = l2_volume(a.u.comp(cix) - b.u.comp(cix));
          du += d * d;
        }
        double de = l2_surface(a.eta - b.eta);
        delta = std::max(delta, std::sqrt(du) + de);
      }
      out.rows.push_back({m.sigma, delta, m.dir});
    }
    out.complete = members.size() == sigmas.size() &&
                   std::all_of(members.begin(), members.end(),
                               [](const Member& m) { return m.result.term.ok(); });
  }

  if (!dir.empty()) {
    std::ofstream f(dir + "/sigma_sweep.csv", std::ios::trunc);
    f.precision(17);
    f << "sigma,delta,dir\n";
    for (const auto& r : out.rows)
      f << r.sigma << "," << r.delta << "," << r.dir << "\n";
  }
  return out;
}

}  // namespace shearflow
