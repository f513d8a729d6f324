#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "shearflow/diagnostics.hpp"
#include "shearflow/experiment.hpp"
#include "shearflow/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitAcceptance = 4;

int cmd_simulate(const std::string& config_path) {
  shearflow::RunConfig cfg = shearflow::load_config(config_path);
  auto res = shearflow::run_experiment(cfg);
  std::cout << "termination: " << res.term.reason_str()
            << " at t = " << res.term.t_last << "\n";
  std::cout << "advisory dt (not enforced): " << res.cfl_advisory_dt << "\n";
  if (!res.reports.empty())
    std::cout << "final E = " << res.reports.back().E_full << "\n";
  if (res.fit_exp)
    std::cout << "exponential fit: rate = " << res.fit_exp->rate
              << ", R2 = " << res.fit_exp->r2 << "\n";
  if (!res.artifact_dir.empty())
    std::cout << "artifacts: " << res.artifact_dir << "\n";
  return res.term.ok() ? kExitOk : kExitSolver;
}

int cmd_sweep(const std::string& config_path, const std::string& sigmas_arg) {
  shearflow::RunConfig cfg = shearflow::load_config(config_path);
  std::vector<double> sigmas;
  if (!sigmas_arg.empty()) {
    std::stringstream ss(sigmas_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) sigmas.push_back(std::stod(tok));
  }
  auto sweep = shearflow::sweep_sigma(cfg, sigmas);
  std::cout << "sigma,delta\n";
  for (const auto& row : sweep.rows)
    std::cout << row.sigma << "," << row.delta << "\n";
  return sweep.complete ? kExitOk : kExitSolver;
}

int cmd_fit(const std::string& csv_path, const std::string& model,
            double t_min) {
  std::ifstream f(csv_path);
  if (!f) {
    std::cerr << "cannot open " << csv_path << "\n";
    return kExitConfig;
  }
  std::string header;
  std::getline(f, header);
  int t_col = -1, e_col = -1, col = 0;
  {
    std::stringstream ss(header);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok == "t") t_col = col;
      if (tok == "E_full") e_col = col;
      ++col;
    }
  }
  if (t_col < 0 || e_col < 0) {
    std::cerr << "csv must contain 't' and 'E_full' columns\n";
    return kExitConfig;
  }
  std::vector<double> t, E;
  std::string line;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string tok;
    int c = 0;
    double tv = 0, ev = 0;
    while (std::getline(ss, tok, ',')) {
      if (c == t_col) tv = std::stod(tok);
      if (c == e_col) ev = std::stod(tok);
      ++c;
    }
    t.push_back(tv);
    E.push_back(ev);
  }
  auto m = model == "alg" ? shearflow::DecayModel::algebraic
                          : shearflow::DecayModel::exponential;
  try {
    auto fit = shearflow::fit_decay(t, E, m, t_min);
    std::cout << "{ \"model\": \"" << model << "\", \"rate\": " << fit.rate
              << ", \"r2\": " << fit.r2 << ", \"n\": " << fit.n_samples
              << " }\n";
  } catch (const std::exception& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_verify(const std::string& filter) {
  bool all_pass = true;
  auto emit = [&](const shearflow::verify::CheckResult& r) {
    std::cout << r.id << (r.pass ? " [PASS] " : " [FAIL] ") << r.detail
              << "  (" << r.seconds << " s)" << std::endl;
    all_pass = all_pass && r.pass;
  };
  auto results = shearflow::verify::run_acceptance(filter, emit);
  if (results.empty()) {
    std::cerr << "no checks matched filter '" << filter << "'\n";
    return kExitConfig;
  }
  return all_pass ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral free-boundary shear flow simulator"};
  app.require_subcommand(1);

  std::string config_path, sigmas, csv_path, model = "exp", filter;
  double t_min = 1.0;

  auto* sim = app.add_subcommand("simulate", "run one experiment from a JSON config");
  sim->add_option("config", config_path, "config JSON path")->required();

  auto* sweep = app.add_subcommand("sweep-sigma",
                                   "vanishing surface tension sweep");
  sweep->add_option("config", config_path, "config JSON path")->required();
  sweep->add_option("--sigmas", sigmas,
                    "comma-separated descending list ending in 0");

  auto* fit = app.add_subcommand("fit", "fit a decay model to diagnostics CSV");
  fit->add_option("csv", csv_path, "diagnostics CSV path")->required();
  fit->add_option("--model", model, "exp or alg")
      ->check(CLI::IsMember({"exp", "alg"}));
  fit->add_option("--tmin", t_min, "fit window start time");

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--filter", filter, "run only checks whose id contains this");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path);
    if (sweep->parsed()) return cmd_sweep(config_path, sigmas);
    if (fit->parsed()) return cmd_fit(csv_path, model, t_min);
    if (ver->parsed()) return cmd_verify(filter);
  } catch (const shearflow::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
