#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shearflow/params.hpp"
#include "shearflow/state.hpp"

namespace shearflow {

/// Staged temporal derivatives d_t^j of (u, p, eta) at the newest history
/// time, via backward differences of order (j_max + 1 - j).
struct TimeDerivs {
  int j_max = 0;
  std::vector<VectorVolumeField> u;   // [j] = d_t^j u, j = 0..j_max
  std::vector<VolumeField> p;
  std::vector<SurfaceField> eta;
};

TimeDerivs temporal_derivatives(const History& h, int j_max,
                                bool pde_substitute_du = false,
                                const Params* params = nullptr);

/// Basic and full energy functionals at tier n (n >= 2).
struct EnergyPair {
  double basic;  // Ebar_n^sigma
  double full;   // E_n^sigma
};
EnergyPair energy(const History& h, int n, double sigma,
                  std::map<std::string, double>* terms = nullptr);

/// Basic and full dissipation functionals at tier n.
struct DissipationPair {
  double basic;  // Dbar_n
  double full;   // D_n^sigma
};
DissipationPair dissipation(const History& h, int n, double sigma,
                            double gamma,
                            std::map<std::string, double>* terms = nullptr);

double functional_F(const FlowState& s, int n);   // ||eta||^2_{2n+1/2}
double functional_F(const Snapshot& s, int n);
/// K = ||u||^2_{C^2_b} + ||u||^2_{H^3(Sigma)} + ||eta||^2_{5/2}; the C^2_b
/// part is the collocation-node sup (a lower bound of the true sup norm).
double functional_K(const Snapshot& s);

/// H_n = int_Omega -d_t^{n-1} p F^{2,n} J + |d_t^n u|^2 (J-1) / 2.
double functional_H(const History& h, int n, const Params& params);

enum class BudgetForm { flattened, geometric };

/// Left-minus-right of the chosen energy-dissipation identity evaluated on
/// history snapshots; d/dt by centered difference at interior snapshots,
/// backward at the final one.  `at` indexes the snapshot (-1 = newest).
double budget_residual(const History& h, const Params& params, BudgetForm form,
                       int at = -1,
                       double kinematic_coeff =
                           std::numeric_limits<double>::quiet_NaN());

/// Right-hand side of the identity at one snapshot: the predicted d/dt of
/// the bracket energy.  Computable from a single state; used as a
/// compatibility proxy for initial data.
double budget_rate(const Snapshot& s, const Params& params, BudgetForm form);

struct FitResult {
  double rate = 0.0;       // lambda (exponential) or r (algebraic)
  double log_amplitude = 0.0;
  double r2 = 0.0;
  int n_samples = 0;
};
enum class DecayModel { exponential, algebraic };

/// Least-squares fit of log E against t (exponential) or log(1+t)
/// (algebraic), past the cutoff.  Needs >= 10 admissible samples.
FitResult fit_decay(std::span<const double> t, std::span<const double> E,
                    DecayModel model, double t_min = 0.0);

/// One row of the diagnostics stream.
struct FunctionalReport {
  double t = 0.0;
  int tier = 2;
  double sigma = 0.0;
  double E_basic = 0.0, E_full = 0.0;
  double D_basic = 0.0, D_full = 0.0;
  double F_n = 0.0, K = 0.0, H_n = 0.0;
  double budget_res = 0.0;
  bool budget_valid = false;
  double mean_eta = 0.0;
  int derivs_available = 0;  // temporal-derivative provenance
  std::map<std::string, double> terms;
};

/// Evaluates every functional the history supports at this tier.
FunctionalReport make_report(const History& h, const Params& params, int tier,
                             bool with_terms = false);

/// Running accumulator for the composite functional over a trajectory:
/// sup E_{2N}, int D_{2N}, sup (1+t)^{4N-8} E_{N+2}, sup F_{2N}/(1+t).
class CompositeAccumulator {
 public:
  explicit CompositeAccumulator(int N) : N_(N) {}
  void add(const History& h, const Params& params);
  double value() const;
  int N() const { return N_; }

 private:
  int N_;
  double sup_E2N_ = 0.0, int_D2N_ = 0.0, sup_weighted_EN2_ = 0.0,
         sup_F2N_ = 0.0;
  double last_t_ = 0.0, last_D_ = 0.0;
  bool have_last_ = false;
};

/// Stable CSV column set for report streams (documented in the README).
std::vector<std::string> report_columns(int tier);
std::vector<double> report_values(const FunctionalReport& r);

}  // namespace shearflow
