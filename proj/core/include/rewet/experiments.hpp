#ifndef REWET_EXPERIMENTS_HPP
#define REWET_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "rewet/diagnostics.hpp"
#include "rewet/discretization.hpp"
#include "rewet/integrator.hpp"
#include "rewet/params.hpp"

namespace rewet {

/// One declarative run: a base parameter set plus overrides, a grid size and
/// integrator settings.
struct Scenario {
    std::string id;
    ParameterSet base;
    std::vector<std::pair<std::string, std::string>> overrides;
    int grid_n = 100;
    IntegratorConfig integrator;
    BoundaryMode boundary = BoundaryMode::kImbibition;
    std::string param_value;  // display label for sweep tables

    ParameterSet resolved_params() const;
};

struct ProfileSnapshot {
    double t;
    std::vector<double> theta, C_alpha, C_beta, C_q, C_g, phi;
};

struct ScenarioResult {
    std::string id;
    std::string param_value;
    int grid_n = 0;
    bool failed = false;
    std::string error;

    std::vector<ProfileSnapshot> profiles;
    FrontTrajectory front;
    AuditSeries audit_series;
    ConservationReport audit;
    IntegrationTrace trace;

    // summary scalars at t_end
    double s_final = 0.0;
    double theta_min_final = 0.0;
    double phi_min_final = 0.0;

    /// s(t) by linear interpolation of the sampled trajectory.
    double front_at(double t) const;
    /// Maximum of a final-profile field, e.g. C_g.
    const ProfileSnapshot& final_profile() const;
};

/// Number of dense front/audit samples per run (square-root graded in time).
constexpr int kDenseSamples = 400;

ScenarioResult run_scenario(const Scenario& s);

/// One scenario per value of `key`; each run is isolated, failures are
/// recorded in the corresponding result and the campaign continues.
std::vector<ScenarioResult> sweep(const Scenario& base, const std::string& key,
                                  const std::vector<double>& values,
                                  int max_workers = 0);

/// Runs a list of scenarios, optionally in parallel.  Results are returned
/// in input order regardless of completion order.
std::vector<ScenarioResult> run_all(const std::vector<Scenario>& scenarios,
                                    int max_workers = 0);

/// The four tabulated cement mixtures on the base-case numerics.
std::vector<ScenarioResult> mixture_study(int grid_n = 100, int max_workers = 0);

/// Base case repeated on nested grids; errors of aqueous C-S-H at t_end
/// against the finest grid.  Any run failure aborts the report.
ConvergenceReport refinement_study(
    const std::vector<int>& grid_sizes = {25, 50, 100, 200, 400, 800},
    int max_workers = 0);

/// Campaign description file: `[scenario <id>]` section headers followed by
/// key=value lines in the config dialect, plus the scenario keys `preset`,
/// `grid`, `t_end`, `rtol`, `atol` and `param_value`.
std::vector<Scenario> parse_campaign(const std::string& path);

}  // namespace rewet

#endif
