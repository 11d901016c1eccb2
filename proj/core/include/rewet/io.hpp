#ifndef REWET_IO_HPP
#define REWET_IO_HPP

#include <string>
#include <vector>

#include "rewet/diagnostics.hpp"
#include "rewet/errors.hpp"
#include "rewet/experiments.hpp"

namespace rewet {

/// Exit codes shared by the CLI commands.
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kSolverError = 3,
    kIoFailure = 4,
};

/// Common options resolved from the command line.
struct RunOptions {
    std::string preset_name = "base";
    std::string config_path;  // optional, merged after preset
    std::vector<std::pair<std::string, std::string>> overrides;  // --set k=v
    std::string out_dir = ".";
    int grid_n = 100;
    double t_end = 28.0;
    double rtol = 1e-8;
    double atol = 1e-8;
    bool dump_config = false;
};

/// Atomic text-file write (temp file + rename).  Throws IoError.
void write_file_atomic(const std::string& path, const std::string& content);

/// profiles.csv: header t_days,x_cm,theta,C_alpha,C_beta,C_q,C_g,phi, rows
/// ordered by (t, x), 15 significant digits, LF endings, byte-deterministic.
std::string format_profiles_csv(const ScenarioResult& result,
                                const Grid& grid);

/// front.csv: header t_days,s_cm.
std::string format_front_csv(const FrontTrajectory& front);

/// convergence.csv: N,l2_error,ratio,order with trailing blanks as printed.
std::string format_convergence_csv(const ConvergenceReport& report);

/// comparison.csv: scenario,param_value,s_final_cm,theta_min_final,
/// phi_min_final,runtime_s.
std::string format_comparison_csv(const std::vector<ScenarioResult>& results);

/// summary.json scalar metrics for one run.
std::string format_summary_json(const ScenarioResult& result,
                                const ParameterSet& params,
                                const SqrtFit* fit);

/// Resolve preset + config file + --set overrides, in that order.
ParameterSet resolve_params(const RunOptions& opt);

/// `rewet run`: writes profiles.csv, front.csv, summary.json into out_dir.
int cmd_run(const RunOptions& opt);

/// `rewet sweep <campaign>`: per-scenario bundles plus comparison.csv.
int cmd_sweep(const std::string& campaign_path, const RunOptions& opt);

/// `rewet refine`: grid refinement study, writes convergence.csv.
int cmd_refine(const RunOptions& opt, const std::vector<int>& grids = {
                                          25, 50, 100, 200, 400, 800});

/// `rewet presets`: list preset names on stdout.
int cmd_presets();

}  // namespace rewet

#endif
