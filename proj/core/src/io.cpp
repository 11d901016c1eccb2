#include "rewet/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rewet/errors.hpp"

namespace rewet {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw IoError("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "'");
}

std::string format_profiles_csv(const ScenarioResult& result,
                                const Grid& grid) {
    std::ostringstream out;
    out << "t_days,x_cm,theta,C_alpha,C_beta,C_q,C_g,phi\n";
    for (const auto& p : result.profiles)
        for (int i = 0; i < grid.N; ++i)
            out << num(p.t) << ',' << num(grid.center(i)) << ','
                << num(p.theta[i]) << ',' << num(p.C_alpha[i]) << ','
                << num(p.C_beta[i]) << ',' << num(p.C_q[i]) << ','
                << num(p.C_g[i]) << ',' << num(p.phi[i]) << '\n';
    return out.str();
}

std::string format_front_csv(const FrontTrajectory& front) {
    std::ostringstream out;
    out << "t_days,s_cm\n";
    for (size_t i = 0; i < front.times.size(); ++i)
        out << num(front.times[i]) << ',' << num(front.positions[i]) << '\n';
    return out.str();
}

std::string format_convergence_csv(const ConvergenceReport& rep) {
    std::ostringstream out;
    out << "N,l2_error,ratio,order\n";
    for (size_t i = 0; i < rep.grids.size(); ++i) {
        out << rep.grids[i] << ',';
        if (i < rep.errors.size()) out << num(rep.errors[i]);
        out << ',';
        if (i < rep.ratios.size()) out << num(rep.ratios[i]);
        out << ',';
        if (i < rep.orders.size()) out << num(rep.orders[i]);
        out << '\n';
    }
    return out.str();
}

std::string format_comparison_csv(const std::vector<ScenarioResult>& results) {
    std::ostringstream out;
    out << "scenario,param_value,s_final_cm,theta_min_final,phi_min_final,"
           "runtime_s\n";
    for (const auto& r : results) {
        if (r.failed) continue;
        out << r.id << ',' << r.param_value << ',' << num(r.s_final) << ','
            << num(r.theta_min_final) << ',' << num(r.phi_min_final) << ','
            << num(r.trace.wall_time_s) << '\n';
    }
    return out.str();
}

std::string format_summary_json(const ScenarioResult& result,
                                const ParameterSet& params,
                                const SqrtFit* fit) {
    nlohmann::ordered_json j;
    j["scenario"] = result.id;
    j["grid_n"] = result.grid_n;
    j["s_final_cm"] = result.s_final;
    j["theta_min_final"] = result.theta_min_final;
    j["phi_min_final"] = result.phi_min_final;
    j["phi0"] = params.phi0;
    if (fit) {
        j["sqrt_fit"]["slope_cm_per_sqrt_day"] = fit->slope;
        j["sqrt_fit"]["intercept_cm"] = fit->intercept;
        j["sqrt_fit"]["r_squared"] = fit->r_squared;
        j["sqrt_fit"]["degenerate"] = fit->degenerate;
    }
    j["audit"]["silicate_closure"] = result.audit.silicate_closure;
    j["audit"]["water_closure"] = result.audit.water_closure;
    j["audit"]["silicate_drift"] = result.audit.silicate_drift;
    j["audit"]["water_drift"] = result.audit.water_drift;
    j["trace"]["accepted_steps"] = result.trace.accepted;
    j["trace"]["rejected_steps"] = result.trace.rejected;
    j["trace"]["newton_iterations"] = result.trace.newton_iters;
    j["trace"]["rhs_evaluations"] = result.trace.rhs_evals;
    j["trace"]["jacobian_evaluations"] = result.trace.jacobian_evals;
    j["metadata"]["runtime_s"] = result.trace.wall_time_s;
    return j.dump(2) + "\n";
}

ParameterSet resolve_params(const RunOptions& opt) {
    ParameterSet p = preset(opt.preset_name);
    if (!opt.config_path.empty()) p = parse_config_file(opt.config_path, p);
    for (const auto& [k, v] : opt.overrides) apply_override(p, k, v);
    p.validate();
    return p;
}

int cmd_run(const RunOptions& opt) {
    ParameterSet params;
    try {
        params = resolve_params(opt);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    if (opt.dump_config) {
        std::cout << dump_config(params);
        return kOk;
    }

    Scenario s;
    s.id = opt.preset_name;
    s.base = params;
    s.grid_n = opt.grid_n;
    s.integrator.t_end = opt.t_end;
    s.integrator.rtol = opt.rtol;
    s.integrator.atol = opt.atol;

    ScenarioResult result = run_scenario(s);
    if (result.failed) {
        std::cerr << "solver failure: " << result.error << "\n";
        return kSolverError;
    }

    SqrtFit fit{};
    bool have_fit = false;
    try {
        fit = sqrt_time_fit(result.front, 0.0, s.integrator.t_end);
        have_fit = true;
    } catch (const InsufficientDataError&) {
    }

    try {
        ensure_dir(opt.out_dir);
        Grid grid(opt.grid_n, params.L);
        write_file_atomic(opt.out_dir + "/profiles.csv",
                          format_profiles_csv(result, grid));
        write_file_atomic(opt.out_dir + "/front.csv",
                          format_front_csv(result.front));
        write_file_atomic(
            opt.out_dir + "/summary.json",
            format_summary_json(result, params, have_fit ? &fit : nullptr));
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoFailure;
    }
    return kOk;
}

int cmd_sweep(const std::string& campaign_path, const RunOptions& opt) {
    std::vector<Scenario> scenarios;
    try {
        scenarios = parse_campaign(campaign_path);
        if (scenarios.empty())
            throw InvalidParameterError("campaign file defines no scenarios");
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    auto results = run_all(scenarios);

    int rc = kOk;
    try {
        ensure_dir(opt.out_dir);
        std::ostringstream failures;
        for (const auto& r : results) {
            if (r.failed) {
                failures << r.id << ": " << r.error << "\n";
                rc = kSolverError;
                continue;
            }
            std::string dir = opt.out_dir + "/" + r.id;
            ensure_dir(dir);
            const Scenario* sc = nullptr;
            for (const auto& s : scenarios)
                if (s.id == r.id) sc = &s;
            Grid grid(r.grid_n, sc->resolved_params().L);
            write_file_atomic(dir + "/profiles.csv",
                              format_profiles_csv(r, grid));
            write_file_atomic(dir + "/front.csv", format_front_csv(r.front));
            write_file_atomic(
                dir + "/summary.json",
                format_summary_json(r, sc->resolved_params(), nullptr));
        }
        write_file_atomic(opt.out_dir + "/comparison.csv",
                          format_comparison_csv(results));
        std::string f = failures.str();
        if (!f.empty()) {
            write_file_atomic(opt.out_dir + "/failures.txt", f);
            std::cerr << "failed scenarios:\n" << f;
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoFailure;
    }
    return rc;
}

int cmd_refine(const RunOptions& opt, const std::vector<int>& grids) {
    ConvergenceReport rep;
    try {
        rep = refinement_study(grids);
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolverError;
    }
    try {
        ensure_dir(opt.out_dir);
        write_file_atomic(opt.out_dir + "/convergence.csv",
                          format_convergence_csv(rep));
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoFailure;
    }
    return kOk;
}

int cmd_presets() {
    for (const auto& name : preset_names()) std::cout << name << "\n";
    return kOk;
}

}  // namespace rewet
