#include "rewet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "rewet/constitutive.hpp"
#include "rewet/errors.hpp"

namespace rewet {

ParameterSet Scenario::resolved_params() const {
    ParameterSet p = base;
    for (const auto& [k, v] : overrides) apply_override(p, k, v);
    p.validate();
    return p;
}

double ScenarioResult::front_at(double t) const {
    const auto& ts = front.times;
    const auto& ss = front.positions;
    if (ts.empty()) throw InsufficientDataError("empty front trajectory");
    if (t <= ts.front()) return ss.front();
    if (t >= ts.back()) return ss.back();
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    size_t i = it - ts.begin();
    double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
    return ss[i - 1] + w * (ss[i] - ss[i - 1]);
}

const ProfileSnapshot& ScenarioResult::final_profile() const {
    if (profiles.empty()) throw InsufficientDataError("no profile snapshots");
    return profiles.back();
}

namespace {

ProfileSnapshot make_snapshot(double t, std::span<const double> y,
                              const FvSystem& sys) {
    const int N = sys.grid().N;
    ProfileSnapshot s;
    s.t = t;
    s.theta.resize(N);
    s.C_alpha.resize(N);
    s.C_beta.resize(N);
    s.C_q.resize(N);
    s.C_g.resize(N);
    s.phi.resize(N);
    for (int i = 0; i < N; ++i) {
        double th = y[state_index(i, kTheta)];
        s.theta[i] = th;
        s.C_alpha[i] = FvSystem::recover(y[state_index(i, kWAlpha)], th);
        s.C_beta[i] = FvSystem::recover(y[state_index(i, kWBeta)], th);
        s.C_q[i] = FvSystem::recover(y[state_index(i, kWQ)], th);
        s.C_g[i] = FvSystem::recover(y[state_index(i, kWGel)], th);
        s.phi[i] = constitutive::porosity(s.C_g[i], sys.params());
    }
    return s;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s) {
    ScenarioResult res;
    res.id = s.id;
    res.param_value = s.param_value;
    res.grid_n = s.grid_n;
    try {
        ParameterSet params = s.resolved_params();
        Grid grid(s.grid_n, params.L);
        FvSystem fv(params, grid, s.boundary);

        OdeSystem sys;
        sys.n_cells = grid.N;
        sys.block_size = kNumFields;
        sys.rhs = [&fv](double t, std::span<const double> y,
                        std::span<double> dydt) { fv.rhs(t, y, dydt); };
        const double theta_floor = 0.5 * params.theta_min;
        sys.state_ok = [theta_floor, &grid](std::span<const double> y) {
            for (int i = 0; i < grid.N; ++i)
                if (y[state_index(i, kTheta)] <= theta_floor) return false;
            return true;
        };

        IntegratorConfig cfg = s.integrator;
        cfg.validate();

        // Square-root graded dense samples: uniform spacing in sqrt(t)
        // resolves the fast early transient for front and audit series.
        DenseSampler sampler;
        sampler.times.reserve(kDenseSamples + 1);
        sampler.times.push_back(0.0);
        for (int k = 1; k <= kDenseSamples; ++k) {
            double f = static_cast<double>(k) / kDenseSamples;
            sampler.times.push_back(cfg.t_end * f * f);
        }
        sampler.callback = [&](double t, std::span<const double> y) {
            std::vector<double> theta(grid.N);
            for (int i = 0; i < grid.N; ++i)
                theta[i] = y[state_index(i, kTheta)];
            res.front.times.push_back(t);
            res.front.positions.push_back(locate_front(theta, grid, params));

            auto tot = fv.totals(y);
            auto bf = fv.boundary_fluxes(y);
            res.audit_series.times.push_back(t);
            res.audit_series.total_water.push_back(tot.water);
            res.audit_series.total_silicate_moles.push_back(tot.silicate_moles);
            res.audit_series.water_influx.push_back(
                s.boundary == BoundaryMode::kSealed ? 0.0 : bf.water);
            res.audit_series.water_sink.push_back(bf.water_sink);
            res.audit_series.silicate_molar_influx.push_back(
                s.boundary == BoundaryMode::kSealed
                    ? 0.0
                    : bf.alpha / params.m_alpha + bf.beta / params.m_beta +
                          2.0 * bf.q / params.m_csh);
        };

        auto y0 = fv.initial_state();
        auto out = integrate(sys, y0, cfg, &sampler);
        res.trace = out.trace;

        for (size_t k = 0; k < out.snapshot_times.size(); ++k)
            res.profiles.push_back(
                make_snapshot(out.snapshot_times[k], out.snapshots[k], fv));

        res.audit = conservation_audit(res.audit_series);

        const auto& fin = res.final_profile();
        res.s_final = res.front.positions.back();
        res.theta_min_final =
            *std::min_element(fin.theta.begin(), fin.theta.end());
        res.phi_min_final = *std::min_element(fin.phi.begin(), fin.phi.end());
    } catch (const std::exception& e) {
        res.failed = true;
        res.error = std::string(e.what()) + " [scenario " + s.id + "]";
    }
    return res;
}

std::vector<ScenarioResult> run_all(const std::vector<Scenario>& scenarios,
                                    int max_workers) {
    size_t n = scenarios.size();
    std::vector<ScenarioResult> results(n);
    unsigned hw = std::thread::hardware_concurrency();
    int workers = max_workers > 0 ? max_workers : (hw ? static_cast<int>(hw) : 2);
    workers = std::min<int>(workers, static_cast<int>(n));
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) results[i] = run_scenario(scenarios[i]);
        return results;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                results[i] = run_scenario(scenarios[i]);
        });
    for (auto& th : pool) th.join();
    return results;
}

std::vector<ScenarioResult> sweep(const Scenario& base, const std::string& key,
                                  const std::vector<double>& values,
                                  int max_workers) {
    if (values.size() < 2)
        throw InvalidParameterError("sweep needs at least 2 points");
    std::vector<Scenario> scenarios;
    scenarios.reserve(values.size());
    for (double v : values) {
        Scenario s = base;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        s.id = base.id + "_" + key + "=" + buf;
        s.param_value = buf;
        s.overrides.emplace_back(key, buf);
        scenarios.push_back(std::move(s));
    }
    return run_all(scenarios, max_workers);
}

std::vector<ScenarioResult> mixture_study(int grid_n, int max_workers) {
    std::vector<Scenario> scenarios;
    for (int m = 1; m <= 4; ++m) {
        Scenario s;
        s.id = "mixture" + std::to_string(m);
        s.base = preset(s.id);
        s.grid_n = grid_n;
        scenarios.push_back(std::move(s));
    }
    auto results = run_all(scenarios, max_workers);
    for (const auto& r : results)
        if (r.failed) throw SolverFailureError("mixture run failed: " + r.error, 0.0);
    return results;
}

ConvergenceReport refinement_study(const std::vector<int>& grid_sizes,
                                   int max_workers) {
    if (grid_sizes.size() < 2)
        throw InvalidParameterError("refinement study needs >= 2 grids");
    for (size_t i = 1; i < grid_sizes.size(); ++i) {
        if (grid_sizes[i] <= grid_sizes[i - 1])
            throw InvalidGridError("grid sizes must be strictly increasing");
        if (grid_sizes[i] % grid_sizes[0] != 0)
            throw InvalidGridError("grids must be nested");
    }

    std::vector<Scenario> scenarios;
    for (int n : grid_sizes) {
        Scenario s;
        s.id = "refine_N" + std::to_string(n);
        s.base = preset("base");
        s.grid_n = n;
        scenarios.push_back(std::move(s));
    }
    auto results = run_all(scenarios, max_workers);
    for (const auto& r : results)
        if (r.failed)
            throw SolverFailureError("refinement run failed: " + r.error, 0.0);

    const auto& fine = results.back().final_profile().C_q;
    ConvergenceReport rep;
    rep.grids = grid_sizes;
    const double L = preset("base").L;
    for (size_t i = 0; i + 1 < results.size(); ++i)
        rep.errors.push_back(
            grid_error(results[i].final_profile().C_q, fine, L));
    for (size_t i = 0; i + 1 < rep.errors.size(); ++i) {
        rep.ratios.push_back(rep.errors[i] / rep.errors[i + 1]);
        rep.orders.push_back(std::log2(rep.ratios.back()));
    }
    return rep;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<Scenario> parse_campaign(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open campaign file '" + path + "'");

    std::vector<Scenario> scenarios;
    Scenario* current = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidParameterError("line " + std::to_string(lineno) +
                                            ": unterminated section header");
            std::string header = trim(line.substr(1, line.size() - 2));
            if (header.rfind("scenario", 0) != 0)
                throw InvalidParameterError("line " + std::to_string(lineno) +
                                            ": expected [scenario <id>]");
            std::string id = trim(header.substr(8));
            if (id.empty())
                throw InvalidParameterError("line " + std::to_string(lineno) +
                                            ": scenario id missing");
            for (const auto& s : scenarios)
                if (s.id == id)
                    throw InvalidParameterError("duplicate scenario id '" + id +
                                                "'");
            Scenario s;
            s.id = id;
            s.base = preset("base");
            scenarios.push_back(std::move(s));
            current = &scenarios.back();
            continue;
        }

        if (!current)
            throw InvalidParameterError("line " + std::to_string(lineno) +
                                        ": key outside [scenario] section");
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameterError("line " + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "preset") {
                current->base = preset(value);
                // re-apply nothing: preset must precede overrides
                if (!current->overrides.empty())
                    throw InvalidParameterError(
                        "preset must come before parameter overrides");
            } else if (key == "grid") {
                current->grid_n = std::stoi(value);
            } else if (key == "t_end") {
                current->integrator.t_end = std::stod(value);
            } else if (key == "rtol") {
                current->integrator.rtol = std::stod(value);
            } else if (key == "atol") {
                current->integrator.atol = std::stod(value);
            } else if (key == "param_value") {
                current->param_value = value;
            } else {
                // parameter override; validate the key eagerly
                ParameterSet probe = current->base;
                apply_override(probe, key, value);
                current->overrides.emplace_back(key, value);
            }
        } catch (const std::exception& e) {
            throw InvalidParameterError("line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    return scenarios;
}

}  // namespace rewet
