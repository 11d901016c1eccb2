#include "rewet/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "rewet/errors.hpp"

namespace rewet {

namespace {

constexpr int kMaxOrder = 5;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Leading-coefficient modification of plain BDF that improves stability at
// higher orders; the zero entries recover BDF1 and the unused slot.
constexpr double kKappa[kMaxOrder + 1] = {0.0, -0.1850, -1.0 / 9.0,
                                          -0.0823, -0.0415, 0.0};

struct MethodConsts {
    double gamma[kMaxOrder + 1];
    double alpha[kMaxOrder + 1];
    double error_const[kMaxOrder + 2];
    MethodConsts() {
        gamma[0] = 0.0;
        for (int k = 1; k <= kMaxOrder; ++k) gamma[k] = gamma[k - 1] + 1.0 / k;
        for (int k = 0; k <= kMaxOrder; ++k)
            alpha[k] = (1.0 - kKappa[k]) * gamma[k];
        for (int k = 0; k <= kMaxOrder; ++k)
            error_const[k] = kKappa[k] * gamma[k] + 1.0 / (k + 1);
        // order kMaxOrder+1 error constant, used only in order selection
        error_const[kMaxOrder + 1] = 1.0 / (kMaxOrder + 2);
    }
};
const MethodConsts kC;

double rms_norm(std::span<const double> v, std::span<const double> scale) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double r = v[i] / scale[i];
        s += r * r;
    }
    return std::sqrt(s / v.size());
}

// Difference-array rescaling matrix for a step-size change by `factor`:
// R[i][j] built row-cumulatively from M[i][j] = (i - 1 - factor*j)/i.
std::vector<double> compute_R(int order, double factor) {
    int n = order + 1;
    std::vector<double> M(n * n, 0.0);
    for (int j = 0; j < n; ++j) M[j] = 1.0;  // row 0
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            M[i * n + j] = (i - 1 - factor * j) / i;
    // cumulative product down each column
    std::vector<double> R(n * n);
    for (int j = 0; j < n; ++j) {
        double acc = 1.0;
        for (int i = 0; i < n; ++i) {
            acc = (i == 0) ? M[j] : acc * M[i * n + j];
            R[i * n + j] = acc;
        }
    }
    return R;
}

// D[0..order] <- (R(factor) R(1))^T D[0..order]
void change_D(std::vector<std::vector<double>>& D, int order, double factor) {
    int n = order + 1;
    std::vector<double> R = compute_R(order, factor);
    std::vector<double> U = compute_R(order, 1.0);
    std::vector<double> RU(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double r = R[i * n + k];
            if (r == 0.0) continue;
            for (int j = 0; j < n; ++j) RU[i * n + j] += r * U[k * n + j];
        }
    size_t dim = D[0].size();
    std::vector<std::vector<double>> newD(n, std::vector<double>(dim, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double w = RU[k * n + i];  // transpose
            if (w == 0.0) continue;
            for (size_t m = 0; m < dim; ++m) newD[i][m] += w * D[k][m];
        }
    for (int i = 0; i < n; ++i) D[i] = std::move(newD[i]);
}

// Interpolating polynomial of one accepted step: end time t, step h, and the
// post-update difference array.
std::vector<double> interpolate(double x, double t, double h, int order,
                                const std::vector<std::vector<double>>& D) {
    size_t dim = D[0].size();
    std::vector<double> y = D[0];
    double p = 1.0;
    for (int j = 1; j <= order; ++j) {
        p *= (x - (t - (j - 1) * h)) / (h * j);
        for (size_t m = 0; m < dim; ++m) y[m] += p * D[j][m];
    }
    return y;
}

double select_initial_step(const OdeSystem& sys, double t0,
                           std::span<const double> y0,
                           std::span<const double> f0, double rtol, double atol,
                           double t_span, long* rhs_evals) {
    size_t n = y0.size();
    std::vector<double> scale(n);
    for (size_t i = 0; i < n; ++i) scale[i] = atol + rtol * std::fabs(y0[i]);
    double d0 = rms_norm(y0, scale);
    double d1 = rms_norm(f0, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, 0.5 * t_span);

    std::vector<double> y1(n), f1(n), df(n);
    for (size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
    sys.rhs(t0 + h0, y1, f1);
    ++(*rhs_evals);
    for (size_t i = 0; i < n; ++i) df[i] = f1[i] - f0[i];
    double d2 = rms_norm(df, scale) / h0;

    double h1 = (d1 <= 1e-15 && d2 <= 1e-15)
                    ? std::max(1e-6, h0 * 1e-3)
                    : std::pow(0.01 / std::max(d1, d2), 0.5);
    return std::min({100.0 * h0, h1, t_span});
}

}  // namespace

std::vector<double> IntegratorConfig::resolved_output_times() const {
    if (!output_times.empty()) return output_times;
    std::vector<double> t(10);
    for (int k = 1; k <= 10; ++k) t[k - 1] = t_end * k / 10.0;
    return t;
}

void IntegratorConfig::validate() const {
    if (rtol <= 0.0 || atol <= 0.0)
        throw InvalidParameterError("rtol and atol must be positive");
    if (t_end <= 0.0) throw InvalidParameterError("t_end must be positive");
    auto times = resolved_output_times();
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || times[i] > t_end + 1e-12)
            throw InvalidParameterError("output time outside [0, t_end]");
        if (i > 0 && times[i] <= times[i - 1])
            throw InvalidParameterError("output_times must be sorted and unique");
    }
}

BlockTridiag fd_jacobian(const OdeSystem& sys, double t,
                         std::span<const double> y, std::span<const double> f0,
                         long* rhs_evals) {
    const int N = sys.n_cells, m = sys.block_size;
    const int n = N * m;
    BlockTridiag J(N, m);

    // Columns of cells >= 3 apart touch disjoint row ranges, so they can be
    // perturbed together: at most 3*m groups.
    const int stride = std::min(N, 3);
    std::vector<double> yp(y.begin(), y.end()), f1(n), delta(n, 0.0);

    for (int g = 0; g < stride * m; ++g) {
        int cell_phase = g / m, comp = g % m;
        bool any = false;
        for (int cell = cell_phase; cell < N; cell += stride) {
            int j = cell * m + comp;
            double d = std::sqrt(kEps) * std::max(std::fabs(y[j]), 1e-3);
            delta[j] = d;
            yp[j] = y[j] + d;
            any = true;
        }
        if (!any) continue;
        sys.rhs(t, yp, f1);
        if (rhs_evals) ++(*rhs_evals);
        for (int cell = cell_phase; cell < N; cell += stride) {
            int j = cell * m + comp;
            double inv = 1.0 / delta[j];
            for (int bi = std::max(0, cell - 1); bi <= std::min(N - 1, cell + 1);
                 ++bi) {
                for (int r = 0; r < m; ++r) {
                    int row = bi * m + r;
                    double v = (f1[row] - f0[row]) * inv;
                    if (bi == cell)
                        J.diag(bi, r, comp) = v;
                    else if (bi == cell + 1)
                        J.lower(bi, r, comp) = v;
                    else
                        J.upper(bi, r, comp) = v;
                }
            }
            yp[j] = y[j];
            delta[j] = 0.0;
        }
    }
    return J;
}

IntegrationResult integrate(const OdeSystem& sys, std::span<const double> y0,
                            const IntegratorConfig& cfg,
                            const DenseSampler* sampler) {
    cfg.validate();
    auto t_start_wall = std::chrono::steady_clock::now();

    const int n = sys.n_cells * sys.block_size;
    const double t_end = cfg.t_end;
    const double max_step = cfg.max_step > 0.0 ? cfg.max_step : t_end;
    const double newton_tol =
        std::max(10.0 * kEps / cfg.rtol, std::min(0.03, std::sqrt(cfg.rtol)));

    IntegrationResult result;
    IntegrationTrace& trace = result.trace;
    std::vector<double> snap_times = cfg.resolved_output_times();
    size_t snap_cursor = 0, sample_cursor = 0;

    // Emit any requests at t = 0 directly.
    std::vector<double> y_init(y0.begin(), y0.end());
    while (snap_cursor < snap_times.size() && snap_times[snap_cursor] <= 0.0) {
        result.snapshot_times.push_back(snap_times[snap_cursor]);
        result.snapshots.push_back(y_init);
        ++snap_cursor;
    }
    if (sampler)
        while (sample_cursor < sampler->times.size() &&
               sampler->times[sample_cursor] <= 0.0) {
            sampler->callback(sampler->times[sample_cursor], y_init);
            ++sample_cursor;
        }

    std::vector<double> f0(n);
    sys.rhs(0.0, y_init, f0);
    ++trace.rhs_evals;

    double t = 0.0;
    double h = cfg.initial_step > 0.0
                   ? cfg.initial_step
                   : select_initial_step(sys, 0.0, y_init, f0, cfg.rtol,
                                         cfg.atol, t_end, &trace.rhs_evals);
    h = std::min(h, max_step);

    int order = 1;
    int n_equal_steps = 0;
    std::vector<std::vector<double>> D(kMaxOrder + 3,
                                       std::vector<double>(n, 0.0));
    D[0] = y_init;
    for (int i = 0; i < n; ++i) D[1][i] = h * f0[i];

    BlockTridiag J = fd_jacobian(sys, 0.0, y_init, f0, &trace.rhs_evals);
    ++trace.jacobian_evals;
    bool jac_current = true;
    std::optional<BlockTridiagLU> lu;

    std::vector<double> y_predict(n), scale(n), psi(n), y_new(n), d(n), dy(n),
        fval(n), rhs_buf(n);

    while (t < t_end) {
        double min_step = 10.0 * kEps * std::max(std::fabs(t), 1.0);
        if (h > max_step) {
            change_D(D, order, max_step / h);
            h = max_step;
            n_equal_steps = 0;
            lu.reset();
        }

        bool step_accepted = false;
        double t_new = t;
        int newton_iters_used = 0;
        while (!step_accepted) {
            if (h < min_step)
                throw SolverFailureError("step size underflow in stiff integrator",
                                         t);
            t_new = t + h;
            if (t_new > t_end) {
                t_new = t_end;
                change_D(D, order, (t_new - t) / h);
                n_equal_steps = 0;
                lu.reset();
                h = t_new - t;
            }

            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int k = 0; k <= order; ++k) s += D[k][i];
                y_predict[i] = s;
                scale[i] = cfg.atol + cfg.rtol * std::fabs(y_predict[i]);
            }
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int k = 1; k <= order; ++k) s += D[k][i] * kC.gamma[k];
                psi[i] = s / kC.alpha[order];
            }
            const double c = h / kC.alpha[order];

            // modified Newton, at most one Jacobian refresh per attempt
            bool converged = false;
            while (!converged) {
                if (!lu) {
                    BlockTridiag M = J;
                    M.scale_to_identity_minus(c);
                    try {
                        lu.emplace(M);
                    } catch (const SolverFailureError&) {
                        break;  // treat like non-convergence
                    }
                    ++trace.lu_factorizations;
                }
                y_new = y_predict;
                std::fill(d.begin(), d.end(), 0.0);
                double dy_norm_old = -1.0;
                newton_iters_used = 0;
                for (int it = 0; it < cfg.max_newton_iters; ++it) {
                    ++newton_iters_used;
                    ++trace.newton_iters;
                    bool rhs_ok = true;
                    try {
                        sys.rhs(t_new, y_new, fval);
                        ++trace.rhs_evals;
                    } catch (const NumericalFailureError&) {
                        rhs_ok = false;
                    }
                    if (!rhs_ok) break;
                    for (int i = 0; i < n; ++i)
                        dy[i] = c * fval[i] - psi[i] - d[i];
                    lu->solve(dy);
                    double dy_norm = rms_norm(dy, scale);
                    double rate =
                        dy_norm_old > 0.0 ? dy_norm / dy_norm_old : -1.0;
                    if (rate >= 1.0) break;
                    if (rate > 0.0 &&
                        std::pow(rate, cfg.max_newton_iters - it) /
                                (1.0 - rate) * dy_norm >
                            newton_tol)
                        break;
                    for (int i = 0; i < n; ++i) {
                        y_new[i] += dy[i];
                        d[i] += dy[i];
                    }
                    if (dy_norm == 0.0 ||
                        (rate > 0.0 && rate / (1.0 - rate) * dy_norm < newton_tol)) {
                        converged = true;
                        break;
                    }
                    dy_norm_old = dy_norm;
                }
                if (!converged) {
                    if (jac_current) break;
                    J = fd_jacobian(sys, t_new, y_predict, [&] {
                        sys.rhs(t_new, y_predict, rhs_buf);
                        ++trace.rhs_evals;
                        return std::span<const double>(rhs_buf);
                    }(), &trace.rhs_evals);
                    ++trace.jacobian_evals;
                    jac_current = true;
                    lu.reset();
                }
            }

            if (!converged) {
                ++trace.rejected;
                change_D(D, order, 0.5);
                h *= 0.5;
                n_equal_steps = 0;
                lu.reset();
                continue;
            }

            double safety = 0.9 * (2.0 * cfg.max_newton_iters + 1.0) /
                            (2.0 * cfg.max_newton_iters + newton_iters_used);
            for (int i = 0; i < n; ++i)
                scale[i] = cfg.atol + cfg.rtol * std::fabs(y_new[i]);
            for (int i = 0; i < n; ++i)
                dy[i] = kC.error_const[order] * d[i];  // reuse dy as error buffer
            double error_norm = rms_norm(dy, scale);

            if (error_norm > 1.0) {
                ++trace.rejected;
                double factor = std::max(
                    kMinFactor,
                    safety * std::pow(error_norm, -1.0 / (order + 1)));
                change_D(D, order, factor);
                h *= factor;
                n_equal_steps = 0;
                lu.reset();
                continue;
            }

            if (sys.state_ok && !sys.state_ok(y_new)) {
                ++trace.rejected;
                change_D(D, order, 0.5);
                h *= 0.5;
                n_equal_steps = 0;
                lu.reset();
                continue;
            }

            step_accepted = true;
        }

        ++trace.accepted;
        ++n_equal_steps;
        jac_current = false;

        // difference update
        for (int i = 0; i < n; ++i) {
            D[order + 2][i] = d[i] - D[order + 1][i];
            D[order + 1][i] = d[i];
        }
        for (int k = order; k >= 0; --k)
            for (int i = 0; i < n; ++i) D[k][i] += D[k + 1][i];

        double h_done = t_new - t;
        t = t_new;

        // interpolated outputs over (t - h_done, t]
        while (snap_cursor < snap_times.size() &&
               snap_times[snap_cursor] <= t + 1e-12 * std::max(1.0, t)) {
            double x = std::min(snap_times[snap_cursor], t);
            result.snapshot_times.push_back(snap_times[snap_cursor]);
            result.snapshots.push_back(interpolate(x, t, h_done, order, D));
            ++snap_cursor;
        }
        if (sampler)
            while (sample_cursor < sampler->times.size() &&
                   sampler->times[sample_cursor] <=
                       t + 1e-12 * std::max(1.0, t)) {
                double x = std::min(sampler->times[sample_cursor], t);
                sampler->callback(sampler->times[sample_cursor],
                                  interpolate(x, t, h_done, order, D));
                ++sample_cursor;
            }

        if (t >= t_end) break;

        if (n_equal_steps < order + 1) continue;

        // order/step-size selection after order+1 equal steps
        double error_m_norm = std::numeric_limits<double>::infinity();
        double error_p_norm = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            scale[i] = cfg.atol + cfg.rtol * std::fabs(y_new[i]);
        if (order > 1) {
            for (int i = 0; i < n; ++i)
                dy[i] = kC.error_const[order - 1] * D[order][i];
            error_m_norm = rms_norm(dy, scale);
        }
        if (order < kMaxOrder) {
            for (int i = 0; i < n; ++i)
                dy[i] = kC.error_const[order + 1] * D[order + 2][i];
            error_p_norm = rms_norm(dy, scale);
        }
        for (int i = 0; i < n; ++i) dy[i] = kC.error_const[order] * d[i];
        double error_norm = rms_norm(dy, scale);

        double factors[3];
        double norms[3] = {error_m_norm, error_norm, error_p_norm};
        for (int k = 0; k < 3; ++k)
            factors[k] = norms[k] == 0.0
                             ? std::numeric_limits<double>::infinity()
                             : std::pow(norms[k], -1.0 / (order + k));
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (factors[k] > factors[best]) best = k;
        order += best - 1;
        double safety = 0.9 * (2.0 * cfg.max_newton_iters + 1.0) /
                        (2.0 * cfg.max_newton_iters + newton_iters_used);
        double factor = std::min(kMaxFactor, safety * factors[best]);
        change_D(D, order, factor);
        h *= factor;
        n_equal_steps = 0;
        lu.reset();
    }

    trace.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start_wall)
            .count();
    return result;
}

}  // namespace rewet
