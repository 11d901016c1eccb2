#include "rewet/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "rewet/errors.hpp"

namespace rewet {

double locate_front(std::span<const double> theta_profile, const Grid& grid,
                    const ParameterSet& params) {
    const double threshold = params.theta_min + params.front_tol;
    for (int i = 0; i < grid.N; ++i)
        if (theta_profile[i] <= threshold) return grid.center(i);
    return grid.L;
}

double locate_front_interpolated(std::span<const double> theta_profile,
                                 const Grid& grid,
                                 const ParameterSet& params) {
    const double threshold = params.theta_min + params.front_tol;
    for (int i = 0; i < grid.N; ++i) {
        if (theta_profile[i] <= threshold) {
            if (i == 0) return grid.center(0);
            double t0 = theta_profile[i - 1], t1 = theta_profile[i];
            if (t0 <= t1) return grid.center(i);
            double frac = (t0 - threshold) / (t0 - t1);
            return grid.center(i - 1) + frac * grid.dx;
        }
    }
    return grid.L;
}

SqrtFit sqrt_time_fit(const FrontTrajectory& front, double t_lo, double t_hi) {
    std::vector<double> u, s;  // u = sqrt(t)
    for (size_t i = 0; i < front.times.size(); ++i) {
        double t = front.times[i];
        if (t >= t_lo && t <= t_hi) {
            u.push_back(std::sqrt(t));
            s.push_back(front.positions[i]);
        }
    }
    if (u.size() < 3)
        throw InsufficientDataError("sqrt_time_fit needs >= 3 samples in window");

    size_t n = u.size();
    double su = 0, ss = 0, suu = 0, sus = 0;
    for (size_t i = 0; i < n; ++i) {
        su += u[i];
        ss += s[i];
        suu += u[i] * u[i];
        sus += u[i] * s[i];
    }
    double denom = n * suu - su * su;
    SqrtFit fit;
    if (denom <= 0.0) {
        fit.degenerate = true;
        return fit;
    }
    fit.slope = (n * sus - su * ss) / denom;
    fit.intercept = (ss - fit.slope * su) / n;

    double ss_tot = 0, ss_res = 0, mean = ss / n;
    for (size_t i = 0; i < n; ++i) {
        double pred = fit.slope * u[i] + fit.intercept;
        ss_tot += (s[i] - mean) * (s[i] - mean);
        ss_res += (s[i] - pred) * (s[i] - pred);
    }
    // essentially-constant data: the variance is pure rounding noise
    double scale2 = mean * mean + 1.0;
    if (ss_tot <= 1e-24 * static_cast<double>(n) * scale2) {
        fit.degenerate = true;
        fit.slope = 0.0;
        fit.intercept = mean;
        fit.r_squared = 0.0;
    } else {
        fit.r_squared = 1.0 - ss_res / ss_tot;
    }
    return fit;
}

double grid_error(std::span<const double> coarse_field,
                  std::span<const double> fine_field, double domain_length) {
    size_t nc = coarse_field.size(), nf = fine_field.size();
    if (nc == 0 || nf == 0 || nf % nc != 0)
        throw InvalidGridError("grid_error requires nested grids");
    size_t ratio = nf / nc;
    double dx = domain_length / nc;
    double sum = 0.0;
    for (size_t i = 0; i < nc; ++i) {
        double avg = 0.0;
        for (size_t k = 0; k < ratio; ++k) avg += fine_field[i * ratio + k];
        avg /= ratio;
        double diff = coarse_field[i] - avg;
        sum += diff * diff;
    }
    return std::sqrt(dx * sum);
}

namespace {

// trapezoid integral of samples f(t) over the whole series
double trapz(const std::vector<double>& t, const std::vector<double>& f) {
    double s = 0.0;
    for (size_t i = 1; i < t.size(); ++i)
        s += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
    return s;
}

}  // namespace

ConservationReport conservation_audit(const AuditSeries& series) {
    if (series.times.size() < 2)
        throw InsufficientDataError("conservation_audit needs >= 2 samples");

    ConservationReport rep;

    double m0 = series.total_silicate_moles.front();
    double m1 = series.total_silicate_moles.back();
    double mole_influx = trapz(series.times, series.silicate_molar_influx);
    double mref = std::max(std::fabs(m0), 1e-300);
    rep.silicate_closure = std::fabs((m1 - m0) - mole_influx) / mref;
    rep.silicate_drift = std::fabs(m1 - m0) / mref;

    double w0 = series.total_water.front();
    double w1 = series.total_water.back();
    double influx = trapz(series.times, series.water_influx);
    double sink = trapz(series.times, series.water_sink);
    double wref = std::max({std::fabs(w1 - w0), std::fabs(influx), 1e-300});
    rep.water_closure = std::fabs((w1 - w0) - (influx - sink)) / wref;
    rep.water_drift = std::fabs(w1 - w0) / std::max(std::fabs(w0), 1e-300);

    return rep;
}

}  // namespace rewet
