#ifndef REWET_DIAGNOSTICS_HPP
#define REWET_DIAGNOSTICS_HPP

#include <span>
#include <vector>

#include "rewet/grid.hpp"
#include "rewet/params.hpp"

namespace rewet {

/// Wetting-front position samples s(t).
struct FrontTrajectory {
    std::vector<double> times;      // days, strictly increasing
    std::vector<double> positions;  // cm, in [0, L]
};

struct SqrtFit {
    double slope = 0.0;      // cm/sqrt(day)
    double intercept = 0.0;  // cm
    double r_squared = 0.0;
    bool degenerate = false;  // constant data, R^2 undefined (reported as 0)
};

struct ConvergenceReport {
    std::vector<int> grids;       // strictly increasing, finest last
    std::vector<double> errors;   // vs finest, one per grid except the finest
    std::vector<double> ratios;   // err[i]/err[i+1]
    std::vector<double> orders;   // log2(ratio)
};

/// Smallest cell-center x with theta <= theta_min + front_tol; L when the
/// whole profile is wet.
double locate_front(std::span<const double> theta_profile, const Grid& grid,
                    const ParameterSet& params);

/// As locate_front but with linear sub-cell interpolation of the threshold
/// crossing, for smoother trajectories.
double locate_front_interpolated(std::span<const double> theta_profile,
                                 const Grid& grid, const ParameterSet& params);

/// Least-squares fit of s against sqrt(t) over times in [t_lo, t_hi].
/// Needs at least 3 samples in the window.
SqrtFit sqrt_time_fit(const FrontTrajectory& front, double t_lo, double t_hi);

/// Discrete l2 error sqrt(dx_coarse * sum (coarse - restricted)^2), where the
/// fine field is restricted onto the coarse grid by exact cell averaging.
/// Requires nested grids (fine size an integer multiple of coarse size).
double grid_error(std::span<const double> coarse_field,
                  std::span<const double> fine_field, double domain_length);

/// Conservation audit inputs: instantaneous totals and boundary-flux samples
/// along the run (same time base for all series).
struct AuditSeries {
    std::vector<double> times;
    std::vector<double> total_water;           // integral theta dx
    std::vector<double> total_silicate_moles;  // mol/cm^2 column density
    std::vector<double> water_influx;          // u(0), cm/day
    std::vector<double> water_sink;            // domain-integrated sink, cm/day
    std::vector<double> silicate_molar_influx; // mol/(cm^2 day) through x=0
};

struct ConservationReport {
    /// |change in silicate moles - integrated boundary influx| / initial moles
    double silicate_closure = 0.0;
    /// |change in water - integrated (influx - sink)| / max water change
    double water_closure = 0.0;
    /// raw relative drifts, meaningful for sealed domains
    double silicate_drift = 0.0;
    double water_drift = 0.0;
};

/// Trapezoidal closure of the balance laws over the sampled series.
ConservationReport conservation_audit(const AuditSeries& series);

}  // namespace rewet

#endif
