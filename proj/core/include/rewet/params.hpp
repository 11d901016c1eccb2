#ifndef REWET_PARAMS_HPP
#define REWET_PARAMS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rewet {

/// A cement mixture recipe: densities, mass ratios, constituent fractions,
/// and an optional measured porosity that overrides the derived value.
struct MixtureSpec {
    double rho_cem = 2.83;   // cement density, g/cm^3
    double R_wc = 0.333;     // water-to-cement mass ratio
    double R_ac = 2.86;      // aggregate-to-cement mass ratio
    double omega_alpha = 0.65;
    double omega_beta = 0.17;
    double omega_gamma = 0.11;
    double f_alpha = 0.60;   // fractional degree of prior hydration
    double f_beta = 0.20;
    double f_gamma = 0.72;
    std::optional<double> pinned_phi0;

    void validate() const;
};

/// All model constants for one simulation: physical/chemical constants,
/// mixture composition, derived initial state, and run-variant switches.
/// Immutable after validate(); safe to share across concurrent runs.
struct ParameterSet {
    // densities, g/cm^3
    double rho_w = 1.0;
    double rho_gel = 2.6;
    double rho_cem = 2.83;
    double rho_agg = 2.6;

    // molar masses, g/mol
    double m_alpha = 228.3;
    double m_beta = 172.2;
    double m_w = 18.0;
    double m_csh = 342.4;

    // aqueous diffusivities, cm^2/day
    double D_alpha = 0.01;
    double D_beta = 0.01;
    double D_q = 0.01;

    // moisture diffusivity D = ((phi - theta_min)/(phi0 - theta_min))^d_exponent * A exp(B theta)
    double A = 0.0028;       // cm^2/day
    double B = 100.0;
    double d_exponent = 19.0 / 6.0;

    double theta_min = 0.04;  // residual water content
    double theta_r = 0.04;    // reaction cutoff water content

    // silicate kinetics, 1/day
    double k_alpha = 22.2;
    double k_beta = 3.04;
    double n_alpha = 2.65;
    double n_beta = 3.10;
    double k_prec = 32.2;
    double k_diss = 0.0;
    double nu = 5.0;         // water stoichiometric coefficient

    // mixture composition
    double R_wc = 0.333;
    double R_ac = 2.86;
    double omega_alpha = 0.65;
    double omega_beta = 0.17;
    double omega_gamma = 0.11;
    double f_alpha = 0.60;
    double f_beta = 0.20;
    double f_gamma = 0.72;
    double dV_alpha = 0.233;  // hydration volume change, cm^3/g
    double dV_beta = 0.228;
    double dV_gamma = 0.555;

    double L = 10.0;          // sample length, cm

    // initial state
    double C_alpha0 = 0.145;  // g/cm^3
    double C_beta0 = 0.076;
    double C_q0 = 0.0;
    double C_g0 = 0.0;
    double phi0 = 0.067;
    double theta_max = 0.067;

    // run-variant switches
    double front_tol = 0.0005;
    double epsilon_cutoff = 0.0;     // 0 = strict reaction cutoff
    bool porosity_coupling = true;   // diffusivity carries the porosity factor

    /// Throws InvalidParameterError on any violated invariant.
    void validate() const;
};

/// Initial cement concentration before onset of hydration,
/// rho_cem / (R_wc rho_cem/rho_w + R_ac rho_cem/rho_agg + 1), g/cm^3.
double derive_cmix(const MixtureSpec& mix, double rho_w, double rho_agg);

struct InitialConcentrations {
    double C_alpha0;
    double C_beta0;
};

/// C_j0 = (1 - f_j) omega_j cmix for the two silicate constituents.
InitialConcentrations derive_initial_concentrations(const MixtureSpec& mix,
                                                    double cmix);

struct PorosityDerivation {
    double used;     // value simulations run with (pinned when available)
    double formula;  // value of the volume-balance expression, kept for audit
    bool pinned;
};

/// Initial porosity from mixture composition and hydration volume changes.
/// A pinned phi0 in the mixture takes precedence; the formula value is
/// always reported alongside.
PorosityDerivation derive_initial_porosity(const MixtureSpec& mix, double cmix,
                                           double dV_alpha, double dV_beta,
                                           double dV_gamma, double rho_w);

/// Known presets: base, mixture1..mixture4, no_reaction, decoupled_porosity,
/// relaxed_cutoff.  Throws NotFoundError on anything else.
ParameterSet preset(const std::string& name);

std::vector<std::string> preset_names();

/// Set one field by its config-file key.  Throws InvalidParameterError for
/// unknown keys or unparsable values.
void apply_override(ParameterSet& p, const std::string& key,
                    const std::string& value);

/// Flat key=value config dialect ('#' comments, unknown keys rejected).
ParameterSet parse_config(std::istream& in, const ParameterSet& base);
ParameterSet parse_config_file(const std::string& path, const ParameterSet& base);

/// Serialization round-trips bit-for-bit through parse_config.
std::string dump_config(const ParameterSet& p);

}  // namespace rewet

#endif
