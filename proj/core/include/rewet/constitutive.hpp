#ifndef REWET_CONSTITUTIVE_HPP
#define REWET_CONSTITUTIVE_HPP

#include "rewet/params.hpp"

namespace rewet {

/// Point-wise closures.  All functions here are pure and stateless.
namespace constitutive {

/// Gel-modified porosity phi = phi0 - C_g/rho_gel, clamped to
/// [theta_min, phi0] so transient overshoot in C_g cannot push the
/// diffusivity ratio out of domain.
double porosity(double C_g, const ParameterSet& p);

/// Effective moisture diffusivity, cm^2/day:
/// ((phi - theta_min)/(phi0 - theta_min))^d_exponent * A exp(B theta).
/// The porosity factor is dropped when porosity_coupling is off.
double water_diffusivity(double theta, double phi, const ParameterSet& p);

/// Silicate generation rate r_j = k_j C_j (C_j/C_j0)^(n_j - 1), g/(cm^3 day).
/// Exactly 0 at C_j <= 0, including n_j < 1.
double silicate_rate(double C_j, double C_j0, double k_j, double n_j);

/// Total C-S-H generation R = (m_csh/2)(r_alpha/m_alpha + r_beta/m_beta).
double csh_generation(double r_alpha, double r_beta, const ParameterSet& p);

/// Reaction shut-off factor max(theta - theta_r, epsilon_cutoff).
double cutoff(double theta, const ParameterSet& p);

}  // namespace constitutive

}  // namespace rewet

#endif
