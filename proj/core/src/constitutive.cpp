#include "rewet/constitutive.hpp"

#include <algorithm>
#include <cmath>

#include "rewet/errors.hpp"

namespace rewet::constitutive {

double porosity(double C_g, const ParameterSet& p) {
    double phi = p.phi0 - C_g / p.rho_gel;
    return std::clamp(phi, p.theta_min, p.phi0);
}

double water_diffusivity(double theta, double phi, const ParameterSet& p) {
    double dstar = p.A * std::exp(p.B * theta);
    if (!p.porosity_coupling) return dstar;
    double denom = p.phi0 - p.theta_min;
    if (denom <= 0.0) return dstar;  // degenerate phi0 == theta_min
    double ratio = std::clamp((phi - p.theta_min) / denom, 0.0, 1.0);
    if (ratio == 0.0) return 0.0;
    return std::pow(ratio, p.d_exponent) * dstar;
}

double silicate_rate(double C_j, double C_j0, double k_j, double n_j) {
    if (C_j0 <= 0.0)
        throw InvalidParameterError("silicate_rate: C_j0 must be positive");
    if (C_j <= 0.0) return 0.0;
    // r = k C0 (C/C0)^n, written via exp/log to stay finite at the front.
    return k_j * C_j0 * std::exp(n_j * std::log(C_j / C_j0));
}

double csh_generation(double r_alpha, double r_beta, const ParameterSet& p) {
    return 0.5 * p.m_csh * (r_alpha / p.m_alpha + r_beta / p.m_beta);
}

double cutoff(double theta, const ParameterSet& p) {
    return std::max(theta - p.theta_r, p.epsilon_cutoff);
}

}  // namespace rewet::constitutive
