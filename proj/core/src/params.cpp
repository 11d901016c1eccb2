#include "rewet/params.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rewet/errors.hpp"

namespace rewet {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameterError(msg);
}

void require_fraction(double v, const char* name) {
    require(v >= 0.0 && v <= 1.0,
            std::string(name) + " must lie in [0,1], got " + std::to_string(v));
}

// Config-key table.  Every double field of ParameterSet appears here under
// its exact spec name; porosity_coupling is handled separately as a bool.
struct FieldEntry {
    const char* name;
    double ParameterSet::* member;
};

constexpr FieldEntry kFields[] = {
    {"rho_w", &ParameterSet::rho_w},
    {"rho_gel", &ParameterSet::rho_gel},
    {"rho_cem", &ParameterSet::rho_cem},
    {"rho_agg", &ParameterSet::rho_agg},
    {"m_alpha", &ParameterSet::m_alpha},
    {"m_beta", &ParameterSet::m_beta},
    {"m_w", &ParameterSet::m_w},
    {"m_csh", &ParameterSet::m_csh},
    {"D_alpha", &ParameterSet::D_alpha},
    {"D_beta", &ParameterSet::D_beta},
    {"D_q", &ParameterSet::D_q},
    {"A", &ParameterSet::A},
    {"B", &ParameterSet::B},
    {"d_exponent", &ParameterSet::d_exponent},
    {"theta_min", &ParameterSet::theta_min},
    {"theta_r", &ParameterSet::theta_r},
    {"k_alpha", &ParameterSet::k_alpha},
    {"k_beta", &ParameterSet::k_beta},
    {"n_alpha", &ParameterSet::n_alpha},
    {"n_beta", &ParameterSet::n_beta},
    {"k_prec", &ParameterSet::k_prec},
    {"k_diss", &ParameterSet::k_diss},
    {"nu", &ParameterSet::nu},
    {"R_wc", &ParameterSet::R_wc},
    {"R_ac", &ParameterSet::R_ac},
    {"omega_alpha", &ParameterSet::omega_alpha},
    {"omega_beta", &ParameterSet::omega_beta},
    {"omega_gamma", &ParameterSet::omega_gamma},
    {"f_alpha", &ParameterSet::f_alpha},
    {"f_beta", &ParameterSet::f_beta},
    {"f_gamma", &ParameterSet::f_gamma},
    {"dV_alpha", &ParameterSet::dV_alpha},
    {"dV_beta", &ParameterSet::dV_beta},
    {"dV_gamma", &ParameterSet::dV_gamma},
    {"L", &ParameterSet::L},
    {"C_alpha0", &ParameterSet::C_alpha0},
    {"C_beta0", &ParameterSet::C_beta0},
    {"C_q0", &ParameterSet::C_q0},
    {"C_g0", &ParameterSet::C_g0},
    {"phi0", &ParameterSet::phi0},
    {"theta_max", &ParameterSet::theta_max},
    {"front_tol", &ParameterSet::front_tol},
    {"epsilon_cutoff", &ParameterSet::epsilon_cutoff},
};

double parse_double(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(v))
        throw InvalidParameterError("cannot parse value '" + value +
                                    "' for key '" + key + "'");
    return v;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

void MixtureSpec::validate() const {
    require(rho_cem > 0.0, "rho_cem must be positive");
    require(R_wc >= 0.0 && R_ac >= 0.0, "mass ratios must be non-negative");
    require_fraction(omega_alpha, "omega_alpha");
    require_fraction(omega_beta, "omega_beta");
    require_fraction(omega_gamma, "omega_gamma");
    require_fraction(f_alpha, "f_alpha");
    require_fraction(f_beta, "f_beta");
    require_fraction(f_gamma, "f_gamma");
}

void ParameterSet::validate() const {
    require(rho_w > 0 && rho_gel > 0 && rho_cem > 0 && rho_agg > 0,
            "densities must be strictly positive");
    require(m_alpha > 0 && m_beta > 0 && m_w > 0 && m_csh > 0,
            "molar masses must be strictly positive");
    require(D_alpha > 0 && D_beta > 0 && D_q > 0,
            "aqueous diffusivities must be strictly positive");
    require(A > 0, "water diffusion prefactor A must be strictly positive");
    require(L > 0, "sample length L must be strictly positive");
    require(k_alpha >= 0 && k_beta >= 0 && k_prec >= 0,
            "reaction rates must be non-negative");
    require(k_diss >= 0, "k_diss must be non-negative");
    require(epsilon_cutoff >= 0, "epsilon_cutoff must be non-negative");
    require(0 <= theta_min && theta_min <= theta_max && theta_max <= phi0 &&
                phi0 <= 1.0,
            "need 0 <= theta_min <= theta_max <= phi0 <= 1");
    require(theta_r >= 0, "theta_r must be non-negative");
    require_fraction(omega_alpha, "omega_alpha");
    require_fraction(omega_beta, "omega_beta");
    require_fraction(omega_gamma, "omega_gamma");
    require_fraction(f_alpha, "f_alpha");
    require_fraction(f_beta, "f_beta");
    require_fraction(f_gamma, "f_gamma");
    require(C_alpha0 >= 0 && C_beta0 >= 0 && C_q0 >= 0 && C_g0 >= 0,
            "initial concentrations must be non-negative");
    require(front_tol > 0, "front_tol must be strictly positive");
    require(d_exponent > 0, "d_exponent must be strictly positive");
}

double derive_cmix(const MixtureSpec& mix, double rho_w, double rho_agg) {
    mix.validate();
    require(rho_w > 0 && rho_agg > 0, "rho_w and rho_agg must be positive");
    double denom = mix.R_wc * mix.rho_cem / rho_w +
                   mix.R_ac * mix.rho_cem / rho_agg + 1.0;
    require(denom > 0, "derive_cmix denominator must be positive");
    return mix.rho_cem / denom;
}

InitialConcentrations derive_initial_concentrations(const MixtureSpec& mix,
                                                    double cmix) {
    mix.validate();
    require(cmix > 0, "cmix must be positive");
    return {(1.0 - mix.f_alpha) * mix.omega_alpha * cmix,
            (1.0 - mix.f_beta) * mix.omega_beta * cmix};
}

PorosityDerivation derive_initial_porosity(const MixtureSpec& mix, double cmix,
                                           double dV_alpha, double dV_beta,
                                           double dV_gamma, double rho_w) {
    mix.validate();
    require(cmix > 0, "cmix must be positive");
    require(rho_w > 0, "rho_w must be positive");
    double formula = cmix * mix.R_wc / rho_w -
                     cmix * (mix.f_alpha * mix.omega_alpha * dV_alpha +
                             mix.f_beta * mix.omega_beta * dV_beta +
                             mix.f_gamma * mix.omega_gamma * dV_gamma);
    if (formula < 0 && !mix.pinned_phi0)
        throw InvalidParameterError(
            "derived initial porosity is negative: " + std::to_string(formula));
    if (mix.pinned_phi0) return {*mix.pinned_phi0, formula, true};
    return {formula, formula, false};
}

namespace {

MixtureSpec mixture_spec(int which) {
    // rho_cem, R_wc, R_ac, phi0 vary across mixtures; constituent fractions
    // are reused from the base recipe.
    MixtureSpec m;
    switch (which) {
        case 1: m.rho_cem = 3.15; m.R_wc = 0.599; m.R_ac = 5.39; m.pinned_phi0 = 0.113; break;
        case 2: m.rho_cem = 2.62; m.R_wc = 0.364; m.R_ac = 3.13; m.pinned_phi0 = 0.074; break;
        case 3: m.rho_cem = 2.83; m.R_wc = 0.333; m.R_ac = 2.86; m.pinned_phi0 = 0.066; break;
        case 4: m.rho_cem = 3.07; m.R_wc = 0.297; m.R_ac = 3.12; m.pinned_phi0 = 0.045; break;
        default: throw NotFoundError("unknown mixture " + std::to_string(which));
    }
    return m;
}

ParameterSet from_mixture(const MixtureSpec& mix) {
    ParameterSet p;  // defaults carry the base-case constants
    p.rho_cem = mix.rho_cem;
    p.R_wc = mix.R_wc;
    p.R_ac = mix.R_ac;
    p.omega_alpha = mix.omega_alpha;
    p.omega_beta = mix.omega_beta;
    p.omega_gamma = mix.omega_gamma;
    p.f_alpha = mix.f_alpha;
    p.f_beta = mix.f_beta;
    p.f_gamma = mix.f_gamma;
    double cmix = derive_cmix(mix, p.rho_w, p.rho_agg);
    auto c0 = derive_initial_concentrations(mix, cmix);
    p.C_alpha0 = c0.C_alpha0;
    p.C_beta0 = c0.C_beta0;
    auto por = derive_initial_porosity(mix, cmix, p.dV_alpha, p.dV_beta,
                                       p.dV_gamma, p.rho_w);
    p.phi0 = por.used;
    p.theta_max = por.used;
    return p;
}

}  // namespace

ParameterSet preset(const std::string& name) {
    ParameterSet p;
    if (name == "base") {
        // Tabulated base-case values; defaults already match, but phi0 and the
        // initial concentrations are pinned rather than re-derived.
        p.phi0 = 0.067;
        p.theta_max = 0.067;
        p.C_alpha0 = 0.145;
        p.C_beta0 = 0.076;
    } else if (name == "mixture1") {
        p = from_mixture(mixture_spec(1));
    } else if (name == "mixture2") {
        p = from_mixture(mixture_spec(2));
    } else if (name == "mixture3") {
        p = from_mixture(mixture_spec(3));
    } else if (name == "mixture4") {
        p = from_mixture(mixture_spec(4));
    } else if (name == "no_reaction") {
        p = preset("base");
        p.k_alpha = 0.0;
        p.k_beta = 0.0;
        p.k_prec = 0.0;
    } else if (name == "decoupled_porosity") {
        p = preset("base");
        p.porosity_coupling = false;
    } else if (name == "relaxed_cutoff") {
        p = preset("base");
        p.epsilon_cutoff = 5e-5;
    } else {
        throw NotFoundError("unknown preset '" + name + "'");
    }
    p.validate();
    return p;
}

std::vector<std::string> preset_names() {
    return {"base",        "mixture1",           "mixture2",
            "mixture3",    "mixture4",           "no_reaction",
            "decoupled_porosity", "relaxed_cutoff"};
}

void apply_override(ParameterSet& p, const std::string& key,
                    const std::string& value) {
    if (key == "porosity_coupling") {
        if (value == "1" || value == "true")
            p.porosity_coupling = true;
        else if (value == "0" || value == "false")
            p.porosity_coupling = false;
        else
            throw InvalidParameterError(
                "porosity_coupling must be 0/1/true/false, got '" + value + "'");
        return;
    }
    for (const auto& f : kFields) {
        if (key == f.name) {
            p.*(f.member) = parse_double(key, value);
            return;
        }
    }
    throw InvalidParameterError("unknown config key '" + key + "'");
}

ParameterSet parse_config(std::istream& in, const ParameterSet& base) {
    ParameterSet p = base;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameterError("line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            apply_override(p, key, value);
        } catch (const InvalidParameterError& e) {
            throw InvalidParameterError("line " + std::to_string(lineno) + ": " +
                                        e.what());
        }
    }
    return p;
}

ParameterSet parse_config_file(const std::string& path,
                               const ParameterSet& base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_config(in, base);
}

std::string dump_config(const ParameterSet& p) {
    std::ostringstream out;
    for (const auto& f : kFields)
        out << f.name << "=" << format_double(p.*(f.member)) << "\n";
    out << "porosity_coupling=" << (p.porosity_coupling ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace rewet
