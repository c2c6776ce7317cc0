#include "atomcav/physics.hpp"

#include <cmath>
#include <stdexcept>

namespace atomcav {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void CavityParams::validate() const {
    if (g0_max_MHz <= 0 || kappa_MHz <= 0 || gamma_MHz <= 0)
        throw std::domain_error("CavityParams: rates must be strictly positive");
    if (lambda_probe_nm <= 0 || lambda_lock_nm <= 0 || waist_um <= 0 ||
        length_mm <= 0 || beat_cycle_um <= 0)
        throw std::domain_error("CavityParams: lengths must be strictly positive");
    if (finesse <= 1)
        throw std::domain_error("CavityParams: finesse must exceed 1");
    if (lambda_probe_nm == lambda_lock_nm)
        throw std::domain_error("CavityParams: probe and lock wavelengths must differ");
}

void TweezerParams::validate() const {
    if (n_traps < 1)
        throw std::domain_error("TweezerParams: n_traps must be >= 1");
    if (spacing_um <= 0)
        throw std::domain_error("TweezerParams: spacing must be positive");
    if (trap_depth_mK <= 0 || tweezer_waist_um <= 0 || power_per_trap_mW <= 0)
        throw std::domain_error("TweezerParams: depth, waist and power must be positive");
}

double TweezerParams::site_position_um(int index) const {
    if (index < 0 || index >= n_traps)
        throw std::domain_error("TweezerParams: site index out of range");
    return (index - (n_traps - 1) / 2.0) * spacing_um;
}

double cooperativity(double g0_MHz, double kappa_MHz, double gamma_MHz) {
    if (g0_MHz <= 0 || kappa_MHz <= 0 || gamma_MHz <= 0)
        throw std::domain_error("cooperativity: inputs must be strictly positive");
    return g0_MHz * g0_MHz / (2.0 * kappa_MHz * gamma_MHz);
}

double transverse_coupling_factor(double r_um, double waist_um) {
    if (waist_um <= 0)
        throw std::domain_error("transverse_coupling_factor: waist must be positive");
    if (r_um < 0)
        throw std::domain_error("transverse_coupling_factor: r must be >= 0");
    const double u = r_um / waist_um;
    return std::exp(-u * u);
}

double axial_coupling_factor(double x_um, double beat_cycle_um) {
    if (beat_cycle_um <= 0)
        throw std::domain_error("axial_coupling_factor: beat cycle must be positive");
    return std::fabs(std::cos(kPi * x_um / beat_cycle_um));
}

double beat_decoupling_distance_um(double lambda_lock_nm, double lambda_probe_nm) {
    if (lambda_lock_nm <= 0 || lambda_probe_nm <= 0)
        throw std::domain_error("beat_decoupling_distance: wavelengths must be positive");
    if (lambda_lock_nm == lambda_probe_nm)
        throw std::domain_error("beat_decoupling_distance: wavelengths must differ");
    const double nm =
        lambda_lock_nm * lambda_probe_nm / (4.0 * std::fabs(lambda_probe_nm - lambda_lock_nm));
    return nm * 1e-3;
}

double site_coupling_MHz(const CavityParams& params, const AtomSite& site) {
    params.validate();
    return params.g0_max_MHz *
           axial_coupling_factor(site.axial_x_um, params.beat_cycle_um) *
           transverse_coupling_factor(site.transverse_r_um, params.waist_um);
}

double effective_collective_coupling_MHz(const std::vector<double>& g_list_MHz) {
    double sum_sq = 0.0;
    for (double g : g_list_MHz) {
        if (g < 0)
            throw std::domain_error("effective_collective_coupling: couplings must be >= 0");
        sum_sq += g * g;
    }
    return std::sqrt(sum_sq);
}

AtomSite apply_position_jitter(const AtomSite& site, double sigma_um, RngStream& rng) {
    if (sigma_um < 0)
        throw std::domain_error("apply_position_jitter: sigma must be >= 0");
    if (sigma_um == 0.0)
        return site;
    AtomSite out = site;
    out.axial_x_um = site.axial_x_um + rng.gaussian(0.0, sigma_um);
    // transverse offset is a radius: jitter the underlying 2D coordinates
    const double y = site.transverse_r_um + rng.gaussian(0.0, sigma_um);
    const double z = rng.gaussian(0.0, sigma_um);
    out.transverse_r_um = std::hypot(y, z);
    return out;
}

}  // namespace atomcav
