#ifndef ATOMCAV_SPECTRA_HPP
#define ATOMCAV_SPECTRA_HPP

#include <optional>
#include <vector>

#include "atomcav/rng.hpp"

namespace atomcav {

struct SpectrumParams {
    double omega_eff_MHz = 0.0;   // collective coupling
    double delta_ca_MHz = 0.0;    // cavity-atom detuning
    double kappa_MHz = 2.6;
    double gamma_MHz = 1.1;
    double amplitude_scale = 1.0;

    void validate() const;
};

struct Spectrum {
    std::vector<double> detuning_MHz;   // probe-atom detuning grid, strictly increasing
    std::vector<double> transmission;
    std::vector<double> sigma;          // per-point noise sigma; empty = unknown

    std::size_t size() const { return detuning_MHz.size(); }
};

// Steady-state cavity transmission vs probe-atom detuning:
//   scale * k^2 (g^2 + d^2) / [(W^2 - d^2 + D d + g k)^2 + (k d + g d - g D)^2]
// with d = delta_pa, D = delta_ca, W = omega_eff, k = kappa, g = gamma.
double transmission_raw(double delta_pa_MHz, double omega_eff_MHz, double delta_ca_MHz,
                        double kappa_MHz, double gamma_MHz, double amplitude_scale = 1.0);

double transmission(double delta_pa_MHz, const SpectrumParams& params);

// kappa^2 / (kappa^2 + delta^2): the bare-cavity limit of the full formula.
double empty_cavity_lorentzian(double delta_pa_MHz, double kappa_MHz);

// Model curve plus additive Gaussian noise of width noise_sigma, clamped at
// zero. Deterministic for a given stream state.
Spectrum synthesize_spectrum(const std::vector<double>& grid_MHz,
                             const SpectrumParams& params, double noise_sigma,
                             RngStream& rng);

// Uniform grid of n points spanning [-span, +span].
std::vector<double> make_detuning_grid(double span_MHz, int n_points);

// Separation of the two transmission maxima of the noiseless curve, located
// by dense scan plus local refinement. std::nullopt when the curve has a
// single maximum (splitting unresolved).
std::optional<double> expected_splitting_MHz(const SpectrumParams& params);

}  // namespace atomcav

#endif
