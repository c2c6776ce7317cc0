#ifndef ATOMCAV_FIT_HPP
#define ATOMCAV_FIT_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "atomcav/spectra.hpp"

namespace atomcav {

struct FitResult {
    double omega_eff_MHz = 0.0;
    double delta_ca_MHz = 0.0;
    double amplitude_scale = 1.0;
    double residual_norm = 0.0;              // sqrt(weighted chi-square) at the optimum
    std::array<double, 3> uncertainties{};   // 1-sigma for (omega, delta_ca, scale)
    bool converged = false;
    int iterations = 0;
};

struct ScalingFit {
    std::vector<std::pair<int, double>> pairs;  // (N, omega_N), sorted by N
    double g0_hat_MHz = 0.0;                    // least-squares slope of omega = g sqrt(N)
    std::vector<double> per_N_g_MHz;            // omega_N / sqrt(N), same order as pairs
    double mean_g_MHz = 0.0;
    double max_rel_dev = 0.0;                   // max |per_N_g / mean_g - 1|
};

struct HomogeneityStats {
    double mean_g_MHz = 0.0;
    double max_rel_dev = 0.0;
    std::vector<double> per_N_g_MHz;
};

// Seeds the spectrum fit from the two tallest local maxima of the (lightly
// smoothed) data: omega0 = half their separation, delta_ca0 = sum of their
// positions, scale0 = peak value. Falls back to omega0 = delta_ca0 = 0 when
// only one peak is found. Requires at least 5 points.
SpectrumParams initial_guess(const Spectrum& spectrum, double kappa_MHz, double gamma_MHz);

// Weighted least squares over (omega_eff, delta_ca, amplitude_scale) with
// kappa and gamma held fixed. Levenberg-style damping (x10 on a rejected
// step, /10 on an accepted one), central-difference Jacobian, omega kept
// non-negative by reflection. Converged when the relative parameter step
// drops below 1e-8 or the gradient norm below 1e-10; gives up after 500
// iterations and returns the best point found with converged = false.
// Parameter sigmas come from the linearized covariance at the optimum,
// scaled by the reduced chi-square.
FitResult fit_spectrum(const Spectrum& spectrum, double kappa_MHz, double gamma_MHz,
                       const std::optional<SpectrumParams>& init = std::nullopt);

// Central-difference Jacobian of the weighted residual vector with respect
// to (omega_eff, delta_ca, amplitude_scale); row i corresponds to grid point
// i. Exposed for consistency checks of the least-squares engine.
std::vector<std::array<double, 3>> model_jacobian(const Spectrum& spectrum,
                                                  double omega_eff_MHz, double delta_ca_MHz,
                                                  double amplitude_scale, double kappa_MHz,
                                                  double gamma_MHz);

// Closed-form least squares of omega = g sqrt(N):
//   g0_hat = sum(omega_i sqrt(N_i)) / sum(N_i)
// plus the per-N single-atom couplings and their spread. Needs >= 2 pairs.
ScalingFit sqrt_scaling_fit(const std::vector<std::pair<int, double>>& pairs);

// per_N_g = omega_N / sqrt(N) with mean and maximum relative deviation.
HomogeneityStats homogeneity_stats(const std::vector<std::pair<int, double>>& pairs);

}  // namespace atomcav

#endif
