#include "atomcav/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace atomcav {

void SpectrumParams::validate() const {
    if (omega_eff_MHz < 0)
        throw std::domain_error("SpectrumParams: omega_eff must be >= 0");
    if (kappa_MHz <= 0 || gamma_MHz <= 0)
        throw std::domain_error("SpectrumParams: kappa and gamma must be positive");
    if (amplitude_scale <= 0)
        throw std::domain_error("SpectrumParams: amplitude scale must be positive");
}

double transmission_raw(double delta_pa_MHz, double omega_eff_MHz, double delta_ca_MHz,
                        double kappa_MHz, double gamma_MHz, double amplitude_scale) {
    const double d = delta_pa_MHz;
    const double k = kappa_MHz;
    const double g = gamma_MHz;
    const double num = k * k * (g * g + d * d);
    const double re = omega_eff_MHz * omega_eff_MHz - d * d + delta_ca_MHz * d + g * k;
    const double im = k * d + g * d - g * delta_ca_MHz;
    return amplitude_scale * num / (re * re + im * im);
}

double transmission(double delta_pa_MHz, const SpectrumParams& params) {
    params.validate();
    return transmission_raw(delta_pa_MHz, params.omega_eff_MHz, params.delta_ca_MHz,
                            params.kappa_MHz, params.gamma_MHz, params.amplitude_scale);
}

double empty_cavity_lorentzian(double delta_pa_MHz, double kappa_MHz) {
    if (kappa_MHz <= 0)
        throw std::domain_error("empty_cavity_lorentzian: kappa must be positive");
    const double k2 = kappa_MHz * kappa_MHz;
    return k2 / (k2 + delta_pa_MHz * delta_pa_MHz);
}

Spectrum synthesize_spectrum(const std::vector<double>& grid_MHz,
                             const SpectrumParams& params, double noise_sigma,
                             RngStream& rng) {
    params.validate();
    if (noise_sigma < 0)
        throw std::domain_error("synthesize_spectrum: noise sigma must be >= 0");
    for (std::size_t i = 1; i < grid_MHz.size(); ++i)
        if (!(grid_MHz[i] > grid_MHz[i - 1]))
            throw std::invalid_argument("synthesize_spectrum: grid must be strictly increasing");

    Spectrum spec;
    spec.detuning_MHz = grid_MHz;
    spec.transmission.reserve(grid_MHz.size());
    spec.sigma.assign(grid_MHz.size(), noise_sigma);
    for (double d : grid_MHz) {
        double value = transmission(d, params);
        if (noise_sigma > 0) value += rng.gaussian(0.0, noise_sigma);
        spec.transmission.push_back(std::max(value, 0.0));
    }
    return spec;
}

std::vector<double> make_detuning_grid(double span_MHz, int n_points) {
    if (span_MHz <= 0 || n_points < 2)
        throw std::domain_error("make_detuning_grid: need positive span and >= 2 points");
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
        grid[static_cast<std::size_t>(i)] =
            -span_MHz + 2.0 * span_MHz * i / (n_points - 1);
    return grid;
}

namespace {

// Golden-section maximization of the transmission curve on [lo, hi].
double refine_maximum(const SpectrumParams& p, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = transmission(x1, p);
    double f2 = transmission(x2, p);
    while (b - a > 1e-10 * std::max(1.0, std::fabs(a) + std::fabs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = transmission(x2, p);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = transmission(x1, p);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

std::optional<double> expected_splitting_MHz(const SpectrumParams& params) {
    params.validate();
    const double span = std::max(
        10.0, 2.0 * (params.omega_eff_MHz + params.kappa_MHz + params.gamma_MHz +
                     std::fabs(params.delta_ca_MHz)));
    const int n = 40001;
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
        x[i] = -span + 2.0 * span * i / (n - 1);
        y[i] = transmission(x[i], params);
    }

    struct Peak {
        double pos;
        double height;
    };
    std::vector<Peak> peaks;
    for (int i = 1; i + 1 < n; ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            const double pos = refine_maximum(params, x[i - 1], x[i + 1]);
            peaks.push_back({pos, transmission(pos, params)});
        }
    }
    if (peaks.size() < 2) return std::nullopt;

    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    return std::fabs(peaks[0].pos - peaks[1].pos);
}

}  // namespace atomcav
