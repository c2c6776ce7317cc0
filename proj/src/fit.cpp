#include "atomcav/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace atomcav {

namespace {

std::vector<double> point_weights(const Spectrum& spectrum) {
    std::vector<double> w(spectrum.size(), 1.0);
    if (spectrum.sigma.size() == spectrum.size()) {
        for (std::size_t i = 0; i < w.size(); ++i)
            if (spectrum.sigma[i] > 0) w[i] = 1.0 / spectrum.sigma[i];
    }
    return w;
}

// Weighted residuals r_i = (model_i - data_i) / sigma_i.
void residuals(const Spectrum& spec, const std::vector<double>& w, const double p[3],
               double kappa, double gamma, std::vector<double>& r) {
    r.resize(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        const double model =
            transmission_raw(spec.detuning_MHz[i], p[0], p[1], kappa, gamma, p[2]);
        r[i] = (model - spec.transmission[i]) * w[i];
    }
}

double chi_square(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

// Solves the symmetric 3x3 system A x = b by Gaussian elimination with
// partial pivoting. Returns false on a (numerically) singular matrix.
bool solve3(const double A_in[3][3], const double b_in[3], double x[3]) {
    double A[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) A[i][j] = A_in[i][j];
        A[i][3] = b_in[i];
    }
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::fabs(A[row][col]) > std::fabs(A[pivot][col])) pivot = row;
        if (std::fabs(A[pivot][col]) < 1e-300) return false;
        if (pivot != col)
            for (int j = 0; j < 4; ++j) std::swap(A[col][j], A[pivot][j]);
        for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            const double f = A[row][col] / A[col][col];
            for (int j = col; j < 4; ++j) A[row][j] -= f * A[col][j];
        }
    }
    for (int i = 0; i < 3; ++i) x[i] = A[i][3] / A[i][i];
    return true;
}

bool invert3(const double A[3][3], double inv[3][3]) {
    for (int col = 0; col < 3; ++col) {
        double e[3] = {0, 0, 0};
        e[col] = 1.0;
        double x[3];
        if (!solve3(A, e, x)) return false;
        for (int row = 0; row < 3; ++row) inv[row][col] = x[row];
    }
    return true;
}

void jacobian_at(const Spectrum& spec, const std::vector<double>& w, const double p[3],
                 double kappa, double gamma, std::vector<std::array<double, 3>>& J) {
    J.resize(spec.size());
    std::vector<double> r_plus, r_minus;
    for (int j = 0; j < 3; ++j) {
        const double h = 1e-5 * std::max(std::fabs(p[j]), 1e-2);
        double pp[3] = {p[0], p[1], p[2]};
        pp[j] = p[j] + h;
        residuals(spec, w, pp, kappa, gamma, r_plus);
        pp[j] = p[j] - h;
        residuals(spec, w, pp, kappa, gamma, r_minus);
        const double inv2h = 1.0 / (2.0 * h);
        for (std::size_t i = 0; i < spec.size(); ++i)
            J[i][static_cast<std::size_t>(j)] = (r_plus[i] - r_minus[i]) * inv2h;
    }
}

}  // namespace

SpectrumParams initial_guess(const Spectrum& spectrum, double kappa_MHz, double gamma_MHz) {
    const std::size_t n = spectrum.size();
    if (n < 5)
        throw std::invalid_argument("initial_guess: need at least 5 points");
    if (spectrum.transmission.size() != n)
        throw std::invalid_argument("initial_guess: grid/transmission size mismatch");

    // 5-point moving average knocks down point noise before peak picking.
    std::vector<double> smooth(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        int cnt = 0;
        for (int k = -2; k <= 2; ++k) {
            const auto j = static_cast<std::ptrdiff_t>(i) + k;
            if (j >= 0 && j < static_cast<std::ptrdiff_t>(n)) {
                acc += spectrum.transmission[static_cast<std::size_t>(j)];
                ++cnt;
            }
        }
        smooth[i] = acc / cnt;
    }

    struct Peak {
        double pos;
        double height;
    };
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (smooth[i] > smooth[i - 1] && smooth[i] >= smooth[i + 1])
            peaks.push_back({spectrum.detuning_MHz[i], smooth[i]});

    SpectrumParams guess;
    guess.kappa_MHz = kappa_MHz;
    guess.gamma_MHz = gamma_MHz;
    guess.amplitude_scale = std::max(
        *std::max_element(spectrum.transmission.begin(), spectrum.transmission.end()), 1e-6);

    if (!peaks.empty()) {
        std::sort(peaks.begin(), peaks.end(),
                  [](const Peak& a, const Peak& b) { return a.height > b.height; });
        // Resolved modes sit at least a linewidth apart; anything closer to
        // the tallest peak is its own noise shoulder, not a second mode.
        const Peak* second = nullptr;
        for (std::size_t i = 1; i < peaks.size(); ++i) {
            if (std::fabs(peaks[i].pos - peaks[0].pos) >= kappa_MHz) {
                second = &peaks[i];
                break;
            }
        }
        if (second) {
            // modes near delta_ca/2 +- Omega': separation estimates 2*Omega,
            // the position sum estimates delta_ca
            guess.omega_eff_MHz = 0.5 * std::fabs(peaks[0].pos - second->pos);
            guess.delta_ca_MHz = std::clamp(peaks[0].pos + second->pos, -2.0 * kappa_MHz,
                                            2.0 * kappa_MHz);
        }
    }
    return guess;
}

namespace {

struct LmOutcome {
    double p[3];
    double chi2 = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Damped least squares from one starting point.
LmOutcome lm_minimize(const Spectrum& spectrum, const std::vector<double>& w,
                      double kappa_MHz, double gamma_MHz, const double p0[3]) {
    double p[3] = {p0[0], p0[1], p0[2]};

    std::vector<double> r, r_try;
    residuals(spectrum, w, p, kappa_MHz, gamma_MHz, r);
    double chi2 = chi_square(r);

    std::vector<std::array<double, 3>> J;
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;

    for (; iter < 500; ++iter) {
        jacobian_at(spectrum, w, p, kappa_MHz, gamma_MHz, J);

        double JtJ[3][3] = {{0}};
        double g[3] = {0, 0, 0};  // -J^T r
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (int a = 0; a < 3; ++a) {
                g[a] -= J[i][static_cast<std::size_t>(a)] * r[i];
                for (int b = a; b < 3; ++b)
                    JtJ[a][b] += J[i][static_cast<std::size_t>(a)] * J[i][static_cast<std::size_t>(b)];
            }
        }
        JtJ[1][0] = JtJ[0][1];
        JtJ[2][0] = JtJ[0][2];
        JtJ[2][1] = JtJ[1][2];

        const double grad_norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
        if (grad_norm < 1e-10) {
            converged = true;
            break;
        }

        bool stepped = false;
        while (lambda < 1e12) {
            double A[3][3];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    A[a][b] = JtJ[a][b] + (a == b ? lambda * std::max(JtJ[a][a], 1e-12) : 0.0);
            double step[3];
            if (!solve3(A, g, step)) {
                lambda *= 10.0;
                continue;
            }
            // once damping has shrunk the proposal below the step tolerance,
            // no admissible move remains: converged
            double rel_step = 0.0;
            for (int a = 0; a < 3; ++a)
                rel_step = std::max(rel_step,
                                    std::fabs(step[a]) / std::max(std::fabs(p[a]), 1e-12));
            if (rel_step < 1e-8) {
                converged = true;
                break;
            }
            double p_try[3] = {p[0] + step[0], p[1] + step[1], p[2] + step[2]};
            if (p_try[0] < 0) p_try[0] = -p_try[0];  // omega >= 0 by reflection
            residuals(spectrum, w, p_try, kappa_MHz, gamma_MHz, r_try);
            const double chi2_try = chi_square(r_try);
            if (chi2_try < chi2) {
                p[0] = p_try[0];
                p[1] = p_try[1];
                p[2] = p_try[2];
                r.swap(r_try);
                chi2 = chi2_try;
                lambda = std::max(lambda / 10.0, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 10.0;
        }
        if (converged) break;
        if (!stepped) break;  // damping exhausted without descent: stalled
    }

    LmOutcome out;
    out.p[0] = p[0];
    out.p[1] = p[1];
    out.p[2] = p[2];
    out.chi2 = chi2;
    out.converged = converged;
    out.iterations = iter;
    return out;
}

}  // namespace

FitResult fit_spectrum(const Spectrum& spectrum, double kappa_MHz, double gamma_MHz,
                       const std::optional<SpectrumParams>& init) {
    if (kappa_MHz <= 0 || gamma_MHz <= 0)
        throw std::domain_error("fit_spectrum: kappa and gamma must be positive");
    if (spectrum.size() < 5 || spectrum.transmission.size() != spectrum.size())
        throw std::invalid_argument("fit_spectrum: need a spectrum with >= 5 points");

    const std::vector<double> w = point_weights(spectrum);

    const SpectrumParams seed =
        init ? *init : initial_guess(spectrum, kappa_MHz, gamma_MHz);
    const double p0[3] = {std::fabs(seed.omega_eff_MHz), seed.delta_ca_MHz,
                          std::max(seed.amplitude_scale, 1e-9)};
    LmOutcome best = lm_minimize(spectrum, w, kappa_MHz, gamma_MHz, p0);

    if (!init) {
        // second start from the featureless seed; a mis-picked peak pair can
        // otherwise strand the fit in a far-off basin
        const double flat[3] = {0.0, 0.0, p0[2]};
        const LmOutcome alt = lm_minimize(spectrum, w, kappa_MHz, gamma_MHz, flat);
        if (alt.chi2 < best.chi2) best = alt;
    }

    const double* p = best.p;
    const double chi2 = best.chi2;

    FitResult result;
    result.omega_eff_MHz = p[0];
    result.delta_ca_MHz = p[1];
    result.amplitude_scale = p[2];
    result.residual_norm = std::sqrt(chi2);
    result.converged = best.converged;
    result.iterations = best.iterations;

    // 1-sigma uncertainties from the linearized covariance, scaled by the
    // reduced chi-square.
    std::vector<std::array<double, 3>> J;
    jacobian_at(spectrum, w, p, kappa_MHz, gamma_MHz, J);
    double JtJ[3][3] = {{0}};
    for (std::size_t i = 0; i < J.size(); ++i)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                JtJ[a][b] += J[i][static_cast<std::size_t>(a)] * J[i][static_cast<std::size_t>(b)];
    double cov[3][3];
    if (invert3(JtJ, cov)) {
        const auto m = static_cast<double>(spectrum.size());
        const double chi2_red = m > 3 ? chi2 / (m - 3.0) : 1.0;
        for (int a = 0; a < 3; ++a)
            result.uncertainties[static_cast<std::size_t>(a)] =
                std::sqrt(std::max(cov[a][a] * chi2_red, 0.0));
    } else {
        result.uncertainties = {std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN(),
                                std::numeric_limits<double>::quiet_NaN()};
    }
    return result;
}

std::vector<std::array<double, 3>> model_jacobian(const Spectrum& spectrum,
                                                  double omega_eff_MHz, double delta_ca_MHz,
                                                  double amplitude_scale, double kappa_MHz,
                                                  double gamma_MHz) {
    const std::vector<double> w = point_weights(spectrum);
    const double p[3] = {omega_eff_MHz, delta_ca_MHz, amplitude_scale};
    std::vector<std::array<double, 3>> J;
    jacobian_at(spectrum, w, p, kappa_MHz, gamma_MHz, J);
    return J;
}

ScalingFit sqrt_scaling_fit(const std::vector<std::pair<int, double>>& pairs) {
    if (pairs.size() < 2)
        throw std::invalid_argument("sqrt_scaling_fit: need at least 2 (N, omega) pairs");

    ScalingFit fit;
    fit.pairs = pairs;
    // Deterministic accumulation order regardless of input order.
    std::sort(fit.pairs.begin(), fit.pairs.end());

    double num = 0.0, den = 0.0;
    for (const auto& [N, omega] : fit.pairs) {
        if (N < 1)
            throw std::domain_error("sqrt_scaling_fit: N must be >= 1");
        if (!(omega > 0))
            throw std::domain_error("sqrt_scaling_fit: omega_N must be positive");
        num += omega * std::sqrt(static_cast<double>(N));
        den += static_cast<double>(N);
    }
    fit.g0_hat_MHz = num / den;

    const HomogeneityStats stats = homogeneity_stats(fit.pairs);
    fit.per_N_g_MHz = stats.per_N_g_MHz;
    fit.mean_g_MHz = stats.mean_g_MHz;
    fit.max_rel_dev = stats.max_rel_dev;
    return fit;
}

HomogeneityStats homogeneity_stats(const std::vector<std::pair<int, double>>& pairs) {
    if (pairs.empty())
        throw std::invalid_argument("homogeneity_stats: need at least 1 (N, omega) pair");
    std::vector<std::pair<int, double>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());

    HomogeneityStats stats;
    stats.per_N_g_MHz.reserve(sorted.size());
    double sum = 0.0;
    for (const auto& [N, omega] : sorted) {
        if (N < 1)
            throw std::domain_error("homogeneity_stats: N must be >= 1");
        if (!(omega > 0))
            throw std::domain_error("homogeneity_stats: omega_N must be positive");
        const double g = omega / std::sqrt(static_cast<double>(N));
        stats.per_N_g_MHz.push_back(g);
        sum += g;
    }
    stats.mean_g_MHz = sum / static_cast<double>(sorted.size());
    for (double g : stats.per_N_g_MHz)
        stats.max_rel_dev =
            std::max(stats.max_rel_dev, std::fabs(g / stats.mean_g_MHz - 1.0));
    return stats;
}

}  // namespace atomcav
