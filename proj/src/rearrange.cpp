#include "atomcav/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace atomcav {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
}  // namespace

std::vector<int> target_block_indices(int n_target, const TweezerParams& geometry) {
    geometry.validate();
    if (n_target < 1 || n_target > geometry.n_traps)
        throw std::domain_error("target_block_indices: need 1 <= n_target <= n_traps");

    int best_start = 0;
    double best_center = std::numeric_limits<double>::infinity();
    for (int s = 0; s + n_target <= geometry.n_traps; ++s) {
        const double center = 0.5 * (geometry.site_position_um(s) +
                                     geometry.site_position_um(s + n_target - 1));
        const double a = std::fabs(center);
        const double b = std::fabs(best_center);
        if (a < b || (a == b && center < best_center)) {
            best_center = center;
            best_start = s;
        }
    }
    std::vector<int> block(static_cast<std::size_t>(n_target));
    for (int j = 0; j < n_target; ++j) block[static_cast<std::size_t>(j)] = best_start + j;
    return block;
}

std::optional<MovePlan> plan_rearrangement(const OccupancyState& occupancy, int n_target,
                                           const TweezerParams& geometry,
                                           double sweep_duration_us) {
    geometry.validate();
    if (n_target < 1)
        throw std::domain_error("plan_rearrangement: n_target must be >= 1");
    if (static_cast<int>(occupancy.occupied.size()) != geometry.n_traps)
        throw std::invalid_argument("plan_rearrangement: occupancy length != n_traps");
    if (sweep_duration_us <= 0)
        throw std::domain_error("plan_rearrangement: sweep duration must be positive");

    std::vector<int> sources;
    for (int i = 0; i < geometry.n_traps; ++i)
        if (occupancy.occupied[static_cast<std::size_t>(i)]) sources.push_back(i);
    const int m = static_cast<int>(sources.size());
    if (m < n_target) return std::nullopt;  // insufficient atoms: reload

    const std::vector<int> targets = target_block_indices(n_target, geometry);

    // Minimal total displacement over source subsets with order kept. Site
    // distances are integers, so the DP is exact: dp[i][j] = cheapest way to
    // fill the first j targets from the first i sources.
    const int n = n_target;
    std::vector<std::vector<std::int64_t>> dp(static_cast<std::size_t>(m) + 1,
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n) + 1, kInf));
    for (int i = 0; i <= m; ++i) dp[static_cast<std::size_t>(i)][0] = 0;
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= std::min(i, n); ++j) {
            const std::int64_t skip = dp[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
            const std::int64_t cost =
                std::abs(sources[static_cast<std::size_t>(i) - 1] - targets[static_cast<std::size_t>(j) - 1]);
            const std::int64_t match =
                dp[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] + cost;
            dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::min(skip, match);
        }
    }

    MovePlan plan;
    plan.sweep_duration_us = sweep_duration_us;
    plan.moves.resize(static_cast<std::size_t>(n));
    int i = m, j = n;
    while (j > 0) {
        if (i > j && dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                         dp[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)]) {
            --i;  // source i-1 not retained
            continue;
        }
        plan.moves[static_cast<std::size_t>(j) - 1] = {sources[static_cast<std::size_t>(i) - 1],
                                                       targets[static_cast<std::size_t>(j) - 1]};
        --i;
        --j;
    }

    std::vector<bool> retained(static_cast<std::size_t>(geometry.n_traps), false);
    for (const auto& [src, tgt] : plan.moves) retained[static_cast<std::size_t>(src)] = true;
    for (int t = 0; t < geometry.n_traps; ++t)
        if (!retained[static_cast<std::size_t>(t)]) plan.switch_off.push_back(t);

    plan.target_positions_um.reserve(static_cast<std::size_t>(n));
    for (int tgt : targets) plan.target_positions_um.push_back(geometry.site_position_um(tgt));
    return plan;
}

double total_displacement_um(const MovePlan& plan, const TweezerParams& geometry) {
    geometry.validate();
    double total = 0.0;
    for (const auto& [src, tgt] : plan.moves)
        total += std::abs(src - tgt) * geometry.spacing_um;
    return total;
}

double minimum_jerk_fraction(double tau) {
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return 1.0;
    const double t3 = tau * tau * tau;
    return t3 * (10.0 + tau * (-15.0 + 6.0 * tau));
}

ToneSchedule synthesize_tone_sweeps(const MovePlan& plan, const TweezerParams& geometry,
                                    double duration_us, double sample_rate_MSps,
                                    double aod_MHz_per_um, double center_freq_MHz) {
    geometry.validate();
    if (duration_us <= 0)
        throw std::domain_error("synthesize_tone_sweeps: duration must be positive");
    if (sample_rate_MSps <= 0)
        throw std::domain_error("synthesize_tone_sweeps: sample rate must be positive");
    if (aod_MHz_per_um <= 0)
        throw std::domain_error("synthesize_tone_sweeps: AOD calibration must be positive");

    const auto n_samples =
        static_cast<std::size_t>(std::llround(duration_us * sample_rate_MSps)) + 1;
    if (n_samples < 2)
        throw std::domain_error("synthesize_tone_sweeps: fewer than 2 samples");

    ToneSchedule schedule;
    schedule.time_us.resize(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s)
        schedule.time_us[s] = duration_us * static_cast<double>(s) /
                              static_cast<double>(n_samples - 1);

    schedule.tones.reserve(plan.moves.size());
    for (const auto& [src, tgt] : plan.moves) {
        ToneTrack track;
        track.tone_index = src;
        track.freq_MHz.resize(n_samples);
        const double x0 = geometry.site_position_um(src);
        const double x1 = geometry.site_position_um(tgt);
        for (std::size_t s = 0; s < n_samples; ++s) {
            const double tau = schedule.time_us[s] / duration_us;
            const double x = x0 + (x1 - x0) * minimum_jerk_fraction(tau);
            track.freq_MHz[s] = center_freq_MHz + aod_MHz_per_um * x;
        }
        schedule.tones.push_back(std::move(track));
    }

    // Order preservation must hold at every instant; a violation means the
    // plan was malformed.
    for (std::size_t s = 0; s < n_samples; ++s)
        for (std::size_t k = 1; k < schedule.tones.size(); ++k)
            if (!(schedule.tones[k - 1].freq_MHz[s] < schedule.tones[k].freq_MHz[s]))
                throw std::logic_error("synthesize_tone_sweeps: tone trajectories cross");

    return schedule;
}

namespace {

struct WaveTable {
    // cos/sin of tone k at sample j, for incremental phase updates.
    std::vector<std::vector<double>> ct, st;
    std::size_t n_samples = 0;
};

WaveTable build_wave_table(std::size_t n_tones, int oversample) {
    WaveTable table;
    table.n_samples = n_tones * static_cast<std::size_t>(oversample);
    table.ct.resize(n_tones);
    table.st.resize(n_tones);
    for (std::size_t k = 0; k < n_tones; ++k) {
        table.ct[k].resize(table.n_samples);
        table.st[k].resize(table.n_samples);
        for (std::size_t j = 0; j < table.n_samples; ++j) {
            const double theta = 2.0 * kPi * static_cast<double>(k + 1) *
                                 static_cast<double>(j) / static_cast<double>(table.n_samples);
            table.ct[k][j] = std::cos(theta);
            table.st[k][j] = std::sin(theta);
        }
    }
    return table;
}

double crest_of(const std::vector<double>& w) {
    double peak = 0.0, sum_sq = 0.0;
    for (double v : w) {
        peak = std::max(peak, std::fabs(v));
        sum_sq += v * v;
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(w.size()));
    return rms > 0 ? peak / rms : 0.0;
}

std::vector<double> waveform_from(const WaveTable& table, const std::vector<double>& amps,
                                  const std::vector<double>& phases) {
    std::vector<double> w(table.n_samples, 0.0);
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double c = amps[k] * std::cos(phases[k]);
        const double s = amps[k] * std::sin(phases[k]);
        for (std::size_t j = 0; j < table.n_samples; ++j)
            w[j] += c * table.ct[k][j] - s * table.st[k][j];
    }
    return w;
}

void check_tone_args(std::size_t n_tones, const std::vector<double>& amplitudes) {
    if (n_tones < 1)
        throw std::domain_error("multitone: need at least one tone");
    if (amplitudes.size() != n_tones)
        throw std::invalid_argument("multitone: amplitude count != tone count");
    double total = 0.0;
    for (double a : amplitudes) {
        if (a < 0) throw std::domain_error("multitone: amplitudes must be >= 0");
        total += a;
    }
    if (total <= 0) throw std::domain_error("multitone: all amplitudes are zero");
}

}  // namespace

double multitone_crest_factor(const std::vector<double>& amplitudes,
                              const std::vector<double>& phases, int oversample) {
    check_tone_args(amplitudes.size(), amplitudes);
    if (phases.size() != amplitudes.size())
        throw std::invalid_argument("multitone_crest_factor: phase count != tone count");
    if (oversample < 2)
        throw std::domain_error("multitone_crest_factor: oversample must be >= 2");
    const WaveTable table = build_wave_table(amplitudes.size(), oversample);
    return crest_of(waveform_from(table, amplitudes, phases));
}

std::vector<double> optimize_tone_phases(int n_tones, const std::vector<double>& amplitudes) {
    check_tone_args(static_cast<std::size_t>(n_tones), amplitudes);
    const auto n = static_cast<std::size_t>(n_tones);

    // Quadratic (Newman) phase ramp spreads the tones' constructive overlap.
    std::vector<double> phases(n);
    for (std::size_t k = 0; k < n; ++k)
        phases[k] = -kPi * static_cast<double>(k * k) / static_cast<double>(n);
    if (n == 1) return phases;

    const WaveTable table = build_wave_table(n, 64);
    std::vector<double> w = waveform_from(table, amplitudes, phases);
    double best = crest_of(w);

    std::vector<double> w_try(table.n_samples);
    double step = 0.5;
    for (int pass = 0; pass < 400 && step > 1e-4; ++pass) {
        bool improved = false;
        for (std::size_t k = 0; k < n; ++k) {
            for (double sign : {+1.0, -1.0}) {
                const double phi_new = phases[k] + sign * step;
                const double dc = amplitudes[k] * (std::cos(phi_new) - std::cos(phases[k]));
                const double ds = amplitudes[k] * (std::sin(phi_new) - std::sin(phases[k]));
                for (std::size_t j = 0; j < table.n_samples; ++j)
                    w_try[j] = w[j] + dc * table.ct[k][j] - ds * table.st[k][j];
                const double cf = crest_of(w_try);
                if (cf < best) {
                    best = cf;
                    phases[k] = phi_new;
                    w.swap(w_try);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
        // periodic clean rebuild kills accumulated float drift
        if (pass % 16 == 15) w = waveform_from(table, amplitudes, phases);
    }
    return phases;
}

std::vector<double> balance_amplitudes(std::vector<double> amplitudes,
                                       const IntensityModel& model, double target_uniformity,
                                       int max_iterations) {
    if (amplitudes.empty())
        throw std::invalid_argument("balance_amplitudes: need at least one channel");
    if (target_uniformity <= 0)
        throw std::domain_error("balance_amplitudes: target uniformity must be positive");
    if (max_iterations < 1)
        throw std::domain_error("balance_amplitudes: need at least one iteration");

    const auto n = amplitudes.size();
    double spread = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iterations; ++it) {
        const std::vector<double> intensity = model(amplitudes);
        if (intensity.size() != n)
            throw std::invalid_argument("balance_amplitudes: model returned wrong channel count");

        double mean = 0.0;
        for (double v : intensity) mean += v;
        mean /= static_cast<double>(n);
        if (!(mean > 0))
            throw balance_error("balance_amplitudes: model produced no intensity", 1.0);

        spread = 0.0;
        for (double v : intensity) spread = std::max(spread, std::fabs(v / mean - 1.0));
        if (spread < target_uniformity) return amplitudes;

        double amp_mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (intensity[i] > 0) amplitudes[i] *= std::sqrt(mean / intensity[i]);
            amp_mean += amplitudes[i];
        }
        // renormalize so the feedback only reshapes, never rescales, the set
        amp_mean /= static_cast<double>(n);
        if (amp_mean > 0)
            for (double& a : amplitudes) a /= amp_mean;
    }
    throw balance_error("balance_amplitudes: no convergence within iteration budget", spread);
}

}  // namespace atomcav
