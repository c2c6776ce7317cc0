#include "atomcav/loading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace atomcav {

int OccupancyState::atom_count() const {
    return static_cast<int>(std::count(occupied.begin(), occupied.end(), true));
}

std::string OccupancyState::bitstring() const {
    std::string s;
    s.reserve(occupied.size());
    for (bool b : occupied) s.push_back(b ? '1' : '0');
    return s;
}

OccupancyState sample_occupancy(int n_traps, double p, RngStream& rng,
                                std::int64_t trial_id) {
    if (n_traps < 0)
        throw std::domain_error("sample_occupancy: n_traps must be >= 0");
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("sample_occupancy: p must lie in [0, 1]");
    OccupancyState state;
    state.trial_id = trial_id;
    state.occupied.resize(static_cast<std::size_t>(n_traps));
    for (int i = 0; i < n_traps; ++i) state.occupied[i] = rng.bernoulli(p);
    return state;
}

OccupancyState apply_readout_errors(const OccupancyState& state,
                                    double false_positive, double false_negative,
                                    RngStream& rng) {
    if (false_positive < 0 || false_positive > 1 || false_negative < 0 || false_negative > 1)
        throw std::domain_error("apply_readout_errors: rates must lie in [0, 1]");
    if (false_positive == 0.0 && false_negative == 0.0) return state;
    OccupancyState out = state;
    for (std::size_t i = 0; i < out.occupied.size(); ++i) {
        if (out.occupied[i]) {
            if (rng.bernoulli(false_negative)) out.occupied[i] = false;
        } else {
            if (rng.bernoulli(false_positive)) out.occupied[i] = true;
        }
    }
    return out;
}

double binomial_tail(int N, int n, double p) {
    if (n < 0)
        throw std::domain_error("binomial_tail: n must be >= 0");
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("binomial_tail: p must lie in [0, 1]");
    if (N <= 0) return 1.0;
    if (N > n) return 0.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    // Sum pmf(k) for k = N..n with each term from log-space; stable for the
    // deep tails needed here (p^40 ~ 1e-9 and far below).
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double lgn = std::lgamma(n + 1.0);
    double sum = 0.0;
    for (int k = N; k <= n; ++k) {
        const double log_pmf = lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                               k * log_p + (n - k) * log_q;
        sum += std::exp(log_pmf);
    }
    return std::min(sum, 1.0);
}

double defect_free_probability(int N, double p) {
    if (N < 0)
        throw std::domain_error("defect_free_probability: N must be >= 0");
    if (p < 0.0 || p > 1.0)
        throw std::domain_error("defect_free_probability: p must lie in [0, 1]");
    return std::pow(p, N);
}

double rearranged_success_probability(int N, int n_traps, double p, double survival) {
    if (N < 0 || N > n_traps)
        throw std::domain_error("rearranged_success_probability: need 0 <= N <= n_traps");
    if (p < 0.0 || p > 1.0 || survival < 0.0 || survival > 1.0)
        throw std::domain_error("rearranged_success_probability: probabilities must lie in [0, 1]");
    return binomial_tail(N, n_traps, p) * std::pow(survival, N);
}

double calibrate_survival(int N_ref, double target_prob, int n_traps, double p) {
    if (N_ref < 0 || N_ref > n_traps)
        throw std::domain_error("calibrate_survival: need 0 <= N_ref <= n_traps");
    const double tail = binomial_tail(N_ref, n_traps, p);
    if (!(target_prob > 0.0) || target_prob > tail)
        throw std::domain_error(
            "calibrate_survival: target probability not attainable (must lie in (0, tail])");
    if (N_ref == 0 || target_prob == tail) return 1.0;

    // tail * s^N is strictly increasing in s, so bisect on [0, 1].
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail * std::pow(mid, N_ref) < target_prob)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double rearranged_success_mc(int N, const LoadingConfig& config, double survival,
                             std::int64_t n_trials, std::uint64_t master_seed) {
    if (N < 0 || N > config.n_traps)
        throw std::domain_error("rearranged_success_mc: need 0 <= N <= n_traps");
    if (n_trials < 1)
        throw std::domain_error("rearranged_success_mc: need at least one trial");
    std::int64_t successes = 0;
    for (std::int64_t t = 0; t < n_trials; ++t) {
        const std::uint64_t stream_id =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(N)) << 32) |
            static_cast<std::uint64_t>(t);
        RngStream rng(master_seed, stream_id);
        OccupancyState occ = sample_occupancy(config.n_traps, config.p, rng, t);
        if (config.readout_false_positive > 0 || config.readout_false_negative > 0)
            occ = apply_readout_errors(occ, config.readout_false_positive,
                                       config.readout_false_negative, rng);
        if (occ.atom_count() < N) continue;
        bool all_survive = true;
        for (int k = 0; k < N; ++k)
            if (!rng.bernoulli(survival)) all_survive = false;  // draw all N for stream stability
        if (all_survive) ++successes;
    }
    return static_cast<double>(successes) / static_cast<double>(n_trials);
}

LoadingStats run_loading_campaign(
    const LoadingConfig& config, std::int64_t n_trials, std::uint64_t master_seed,
    const std::function<void(const OccupancyState&)>& observer) {
    if (n_trials < 1)
        throw std::domain_error("run_loading_campaign: need at least one trial");
    if (config.n_traps < 1)
        throw std::domain_error("run_loading_campaign: need at least one trap");

    LoadingStats stats;
    stats.histogram.assign(static_cast<std::size_t>(config.n_traps) + 1, 0);
    stats.n_trials = n_trials;
    for (std::int64_t t = 0; t < n_trials; ++t) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(t));
        OccupancyState occ = sample_occupancy(config.n_traps, config.p, rng, t);
        if (config.readout_false_positive > 0 || config.readout_false_negative > 0)
            occ = apply_readout_errors(occ, config.readout_false_positive,
                                       config.readout_false_negative, rng);
        ++stats.histogram[static_cast<std::size_t>(occ.atom_count())];
        if (observer) observer(occ);
    }

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < stats.histogram.size(); ++k) {
        const double c = static_cast<double>(stats.histogram[k]);
        sum += c * static_cast<double>(k);
        sum_sq += c * static_cast<double>(k) * static_cast<double>(k);
    }
    stats.mean = sum / static_cast<double>(n_trials);
    const double var = sum_sq / static_cast<double>(n_trials) - stats.mean * stats.mean;
    stats.std_dev = std::sqrt(std::max(var, 0.0));
    return stats;
}

}  // namespace atomcav
