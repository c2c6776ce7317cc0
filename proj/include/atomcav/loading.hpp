#ifndef ATOMCAV_LOADING_HPP
#define ATOMCAV_LOADING_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "atomcav/rng.hpp"

namespace atomcav {

struct OccupancyState {
    std::vector<bool> occupied;
    std::int64_t trial_id = 0;

    int atom_count() const;
    std::string bitstring() const;  // "0110..." ordered by trap index
};

struct LoadingStats {
    std::vector<std::uint64_t> histogram;  // index = atom number, size n_traps+1
    std::int64_t n_trials = 0;
    double mean = 0.0;
    double std_dev = 0.0;
};

struct LoadingConfig {
    int n_traps = 40;
    double p = 0.6;                       // per-trap loading probability
    double readout_false_positive = 0.0;  // empty trap imaged as occupied
    double readout_false_negative = 0.0;  // occupied trap imaged as empty
};

// Each trap loads independently with probability p, in trap-index order.
OccupancyState sample_occupancy(int n_traps, double p, RngStream& rng,
                                std::int64_t trial_id = 0);

// Imaging errors flip individual trap readings; no-op when both rates are 0.
OccupancyState apply_readout_errors(const OccupancyState& state,
                                    double false_positive, double false_negative,
                                    RngStream& rng);

// P(X >= N) for X ~ Binomial(n, p).
double binomial_tail(int N, int n, double p);

// p^N: chance that N specific traps all load in one cycle.
double defect_free_probability(int N, double p);

// P(at least N of n_traps load) * survival^N: one load-move-verify cycle
// ending with a defect-free N-atom block.
double rearranged_success_probability(int N, int n_traps, double p, double survival);

// Inverts rearranged_success_probability for the survival factor by monotone
// bisection (relative tolerance 1e-9 or better). Throws std::domain_error if
// the target exceeds the binomial tail (unattainable even at survival = 1).
double calibrate_survival(int N_ref, double target_prob, int n_traps, double p);

// Monte Carlo estimate of rearranged_success_probability; each trial draws
// from its own (master_seed, trial) stream.
double rearranged_success_mc(int N, const LoadingConfig& config, double survival,
                             std::int64_t n_trials, std::uint64_t master_seed);

// Runs n_trials independent loading cycles. Trial t draws from stream
// (master_seed, t), so results do not depend on evaluation order. The
// optional observer sees every sampled occupancy (post readout errors).
LoadingStats run_loading_campaign(
    const LoadingConfig& config, std::int64_t n_trials, std::uint64_t master_seed,
    const std::function<void(const OccupancyState&)>& observer = nullptr);

}  // namespace atomcav

#endif
