#ifndef ATOMCAV_REARRANGE_HPP
#define ATOMCAV_REARRANGE_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "atomcav/loading.hpp"
#include "atomcav/physics.hpp"

namespace atomcav {

struct MovePlan {
    std::vector<std::pair<int, int>> moves;  // (source trap -> target trap), ascending
    std::vector<int> switch_off;             // traps turned off: empties and surplus atoms
    double sweep_duration_us = 800.0;
    std::vector<double> target_positions_um;  // one per move, ascending
};

struct ToneTrack {
    int tone_index = 0;  // source trap index driving this tone
    std::vector<double> freq_MHz;
    double amplitude = 1.0;
    double phase_rad = 0.0;
};

struct ToneSchedule {
    std::vector<double> time_us;  // shared sample instants, endpoints included
    std::vector<ToneTrack> tones;
};

// Raised when amplitude balancing fails to reach the requested uniformity.
class balance_error : public std::runtime_error {
public:
    balance_error(const std::string& what, double residual_spread)
        : std::runtime_error(what), residual_spread_(residual_spread) {}
    double residual_spread() const { return residual_spread_; }

private:
    double residual_spread_;
};

// Indices of the n_target contiguous traps whose block center lies closest
// to the cavity center (ties broken toward negative positions).
std::vector<int> target_block_indices(int n_target, const TweezerParams& geometry);

// Chooses which n_target loaded atoms to keep and where to put them so the
// summed travel distance is minimal, keeping left-to-right order. Empty and
// surplus traps are switched off. Returns std::nullopt when fewer than
// n_target atoms are present (caller reloads).
std::optional<MovePlan> plan_rearrangement(const OccupancyState& occupancy, int n_target,
                                           const TweezerParams& geometry,
                                           double sweep_duration_us = 800.0);

// Sum of |source - target| distances in um.
double total_displacement_um(const MovePlan& plan, const TweezerParams& geometry);

// Minimum-jerk interpolation fraction: 10 t^3 - 15 t^4 + 6 t^5 on [0, 1].
double minimum_jerk_fraction(double tau);

// Per-tone frequency trajectories for the plan: tone k runs from its source
// trap frequency to its target trap frequency along a minimum-jerk profile.
// Trap frequency = center_freq + position * aod_MHz_per_um. Throws
// std::logic_error if any two trajectories touch or cross at a sample (the
// planner's order preservation should make that impossible).
ToneSchedule synthesize_tone_sweeps(const MovePlan& plan, const TweezerParams& geometry,
                                    double duration_us, double sample_rate_MSps,
                                    double aod_MHz_per_um, double center_freq_MHz = 100.0);

// Peak/RMS ratio of sum_k a_k cos(2 pi (k+1) t + phi_k) over one period of
// the unit-spaced tone comb, sampled oversample points per cycle of the
// fastest tone.
double multitone_crest_factor(const std::vector<double>& amplitudes,
                              const std::vector<double>& phases, int oversample = 64);

// Phases minimizing the crest factor of the equal-spaced multi-tone
// waveform: quadratic (Newman) initialization followed by cyclic coordinate
// descent. Never returns a phase set worse than the initialization.
std::vector<double> optimize_tone_phases(int n_tones, const std::vector<double>& amplitudes);

using IntensityModel = std::function<std::vector<double>(const std::vector<double>&)>;

// Proportional feedback a_i <- a_i (mean(I)/I_i)^0.5 against the supplied
// intensity model until the relative spread max|I_i/mean - 1| drops below
// target_uniformity. Throws balance_error (carrying the residual spread)
// after max_iterations without convergence.
std::vector<double> balance_amplitudes(std::vector<double> amplitudes,
                                       const IntensityModel& model, double target_uniformity,
                                       int max_iterations = 100);

}  // namespace atomcav

#endif
