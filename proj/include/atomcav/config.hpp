#ifndef ATOMCAV_CONFIG_HPP
#define ATOMCAV_CONFIG_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "atomcav/physics.hpp"

namespace atomcav {

// Bad configuration input (unknown key, wrong type, violated invariant).
// Maps to the CLI usage-error exit code.
class config_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoadingSettings {
    double p = 0.6;
    double readout_false_positive = 0.0;
    double readout_false_negative = 0.0;
};

struct RearrangeSettings {
    double survival = 1.0;  // per-atom move-and-verify survival; preset calibrates this
    double sweep_duration_us = 800.0;
    double sample_rate_MSps = 1.0;
    double aod_MHz_per_um = 1.0 / 4.26;  // one site of travel = 1 MHz of tone sweep
    double center_freq_MHz = 100.0;
};

struct SpectrumSettings {
    double grid_span_MHz = 25.0;
    int grid_points = 201;
    double noise_sigma = 0.02;
};

struct ScalingSettings {
    double g_MHz = 2.62;           // single-atom coupling used for synthetic campaigns
    double delta_ca_max_MHz = 0.4; // per-spectrum cavity-atom offsets drawn from [0, max]
};

struct AppConfig {
    CavityParams cavity;
    TweezerParams tweezer;
    LoadingSettings loading;
    RearrangeSettings rearrange;
    SpectrumSettings spectrum;
    ScalingSettings scaling;
    double jitter_sigma_um = 0.0;

    void validate() const;
};

// Default parameter set with the rearrangement survival factor calibrated so
// that a 20-atom defect-free block succeeds with probability 0.38 per cycle.
AppConfig preset_paper_2024();

// Flat JSON object with dotted keys ("cavity.kappa_MHz": 2.6, ...). The
// schema is closed: unknown keys raise config_error.
nlohmann::json config_to_json(const AppConfig& config);
AppConfig config_from_json(const nlohmann::json& flat);
AppConfig load_config_file(const std::filesystem::path& path);

}  // namespace atomcav

#endif
