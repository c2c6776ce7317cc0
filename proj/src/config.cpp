#include "atomcav/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "atomcav/loading.hpp"

namespace atomcav {

void AppConfig::validate() const {
    try {
        cavity.validate();
        tweezer.validate();
    } catch (const std::domain_error& e) {
        throw config_error(e.what());
    }
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(loading.p))
        throw config_error("loading.p must lie in [0, 1]");
    if (!in_unit(loading.readout_false_positive) || !in_unit(loading.readout_false_negative))
        throw config_error("loading readout error rates must lie in [0, 1]");
    if (!in_unit(rearrange.survival))
        throw config_error("rearrange.survival must lie in [0, 1]");
    if (rearrange.sweep_duration_us <= 0 || rearrange.sample_rate_MSps <= 0 ||
        rearrange.aod_MHz_per_um <= 0)
        throw config_error("rearrange sweep settings must be positive");
    if (spectrum.grid_span_MHz <= 0 || spectrum.grid_points < 2)
        throw config_error("spectrum grid needs positive span and >= 2 points");
    if (spectrum.noise_sigma < 0)
        throw config_error("spectrum.noise_sigma must be >= 0");
    if (scaling.g_MHz <= 0)
        throw config_error("scaling.g_MHz must be positive");
    if (scaling.delta_ca_max_MHz < 0)
        throw config_error("scaling.delta_ca_max_MHz must be >= 0");
    if (jitter_sigma_um < 0)
        throw config_error("jitter.sigma_um must be >= 0");
}

AppConfig preset_paper_2024() {
    AppConfig config;
    config.cavity = CavityParams::paper_2024();
    config.tweezer = TweezerParams::paper_2024();
    config.rearrange.survival =
        calibrate_survival(20, 0.38, config.tweezer.n_traps, config.loading.p);
    return config;
}

namespace {

struct Field {
    std::function<double(const AppConfig&)> get;
    std::function<void(AppConfig&, double)> set;
};

// One entry per schema key; doubles throughout, integer-valued keys rounded.
const std::map<std::string, Field>& schema() {
    static const std::map<std::string, Field> table = {
        {"cavity.g0_max_MHz",
         {[](const AppConfig& c) { return c.cavity.g0_max_MHz; },
          [](AppConfig& c, double v) { c.cavity.g0_max_MHz = v; }}},
        {"cavity.kappa_MHz",
         {[](const AppConfig& c) { return c.cavity.kappa_MHz; },
          [](AppConfig& c, double v) { c.cavity.kappa_MHz = v; }}},
        {"cavity.gamma_MHz",
         {[](const AppConfig& c) { return c.cavity.gamma_MHz; },
          [](AppConfig& c, double v) { c.cavity.gamma_MHz = v; }}},
        {"cavity.lambda_probe_nm",
         {[](const AppConfig& c) { return c.cavity.lambda_probe_nm; },
          [](AppConfig& c, double v) { c.cavity.lambda_probe_nm = v; }}},
        {"cavity.lambda_lock_nm",
         {[](const AppConfig& c) { return c.cavity.lambda_lock_nm; },
          [](AppConfig& c, double v) { c.cavity.lambda_lock_nm = v; }}},
        {"cavity.waist_um",
         {[](const AppConfig& c) { return c.cavity.waist_um; },
          [](AppConfig& c, double v) { c.cavity.waist_um = v; }}},
        {"cavity.length_mm",
         {[](const AppConfig& c) { return c.cavity.length_mm; },
          [](AppConfig& c, double v) { c.cavity.length_mm = v; }}},
        {"cavity.finesse",
         {[](const AppConfig& c) { return c.cavity.finesse; },
          [](AppConfig& c, double v) { c.cavity.finesse = v; }}},
        {"cavity.beat_cycle_um",
         {[](const AppConfig& c) { return c.cavity.beat_cycle_um; },
          [](AppConfig& c, double v) { c.cavity.beat_cycle_um = v; }}},
        {"tweezer.n_traps",
         {[](const AppConfig& c) { return static_cast<double>(c.tweezer.n_traps); },
          [](AppConfig& c, double v) { c.tweezer.n_traps = static_cast<int>(v); }}},
        {"tweezer.spacing_um",
         {[](const AppConfig& c) { return c.tweezer.spacing_um; },
          [](AppConfig& c, double v) { c.tweezer.spacing_um = v; }}},
        {"tweezer.trap_depth_mK",
         {[](const AppConfig& c) { return c.tweezer.trap_depth_mK; },
          [](AppConfig& c, double v) { c.tweezer.trap_depth_mK = v; }}},
        {"tweezer.waist_um",
         {[](const AppConfig& c) { return c.tweezer.tweezer_waist_um; },
          [](AppConfig& c, double v) { c.tweezer.tweezer_waist_um = v; }}},
        {"tweezer.power_mW",
         {[](const AppConfig& c) { return c.tweezer.power_per_trap_mW; },
          [](AppConfig& c, double v) { c.tweezer.power_per_trap_mW = v; }}},
        {"loading.p",
         {[](const AppConfig& c) { return c.loading.p; },
          [](AppConfig& c, double v) { c.loading.p = v; }}},
        {"loading.readout_false_positive",
         {[](const AppConfig& c) { return c.loading.readout_false_positive; },
          [](AppConfig& c, double v) { c.loading.readout_false_positive = v; }}},
        {"loading.readout_false_negative",
         {[](const AppConfig& c) { return c.loading.readout_false_negative; },
          [](AppConfig& c, double v) { c.loading.readout_false_negative = v; }}},
        {"rearrange.survival",
         {[](const AppConfig& c) { return c.rearrange.survival; },
          [](AppConfig& c, double v) { c.rearrange.survival = v; }}},
        {"rearrange.sweep_duration_us",
         {[](const AppConfig& c) { return c.rearrange.sweep_duration_us; },
          [](AppConfig& c, double v) { c.rearrange.sweep_duration_us = v; }}},
        {"rearrange.sample_rate_MSps",
         {[](const AppConfig& c) { return c.rearrange.sample_rate_MSps; },
          [](AppConfig& c, double v) { c.rearrange.sample_rate_MSps = v; }}},
        {"rearrange.aod_MHz_per_um",
         {[](const AppConfig& c) { return c.rearrange.aod_MHz_per_um; },
          [](AppConfig& c, double v) { c.rearrange.aod_MHz_per_um = v; }}},
        {"rearrange.center_freq_MHz",
         {[](const AppConfig& c) { return c.rearrange.center_freq_MHz; },
          [](AppConfig& c, double v) { c.rearrange.center_freq_MHz = v; }}},
        {"spectrum.grid_span_MHz",
         {[](const AppConfig& c) { return c.spectrum.grid_span_MHz; },
          [](AppConfig& c, double v) { c.spectrum.grid_span_MHz = v; }}},
        {"spectrum.grid_points",
         {[](const AppConfig& c) { return static_cast<double>(c.spectrum.grid_points); },
          [](AppConfig& c, double v) { c.spectrum.grid_points = static_cast<int>(v); }}},
        {"noise.sigma",
         {[](const AppConfig& c) { return c.spectrum.noise_sigma; },
          [](AppConfig& c, double v) { c.spectrum.noise_sigma = v; }}},
        {"scaling.g_MHz",
         {[](const AppConfig& c) { return c.scaling.g_MHz; },
          [](AppConfig& c, double v) { c.scaling.g_MHz = v; }}},
        {"scaling.delta_ca_max_MHz",
         {[](const AppConfig& c) { return c.scaling.delta_ca_max_MHz; },
          [](AppConfig& c, double v) { c.scaling.delta_ca_max_MHz = v; }}},
        {"jitter.sigma_um",
         {[](const AppConfig& c) { return c.jitter_sigma_um; },
          [](AppConfig& c, double v) { c.jitter_sigma_um = v; }}},
    };
    return table;
}

}  // namespace

nlohmann::json config_to_json(const AppConfig& config) {
    nlohmann::json flat = nlohmann::json::object();
    for (const auto& [key, field] : schema()) flat[key] = field.get(config);
    return flat;
}

AppConfig config_from_json(const nlohmann::json& flat) {
    if (!flat.is_object())
        throw config_error("config must be a JSON object of dotted keys");
    AppConfig config = preset_paper_2024();
    const auto& table = schema();
    for (const auto& [key, value] : flat.items()) {
        const auto it = table.find(key);
        if (it == table.end())
            throw config_error("unknown config key: '" + key + "'");
        if (!value.is_number())
            throw config_error("config key '" + key + "' must be a number");
        it->second.set(config, value.get<double>());
    }
    config.validate();
    return config;
}

AppConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path.string());
    nlohmann::json flat;
    try {
        in >> flat;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return config_from_json(flat);
}

}  // namespace atomcav
