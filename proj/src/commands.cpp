#include "atomcav/commands.hpp"

#include <cmath>
#include <ctime>

#include "atomcav/io.hpp"
#include "atomcav/physics.hpp"
#include "atomcav/spectra.hpp"
#include "atomcav/version.hpp"

namespace atomcav::cmd {

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    const nlohmann::json& params, std::uint64_t seed,
                    const AppConfig& config, const std::vector<std::string>& outputs) {
    nlohmann::json manifest;
    manifest["run_id"] = out_dir.filename().string();
    manifest["timestamp_utc"] = utc_timestamp();
    manifest["tool"] = "atomcav";
    manifest["version"] = std::string(kVersion);
    manifest["command"] = command;
    manifest["params"] = params;
    manifest["master_seed"] = seed;
    manifest["config"] = config_to_json(config);
    manifest["outputs"] = outputs;
    write_text_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<double> config_grid(const AppConfig& config) {
    return make_detuning_grid(config.spectrum.grid_span_MHz, config.spectrum.grid_points);
}

}  // namespace

LoadingStats run_load_sim(const AppConfig& config, std::int64_t trials,
                          std::uint64_t seed, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    LoadingConfig loading{config.tweezer.n_traps, config.loading.p,
                          config.loading.readout_false_positive,
                          config.loading.readout_false_negative};

    std::string occupancy_csv = "trial_id,atom_count,occupancy_bitstring\n";
    const LoadingStats stats = run_loading_campaign(
        loading, trials, seed, [&](const OccupancyState& occ) {
            occupancy_csv += std::to_string(occ.trial_id);
            occupancy_csv += ',';
            occupancy_csv += std::to_string(occ.atom_count());
            occupancy_csv += ',';
            occupancy_csv += occ.bitstring();
            occupancy_csv += '\n';
        });
    write_text_atomic(out_dir / "occupancy.csv", occupancy_csv);

    std::string histogram_csv = "atom_count,trials\n";
    for (std::size_t k = 0; k < stats.histogram.size(); ++k) {
        histogram_csv += std::to_string(k);
        histogram_csv += ',';
        histogram_csv += std::to_string(stats.histogram[k]);
        histogram_csv += '\n';
    }
    write_text_atomic(out_dir / "histogram.csv", histogram_csv);

    nlohmann::json stats_json;
    stats_json["n_trials"] = stats.n_trials;
    stats_json["p"] = config.loading.p;
    stats_json["mean"] = stats.mean;
    stats_json["std"] = stats.std_dev;
    stats_json["histogram"] = stats.histogram;
    write_text_atomic(out_dir / "stats.json", stats_json.dump(2) + "\n");

    write_manifest(out_dir, "load-sim", {{"trials", trials}}, seed, config,
                   {"occupancy.csv", "histogram.csv", "stats.json"});
    return stats;
}

std::vector<DefectFreeRow> run_defect_free_curve(const AppConfig& config, int n_min,
                                                 int n_max, std::int64_t mc_trials,
                                                 std::uint64_t seed,
                                                 const std::filesystem::path& out_dir) {
    config.validate();
    if (n_min < 0 || n_max < n_min || n_max > config.tweezer.n_traps)
        throw config_error("defect-free-curve: need 0 <= n_min <= n_max <= n_traps");
    std::filesystem::create_directories(out_dir);

    LoadingConfig loading{config.tweezer.n_traps, config.loading.p,
                          config.loading.readout_false_positive,
                          config.loading.readout_false_negative};

    std::vector<DefectFreeRow> rows;
    std::string csv = "N,p_defect_free,p_rearranged,p_rearranged_mc\n";
    for (int N = n_min; N <= n_max; ++N) {
        DefectFreeRow row;
        row.N = N;
        row.p_defect_free = defect_free_probability(N, config.loading.p);
        row.p_rearranged = rearranged_success_probability(N, config.tweezer.n_traps,
                                                          config.loading.p,
                                                          config.rearrange.survival);
        row.p_rearranged_mc =
            mc_trials > 0
                ? rearranged_success_mc(N, loading, config.rearrange.survival, mc_trials, seed)
                : 0.0;
        rows.push_back(row);

        csv += std::to_string(N);
        csv += ',';
        csv += format_double(row.p_defect_free);
        csv += ',';
        csv += format_double(row.p_rearranged);
        csv += ',';
        csv += format_double(row.p_rearranged_mc);
        csv += '\n';
    }
    write_text_atomic(out_dir / "defect_free.csv", csv);

    write_manifest(out_dir, "defect-free-curve",
                   {{"n_min", n_min}, {"n_max", n_max}, {"mc_trials", mc_trials}}, seed,
                   config, {"defect_free.csv"});
    return rows;
}

Spectrum run_spectrum(const AppConfig& config, std::optional<double> omega_MHz,
                      std::optional<int> n_atoms, double delta_ca_MHz,
                      std::uint64_t seed, const std::filesystem::path& out_dir) {
    config.validate();
    if (!omega_MHz && !n_atoms)
        throw config_error("spectrum: give either omega or an atom number");
    std::filesystem::create_directories(out_dir);

    SpectrumParams params;
    params.omega_eff_MHz =
        omega_MHz ? *omega_MHz : config.scaling.g_MHz * std::sqrt(static_cast<double>(*n_atoms));
    params.delta_ca_MHz = delta_ca_MHz;
    params.kappa_MHz = config.cavity.kappa_MHz;
    params.gamma_MHz = config.cavity.gamma_MHz;

    RngStream rng(seed, 0);
    const Spectrum spec =
        synthesize_spectrum(config_grid(config), params, config.spectrum.noise_sigma, rng);
    write_text_atomic(out_dir / "spectrum.csv", spectrum_to_csv(spec));

    write_manifest(out_dir, "spectrum",
                   {{"omega_MHz", params.omega_eff_MHz},
                    {"delta_ca_MHz", delta_ca_MHz},
                    {"noise_sigma", config.spectrum.noise_sigma}},
                   seed, config, {"spectrum.csv"});
    return spec;
}

FitResult run_fit(const AppConfig& config, const std::filesystem::path& input_csv,
                  const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    const Spectrum spec = read_spectrum_csv(input_csv);
    const FitResult fit =
        fit_spectrum(spec, config.cavity.kappa_MHz, config.cavity.gamma_MHz);

    nlohmann::json fit_json;
    fit_json["omega_eff_MHz"] = fit.omega_eff_MHz;
    fit_json["delta_ca_MHz"] = fit.delta_ca_MHz;
    fit_json["amplitude_scale"] = fit.amplitude_scale;
    fit_json["residual_norm"] = fit.residual_norm;
    fit_json["uncertainties"] = {{"omega_eff_MHz", fit.uncertainties[0]},
                                 {"delta_ca_MHz", fit.uncertainties[1]},
                                 {"amplitude_scale", fit.uncertainties[2]}};
    fit_json["converged"] = fit.converged;
    fit_json["iterations"] = fit.iterations;
    fit_json["kappa_MHz"] = config.cavity.kappa_MHz;
    fit_json["gamma_MHz"] = config.cavity.gamma_MHz;
    write_text_atomic(out_dir / "fit.json", fit_json.dump(2) + "\n");

    std::string curve = "detuning_MHz,transmission_model\n";
    for (double d : spec.detuning_MHz) {
        curve += format_double(d);
        curve += ',';
        curve += format_double(transmission_raw(d, fit.omega_eff_MHz, fit.delta_ca_MHz,
                                                config.cavity.kappa_MHz,
                                                config.cavity.gamma_MHz,
                                                fit.amplitude_scale));
        curve += '\n';
    }
    write_text_atomic(out_dir / "fit_curve.csv", curve);

    write_manifest(out_dir, "fit", {{"input", input_csv.string()}}, 0, config,
                   {"fit.json", "fit_curve.csv"});
    return fit;
}

double geometric_block_coupling_MHz(const AppConfig& config, int n_atoms, double g_MHz) {
    CavityParams cavity = config.cavity;
    cavity.g0_max_MHz = g_MHz;  // anchor: on-axis coupling at the cavity center
    const std::vector<int> block = target_block_indices(n_atoms, config.tweezer);
    std::vector<double> couplings;
    couplings.reserve(block.size());
    for (int idx : block) {
        AtomSite site{idx, config.tweezer.site_position_um(idx), 0.0};
        couplings.push_back(site_coupling_MHz(cavity, site));
    }
    return effective_collective_coupling_MHz(couplings);
}

ScalingFit run_scaling(const AppConfig& config, int n_min, int n_max, ScalingMode mode,
                       std::uint64_t seed, const std::filesystem::path& out_dir) {
    config.validate();
    if (n_min < 1 || n_max < n_min || n_max > config.tweezer.n_traps)
        throw config_error("scaling: need 1 <= n_min <= n_max <= n_traps");
    std::filesystem::create_directories(out_dir);

    const std::vector<double> grid = config_grid(config);
    std::vector<std::pair<int, double>> fitted_pairs;
    for (int N = n_min; N <= n_max; ++N) {
        SpectrumParams truth;
        truth.kappa_MHz = config.cavity.kappa_MHz;
        truth.gamma_MHz = config.cavity.gamma_MHz;
        truth.omega_eff_MHz =
            mode == ScalingMode::uniform
                ? config.scaling.g_MHz * std::sqrt(static_cast<double>(N))
                : geometric_block_coupling_MHz(config, N, config.scaling.g_MHz);

        RngStream rng(seed, static_cast<std::uint64_t>(N));
        truth.delta_ca_MHz = config.scaling.delta_ca_max_MHz * rng.uniform01();

        const Spectrum spec =
            synthesize_spectrum(grid, truth, config.spectrum.noise_sigma, rng);
        const FitResult fit =
            fit_spectrum(spec, config.cavity.kappa_MHz, config.cavity.gamma_MHz);
        fitted_pairs.emplace_back(N, fit.omega_eff_MHz);
    }

    const ScalingFit scaling = sqrt_scaling_fit(fitted_pairs);

    std::string csv = "N,omega_N,g_per_N,model_g_sqrtN\n";
    for (std::size_t i = 0; i < scaling.pairs.size(); ++i) {
        const auto& [N, omega] = scaling.pairs[i];
        csv += std::to_string(N);
        csv += ',';
        csv += format_double(omega);
        csv += ',';
        csv += format_double(scaling.per_N_g_MHz[i]);
        csv += ',';
        csv += format_double(scaling.g0_hat_MHz * std::sqrt(static_cast<double>(N)));
        csv += '\n';
    }
    write_text_atomic(out_dir / "scaling.csv", csv);

    nlohmann::json scaling_json;
    scaling_json["mode"] = mode == ScalingMode::uniform ? "uniform" : "geometric";
    scaling_json["g0_hat_MHz"] = scaling.g0_hat_MHz;
    scaling_json["mean_g_MHz"] = scaling.mean_g_MHz;
    scaling_json["max_rel_dev"] = scaling.max_rel_dev;
    scaling_json["N"] = nlohmann::json::array();
    scaling_json["omega_N_MHz"] = nlohmann::json::array();
    scaling_json["per_N_g_MHz"] = scaling.per_N_g_MHz;
    for (const auto& [N, omega] : scaling.pairs) {
        scaling_json["N"].push_back(N);
        scaling_json["omega_N_MHz"].push_back(omega);
    }
    write_text_atomic(out_dir / "scaling.json", scaling_json.dump(2) + "\n");

    write_manifest(out_dir, "scaling",
                   {{"n_min", n_min},
                    {"n_max", n_max},
                    {"mode", mode == ScalingMode::uniform ? "uniform" : "geometric"}},
                   seed, config, {"scaling.csv", "scaling.json"});
    return scaling;
}

MovePlan run_rearrange(const AppConfig& config, int n_target, std::uint64_t seed,
                       const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    // Draw loading shots until one holds enough atoms, mirroring the
    // repeat-until-success loading loop.
    std::optional<MovePlan> plan;
    std::int64_t shot = 0;
    for (; shot < 10000; ++shot) {
        RngStream rng(seed, static_cast<std::uint64_t>(shot));
        const OccupancyState occ =
            sample_occupancy(config.tweezer.n_traps, config.loading.p, rng, shot);
        plan = plan_rearrangement(occ, n_target, config.tweezer,
                                  config.rearrange.sweep_duration_us);
        if (plan) break;
    }
    if (!plan)
        throw std::runtime_error("rearrange: no loading shot reached the target atom number");

    const ToneSchedule schedule = synthesize_tone_sweeps(
        *plan, config.tweezer, config.rearrange.sweep_duration_us,
        config.rearrange.sample_rate_MSps, config.rearrange.aod_MHz_per_um,
        config.rearrange.center_freq_MHz);

    ToneSchedule annotated = schedule;
    const std::vector<double> amplitudes(annotated.tones.size(), 1.0);
    const std::vector<double> phases =
        optimize_tone_phases(static_cast<int>(annotated.tones.size()), amplitudes);
    for (std::size_t k = 0; k < annotated.tones.size(); ++k)
        annotated.tones[k].phase_rad = phases[k];

    nlohmann::json plan_json = move_plan_to_json(*plan);
    plan_json["loading_shot"] = shot;
    write_text_atomic(out_dir / "plan.json", plan_json.dump(2) + "\n");
    write_text_atomic(out_dir / "tones.csv", tone_schedule_to_csv(annotated));

    write_manifest(out_dir, "rearrange", {{"n_target", n_target}}, seed, config,
                   {"plan.json", "tones.csv"});
    return *plan;
}

}  // namespace atomcav::cmd
