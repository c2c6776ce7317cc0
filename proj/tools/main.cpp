// atomcav: command-line front end for the atom-array cavity simulator.
//
// Exit codes: 0 success, 2 usage/config error, 1 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "atomcav/commands.hpp"
#include "atomcav/version.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset = "paper-2024";
    std::uint64_t seed = 1;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Config file (flat JSON, dotted keys)");
    cmd->add_option("--preset", opts.preset, "Named parameter preset")
        ->check(CLI::IsMember({"paper-2024"}));
    cmd->add_option("--seed", opts.seed, "Master seed for all random streams");
    cmd->add_option("--out", opts.out_dir, "Output directory (default runs/<command>-s<seed>)");
}

atomcav::AppConfig resolve_config(const CommonOpts& opts) {
    if (!opts.config_path.empty())
        return atomcav::load_config_file(opts.config_path);
    return atomcav::preset_paper_2024();
}

std::string resolve_out(const CommonOpts& opts, const std::string& command) {
    if (!opts.out_dir.empty()) return opts.out_dir;
    return "runs/" + command + "-s" + std::to_string(opts.seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atom-array cavity QED simulator and analysis toolkit"};
    app.set_version_flag("--version", std::string(atomcav::kVersion));
    app.require_subcommand(1);

    CommonOpts load_opts;
    std::int64_t load_trials = 890;
    auto* load = app.add_subcommand("load-sim", "Simulate stochastic tweezer loading");
    add_common(load, load_opts);
    load->add_option("--trials", load_trials, "Number of loading trials")
        ->check(CLI::PositiveNumber);

    CommonOpts curve_opts;
    int curve_nmin = 1, curve_nmax = 40;
    std::int64_t curve_trials = 100000;
    auto* curve = app.add_subcommand(
        "defect-free-curve", "Defect-free success probability vs array length");
    add_common(curve, curve_opts);
    curve->add_option("--n-min", curve_nmin, "Smallest array length");
    curve->add_option("--n-max", curve_nmax, "Largest array length");
    curve->add_option("--trials", curve_trials, "Monte Carlo trials per length (0 = skip)");

    CommonOpts spec_opts;
    std::optional<double> spec_omega;
    std::optional<int> spec_atoms;
    double spec_dca = 0.0;
    auto* spectrum = app.add_subcommand("spectrum", "Synthesize a transmission spectrum");
    add_common(spectrum, spec_opts);
    spectrum->add_option("--omega", spec_omega, "Collective coupling in MHz");
    spectrum->add_option("--n-atoms", spec_atoms, "Atom number (coupling = g sqrt(N))");
    spectrum->add_option("--delta-ca", spec_dca, "Cavity-atom detuning in MHz");

    CommonOpts fit_opts;
    std::string fit_input;
    auto* fit = app.add_subcommand("fit", "Fit a spectrum CSV for (omega, delta_ca, scale)");
    add_common(fit, fit_opts);
    fit->add_option("--input", fit_input, "Spectrum CSV to fit")->required();

    CommonOpts scaling_opts;
    int scaling_nmin = 3, scaling_nmax = 26;
    std::string scaling_mode = "uniform";
    auto* scaling = app.add_subcommand(
        "scaling", "Synthesize and fit spectra over a range of atom numbers");
    add_common(scaling, scaling_opts);
    scaling->add_option("--n-min", scaling_nmin, "Smallest atom number");
    scaling->add_option("--n-max", scaling_nmax, "Largest atom number");
    scaling->add_option("--mode", scaling_mode, "Coupling model: uniform or geometric")
        ->check(CLI::IsMember({"uniform", "geometric"}));

    CommonOpts rearr_opts;
    int rearr_target = 20;
    auto* rearrange =
        app.add_subcommand("rearrange", "Plan one defect-free rearrangement and its RF sweeps");
    add_common(rearrange, rearr_opts);
    rearrange->add_option("--n-target", rearr_target, "Atoms in the defect-free block")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (load->parsed()) {
            const auto stats = atomcav::cmd::run_load_sim(
                resolve_config(load_opts), load_trials, load_opts.seed,
                resolve_out(load_opts, "load-sim"));
            std::cout << "trials=" << stats.n_trials << " mean=" << stats.mean
                      << " std=" << stats.std_dev << '\n';
        } else if (curve->parsed()) {
            atomcav::cmd::run_defect_free_curve(resolve_config(curve_opts), curve_nmin,
                                                curve_nmax, curve_trials, curve_opts.seed,
                                                resolve_out(curve_opts, "defect-free-curve"));
        } else if (spectrum->parsed()) {
            atomcav::cmd::run_spectrum(resolve_config(spec_opts), spec_omega, spec_atoms,
                                       spec_dca, spec_opts.seed,
                                       resolve_out(spec_opts, "spectrum"));
        } else if (fit->parsed()) {
            const auto result = atomcav::cmd::run_fit(resolve_config(fit_opts), fit_input,
                                                      resolve_out(fit_opts, "fit"));
            std::cout << "omega_eff_MHz=" << result.omega_eff_MHz
                      << " delta_ca_MHz=" << result.delta_ca_MHz
                      << " scale=" << result.amplitude_scale
                      << " converged=" << (result.converged ? "yes" : "no") << '\n';
        } else if (scaling->parsed()) {
            const auto result = atomcav::cmd::run_scaling(
                resolve_config(scaling_opts), scaling_nmin, scaling_nmax,
                scaling_mode == "uniform" ? atomcav::cmd::ScalingMode::uniform
                                          : atomcav::cmd::ScalingMode::geometric,
                scaling_opts.seed, resolve_out(scaling_opts, "scaling"));
            std::cout << "g0_hat_MHz=" << result.g0_hat_MHz
                      << " mean_g_MHz=" << result.mean_g_MHz
                      << " max_rel_dev=" << result.max_rel_dev << '\n';
        } else if (rearrange->parsed()) {
            atomcav::cmd::run_rearrange(resolve_config(rearr_opts), rearr_target,
                                        rearr_opts.seed, resolve_out(rearr_opts, "rearrange"));
        }
    } catch (const atomcav::config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
