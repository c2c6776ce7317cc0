#ifndef ATOMCAV_COMMANDS_HPP
#define ATOMCAV_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atomcav/config.hpp"
#include "atomcav/fit.hpp"
#include "atomcav/loading.hpp"
#include "atomcav/rearrange.hpp"

namespace atomcav::cmd {

// Each command writes its data files plus a manifest.json snapshotting the
// config, seed and parameters needed to replay the run byte-for-byte.

// occupancy.csv, histogram.csv, stats.json
LoadingStats run_load_sim(const AppConfig& config, std::int64_t trials,
                          std::uint64_t seed, const std::filesystem::path& out_dir);

struct DefectFreeRow {
    int N;
    double p_defect_free;     // p^N
    double p_rearranged;      // binomial tail x survival^N
    double p_rearranged_mc;   // Monte Carlo estimate of the same
};

// defect_free.csv
std::vector<DefectFreeRow> run_defect_free_curve(const AppConfig& config, int n_min,
                                                 int n_max, std::int64_t mc_trials,
                                                 std::uint64_t seed,
                                                 const std::filesystem::path& out_dir);

// spectrum.csv; omega directly, or g sqrt(N) when n_atoms is given
Spectrum run_spectrum(const AppConfig& config, std::optional<double> omega_MHz,
                      std::optional<int> n_atoms, double delta_ca_MHz,
                      std::uint64_t seed, const std::filesystem::path& out_dir);

// fit.json, fit_curve.csv
FitResult run_fit(const AppConfig& config, const std::filesystem::path& input_csv,
                  const std::filesystem::path& out_dir);

enum class ScalingMode { uniform, geometric };

// scaling.csv, scaling.json: per-N synthetic spectra -> fits -> sqrt(N) law
ScalingFit run_scaling(const AppConfig& config, int n_min, int n_max, ScalingMode mode,
                       std::uint64_t seed, const std::filesystem::path& out_dir);

// plan.json, tones.csv: one seeded loading shot, planned and synthesized
MovePlan run_rearrange(const AppConfig& config, int n_target, std::uint64_t seed,
                       const std::filesystem::path& out_dir);

// Collective coupling of the n_atoms target block under the position-
// dependent coupling model, with per-atom couplings anchored to g_MHz on
// axis at the cavity center.
double geometric_block_coupling_MHz(const AppConfig& config, int n_atoms, double g_MHz);

}  // namespace atomcav::cmd

#endif
