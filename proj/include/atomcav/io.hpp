#ifndef ATOMCAV_IO_HPP
#define ATOMCAV_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "atomcav/rearrange.hpp"
#include "atomcav/spectra.hpp"

namespace atomcav {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);
double parse_double(const std::string& text);

// Writes content to a temporary sibling and renames it into place, so
// readers never observe a half-written file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// CSV: detuning_MHz,transmission,sigma. Values round-trip exactly.
std::string spectrum_to_csv(const Spectrum& spectrum);
Spectrum spectrum_from_csv(const std::string& csv_text);
Spectrum read_spectrum_csv(const std::filesystem::path& path);

// {"moves": [[src, tgt], ...], "switch_off": [...], "duration_us": ...}
nlohmann::json move_plan_to_json(const MovePlan& plan);
MovePlan move_plan_from_json(const nlohmann::json& j);

// CSV: time_us,tone_index,freq_MHz,amplitude,phase_rad (time-major rows).
std::string tone_schedule_to_csv(const ToneSchedule& schedule);

}  // namespace atomcav

#endif
