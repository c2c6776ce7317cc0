#include "atomcav/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace atomcav {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::invalid_argument("parse_double: not a number: '" + text + "'");
    return value;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("write_text_atomic: cannot open " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("write_text_atomic: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string spectrum_to_csv(const Spectrum& spectrum) {
    std::string out = "detuning_MHz,transmission,sigma\n";
    const bool have_sigma = spectrum.sigma.size() == spectrum.size();
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        out += format_double(spectrum.detuning_MHz[i]);
        out += ',';
        out += format_double(spectrum.transmission[i]);
        out += ',';
        out += format_double(have_sigma ? spectrum.sigma[i] : 0.0);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) fields.push_back(field);
    return fields;
}

}  // namespace

Spectrum spectrum_from_csv(const std::string& csv_text) {
    std::istringstream stream(csv_text);
    std::string line;
    if (!std::getline(stream, line))
        throw std::invalid_argument("spectrum_from_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "detuning_MHz,transmission,sigma")
        throw std::invalid_argument("spectrum_from_csv: unexpected header: '" + line + "'");

    Spectrum spec;
    while (std::getline(stream, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_fields(line, ',');
        if (fields.size() != 3)
            throw std::invalid_argument("spectrum_from_csv: expected 3 columns: '" + line + "'");
        spec.detuning_MHz.push_back(parse_double(fields[0]));
        spec.transmission.push_back(parse_double(fields[1]));
        spec.sigma.push_back(parse_double(fields[2]));
    }
    return spec;
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_spectrum_csv: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return spectrum_from_csv(buffer.str());
}

nlohmann::json move_plan_to_json(const MovePlan& plan) {
    nlohmann::json j;
    j["moves"] = nlohmann::json::array();
    for (const auto& [src, tgt] : plan.moves) j["moves"].push_back({src, tgt});
    j["switch_off"] = plan.switch_off;
    j["duration_us"] = plan.sweep_duration_us;
    j["target_positions_um"] = plan.target_positions_um;
    return j;
}

MovePlan move_plan_from_json(const nlohmann::json& j) {
    MovePlan plan;
    for (const auto& pair : j.at("moves"))
        plan.moves.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    plan.switch_off = j.at("switch_off").get<std::vector<int>>();
    plan.sweep_duration_us = j.at("duration_us").get<double>();
    if (j.contains("target_positions_um"))
        plan.target_positions_um = j.at("target_positions_um").get<std::vector<double>>();
    return plan;
}

std::string tone_schedule_to_csv(const ToneSchedule& schedule) {
    std::string out = "time_us,tone_index,freq_MHz,amplitude,phase_rad\n";
    for (std::size_t s = 0; s < schedule.time_us.size(); ++s) {
        for (const ToneTrack& tone : schedule.tones) {
            out += format_double(schedule.time_us[s]);
            out += ',';
            out += std::to_string(tone.tone_index);
            out += ',';
            out += format_double(tone.freq_MHz[s]);
            out += ',';
            out += format_double(tone.amplitude);
            out += ',';
            out += format_double(tone.phase_rad);
            out += '\n';
        }
    }
    return out;
}

}  // namespace atomcav
