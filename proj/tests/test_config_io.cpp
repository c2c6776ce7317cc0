#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "atomcav/config.hpp"
#include "atomcav/io.hpp"
#include "atomcav/loading.hpp"

using namespace atomcav;

TEST_CASE("double formatting round-trips exactly") {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 5000; ++i) {
        const double v = dist(gen);
        CHECK(parse_double(format_double(v)) == v);
    }
    for (const double v : {0.0, 1.0 / 3.0, 1e-300, 1e300, 2.6, 0.02, -4.26}) {
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK_THROWS_AS(parse_double("12,5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double("abc"), std::invalid_argument);
}

TEST_CASE("spectrum CSV round-trips losslessly") {
    Spectrum spec;
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        spec.detuning_MHz.push_back(-25.0 + 0.5 * i + dist(gen) * 1e-7);
        spec.transmission.push_back(dist(gen));
        spec.sigma.push_back(0.02);
    }
    const Spectrum back = spectrum_from_csv(spectrum_to_csv(spec));
    CHECK(back.detuning_MHz == spec.detuning_MHz);
    CHECK(back.transmission == spec.transmission);
    CHECK(back.sigma == spec.sigma);

    CHECK_THROWS_AS(spectrum_from_csv("bad,header\n1,2\n"), std::invalid_argument);
}

TEST_CASE("atomic writes leave no temporary behind") {
    const auto dir = std::filesystem::temp_directory_path() / "atomcav_io_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "x.csv";
    write_text_atomic(path, "a,b\n1,2\n");
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(dir / "x.csv.tmp"));
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::filesystem::remove_all(dir);
}

TEST_CASE("preset survival reproduces the calibration anchor") {
    const AppConfig config = preset_paper_2024();
    CHECK(config.rearrange.survival == doctest::Approx(0.9564601407553343).epsilon(1e-9));
    CHECK(rearranged_success_probability(20, config.tweezer.n_traps, config.loading.p,
                                         config.rearrange.survival) ==
          doctest::Approx(0.38).epsilon(1e-9));
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("config serialization round-trips through the flat schema") {
    AppConfig config = preset_paper_2024();
    config.cavity.kappa_MHz = 3.1;
    config.loading.p = 0.55;
    config.spectrum.grid_points = 301;
    config.jitter_sigma_um = 0.25;

    const nlohmann::json flat = config_to_json(config);
    CHECK(flat.at("cavity.kappa_MHz").get<double>() == 3.1);
    CHECK(flat.at("noise.sigma").get<double>() == 0.02);

    const AppConfig back = config_from_json(flat);
    CHECK(back.cavity.kappa_MHz == 3.1);
    CHECK(back.loading.p == 0.55);
    CHECK(back.spectrum.grid_points == 301);
    CHECK(back.jitter_sigma_um == 0.25);
    CHECK(config_to_json(back) == flat);
}

TEST_CASE("unknown or ill-typed config keys are rejected by name") {
    nlohmann::json flat = {{"cavity.kappa_MHz", 2.6}, {"cavity.kapa_MHz", 2.6}};
    try {
        config_from_json(flat);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("cavity.kapa_MHz") != std::string::npos);
    }
    CHECK_THROWS_AS(config_from_json({{"loading.p", "high"}}), config_error);
    CHECK_THROWS_AS(config_from_json({{"loading.p", 1.5}}), config_error);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::array()), config_error);
}

TEST_CASE("partial config files overlay the preset") {
    const auto dir = std::filesystem::temp_directory_path() / "atomcav_cfg_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "cfg.json";
    {
        std::ofstream out(path);
        out << R"({"loading.p": 0.5, "tweezer.n_traps": 10})";
    }
    const AppConfig config = load_config_file(path);
    CHECK(config.loading.p == 0.5);
    CHECK(config.tweezer.n_traps == 10);
    CHECK(config.cavity.kappa_MHz == 2.6);  // untouched preset value
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(load_config_file("/nonexistent/path.json"), config_error);
}

TEST_CASE("move plans serialize to JSON and back") {
    MovePlan plan;
    plan.moves = {{0, 1}, {2, 2}, {5, 3}};
    plan.switch_off = {1, 3, 4};
    plan.sweep_duration_us = 800.0;
    plan.target_positions_um = {-4.26, 0.0, 4.26};
    const nlohmann::json j = move_plan_to_json(plan);
    CHECK(j.at("duration_us").get<double>() == 800.0);
    const MovePlan back = move_plan_from_json(j);
    CHECK(back.moves == plan.moves);
    CHECK(back.switch_off == plan.switch_off);
    CHECK(back.sweep_duration_us == plan.sweep_duration_us);
    CHECK(back.target_positions_um == plan.target_positions_um);
}

TEST_CASE("tone schedule CSV carries one row per sample and tone") {
    ToneSchedule sched;
    sched.time_us = {0.0, 1.0};
    ToneTrack t;
    t.tone_index = 4;
    t.freq_MHz = {99.0, 100.0};
    t.amplitude = 0.5;
    t.phase_rad = 0.25;
    sched.tones.push_back(t);
    const std::string csv = tone_schedule_to_csv(sched);
    CHECK(csv == "time_us,tone_index,freq_MHz,amplitude,phase_rad\n"
                 "0,4,99,0.5,0.25\n"
                 "1,4,100,0.5,0.25\n");
}
