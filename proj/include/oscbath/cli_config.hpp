#pragma once

// Run configuration shared by the CLI and the test harness: JSON parsing for
// model/grid settings, test-function and measure literals, CSV/JSON emission
// helpers, and a stable config hash for provenance.

#include <nlohmann/json_fwd.hpp>

#include "oscbath/dyson_anharmonic.hpp"

namespace oscbath {

struct RunConfig {
    FormFactor ff;
    double beta = 1.0;
    double lambda = 0.1;
    int grid_n = 2000;
    double grid_r_max = 30.0;
    unsigned seed = 42;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    std::string canonical() const;       // stable textual form
    std::string config_hash() const;     // FNV-1a of canonical()
};

// {"c":[re,im], "f":{"kind":"gaussian","sigma":..,"amp":..}} or
// {"a":..,"b":..,"profile":{"kind":"gaussian"|"gaussian_lorentz",...}}.
TestFunction test_function_from_json(const nlohmann::json& j, const RadialGrid& grid);
AnalyticProfile profile_from_json(const nlohmann::json& j);
AtomicMeasure measure_from_json(const nlohmann::json& j);

} // namespace oscbath
