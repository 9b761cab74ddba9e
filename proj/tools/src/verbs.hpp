#pragma once

#include <string>
#include <vector>

#include "json_io.hpp"

namespace gerbeloop::cli {

struct RunConfig {
    std::string verb;
    std::string extension;
    std::string bundle;
    std::string surface;
    std::string rho_path;
    std::string twist_path;
    std::string loop_path;
    std::string loops_config_path;
    std::string json_out;
    unsigned seed = 1;
    double tol = 0.0;
    bool tol_set = false;
    int quad_depth = 8;
};

struct VerbResult {
    Json inputs = Json::object();
    Json results = Json::object();
    double max_error = 0.0;
    bool passed = false;
};

const std::vector<std::string>& verb_names();

VerbResult run_verb(const RunConfig& cfg);

} // namespace gerbeloop::cli
