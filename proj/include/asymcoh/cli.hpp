// cli.hpp — command dispatch for the asymcoh tool
//
// Commands: coherence | oracle | bounds | properties | kd | estimate | study.
// Exit codes: 0 success, 2 validation error, 3 non-convergence (coherence and
// estimate), 4 property-suite failure.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace asymcoh {

struct RunConfig {
    std::string command;
    std::string rho_path;
    std::string k_path;
    std::string k2_path;          // partner observable for bounds / kd
    std::vector<long long> dims;  // composite splitting for coherence
    int restarts = 16;
    int max_iters = 2000;
    double tol = 1e-8;
    long long shots = 1'000'000;
    std::string shots_list;       // study grid, comma-separated
    double delta = 0.01;
    int instances = 200;          // properties instances / study repeats
    int dim = 2;                  // properties dimension
    int dim_ancilla = 2;          // properties ancilla dimension
    long long nu = 1;
    std::uint64_t seed = 0;
    std::string format = "json";  // json | csv
    std::string out;              // empty -> stdout
    bool no_timestamp = false;
};

int run(const RunConfig& config);
int run_cli(int argc, char** argv);

} // namespace asymcoh
