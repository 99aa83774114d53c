// cli.cpp

#include "asymcoh/cli.hpp"

#include "asymcoh/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace asymcoh {

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void emit(const RunConfig& config, const std::string& payload) {
    if (config.out.empty()) {
        std::cout << payload;
        if (payload.empty() || payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(config.out, std::ios::binary);
    if (!out) fail("FileNotFound", "cannot open output file " + config.out);
    out << payload;
    if (payload.empty() || payload.back() != '\n') out << '\n';
}

Json envelope(const RunConfig& config, Json report) {
    Json j{{"command", config.command}, {"seed", config.seed}, {"report", std::move(report)}};
    if (!config.no_timestamp) j["timestamp"] = utc_timestamp();
    return j;
}

void emit_json(const RunConfig& config, Json report) {
    emit(config, envelope(config, std::move(report)).dump(2));
}

std::vector<long long> parse_shot_list(const std::string& text) {
    std::vector<long long> grid;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            grid.push_back(static_cast<long long>(std::stod(token)));
        } catch (const std::exception&) {
            fail("ParseError", "bad shots value: " + token);
        }
    }
    if (grid.empty()) fail("ParseError", "empty shots list");
    return grid;
}

CoherenceOptions coherence_options(const RunConfig& config) {
    CoherenceOptions opts;
    opts.restarts = config.restarts;
    opts.max_iters = config.max_iters;
    opts.tol = config.tol;
    opts.seed = config.seed;
    return opts;
}

int run_coherence(const RunConfig& config) {
    const DensityMatrix rho = load_density_matrix(config.rho_path);
    const GeneratorObservable k = load_generator(config.k_path);
    CoherenceResult result;
    if (config.dims.empty()) {
        result = tc_w_coherence(rho, k, coherence_options(config));
    } else {
        std::vector<Index> dims(config.dims.begin(), config.dims.end());
        result = product_basis_coherence(rho, k, dims, coherence_options(config));
    }
    emit_json(config, to_json(result));
    return result.converged ? 0 : 3;
}

int run_oracle(const RunConfig& config) {
    const DensityMatrix rho = load_density_matrix(config.rho_path);
    const GeneratorObservable k = load_generator(config.k_path);
    Json report{{"oracle_value", tc_w_coherence_exact(rho, k)}};
    if (k.spectral_radius() > 0.0)
        report["oracle_value_normalized"] = normalized_tc_w_coherence_exact(rho, k);
    emit_json(config, std::move(report));
    return 0;
}

int run_bounds(const RunConfig& config) {
    const DensityMatrix rho = load_density_matrix(config.rho_path);
    const GeneratorObservable k = load_generator(config.k_path);
    std::optional<GeneratorObservable> partner;
    if (!config.k2_path.empty()) partner = load_generator(config.k2_path);
    const BoundsReport report = bounds_report(rho, k, partner);
    if (config.format == "csv")
        emit(config, to_csv(report));
    else
        emit_json(config, to_json(report));
    return 0;
}

int run_properties(const RunConfig& config) {
    const PropertyReport report =
        run_property_suite(config.dim, config.instances, config.seed, config.dim_ancilla);
    if (config.format == "table")
        emit(config, to_table(report));
    else
        emit_json(config, to_json(report));
    return report.all_pass() ? 0 : 4;
}

int run_kd(const RunConfig& config) {
    const DensityMatrix rho = load_density_matrix(config.rho_path);
    const GeneratorObservable k = load_generator(config.k_path);
    OrthonormalBasis basis_x =
        config.k2_path.empty()
            ? coherence_argmax_basis(rho.matrix(), k.matrix())
            : load_generator(config.k2_path).eigenbasis();
    const KDTable table = kd_quasiprobability(rho, k.eigenbasis(), basis_x);
    if (config.format == "csv")
        emit(config, to_csv(table));
    else
        emit_json(config, to_json(table));
    return 0;
}

int run_estimate(const RunConfig& config) {
    const DensityMatrix rho = load_density_matrix(config.rho_path);
    const GeneratorObservable k = load_generator(config.k_path);
    EstimationBudget budget;
    budget.shots = config.shots;
    budget.delta = config.delta;
    budget.restarts = config.restarts;
    budget.max_iters = config.max_iters;
    const EstimationRecord record = estimate_tc_w_coherence(rho, k, budget, config.seed);
    emit_json(config, to_json(record));
    return record.iterations >= budget.max_iters ? 3 : 0;
}

int run_study(const RunConfig& config) {
    const DensityMatrix rho = load_density_matrix(config.rho_path);
    const GeneratorObservable k = load_generator(config.k_path);
    const std::vector<long long> grid =
        config.shots_list.empty() ? std::vector<long long>{10'000, 100'000, 1'000'000}
                                  : parse_shot_list(config.shots_list);
    EstimationBudget budget;
    budget.delta = config.delta;
    budget.restarts = config.restarts;
    budget.max_iters = config.max_iters;
    const ConvergenceStudy study =
        convergence_study(rho, k, grid, config.instances, budget, config.seed);
    if (config.format == "csv")
        emit(config, to_csv(study));
    else
        emit_json(config, to_json(study));
    return 0;
}

} // namespace

int run(const RunConfig& config) {
    try {
        if (config.command == "coherence") return run_coherence(config);
        if (config.command == "oracle") return run_oracle(config);
        if (config.command == "bounds") return run_bounds(config);
        if (config.command == "properties") return run_properties(config);
        if (config.command == "kd") return run_kd(config);
        if (config.command == "estimate") return run_estimate(config);
        if (config.command == "study") return run_study(config);
        std::cerr << "asymcoh: unknown command " << config.command << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "asymcoh: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "asymcoh: error: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"TC w-coherence toolkit: coherence optimization, closed-form "
                 "bounds, property suites, and shot-limited estimation"};
    app.require_subcommand(1);
    RunConfig config;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", config.seed, "random seed (default 0)");
        cmd->add_option("--format", config.format, "output format: json | csv | table")
            ->check(CLI::IsMember({"json", "csv", "table"}));
        cmd->add_option("--out", config.out, "write the report to this path");
        cmd->add_flag("--no-timestamp", config.no_timestamp, "omit the timestamp field");
    };
    auto add_inputs = [&](CLI::App* cmd, bool k2 = false) {
        cmd->add_option("--rho", config.rho_path, "density-matrix JSON file")->required();
        cmd->add_option("--k", config.k_path,
                        "generator: JSON file or sigmax|sigmay|sigmaz|diag:v1,v2,...")
            ->required();
        if (k2) cmd->add_option("--k2", config.k2_path, "partner observable (same formats)");
    };
    auto add_optimizer = [&](CLI::App* cmd) {
        cmd->add_option("--restarts", config.restarts, "optimizer restarts");
        cmd->add_option("--max-iters", config.max_iters, "simplex iteration cap");
        cmd->add_option("--tol", config.tol, "optimizer tolerance");
    };

    CLI::App* coherence = app.add_subcommand("coherence", "optimize the TC w-coherence");
    add_inputs(coherence);
    add_optimizer(coherence);
    coherence->add_option("--dims", config.dims,
                          "subsystem dimensions; restricts to product bases");
    add_common(coherence);

    CLI::App* oracle = app.add_subcommand("oracle", "closed-form coherence value");
    add_inputs(oracle);
    add_common(oracle);

    CLI::App* bounds = app.add_subcommand("bounds", "variance/Fisher/KD bound report");
    add_inputs(bounds, true);
    add_common(bounds);

    CLI::App* properties = app.add_subcommand("properties", "run the monotone property suite");
    properties->add_option("--dim", config.dim, "system dimension");
    properties->add_option("--dim-ancilla", config.dim_ancilla, "ancilla dimension");
    properties->add_option("--instances", config.instances, "instances per check");
    add_common(properties);

    CLI::App* kd = app.add_subcommand("kd", "Kirkwood-Dirac quasiprobability table");
    add_inputs(kd, true);
    add_common(kd);

    CLI::App* estimate = app.add_subcommand("estimate", "shot-limited coherence estimate");
    add_inputs(estimate);
    estimate->add_option("--shots", config.shots, "shots per probability");
    estimate->add_option("--delta", config.delta, "finite-difference step");
    estimate->add_option("--restarts", config.restarts, "optimizer restarts");
    estimate->add_option("--max-iters", config.max_iters, "simplex iteration cap");
    add_common(estimate);

    CLI::App* study = app.add_subcommand("study", "error-vs-shots convergence study");
    add_inputs(study);
    study->add_option("--shots", config.shots_list, "comma-separated shot grid");
    study->add_option("--instances", config.instances, "repeats per grid point");
    study->add_option("--delta", config.delta, "finite-difference step");
    study->add_option("--restarts", config.restarts, "optimizer restarts");
    study->add_option("--max-iters", config.max_iters, "simplex iteration cap");
    add_common(study);

    // Context-dependent defaults for the estimation commands.
    estimate->parse_complete_callback([&] {
        if (estimate->count("--restarts") == 0) config.restarts = 2;
        if (estimate->count("--max-iters") == 0) config.max_iters = 150;
    });
    study->parse_complete_callback([&] {
        if (study->count("--restarts") == 0) config.restarts = 2;
        if (study->count("--max-iters") == 0) config.max_iters = 150;
        if (study->count("--instances") == 0) config.instances = 20;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    config.command = app.get_subcommands().front()->get_name();
    return run(config);
}

} // namespace asymcoh
