#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "phiconv/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"phiconv: Phi-convexity toolkit on finite metric clouds"};
    app.require_subcommand(1);

    phiconv::RunOptions options;
    std::string out_path;
    std::string csv_path;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", options.scenario_path, "scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out_opt = run->add_option("--out", out_path, "write the JSON report here");
    auto* csv_opt =
        run->add_option("--csv", csv_path, "write per-sample CSV (genericity tasks)");
    auto* seed_opt = run->add_option("--seed", seed, "override the scenario's seed");
    run->add_flag("--lip-full", options.lip_full,
                  "use the full (N-1)-dimensional lipschitz basis");

    CLI11_PARSE(app, argc, argv);

    if (*out_opt) options.out_path = out_path;
    if (*csv_opt) options.csv_path = csv_path;
    if (*seed_opt) options.seed_override = seed;

    std::string out_text, err_text;
    const int code = phiconv::run_scenario_file(options, out_text, err_text);
    std::cout << out_text;
    std::cerr << err_text;
    return code;
}
