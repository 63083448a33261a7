// kg-flow: scenario-driven front end for the current-field analyses.
//
//   kg-flow density      --scenario FILE --out DIR [--t V] [--n-x N]
//   kg-flow trajectories --scenario FILE --out DIR [--seed T,X[,Q]]... [--step V] [--max-steps N]
//   kg-flow validate     --scenario FILE --out DIR
//   kg-flow kernel       --scenario FILE --out DIR [--delta-lo V] [--delta-hi V] [--n N]
//                        [--mode relativistic|nonrelativistic] [--cutoff V]
//
// Exit codes: 0 success, 1 validation failure, 2 usage/input error, 3 domain error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgflow/kgflow.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_usage = 2;
constexpr int exit_domain = 3;

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kgflow::ArgumentError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw kgflow::ArgumentError("failed writing '" + path.string() + "'");
}

kgflow::Seed parse_seed(const std::string& text)
{
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw kgflow::ArgumentError("bad --seed '" + text + "'");
        }
        if (used != item.size()) throw kgflow::ArgumentError("bad --seed '" + text + "'");
        parts.push_back(v);
    }
    if (parts.size() != 2 && parts.size() != 3) throw kgflow::ArgumentError("--seed expects T,X or T,X,Q");
    kgflow::Seed s{{parts[0], parts[1]}, {}};
    if (parts.size() == 3) s.q = parts[2];
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Klein-Gordon current, Newton-Wigner and conditional-current analyses", "kg-flow"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    double t = 0.0;
    int n_x = 201;
    double step = 0.01;
    int max_steps = 2000;
    std::size_t threads = kgflow::default_thread_count();
    std::vector<std::string> seed_text;
    double delta_lo = 0.1, delta_hi = 5.0, cutoff = 50.0;
    int n_kernel = 50;
    std::string mode = "relativistic";

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--scenario", scenario_path, "scenario JSON file")->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* density = app.add_subcommand("density", "j0, j1 and Newton-Wigner density along x");
    common(density);
    density->add_option("--t", t, "time of the slice");
    density->add_option("--n-x", n_x, "number of x samples");

    auto* trajectories = app.add_subcommand("trajectories", "trace current lines");
    common(trajectories);
    trajectories->add_option("--seed", seed_text, "seed event T,X or T,X,Q (Q: condition on NW outcome q)");
    trajectories->add_option("--step", step, "arc-length step");
    trajectories->add_option("--max-steps", max_steps, "step limit per trajectory");

    auto* validate = app.add_subcommand("validate", "run the invariant checks and write a JSON report");
    common(validate);

    auto* kernel = app.add_subcommand("kernel", "equal-time position kernel <x|x'> against its Bessel oracle");
    common(kernel);
    kernel->add_option("--delta-lo", delta_lo, "smallest separation");
    kernel->add_option("--delta-hi", delta_hi, "largest separation");
    kernel->add_option("--n", n_kernel, "number of rows");
    kernel->add_option("--mode", mode, "relativistic or nonrelativistic")
        ->check(CLI::IsMember({"relativistic", "nonrelativistic"}));
    kernel->add_option("--cutoff", cutoff, "momentum cutoff (nonrelativistic)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const kgflow::Scenario sc = kgflow::load_scenario(scenario_path);
        fs::create_directories(out_dir);
        const fs::path out{out_dir};

        if (density->parsed()) {
            write_file(out / (sc.name + "_density.csv"), kgflow::run_density(sc, t, n_x, threads));
        } else if (trajectories->parsed()) {
            std::vector<kgflow::Seed> seeds;
            for (const auto& s : seed_text) seeds.push_back(parse_seed(s));
            const auto run = kgflow::run_trajectories(sc, seeds, step, max_steps, threads);
            write_file(out / (sc.name + "_trajectories.csv"), run.csv);
            write_file(out / (sc.name + "_trajectories.json"), run.summary.dump(2) + "\n");
        } else if (validate->parsed()) {
            const auto rep = kgflow::run_validate(sc, threads);
            write_file(out / (sc.name + "_validate.json"), rep.json.dump(2) + "\n");
            if (!rep.pass) {
                for (const auto& [key, c] : rep.json.at("checks").items())
                    if (!c.at("pass").get<bool>()) std::cerr << "kg-flow: check failed: " << key << "\n";
                return exit_validation;
            }
        } else if (kernel->parsed()) {
            const auto km = mode == "relativistic" ? kgflow::KernelMode::relativistic()
                                                   : kgflow::KernelMode::nonrelativistic(cutoff);
            write_file(out / (sc.name + "_kernel.csv"), kgflow::run_kernel(sc.mass, delta_lo, delta_hi, n_kernel, km));
        }
    } catch (const kgflow::DomainError& e) {
        std::cerr << "kg-flow: " << e.what() << "\n";
        return exit_domain;
    } catch (const std::exception& e) {
        std::cerr << "kg-flow: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_ok;
}
