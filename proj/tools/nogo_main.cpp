// nogo: command-line front end for the contrast laboratory.
//
//   nogo contrast --state 0,0,1 --model deterministic --format json
//   nogo verify-hv --model ks --samples 1000000 --seed 7

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nogo/cli.hpp"

namespace {

using nogo::cli::Command;
using nogo::cli::ModelKind;
using nogo::cli::RunConfig;

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "'" + item + "' is not a number");
        }
        if (used != item.size()) throw CLI::ValidationError(what, "'" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.size() != expected)
        throw CLI::ValidationError(what, "expected " + std::to_string(expected) + " comma-separated values");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum vs hidden-variable contrast laboratory for a single spin-1/2"};
    app.require_subcommand(1);

    RunConfig config;
    std::string state_text = "0,0,1";
    std::string grid_text = "8,16";
    std::vector<std::string> model_args;
    std::string format_text = "text";

    const std::map<std::string, Command> commands{{"verify-quantum", Command::verify_quantum},
                                                  {"verify-hv", Command::verify_hv},
                                                  {"contrast", Command::contrast},
                                                  {"lemma-check", Command::lemma_check},
                                                  {"all", Command::all}};
    const std::map<std::string, std::string> help{
        {"verify-quantum", "Quantum contrast, Bloch bound, Born normalization, orthogonality"},
        {"verify-hv", "Hidden-variable contrast, spectrum support and distribution rule"},
        {"contrast", "Side-by-side contrast report and inconsistency verdict"},
        {"lemma-check", "Expectation-lemma rearrangement checks on finite spaces"},
        {"all", "Run every suite"}};

    for (const auto& [name, cmd] : commands) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--state", state_text, "Bloch vector x,y,z")->capture_default_str();
        sub->add_option("--model", model_args, "ks | deterministic | custom-file <path>")
            ->expected(1, 2);
        sub->add_option("--grid", grid_text, "Quadrature grid NP,NA")->capture_default_str();
        sub->add_option("--samples", config.samples, "Monte-Carlo samples per direction")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--seed", config.seed, "RNG seed")->envname("NOGO_SEED")->capture_default_str();
        sub->add_option("--output", config.output, "Output path (default stdout)");
        sub->add_option("--format", format_text, "json | csv | text")
            ->check(CLI::IsMember({"json", "csv", "text"}))
            ->capture_default_str();
        sub->callback([&config, cmd = cmd] { config.command = cmd; });
    }

    try {
        app.parse(argc, argv);

        const auto state = parse_list(state_text, 3, "--state");
        config.state = {state[0], state[1], state[2]};
        const auto grid = parse_list(grid_text, 2, "--grid");
        for (double g : grid)
            if (g != std::floor(g) || std::abs(g) > 1e6)
                throw CLI::ValidationError("--grid", "sizes must be integers");
        config.n_polar = static_cast<int>(grid[0]);
        config.n_azimuthal = static_cast<int>(grid[1]);

        if (!model_args.empty()) {
            const std::string& kind = model_args.front();
            if (kind == "ks" && model_args.size() == 1) {
                config.model = ModelKind::ks;
            } else if (kind == "deterministic" && model_args.size() == 1) {
                config.model = ModelKind::deterministic;
            } else if (kind == "custom-file" && model_args.size() == 2) {
                config.model = ModelKind::custom_file;
                config.custom_path = model_args[1];
            } else {
                throw CLI::ValidationError("--model", "expected ks, deterministic or custom-file <path>");
            }
        }

        config.format = format_text == "json" ? nogo::Format::json
                        : format_text == "csv" ? nogo::Format::csv
                                               : nogo::Format::text;

    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nogo::cli::kExitUsage;
    }

    const nogo::cli::RunResult result = nogo::cli::run(config);
    const std::string bytes = nogo::emit_report(result.report, config.format);

    if (config.output.empty()) {
        std::cout << bytes;
    } else {
        std::ofstream out(config.output, std::ios::binary);
        if (!out || !(out << bytes) || !out.flush()) {
            std::cerr << "error: cannot write " << config.output << "\n";
            return nogo::cli::kExitIo;
        }
    }
    if (result.exit_code == nogo::cli::kExitUsage)
        std::cerr << "error: " << result.report.results.value("error", std::string("invalid input"))
                  << "\n";
    return result.exit_code;
}
