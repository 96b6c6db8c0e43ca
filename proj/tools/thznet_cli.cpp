// SPDX-License-Identifier: Apache-2.0
//
// thznet: run, compare and sweep simulations from a config file.
#include "thznet/config.hpp"
#include "thznet/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

namespace {

using thznet::experiment::Mode;

int execute(const std::string &path, std::optional<Mode> mode, const std::string &output, unsigned threads)
{
    try {
        auto spec = thznet::config::load_config(path);
        if (!output.empty())
            spec.output = output;
        if (threads)
            spec.threads = threads;
        if (!mode) {
            std::cout << thznet::config::dump(spec);
            return 0;
        }
        const auto result = thznet::experiment::run_experiment(spec, *mode);
        std::cerr << "wrote " << result.files.size() << " files to " << spec.output.string() << '\n';
        return 0;
    } catch (const thznet::config::ValidationError &e) {
        std::cerr << path << ": " << e.what() << '\n';
        return 2;
    } catch (const thznet::config::ParseError &e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Terahertz nanosensor network simulator (LEACH, EBACC, PS-EBCNF, TS-EBCNF)"};
    app.require_subcommand(1);
    app.footer("Any config key can be overridden from the environment: THZNET_ + key upper-cased,\n"
               "dots as underscores, e.g. THZNET_TRAFFIC_PACKET_INTERVAL=0.04.");

    std::string path;
    std::string output;
    unsigned threads = 0;
    std::optional<Mode> mode;

    auto add = [&](const char *name, const char *help, std::optional<Mode> m) {
        auto *sub = app.add_subcommand(name, help);
        sub->add_option("config", path, "config file")->required()->check(CLI::ExistingFile);
        if (m) {
            sub->add_option("-o,--output", output, "output directory (overrides experiment.output)");
            sub->add_option("-j,--threads", threads, "parallel runs (0: all cores)");
        }
        sub->callback([&mode, m] { mode = m; });
    };
    add("run", "run the configured protocols over the configured seeds", Mode::Run);
    add("compare", "run all four protocols over the configured seeds", Mode::Compare);
    add("sweep", "run the declared sweep", Mode::Sweep);
    add("validate", "parse and validate, then print the effective configuration", std::nullopt);

    CLI11_PARSE(app, argc, argv);
    return execute(path, mode, output, threads);
}
